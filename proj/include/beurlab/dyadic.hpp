#pragma once

// Dyadic cubes and the Calderon-Zygmund stopping-time sparse decomposition.
//
// sparse_dominate runs the standard stopping time at threshold Lambda
// (default 2): starting from the root, the children of a selected cube Q are
// the maximal dyadic R strictly inside Q whose average of |b - <b>_Q|
// exceeds Lambda * a_Q, where a_Q is the mean oscillation of Q itself.  The
// selected cubes carry major subsets E(Q) = Q minus its stopping children,
// with |E(Q)| >= (1 - 1/Lambda)|Q| by construction, pairwise disjoint across
// the family.  Recursion bottoms out at single cells, whose oscillation is
// zero.  All measure bookkeeping is exact integer cell counting.

#include <algorithm>
#include <numeric>

#include <json.hpp>

#include "beurlab/field_io.hpp"
#include "beurlab/oscillation.hpp"

namespace beurlab {

using json = nlohmann::json;

/// Root of a dyadic tree: a cell-aligned square inside a (bounded) grid.
struct DyadicRoot {
    GridSpec grid;
    CubeRect rect;

    DyadicRoot(const GridSpec& g, const CubeRect& r) : grid(g), rect(r) {
        if (!is_power_of_two(r.m)) throw InvalidArgument("dyadic root side must be a power of two");
        if (r.x0 < 0 || r.y0 < 0 || r.x0 + r.m > g.n || r.y0 + r.m > g.n)
            throw InvalidArgument("dyadic root does not fit inside the grid");
    }

    static DyadicRoot whole_grid(const GridSpec& g) { return DyadicRoot(g, CubeRect{0, 0, g.n}); }

    int max_level() const {
        int lvl = 0;
        for (int m = rect.m; m > 1; m /= 2) ++lvl;
        return lvl;
    }
    double side(int level) const { return grid.spacing() * (rect.m >> level); }
    double area(int level) const { return side(level) * side(level); }
};

/// One cube of the tree: side = root side / 2^level, index within the root.
struct DyadicCube {
    int level = 0;
    int jx = 0, jy = 0;

    bool operator==(const DyadicCube&) const = default;
};

inline CubeRect cube_cells(const DyadicRoot& root, const DyadicCube& c) {
    if (c.level < 0 || c.level > root.max_level())
        throw InvalidArgument("dyadic cube level out of range");
    const int m = root.rect.m >> c.level;
    const int side_count = root.rect.m / m;
    if (c.jx < 0 || c.jy < 0 || c.jx >= side_count || c.jy >= side_count)
        throw InvalidArgument("dyadic cube index out of range");
    return CubeRect{root.rect.x0 + c.jx * m, root.rect.y0 + c.jy * m, m};
}

/// Physical center of a cube.
inline Complex cube_center(const DyadicRoot& root, const DyadicCube& c) {
    const CubeRect r = cube_cells(root, c);
    const double h = root.grid.spacing();
    return root.grid.origin + Complex(h * (r.x0 + 0.5 * r.m), h * (r.y0 + 0.5 * r.m));
}

/// Discrete mean and mean oscillation of b over a cube (cell-exact).
inline std::pair<Complex, double> mean_and_oscillation(const ComplexField& b,
                                                       const DyadicRoot& root,
                                                       const DyadicCube& cube) {
    const CubeRect r = cube_cells(root, cube);
    KahanSumComplex sum;
    for (int iy = r.y0; iy < r.y0 + r.m; ++iy)
        for (int ix = r.x0; ix < r.x0 + r.m; ++ix) sum.add(b[b.grid().index(ix, iy)]);
    const Complex m = sum.value() / static_cast<double>(r.cells());
    return {m, cube_oscillation(b, r, m)};
}

/// A selected cube with its oscillation, major-subset mask and dual weight.
struct SparseNode {
    DyadicCube cube;
    Complex mean{0.0, 0.0};
    double osc = 0.0;                 ///< a_Q
    std::vector<std::uint8_t> mask;   ///< cube-local cells of E(Q), row-major
    long major_cells = 0;             ///< |E(Q)| in cells
    double lambda = 0.0;              ///< dual weight, set by dual_weights
    int parent = -1;                  ///< index of the selected parent, -1 at root
};

struct SparseFamily {
    DyadicRoot root;
    double Lambda = 2.0;
    std::vector<SparseNode> nodes;    ///< canonical order: (level, jy, jx)

    long cube_cell_count(size_t i) const {
        const int m = root.rect.m >> nodes[i].cube.level;
        return static_cast<long>(m) * m;
    }
    double cube_area(size_t i) const { return root.area(nodes[i].cube.level); }
};

namespace dyadic_detail {

/// Prefix sums of |b - c| over a cube, for O(1) descendant queries.
class LocalOscTable {
public:
    LocalOscTable(const ComplexField& b, const CubeRect& r, Complex c)
        : m_(r.m), table_((m_ + 1) * (m_ + 1), 0.0) {
        for (int iy = 0; iy < m_; ++iy) {
            double row = 0.0;
            for (int ix = 0; ix < m_; ++ix) {
                row += std::abs(b[b.grid().index(r.x0 + ix, r.y0 + iy)] - c);
                table_[at(ix + 1, iy + 1)] = table_[at(ix + 1, iy)] + row;
            }
        }
    }
    /// Sum over the sub-rectangle given in cube-local cell coordinates.
    double sum(int x0, int y0, int m) const {
        return table_[at(x0 + m, y0 + m)] - table_[at(x0, y0 + m)] - table_[at(x0 + m, y0)] +
               table_[at(x0, y0)];
    }

private:
    long at(int x, int y) const { return static_cast<long>(y) * (m_ + 1) + x; }
    int m_;
    std::vector<double> table_;
};

struct Builder {
    const ComplexField& b;
    const DyadicRoot& root;
    double Lambda;
    PrefixSums prefix;
    std::vector<SparseNode> nodes;

    Builder(const ComplexField& bb, const DyadicRoot& rr, double ll)
        : b(bb), root(rr), Lambda(ll), prefix(bb) {}

    void process(const DyadicCube& cube, int parent_index) {
        const CubeRect rect = cube_cells(root, cube);
        const Complex cmean = prefix.rect_mean(rect);
        SparseNode node;
        node.cube = cube;
        node.mean = cmean;
        node.parent = parent_index;
        node.mask.assign(rect.cells(), 1);

        std::vector<DyadicCube> stops;
        if (rect.m > 1) {
            const LocalOscTable osc(b, rect, cmean);
            node.osc = osc.sum(0, 0, rect.m) / static_cast<double>(rect.cells());
            if (node.osc > 0.0) {
                const double threshold = Lambda * node.osc;
                // maximal dyadic R strictly inside the cube with
                // average of |b - <b>_Q| over R above the threshold
                scan_children(osc, cube, rect, 0, 0, rect.m, threshold, stops);
            }
        }
        for (const DyadicCube& r : stops) {
            const CubeRect rc = cube_cells(root, r);
            for (int iy = rc.y0 - rect.y0; iy < rc.y0 - rect.y0 + rc.m; ++iy)
                for (int ix = rc.x0 - rect.x0; ix < rc.x0 - rect.x0 + rc.m; ++ix)
                    node.mask[static_cast<long>(iy) * rect.m + ix] = 0;
        }
        node.major_cells =
            std::count(node.mask.begin(), node.mask.end(), static_cast<std::uint8_t>(1));
        const int my_index = static_cast<int>(nodes.size());
        nodes.push_back(std::move(node));
        for (const DyadicCube& r : stops) process(r, my_index);
    }

    static int int_log2(int v) {
        int l = 0;
        while (v > 1) {
            v >>= 1;
            ++l;
        }
        return l;
    }

    void scan_children(const LocalOscTable& osc, const DyadicCube& cube, const CubeRect& rect,
                       int lx, int ly, int m, double threshold, std::vector<DyadicCube>& stops) {
        const int half = m / 2;
        const int child_level = int_log2(root.rect.m) - int_log2(half);
        const int scale = rect.m / half;
        for (int cy = 0; cy < 2; ++cy) {
            for (int cx = 0; cx < 2; ++cx) {
                const int x = lx + cx * half, y = ly + cy * half;
                const double avg = osc.sum(x, y, half) / (static_cast<double>(half) * half);
                if (avg > threshold) {
                    stops.push_back(DyadicCube{child_level,
                                               cube.jx * scale + x / half,
                                               cube.jy * scale + y / half});
                } else if (half > 1) {
                    scan_children(osc, cube, rect, x, y, half, threshold, stops);
                }
            }
        }
    }
};

} // namespace dyadic_detail

/// Stopping-time sparse decomposition of b on the root cube.  Always
/// terminates on a finite grid; a constant symbol yields the singleton
/// family {Q0} with E(Q0) = Q0.
inline SparseFamily sparse_dominate(const ComplexField& b, const DyadicRoot& root,
                                    double Lambda = 2.0) {
    if (!(b.grid() == root.grid)) throw GridMismatch("symbol and root live on different grids");
    if (!(Lambda >= 2.0)) throw InvalidArgument("sparse_dominate requires Lambda >= 2");
    dyadic_detail::Builder builder(b, root, Lambda);
    builder.process(DyadicCube{0, 0, 0}, -1);

    SparseFamily family{root, Lambda, std::move(builder.nodes)};
    // canonical (level, index) order, with parent links remapped
    std::vector<int> order(family.nodes.size());
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](int a, int c) {
        const DyadicCube &x = family.nodes[a].cube, &y = family.nodes[c].cube;
        return std::tie(x.level, x.jy, x.jx) < std::tie(y.level, y.jy, y.jx);
    });
    std::vector<int> inverse(order.size());
    for (size_t i = 0; i < order.size(); ++i) inverse[order[i]] = static_cast<int>(i);
    std::vector<SparseNode> sorted;
    sorted.reserve(family.nodes.size());
    for (int idx : order) {
        SparseNode n = std::move(family.nodes[idx]);
        if (n.parent >= 0) n.parent = inverse[n.parent];
        sorted.push_back(std::move(n));
    }
    family.nodes = std::move(sorted);
    return family;
}

struct DominationCheck {
    bool ok = false;
    double c_emp = 0.0;    ///< max over cells of LHS/RHS (0/0 counts as 0)
    double bound = 9.0;    ///< the constant the check is run against
};

/// Verify the pointwise domination
///   1_{Q0}(x) |b(x) - <b>_{Q0}|  <=  C * sum_{Q} 1_Q(x) a_Q
/// by brute force over grid cells.  C = 2^{d+1} + 1 = 9 for Lambda = 2.
inline DominationCheck verify_domination(const ComplexField& b, const SparseFamily& S) {
    if (!(b.grid() == S.root.grid)) throw GridMismatch("symbol and family grids differ");
    const CubeRect r0 = S.root.rect;
    std::vector<double> rhs(static_cast<long>(r0.m) * r0.m, 0.0);
    for (const SparseNode& node : S.nodes) {
        const CubeRect rc = cube_cells(S.root, node.cube);
        for (int iy = rc.y0; iy < rc.y0 + rc.m; ++iy)
            for (int ix = rc.x0; ix < rc.x0 + rc.m; ++ix)
                rhs[static_cast<long>(iy - r0.y0) * r0.m + (ix - r0.x0)] += node.osc;
    }
    const Complex root_mean = S.nodes.empty() ? Complex{0, 0} : [&] {
        for (const SparseNode& n : S.nodes)
            if (n.cube.level == 0) return n.mean;
        return Complex{0, 0};
    }();
    DominationCheck check;
    check.bound = S.Lambda == 2.0 ? 9.0 : 4.0 * S.Lambda + 1.0;
    double worst = 0.0;
    bool infinite = false;
    for (int iy = 0; iy < r0.m; ++iy) {
        for (int ix = 0; ix < r0.m; ++ix) {
            const double lhs =
                std::abs(b[b.grid().index(r0.x0 + ix, r0.y0 + iy)] - root_mean);
            const double den = rhs[static_cast<long>(iy) * r0.m + ix];
            if (den == 0.0) {
                if (lhs > 0.0) infinite = true;
            } else {
                worst = std::max(worst, lhs / den);
            }
        }
    }
    check.c_emp = infinite ? std::numeric_limits<double>::infinity() : worst;
    check.ok = !infinite && check.c_emp <= check.bound;
    return check;
}

/// ||sum lambda_Q 1_Q||_p / (sum lambda_Q^p |Q|)^{1/p}; equals 1 for a
/// disjoint family, and is bounded below by 2^{-1/p} via the major subsets.
inline double sparse_lp_ratio(const SparseFamily& S, const std::vector<double>& lambda,
                              double p) {
    if (lambda.size() != S.nodes.size())
        throw InvalidArgument("sparse_lp_ratio: one weight per cube required");
    for (double l : lambda)
        if (!(l >= 0.0)) throw InvalidArgument("sparse_lp_ratio: weights must be >= 0");
    std::vector<Complex> acc(S.root.grid.count(), Complex{0.0, 0.0});
    for (size_t i = 0; i < S.nodes.size(); ++i) {
        const CubeRect rc = cube_cells(S.root, S.nodes[i].cube);
        for (int iy = rc.y0; iy < rc.y0 + rc.m; ++iy)
            for (int ix = rc.x0; ix < rc.x0 + rc.m; ++ix)
                acc[S.root.grid.index(ix, iy)] += lambda[i];
    }
    const double num = lp_norm(ComplexField(S.root.grid, std::move(acc)), p);
    KahanSum den;
    for (size_t i = 0; i < S.nodes.size(); ++i)
        den.add(std::pow(lambda[i], p) * S.cube_area(i));
    const double d = std::pow(den.value(), 1.0 / p);
    if (d == 0.0) return 0.0;
    return num / d;
}

/// Dualizing sequence for exponent r: lambda_Q = a_Q^{r/r'} A^{-1/r'} with
/// A = sum |Q| a_Q^r, normalized so that sum |Q| lambda_Q^{r'} = 1 and
/// sum |Q| lambda_Q a_Q = A^{1/r}.  Weights are stored into the family and
/// returned.  Throws AllZeroOscillation when every a_Q vanishes.
inline std::vector<double> dual_weights(SparseFamily& S, double r) {
    if (!(r > 1.0) || std::isinf(r)) throw ExponentMismatch("dual_weights: r must lie in (1, infinity)");
    const double r_dual = r / (r - 1.0);
    KahanSum acc;
    for (size_t i = 0; i < S.nodes.size(); ++i)
        acc.add(S.cube_area(i) * std::pow(S.nodes[i].osc, r));
    const double A = acc.value();
    if (A == 0.0)
        throw AllZeroOscillation("every cube oscillation vanishes: the symbol is constant");
    std::vector<double> lambda(S.nodes.size());
    const double scale = std::pow(A, -1.0 / r_dual);
    for (size_t i = 0; i < S.nodes.size(); ++i) {
        lambda[i] = std::pow(S.nodes[i].osc, r / r_dual) * scale;
        S.nodes[i].lambda = lambda[i];
    }
    return lambda;
}

/// JSON view of a family; masks are optionally dumped as run-length-encoded
/// cube-local cell lists [start, length, ...].
inline json sparse_family_to_json(const SparseFamily& S, bool include_masks = false) {
    json j;
    j["lambda_threshold"] = S.Lambda;
    j["root"] = {{"x0", S.root.rect.x0},
                 {"y0", S.root.rect.y0},
                 {"cells", S.root.rect.m},
                 {"side", S.root.side(0)}};
    json cubes = json::array();
    for (size_t i = 0; i < S.nodes.size(); ++i) {
        const SparseNode& n = S.nodes[i];
        json c;
        c["level"] = n.cube.level;
        c["index"] = {n.cube.jx, n.cube.jy};
        c["a_Q"] = n.osc;
        c["lambda_Q"] = n.lambda;
        c["major_fraction"] =
            static_cast<double>(n.major_cells) / static_cast<double>(S.cube_cell_count(i));
        if (include_masks) {
            json rle = json::array();
            long run_start = -1;
            for (long k = 0; k <= static_cast<long>(n.mask.size()); ++k) {
                const bool on = k < static_cast<long>(n.mask.size()) && n.mask[k];
                if (on && run_start < 0) run_start = k;
                if (!on && run_start >= 0) {
                    rle.push_back(run_start);
                    rle.push_back(k - run_start);
                    run_start = -1;
                }
            }
            c["major_rle"] = std::move(rle);
        }
        cubes.push_back(std::move(c));
    }
    j["cubes"] = std::move(cubes);
    return j;
}

} // namespace beurlab
