// Acceptance suite: one verdict line per criterion.
//
//   acceptance           run all nine criteria
//   acceptance <k>       run criterion k only
//
// Every tolerance is pinned in code below; each criterion also enforces its
// wall-clock budget.  Exit status is nonzero if any executed criterion fails.

#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>

#include "beurlab/beurlab.hpp"

using namespace beurlab;
namespace fs = std::filesystem;

namespace {

struct Criterion {
    bool pass = true;
    std::ostringstream detail;

    void require(bool ok, const std::string& what) {
        if (!ok) {
            pass = false;
            detail << " FAILED[" << what << "]";
        }
    }
    void note(const std::string& s) { detail << " " << s; }
};

double lsq_slope(const std::vector<double>& x, const std::vector<double>& y) {
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    const int m = static_cast<int>(x.size());
    for (int i = 0; i < m; ++i) {
        sx += x[i];
        sy += y[i];
        sxx += x[i] * x[i];
        sxy += x[i] * y[i];
    }
    return (m * sxy - sx * sy) / (m * sxx - sx * sx);
}

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.3g", v);
    return buf;
}

// 1. Identity suite (n = 128 torus): fundamental relation, isometry,
//    S*S = I, polarization; runtime < 5 s.
void criterion_1(Criterion& c) {
    const GridSpec torus = make_torus(128);
    double worst_fund = 0, worst_iso = 0, worst_inv = 0, worst_polar = 0;
    for (int t = 0; t < 3; ++t) {
        ComplexField h = random_band_limited(torus, 31, 100 + t);
        worst_fund = std::max(worst_fund,
                              lp_norm(beurling(d_bar(h), Backend::spectral) - d(h), 2.0) /
                                  gradient_l2(h));
        ComplexField v = random_field_mean_zero(torus, 200 + t);
        const double nv = lp_norm(v, 2.0);
        worst_iso =
            std::max(worst_iso, std::abs(lp_norm(beurling(v, Backend::spectral), 2.0) - nv) / nv);
        worst_inv = std::max(
            worst_inv,
            lp_norm(beurling_adjoint(beurling(v, Backend::spectral), Backend::spectral) - v, 2.0) /
                nv);
        ComplexField a = random_field(torus, 300 + t), b = random_field(torus, 400 + t);
        worst_polar = std::max(worst_polar,
                               max_abs(polarize(a, b) - a * conj(b)) /
                                   ((max_abs(a) + max_abs(b)) * (max_abs(a) + max_abs(b))));
    }
    c.require(worst_fund <= 1e-10, "fundamental relation");
    c.require(worst_iso <= 1e-12, "isometry");
    c.require(worst_inv <= 1e-10, "S*S = I");
    c.require(worst_polar <= 1e-13, "polarization");
    c.note("fund=" + fmt(worst_fund) + " iso=" + fmt(worst_iso) + " inv=" + fmt(worst_inv) +
           " polar=" + fmt(worst_polar));
}

// 2. Jacobian identity over 20 random band-limited maps; runtime < 10 s.
void criterion_2(Criterion& c) {
    const GridSpec torus = make_torus(128);
    double worst_jac = 0, worst_int = 0;
    for (int t = 0; t < 20; ++t) {
        ComplexField h = random_band_limited(torus, 31, 500 + t);
        VectorField2 u = VectorField2::from_packed(h);
        ComplexField ju = jacobian(u);
        ComplexField jc = jacobian_complex(d_bar(h));
        const double gmax = gradient_max(h), g2 = gradient_l2(h);
        worst_jac = std::max(worst_jac, max_abs(ju - jc) / (gmax * gmax));
        worst_int = std::max(worst_int, std::abs(integrate(ju)) / (g2 * g2));
    }
    c.require(worst_jac <= 1e-8, "pointwise identity");
    c.require(worst_int <= 1e-10, "integral zero");
    c.note("pointwise=" + fmt(worst_jac) + " integral=" + fmt(worst_int));
}

// 3. Quadrature convergence on the unit-disc indicator and backend
//    agreement; runtime < 60 s.
void criterion_3(Criterion& c) {
    std::vector<double> log_n, log_err;
    for (int n : {64, 128, 256}) {
        const GridSpec g = make_centered_square(n, 4.0);
        ComplexField ind = ComplexField::sample(g, [](Complex z) {
            return Complex(std::abs(z) < 1.0 ? 1.0 : 0.0, 0.0);
        });
        ComplexField s = beurling(ind, Backend::quadrature_fft);
        double interior = 0.0, exterior = 0.0;
        for (int iy = 0; iy < n; ++iy)
            for (int ix = 0; ix < n; ++ix) {
                const Complex z = g.node(ix, iy);
                const double az = std::abs(z);
                if (az <= 0.7) interior = std::max(interior, std::abs(s[g.index(ix, iy)]));
                if (az >= 1.3 && az <= 1.9)
                    exterior =
                        std::max(exterior, std::abs(s[g.index(ix, iy)] + 1.0 / (z * z)));
            }
        log_n.push_back(std::log(static_cast<double>(n)));
        log_err.push_back(std::log(interior));
        if (n == 256) c.require(exterior <= 0.01, "exterior -1/z^2 match");
    }
    const double order = -lsq_slope(log_n, log_err);
    c.require(order >= 0.8, "interior convergence order");
    c.note("order=" + fmt(order));

    for (int n : {64, 128}) {
        const GridSpec g = make_centered_square(n, 2.0);
        ComplexField v = random_field(g, 600 + n);
        ComplexField dir = beurling(v, Backend::quadrature_direct);
        ComplexField fft = beurling(v, Backend::quadrature_fft);
        const double rel = max_abs(dir - fft) / max_abs(dir);
        c.require(rel <= 1e-12, "backend agreement n=" + std::to_string(n));
        if (n == 128) c.note("agreement=" + fmt(rel));
    }
}

// 4. Discrete oscillation-witness identity on every cube of a depth-4 tree
//    for every corpus symbol at n = 128; runtime < 30 s.
void criterion_4(Criterion& c) {
    const GridSpec g = make_centered_square(128, 2.0);
    const DyadicRoot root = DyadicRoot::whole_grid(g);
    double worst = 0.0;
    for (const std::string name :
         {"constant", "step", "gaussian", "bmo_log", "holder_half", "random"}) {
        ComplexField b = corpus_symbol(name, g, 11);
        double symbol_worst = 0.0;
        for (int level = 0; level <= 4; ++level)
            for (int jy = 0; jy < (1 << level); ++jy)
                for (int jx = 0; jx < (1 << level); ++jx)
                    symbol_worst = std::max(
                        symbol_worst, crw_identity_residual(b, root, DyadicCube{level, jx, jy}));
        c.require(symbol_worst <= 1e-10, "witness identity " + name);
        worst = std::max(worst, symbol_worst);
    }
    c.note("worst=" + fmt(worst));
}

// 5. Sparse suite at n = 64: exact major subsets, Carleson packing,
//    pointwise domination, dual weights, lp ratios; runtime < 60 s.
void criterion_5(Criterion& c) {
    const GridSpec g = make_centered_square(64, 2.0);
    const DyadicRoot root = DyadicRoot::whole_grid(g);
    for (const std::string name :
         {"constant", "step", "gaussian", "bmo_log", "holder_half", "random"}) {
        ComplexField b = corpus_symbol(name, g, 13);
        SparseFamily fam = sparse_dominate(b, root, 2.0);
        std::vector<std::uint8_t> claimed(g.count(), 0);
        bool disjoint = true;
        bool majors = true;
        for (size_t i = 0; i < fam.nodes.size(); ++i) {
            const CubeRect rc = cube_cells(root, fam.nodes[i].cube);
            long idx = 0;
            for (int iy = rc.y0; iy < rc.y0 + rc.m; ++iy)
                for (int ix = rc.x0; ix < rc.x0 + rc.m; ++ix, ++idx)
                    if (fam.nodes[i].mask[idx]) {
                        if (claimed[g.index(ix, iy)]) disjoint = false;
                        claimed[g.index(ix, iy)] = 1;
                    }
            if (2 * fam.nodes[i].major_cells < fam.cube_cell_count(i)) majors = false;
        }
        std::vector<long> subtree(fam.nodes.size());
        for (size_t i = 0; i < fam.nodes.size(); ++i) subtree[i] = fam.cube_cell_count(i);
        for (size_t i = fam.nodes.size(); i-- > 0;)
            if (fam.nodes[i].parent >= 0) subtree[fam.nodes[i].parent] += subtree[i];
        bool carleson = true;
        for (size_t i = 0; i < fam.nodes.size(); ++i)
            if (static_cast<double>(subtree[i]) > 2.0 * fam.cube_cell_count(i)) carleson = false;
        DominationCheck dom = verify_domination(b, fam);
        c.require(disjoint, name + " disjoint majors");
        c.require(majors, name + " |E| >= |Q|/2");
        c.require(carleson, name + " Carleson <= 2");
        c.require(dom.ok && dom.c_emp <= 9.0, name + " domination C_emp <= 9");
        if (name != "constant") {
            std::vector<double> lambda = dual_weights(fam, 4.0);
            KahanSum s1, s2, sA;
            for (size_t i = 0; i < fam.nodes.size(); ++i) {
                s1.add(fam.cube_area(i) * std::pow(lambda[i], 4.0 / 3.0));
                s2.add(fam.cube_area(i) * lambda[i] * fam.nodes[i].osc);
                sA.add(fam.cube_area(i) * std::pow(fam.nodes[i].osc, 4.0));
            }
            const double a14 = std::pow(sA.value(), 0.25);
            c.require(std::abs(s1.value() - 1.0) <= 1e-12, name + " dual normalization");
            c.require(std::abs(s2.value() - a14) <= 1e-12 * a14, name + " dual pairing");
        }
    }
    for (double p : {4.0 / 3.0, 2.0, 4.0}) {
        const double lower = std::pow(2.0, -1.0 / p);
        double lo = 1e300, hi = 0.0;
        for (int t = 0; t < 100; ++t) {
            ComplexField b = corpus_symbol("random", g, 700 + t);
            SparseFamily fam = sparse_dominate(b, root, 2.0);
            Rng rng(mix_seed(17, t));
            std::vector<double> lambda(fam.nodes.size());
            for (double& l : lambda) l = rng.uniform();
            const double ratio = sparse_lp_ratio(fam, lambda, p);
            lo = std::min(lo, ratio);
            hi = std::max(hi, ratio);
        }
        c.require(lo >= lower - 1e-12 && hi <= 10.0, "lp ratio bounds p=" + fmt(p));
    }
}

// 6. Random-sign orthogonality: Monte Carlo mean matches the target within
//    3 standard errors at M = 256 and the error scale decays like M^{-1/2}
//    over M in {16, 64, 256, 1024}; n = 128, FFT backend; runtime < 5 min.
void criterion_6(Criterion& c) {
    const GridSpec g = make_centered_square(128, 2.0);
    ComplexField b = corpus_symbol("gaussian", g);
    const DyadicRoot root = DyadicRoot::whole_grid(g);
    std::vector<double> log_m, log_se;
    for (int M : {16, 64, 256, 1024}) {
        PipelineReport rep =
            lr_lower_pipeline(b, root, 4.0, 2.0, M, 23, Backend::quadrature_fft);
        log_m.push_back(std::log(static_cast<double>(M)));
        log_se.push_back(std::log(rep.mc_stderr));
        const double err = std::abs(rep.mc_mean - Complex(rep.target, 0.0));
        if (M == 256) {
            c.require(err <= 3.0 * rep.mc_stderr, "mc mean within 3 stderr at M=256");
            c.note("err/stderr=" + fmt(err / rep.mc_stderr));
        }
    }
    const double slope = lsq_slope(log_m, log_se);
    c.require(std::abs(slope + 0.5) <= 0.15, "stderr slope -1/2");
    c.note("slope=" + fmt(slope));
}

// 7. Regime scan: constant symbols vanish exactly, matched-Hoelder bounds
//    are grid-stable, beyond-p* bounds diverge at the predicted rate, and
//    the p > q sandwich holds with finite logged constants; runtime < 15 min.
void criterion_7(Criterion& c) {
    const fs::path out = fs::temp_directory_path() / "beurlab_acceptance_regimes";
    fs::remove_all(out);
    ExperimentConfig cfg = resolve_config("regimes", json::object());
    const int code = run_regimes(cfg, out);
    c.require(code == kExitOk, "regime scan exit code");
    std::ifstream is(out / "report.json");
    json rep;
    is >> rep;
    for (const auto& row : rep["checks"]) {
        const bool pass = row["pass"].get<bool>();
        c.require(pass, row["check"].get<std::string>());
        if (row.contains("detail") && row["detail"].contains("K"))
            c.note("K=" + fmt(row["detail"]["K"].get<double>()) +
                   " K'=" + fmt(row["detail"]["K_envelope"].get<double>()));
    }
}

// 8. Scaling demonstration: exact homogeneous ratio, lambda^{-2}
//    nonhomogeneous decay; runtime < 1 min.
void criterion_8(Criterion& c) {
    const fs::path out = fs::temp_directory_path() / "beurlab_acceptance_scaling";
    fs::remove_all(out);
    ExperimentConfig cfg = resolve_config("scaling", json::object());
    const int code = run_scaling(cfg, out);
    c.require(code == kExitOk, "scaling exit code");
    std::ifstream is(out / "report.json");
    json rep;
    is >> rep;
    const double drift = rep["homogeneous_drift"].get<double>();
    const double slope = rep["nonhomogeneous_slope"].get<double>();
    c.require(drift <= 0.01, "homogeneous drift <= 1%");
    c.require(std::abs(slope + 2.0) <= 0.1, "slope -2 +- 0.1");
    c.note("drift=" + fmt(drift) + " slope=" + fmt(slope));
}

// 9. Determinism: the same experiment run twice through the CLI binary under
//    different thread-count hints produces byte-identical outputs.
void criterion_9(Criterion& c) {
    const fs::path base = fs::temp_directory_path() / "beurlab_acceptance_determinism";
    fs::remove_all(base);
    fs::create_directories(base);
    auto slurp = [](const fs::path& p) {
        std::ifstream is(p, std::ios::binary);
        std::stringstream ss;
        ss << is.rdbuf();
        return ss.str();
    };
    struct Job {
        std::string experiment;
        std::string args;
        std::vector<std::string> files;
    };
    const std::vector<Job> jobs = {
        {"identities", "--set grid.n=32", {"report.json", "identities.csv"}},
        {"sparse", "--set grid.n=32 --set samples=10", {"report.json"}},
        {"lowerbound", "--set grid.n=32 --set samples=8",
         {"report.json", "lowerbound_samples.csv"}},
    };
    for (const Job& job : jobs) {
        const fs::path d1 = base / (job.experiment + "_a");
        const fs::path d2 = base / (job.experiment + "_b");
        const std::string cmd1 = "OMP_NUM_THREADS=1 " + std::string(LAB_BINARY) + " " +
                                 job.experiment + " " + job.args + " --out " + d1.string() +
                                 " > /dev/null 2>&1";
        const std::string cmd2 = "OMP_NUM_THREADS=8 " + std::string(LAB_BINARY) + " " +
                                 job.experiment + " " + job.args + " --out " + d2.string() +
                                 " > /dev/null 2>&1";
        c.require(std::system(cmd1.c_str()) == 0, job.experiment + " run 1");
        c.require(std::system(cmd2.c_str()) == 0, job.experiment + " run 2");
        for (const std::string& f : job.files)
            c.require(slurp(d1 / f) == slurp(d2 / f) && !slurp(d1 / f).empty(),
                      job.experiment + "/" + f + " byte-identical");
    }
}

struct Entry {
    int number;
    const char* name;
    double budget_seconds;
    std::function<void(Criterion&)> fn;
};

} // namespace

int main(int argc, char** argv) {
    const std::vector<Entry> entries = {
        {1, "identity suite", 5.0, criterion_1},
        {2, "jacobian identity", 10.0, criterion_2},
        {3, "quadrature convergence", 60.0, criterion_3},
        {4, "oscillation-witness identity", 30.0, criterion_4},
        {5, "sparse suite", 60.0, criterion_5},
        {6, "random-sign orthogonality", 300.0, criterion_6},
        {7, "regime scan", 900.0, criterion_7},
        {8, "scaling demonstration", 60.0, criterion_8},
        {9, "determinism", 120.0, criterion_9},
    };
    int only = 0;
    if (argc > 1) only = std::atoi(argv[1]);

    bool all_pass = true;
    for (const Entry& e : entries) {
        if (only != 0 && e.number != only) continue;
        Criterion c;
        const auto t0 = std::chrono::steady_clock::now();
        e.fn(c);
        const double seconds =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        if (seconds > e.budget_seconds) {
            c.pass = false;
            c.detail << " FAILED[over budget " << e.budget_seconds << "s]";
        }
        std::cout << "CRITERION " << e.number << " (" << e.name << "): "
                  << (c.pass ? "PASS" : "FAIL") << c.detail.str() << " [" << fmt(seconds)
                  << "s]" << std::endl;
        all_pass = all_pass && c.pass;
    }
    return all_pass ? 0 : 1;
}
