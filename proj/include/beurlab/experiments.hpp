#pragma once

// Experiment orchestration: configuration parsing/validation and the six
// experiment suites behind the `lab` command line tool.
//
// Configs are single JSON documents; unknown keys are rejected anywhere.
// Every report embeds the fully resolved config and the constant choices the
// code made (stopping threshold, tolerances).  Runs are single-threaded and
// deterministic: identical config + seed produce byte-identical outputs.
//
// Exit-code contract: 0 = all checks pass, 2 = invariant failure,
// 3 = config error.

#include <filesystem>
#include <fstream>
#include <sstream>

#include "beurlab/exponents.hpp"
#include "beurlab/field_io.hpp"
#include "beurlab/jacobian.hpp"
#include "beurlab/opnorm.hpp"
#include "beurlab/oscillation.hpp"
#include "beurlab/pipeline.hpp"
#include "beurlab/symbols.hpp"

namespace beurlab {

inline constexpr int kExitOk = 0;
inline constexpr int kExitInvariantFailure = 2;
inline constexpr int kExitConfigError = 3;

// Residual tolerances asserted by the identity suites.
namespace tolerances {
inline constexpr double kFundamental = 1e-10;    // ||S dbar h - d h||_2 / ||grad h||_2
inline constexpr double kIsometry = 1e-12;       // | ||Sv||_2 - ||v||_2 | / ||v||_2
inline constexpr double kAdjointInverse = 1e-10; // ||S*(Sv) - v||_2 / ||v||_2
inline constexpr double kDuality = 1e-12;        // adjoint duality residual
inline constexpr double kPolarization = 1e-13;   // pointwise, per (max|a|+max|b|)^2
inline constexpr double kJacobianIdentity = 1e-8;   // pointwise, per ||grad u||_inf^2
inline constexpr double kJacobianIntegral = 1e-10;  // |int Ju| / ||grad u||_2^2
inline constexpr double kBackendAgreement = 1e-12;  // direct vs fft, relative sup
inline constexpr double kCrwResidual = 1e-10;
inline constexpr double kDualWeights = 1e-12;
inline constexpr double kDominationConstant = 9.0;  // 2^{d+1} + 1 at Lambda = 2
}  // namespace tolerances

struct ExperimentConfig {
    std::string experiment;
    GridSpec grid;
    double p = 4.0, q = 2.0;
    SymbolSpec symbol;
    int samples = 64;
    std::uint64_t seed = 1;
    Backend backend = Backend::quadrature_fft;
    double lambda_threshold = 2.0;
    double jacobian_p = 1.0;
    std::string fault = "none";
    std::vector<std::string> corpus;
    std::vector<int> n_ladder;
    std::vector<double> scale_ladder;
    double bump_scale = 32.0;
    int restarts = 8;
    bool dump_masks = false;
    json raw;  ///< the resolved config embedded into reports
};

namespace config_detail {

inline void require_keys(const json& j, const std::vector<std::string>& known,
                         const std::string& where) {
    for (auto it = j.begin(); it != j.end(); ++it)
        if (std::find(known.begin(), known.end(), it.key()) == known.end())
            throw ConfigError(where + ": unknown key '" + it.key() + "'");
}

inline json merge(json base, const json& overlay) {
    for (auto it = overlay.begin(); it != overlay.end(); ++it) {
        if (it->is_object() && base.contains(it.key()) && base[it.key()].is_object()) {
            base[it.key()] = merge(base[it.key()], *it);
        } else {
            base[it.key()] = *it;
        }
    }
    return base;
}

} // namespace config_detail

inline json default_config(const std::string& experiment) {
    json j;
    j["experiment"] = experiment;
    j["seed"] = 1;
    j["samples"] = 64;
    j["exponents"] = {{"p", 4.0}, {"q", 2.0}};
    j["backend"] = "quadrature-fft";
    j["lambda_threshold"] = 2.0;
    if (experiment == "identities" || experiment == "jacobian") {
        j["grid"] = {{"n", 128},
                     {"length", 6.283185307179586},
                     {"periodic", true},
                     {"origin_re", 0.0},
                     {"origin_im", 0.0}};
        j["backend"] = "spectral";
        if (experiment == "identities") j["fault"] = "none";
        if (experiment == "jacobian") {
            j["jacobian_p"] = 1.0;
            j["samples"] = 20;
            j["restarts"] = 8;
            j["symbol"] = {{"class", "lr_bump"}, {"shape", "gaussian"}, {"scale", 1.5},
                           {"center_re", 3.141592653589793}, {"center_im", 3.141592653589793}};
        }
    } else if (experiment == "lowerbound") {
        j["grid"] = {{"n", 128}, {"length", 2.0}, {"periodic", false},
                     {"origin_re", -1.0}, {"origin_im", -1.0}};
        j["symbol"] = {{"class", "lr_bump"}, {"shape", "gaussian"}, {"scale", 0.25}};
    } else if (experiment == "sparse") {
        j["grid"] = {{"n", 64}, {"length", 2.0}, {"periodic", false},
                     {"origin_re", -1.0}, {"origin_im", -1.0}};
        j["corpus"] = {"constant", "step", "gaussian", "bmo_log", "holder_half", "random"};
        j["dump_masks"] = false;
        j["samples"] = 100;
    } else if (experiment == "regimes") {
        j["grid"] = {{"n", 128}, {"length", 2.0}, {"periodic", false},
                     {"origin_re", -1.0}, {"origin_im", -1.0}};
        j["n_ladder"] = {64, 128, 256};
        j["restarts"] = 6;
        j["samples"] = 64;
    } else if (experiment == "scaling") {
        j["grid"] = {{"n", 64}, {"length", 256.0}, {"periodic", false},
                     {"origin_re", -128.0}, {"origin_im", -128.0}};
        j["scale_ladder"] = {1.0, 2.0, 4.0, 8.0, 16.0};
        j["bump_scale"] = 32.0;
        j["exponents"] = {{"p", 2.0}, {"q", 2.0}};
    } else {
        throw ConfigError("unknown experiment '" + experiment + "'");
    }
    return j;
}

/// Strict parse of a resolved config document.
inline ExperimentConfig parse_config(const json& j) {
    static const std::vector<std::string> known = {
        "experiment", "grid",    "exponents", "symbol",   "samples",      "seed",
        "backend",    "lambda_threshold", "jacobian_p", "fault", "corpus", "n_ladder",
        "scale_ladder", "bump_scale", "restarts", "dump_masks"};
    config_detail::require_keys(j, known, "config");

    ExperimentConfig cfg;
    if (!j.contains("experiment") || !j["experiment"].is_string())
        throw ConfigError("config: missing experiment name");
    cfg.experiment = j["experiment"].get<std::string>();
    static const std::vector<std::string> experiments = {"identities", "regimes", "lowerbound",
                                                         "jacobian",   "sparse",  "scaling"};
    if (std::find(experiments.begin(), experiments.end(), cfg.experiment) == experiments.end())
        throw ConfigError("config: unknown experiment '" + cfg.experiment + "'");

    if (j.contains("grid")) {
        const json& g = j["grid"];
        config_detail::require_keys(g, {"n", "length", "periodic", "origin_re", "origin_im"},
                                    "grid");
        const int n = g.value("n", 128);
        const double length = g.value("length", 1.0);
        const bool periodic = g.value("periodic", true);
        const Complex origin(g.value("origin_re", 0.0), g.value("origin_im", 0.0));
        try {
            cfg.grid = make_grid(n, length, periodic, origin);
        } catch (const InvalidArgument& e) {
            throw ConfigError(std::string("grid: ") + e.what());
        }
    } else {
        throw ConfigError("config: missing grid section");
    }

    if (j.contains("exponents")) {
        const json& e = j["exponents"];
        config_detail::require_keys(e, {"p", "q"}, "exponents");
        cfg.p = e.value("p", 4.0);
        cfg.q = e.value("q", 2.0);
        if (!(cfg.p > 1.0) || std::isinf(cfg.p) || !(cfg.q > 1.0) || std::isinf(cfg.q))
            throw ConfigError("exponents: p and q must lie in (1, infinity)");
    }

    if (j.contains("symbol")) {
        try {
            cfg.symbol = SymbolSpec::from_json(j["symbol"]);
        } catch (const ConfigError&) {
            throw;
        }
    }

    cfg.samples = j.value("samples", 64);
    if (cfg.samples < 1) throw ConfigError("config: samples must be >= 1");
    cfg.seed = j.value("seed", static_cast<std::uint64_t>(1));
    if (j.contains("backend")) cfg.backend = parse_backend(j["backend"].get<std::string>());
    cfg.lambda_threshold = j.value("lambda_threshold", 2.0);
    if (!(cfg.lambda_threshold >= 2.0))
        throw ConfigError("config: lambda_threshold must be >= 2");
    cfg.jacobian_p = j.value("jacobian_p", 1.0);
    if (!(cfg.jacobian_p >= 1.0) || cfg.jacobian_p > 8.0)
        throw ConfigError("config: jacobian_p must lie in [1, 8]");
    cfg.fault = j.value("fault", "none");
    if (cfg.fault != "none" && cfg.fault != "corrupt_multiplier")
        throw ConfigError("config: fault must be 'none' or 'corrupt_multiplier'");
    if (j.contains("corpus")) cfg.corpus = j["corpus"].get<std::vector<std::string>>();
    if (j.contains("n_ladder")) {
        cfg.n_ladder = j["n_ladder"].get<std::vector<int>>();
        for (int n : cfg.n_ladder)
            if (!is_power_of_two(n) || n < 8 || n > 4096)
                throw ConfigError("config: n_ladder entries must be powers of two in [8, 4096]");
    }
    if (j.contains("scale_ladder"))
        cfg.scale_ladder = j["scale_ladder"].get<std::vector<double>>();
    cfg.bump_scale = j.value("bump_scale", 32.0);
    cfg.restarts = j.value("restarts", 8);
    if (cfg.restarts < 1) throw ConfigError("config: restarts must be >= 1");
    cfg.dump_masks = j.value("dump_masks", false);
    cfg.raw = j;
    return cfg;
}

/// Resolve a (possibly partial) user config against the experiment defaults
/// and apply `--set key=value` style dotted-path overrides.
inline ExperimentConfig resolve_config(const std::string& experiment, const json& user,
                                       const std::vector<std::string>& overrides = {}) {
    json doc = config_detail::merge(default_config(experiment), user);
    doc["experiment"] = experiment;
    for (const std::string& ov : overrides) {
        const auto eq = ov.find('=');
        if (eq == std::string::npos) throw ConfigError("--set expects key=value, got '" + ov + "'");
        const std::string path = ov.substr(0, eq);
        const std::string value = ov.substr(eq + 1);
        json parsed;
        try {
            parsed = json::parse(value);
        } catch (const json::parse_error&) {
            parsed = value;  // bare strings are allowed unquoted
        }
        json* slot = &doc;
        std::istringstream ss(path);
        std::string part;
        std::vector<std::string> parts;
        while (std::getline(ss, part, '.')) parts.push_back(part);
        if (parts.empty()) throw ConfigError("--set: empty key path");
        for (size_t i = 0; i + 1 < parts.size(); ++i) slot = &((*slot)[parts[i]]);
        (*slot)[parts.back()] = parsed;
    }
    return parse_config(doc);
}

// ---------------------------------------------------------------------------
// report plumbing

struct CheckList {
    json rows = json::array();
    bool all_pass = true;

    void add(const std::string& name, double residual, double tolerance) {
        const bool pass = residual <= tolerance;
        rows.push_back({{"check", name}, {"residual", residual}, {"tolerance", tolerance},
                        {"pass", pass}});
        all_pass = all_pass && pass;
    }
    void add_flag(const std::string& name, bool pass, const json& detail = json::object()) {
        json row = {{"check", name}, {"pass", pass}};
        if (!detail.empty()) row["detail"] = detail;
        rows.push_back(std::move(row));
        all_pass = all_pass && pass;
    }
};

inline void write_json_file(const std::filesystem::path& path, const json& j) {
    std::ofstream os(path);
    if (!os) throw Error("cannot open " + path.string() + " for writing");
    os << j.dump(2) << '\n';
}

class CsvWriter {
public:
    CsvWriter(const std::filesystem::path& path, const std::vector<std::string>& columns)
        : os_(path) {
        if (!os_) throw Error("cannot open " + path.string() + " for writing");
        for (size_t i = 0; i < columns.size(); ++i)
            os_ << columns[i] << (i + 1 < columns.size() ? "," : "\n");
    }
    void row(const std::vector<std::string>& cells) {
        for (size_t i = 0; i < cells.size(); ++i)
            os_ << cells[i] << (i + 1 < cells.size() ? "," : "\n");
    }

private:
    std::ofstream os_;
};

inline json constants_json(const ExperimentConfig& cfg) {
    return {{"lambda_threshold", cfg.lambda_threshold},
            {"domination_constant", tolerances::kDominationConstant},
            {"fundamental_tol", tolerances::kFundamental},
            {"isometry_tol", tolerances::kIsometry},
            {"adjoint_inverse_tol", tolerances::kAdjointInverse},
            {"duality_tol", tolerances::kDuality},
            {"polarization_tol", tolerances::kPolarization},
            {"jacobian_identity_tol", tolerances::kJacobianIdentity},
            {"jacobian_integral_tol", tolerances::kJacobianIntegral},
            {"backend_agreement_tol", tolerances::kBackendAgreement},
            {"crw_residual_tol", tolerances::kCrwResidual},
            {"dual_weights_tol", tolerances::kDualWeights}};
}

/// Named test symbols used by the suites; `generate_symbol` covers the
/// config-driven classes, this adds steps and raw random cells.
inline ComplexField corpus_symbol(const std::string& name, const GridSpec& grid,
                                  std::uint64_t seed = 1) {
    const Complex center = grid.origin + Complex(grid.length / 2, grid.length / 2);
    if (name == "constant") {
        SymbolSpec s;
        s.cls = SymbolClass::constant;
        s.value = 1.5;
        return generate_symbol(s, grid);
    }
    if (name == "step")
        return ComplexField::sample(grid, [&](Complex z) {
            return Complex(z.real() > center.real() ? 1.0 : 0.0, 0.0);
        });
    if (name == "gaussian") {
        SymbolSpec s;
        s.cls = SymbolClass::lr_bump;
        s.shape = BumpShape::gaussian;
        s.scale = grid.length / 8;
        s.center = center;
        return generate_symbol(s, grid);
    }
    if (name == "bmo_log") {
        SymbolSpec s;
        s.cls = SymbolClass::bmo_log;
        s.center = center;
        return generate_symbol(s, grid);
    }
    if (name == "holder_half") {
        SymbolSpec s;
        s.cls = SymbolClass::holder;
        s.alpha = 0.5;
        s.center = center;
        s.window = grid.length / 3;
        return generate_symbol(s, grid);
    }
    if (name == "lipschitz") {
        SymbolSpec s;
        s.cls = SymbolClass::holder;
        s.alpha = 1.0;
        s.center = center;
        s.window = grid.length / 3;
        return generate_symbol(s, grid);
    }
    if (name == "random") {
        Rng rng(mix_seed(seed, 0xC0FFEE));
        std::vector<Complex> v(grid.count());
        for (Complex& z : v) z = Complex(rng.uniform(), 0.0);
        return ComplexField(grid, std::move(v));
    }
    throw ConfigError("unknown corpus symbol '" + name + "'");
}

// ---------------------------------------------------------------------------
// identities

inline int run_identities(const ExperimentConfig& cfg, const std::filesystem::path& outdir) {
    std::filesystem::create_directories(outdir);
    if (!cfg.grid.periodic) throw ConfigError("identities: grid must be periodic");
    const GridSpec grid = cfg.grid;
    const bool corrupt = cfg.fault == "corrupt_multiplier";
    // test hook: an additive multiplier fault that the suite must catch
    auto S = [&](const ComplexField& v) {
        ComplexField out = beurling(v, Backend::spectral);
        if (corrupt) out = out + Complex(1e-6, 0.0) * v;
        return out;
    };
    auto S_adj = [&](const ComplexField& g) {
        ComplexField out = beurling_adjoint(g, Backend::spectral);
        if (corrupt) out = out + Complex(1e-6, 0.0) * g;
        return out;
    };

    CheckList checks;
    const int max_mode = std::max(1, grid.n / 4 - 1);
    double worst_fund = 0.0, worst_iso = 0.0, worst_inv = 0.0, worst_dual = 0.0;
    double worst_polar = 0.0, worst_jac = 0.0, worst_int = 0.0;
    for (int trial = 0; trial < 3; ++trial) {
        const std::uint64_t s = mix_seed(cfg.seed, trial);
        ComplexField h = random_band_limited(grid, max_mode, mix_seed(s, 1));
        worst_fund = std::max(worst_fund,
                              lp_norm(S(d_bar(h)) - d(h), 2.0) / gradient_l2(h));

        ComplexField v = random_field_mean_zero(grid, mix_seed(s, 2));
        const double nv = lp_norm(v, 2.0);
        worst_iso = std::max(worst_iso, std::abs(lp_norm(S(v), 2.0) - nv) / nv);
        worst_inv = std::max(worst_inv, lp_norm(S_adj(S(v)) - v, 2.0) / nv);

        ComplexField phi = random_field(grid, mix_seed(s, 3));
        ComplexField psi = random_field(grid, mix_seed(s, 4));
        worst_dual = std::max(worst_dual,
                              std::abs(inner(phi, S_adj(psi)) - inner(S(phi), psi)) /
                                  (lp_norm(phi, 2.0) * lp_norm(psi, 2.0)));

        ComplexField a = random_field(grid, mix_seed(s, 5));
        ComplexField bb = random_field(grid, mix_seed(s, 6));
        worst_polar = std::max(worst_polar, max_abs(polarize(a, bb) - a * conj(bb)) /
                                                ((max_abs(a) + max_abs(bb)) *
                                                 (max_abs(a) + max_abs(bb))));

        VectorField2 u = VectorField2::from_packed(h);
        ComplexField ju = jacobian(u);
        ComplexField jc = jacobian_complex(d_bar(h));
        const double gmax = gradient_max(h);
        worst_jac = std::max(worst_jac, max_abs(ju - jc) / (gmax * gmax));
        const double g2 = gradient_l2(h);
        worst_int = std::max(worst_int, std::abs(integrate(ju)) / (g2 * g2));
    }
    checks.add("fundamental_relation", worst_fund, tolerances::kFundamental);
    checks.add("isometry_l2", worst_iso, tolerances::kIsometry);
    checks.add("adjoint_inverse", worst_inv, tolerances::kAdjointInverse);
    checks.add("adjoint_duality", worst_dual, tolerances::kDuality);
    checks.add("polarization", worst_polar, tolerances::kPolarization);
    checks.add("jacobian_identity", worst_jac, tolerances::kJacobianIdentity);
    checks.add("jacobian_integral_zero", worst_int, tolerances::kJacobianIntegral);

    {
        const GridSpec bg = make_centered_square(std::min(grid.n, 64), 2.0);
        ComplexField v = random_field(bg, mix_seed(cfg.seed, 77));
        ComplexField dir = beurling(v, Backend::quadrature_direct);
        ComplexField fft = beurling(v, Backend::quadrature_fft);
        checks.add("backend_agreement", max_abs(dir - fft) / max_abs(dir),
                   tolerances::kBackendAgreement);
    }

    json report;
    report["experiment"] = "identities";
    report["config"] = cfg.raw;
    report["constants"] = constants_json(cfg);
    report["checks"] = checks.rows;
    report["all_pass"] = checks.all_pass;
    write_json_file(outdir / "report.json", report);

    CsvWriter csv(outdir / "identities.csv", {"check", "residual", "tolerance", "pass"});
    for (const auto& row : checks.rows)
        csv.row({row["check"].get<std::string>(), format_double(row["residual"].get<double>()),
                 format_double(row["tolerance"].get<double>()), row["pass"].get<bool>() ? "1" : "0"});
    return checks.all_pass ? kExitOk : kExitInvariantFailure;
}

// ---------------------------------------------------------------------------
// jacobian

inline int run_jacobian(const ExperimentConfig& cfg, const std::filesystem::path& outdir) {
    std::filesystem::create_directories(outdir);
    if (!cfg.grid.periodic) throw ConfigError("jacobian: grid must be periodic");
    const GridSpec grid = cfg.grid;
    const auto [two_p, two_p_dual] = jacobian_exponents(cfg.jacobian_p);
    ComplexField b = generate_symbol(cfg.symbol, grid);

    CheckList checks;
    CsvWriter csv(outdir / "jacobian_samples.csv",
                  {"sample", "jacobian_residual", "integral_residual", "h1_ratio",
                   "norming_value", "polarization_residual"});
    const int max_mode = std::max(1, grid.n / 4 - 1);
    double worst_jac = 0.0, worst_int = 0.0, worst_polar = 0.0;
    double h1_max = 0.0, norming_sup = 0.0;
    for (int s = 0; s < cfg.samples; ++s) {
        ComplexField v = random_band_limited(grid, max_mode, mix_seed(cfg.seed, s));
        v = Complex(1.0 / lp_norm(v, two_p), 0.0) * v;  // normalize ||v||_{2p} = 1
        ComplexField h = solve_dbar(v);
        VectorField2 u = VectorField2::from_packed(h);
        ComplexField ju = jacobian(u);
        ComplexField jc = jacobian_complex(v);
        const double gmax = gradient_max(h), g2 = gradient_l2(h);
        const double jac_res = max_abs(ju - jc) / (gmax * gmax);
        const double int_res = std::abs(integrate(ju)) / (g2 * g2);
        const double h1_ratio = h1_proxy(ju) / (g2 * g2);
        const Complex norming = pair_bilinear(b, jc);
        // polarisation bookkeeping: int b (|Sv|^2 - |v|^2) = int conj(Sv) [b,S] v
        ComplexField sv = beurling(v, Backend::spectral);
        const Complex via_commutator = pair_bilinear(conj(sv), commutator(b, v, Backend::spectral));
        const double scale = max_abs(b) * (lp_norm(sv, 2.0) * lp_norm(sv, 2.0) +
                                           lp_norm(v, 2.0) * lp_norm(v, 2.0));
        const double polar_res = std::abs(norming - via_commutator) / scale;
        worst_jac = std::max(worst_jac, jac_res);
        worst_int = std::max(worst_int, int_res);
        worst_polar = std::max(worst_polar, polar_res);
        h1_max = std::max(h1_max, h1_ratio);
        norming_sup = std::max(norming_sup, std::abs(norming));
        csv.row({std::to_string(s), format_double(jac_res), format_double(int_res),
                 format_double(h1_ratio), format_double(std::abs(norming)),
                 format_double(polar_res)});
    }
    checks.add("jacobian_identity", worst_jac, tolerances::kJacobianIdentity);
    checks.add("jacobian_integral_zero", worst_int, tolerances::kJacobianIntegral);
    checks.add("polarization_bookkeeping", worst_polar, 1e-8);

    OpNormEstimate est =
        opnorm_lower(b, two_p, two_p_dual, Backend::spectral, cfg.restarts, mix_seed(cfg.seed, 999));

    json report;
    report["experiment"] = "jacobian";
    report["config"] = cfg.raw;
    report["constants"] = constants_json(cfg);
    report["checks"] = checks.rows;
    report["all_pass"] = checks.all_pass;
    report["jacobian_p"] = cfg.jacobian_p;
    report["commutator_exponents"] = {two_p, two_p_dual};
    report["h1_ratio_max"] = h1_max;
    report["norming_functional_sup"] = norming_sup;
    report["opnorm_lower"] = est.value;
    report["lower_bound_ratio"] = est.value > 0.0 ? norming_sup / est.value : 0.0;
    write_json_file(outdir / "report.json", report);
    return checks.all_pass ? kExitOk : kExitInvariantFailure;
}

// ---------------------------------------------------------------------------
// lowerbound

inline int run_lowerbound(const ExperimentConfig& cfg, const std::filesystem::path& outdir) {
    std::filesystem::create_directories(outdir);
    if (cfg.grid.periodic) throw ConfigError("lowerbound: grid must be bounded");
    if (!(cfg.p > cfg.q)) throw ExponentMismatch("lowerbound requires p > q");
    if (cfg.backend == Backend::spectral) throw ConfigError("lowerbound: quadrature backend required");
    ComplexField b = generate_symbol(cfg.symbol, cfg.grid);
    const ExponentTriple exps = exponents(cfg.p, cfg.q);
    const double r = *exps.r;

    PipelineReport rep = lr_lower_pipeline(b, DyadicRoot::whole_grid(cfg.grid), cfg.p, cfg.q,
                                           cfg.samples, cfg.seed, cfg.backend,
                                           cfg.lambda_threshold);
    CheckList checks;
    json report;
    report["experiment"] = "lowerbound";
    report["config"] = cfg.raw;
    report["constants"] = constants_json(cfg);
    report["pipeline"] = rep.to_json();

    if (!rep.degenerate) {
        ConstantFit fit = distance_to_constants_lr(b, r);
        const double envelope = opnorm_upper_split(b, cfg.p, cfg.q, r, cfg.backend);
        const double best_lb = std::max(rep.certified_lb, rep.best_cube_lb);
        report["lr_distance"] = fit.dist;
        report["constant_c_re"] = fit.c.real();
        report["constant_c_im"] = fit.c.imag();
        report["upper_envelope"] = envelope;
        report["K_lb"] = best_lb > 0.0 ? fit.dist / best_lb : 0.0;
        report["K_envelope"] = envelope > 0.0 ? fit.dist / envelope : 0.0;
        checks.add_flag("certified_positive", best_lb > 0.0);
        checks.add_flag("sandwich_order", best_lb <= envelope * (1.0 + 1e-12),
                        {{"certified_lb", best_lb}, {"envelope", envelope}});
        if (rep.mc_stderr > 0.0)
            checks.add("mc_mean_matches_target",
                       std::abs(rep.mc_mean - Complex(rep.target, 0.0)), 5.0 * rep.mc_stderr);
    } else {
        report["lr_distance"] = 0.0;
        report["upper_envelope"] = 0.0;
        report["K_lb"] = 0.0;
        report["K_envelope"] = 0.0;
    }
    report["checks"] = checks.rows;
    report["all_pass"] = checks.all_pass;
    write_json_file(outdir / "report.json", report);

    CsvWriter csv(outdir / "lowerbound_samples.csv",
                  {"sample", "value_re", "value_im", "certified_ratio"});
    for (size_t i = 0; i < rep.sample_values.size(); ++i)
        csv.row({std::to_string(i), format_double(rep.sample_values[i].real()),
                 format_double(rep.sample_values[i].imag()),
                 format_double(rep.sample_ratios[i])});
    return checks.all_pass ? kExitOk : kExitInvariantFailure;
}

// ---------------------------------------------------------------------------
// sparse

inline int run_sparse(const ExperimentConfig& cfg, const std::filesystem::path& outdir) {
    std::filesystem::create_directories(outdir);
    if (cfg.grid.periodic) throw ConfigError("sparse: grid must be bounded");
    const GridSpec grid = cfg.grid;
    const DyadicRoot root = DyadicRoot::whole_grid(grid);
    CheckList checks;
    json symbol_stats = json::array();

    std::vector<std::string> corpus = cfg.corpus;
    if (corpus.empty())
        corpus = {"constant", "step", "gaussian", "bmo_log", "holder_half", "random"};

    for (const std::string& name : corpus) {
        ComplexField b = corpus_symbol(name, grid, cfg.seed);
        SparseFamily fam = sparse_dominate(b, root, cfg.lambda_threshold);

        // disjointness of the major subsets, exact cell claims
        std::vector<std::uint8_t> claimed(grid.count(), 0);
        bool disjoint = true;
        double min_major = 1.0;
        for (size_t i = 0; i < fam.nodes.size(); ++i) {
            const CubeRect rc = cube_cells(root, fam.nodes[i].cube);
            long idx = 0;
            for (int iy = rc.y0; iy < rc.y0 + rc.m; ++iy)
                for (int ix = rc.x0; ix < rc.x0 + rc.m; ++ix, ++idx)
                    if (fam.nodes[i].mask[idx]) {
                        if (claimed[grid.index(ix, iy)]) disjoint = false;
                        claimed[grid.index(ix, iy)] = 1;
                    }
            min_major = std::min(min_major, static_cast<double>(fam.nodes[i].major_cells) /
                                                static_cast<double>(fam.cube_cell_count(i)));
        }
        const double major_bound = 1.0 - 1.0 / cfg.lambda_threshold;
        checks.add_flag(name + ":major_subsets_disjoint", disjoint);
        checks.add_flag(name + ":major_fraction", min_major >= major_bound,
                        {{"min_fraction", min_major}, {"bound", major_bound}});

        // Carleson packing over the selection forest
        std::vector<long> subtree(fam.nodes.size());
        for (size_t i = 0; i < fam.nodes.size(); ++i) subtree[i] = fam.cube_cell_count(i);
        bool carleson = true;
        double carleson_worst = 0.0;
        for (size_t i = fam.nodes.size(); i-- > 0;)
            if (fam.nodes[i].parent >= 0) subtree[fam.nodes[i].parent] += subtree[i];
        const double packing_bound = cfg.lambda_threshold / (cfg.lambda_threshold - 1.0);
        for (size_t i = 0; i < fam.nodes.size(); ++i) {
            const double ratio =
                static_cast<double>(subtree[i]) / static_cast<double>(fam.cube_cell_count(i));
            carleson_worst = std::max(carleson_worst, ratio);
            if (ratio > packing_bound) carleson = false;
        }
        checks.add_flag(name + ":carleson_packing", carleson,
                        {{"worst", carleson_worst}, {"bound", packing_bound}});

        DominationCheck dom = verify_domination(b, fam);
        checks.add_flag(name + ":pointwise_domination", dom.ok,
                        {{"c_emp", dom.c_emp}, {"bound", dom.bound}});

        // dual-weight identities (skipped for constants)
        double dual_res1 = 0.0, dual_res2 = 0.0;
        bool has_weights = false;
        try {
            const double r = 4.0;
            const double r_dual = r / (r - 1.0);
            std::vector<double> lambda = dual_weights(fam, r);
            has_weights = true;
            KahanSum s1, s2, sA;
            for (size_t i = 0; i < fam.nodes.size(); ++i) {
                s1.add(fam.cube_area(i) * std::pow(lambda[i], r_dual));
                s2.add(fam.cube_area(i) * lambda[i] * fam.nodes[i].osc);
                sA.add(fam.cube_area(i) * std::pow(fam.nodes[i].osc, r));
            }
            dual_res1 = std::abs(s1.value() - 1.0);
            const double a_pow = std::pow(sA.value(), 1.0 / r);
            dual_res2 = std::abs(s2.value() - a_pow) / a_pow;
            checks.add(name + ":dual_weight_normalization", dual_res1, tolerances::kDualWeights);
            checks.add(name + ":dual_weight_pairing", dual_res2, tolerances::kDualWeights);
        } catch (const AllZeroOscillation&) {
            checks.add_flag(name + ":degenerate_constant", fam.nodes.size() == 1);
        }

        json stat;
        stat["symbol"] = name;
        stat["family_size"] = fam.nodes.size();
        int depth = 0;
        for (const SparseNode& n : fam.nodes) depth = std::max(depth, n.cube.level);
        stat["depth"] = depth;
        stat["c_emp"] = dom.c_emp;
        stat["min_major_fraction"] = min_major;
        stat["carleson_worst"] = carleson_worst;
        stat["has_dual_weights"] = has_weights;
        symbol_stats.push_back(std::move(stat));

        write_json_file(outdir / ("sparse_family_" + name + ".json"),
                        sparse_family_to_json(fam, cfg.dump_masks));
    }

    // sparse-is-almost-disjoint ratios over random families and weights
    json ratio_stats = json::array();
    {
        const double ps[3] = {4.0 / 3.0, 2.0, 4.0};
        for (double p : ps) {
            double lo = std::numeric_limits<double>::infinity(), hi = 0.0;
            for (int t = 0; t < cfg.samples; ++t) {
                ComplexField rb = corpus_symbol("random", grid, mix_seed(cfg.seed, t));
                SparseFamily fam = sparse_dominate(rb, root, cfg.lambda_threshold);
                Rng rng(mix_seed(cfg.seed, t, 12345));
                std::vector<double> lambda(fam.nodes.size());
                for (double& l : lambda) l = rng.uniform();
                const double ratio = sparse_lp_ratio(fam, lambda, p);
                lo = std::min(lo, ratio);
                hi = std::max(hi, ratio);
            }
            const double lower = std::pow(2.0, -1.0 / p);
            checks.add_flag("lp_ratio_bounds_p=" + format_double(p),
                            lo >= lower - 1e-12 && hi <= 10.0,
                            {{"min", lo}, {"max", hi}, {"lower", lower}, {"upper", 10.0}});
            ratio_stats.push_back({{"p", p}, {"min", lo}, {"max", hi}});
        }
    }

    json report;
    report["experiment"] = "sparse";
    report["config"] = cfg.raw;
    report["constants"] = constants_json(cfg);
    report["symbols"] = symbol_stats;
    report["lp_ratios"] = ratio_stats;
    report["checks"] = checks.rows;
    report["all_pass"] = checks.all_pass;
    write_json_file(outdir / "report.json", report);
    return checks.all_pass ? kExitOk : kExitInvariantFailure;
}

// ---------------------------------------------------------------------------
// scaling

inline int run_scaling(const ExperimentConfig& cfg, const std::filesystem::path& outdir) {
    std::filesystem::create_directories(outdir);
    if (cfg.grid.periodic) throw ConfigError("scaling: grid must be bounded");
    const double p = cfg.p;
    const double two_p = 2.0 * p;
    std::vector<double> ladder = cfg.scale_ladder;
    if (ladder.empty()) ladder = {1.0, 2.0, 4.0, 8.0, 16.0};

    // a broad two-bump map; the width keeps ||grad u|| well below ||u|| so the
    // nonhomogeneous ratio is already in its asymptotic regime at lambda = 1
    auto build_u = [&](const GridSpec& g, double lam) {
        const double s = cfg.bump_scale * lam;
        const Complex c1 = lam * Complex(-0.25 * cfg.bump_scale, 0.0);
        const Complex c2 = lam * Complex(0.25 * cfg.bump_scale, 0.125 * cfg.bump_scale);
        std::vector<double> u1(g.count()), u2(g.count());
        for (int iy = 0; iy < g.n; ++iy)
            for (int ix = 0; ix < g.n; ++ix) {
                const Complex z = g.node(ix, iy);
                u1[g.index(ix, iy)] = lam * std::exp(-std::norm(z - c1) / (s * s));
                u2[g.index(ix, iy)] = lam * std::exp(-std::norm(z - c2) / (s * s));
            }
        return VectorField2(g, std::move(u1), std::move(u2));
    };

    CsvWriter csv(outdir / "scaling.csv",
                  {"lambda", "norm_Ju_p", "norm_grad_2p", "norm_u_2p", "ratio_homogeneous",
                   "ratio_nonhomogeneous"});
    std::vector<double> hom, nonhom, lams;
    for (double lam : ladder) {
        const GridSpec g = make_grid(cfg.grid.n, cfg.grid.length * lam, false,
                                     Complex(cfg.grid.origin.real() * lam,
                                             cfg.grid.origin.imag() * lam));
        VectorField2 u = build_u(g, lam);
        ComplexField ju = jacobian(u);
        const double nju = lp_norm(ju, p);
        ComplexField h = u.packed();
        ComplexField d1 = partial(h, 0), d2 = partial(h, 1);
        std::vector<Complex> gradmag(g.count());
        for (long i = 0; i < g.count(); ++i)
            gradmag[i] = Complex(std::sqrt(std::norm(d1[i]) + std::norm(d2[i])), 0.0);
        const double ngrad = lp_norm(ComplexField(g, std::move(gradmag)), two_p);
        std::vector<Complex> umag(g.count());
        for (long i = 0; i < g.count(); ++i)
            umag[i] = Complex(std::hypot(u.u1[i], u.u2[i]), 0.0);
        const double nu = lp_norm(ComplexField(g, std::move(umag)), two_p);
        const double rh = nju / (ngrad * ngrad);
        const double rn = nju / ((nu + ngrad) * (nu + ngrad));
        hom.push_back(rh);
        nonhom.push_back(rn);
        lams.push_back(lam);
        csv.row({format_double(lam), format_double(nju), format_double(ngrad), format_double(nu),
                 format_double(rh), format_double(rn)});
    }

    double hom_drift = 0.0;
    for (double r : hom) hom_drift = std::max(hom_drift, std::abs(r / hom[0] - 1.0));
    // least-squares slope of log(nonhom) against log(lambda)
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    const int m = static_cast<int>(lams.size());
    for (int i = 0; i < m; ++i) {
        const double x = std::log(lams[i]), y = std::log(nonhom[i]);
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    const double slope = (m * sxy - sx * sy) / (m * sxx - sx * sx);

    CheckList checks;
    checks.add("homogeneous_ratio_drift", hom_drift, 0.01);
    checks.add("nonhomogeneous_slope_error", std::abs(slope + 2.0), 0.1);

    json report;
    report["experiment"] = "scaling";
    report["config"] = cfg.raw;
    report["constants"] = constants_json(cfg);
    report["homogeneous_drift"] = hom_drift;
    report["nonhomogeneous_slope"] = slope;
    report["checks"] = checks.rows;
    report["all_pass"] = checks.all_pass;
    write_json_file(outdir / "report.json", report);
    return checks.all_pass ? kExitOk : kExitInvariantFailure;
}

// ---------------------------------------------------------------------------
// regimes

inline int run_regimes(const ExperimentConfig& cfg, const std::filesystem::path& outdir) {
    std::filesystem::create_directories(outdir);
    CheckList checks;
    CsvWriter csv(outdir / "regimes.csv",
                  {"case", "p", "q", "symbol", "n", "h", "backend", "estimate_kind", "estimate",
                   "upper_envelope", "trend_slope", "drift"});
    std::vector<int> ladder = cfg.n_ladder;
    if (ladder.empty()) ladder = {64, 128, 256};
    std::vector<int> small_ladder(ladder.begin(),
                                  ladder.begin() + std::min<size_t>(2, ladder.size()));
    const double L = cfg.grid.length;
    auto square = [&](int n) { return make_centered_square(n, L); };
    auto fit_slope_vs_h = [](const std::vector<double>& hs, const std::vector<double>& vals) {
        double sx = 0, sy = 0, sxx = 0, sxy = 0;
        const int m = static_cast<int>(hs.size());
        for (int i = 0; i < m; ++i) {
            const double x = std::log(hs[i]), y = std::log(std::max(vals[i], 1e-300));
            sx += x;
            sy += y;
            sxx += x * x;
            sxy += x * y;
        }
        return (m * sxy - sx * sy) / (m * sxx - sx * sx);
    };

    // constant symbols: every estimate must vanish identically
    {
        double worst = 0.0;
        for (int n : small_ladder) {
            const GridSpec g = square(n);
            ComplexField b = corpus_symbol("constant", g);
            OpNormEstimate on =
                opnorm_lower(b, 2.0, 2.0, Backend::quadrature_fft, 2, mix_seed(cfg.seed, n));
            WitnessBound bmo = bmo_lower(b, 2.0, Backend::quadrature_fft);
            WitnessBound hol = holder_lower(b, 4.0 / 3.0, 2.0, Backend::quadrature_fft);
            PipelineReport pipe = lr_lower_pipeline(b, DyadicRoot::whole_grid(g), 4.0, 2.0, 4,
                                                    cfg.seed, Backend::quadrature_fft);
            worst = std::max({worst, on.value, bmo.value, hol.value, pipe.certified_lb});
            csv.row({"constant", "2", "2", "constant", std::to_string(n),
                     format_double(g.spacing()), "quadrature-fft", "all_lower_bounds",
                     format_double(std::max({on.value, bmo.value, hol.value, pipe.certified_lb})),
                     "", "", ""});
        }
        checks.add_flag("constant_symbol_zero", worst == 0.0, {{"worst", worst}});
    }

    // BMO regime p = q: certified lower bounds against the bmo_log symbol
    {
        for (int n : small_ladder) {
            const GridSpec g = square(n);
            ComplexField b = corpus_symbol("bmo_log", g);
            OpNormEstimate on = opnorm_lower(b, 2.0, 2.0, Backend::quadrature_fft, cfg.restarts,
                                             mix_seed(cfg.seed, 100 + n));
            WitnessBound wb = bmo_lower(b, 2.0, Backend::quadrature_fft);
            csv.row({"bmo", "2", "2", "bmo_log", std::to_string(n), format_double(g.spacing()),
                     "quadrature-fft", "opnorm_lower", format_double(on.value), "", "", ""});
            csv.row({"bmo", "2", "2", "bmo_log", std::to_string(n), format_double(g.spacing()),
                     "quadrature-fft", "bmo_lower", format_double(wb.value), "", "", ""});
            checks.add_flag("bmo_lower_positive_n=" + std::to_string(n), wb.value > 0.0);
        }
    }

    // matched Hoelder regime p < q <= p*: bounds stable under refinement
    {
        const double p = 4.0 / 3.0, q = 2.0;  // alpha = 1/2, p* = 4
        std::vector<double> hs, vals;
        for (int n : ladder) {
            const GridSpec g = square(n);
            ComplexField b = corpus_symbol("holder_half", g);
            WitnessBound wb = holder_lower(b, p, q, Backend::quadrature_fft);
            hs.push_back(g.spacing());
            vals.push_back(wb.value);
            csv.row({"holder_matched", format_double(p), format_double(q), "holder_half",
                     std::to_string(n), format_double(g.spacing()), "quadrature-fft",
                     "holder_lower", format_double(wb.value), "", "", ""});
        }
        double drift = 0.0;
        for (double v : vals) drift = std::max(drift, std::abs(v / vals.back() - 1.0));
        const double slope = fit_slope_vs_h(hs, vals);
        csv.row({"holder_matched", format_double(p), format_double(q), "holder_half", "", "", "",
                 "trend", "", "", format_double(slope), format_double(drift)});
        checks.add("holder_matched_drift", drift, 0.10);
    }

    // beyond p*: alpha > 1, the certified bound must diverge like h^{1-alpha}
    {
        const double p = 4.0 / 3.0, q = 8.0;  // alpha = 1.25 > 1, p* = 4
        const double alpha = 2.0 * (1.0 / p - 1.0 / q);
        std::vector<double> hs, vals;
        for (int n : ladder) {
            const GridSpec g = square(n);
            ComplexField b = corpus_symbol("lipschitz", g);
            WitnessBound wb = holder_lower(b, p, q, Backend::quadrature_fft);
            hs.push_back(g.spacing());
            vals.push_back(wb.value);
            csv.row({"beyond_pstar", format_double(p), format_double(q), "lipschitz",
                     std::to_string(n), format_double(g.spacing()), "quadrature-fft",
                     "holder_lower", format_double(wb.value), "", "", ""});
        }
        const double slope = fit_slope_vs_h(hs, vals);
        csv.row({"beyond_pstar", format_double(p), format_double(q), "lipschitz", "", "", "",
                 "trend", "", "", format_double(slope), ""});
        checks.add("beyond_pstar_slope_error", std::abs(slope - (1.0 - alpha)),
                   0.2 * (alpha - 1.0));
    }

    // p > q: the sandwich lr_distance <= K * certified_lb <= K' * envelope
    {
        const double p = 4.0, q = 2.0, r = 4.0;
        const int n = std::min(128, ladder.back());
        const GridSpec g = square(n);
        ComplexField b = corpus_symbol("gaussian", g);
        PipelineReport pipe = lr_lower_pipeline(b, DyadicRoot::whole_grid(g), p, q, cfg.samples,
                                                cfg.seed, Backend::quadrature_fft,
                                                cfg.lambda_threshold);
        ConstantFit fit = distance_to_constants_lr(b, r);
        const double envelope = opnorm_upper_split(b, p, q, r, Backend::quadrature_fft);
        const double best_lb = std::max(pipe.certified_lb, pipe.best_cube_lb);
        const double K = best_lb > 0.0 ? fit.dist / best_lb : 0.0;
        const double Kp = envelope > 0.0 ? fit.dist / envelope : 0.0;
        csv.row({"p_gt_q", format_double(p), format_double(q), "gaussian", std::to_string(n),
                 format_double(g.spacing()), "quadrature-fft", "certified_lb",
                 format_double(best_lb), format_double(envelope), "", ""});
        checks.add_flag("p_gt_q_sandwich",
                        best_lb > 0.0 && best_lb <= envelope * (1.0 + 1e-12) && K > 0.0,
                        {{"K", K}, {"K_envelope", Kp}, {"certified_lb", best_lb},
                         {"envelope", envelope}, {"lr_distance", fit.dist}});
    }

    json report;
    report["experiment"] = "regimes";
    report["config"] = cfg.raw;
    report["constants"] = constants_json(cfg);
    report["checks"] = checks.rows;
    report["all_pass"] = checks.all_pass;
    write_json_file(outdir / "report.json", report);
    return checks.all_pass ? kExitOk : kExitInvariantFailure;
}

// ---------------------------------------------------------------------------

inline int run_experiment(const ExperimentConfig& cfg, const std::filesystem::path& outdir) {
    if (cfg.experiment == "identities") return run_identities(cfg, outdir);
    if (cfg.experiment == "regimes") return run_regimes(cfg, outdir);
    if (cfg.experiment == "lowerbound") return run_lowerbound(cfg, outdir);
    if (cfg.experiment == "jacobian") return run_jacobian(cfg, outdir);
    if (cfg.experiment == "sparse") return run_sparse(cfg, outdir);
    if (cfg.experiment == "scaling") return run_scaling(cfg, outdir);
    throw ConfigError("unknown experiment '" + cfg.experiment + "'");
}

} // namespace beurlab
