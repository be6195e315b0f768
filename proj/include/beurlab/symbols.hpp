#pragma once

// Symbol generators: the multiplication symbols b whose commutator behaviour
// the lab probes.  Classes map onto the function classes of the commutator
// regimes: constants, BMO-type logarithms, Hoelder profiles |z|^alpha, and
// L^r bumps.

#include <optional>
#include <string>

#include <json.hpp>

#include "beurlab/field.hpp"
#include "beurlab/kernel.hpp"

namespace beurlab {

using json = nlohmann::json;

enum class SymbolClass { constant, bmo_log, holder, lr_bump };
enum class BumpShape { gaussian, inverse_quadratic };

inline const char* to_string(SymbolClass c) {
    switch (c) {
        case SymbolClass::constant: return "constant";
        case SymbolClass::bmo_log: return "bmo_log";
        case SymbolClass::holder: return "holder";
        case SymbolClass::lr_bump: return "lr_bump";
    }
    return "?";
}

inline const char* to_string(BumpShape s) {
    return s == BumpShape::gaussian ? "gaussian" : "inverse_quadratic";
}

struct SymbolSpec {
    SymbolClass cls = SymbolClass::constant;
    double value = 1.0;                 ///< amplitude (constant value for `constant`)
    double alpha = 0.5;                 ///< holder exponent, in (0, 1]
    BumpShape shape = BumpShape::gaussian;
    double scale = 1.0;                 ///< lr_bump width
    Complex center{0.0, 0.0};
    std::optional<double> window;       ///< smooth cutoff radius, if any

    json to_json() const {
        json j;
        j["class"] = to_string(cls);
        j["value"] = value;
        j["center_re"] = center.real();
        j["center_im"] = center.imag();
        if (cls == SymbolClass::holder) j["alpha"] = alpha;
        if (cls == SymbolClass::lr_bump) {
            j["shape"] = to_string(shape);
            j["scale"] = scale;
        }
        if (window) j["window"] = *window;
        return j;
    }

    static SymbolSpec from_json(const json& j);
};

namespace symbol_detail {

/// C^1 taper: 1 on [0, w/2], cos^2 ramp on [w/2, w], 0 beyond.
inline double taper(double dist, double w) {
    if (dist <= 0.5 * w) return 1.0;
    if (dist >= w) return 0.0;
    const double t = std::cos(kPi * (dist / w - 0.5));
    return t * t;
}

} // namespace symbol_detail

inline SymbolSpec SymbolSpec::from_json(const json& j) {
    static const std::vector<std::string> known = {"class", "value",  "alpha",    "shape",
                                                   "scale", "center_re", "center_im", "window"};
    for (auto it = j.begin(); it != j.end(); ++it)
        if (std::find(known.begin(), known.end(), it.key()) == known.end())
            throw ConfigError("symbol: unknown key '" + it.key() + "'");
    SymbolSpec s;
    const std::string cls = j.value("class", "constant");
    if (cls == "constant") s.cls = SymbolClass::constant;
    else if (cls == "bmo_log") s.cls = SymbolClass::bmo_log;
    else if (cls == "holder") s.cls = SymbolClass::holder;
    else if (cls == "lr_bump") s.cls = SymbolClass::lr_bump;
    else throw ConfigError("symbol: unknown class '" + cls + "'");
    s.value = j.value("value", 1.0);
    s.alpha = j.value("alpha", 0.5);
    const std::string shape = j.value("shape", "gaussian");
    if (shape == "gaussian") s.shape = BumpShape::gaussian;
    else if (shape == "inverse_quadratic") s.shape = BumpShape::inverse_quadratic;
    else throw ConfigError("symbol: unknown shape '" + shape + "'");
    s.scale = j.value("scale", 1.0);
    s.center = Complex(j.value("center_re", 0.0), j.value("center_im", 0.0));
    if (j.contains("window") && !j["window"].is_null()) s.window = j["window"].get<double>();
    if (s.cls == SymbolClass::holder && !(s.alpha > 0.0 && s.alpha <= 1.0))
        throw ConfigError("symbol: holder alpha must lie in (0, 1]");
    if (s.cls == SymbolClass::lr_bump && !(s.scale > 0.0))
        throw ConfigError("symbol: lr_bump scale must be positive");
    return s;
}

/// Sample a symbol on a grid.  bmo_log is log|z - center| clamped at one
/// grid cell; a center that coincides with a sample node is rejected.
inline ComplexField generate_symbol(const SymbolSpec& spec, const GridSpec& grid) {
    if (spec.cls == SymbolClass::holder && !(spec.alpha > 0.0 && spec.alpha <= 1.0))
        throw InvalidArgument("holder alpha must lie in (0, 1]");
    const double h = grid.spacing();
    if (spec.cls == SymbolClass::bmo_log) {
        for (int iy = 0; iy < grid.n; ++iy)
            for (int ix = 0; ix < grid.n; ++ix)
                if (std::abs(grid.node(ix, iy) - spec.center) < 1e-12 * h)
                    throw SingularSample("bmo_log center coincides with a sample node");
    }
    auto windowed = [&](double dist, double v) {
        return spec.window ? v * symbol_detail::taper(dist, *spec.window) : v;
    };
    return ComplexField::sample(grid, [&](Complex z) -> Complex {
        const double dist = std::abs(z - spec.center);
        switch (spec.cls) {
            case SymbolClass::constant: return {spec.value, 0.0};
            case SymbolClass::bmo_log:
                return {windowed(dist, spec.value * std::log(std::max(dist, h))), 0.0};
            case SymbolClass::holder:
                return {windowed(dist, spec.value * std::pow(dist, spec.alpha)), 0.0};
            case SymbolClass::lr_bump: {
                const double t = dist / spec.scale;
                const double profile = spec.shape == BumpShape::gaussian
                                           ? std::exp(-t * t)
                                           : 1.0 / (1.0 + t * t);
                return {windowed(dist, spec.value * profile), 0.0};
            }
        }
        return {0.0, 0.0};
    });
}

} // namespace beurlab
