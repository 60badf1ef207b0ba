#pragma once

// Scene files: a base curve, a ruling and sampling parameters in JSON.
//
//   {
//     "name": "helicoid",                                   (optional)
//     "curve":    {"x": "0", "y": "0", "z": "s", "domain": [0, 6.283185307179586]},
//     "ruling":   {"a1": "cos(s)", "a2": "sin(s)"}          or {"theta": "s"},
//     "frame_policy": {"mode": "fixed", "N0": [1, 0, 0]},   (optional; strict | fixed | rotation-minimizing)
//     "sampling": {"ns": 64, "nu": 16, "u_range": [-2, 2]},
//     "compat_parameter_derivatives": false                 (optional)
//   }

#include <cmath>
#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

#include "gnr/curve.hpp"
#include "gnr/errors.hpp"
#include "gnr/surface.hpp"

namespace gnr::io {

inline constexpr double kSceneRulingTolerance = 1e-8;

struct SceneConfig {
    std::string name;
    std::string x, y, z;
    Interval domain;
    std::string a1, a2;
    std::string theta;  // empty unless the ruling is given by its angle
    FramePolicy frame_policy;
    int ns = 2, nu = 2;
    Interval u_range{-1.0, 1.0};
    bool compat_parameter_derivatives = false;

    bool uses_theta() const { return !theta.empty(); }

    GNRSurface surface() const {
        auto base = ParametricCurve3::from_strings(x, y, z, domain);
        auto ruling = uses_theta() ? RulingCoefficients::from_angle(parse(theta))
                                   : RulingCoefficients::from_strings(a1, a2);
        return GNRSurface(std::move(base), std::move(ruling), frame_policy, u_range, compat_parameter_derivatives);
    }

    SampleGrid grid() const { return SampleGrid::uniform(domain, ns, u_range, nu); }
};

namespace detail {

using nlohmann::json;

inline const json& member(const json& obj, const char* key, const std::string& where) {
    if (!obj.is_object() || !obj.contains(key)) throw ConfigError(where + ": missing '" + key + "'");
    return obj.at(key);
}

inline std::string expr_string(const json& obj, const char* key, const std::string& where) {
    const auto& v = member(obj, key, where);
    if (v.is_string()) return v.get<std::string>();
    if (v.is_number()) {
        std::ostringstream os;
        os.precision(17);
        os << v.get<double>();
        return os.str();
    }
    throw ConfigError(where + "." + key + ": expected an expression string");
}

inline Interval interval(const json& v, const std::string& where) {
    if (!v.is_array() || v.size() != 2 || !v[0].is_number() || !v[1].is_number())
        throw ConfigError(where + ": expected [lo, hi]");
    Interval iv{v[0].get<double>(), v[1].get<double>()};
    if (!(std::isfinite(iv.lo) && std::isfinite(iv.hi) && iv.lo < iv.hi))
        throw ConfigError(where + ": expected finite lo < hi");
    return iv;
}

inline int positive_int(const json& obj, const char* key, const std::string& where) {
    const auto& v = member(obj, key, where);
    if (!v.is_number_integer()) throw ConfigError(where + "." + key + ": expected an integer");
    return v.get<int>();
}

// Parse every expression so syntax errors surface as configuration errors.
inline void check_expression(const std::string& text, const std::string& where) {
    try {
        (void)parse(text);
    } catch (const ParseError& e) {
        throw ConfigError(where + ": " + e.what());
    }
}

}  // namespace detail

/// Structural validation only; see validate_scene for the sampled invariants.
inline SceneConfig scene_from_json(const nlohmann::json& j) {
    using detail::member;
    SceneConfig c;
    if (!j.is_object()) throw ConfigError("scene: expected a JSON object");
    c.name = j.value("name", std::string{});

    const auto& curve = member(j, "curve", "scene");
    c.x = detail::expr_string(curve, "x", "curve");
    c.y = detail::expr_string(curve, "y", "curve");
    c.z = detail::expr_string(curve, "z", "curve");
    c.domain = detail::interval(member(curve, "domain", "curve"), "curve.domain");

    const auto& ruling = member(j, "ruling", "scene");
    if (ruling.contains("theta")) {
        if (ruling.contains("a1") || ruling.contains("a2"))
            throw ConfigError("ruling: give either theta or a1/a2, not both");
        c.theta = detail::expr_string(ruling, "theta", "ruling");
    } else {
        c.a1 = detail::expr_string(ruling, "a1", "ruling");
        c.a2 = detail::expr_string(ruling, "a2", "ruling");
    }

    if (j.contains("frame_policy")) {
        const auto& fp = j.at("frame_policy");
        const std::string mode = member(fp, "mode", "frame_policy").get<std::string>();
        std::optional<Vec3> n0;
        if (fp.contains("N0")) {
            const auto& v = fp.at("N0");
            if (!v.is_array() || v.size() != 3) throw ConfigError("frame_policy.N0: expected [x, y, z]");
            n0 = Vec3(v[0].get<double>(), v[1].get<double>(), v[2].get<double>());
        }
        if (mode == "strict") {
            c.frame_policy = FramePolicy::strict();
        } else if (mode == "fixed") {
            if (!n0) throw ConfigError("frame_policy: fixed mode requires N0");
            if (std::abs(n0->norm() - 1.0) > 1e-9) throw ConfigError("frame_policy.N0: must be a unit vector");
            c.frame_policy = FramePolicy::fixed(*n0);
        } else if (mode == "rotation-minimizing") {
            c.frame_policy = FramePolicy::rotation_minimizing(n0);
        } else {
            throw ConfigError("frame_policy.mode: unknown mode '" + mode + "'");
        }
    }

    const auto& sampling = member(j, "sampling", "scene");
    c.ns = detail::positive_int(sampling, "ns", "sampling");
    c.nu = detail::positive_int(sampling, "nu", "sampling");
    if (c.ns < 2) throw ConfigError("sampling.ns: invariant ns >= 2 violated (ns=" + std::to_string(c.ns) + ")");
    if (c.nu < 2) throw ConfigError("sampling.nu: invariant nu >= 2 violated (nu=" + std::to_string(c.nu) + ")");
    c.u_range = detail::interval(member(sampling, "u_range", "sampling"), "sampling.u_range");
    c.compat_parameter_derivatives = j.value("compat_parameter_derivatives", false);

    for (const auto* e : {&c.x, &c.y, &c.z}) detail::check_expression(*e, "curve");
    if (c.uses_theta()) {
        detail::check_expression(c.theta, "ruling.theta");
    } else {
        detail::check_expression(c.a1, "ruling.a1");
        detail::check_expression(c.a2, "ruling.a2");
    }
    return c;
}

/// Sampled invariant: a1^2 + a2^2 = 1 on the s grid (skipped for theta rulings).
/// Expression domain errors propagate unchanged.
inline void validate_scene(const SceneConfig& c) {
    if (c.uses_theta()) return;
    const auto ruling = RulingCoefficients::from_strings(c.a1, c.a2);
    for (int i = 0; i < c.ns; ++i) {
        const double s = c.domain.sample(i, c.ns);
        const double dev = ruling.norm_deviation(s);
        if (dev > kSceneRulingTolerance)
            throw ConfigError("invariant ruling_unit_norm violated: |a1^2 + a2^2 - 1| = " + std::to_string(dev) +
                              " at s=" + std::to_string(s));
    }
}

inline SceneConfig load_scene(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open scene file '" + path + "'");
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError("scene file '" + path + "': " + e.what());
    }
    try {
        auto c = scene_from_json(j);
        validate_scene(c);
        return c;
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError("scene file '" + path + "': " + e.what());
    }
}

}  // namespace gnr::io
