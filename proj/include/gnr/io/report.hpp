#pragma once

// JSON analysis report.  Field order is fixed and floats are written in
// shortest round-trip form, so identical scenes give identical bytes.

#include <cmath>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "gnr/io/scene.hpp"
#include "gnr/parallel.hpp"
#include "gnr/ruled_frame.hpp"
#include "gnr/surface.hpp"

namespace gnr::io {

using Json = nlohmann::ordered_json;

inline Json to_json(const Vec3& v) { return Json::array({v.x(), v.y(), v.z()}); }

namespace detail {

struct Extremum {
    double min = std::numeric_limits<double>::infinity();
    double max = -std::numeric_limits<double>::infinity();
    std::pair<double, double> argmin{0, 0}, argmax{0, 0};
    int count = 0;

    void add(double v, double s, double u) {
        ++count;
        if (v < min) {
            min = v;
            argmin = {s, u};
        }
        if (v > max) {
            max = v;
            argmax = {s, u};
        }
    }
    void merge(const Extremum& o) {
        if (o.count == 0) return;
        if (o.min < min) {
            min = o.min;
            argmin = o.argmin;
        }
        if (o.max > max) {
            max = o.max;
            argmax = o.argmax;
        }
        count += o.count;
    }
    Json json() const {
        if (count == 0) return nullptr;
        return Json{{"min", min},
                    {"min_at", Json::array({argmin.first, argmin.second})},
                    {"max", max},
                    {"max_at", Json::array({argmax.first, argmax.second})}};
    }
};

inline Json slant_json(const GNRSurface& surface, const std::vector<double>& s, SlantKind kind) {
    try {
        const auto r = detect_slant(surface, s, kind);
        return Json{{"verdict", r.verdict}, {"axis", to_json(r.axis)}, {"dot_spread", r.dot_spread},
                    {"mean_cosine", r.mean_cosine}};
    } catch (const CylindricalRuling& e) {
        return Json{{"verdict", nullptr}, {"error", e.what()}};
    }
}

}  // namespace detail

/// Full analysis of a scene.  Domain and frame errors propagate.
inline Json analysis_report(const SceneConfig& scene) {
    const GNRSurface surface = scene.surface();
    const SampleGrid grid = scene.grid();

    std::vector<Section> secs(grid.s.size());
    std::vector<detail::Extremum> f_ext(grid.s.size()), g_ext(grid.s.size()), k_ext(grid.s.size()),
        h_ext(grid.s.size());
    std::vector<int> singular_counts(grid.s.size(), 0);
    parallel_for(grid.s.size(), [&](std::size_t i) {
        secs[i] = surface.section(grid.s[i]);
        f_ext[i].add(secs[i].f, grid.s[i], 0.0);
        for (double u : grid.u) {
            const auto d = evaluate_point(secs[i], u);
            g_ext[i].add(d.g, grid.s[i], u);
            if (!d.regular()) {
                ++singular_counts[i];
                continue;
            }
            k_ext[i].add(*d.K, grid.s[i], u);
            h_ext[i].add(*d.H, grid.s[i], u);
        }
    });
    detail::Extremum f_all, g_all, k_all, h_all;
    for (std::size_t i = 0; i < grid.s.size(); ++i) {
        f_all.merge(f_ext[i]);
        g_all.merge(g_ext[i]);
        k_all.merge(k_ext[i]);
        h_all.merge(h_ext[i]);
    }

    const auto cls = classify(surface, grid);
    Json classification{{"regular", cls.regular},
                        {"developable", cls.developable},
                        {"cylindrical", cls.cylindrical},
                        {"minimal", cls.minimal_candidate},
                        {"binormal", cls.binormal},
                        {"principal_normal", cls.principal_normal}};
    Json witnesses{{"max_abs_f", cls.max_abs_f},
                   {"max_abs_f_at_s", cls.max_abs_f_at},
                   {"max_ruling_rate", cls.max_ruling_rate},
                   {"max_ruling_rate_at_s", cls.max_ruling_rate_at},
                   {"max_abs_H", cls.max_abs_H},
                   {"max_abs_H_at", Json::array({cls.max_abs_H_at.first, cls.max_abs_H_at.second})},
                   {"max_abs_a1", cls.max_abs_a1},
                   {"max_abs_a2", cls.max_abs_a2},
                   {"singular_grid_points", cls.singular_grid_points}};
    if (cls.singular_witness)
        witnesses["singular_point"] = Json{{"s", cls.singular_witness->s},
                                           {"u", cls.singular_witness->u},
                                           {"point", to_json(cls.singular_witness->point)}};
    classification["witnesses"] = witnesses;

    const auto locus = singular_locus(surface, grid.s);
    Json locus_json{{"developable_curve", locus.developable_curve}};
    Json plateaus = Json::array();
    for (const auto& [lo, hi] : locus.plateaus) plateaus.push_back(Json::array({lo, hi}));
    locus_json["plateaus"] = plateaus;
    Json samples = Json::array();
    for (const auto& p : locus.samples)
        samples.push_back(Json{{"s", p.s}, {"u", p.u}, {"in_u_range", scene.u_range.contains(p.u)},
                               {"point", to_json(p.point)}});
    locus_json["samples"] = samples;

    Json striction = Json::array();
    for (const auto& sec : secs) {
        try {
            const auto st = striction_parameter(sec);
            striction.push_back(Json{{"s", st.s}, {"u_star", st.u_star}, {"point", to_json(st.point)}});
        } catch (const CylindricalRuling&) {
            striction.push_back(Json{{"s", sec.s}, {"u_star", nullptr}, {"point", nullptr}});
        }
    }

    const auto bct = base_curve_tests(surface, grid.s);
    const auto kh = check_KH_identity(surface, grid);

    Json frame_json;
    try {
        frame_json = Json{{"theta_integral_residual", theta_integral_condition(surface, grid.s)},
                          {"q", detail::slant_json(surface, grid.s, SlantKind::q)},
                          {"h", detail::slant_json(surface, grid.s, SlantKind::h)},
                          {"a", detail::slant_json(surface, grid.s, SlantKind::a)}};
    } catch (const CylindricalRuling& e) {
        frame_json = Json{{"error", e.what()}};
    }

    Json report;
    report["scene"] = scene.name;
    report["grid"] = Json{{"ns", scene.ns},
                          {"nu", scene.nu},
                          {"s_range", Json::array({scene.domain.lo, scene.domain.hi})},
                          {"u_range", Json::array({scene.u_range.lo, scene.u_range.hi})},
                          {"compat_parameter_derivatives", scene.compat_parameter_derivatives}};
    report["classification"] = classification;
    report["extrema"] = Json{{"f", f_all.json()}, {"g", g_all.json()}, {"K", k_all.json()}, {"H", h_all.json()}};
    report["base_curve"] = Json{{"geodesic", bct.geodesic},
                                {"asymptotic", bct.asymptotic},
                                {"line_of_curvature", bct.line_of_curvature},
                                {"geodesic_residual", bct.geodesic_residual},
                                {"asymptotic_residual", bct.asymptotic_residual},
                                {"line_of_curvature_residual", bct.line_of_curvature_residual}};
    report["kh_identity"] = Json{{"max_residual", kh.max_residual},
                                 {"checked", kh.checked},
                                 {"skipped_singular", kh.skipped_singular}};
    report["singular_locus"] = locus_json;
    report["striction"] = striction;
    report["ruled_frame"] = frame_json;
    return report;
}

inline Json frenet_report(const SceneConfig& scene, double s) {
    const auto surface = scene.surface();
    const auto fr = surface.frame_at(s);
    return Json{{"s", s},
                {"T", to_json(fr.T)},
                {"N", to_json(fr.N)},
                {"B", to_json(fr.B)},
                {"kappa", fr.kappa},
                {"tau", fr.tau},
                {"kappa_prime", fr.kappa_prime},
                {"tau_prime", fr.tau_prime},
                {"speed", fr.speed},
                {"frame_from_policy", fr.from_policy}};
}

}  // namespace gnr::io
