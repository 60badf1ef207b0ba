#pragma once

// Shape operator, principal data and surface-curve invariants on developable
// GNR-surfaces (f identically zero).

#include <algorithm>
#include <array>
#include <cmath>
#include <string>
#include <vector>

#include "gnr/errors.hpp"
#include "gnr/expr.hpp"
#include "gnr/surface.hpp"

namespace gnr {

namespace tol {
inline constexpr double kFold = 1e-10;     // |g| at or below this is a fold / singular point
inline constexpr double kPlanar = 1e-10;   // |a2 kappa| at or below this is a planar point
inline constexpr double kCurveSpeed = 1e-6;
}  // namespace tol

struct WeingartenData {
    // Matrix of S in the basis {dF/ds, dF/du}, row-major.
    std::array<double, 4> matrix{0, 0, 0, 0};
    double lambda1 = 0;
    double lambda2 = 0;
    Vec3 e1 = Vec3::Zero();  // g T
    Vec3 e2 = Vec3::Zero();  // q_n
};

enum class PointKind { planar, parabolic };

inline const char* to_string(PointKind k) { return k == PointKind::planar ? "planar" : "parabolic"; }

namespace detail {

// |f| <= tol::kDevelopable at s and at s -/+ h; samples outside the domain are ignored.
inline void require_developable(const GNRSurface& surface, double s) {
    const double h = 1e-4 * std::max(1.0, std::abs(s));
    for (double x : {s - h, s, s + h}) {
        if (x != s && !surface.s_range().contains(x)) continue;
        const double f = surface.section(x).f;
        if (std::abs(f) > tol::kDevelopable)
            throw NotDevelopable("f=" + std::to_string(f) + " at s=" + std::to_string(x) +
                                 " exceeds the developability tolerance");
    }
}

}  // namespace detail

inline WeingartenData weingarten(const GNRSurface& surface, double s, double u) {
    detail::require_developable(surface, s);
    const Section sec = surface.section(s);
    const double g = sec.g(u);
    if (std::abs(g) <= tol::kFold)
        throw SingularOrFoldPoint("g=" + std::to_string(g) + " at (s,u)=(" + std::to_string(s) + "," +
                                  std::to_string(u) + ")");
    WeingartenData w;
    w.lambda1 = -sec.a2 * sec.frame.kappa / g;
    w.lambda2 = 0.0;
    w.matrix = {w.lambda1, 0.0, 0.0, 0.0};
    w.e1 = g * sec.frame.T;
    w.e2 = sec.ruling;
    return w;
}

inline PointKind classify_point(const GNRSurface& surface, double s, double u) {
    detail::require_developable(surface, s);
    (void)u;
    const Section sec = surface.section(s);
    return std::abs(sec.a2 * sec.frame.kappa) <= tol::kPlanar ? PointKind::planar : PointKind::parabolic;
}

/// k_n of the unit tangent C dF/ds + D dF/du.
inline double normal_curvature(const GNRSurface& surface, double s, double u, double C) {
    detail::require_developable(surface, s);
    const Section sec = surface.section(s);
    return C * C * sec.a2 * sec.frame.kappa * sec.g(u);
}

/// phi(t) = F(s(t), u(t)); both expressions use the variable t.
struct SurfaceCurveSpec {
    Expr s_of_t;
    Expr u_of_t;
    Interval t_domain;

    static SurfaceCurveSpec from_strings(std::string_view s, std::string_view u, Interval t_domain) {
        return {parse(s, "t"), parse(u, "t"), t_domain};
    }
};

struct CurveOnSurfaceInvariants {
    double kappa_g = 0;
    double tau_g = 0;
    double k_n = 0;
    double C = 0, D = 0, C_dot = 0, D_dot = 0;
    double s = 0, u = 0;
};

inline CurveOnSurfaceInvariants curve_invariants(const GNRSurface& surface, const SurfaceCurveSpec& spec, double t) {
    const Jet<2> sj = evaluate<2>(spec.s_of_t.root(), t);
    const Jet<2> uj = evaluate<2>(spec.u_of_t.root(), t);
    CurveOnSurfaceInvariants r;
    r.s = sj.value();
    r.u = uj.value();
    r.C = sj.derivative(1);
    r.D = uj.derivative(1);
    r.C_dot = sj.derivative(2);
    r.D_dot = uj.derivative(2);

    detail::require_developable(surface, r.s);
    const Section sec = surface.section(r.s);
    const auto pd = evaluate_point(sec, r.u);
    const double speed2 = r.C * r.C * pd.E + 2 * r.C * r.D * pd.F_coeff + r.D * r.D * pd.G_coeff;
    if (std::abs(std::sqrt(speed2) - 1.0) > tol::kCurveSpeed)
        throw NonUnitSpeed("surface curve is not unit speed at t=" + std::to_string(t) + " (|v|=" +
                               std::to_string(std::sqrt(speed2)) + ")",
                           std::sqrt(speed2));

    const double g = sec.g(r.u), g_s = sec.g_s(r.u), g_u = sec.g_u();
    const double C = r.C, D = r.D;
    const double a2k = sec.a2 * sec.frame.kappa;
    r.kappa_g = C * g * (r.D_dot - C * C * g * g_u) - D * (C * C * g_s + 2 * C * D * g_u + r.C_dot * g);
    r.tau_g = C * D * a2k;
    r.k_n = C * C * a2k * g;
    return r;
}

/// max |kappa_g| over the given t samples.
inline double geodesic_residual(const GNRSurface& surface, const SurfaceCurveSpec& spec,
                                const std::vector<double>& t_samples) {
    double worst = 0.0;
    for (double t : t_samples) worst = std::max(worst, std::abs(curve_invariants(surface, spec, t).kappa_g));
    return worst;
}

}  // namespace gnr
