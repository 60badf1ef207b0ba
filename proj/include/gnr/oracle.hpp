#pragma once

// Independent numerical machinery: finite differences with Richardson
// extrapolation on a raw surface map, adaptive Simpson quadrature and
// bracketing root finding.  Nothing here looks at Frenet data.

#include <cmath>
#include <functional>
#include <string>
#include <vector>

#include "gnr/curve.hpp"
#include "gnr/errors.hpp"
#include "gnr/expr.hpp"
#include "gnr/vec.hpp"

namespace gnr::oracle {

struct OracleConfig {
    double fd_step = 1e-5;     // base step for first derivatives; second derivatives use sqrt(fd_step)
    int richardson_levels = 2;
    double quad_tol = 1e-10;

    void validate() const {
        if (!(fd_step >= 1e-8 && fd_step <= 1e-2)) throw ConfigError("fd_step must lie in [1e-8, 1e-2]");
        if (richardson_levels < 0 || richardson_levels > 6) throw ConfigError("richardson_levels must lie in [0, 6]");
        if (!(quad_tol > 0.0)) throw ConfigError("quad_tol must be positive");
    }
};

using SurfaceMap = std::function<Vec3(double, double)>;
using ScalarFunction = std::function<double(double)>;

/// Richardson extrapolation of an even-error-expansion estimate d(h).
template <typename Estimate>
auto richardson(Estimate&& d, double h, int levels) -> decltype(d(h)) {
    using T = decltype(d(h));
    std::vector<T> table;
    table.reserve(static_cast<std::size_t>(levels) + 1);
    for (int i = 0; i <= levels; ++i) table.push_back(d(h / std::pow(2.0, i)));
    double factor = 4.0;
    for (int k = 1; k <= levels; ++k, factor *= 4.0)
        for (int i = levels; i >= k; --i) table[i] = T(table[i] + (table[i] - table[i - 1]) / (factor - 1.0));
    return table.back();
}

/// First or second derivative of a scalar function by central differences.
inline double fd_derivative(const ScalarFunction& fn, double x, int order, double h, int levels) {
    if (order == 1) return richardson([&](double k) { return (fn(x + k) - fn(x - k)) / (2 * k); }, h, levels);
    return richardson([&](double k) { return (fn(x + k) - 2 * fn(x) + fn(x - k)) / (k * k); }, h, levels);
}

struct SurfacePartials {
    Vec3 Fs, Fu, Fss, Fsu, Fuu;
};

inline SurfacePartials fd_partials(const SurfaceMap& F, double s, double u, const OracleConfig& cfg) {
    const double scale = std::max({1.0, std::abs(s), std::abs(u)});
    const double h1 = cfg.fd_step * scale;
    const double h2 = std::sqrt(cfg.fd_step) * scale;
    const int lv = cfg.richardson_levels;
    SurfacePartials p;
    const Vec3 f0 = F(s, u);
    p.Fs = richardson([&](double h) -> Vec3 { return (F(s + h, u) - F(s - h, u)) / (2 * h); }, h1, lv);
    p.Fu = richardson([&](double h) -> Vec3 { return (F(s, u + h) - F(s, u - h)) / (2 * h); }, h1, lv);
    p.Fss = richardson([&](double h) -> Vec3 { return (F(s + h, u) - 2 * f0 + F(s - h, u)) / (h * h); }, h2, lv);
    p.Fuu = richardson([&](double h) -> Vec3 { return (F(s, u + h) - 2 * f0 + F(s, u - h)) / (h * h); }, h2, lv);
    p.Fsu = richardson(
        [&](double h) -> Vec3 {
            return (F(s + h, u + h) - F(s + h, u - h) - F(s - h, u + h) + F(s - h, u - h)) / (4 * h * h);
        },
        h2, lv);
    return p;
}

struct FundamentalForms {
    double E = 0, F = 0, G = 0;
    double L = 0, M = 0, N = 0;
    Vec3 U = Vec3::Zero();
};

/// E, F, G, L, M, N of an arbitrary parametrized surface at (s, u).
inline FundamentalForms fd_fundamental_forms(const SurfaceMap& map, double s, double u,
                                             const OracleConfig& cfg = {}) {
    cfg.validate();
    const auto p = fd_partials(map, s, u, cfg);
    const Vec3 n = p.Fs.cross(p.Fu);
    if (n.norm() <= 1e-10) throw SingularPoint(s, u, NAN, NAN);
    FundamentalForms ff;
    ff.U = n.normalized();
    ff.E = p.Fs.dot(p.Fs);
    ff.F = p.Fs.dot(p.Fu);
    ff.G = p.Fu.dot(p.Fu);
    ff.L = p.Fss.dot(ff.U);
    ff.M = p.Fsu.dot(ff.U);
    ff.N = p.Fuu.dot(ff.U);
    return ff;
}

struct Curvatures {
    double K = 0;
    double H = 0;
};

inline Curvatures curvatures_from_forms(const FundamentalForms& ff) {
    const double det = ff.E * ff.G - ff.F * ff.F;
    return {(ff.L * ff.N - ff.M * ff.M) / det, (ff.E * ff.N - 2 * ff.F * ff.M + ff.G * ff.L) / (2 * det)};
}

inline Curvatures fd_curvatures(const SurfaceMap& map, double s, double u, const OracleConfig& cfg = {}) {
    return curvatures_from_forms(fd_fundamental_forms(map, s, u, cfg));
}

/// Unit normal from the normalized cross product of difference partials.
inline Vec3 fd_normal(const SurfaceMap& map, double s, double u, const OracleConfig& cfg = {}) {
    const double scale = std::max({1.0, std::abs(s), std::abs(u)});
    const double h = cfg.fd_step * scale;
    const Vec3 Fs =
        richardson([&](double k) -> Vec3 { return (map(s + k, u) - map(s - k, u)) / (2 * k); }, h, cfg.richardson_levels);
    const Vec3 Fu =
        richardson([&](double k) -> Vec3 { return (map(s, u + k) - map(s, u - k)) / (2 * k); }, h, cfg.richardson_levels);
    const Vec3 n = Fs.cross(Fu);
    if (n.norm() <= 1e-10) throw SingularPoint(s, u, NAN, NAN);
    return n.normalized();
}

/// Shape operator S = -dU applied to the parameter-space direction (ds, du).
inline Vec3 fd_shape_operator_apply(const SurfaceMap& map, double s, double u, double ds, double du,
                                    const OracleConfig& cfg = {}) {
    const double h = std::sqrt(cfg.fd_step) * std::max({1.0, std::abs(s), std::abs(u)});
    return -richardson(
        [&](double k) -> Vec3 {
            return (fd_normal(map, s + k * ds, u + k * du, cfg) - fd_normal(map, s - k * ds, u - k * du, cfg)) / (2 * k);
        },
        h, cfg.richardson_levels);
}

struct CurveOnSurfaceSample {
    Vec3 velocity;       // d phi / dt
    Vec3 normal;         // U along the curve
    Vec3 normal_rate;    // dU / dt
    double inner = 0.0;  // < dU/dt, U x velocity >
};

/// Normal rate along phi(t) = F(s(t), u(t)) by differencing the map only.
inline CurveOnSurfaceSample fd_curve_on_surface(const SurfaceMap& map, const ScalarFunction& s_of_t,
                                                const ScalarFunction& u_of_t, double t,
                                                const OracleConfig& cfg = {}) {
    auto phi = [&](double x) { return map(s_of_t(x), u_of_t(x)); };
    auto normal = [&](double x) { return fd_normal(map, s_of_t(x), u_of_t(x), cfg); };
    const double h = std::sqrt(cfg.fd_step) * std::max(1.0, std::abs(t));
    CurveOnSurfaceSample r;
    r.velocity = richardson([&](double k) -> Vec3 { return (phi(t + k) - phi(t - k)) / (2 * k); },
                            cfg.fd_step * std::max(1.0, std::abs(t)), cfg.richardson_levels);
    r.normal = normal(t);
    r.normal_rate =
        richardson([&](double k) -> Vec3 { return (normal(t + k) - normal(t - k)) / (2 * k); }, h, cfg.richardson_levels);
    r.inner = r.normal_rate.dot(r.normal.cross(r.velocity));
    return r;
}

namespace detail {

inline double simpson_step(const ScalarFunction& fn, double a, double fa, double b, double fb, double m, double fm,
                           double whole, double tol, int depth) {
    const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
    const double flm = fn(lm), frm = fn(rm);
    if (!std::isfinite(flm) || !std::isfinite(frm))
        throw DomainError("non-finite integrand sample", std::to_string(!std::isfinite(flm) ? lm : rm), 0);
    const double left = (m - a) / 6.0 * (fa + 4 * flm + fm);
    const double right = (b - m) / 6.0 * (fm + 4 * frm + fb);
    const double delta = left + right - whole;
    if (depth <= 0 || std::abs(delta) <= 15.0 * tol) return left + right + delta / 15.0;
    return simpson_step(fn, a, fa, m, fm, lm, flm, left, 0.5 * tol, depth - 1) +
           simpson_step(fn, m, fm, b, fb, rm, frm, right, 0.5 * tol, depth - 1);
}

}  // namespace detail

/// Adaptive Simpson quadrature of fn over [lo, hi] to cfg.quad_tol.
inline double quad(const ScalarFunction& fn, Interval iv, const OracleConfig& cfg = {}) {
    // Start from a few panels so narrow features are not missed.
    constexpr int panels = 8;
    double total = 0.0;
    for (int i = 0; i < panels; ++i) {
        const double a = iv.lo + iv.length() * i / panels;
        const double b = iv.lo + iv.length() * (i + 1) / panels;
        const double m = 0.5 * (a + b);
        const double fa = fn(a), fb = fn(b), fm = fn(m);
        for (double v : {fa, fb, fm})
            if (!std::isfinite(v)) throw DomainError("non-finite integrand sample", "[" + std::to_string(a) + ", " + std::to_string(b) + "]", 0);
        const double whole = (b - a) / 6.0 * (fa + 4 * fm + fb);
        total += detail::simpson_step(fn, a, fa, b, fb, m, fm, whole, cfg.quad_tol / panels, 50);
    }
    return total;
}

inline double quad(const Expr& expr, Interval iv, const OracleConfig& cfg = {}) {
    return quad([&](double x) { return eval_scalar(expr, x); }, iv, cfg);
}

/// A root (lo == hi) or an interval on which |f| stays below the tolerance.
struct Root {
    double lo = 0.0;
    double hi = 0.0;
    bool is_interval = false;
    double at() const { return 0.5 * (lo + hi); }
};

/// Sign changes on `grid` samples refined by bisection to tol; runs of
/// samples with |f| < tol are reported as intervals.  Non-finite samples are
/// treated as gaps.
inline std::vector<Root> find_roots(const ScalarFunction& fn, Interval iv, int grid, double tol) {
    if (grid < 2) throw ConfigError("find_roots needs at least 2 grid points");
    std::vector<double> xs(grid), fs(grid);
    for (int i = 0; i < grid; ++i) {
        xs[i] = iv.sample(i, grid);
        fs[i] = fn(xs[i]);
    }
    auto flat = [&](int i) { return std::isfinite(fs[i]) && std::abs(fs[i]) < tol; };
    std::vector<Root> roots;
    int i = 0;
    while (i < grid) {
        if (flat(i)) {
            int j = i;
            while (j + 1 < grid && flat(j + 1)) ++j;
            roots.push_back({xs[i], xs[j], j > i});
            i = j + 1;
            continue;
        }
        if (i + 1 < grid && !flat(i + 1) && std::isfinite(fs[i]) && std::isfinite(fs[i + 1]) &&
            std::signbit(fs[i]) != std::signbit(fs[i + 1])) {
            double a = xs[i], b = xs[i + 1], fa = fs[i];
            while (b - a > tol) {
                const double m = 0.5 * (a + b);
                const double fm = fn(m);
                if (!std::isfinite(fm)) break;
                if (fm == 0.0) {
                    a = b = m;
                    break;
                }
                if (std::signbit(fm) == std::signbit(fa)) {
                    a = m;
                    fa = fm;
                } else {
                    b = m;
                }
            }
            const double r = 0.5 * (a + b);
            roots.push_back({r, r, false});
        }
        ++i;
    }
    return roots;
}

}  // namespace gnr::oracle
