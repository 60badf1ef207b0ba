#pragma once

// Frenet apparatus of an analytically defined space curve.

#include <algorithm>
#include <cmath>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "gnr/errors.hpp"
#include "gnr/expr.hpp"
#include "gnr/vec.hpp"

namespace gnr {

namespace tol {
inline constexpr double kStraight = 1e-9;      // curvature below this means "straight"
inline constexpr double kUnitSpeed = 1e-6;     // allowed | |alpha'| - 1 |
inline constexpr double kRegularSpeed = 1e-9;  // minimum |alpha'|
}  // namespace tol

struct Interval {
    double lo = 0.0;
    double hi = 1.0;

    double length() const { return hi - lo; }
    bool contains(double x) const { return x >= lo && x <= hi; }
    /// i-th of n uniformly spaced points, endpoints included.
    double sample(int i, int n) const { return n <= 1 ? lo : lo + (hi - lo) * i / (n - 1); }
};

/// alpha(s) = (x(s), y(s), z(s)) on a closed parameter interval.
struct ParametricCurve3 {
    Expr x, y, z;
    Interval domain;

    static ParametricCurve3 from_strings(std::string_view x, std::string_view y, std::string_view z,
                                         Interval domain) {
        return {parse(x), parse(y), parse(z), domain};
    }

    Vec3 position(double s) const {
        return guarded(s, [&] { return Vec3(eval_scalar(x, s), eval_scalar(y, s), eval_scalar(z, s)); });
    }

    template <int N>
    JetVec3<N> jets(double s) const {
        return guarded(s, [&] {
            return JetVec3<N>{evaluate<N>(x.root(), s), evaluate<N>(y.root(), s), evaluate<N>(z.root(), s)};
        });
    }

    Vec3 velocity(double s) const { return derivatives(jets<1>(s), 1); }

private:
    template <typename F>
    static auto guarded(double s, F&& fn) -> decltype(fn()) {
        try {
            return fn();
        } catch (const DomainError& e) {
            throw DomainError("curve evaluation failed at s=" + std::to_string(s), e.subexpression(), e.offset());
        }
    }
};

/// How to obtain N and B where the curve is straight (curvature below tol::kStraight).
struct FramePolicy {
    enum class Mode { strict, fixed_frame, rotation_minimizing };
    Mode mode = Mode::strict;
    std::optional<Vec3> n0;

    static FramePolicy strict() { return {}; }
    static FramePolicy fixed(const Vec3& n0) { return {Mode::fixed_frame, n0}; }
    static FramePolicy rotation_minimizing(std::optional<Vec3> n0 = std::nullopt) {
        return {Mode::rotation_minimizing, n0};
    }
};

/// arclength: the parameter is arclength and arclength formulas apply (speed is checked).
/// raw: parametrization-invariant formulas; derivatives are taken in the raw parameter.
enum class Parametrization { arclength, raw };

struct FrenetApparatus {
    Vec3 T = Vec3::UnitX();
    Vec3 N = Vec3::UnitY();
    Vec3 B = Vec3::UnitZ();
    double kappa = 0.0;
    double tau = 0.0;
    double kappa_prime = 0.0;
    double tau_prime = 0.0;
    double speed = 1.0;
    bool from_policy = false;  // N, B supplied by the frame policy (straight point)
};

namespace detail {

inline Vec3 perpendicular_to(const Vec3& t) {
    int axis = 0;
    for (int i = 1; i < 3; ++i)
        if (std::abs(t[i]) < std::abs(t[axis])) axis = i;
    Vec3 e = Vec3::Zero();
    e[axis] = 1.0;
    return (e - e.dot(t) * t).normalized();
}

// Curvature by the parametrization-invariant formula; no speed requirement.
inline double curvature_raw(const ParametricCurve3& c, double s) {
    const auto p = c.jets<2>(s);
    const Vec3 d1 = derivatives(p, 1), d2 = derivatives(p, 2);
    const double sp = d1.norm();
    if (sp < tol::kRegularSpeed) return 0.0;
    return d1.cross(d2).norm() / (sp * sp * sp);
}

struct RawFrenet {
    Vec3 T, N, B;
};

inline RawFrenet frenet_raw_frame(const ParametricCurve3& c, double s) {
    const auto p = c.jets<2>(s);
    const Vec3 d1 = derivatives(p, 1), d2 = derivatives(p, 2);
    const Vec3 T = d1.normalized();
    const Vec3 B = d1.cross(d2).normalized();
    return {T, B.cross(T), B};
}

// Double-reflection transport of a normal vector from s_from to s_to.
inline Vec3 transport_rotation_minimizing(const ParametricCurve3& c, double s_from, double s_to, Vec3 r,
                                          int steps = 64) {
    Vec3 x0 = c.position(s_from);
    Vec3 t0 = c.velocity(s_from).normalized();
    for (int i = 1; i <= steps; ++i) {
        const double s1 = s_from + (s_to - s_from) * i / steps;
        const Vec3 x1 = c.position(s1);
        const Vec3 t1 = c.velocity(s1).normalized();
        const Vec3 v1 = x1 - x0;
        const double c1 = v1.squaredNorm();
        Vec3 rl = r, tl = t0;
        if (c1 > 1e-300) {
            rl = r - (2.0 / c1) * v1.dot(r) * v1;
            tl = t0 - (2.0 / c1) * v1.dot(t0) * v1;
        }
        const Vec3 v2 = t1 - tl;
        const double c2 = v2.squaredNorm();
        r = c2 > 1e-300 ? Vec3(rl - (2.0 / c2) * v2.dot(rl) * v2) : rl;
        x0 = x1;
        t0 = t1;
    }
    return r;
}

inline FrenetApparatus straight_frame(const ParametricCurve3& c, double s, const FramePolicy& policy,
                                      const Vec3& T, double speed) {
    FrenetApparatus fa;
    fa.T = T;
    fa.speed = speed;
    fa.from_policy = true;
    switch (policy.mode) {
        case FramePolicy::Mode::strict:
            throw DegenerateFrame("curvature below " + std::to_string(tol::kStraight) + " at s=" + std::to_string(s) +
                                      " and the strict frame policy supplies no frame",
                                  s);
        case FramePolicy::Mode::fixed_frame: {
            if (!policy.n0) throw ConfigError("fixed frame policy requires N0");
            const Vec3 n0 = *policy.n0;
            if (std::abs(n0.norm() - 1.0) > 1e-9 || std::abs(n0.dot(T)) > 1e-9)
                throw DegenerateFrame("fixed frame N0 must be a unit vector perpendicular to T at s=" +
                                          std::to_string(s),
                                      s);
            fa.N = n0;
            fa.B = T.cross(n0);
            return fa;
        }
        case FramePolicy::Mode::rotation_minimizing: {
            // Transport the frame of the nearest curved point; a curve that is
            // straight everywhere gets a constant frame.
            const int probes = 512;
            const double h = c.domain.length() / probes;
            std::optional<double> anchor;
            for (int k = 1; k <= probes && !anchor; ++k) {
                for (double cand : {s - k * h, s + k * h}) {
                    if (!c.domain.contains(cand)) continue;
                    if (curvature_raw(c, cand) >= 1e-6) {
                        anchor = cand;
                        break;
                    }
                }
            }
            Vec3 n;
            if (anchor) {
                n = transport_rotation_minimizing(c, *anchor, s, frenet_raw_frame(c, *anchor).N);
            } else if (policy.n0) {
                n = *policy.n0;
            } else {
                n = perpendicular_to(T);
            }
            n = n - n.dot(T) * T;
            if (n.norm() < 1e-12) n = perpendicular_to(T);
            fa.N = n.normalized();
            fa.B = T.cross(fa.N);
            return fa;
        }
    }
    return fa;
}

}  // namespace detail

/// Frenet apparatus at s.  With Parametrization::arclength the curve must be
/// unit speed within tol::kUnitSpeed and T = alpha', kappa = |alpha''|,
/// tau = det(alpha', alpha'', alpha''') / kappa^2.  With Parametrization::raw
/// the invariant formulas are used and kappa', tau' are raw-parameter derivatives.
inline FrenetApparatus frenet_at(const ParametricCurve3& curve, double s, const FramePolicy& policy,
                                 Parametrization param = Parametrization::arclength) {
    const auto p = curve.jets<4>(s);
    const auto d1 = differentiate(p);
    const auto d2 = differentiate(d1);
    const auto d3 = differentiate(d2);
    const auto v1 = truncate<1>(d1);
    const auto v2 = truncate<1>(d2);

    const Vec3 a1 = values(d1);
    const double speed = a1.norm();
    if (speed < tol::kRegularSpeed)
        throw DegenerateFrame("curve is not regular at s=" + std::to_string(s), s);
    if (param == Parametrization::arclength && std::abs(speed - 1.0) > tol::kUnitSpeed)
        throw NonUnitSpeed("curve is not unit speed at s=" + std::to_string(s) + " (|alpha'|=" +
                               std::to_string(speed) + ")",
                           speed);

    FrenetApparatus fa;
    fa.speed = speed;
    const Vec3 T = a1 / speed;
    const Jet<1> det = dot(v1, cross(v2, d3));

    if (param == Parametrization::arclength) {
        const Jet<1> k2 = dot(v2, v2);
        if (std::sqrt(k2.value()) < tol::kStraight) return detail::straight_frame(curve, s, policy, T, speed);
        const Jet<1> kappa = sqrt(k2);
        const Vec3 a2 = values(d2);
        fa.T = T;
        fa.N = (a2 - a2.dot(T) * T).normalized();
        fa.B = T.cross(fa.N);
        const Jet<1> tau = det / (kappa * kappa);
        fa.kappa = kappa.value();
        fa.kappa_prime = kappa.derivative(1);
        fa.tau = tau.value();
        fa.tau_prime = tau.derivative(1);
        return fa;
    }

    const auto cv = cross(v1, v2);
    const Jet<1> cn = sqrt(dot(cv, cv));
    const Jet<1> sp = sqrt(dot(v1, v1));
    if (cn.value() / (speed * speed * speed) < tol::kStraight)
        return detail::straight_frame(curve, s, policy, T, speed);
    const Jet<1> kappa = cn / (sp * sp * sp);
    const Jet<1> tau = det / (cn * cn);
    fa.T = T;
    fa.B = values(cv).normalized();
    fa.N = fa.B.cross(T);
    fa.kappa = kappa.value();
    fa.kappa_prime = kappa.derivative(1);
    fa.tau = tau.value();
    fa.tau_prime = tau.derivative(1);
    return fa;
}

struct SpeedCheck {
    bool is_unit_speed = false;
    double max_deviation = 0.0;
};

/// Max of | |alpha'(s)| - 1 | over a uniform grid of `samples` points.
inline SpeedCheck speed_check(const ParametricCurve3& curve, int samples) {
    if (samples < 2) throw ConfigError("speed_check needs at least 2 samples");
    SpeedCheck r;
    for (int i = 0; i < samples; ++i) {
        const double s = curve.domain.sample(i, samples);
        r.max_deviation = std::max(r.max_deviation, std::abs(curve.velocity(s).norm() - 1.0));
    }
    r.is_unit_speed = r.max_deviation <= tol::kUnitSpeed;
    return r;
}

struct HelixCheck {
    bool is_helix = false;
    double ratio_spread = 0.0;
    double mean_ratio = 0.0;
};

/// A curve is a general helix iff tau/kappa is constant.
inline HelixCheck is_general_helix(const ParametricCurve3& curve, int samples) {
    if (samples < 2) throw ConfigError("is_general_helix needs at least 2 samples");
    double lo = INFINITY, hi = -INFINITY, sum = 0.0;
    for (int i = 0; i < samples; ++i) {
        const double s = curve.domain.sample(i, samples);
        const auto fa = frenet_at(curve, s, FramePolicy::strict(), Parametrization::raw);
        const double r = fa.tau / fa.kappa;
        lo = std::min(lo, r);
        hi = std::max(hi, r);
        sum += r;
    }
    HelixCheck h;
    h.mean_ratio = sum / samples;
    h.ratio_spread = hi - lo;
    h.is_helix = h.ratio_spread <= 1e-6 * std::max(1.0, std::abs(h.mean_ratio));
    return h;
}

/// Tabulated arclength sigma(t) of a regular curve and its inverse.
class ArclengthMap {
public:
    ArclengthMap(std::vector<double> t, std::vector<double> sigma, std::vector<double> speed)
        : t_(std::move(t)), sigma_(std::move(sigma)), speed_(std::move(speed)) {
        slope_sigma_ = limited_slopes(t_, sigma_, speed_);
        std::vector<double> inv(speed_.size());
        for (std::size_t i = 0; i < inv.size(); ++i) inv[i] = 1.0 / speed_[i];
        slope_t_ = limited_slopes(sigma_, t_, inv);
    }

    double total_length() const { return sigma_.back(); }
    const std::vector<double>& parameters() const { return t_; }
    const std::vector<double>& arclengths() const { return sigma_; }

    /// Arclength from the start of the domain to parameter t.
    double arclength(double t) const { return hermite(t_, sigma_, slope_sigma_, t); }
    /// Parameter at arclength sigma.
    double parameter(double sigma) const { return hermite(sigma_, t_, slope_t_, sigma); }

private:
    // Exact endpoint derivatives, limited so the cubic stays monotone.
    static std::vector<double> limited_slopes(const std::vector<double>& x, const std::vector<double>& y,
                                              std::vector<double> m) {
        for (std::size_t i = 0; i + 1 < x.size(); ++i) {
            const double delta = (y[i + 1] - y[i]) / (x[i + 1] - x[i]);
            if (delta <= 0.0) {
                m[i] = m[i + 1] = 0.0;
                continue;
            }
            const double a = m[i] / delta, b = m[i + 1] / delta;
            const double r2 = a * a + b * b;
            if (r2 > 9.0) {
                const double k = 3.0 / std::sqrt(r2);
                m[i] = k * a * delta;
                m[i + 1] = k * b * delta;
            }
        }
        return m;
    }

    static double hermite(const std::vector<double>& x, const std::vector<double>& y, const std::vector<double>& m,
                          double q) {
        if (q <= x.front()) return y.front() + m.front() * (q - x.front());
        if (q >= x.back()) return y.back() + m.back() * (q - x.back());
        const auto it = std::upper_bound(x.begin(), x.end(), q);
        const std::size_t i = static_cast<std::size_t>(it - x.begin()) - 1;
        const double h = x[i + 1] - x[i];
        const double t = (q - x[i]) / h;
        const double t2 = t * t, t3 = t2 * t;
        return (2 * t3 - 3 * t2 + 1) * y[i] + (t3 - 2 * t2 + t) * h * m[i] + (-2 * t3 + 3 * t2) * y[i + 1] +
               (t3 - t2) * h * m[i + 1];
    }

    std::vector<double> t_, sigma_, speed_;
    std::vector<double> slope_sigma_, slope_t_;
};

/// Arclength table over grid_size intervals of the curve's domain (composite
/// Simpson on |alpha'| with 8 panels per interval).
inline ArclengthMap reparametrize_arclength(const ParametricCurve3& curve, int grid_size) {
    if (grid_size < 1) throw ConfigError("reparametrize_arclength needs a positive grid size");
    auto speed_at = [&](double t) {
        const double v = curve.velocity(t).norm();
        if (v < tol::kRegularSpeed)
            throw DegenerateFrame("curve is not regular at t=" + std::to_string(t), t);
        return v;
    };
    const int n = grid_size + 1;
    std::vector<double> t(n), sigma(n), speed(n);
    constexpr int panels = 8;
    for (int i = 0; i < n; ++i) {
        t[i] = curve.domain.sample(i, n);
        speed[i] = speed_at(t[i]);
        if (i == 0) continue;
        const double a = t[i - 1], h = (t[i] - a) / panels;
        double acc = speed[i - 1] + speed[i];
        for (int k = 1; k < panels; ++k) acc += (k % 2 ? 4.0 : 2.0) * speed_at(a + k * h);
        sigma[i] = sigma[i - 1] + acc * h / 3.0;
    }
    return ArclengthMap(std::move(t), std::move(sigma), std::move(speed));
}

}  // namespace gnr
