#pragma once

// Generalized normal ruled surfaces F(s, u) = alpha(s) + u q(s) whose ruling
// q = a1 N + a2 B stays in the normal plane of the base curve.

#include <algorithm>
#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include "gnr/curve.hpp"
#include "gnr/errors.hpp"
#include "gnr/expr.hpp"
#include "gnr/oracle.hpp"
#include "gnr/vec.hpp"

namespace gnr {

namespace tol {
inline constexpr double kSingularSquared = 1e-20;  // u^2 f^2 + g^2 below this is singular
inline constexpr double kRulingNorm = 1e-10;       // | a1^2 + a2^2 - 1 |
inline constexpr double kDevelopable = 1e-8;       // max |f|
inline constexpr double kCylindrical = 1e-8;       // max |q'|
inline constexpr double kMinimal = 1e-7;           // max |H|
inline constexpr double kSpecialRuling = 1e-10;    // max |a1| or |a2| for binormal / principal normal
inline constexpr double kBaseCurve = 1e-8;         // base curve predicate residuals
inline constexpr double kRootTol = 1e-10;          // bisection / plateau tolerance for f
inline constexpr double kLocusCoefficient = 1e-12; // min |a1 kappa| for a finite locus u
}  // namespace tol

/// a1(s), a2(s) given directly or as cos(theta), sin(theta).
class RulingCoefficients {
public:
    static RulingCoefficients from_components(Expr a1, Expr a2) {
        RulingCoefficients r;
        r.a1_ = std::move(a1);
        r.a2_ = std::move(a2);
        return r;
    }
    static RulingCoefficients from_angle(Expr theta) {
        RulingCoefficients r;
        r.theta_ = std::move(theta);
        return r;
    }
    static RulingCoefficients from_strings(std::string_view a1, std::string_view a2) {
        return from_components(parse(a1), parse(a2));
    }

    const std::optional<Expr>& theta() const { return theta_; }

    struct Sample {
        Jet<2> a1, a2;
        std::optional<Jet<2>> theta;
    };

    Sample at(double s) const {
        try {
            if (theta_) {
                const Jet<2> th = evaluate<2>(theta_->root(), s);
                Sample r;
                sincos(th, r.a2, r.a1);
                r.theta = th;
                return r;
            }
            return {evaluate<2>(a1_.root(), s), evaluate<2>(a2_.root(), s), std::nullopt};
        } catch (const DomainError& e) {
            throw DomainError("ruling evaluation failed at s=" + std::to_string(s), e.subexpression(), e.offset());
        }
    }

    double norm_deviation(double s) const {
        const auto r = at(s);
        return std::abs(r.a1.value() * r.a1.value() + r.a2.value() * r.a2.value() - 1.0);
    }

private:
    Expr a1_, a2_;
    std::optional<Expr> theta_;
};

/// Uniform (s, u) sampling grid.
struct SampleGrid {
    std::vector<double> s;
    std::vector<double> u;

    static SampleGrid uniform(Interval s_range, int ns, Interval u_range, int nu) {
        SampleGrid g;
        for (int i = 0; i < ns; ++i) g.s.push_back(s_range.sample(i, ns));
        for (int j = 0; j < nu; ++j) g.u.push_back(u_range.sample(j, nu));
        return g;
    }
};

struct CharFunctionValues {
    double f = 0, g = 0;
    double f_prime = 0;  // df/ds
    double g_s = 0;      // dg/ds
    double g_u = 0;      // dg/du = -a1 kappa
};

/// Everything the formulas need along the base curve at one s.
struct Section {
    double s = 0;
    FrenetApparatus frame;
    double a1 = 0, a2 = 0, a1p = 0, a2p = 0, a1pp = 0, a2pp = 0;
    std::optional<double> theta, theta_p;
    double f = 0, f_prime = 0;
    double P = 0;  // a1' - a2 tau
    double Q = 0;  // a1 tau + a2'
    Vec3 alpha = Vec3::Zero();
    Vec3 ruling = Vec3::Zero();
    Vec3 ruling_prime = Vec3::Zero();  // -a1 kappa T + P N + Q B

    double g(double u) const { return 1.0 - u * a1 * frame.kappa; }
    double g_s(double u) const { return -u * (a1p * frame.kappa + a1 * frame.kappa_prime); }
    double g_u() const { return -a1 * frame.kappa; }
};

struct SurfacePointData {
    double s = 0, u = 0;
    Vec3 position = Vec3::Zero();
    Vec3 dFds = Vec3::Zero(), dFdu = Vec3::Zero();
    Vec3 normal_direction = Vec3::Zero();  // u f T - a2 g N + a1 g B (un-normalized)
    std::optional<Vec3> U;
    double E = 0, F_coeff = 0, G_coeff = 0;
    double L = 0, M = 0, N_coeff = 0;
    std::optional<double> K, H;
    double f = 0, g = 0;

    bool regular() const { return U.has_value(); }
};

struct StrictionSample {
    double s = 0;
    double u_star = 0;
    Vec3 point = Vec3::Zero();
};

struct SingularSample {
    double s = 0;
    double u = 0;
    Vec3 point = Vec3::Zero();
};

struct SingularLocusCurve {
    std::vector<SingularSample> samples;
    /// f vanished on every grid sample: the locus is the whole curve u = 1/(a1 kappa).
    bool developable_curve = false;
    /// Runs of grid samples where |f| stayed below the root tolerance (tangential zeros).
    std::vector<std::pair<double, double>> plateaus;
};

class GNRSurface {
public:
    GNRSurface(ParametricCurve3 base, RulingCoefficients ruling, FramePolicy policy = FramePolicy::strict(),
               Interval u_range = {-1.0, 1.0}, bool compat_parameter_derivatives = false)
        : base_(std::move(base)),
          ruling_(std::move(ruling)),
          policy_(std::move(policy)),
          u_range_(u_range),
          compat_(compat_parameter_derivatives) {}

    const ParametricCurve3& base() const { return base_; }
    const RulingCoefficients& ruling() const { return ruling_; }
    const FramePolicy& frame_policy() const { return policy_; }
    Interval u_range() const { return u_range_; }
    Interval s_range() const { return base_.domain; }
    bool compat_parameter_derivatives() const { return compat_; }
    Parametrization parametrization() const {
        return compat_ ? Parametrization::raw : Parametrization::arclength;
    }

    FrenetApparatus frame_at(double s) const { return frenet_at(base_, s, policy_, parametrization()); }

    Section section(double s) const {
        Section sec;
        sec.s = s;
        sec.frame = frame_at(s);
        const auto r = ruling_.at(s);
        sec.a1 = r.a1.value();
        sec.a2 = r.a2.value();
        sec.a1p = r.a1.derivative(1);
        sec.a2p = r.a2.derivative(1);
        sec.a1pp = r.a1.derivative(2);
        sec.a2pp = r.a2.derivative(2);
        if (r.theta) {
            sec.theta = r.theta->value();
            sec.theta_p = r.theta->derivative(1);
        }
        const auto& fr = sec.frame;
        sec.f = sec.a1p * sec.a2 - sec.a1 * sec.a2p - fr.tau;
        sec.f_prime = sec.a1pp * sec.a2 - sec.a1 * sec.a2pp - fr.tau_prime;
        sec.P = sec.a1p - sec.a2 * fr.tau;
        sec.Q = sec.a1 * fr.tau + sec.a2p;
        sec.alpha = base_.position(s);
        sec.ruling = sec.a1 * fr.N + sec.a2 * fr.B;
        sec.ruling_prime = -sec.a1 * fr.kappa * fr.T + sec.P * fr.N + sec.Q * fr.B;
        return sec;
    }

    /// F(s, u) evaluated from the curve and the ruling vector only.
    Vec3 position(double s, double u) const {
        const auto fr = frame_at(s);
        const auto r = ruling_.at(s);
        return base_.position(s) + u * (r.a1.value() * fr.N + r.a2.value() * fr.B);
    }

    // Holds a copy, so the map may outlive this surface.
    oracle::SurfaceMap as_map() const {
        return [self = *this](double s, double u) { return self.position(s, u); };
    }

private:
    ParametricCurve3 base_;
    RulingCoefficients ruling_;
    FramePolicy policy_;
    Interval u_range_;
    bool compat_;
};

/// q = a1 N + a2 B at s.
inline Vec3 ruling_at(const GNRSurface& surface, double s) { return surface.section(s).ruling; }

inline CharFunctionValues char_functions(const Section& sec, double u) {
    return {sec.f, sec.g(u), sec.f_prime, sec.g_s(u), sec.g_u()};
}

inline CharFunctionValues char_functions(const GNRSurface& surface, double s, double u) {
    return char_functions(surface.section(s), u);
}

/// Full local geometry at (s, u).  U, K and H are left empty at singular points.
inline SurfacePointData evaluate_point(const Section& sec, double u) {
    const auto& fr = sec.frame;
    SurfacePointData d;
    d.s = sec.s;
    d.u = u;
    d.f = sec.f;
    d.g = sec.g(u);
    const double f = d.f, g = d.g, kappa = fr.kappa, tau = fr.tau;
    const double P = sec.P, Q = sec.Q, a1 = sec.a1, a2 = sec.a2;

    d.position = sec.alpha + u * sec.ruling;
    d.dFds = g * fr.T + u * P * fr.N + u * Q * fr.B;
    d.dFdu = sec.ruling;
    d.normal_direction = u * f * fr.T - a2 * g * fr.N + a1 * g * fr.B;

    d.E = g * g + u * u * (P * P + Q * Q);
    d.F_coeff = d.dFds.dot(d.dFdu);
    d.G_coeff = d.dFdu.dot(d.dFdu);
    d.N_coeff = 0.0;  // d^2F/du^2 = 0

    const double w2 = u * u * f * f + g * g;
    if (w2 < tol::kSingularSquared) return d;
    const double w = std::sqrt(w2);
    d.U = d.normal_direction / w;

    const double g_s = sec.g_s(u);
    d.L = (u * f * (g_s - u * kappa * P) +
           g * (-a2 * kappa * g + u * a2 * tau * Q + u * (-sec.f_prime + a1 * tau * P))) /
          w;
    d.M = -f / w;
    d.K = -d.M * d.M / d.E;
    d.H = d.L / (2.0 * d.E);
    return d;
}

inline SurfacePointData evaluate_point(const GNRSurface& surface, double s, double u) {
    return evaluate_point(surface.section(s), u);
}

/// As evaluate_point, but a singular point is an error.
inline SurfacePointData surface_point(const GNRSurface& surface, double s, double u) {
    auto d = evaluate_point(surface, s, u);
    if (!d.regular()) throw SingularPoint(s, u, d.f, d.g);
    return d;
}

inline StrictionSample striction_parameter(const Section& sec) {
    const double k = sec.frame.kappa;
    const double denom = sec.a1 * sec.a1 * k * k + sec.P * sec.P + sec.Q * sec.Q;
    if (denom < 1e-18)
        throw CylindricalRuling("ruling derivative vanishes at s=" + std::to_string(sec.s), sec.s);
    const double u = sec.a1 * k / denom;
    return {sec.s, u, sec.alpha + u * sec.ruling};
}

inline StrictionSample striction_parameter(const GNRSurface& surface, double s) {
    return striction_parameter(surface.section(s));
}

/// Points with f = 0 and g = 0.  f is sampled on the grid; samples whose frame
/// is unavailable are skipped.
inline SingularLocusCurve singular_locus(const GNRSurface& surface, const std::vector<double>& s_samples) {
    SingularLocusCurve out;
    if (s_samples.size() < 2) return out;
    std::vector<std::optional<Section>> secs(s_samples.size());
    for (std::size_t i = 0; i < s_samples.size(); ++i) {
        try {
            secs[i] = surface.section(s_samples[i]);
        } catch (const DegenerateFrame&) {
        } catch (const NonUnitSpeed&) {
        }
    }
    auto emit = [&](const Section& sec) {
        const double c = sec.a1 * sec.frame.kappa;
        if (std::abs(c) <= tol::kLocusCoefficient) return;
        const double u = 1.0 / c;
        out.samples.push_back({sec.s, u, sec.alpha + u * sec.ruling});
    };
    auto flat = [&](std::size_t i) { return secs[i] && std::abs(secs[i]->f) < tol::kRootTol; };

    bool all_flat = true;
    for (std::size_t i = 0; i < secs.size(); ++i) all_flat = all_flat && (flat(i) || !secs[i]);
    bool any = std::any_of(secs.begin(), secs.end(), [](const auto& x) { return x.has_value(); });
    if (all_flat && any) {
        out.developable_curve = true;
        out.plateaus.emplace_back(s_samples.front(), s_samples.back());
        for (const auto& sec : secs)
            if (sec) emit(*sec);
        return out;
    }

    std::size_t i = 0;
    while (i < secs.size()) {
        if (flat(i)) {
            std::size_t j = i;
            while (j + 1 < secs.size() && flat(j + 1)) ++j;
            if (j > i) out.plateaus.emplace_back(s_samples[i], s_samples[j]);
            for (std::size_t k = i; k <= j; ++k) emit(*secs[k]);
            i = j + 1;
            continue;
        }
        if (i + 1 < secs.size() && secs[i] && secs[i + 1] && !flat(i + 1) &&
            std::signbit(secs[i]->f) != std::signbit(secs[i + 1]->f)) {
            double a = s_samples[i], b = s_samples[i + 1], fa = secs[i]->f;
            std::optional<Section> best;
            while (b - a > tol::kRootTol) {
                const double m = 0.5 * (a + b);
                Section sm = surface.section(m);
                if (sm.f == 0.0) {
                    a = b = m;
                    break;
                }
                if (std::signbit(sm.f) == std::signbit(fa)) {
                    a = m;
                    fa = sm.f;
                } else {
                    b = m;
                }
            }
            emit(surface.section(0.5 * (a + b)));
        }
        ++i;
    }
    return out;
}

struct ClassificationReport {
    bool regular = true;
    bool developable = false;
    bool cylindrical = false;
    bool minimal_candidate = false;
    bool binormal = false;
    bool principal_normal = false;

    double max_abs_f = 0;
    double max_abs_f_at = 0;
    double max_ruling_rate = 0;
    double max_ruling_rate_at = 0;
    double max_abs_H = 0;
    std::pair<double, double> max_abs_H_at{0, 0};
    double max_abs_a1 = 0;
    double max_abs_a2 = 0;
    std::optional<SingularSample> singular_witness;
    int singular_grid_points = 0;
};

/// Verdicts over the grid.  "regular" means no singular point with u inside the
/// surface's u range; "minimal_candidate" means |H| <= tol::kMinimal at every
/// regular grid point.
inline ClassificationReport classify(const GNRSurface& surface, const SampleGrid& grid) {
    ClassificationReport r;
    for (double s : grid.s) {
        const Section sec = surface.section(s);
        if (std::abs(sec.f) >= r.max_abs_f) {
            r.max_abs_f = std::abs(sec.f);
            r.max_abs_f_at = s;
        }
        const double rate = sec.ruling_prime.norm();
        if (rate >= r.max_ruling_rate) {
            r.max_ruling_rate = rate;
            r.max_ruling_rate_at = s;
        }
        r.max_abs_a1 = std::max(r.max_abs_a1, std::abs(sec.a1));
        r.max_abs_a2 = std::max(r.max_abs_a2, std::abs(sec.a2));
        for (double u : grid.u) {
            const auto d = evaluate_point(sec, u);
            if (!d.regular()) {
                ++r.singular_grid_points;
                continue;
            }
            if (std::abs(*d.H) >= r.max_abs_H) {
                r.max_abs_H = std::abs(*d.H);
                r.max_abs_H_at = {s, u};
            }
        }
    }
    r.developable = r.max_abs_f <= tol::kDevelopable;
    r.cylindrical = r.max_ruling_rate <= tol::kCylindrical;
    r.minimal_candidate = r.max_abs_H <= tol::kMinimal;
    r.binormal = r.max_abs_a1 <= tol::kSpecialRuling;
    r.principal_normal = r.max_abs_a2 <= tol::kSpecialRuling;

    const auto locus = singular_locus(surface, grid.s);
    const Interval ur = surface.u_range();
    for (const auto& p : locus.samples)
        if (ur.contains(p.u)) {
            r.regular = false;
            r.singular_witness = p;
            break;
        }
    if (r.singular_grid_points > 0) r.regular = false;
    return r;
}

struct BaseCurveTests {
    bool geodesic = false;
    bool asymptotic = false;
    bool line_of_curvature = false;
    double geodesic_residual = 0;           // max |a1 kappa|
    double asymptotic_residual = 0;         // max |a2 kappa|
    double line_of_curvature_residual = 0;  // max of |a2' + a1 tau|, |a1' - a2 tau|
};

inline BaseCurveTests base_curve_tests(const GNRSurface& surface, const std::vector<double>& s_samples) {
    BaseCurveTests r;
    for (double s : s_samples) {
        const Section sec = surface.section(s);
        r.geodesic_residual = std::max(r.geodesic_residual, std::abs(sec.a1 * sec.frame.kappa));
        r.asymptotic_residual = std::max(r.asymptotic_residual, std::abs(sec.a2 * sec.frame.kappa));
        r.line_of_curvature_residual =
            std::max({r.line_of_curvature_residual, std::abs(sec.Q), std::abs(sec.P)});
    }
    r.geodesic = r.geodesic_residual <= tol::kBaseCurve;
    r.asymptotic = r.asymptotic_residual <= tol::kBaseCurve;
    r.line_of_curvature = r.line_of_curvature_residual <= tol::kBaseCurve;
    return r;
}

struct KHIdentityResult {
    double max_residual = 0;
    int checked = 0;
    int skipped_singular = 0;
};

/// max |K L + 2 H M^2| over the regular grid points.
inline KHIdentityResult check_KH_identity(const GNRSurface& surface, const SampleGrid& grid) {
    KHIdentityResult r;
    for (double s : grid.s) {
        const Section sec = surface.section(s);
        for (double u : grid.u) {
            const auto d = evaluate_point(sec, u);
            if (!d.regular()) {
                ++r.skipped_singular;
                continue;
            }
            ++r.checked;
            r.max_residual = std::max(r.max_residual, std::abs(*d.K * d.L + 2.0 * *d.H * d.M * d.M));
        }
    }
    return r;
}

}  // namespace gnr
