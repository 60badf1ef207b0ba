#pragma once

// The ruled-surface frame {q, h, a} of a GNR-surface and slant detection.

#include <cmath>
#include <numbers>
#include <optional>
#include <vector>

#include <Eigen/Eigenvalues>

#include "gnr/errors.hpp"
#include "gnr/surface.hpp"

namespace gnr {

struct RuledFrenetFrame {
    double s = 0;
    Vec3 q = Vec3::Zero();
    Vec3 h = Vec3::Zero();
    Vec3 a = Vec3::Zero();
    double theta = 0;
    double z = 0;  // theta' + tau
};

namespace detail {

inline RuledFrenetFrame ruled_frame_from(const Section& sec, double theta) {
    const auto& fr = sec.frame;
    RuledFrenetFrame out;
    out.s = sec.s;
    out.q = sec.ruling;
    out.theta = theta;
    // theta' = a1 a2' - a2 a1' holds for any unit (a1, a2); an explicit theta gives it exactly.
    const double theta_p = sec.theta_p ? *sec.theta_p : sec.a1 * sec.a2p - sec.a2 * sec.a1p;
    out.z = theta_p + fr.tau;
    if (fr.from_policy && fr.kappa == 0.0) {
        const double n = sec.ruling_prime.norm();
        if (n * n <= 1e-18) throw CylindricalRuling("q' vanishes at s=" + std::to_string(sec.s), sec.s);
        out.h = sec.ruling_prime / n;
        out.a = out.q.cross(out.h);
        return out;
    }
    const double c = std::cos(theta), sn = std::sin(theta), k = fr.kappa, z = out.z;
    const double w2 = k * k * c * c + z * z;
    if (w2 <= 1e-18)
        throw CylindricalRuling("central normal undefined at s=" + std::to_string(sec.s) +
                                    " (kappa^2 cos^2 theta + z^2 vanishes)",
                                sec.s);
    const double w = std::sqrt(w2);
    out.h = (-k * c * fr.T - z * sn * fr.N + z * c * fr.B) / w;
    out.a = (z * fr.T - k * c * sn * fr.N + k * c * c * fr.B) / w;
    return out;
}

inline double unwrap(double prev, double next) {
    constexpr double two_pi = 2.0 * std::numbers::pi;
    return next + two_pi * std::round((prev - next) / two_pi);
}

inline double theta_of(const Section& sec) {
    return sec.theta ? *sec.theta : std::atan2(sec.a2, sec.a1);
}

}  // namespace detail

inline RuledFrenetFrame frame_at(const GNRSurface& surface, double s) {
    const Section sec = surface.section(s);
    return detail::ruled_frame_from(sec, detail::theta_of(sec));
}

/// Frames along increasing s with theta unwrapped continuously.
inline std::vector<RuledFrenetFrame> frames_along(const GNRSurface& surface, const std::vector<double>& s_samples) {
    std::vector<RuledFrenetFrame> out;
    out.reserve(s_samples.size());
    std::optional<double> prev;
    for (double s : s_samples) {
        const Section sec = surface.section(s);
        double th = detail::theta_of(sec);
        if (prev && !sec.theta) th = detail::unwrap(*prev, th);
        prev = th;
        out.push_back(detail::ruled_frame_from(sec, th));
    }
    return out;
}

/// max |theta' + tau| over the samples.
inline double theta_integral_condition(const GNRSurface& surface, const std::vector<double>& s_samples) {
    double worst = 0.0;
    for (double s : s_samples) {
        const Section sec = surface.section(s);
        const double theta_p = sec.theta_p ? *sec.theta_p : sec.a1 * sec.a2p - sec.a2 * sec.a1p;
        worst = std::max(worst, std::abs(theta_p + sec.frame.tau));
    }
    return worst;
}

enum class SlantKind { q, h, a };

inline const char* to_string(SlantKind k) {
    switch (k) {
        case SlantKind::q: return "q";
        case SlantKind::h: return "h";
        case SlantKind::a: return "a";
    }
    return "?";
}

struct SlantReport {
    SlantKind kind = SlantKind::q;
    Vec3 axis = Vec3::UnitZ();
    double dot_spread = 0;
    double mean_cosine = 0;
    bool verdict = false;
};

inline constexpr double kSlantSpread = 1e-6;

/// Constant-angle test of q, h or a against a fixed direction.  Without a user
/// axis, the axis d minimizes the variance of <v(s), d> over the samples: the
/// eigenvector of the covariance of the v-samples with the smallest
/// eigenvalue.  When that eigenvalue is repeated the mean of the samples,
/// projected into its eigenspace, selects the direction.
inline SlantReport detect_slant(const GNRSurface& surface, const std::vector<double>& s_samples, SlantKind which,
                                std::optional<Vec3> user_axis = std::nullopt) {
    const auto frames = frames_along(surface, s_samples);
    std::vector<Vec3> v;
    v.reserve(frames.size());
    for (const auto& f : frames) v.push_back(which == SlantKind::q ? f.q : which == SlantKind::h ? f.h : f.a);

    SlantReport r;
    r.kind = which;
    if (user_axis) {
        r.axis = user_axis->normalized();
    } else {
        Vec3 mean = Vec3::Zero();
        for (const auto& x : v) mean += x;
        mean /= static_cast<double>(v.size());
        Eigen::Matrix3d cov = Eigen::Matrix3d::Zero();
        for (const auto& x : v) cov += (x - mean) * (x - mean).transpose();
        cov /= static_cast<double>(v.size());
        Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> es(cov);
        const Eigen::Vector3d ev = es.eigenvalues();
        const Eigen::Matrix3d vecs = es.eigenvectors();
        const double scale = std::max(ev(2), 1e-300);
        int dim = 1;
        while (dim < 3 && ev(dim) - ev(0) <= 1e-9 * scale + 1e-18) ++dim;
        if (dim == 1) {
            r.axis = vecs.col(0);
        } else {
            Vec3 p = Vec3::Zero();
            for (int i = 0; i < dim; ++i) p += mean.dot(vecs.col(i)) * vecs.col(i);
            r.axis = p.norm() > 1e-12 ? Vec3(p.normalized()) : Vec3(vecs.col(0));
        }
        // Fix the sign so the mean cosine is non-negative.
        if (mean.dot(r.axis) < 0) r.axis = -r.axis;
    }
    double lo = INFINITY, hi = -INFINITY, sum = 0;
    for (const auto& x : v) {
        const double d = x.dot(r.axis);
        lo = std::min(lo, d);
        hi = std::max(hi, d);
        sum += d;
    }
    r.dot_spread = hi - lo;
    r.mean_cosine = sum / static_cast<double>(v.size());
    r.verdict = r.dot_spread <= kSlantSpread;
    return r;
}

}  // namespace gnr
