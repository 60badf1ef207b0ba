#pragma once

// Invariant suite: closed-form values against the finite-difference oracle and
// the algebraic identities every GNR-surface satisfies.

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "gnr/oracle.hpp"
#include "gnr/parallel.hpp"
#include "gnr/surface.hpp"

namespace gnr {

struct InvariantResult {
    std::string name;
    double residual = 0;
    double tolerance = 0;
    bool passed = false;
    bool skipped = false;
    std::string note;
};

inline bool oracle_close(double analytic, double reference) {
    return std::abs(analytic - reference) <= std::max(1e-6, 1e-4 * std::abs(reference));
}

struct OracleAgreement {
    int regular_points = 0;
    int agreeing = 0;
    int near_singular = 0;        // regular points with u^2 f^2 + g^2 < near_singular_radius^2
    int near_singular_agreeing = 0;
    int oracle_failures = 0;      // oracle reported a singular cross product
    double worst_excess = 0;      // max of |a - o| / max(1e-6, 1e-4 |o|)
    std::string worst_quantity;
    double worst_s = 0, worst_u = 0;

    int checked_away() const { return regular_points - near_singular; }
    int agreeing_away() const { return agreeing - near_singular_agreeing; }
    double fraction() const { return regular_points ? double(agreeing) / regular_points : 1.0; }
    bool all_away_agree() const { return agreeing_away() == checked_away(); }
};

/// E, F, G, L, M, N, K, H from the closed forms against the oracle applied to
/// the raw map (s, u) -> alpha(s) + u q(s).
inline OracleAgreement compare_with_oracle(const GNRSurface& surface, const SampleGrid& grid,
                                           const oracle::OracleConfig& cfg = {}, double near_singular_radius = 1e-3) {
    const auto map = surface.as_map();
    const std::size_t nu = grid.u.size();
    struct Cell {
        bool regular = false, near = false, ok = false, oracle_failed = false;
        double excess = 0;
        const char* quantity = "";
    };
    std::vector<Cell> cells(grid.s.size() * nu);
    parallel_for(grid.s.size(), [&](std::size_t i) {
        const Section sec = surface.section(grid.s[i]);
        for (std::size_t j = 0; j < nu; ++j) {
            Cell& c = cells[i * nu + j];
            const double u = grid.u[j];
            const auto d = evaluate_point(sec, u);
            if (!d.regular()) continue;
            c.regular = true;
            c.near = u * u * d.f * d.f + d.g * d.g < near_singular_radius * near_singular_radius;
            oracle::FundamentalForms ff;
            try {
                ff = oracle::fd_fundamental_forms(map, sec.s, u, cfg);
            } catch (const SingularPoint&) {
                c.oracle_failed = true;
                continue;
            }
            const auto kh = oracle::curvatures_from_forms(ff);
            const std::pair<const char*, std::pair<double, double>> pairs[] = {
                {"E", {d.E, ff.E}}, {"F", {d.F_coeff, ff.F}}, {"G", {d.G_coeff, ff.G}},
                {"L", {d.L, ff.L}}, {"M", {d.M, ff.M}},       {"N", {d.N_coeff, ff.N}},
                {"K", {*d.K, kh.K}}, {"H", {*d.H, kh.H}}};
            c.ok = true;
            for (const auto& [name, v] : pairs) {
                const double excess = std::abs(v.first - v.second) / std::max(1e-6, 1e-4 * std::abs(v.second));
                if (excess > c.excess) {
                    c.excess = excess;
                    c.quantity = name;
                }
                if (!oracle_close(v.first, v.second)) c.ok = false;
            }
        }
    });
    OracleAgreement r;
    for (std::size_t i = 0; i < grid.s.size(); ++i)
        for (std::size_t j = 0; j < nu; ++j) {
            const Cell& c = cells[i * nu + j];
            if (!c.regular) continue;
            ++r.regular_points;
            if (c.near) ++r.near_singular;
            if (c.oracle_failed) {
                ++r.oracle_failures;
                continue;
            }
            if (c.ok) {
                ++r.agreeing;
                if (c.near) ++r.near_singular_agreeing;
            }
            if (!c.near && c.excess > r.worst_excess) {
                r.worst_excess = c.excess;
                r.worst_quantity = c.quantity;
                r.worst_s = grid.s[i];
                r.worst_u = grid.u[j];
            }
        }
    return r;
}

namespace detail {

// Richardson-extrapolated central difference of a vector function of s.
template <typename Fn>
Vec3 vector_rate(Fn&& fn, double s, double h = 1e-3) {
    return oracle::richardson([&](double k) -> Vec3 { return (fn(s + k) - fn(s - k)) / (2 * k); },
                              h * std::max(1.0, std::abs(s)), 3);
}

inline InvariantResult make_result(std::string name, double residual, double tolerance, std::string note = {}) {
    return {std::move(name), residual, tolerance, residual <= tolerance, false, std::move(note)};
}

inline InvariantResult skipped(std::string name, std::string note) {
    return {std::move(name), 0.0, 0.0, true, true, std::move(note)};
}

}  // namespace detail

/// |det(alpha', q, q') + f| with q' differenced from q(s) directly.
inline double developability_determinant_residual(const GNRSurface& surface, double s) {
    const Section sec = surface.section(s);
    const Vec3 qp = detail::vector_rate([&](double x) { return ruling_at(surface, x); }, s);
    return std::abs(triple(surface.base().velocity(s), sec.ruling, qp) + sec.f);
}

/// |<c', q'>| along the striction curve c = alpha + u* q, both rates differenced.
inline double striction_orthogonality_residual(const GNRSurface& surface, double s) {
    (void)striction_parameter(surface, s);  // throws CylindricalRuling where u* is undefined
    const Vec3 cp = detail::vector_rate([&](double x) { return striction_parameter(surface, x).point; }, s);
    const Vec3 qp = detail::vector_rate([&](double x) { return ruling_at(surface, x); }, s);
    return std::abs(cp.dot(qp));
}

struct VerifyOptions {
    oracle::OracleConfig oracle;
    double near_singular_radius = 1e-3;
};

inline std::vector<InvariantResult> verify_surface(const GNRSurface& surface, const SampleGrid& grid,
                                                   const VerifyOptions& opts = {}) {
    std::vector<InvariantResult> out;
    const bool arclength = !surface.compat_parameter_derivatives();
    const char* raw_note = "requires the arclength parameter; skipped with compat_parameter_derivatives";

    std::vector<Section> secs;
    secs.reserve(grid.s.size());
    for (double s : grid.s) secs.push_back(surface.section(s));

    {
        double worst = 0;
        for (const auto& sec : secs) {
            const auto& fr = sec.frame;
            worst = std::max({worst, std::abs(fr.T.norm() - 1), std::abs(fr.N.norm() - 1), std::abs(fr.B.norm() - 1),
                              std::abs(fr.T.dot(fr.N)), std::abs(fr.T.dot(fr.B)), std::abs(fr.N.dot(fr.B)),
                              (fr.T.cross(fr.N) - fr.B).norm()});
        }
        out.push_back(detail::make_result("frenet_orthonormality", worst, 1e-10));
    }
    {
        double worst = 0;
        for (const auto& sec : secs) worst = std::max(worst, std::abs(sec.ruling.norm() - 1));
        out.push_back(detail::make_result("ruling_unit_norm", worst, 1e-10));
    }

    double fgn = 0, cross = 0, kpos = 0, normal_unit = 0, normal_perp = 0;
    for (const auto& sec : secs)
        for (double u : grid.u) {
            const auto d = evaluate_point(sec, u);
            fgn = std::max({fgn, std::abs(d.F_coeff), std::abs(d.G_coeff - 1), std::abs(d.N_coeff)});
            cross = std::max(cross, (d.dFds.cross(d.dFdu) - d.normal_direction).norm());
            if (!d.regular()) continue;
            kpos = std::max(kpos, *d.K);
            normal_unit = std::max(normal_unit, std::abs(d.U->norm() - 1));
            normal_perp = std::max({normal_perp, std::abs(d.U->dot(d.dFds)), std::abs(d.U->dot(d.dFdu))});
        }
    out.push_back(detail::make_result("fundamental_identities", fgn, 1e-12, "max of |F|, |G - 1|, |N|"));
    out.push_back(detail::make_result("normal_cross_identity", cross, 1e-9));
    out.push_back(detail::make_result("gaussian_curvature_nonpositive", kpos, 0.0));
    out.push_back(detail::make_result("unit_normal_norm", normal_unit, 1e-12));
    out.push_back(detail::make_result("unit_normal_tangency", normal_perp, 1e-9));

    const auto kh = check_KH_identity(surface, grid);
    out.push_back(detail::make_result("kh_identity", kh.max_residual, 1e-8,
                                      std::to_string(kh.skipped_singular) + " singular grid points skipped"));

    if (arclength) {
        double worst = 0;
        for (double s : grid.s) worst = std::max(worst, developability_determinant_residual(surface, s));
        out.push_back(detail::make_result("developability_determinant", worst, 1e-9));
    } else {
        out.push_back(detail::skipped("developability_determinant", raw_note));
    }

    if (arclength) {
        double worst = 0;
        int skipped_cyl = 0;
        for (double s : grid.s) {
            try {
                worst = std::max(worst, striction_orthogonality_residual(surface, s));
            } catch (const CylindricalRuling&) {
                ++skipped_cyl;
            }
        }
        out.push_back(detail::make_result("striction_orthogonality", worst, 1e-7,
                                          std::to_string(skipped_cyl) + " cylindrical samples skipped"));
    } else {
        out.push_back(detail::skipped("striction_orthogonality", raw_note));
    }

    {
        const auto locus = singular_locus(surface, grid.s);
        double worst = 0;
        for (const auto& p : locus.samples) {
            const Section sec = surface.section(p.s);
            worst = std::max({worst, std::abs(sec.f), std::abs(sec.g(p.u))});
        }
        out.push_back(detail::make_result("singular_locus_residual", worst, 1e-8,
                                          std::to_string(locus.samples.size()) + " samples"));
    }

    {
        int mismatches = 0;
        for (const auto& sec : secs)
            for (double u : grid.u) {
                const auto d = evaluate_point(sec, u);
                if (!d.regular()) continue;
                if ((std::abs(*d.K) <= 1e-12) != (std::abs(sec.f) <= tol::kDevelopable)) ++mismatches;
            }
        out.push_back(detail::make_result("flatness_matches_developability", mismatches, 0.0,
                                          "count of regular points where |K| <= 1e-12 disagrees with |f| <= 1e-8"));
    }

    const auto cls = classify(surface, grid);
    if (cls.developable) {
        double worst = 0;
        for (const auto& sec : secs) {
            const Vec3 expected = -sec.a2 * sec.frame.N + sec.a1 * sec.frame.B;
            for (double u : grid.u) {
                if (sec.g(u) <= 0) continue;
                const auto d = evaluate_point(sec, u);
                if (!d.regular()) continue;
                worst = std::max(worst, (*d.U - expected).norm());
            }
        }
        out.push_back(detail::make_result("developable_normal_constant_along_rulings", worst, 1e-9));
    } else {
        out.push_back(detail::skipped("developable_normal_constant_along_rulings", "surface is not developable"));
    }

    if (arclength) {
        const auto agr = compare_with_oracle(surface, grid, opts.oracle, opts.near_singular_radius);
        InvariantResult r = detail::make_result("oracle_agreement", agr.checked_away() - agr.agreeing_away(), 0.0);
        r.note = std::to_string(agr.agreeing) + "/" + std::to_string(agr.regular_points) +
                 " regular points agree; " + std::to_string(agr.near_singular) +
                 " near-singular points excluded; worst excess " + std::to_string(agr.worst_excess) +
                 (agr.worst_quantity.empty() ? "" : " in " + agr.worst_quantity);
        out.push_back(r);
    } else {
        out.push_back(detail::skipped("oracle_agreement", raw_note));
    }
    return out;
}

}  // namespace gnr
