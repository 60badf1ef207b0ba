// Acceptance battery: one PASS/FAIL line per criterion.
//
// usage: acceptance <gnr-cli> <work-dir> [--known-failure N]...
//
// A criterion listed as a known failure still prints FAIL; it only changes the
// exit status, which is nonzero when the set of failing criteria differs from
// the known set in either direction.

#include <sys/wait.h>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <tuple>
#include <vector>

#include "fixtures.hpp"
#include "gnr/gnr.hpp"

using namespace gnr;
namespace fs = std::filesystem;
using fixtures::kPi;
using fixtures::kSqrt3;

namespace {

std::string g_cli;
fs::path g_work;

// Collects sub-checks of one criterion.
class Checks {
public:
    void le(const std::string& what, double value, double bound) {
        const bool ok = value <= bound;
        add(ok, what + ": " + fmt(value) + (ok ? " <= " : " > ") + fmt(bound));
    }
    void truth(const std::string& what, bool ok, const std::string& detail = {}) {
        add(ok, what + (detail.empty() ? "" : ": " + detail));
    }
    void note(const std::string& text) { lines_.push_back("        note " + text); }
    bool ok() const { return ok_; }
    const std::vector<std::string>& lines() const { return lines_; }

    static std::string fmt(double v) {
        char buf[64];
        std::snprintf(buf, sizeof buf, "%.3e", v);
        return buf;
    }

private:
    void add(bool ok, const std::string& text) {
        ok_ = ok_ && ok;
        lines_.push_back(std::string(ok ? "        ok   " : "        FAIL ") + text);
    }
    bool ok_ = true;
    std::vector<std::string> lines_;
};

std::vector<double> samples(Interval d, int n) {
    std::vector<double> out;
    for (int i = 0; i < n; ++i) out.push_back(d.sample(i, n));
    return out;
}

int run(const std::string& cmd) {
    const int st = std::system(cmd.c_str());
    return WIFEXITED(st) ? WEXITSTATUS(st) : -1;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

// ---------------------------------------------------------------------------

void helicoid(Checks& c) {
    const auto s = fixtures::helicoid();
    const auto grid = fixtures::grid_for(s, 64, 16);
    double df = 0, dg = 0, dH = 0, dK = 0;
    for (double x : grid.s) {
        const Section sec = s.section(x);
        df = std::max(df, std::abs(sec.f + 1));
        for (double u : grid.u) {
            const auto d = evaluate_point(sec, u);
            dg = std::max(dg, std::abs(d.g - 1));
            dH = std::max(dH, std::abs(*d.H));
            dK = std::max(dK, std::abs(*d.K + 1 / std::pow(1 + u * u, 2)));
        }
    }
    c.le("max |f + 1|", df, 1e-12);
    c.le("max |g - 1|", dg, 1e-12);
    c.le("max |H|", dH, 1e-9);
    c.le("max |K + 1/(1+u^2)^2|", dK, 1e-9);
    const auto cls = classify(s, grid);
    c.truth("regular, minimal, not developable", cls.regular && cls.minimal_candidate && !cls.developable);
}

void cylindrical_helix(Checks& c) {
    const auto s = fixtures::cylindrical_helix();
    const auto grid = fixtures::grid_for(s, 64, 16);
    double df = 0, dg = 0, dK = 0;
    for (double x : grid.s) {
        const Section sec = s.section(x);
        df = std::max(df, std::abs(sec.f));
        for (double u : grid.u) {
            const auto d = evaluate_point(sec, u);
            dg = std::max(dg, std::abs(d.g - (1 - u / 2 * std::sin(x / 2))));
            if (d.regular()) dK = std::max(dK, std::abs(*d.K));
        }
    }
    c.le("max |f|", df, 1e-10);
    c.le("max |g - (1 - (u/2) sin(s/2))|", dg, 1e-10);
    c.le("max |K| at regular points", dK, 1e-8);

    const auto locus = singular_locus(s, samples({0.2, kPi - 0.2}, 64));
    double du = 0, dgam = 0;
    for (const auto& p : locus.samples) {
        const double x = p.s, r2 = std::sqrt(2.0), ct = 1 / std::tan(x / 2);
        du = std::max(du, std::abs(p.u - 2 / std::sin(x / 2)));
        const Vec3 expected(r2 * ct * std::sin(x / r2) - std::cos(x / r2), -r2 * ct * std::cos(x / r2) - std::sin(x / r2),
                           x / r2 + r2 * ct);
        dgam = std::max(dgam, (p.point - expected).norm());
    }
    c.truth("locus has one sample per s", locus.samples.size() == 64,
            std::to_string(locus.samples.size()) + " samples, developable_curve=" +
                (locus.developable_curve ? "true" : "false"));
    c.le("max |u - 2/sin(s/2)|", du, 1e-8);
    c.le("max |gamma - closed form|", dgam, 1e-6);
}

void pedal(Checks& c) {
    const auto s = fixtures::pedal_curve();
    const auto grid = fixtures::grid_for(s, 64, 16);
    double df = 0, dg = 0;
    for (double x : grid.s) {
        const Section sec = s.section(x);
        df = std::max(df, std::abs(sec.f - (kSqrt3 / 2 * std::sin(x / 2) - 0.5)));
        for (double u : grid.u)
            dg = std::max(dg, std::abs(sec.g(u) - (1 - kSqrt3 / 2 * u * std::pow(std::cos(x / 2), 2))));
    }
    c.le("max |f - closed form|", df, 1e-9);
    c.le("max |g - closed form|", dg, 1e-9);

    const double s0 = 2 * std::asin(1 / kSqrt3), u0 = kSqrt3;
    const auto locus = singular_locus(s, grid.s);
    c.truth("one singular point on (-pi, pi)", locus.samples.size() == 1,
            std::to_string(locus.samples.size()) + " found");
    if (!locus.samples.empty()) {
        c.le("|s0 - 2 asin(1/sqrt3)|", std::abs(locus.samples[0].s - s0), 1e-8);
        c.le("|u0 - sqrt3|", std::abs(locus.samples[0].u - u0), 1e-7);
        const Section sec = s.section(locus.samples[0].s);
        c.le("|f| + |g| at (s0, u0)", std::abs(sec.f) + std::abs(sec.g(locus.samples[0].u)), 1e-8);
    }
    // Independent root search on the oracle side.
    const auto roots =
        oracle::find_roots([&](double x) { return s.section(x).f; }, s.s_range(), 129, 1e-12);
    c.truth("oracle bisection finds one root of f", roots.size() == 1);
    if (roots.size() == 1) c.le("|oracle s0 - 2 asin(1/sqrt3)|", std::abs(roots[0].at() - s0), 1e-8);
}

void asinh_compat(Checks& c) {
    const auto s = fixtures::asinh_compat();
    const auto grid = fixtures::grid_for(s, 73, 9);
    double df = 0, dg = 0, dgo = 0;
    const auto& curve = s.base();
    for (double x : grid.s) {
        const Section sec = s.section(x);
        const double r = std::sqrt(1 - x * x);
        df = std::max(df, std::abs(sec.f - (2 * x * x - r + 2) / (2 * (x * x + 1) * r)));
        // Oracle curvature |a' x a''| / |a'|^3 of the raw curve from differences.
        const Vec3 v = curve.velocity(x);
        const Vec3 a = oracle::richardson(
            [&](double h) -> Vec3 { return (curve.position(x + h) - 2 * curve.position(x) + curve.position(x - h)) / (h * h); },
            5e-2, 3);
        const double kappa_fd = v.cross(a).norm() / std::pow(v.norm(), 3);
        for (double u : grid.u) {
            const double g = sec.g(u);
            dg = std::max(dg, std::abs(g - (1 - u * x / (2 * (1 + x * x)))));
            dgo = std::max(dgo, std::abs(g - (1 - u * x * kappa_fd)));
        }
    }
    c.le("max |f - closed form|", df, 1e-9);
    c.le("max |g - (1 - us/(2(1+s^2)))|", dg, 1e-9);
    c.le("max |g - (1 - u a1 kappa_oracle)|", dgo, 1e-9);
    const auto cls = classify(s, grid);
    c.truth("regular and non-developable", cls.regular && !cls.developable);
}

std::vector<fixtures::NamedSurface> all_surfaces() {
    auto out = fixtures::golden_surfaces();
    for (auto& r : fixtures::random_surfaces(50)) out.push_back(std::move(r));
    return out;
}

void oracle_equivalence(Checks& c) {
    int regular = 0, agreeing = 0, away = 0, away_ok = 0, failures = 0;
    double worst = 0;
    std::string worst_where;
    for (const auto& [name, s] : all_surfaces()) {
        const auto a = compare_with_oracle(s, fixtures::grid_for(s, 40, 12));
        regular += a.regular_points;
        agreeing += a.agreeing;
        away += a.checked_away();
        away_ok += a.agreeing_away();
        failures += a.oracle_failures;
        if (a.worst_excess > worst) {
            worst = a.worst_excess;
            worst_where = name + " " + a.worst_quantity;
        }
    }
    const double frac = regular ? double(agreeing) / regular : 0;
    c.truth("fraction agreeing >= 0.99", frac >= 0.99,
            std::to_string(agreeing) + "/" + std::to_string(regular));
    c.truth("all points away from the singular set agree", away_ok == away,
            std::to_string(away_ok) + "/" + std::to_string(away));
    c.note("worst relative excess " + Checks::fmt(worst) + " (" + worst_where + "), oracle failures " +
           std::to_string(failures));
}

void identities(Checks& c) {
    const std::map<std::string, double> wanted{{"fundamental_identities", 1e-12},
                                               {"gaussian_curvature_nonpositive", 0.0},
                                               {"kh_identity", 1e-8},
                                               {"developability_determinant", 1e-9},
                                               {"normal_cross_identity", 1e-9}};
    std::map<std::string, double> worst;
    std::map<std::string, std::string> where;
    for (const auto& [name, s] : all_surfaces()) {
        VerifyOptions opts;
        for (const auto& r : verify_surface(s, fixtures::grid_for(s, 32, 9), opts)) {
            if (!wanted.count(r.name) || r.skipped) continue;
            if (!worst.count(r.name) || r.residual > worst[r.name]) {
                worst[r.name] = r.residual;
                where[r.name] = name;
            }
        }
    }
    for (const auto& [name, bound] : wanted) {
        if (!worst.count(name)) {
            c.truth(name, false, "not evaluated");
            continue;
        }
        c.le(name + " (worst on " + where[name] + ")", worst[name], bound);
    }
}

// Unit-speed curves on developable surfaces with both C and D nonzero.
struct TestCurve {
    std::string name;
    GNRSurface surface;
    SurfaceCurveSpec spec;
};

std::vector<TestCurve> tau_g_curves() {
    using fixtures::num;
    std::vector<TestCurve> out;
    // Cylinder over the unit circle: g = 1, so s = c t, u = u0 + d t with c^2 + d^2 = 1.
    out.push_back({"cylinder", GNRSurface(ParametricCurve3::from_strings("cos(s)", "sin(s)", "0", {-10, 10}),
                                          RulingCoefficients::from_strings("0", "1"), FramePolicy::strict(), {-1, 1}),
                   SurfaceCurveSpec::from_strings("0.8*t", "0.2 + 0.6*t", {0, 1})});
    // Cone over the unit circle with constant angle theta0: g = 1 - k u, k = cos(theta0).
    for (auto [theta0, u0, d] : {std::tuple{0.6, 0.1, 0.6}, std::tuple{-1.1, -0.3, 0.45}}) {
        const double k = std::cos(theta0), cc = std::sqrt(1 - d * d);
        out.push_back({"cone(theta0=" + num(theta0) + ")",
                       GNRSurface(ParametricCurve3::from_strings("cos(s)", "sin(s)", "0", {-10, 10}),
                                  RulingCoefficients::from_angle(parse(num(theta0))), FramePolicy::strict(),
                                  {-0.5, 0.5}),
                       SurfaceCurveSpec::from_strings(num(-cc / (k * d)) + "*ln(1 - " + num(k) + "*(" + num(u0) +
                                                          " + " + num(d) + "*t))",
                                                      num(u0) + " + " + num(d) + "*t", {0, 0.3})});
    }
    return out;
}

void developable(Checks& c) {
    const std::vector<fixtures::NamedSurface> surfaces{{"cylindrical_helix", fixtures::cylindrical_helix()},
                                                       {"helix_theta_flow", fixtures::helix_theta_flow()},
                                                       {"pedal_theta_flow", fixtures::pedal_theta_flow()}};
    double d_eig = 0, d_zero = 0, d_normal = 0, loc = 0, opposite = 0;
    int checked = 0, lower_sheet = 0;
    for (const auto& [name, s] : surfaces) {
        const auto grid = fixtures::grid_for(s, 48, 13);
        for (double x : grid.s) {
            const Section sec = s.section(x);
            std::optional<Vec3> u_ref;
            for (double u : grid.u) {
                const double g = sec.g(u);
                if (std::abs(g) <= 1e-6) continue;
                const auto w = weingarten(s, x, u);
                const auto d = evaluate_point(sec, u);
                if (!d.regular()) continue;
                if (g > 0) {
                    ++checked;
                    d_eig = std::max(d_eig, std::abs(w.lambda1 - 2 * *d.H));
                    d_zero = std::max(d_zero, std::abs(w.lambda2));
                    if (!u_ref) u_ref = *d.U;
                    d_normal = std::max(d_normal, (*d.U - *u_ref).norm());
                } else {
                    ++lower_sheet;
                    opposite = std::max(opposite, std::abs(w.lambda1 + 2 * *d.H));
                }
            }
        }
        loc = std::max(loc, base_curve_tests(s, grid.s).line_of_curvature_residual);
    }
    c.le("max |lambda1 - 2H| on g > 0 (" + std::to_string(checked) + " points)", d_eig, 1e-8);
    c.le("max |lambda2|", d_zero, 1e-8);
    c.le("max |U(s,u) - U(s,u')| on g > 0", d_normal, 1e-9);
    c.le("base curve line-of-curvature residual", loc, 1e-8);
    c.note("on g < 0 (" + std::to_string(lower_sheet) + " points) the unit normal is reversed and lambda1 = -2H, max |lambda1 + 2H| = " +
           Checks::fmt(opposite));

    double worst = 0, worst_neg = 0;
    for (const auto& tc : tau_g_curves()) {
        const auto map = tc.surface.as_map();
        auto s_of = [&](double t) { return eval_scalar(tc.spec.s_of_t, t); };
        auto u_of = [&](double t) { return eval_scalar(tc.spec.u_of_t, t); };
        double w = 0, wn = 0;
        for (double t : samples(tc.spec.t_domain, 7)) {
            const auto inv = curve_invariants(tc.surface, tc.spec, t);
            const auto o = oracle::fd_curve_on_surface(map, s_of, u_of, t);
            w = std::max(w, std::abs(inv.tau_g - o.inner));
            wn = std::max(wn, std::abs(inv.tau_g + o.inner));
        }
        c.le("tau_g = C D a2 kappa vs oracle <U', U x v> on " + tc.name, w, 1e-6);
        worst = std::max(worst, w);
        worst_neg = std::max(worst_neg, wn);
    }
    c.note("diagnostic: max |tau_g + <U', U x v>| = " + Checks::fmt(worst_neg) +
           "; the closed form equals -<U', U x v>, the Darboux-frame convention");
}

void slant(Checks& c) {
    const auto s = fixtures::helix_theta_flow();
    const auto xs = samples(s.s_range(), 61);
    double z = 0, ht = 0;
    for (const auto& fr : frames_along(s, xs)) {
        z = std::max(z, std::abs(fr.z));
        ht = std::max(ht, std::abs(std::abs(fr.h.dot(s.section(fr.s).frame.T)) - 1));
    }
    c.le("max |z|", z, 1e-10);
    c.le("max ||<h, T>| - 1|", ht, 1e-8);
    const auto r = detect_slant(s, xs, SlantKind::h);
    c.truth("h-slant verdict", r.verdict);
    c.le("h dot spread", r.dot_spread, 1e-6);

    const auto p = fixtures::pedal_theta_flow();
    const auto px = samples(p.s_range(), 61);
    c.le("pedal construction max |z|", theta_integral_condition(p, px), 1e-10);
    const auto pr = detect_slant(p, px, SlantKind::h);
    c.truth("pedal h-slant verdict is false", !pr.verdict, "dot spread " + Checks::fmt(pr.dot_spread));
}

void parser_jets(Checks& c) {
    fixtures::RandomExpr gen(1234);
    std::mt19937_64 rng(42);
    std::uniform_real_distribution<double> pt(-2.0, 2.0);
    int accepted = 0, attempts = 0, bad = 0;
    double worst = 0;
    std::string worst_expr;
    while (accepted < 1000 && attempts < 100000) {
        ++attempts;
        const auto e = parse(gen.generate(3));
        const double x = pt(rng);
        Jet4 j;
        double d1 = 0, d2 = 0;
        try {
            j = eval_jet(e, x);
            auto fn = [&](double y) { return eval_scalar(e, y); };
            const double h = 1e-2 * std::max(1.0, std::abs(x));
            d1 = oracle::fd_derivative(fn, x, 1, h, 4);
            d2 = oracle::fd_derivative(fn, x, 2, h, 4);
            // abs has a kink; a stencil straddling it does not estimate a derivative.
            if (std::abs(oracle::fd_derivative(fn, x, 2, h / 2, 4) - d2) > 1e-7 * std::max(1.0, std::abs(d2))) continue;
        } catch (const DomainError&) {
            continue;
        }
        if (!(std::abs(j.value()) < 1e3 && std::abs(j.derivative(2)) < 1e3)) continue;
        ++accepted;
        const double e1 = std::abs(j.derivative(1) - d1) / std::max(1.0, std::abs(j.derivative(1)));
        const double e2 = std::abs(j.derivative(2) - d2) / std::max(1.0, std::abs(j.derivative(2)));
        if (std::max(e1, e2) > 1e-6) ++bad;
        if (std::max(e1, e2) > worst) {
            worst = std::max(e1, e2);
            worst_expr = to_string(e);
        }
    }
    c.truth("1000 expression/point pairs accepted", accepted == 1000,
            std::to_string(accepted) + " of " + std::to_string(attempts) + " drawn");
    c.truth("first and second derivatives within 1e-6 relative", bad == 0, std::to_string(bad) + " mismatches");
    c.note("worst relative error " + Checks::fmt(worst) + " for " + worst_expr);

    // p(s) = sum c_k s^k, k <= 4; exact derivatives up to order 4.
    std::uniform_real_distribution<double> coef(-3.0, 3.0);
    double pe = 0;
    for (int trial = 0; trial < 200; ++trial) {
        double cs[5];
        std::string text;
        for (int k = 0; k <= 4; ++k) {
            cs[k] = std::round(coef(rng) * 8) / 8;
            text += (k ? " + " : "") + fixtures::num(cs[k]) + "*s^" + std::to_string(k);
        }
        const double x = std::round(pt(rng) * 16) / 16;
        const auto j = eval_jet(parse(text), x);
        for (int d = 0; d <= 4; ++d) {
            double exact = 0;
            for (int k = d; k <= 4; ++k) {
                double fall = 1;
                for (int i = 0; i < d; ++i) fall *= k - i;
                exact += cs[k] * fall * std::pow(x, k - d);
            }
            pe = std::max(pe, std::abs(j.derivative(d) - exact));
        }
    }
    c.le("polynomial degree <= 4 jet error (dyadic data)", pe, 1e-12);
}

void cli(Checks& c) {
    fs::create_directories(g_work);
    const fs::path scenes = GNR_SCENES_DIR;
    std::vector<fs::path> files;
    for (const auto& e : fs::directory_iterator(scenes))
        if (e.path().extension() == ".json") files.push_back(e.path());
    std::sort(files.begin(), files.end());
    c.truth("golden configs present", files.size() >= 4, std::to_string(files.size()) + " files");
    for (const auto& f : files) {
        const auto a = g_work / (f.stem().string() + ".a.json"), b = g_work / (f.stem().string() + ".b.json"),
                   one = g_work / (f.stem().string() + ".t1.json");
        const int ra = run(g_cli + " report " + f.string() + " --out " + a.string() + " 2>/dev/null");
        const int rb = run(g_cli + " report " + f.string() + " --out " + b.string() + " 2>/dev/null");
        const int r1 = run("GNR_THREADS=1 " + g_cli + " report " + f.string() + " --out " + one.string() + " 2>/dev/null");
        const auto ta = slurp(a);
        c.truth("report " + f.filename().string() + " byte-identical across runs and thread counts",
                ra == 0 && rb == 0 && r1 == 0 && !ta.empty() && ta == slurp(b) && ta == slurp(one),
                std::to_string(ta.size()) + " bytes");
    }
    const auto mesh = g_work / "helicoid.obj", curves = g_work / "helicoid_curves.obj";
    const int rm = run(g_cli + " mesh " + (scenes / "helicoid.json").string() + " --out " + mesh.string() +
                       " --curves-out " + curves.string() + " 2>/dev/null");
    std::ifstream in(mesh);
    std::string line;
    std::size_t v = 0, f = 0;
    while (std::getline(in, line)) {
        if (line.rfind("v ", 0) == 0) ++v;
        if (line.rfind("f ", 0) == 0) ++f;
    }
    c.truth("mesh exit status 0", rm == 0);
    c.truth("helicoid mesh has ns*nu = 1024 vertices", v == 1024, std::to_string(v));
    c.truth("helicoid mesh has 2(ns-1)(nu-1) = 1890 triangles", f == 1890, std::to_string(f));
}

struct Criterion {
    int id;
    const char* title;
    double budget_seconds;  // 0: no runtime bound
    std::function<void(Checks&)> body;
};

}  // namespace

int main(int argc, char** argv) {
    if (argc < 3) {
        std::fprintf(stderr, "usage: acceptance <gnr-cli> <work-dir> [--known-failure N]...\n");
        return 2;
    }
    g_cli = argv[1];
    g_work = argv[2];
    std::set<int> known;
    for (int i = 3; i + 1 < argc; i += 2)
        if (std::string(argv[i]) == "--known-failure") known.insert(std::atoi(argv[i + 1]));

    const std::vector<Criterion> criteria{
        {1, "right helicoid: f, g, H, K", 1.0, helicoid},
        {2, "cylindrical helix: f, g, K, singular locus", 2.0, cylindrical_helix},
        {3, "pedal curve: f, g, isolated singular point", 2.0, pedal},
        {4, "asinh curve in parameter mode: f, g, classification", 0.0, asinh_compat},
        {5, "oracle equivalence on golden and 50 random surfaces", 60.0, oracle_equivalence},
        {6, "identity suite on golden and random surfaces", 0.0, identities},
        {7, "developable suite: Weingarten map, normal, line of curvature, tau_g", 0.0, developable},
        {8, "slant suite: theta' = -tau on a helix and on the pedal curve", 0.0, slant},
        {9, "parser and jets: random expressions, polynomial exactness", 0.0, parser_jets},
        {10, "CLI determinism and mesh counts", 0.0, cli},
    };

    std::set<int> failed;
    for (const auto& cr : criteria) {
        Checks c;
        const auto t0 = std::chrono::steady_clock::now();
        try {
            cr.body(c);
        } catch (const std::exception& e) {
            c.truth("no exception", false, e.what());
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        if (cr.budget_seconds > 0) c.le("runtime (s)", secs, cr.budget_seconds);
        if (!c.ok()) failed.insert(cr.id);
        std::printf("%s %2d  %s  (%.2f s)%s\n", c.ok() ? "PASS" : "FAIL", cr.id, cr.title, secs,
                    !c.ok() && known.count(cr.id) ? "  [known failure]" : "");
        for (const auto& l : c.lines()) std::printf("%s\n", l.c_str());
        std::fflush(stdout);
    }

    std::printf("%zu/%zu criteria pass\n", criteria.size() - failed.size(), criteria.size());
    if (failed == known) return 0;
    for (int id : failed)
        if (!known.count(id)) std::printf("unexpected failure: criterion %d\n", id);
    for (int id : known)
        if (!failed.count(id)) std::printf("known failure now passes: criterion %d\n", id);
    return 1;
}
