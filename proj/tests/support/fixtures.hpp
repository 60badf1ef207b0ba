#pragma once

// Surfaces and generators shared by the unit tests and the acceptance runner.

#include <cmath>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include "gnr/gnr.hpp"

namespace fixtures {

using gnr::FramePolicy;
using gnr::GNRSurface;
using gnr::Interval;
using gnr::ParametricCurve3;
using gnr::RulingCoefficients;
using gnr::SampleGrid;
using gnr::Vec3;

inline constexpr double kPi = std::numbers::pi;
inline const double kSqrt2 = std::sqrt(2.0);
inline const double kSqrt3 = std::sqrt(3.0);

inline std::string num(double v) { return gnr::detail::format_double(v); }

// Right helicoid over the z-axis with a fixed normal.
inline GNRSurface helicoid(Interval u_range = {-2, 2}) {
    return GNRSurface(ParametricCurve3::from_strings("0", "0", "s", {0, 2 * kPi}),
                      RulingCoefficients::from_strings("cos(s)", "sin(s)"), FramePolicy::fixed(Vec3::UnitX()),
                      u_range);
}

inline ParametricCurve3 circular_helix(Interval domain) {
    return ParametricCurve3::from_strings("cos(s/sqrt(2))", "sin(s/sqrt(2))", "s/sqrt(2)", domain);
}

// Developable surface on the circular helix with a1 = sin(s/2), a2 = cos(s/2).
inline GNRSurface cylindrical_helix(Interval domain = {0, 2 * kPi}, Interval u_range = {-3, 3}) {
    return GNRSurface(circular_helix(domain), RulingCoefficients::from_strings("sin(s/2)", "cos(s/2)"),
                      FramePolicy::strict(), u_range);
}

// Same helix, ruling angle theta = -s/2 (theta' = -tau).
inline GNRSurface helix_theta_flow(Interval domain = {-3, 3}, Interval u_range = {-1, 1}) {
    return GNRSurface(circular_helix(domain), RulingCoefficients::from_angle(gnr::parse("-s/2")),
                      FramePolicy::strict(), u_range);
}

inline ParametricCurve3 pedal(Interval domain = {-3.1, 3.1}) {
    return ParametricCurve3::from_strings("1.5*cos(s/2) + (1/6)*cos(3*s/2)", "1.5*sin(s/2) + (1/6)*sin(3*s/2)",
                                          "sqrt(3)*cos(s/2)", domain);
}

inline GNRSurface pedal_curve(Interval domain = {-3.1, 3.1}, Interval u_range = {-2, 2}) {
    return GNRSurface(pedal(domain), RulingCoefficients::from_strings("cos(s/2)", "sin(s/2)"),
                      FramePolicy::strict(), u_range);
}

// Pedal curve with theta = -integral(tau) shifted so cos(theta) > 0 on (-pi, pi).
inline GNRSurface pedal_theta_flow(Interval domain = {-3.1, 3.1}, Interval u_range = {-1, 1}) {
    return GNRSurface(pedal(domain), RulingCoefficients::from_angle(gnr::parse("sqrt(3)/2 - sqrt(3)*cos(s/2)")),
                      FramePolicy::strict(), u_range);
}

// The asinh curve (sqrt(1+t^2), t, asinh t) in its raw parameter, speed sqrt(2).
inline GNRSurface asinh_compat(Interval domain = {-0.9, 0.9}, Interval u_range = {-1, 1}) {
    return GNRSurface(ParametricCurve3::from_strings("sqrt(1 + s^2)", "s", "ln(s + sqrt(1 + s^2))", domain),
                      RulingCoefficients::from_strings("s", "sqrt(1 - s^2)"), FramePolicy::strict(), u_range,
                      true);
}

// The same curve and ruling reparametrized by arclength s = sqrt(2) t.
inline GNRSurface asinh_unit(Interval u_range = {-1, 1}) {
    const double h = 0.9 * kSqrt2;
    return GNRSurface(ParametricCurve3::from_strings("sqrt(1 + (s/sqrt(2))^2)", "s/sqrt(2)",
                                                     "ln(s/sqrt(2) + sqrt(1 + (s/sqrt(2))^2))", {-h, h}),
                      RulingCoefficients::from_strings("s/sqrt(2)", "sqrt(1 - s^2/2)"), FramePolicy::strict(),
                      u_range);
}

struct NamedSurface {
    std::string name;
    GNRSurface surface;
};

// Arclength golden surfaces.
inline std::vector<NamedSurface> golden_surfaces() {
    return {{"helicoid", helicoid()},
            {"cylindrical_helix", cylindrical_helix()},
            {"pedal_curve", pedal_curve()},
            {"asinh_curve_unit", asinh_unit()}};
}

/// Unit-speed helix or circle with a random trigonometric-polynomial ruling angle.
inline NamedSurface random_surface(std::mt19937_64& rng, int index) {
    std::uniform_real_distribution<double> radius(0.5, 2.0), pitch(-1.5, 1.5), coef(-1.0, 1.0), freq(0.3, 1.5),
        length(2.0, 6.0), start(-2.0, 2.0);
    const bool circle = index % 3 == 0;
    const double r = radius(rng);
    const double b = circle ? 0.0 : pitch(rng);
    const double c = std::sqrt(r * r + b * b);
    const std::string arg = "s/" + num(c);
    std::string z = circle ? "0" : num(b) + "*" + arg;
    auto curve = ParametricCurve3::from_strings(num(r) + "*cos(" + arg + ")", num(r) + "*sin(" + arg + ")", z,
                                                {0, 0});
    const double lo = start(rng);
    curve.domain = {lo, lo + length(rng)};

    const double w = freq(rng);
    std::string theta = num(kPi * coef(rng));
    const int terms = 1 + index % 3;
    for (int k = 1; k <= terms; ++k) {
        theta += " + " + num(coef(rng)) + "*cos(" + num(k * w) + "*s)";
        theta += " + " + num(coef(rng)) + "*sin(" + num(k * w) + "*s)";
    }
    std::uniform_real_distribution<double> ur(0.8, 2.0);
    const double umax = ur(rng);
    return {"random_" + std::to_string(index) + (circle ? "_circle" : "_helix"),
            GNRSurface(std::move(curve), RulingCoefficients::from_angle(gnr::parse(theta)), FramePolicy::strict(),
                       {-umax, umax})};
}

inline std::vector<NamedSurface> random_surfaces(int count, std::uint64_t seed = 20240611) {
    std::mt19937_64 rng(seed);
    std::vector<NamedSurface> out;
    for (int i = 0; i < count; ++i) out.push_back(random_surface(rng, i));
    return out;
}

inline SampleGrid grid_for(const GNRSurface& s, int ns, int nu) {
    return SampleGrid::uniform(s.s_range(), ns, s.u_range(), nu);
}

/// Random expression over the full grammar.  Leaves are s, small constants,
/// pi and e.  Domain-restricted functions get arguments shaped to stay inside
/// their domains most of the time; callers reject the rest.
class RandomExpr {
public:
    explicit RandomExpr(std::uint64_t seed) : rng_(seed) {}

    std::string generate(int depth = 3) { return node(depth); }

private:
    std::string leaf() {
        switch (pick(6)) {
            case 0:
            case 1:
            case 2: return "s";
            case 3: return "pi";
            case 4: return "e";
            default: {
                std::uniform_real_distribution<double> d(-3.0, 3.0);
                return num(std::round(d(rng_) * 100.0) / 100.0);
            }
        }
    }

    std::string node(int depth) {
        if (depth <= 0 || pick(5) == 0) return leaf();
        const std::string a = node(depth - 1);
        switch (pick(16)) {
            case 0: return "(" + a + " + " + node(depth - 1) + ")";
            case 1: return "(" + a + " - " + node(depth - 1) + ")";
            case 2: return "(" + a + ") * (" + node(depth - 1) + ")";
            case 3: return "(" + a + ") / (2 + sin(" + node(depth - 1) + "))";
            case 4: return "(" + a + ")^" + std::to_string(1 + pick(4));
            case 5: return "sqrt(1 + (" + a + ")^2)";
            case 6: return "(1.5 + cos(" + a + "))^0.5";
            case 7: return "sin(" + a + ")";
            case 8: return "cos(" + a + ")";
            case 9: return "atan(" + a + ")";
            case 10: return "exp(sin(" + a + "))";
            case 11: return "ln(2 + cos(" + a + "))";
            case 12: return "asin(0.5*sin(" + a + "))";
            case 13: return "tan(0.5*atan(" + a + "))";
            case 14: return "abs(" + a + ")";
            default: return "-(" + a + ")";
        }
    }

    int pick(int n) { return std::uniform_int_distribution<int>(0, n - 1)(rng_); }

    std::mt19937_64 rng_;
};

}  // namespace fixtures
