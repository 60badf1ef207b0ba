#include <cmath>

#include <gtest/gtest.h>

#include "fixtures.hpp"
#include "gnr/oracle.hpp"
#include "gnr/ruled_frame.hpp"

using namespace gnr;
using fixtures::kPi;
using fixtures::kSqrt2;

namespace {

std::vector<double> samples(Interval d, int n) {
    std::vector<double> out;
    for (int i = 0; i < n; ++i) out.push_back(d.sample(i, n));
    return out;
}

template <typename Pick>
Vec3 rate(const GNRSurface& s, double x, Pick pick) {
    return oracle::richardson(
        [&](double h) -> Vec3 { return (pick(frame_at(s, x + h)) - pick(frame_at(s, x - h))) / (2 * h); }, 1e-3, 3);
}

}  // namespace

TEST(RuledFrame, HelixThetaFlow) {
    const auto s = fixtures::helix_theta_flow();
    for (double x : {-2.5, -1.0, 0.0, 0.4, 2.9}) {
        const auto fr = frame_at(s, x);
        const auto sec = s.section(x);
        EXPECT_LE(std::abs(fr.z), 1e-10);
        EXPECT_NEAR(std::abs(fr.h.dot(sec.frame.T)), 1.0, 1e-12);
        // cos(theta) > 0 on (-pi, pi), so h = -T.
        EXPECT_LE((fr.h + sec.frame.T).norm(), 1e-12);
    }
    EXPECT_LE(theta_integral_condition(s, samples(s.s_range(), 41)), 1e-10);
}

TEST(RuledFrame, CylindricalHelixSatisfiesIntegralCondition) {
    // theta = pi/2 - s/2 recovered from the components.
    const auto s = fixtures::cylindrical_helix({0.1, 6.1});
    EXPECT_LE(theta_integral_condition(s, samples(s.s_range(), 41)), 1e-12);
    const auto fr = frame_at(s, 1.0);
    EXPECT_NEAR(fr.theta, kPi / 2 - 0.5, 1e-14);
    EXPECT_LE((fr.h + s.section(1.0).frame.T).norm(), 1e-12);
}

TEST(RuledFrame, HelicoidUsesRulingRate) {
    // Straight base with a fixed frame: h comes from q' directly.
    const auto s = fixtures::helicoid();
    const auto fr = frame_at(s, 0.7);
    EXPECT_LE((fr.h - Vec3(-std::sin(0.7), std::cos(0.7), 0)).norm(), 1e-15);
    EXPECT_LE((fr.a - Vec3(0, 0, 1)).norm(), 1e-15);
}

TEST(RuledFrame, CylindricalRulingThrows) {
    // kappa cos(theta) = 0 and theta' + tau = 0 at s = pi.
    EXPECT_THROW(frame_at(fixtures::helix_theta_flow({0, 2 * kPi}), kPi), CylindricalRuling);
}

TEST(RuledFrame, ThetaIsUnwrapped) {
    // The components wind past theta = pi; atan2 alone would jump by 2 pi.
    const GNRSurface s(fixtures::circular_helix({0, 8}), RulingCoefficients::from_strings("cos(s)", "sin(s)"));
    const auto frames = frames_along(s, samples(s.s_range(), 65));
    for (std::size_t i = 0; i < frames.size(); ++i) EXPECT_NEAR(frames[i].theta, frames[i].s, 1e-12);
}

class RuledFrameProperties : public ::testing::TestWithParam<int> {};

TEST_P(RuledFrameProperties, OrthonormalWithRulingFrenetEquations) {
    const auto named = fixtures::random_surfaces(16)[GetParam()];
    const auto& s = named.surface;
    for (double x : samples(s.s_range(), 9)) {
        if (x == s.s_range().lo || x == s.s_range().hi) continue;
        RuledFrenetFrame fr;
        try {
            fr = frame_at(s, x);
        } catch (const CylindricalRuling&) {
            continue;
        }
        EXPECT_NEAR(fr.q.norm(), 1, 1e-12);
        EXPECT_NEAR(fr.h.norm(), 1, 1e-12);
        EXPECT_NEAR(fr.a.norm(), 1, 1e-12);
        EXPECT_LE(std::abs(fr.q.dot(fr.h)) + std::abs(fr.q.dot(fr.a)) + std::abs(fr.h.dot(fr.a)), 1e-12);
        EXPECT_LE((fr.q.cross(fr.h) - fr.a).norm(), 1e-12);
        const Vec3 dq = rate(s, x, [](const RuledFrenetFrame& f) { return f.q; });
        if (dq.norm() < 1e-3) continue;
        // q' = k1 h with k1 > 0, a' is parallel to h.
        EXPECT_LE((dq.normalized() - fr.h).norm(), 1e-6) << named.name << " s=" << x;
        const Vec3 da = rate(s, x, [](const RuledFrenetFrame& f) { return f.a; });
        EXPECT_LE(da.cross(fr.h).norm(), 1e-6) << named.name << " s=" << x;
    }
}

INSTANTIATE_TEST_SUITE_P(RandomSurfaces, RuledFrameProperties, ::testing::Range(0, 16));

TEST(Slant, HelixThetaFlowIsHSlant) {
    const auto s = fixtures::helix_theta_flow();
    const auto r = detect_slant(s, samples(s.s_range(), 61), SlantKind::h);
    EXPECT_TRUE(r.verdict);
    EXPECT_LE(r.dot_spread, 1e-10);
    EXPECT_NEAR(std::abs(r.axis.z()), 1.0, 1e-8);
    EXPECT_NEAR(r.mean_cosine, 1 / kSqrt2, 1e-8);

    const auto u = detect_slant(s, samples(s.s_range(), 61), SlantKind::h, Vec3(0, 0, 2));
    EXPECT_TRUE(u.verdict);
    EXPECT_NEAR(u.mean_cosine, -1 / kSqrt2, 1e-12);
}

TEST(Slant, PedalThetaFlowIsNotHSlant) {
    const auto s = fixtures::pedal_theta_flow();
    const auto r = detect_slant(s, samples(s.s_range(), 61), SlantKind::h);
    EXPECT_FALSE(r.verdict);
    EXPECT_GT(r.dot_spread, 1e-2);
}

TEST(Slant, HelicoidRulingsAreHorizontal) {
    const auto s = fixtures::helicoid();
    const auto r = detect_slant(s, samples(s.s_range(), 33), SlantKind::q);
    EXPECT_TRUE(r.verdict);
    EXPECT_NEAR(std::abs(r.axis.z()), 1.0, 1e-12);
    EXPECT_NEAR(r.mean_cosine, 0.0, 1e-12);
    EXPECT_TRUE(detect_slant(s, samples(s.s_range(), 33), SlantKind::a).verdict);
}
