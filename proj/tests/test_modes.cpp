#include <gtest/gtest.h>

#include "maxlab/identities.hpp"

using namespace maxlab;

namespace {

TwoFormField mode_field(const MetricSpec& spec, ModeIndex mode, ModeAmplitudes a) {
    return [=](const SpacetimePoint& p) { return mode_sample_to_tensor(spec, mode, a, p); };
}

}  // namespace

TEST(Harmonics, NormalizationAndValues) {
    EXPECT_NEAR(ylm0(0, 0.3), 1 / std::sqrt(4 * pi), 1e-15);
    EXPECT_NEAR(ylm0(1, 0.0), std::sqrt(3 / (4 * pi)), 1e-15);
    EXPECT_NEAR(ylm0(2, 0.5 * pi), -0.5 * std::sqrt(5 / (4 * pi)), 1e-15);
    const SphereQuadrature q(16);
    for (int l = 0; l <= 4; ++l)
        for (int l2 = 0; l2 <= 4; ++l2) {
            const double v = q.integrate([&](double th, double ph) { return real_ylm(l, 0, th, ph) * real_ylm(l2, 0, th, ph); });
            EXPECT_NEAR(v, l == l2 ? 1.0 : 0.0, 1e-13);
        }
    EXPECT_NEAR(q.integrate([](double th, double ph) { return sqr(real_ylm(3, 2, th, ph)); }), 1.0, 1e-13);
}

TEST(RadialPartTest, CoulombAndMonopole) {
    const ChargeSector cs(2.0, 0.5, MetricSpec::minkowski());
    for (double r : {0.5, 4.0, 80.0}) {
        const RadialPart rp = radial_part(cs.field(), 0, r);
        EXPECT_NEAR(rp.tr, 2.0 / (r * r), 1e-13 / (r * r));
        EXPECT_NEAR(rp.phitheta, 0.5, 1e-13);
    }
}

TEST(RadialPartTest, HigherModesAverageToZero) {
    const MetricSpec s = MetricSpec::schwarzschild(1.0);
    for (Parity par : {Parity::even, Parity::odd}) {
        const auto F = mode_field(s, {1, 0, par}, {0.3, -1.2, 0.7, 2.0});
        const RadialPart rp = radial_part(F, 0, 7.0);
        EXPECT_NEAR(rp.tr, 0.0, 1e-13);
        EXPECT_NEAR(rp.phitheta, 0.0, 1e-12);
    }
}

TEST(RadialPartTest, Idempotent) {
    const TwoFormField G = generic_field();
    const double r = 3.0;
    const RadialPart a = radial_part(G, 0.2, r);
    const TwoFormField bar = [a, r](const SpacetimePoint& p) {
        TwoForm F;
        const Vec3 n = p.x / p.r();
        for (int i = 0; i < 3; ++i) F.set(0, i + 1, a.tr * n[i]);
        const double c = a.phitheta / (r * r * r);
        F.set(1, 2, c * p.x[2]);
        F.set(1, 3, -c * p.x[1]);
        F.set(2, 3, c * p.x[0]);
        return F;
    };
    const RadialPart b = radial_part(bar, 0.2, r);
    EXPECT_NEAR(a.tr, b.tr, 1e-13);
    EXPECT_NEAR(a.phitheta, b.phitheta, 1e-13);
}

TEST(Charges, ElectricAndMagnetic) {
    for (const auto& spec : {MetricSpec::minkowski(), MetricSpec::schwarzschild(1.0)}) {
        const ChargeSector cs(1.3, -0.4, spec);
        for (double r : {3.0, 50.0}) {
            const ChargePair q = charges(spec, cs.field(), 0, r);
            EXPECT_NEAR(q.q_e, 1.3, 1e-12);
            EXPECT_NEAR(q.q_m, -0.4, 1e-12);
        }
    }
}

TEST(Charges, SectorFieldIsInverseSquareOnBothBackgrounds) {
    for (const auto& spec : {MetricSpec::minkowski(), MetricSpec::schwarzschild(1.0)}) {
        const ChargeSector cs(1.0, 0.0, spec);
        for (double r : {2.5, 10.0, 1000.0}) EXPECT_NEAR(cs.Ftr(r), 1.0 / (r * r), 1e-14 / (r * r));
    }
    EXPECT_THROW(charge_sector_evolution(1, 0, MetricSpec::minkowski(), true), Error);
}

TEST(Charges, HigherModesCarryNone) {
    const MetricSpec s = MetricSpec::schwarzschild(1.0);
    const ChargePair q = charges(s, mode_field(s, {2, 0, Parity::even}, {1, 1, 1, 1}), 0, 6.0);
    EXPECT_NEAR(q.q_e, 0.0, 1e-12);
    EXPECT_NEAR(q.q_m, 0.0, 1e-12);
}

TEST(ModeTensor, KnownSamples) {
    const MetricSpec m = MetricSpec::minkowski();
    // theta = pi/2: Y_10 = 0, dY/dtheta / sqrt 2 = -sqrt(3/8pi)
    const auto p = SpacetimePoint::spherical(0, 5.0, 0.5 * pi, 0.0);
    const FrameComponents c =
        frame_components(mode_sample_to_tensor(m, {1, 0, Parity::odd}, {1, 1, 1, 0}, p), null_frame(m, p));
    EXPECT_NEAR(c.uv, 0.0, 1e-15);
    EXPECT_NEAR(c.AB, 0.0, 1e-15);
    EXPECT_NEAR(c.uB, -std::sqrt(3 / (8 * pi)), 1e-14);
    EXPECT_NEAR(c.uA, 0.0, 1e-14);
    // on the axis only the scalar parts survive
    const auto z = SpacetimePoint::spherical(0, 5.0, 1e-9, 0.0);
    const FrameComponents cz =
        frame_components(mode_sample_to_tensor(m, {1, 0, Parity::even}, {1, 2, 0, 0}, z), null_frame(m, z));
    EXPECT_NEAR(cz.uv, std::sqrt(3 / (4 * pi)), 1e-12);
    EXPECT_NEAR(cz.AB, 2 * std::sqrt(3 / (4 * pi)), 1e-12);
}

TEST(ModeTensor, RejectsChargeSectorAndNonzeroM) {
    const auto p = SpacetimePoint::spherical(0, 5.0, 1.0, 0.0);
    EXPECT_THROW(mode_sample_to_tensor(MetricSpec::minkowski(), {0, 0, Parity::even}, {}, p), Error);
    EXPECT_THROW(mode_sample_to_tensor(MetricSpec::minkowski(), {2, 1, Parity::even}, {}, p), Error);
}

TEST(ModeTensor, ProjectionRoundTrip) {
    const MetricSpec s = MetricSpec::schwarzschild(1.0);
    for (Parity par : {Parity::even, Parity::odd})
        for (int l : {1, 2, 3}) {
            const ModeAmplitudes a{0.4, -1.1, 2.5, -0.3};
            const ModeAmplitudes b = project_mode(mode_field(s, {l, 0, par}, a), s, 0, 9.0, {l, 0, par});
            EXPECT_NEAR(b.uv, a.uv, 1e-12);
            EXPECT_NEAR(b.AB, a.AB, 1e-12);
            EXPECT_NEAR(b.uA, a.uA, 1e-12);
            EXPECT_NEAR(b.vA, a.vA, 1e-12);
            // the other parity sees nothing
            const Parity other = par == Parity::even ? Parity::odd : Parity::even;
            const ModeAmplitudes c = project_mode(mode_field(s, {l, 0, par}, a), s, 0, 9.0, {l, 0, other});
            EXPECT_NEAR(c.uA, 0.0, 1e-12);
            EXPECT_NEAR(c.vA, 0.0, 1e-12);
        }
}
