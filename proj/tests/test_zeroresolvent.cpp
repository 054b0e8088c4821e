#include <gtest/gtest.h>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "maxlab/maxlab.hpp"

using namespace maxlab;

namespace {

FixedTimeProblem indicator_problem(double value) {
    FixedTimeProblem pb;
    pb.radial_g2 = {[value](double) { return value; }, 1.0, 2.0};
    return pb;
}

SourceMode bump_mode(int l, int m, SourceKind kind, double c, double w, double amp = 1.0) {
    SourceMode s;
    s.l = l;
    s.m = m;
    s.kind = kind;
    s.rho = bump_profile(amp, c, w);
    s.a = c - w;
    s.b = c + w;
    return s;
}

Vec3 direction(double r, double th, double ph) {
    return r * Vec3(std::sin(th) * std::cos(ph), std::sin(th) * std::sin(ph), std::cos(th));
}

}  // namespace

TEST(CumulativeIntegralTest, MatchesAntiderivative) {
    const CumulativeIntegral I([](double s) { return s * s; }, 1.0, 3.0);
    EXPECT_NEAR(I.total(), 26.0 / 3, 1e-13);
    EXPECT_EQ(I(0.5), 0.0);
    for (double r : {1.3, 2.0, 2.77}) EXPECT_NEAR(I(r), (r * r * r - 1) / 3, 1e-13);
    EXPECT_NEAR(I(9.0), I.total(), 0.0);
}

TEST(RadialSolve, IndicatorSource) {
    // r^2 Gbar = 1 on [1, 2]: Fbar = -(2 - max(r, 1)) / r^2 inside, 0 beyond
    const FixedTimeField f = solve(indicator_problem(1.0));
    for (double r : {0.6, 0.9}) EXPECT_NEAR(f.Fbar_star_AB(r), -1.0 / (r * r), 1e-13);
    for (double r : {1.25, 1.8}) EXPECT_NEAR(f.Fbar_star_AB(r), -(2 - r) / (r * r), 1e-13);
    for (double r : {2.5, 30.0}) EXPECT_EQ(f.Fbar_star_AB(r), 0.0);
    for (double r : {0.7, 1.5, 5.0}) EXPECT_EQ(f.Fbar_AB(r), 0.0);
    EXPECT_NEAR(f.Fbar_tr(0.8), 1.0 / 0.64, 1e-13);
}

TEST(RadialSolve, ZeroSourceAndLinearity) {
    const FixedTimeField z = solve(FixedTimeProblem{});
    for (double r : {0.7, 3.0, 20.0}) EXPECT_EQ(z.at(direction(r, 0.4, 1.0)).max_abs(), 0.0);

    FixedTimeProblem a, b;
    a.radial_g1 = {bump_profile(1.0, 4, 1.5), 2.5, 5.5};
    a.modes = {bump_mode(2, 1, SourceKind::electric, 5, 2)};
    b.radial_g1 = {bump_profile(-3.0, 4, 1.5), 2.5, 5.5};
    b.modes = {bump_mode(2, 1, SourceKind::electric, 5, 2, -3.0)};
    const FixedTimeField fa = solve(a), fb = solve(b);
    for (double r : {1.0, 4.2, 12.0}) {
        const Vec3 x = direction(r, 1.1, 2.3);
        EXPECT_LT((fb.at(x) + 3.0 * fa.at(x)).max_abs(), 1e-12 * std::max(1.0, fa.at(x).max_abs()));
    }
}

TEST(ModeSolve, AgreesWithNewtonianKernel) {
    for (const auto& m : {bump_mode(1, 0, SourceKind::electric, 4, 1.5), bump_mode(2, -1, SourceKind::magnetic, 5, 2),
                          bump_mode(3, 2, SourceKind::electric, 4.5, 1)}) {
        const ModeSolution sol(m);
        for (double r : {1.0, 2.0, 9.0, 20.0}) {
            if (r > m.a && r < m.b) continue;
            const Vec3 x = direction(r, 0.9, 0.7);
            const double th = 0.9, ph = 0.7;
            const double mine = sol.profile(r).first * real_ylm(m.l, m.m, th, ph);
            const double kern = green_kernel_potential(m, x);
            EXPECT_NEAR(mine, kern, 1e-8 * std::max(1e-3, std::abs(kern))) << m.l << " " << r;
        }
    }
}

TEST(ModeSolve, ExteriorCoefficientIsTheMoment) {
    for (double c : {3.0, 5.0}) {
        const SourceMode m = bump_mode(2, 0, SourceKind::electric, c, 1.0);
        const double moment = boost::math::quadrature::gauss_kronrod<double, 31>::integrate(
            [&](double s) { return std::pow(s, 4) * m.rho(s); }, m.a, m.b, 10, 1e-14);
        const ModeSolution sol(m);
        EXPECT_NEAR(sol.exterior_coefficient(), -moment / 5, 1e-10 * moment);
        EXPECT_NEAR(sol.profile(30.0).first, sol.exterior_coefficient() * std::pow(30.0, -3), 1e-14);
    }
}

TEST(Residuals, RandomProblemSolvesTheSystem) {
    CampaignOptions o;
    const FixedTimeProblem pb = random_problem(7, o);
    const ResolventResidual rr = check_residuals(pb, solve(pb));
    EXPECT_LT(rr.full, 1e-6);
    EXPECT_LT(rr.radial, 1e-8);
    EXPECT_GT(rr.samples, 0u);
}

TEST(Bounds, TrivialAndCoulombTail) {
    const FixedTimeProblem empty;
    const BoundsReport z = verify_bounds(empty, solve(empty));
    EXPECT_TRUE(z.trivial);
    EXPECT_FALSE(z.inf_bc_violated);
    const BoundsReport c = verify_bounds(empty, coulomb_tail_field(1.0));
    EXPECT_TRUE(c.inf_bc_violated);
    const BoundsReport ok = verify_bounds(indicator_problem(1.0), solve(indicator_problem(1.0)));
    EXPECT_FALSE(ok.inf_bc_violated);
    EXPECT_TRUE(std::isfinite(ok.ratio0));
    EXPECT_GT(ok.ratio0, 0.0);
}

TEST(Bounds, ScaleInvariantRatios) {
    const BoundsReport a = verify_bounds(indicator_problem(1.0), solve(indicator_problem(1.0)));
    const BoundsReport b = verify_bounds(indicator_problem(-4.0), solve(indicator_problem(-4.0)));
    EXPECT_NEAR(a.ratio0, b.ratio0, 1e-12 * a.ratio0);
    EXPECT_NEAR(a.ratio1, b.ratio1, 1e-12 * a.ratio1);
}

TEST(Validation, SupportAndModes) {
    FixedTimeProblem pb;
    pb.radial_g1 = {bump_profile(1, 1, 1), 0.0, 2.0};  // crosses r0
    EXPECT_THROW(solve(pb), Error);
    pb = {};
    pb.modes = {bump_mode(0, 0, SourceKind::electric, 4, 1)};
    EXPECT_THROW(solve(pb), Error);
    pb.modes = {bump_mode(1, 2, SourceKind::electric, 4, 1)};
    EXPECT_THROW(solve(pb), Error);
}

TEST(Campaign, TwoSeeds) {
    CampaignOptions o;
    o.seeds = 2;
    const CampaignResult r = resolvent_campaign(o);
    ASSERT_EQ(r.seeds.size(), 2u);
    EXPECT_LT(r.max_residual, o.residual_tol);
    EXPECT_LT(r.max_radial_residual, o.radial_residual_tol);
    EXPECT_TRUE(std::isfinite(r.max_ratio1));
    EXPECT_TRUE(r.annuli_finite);
    // same seeds, same numbers
    const CampaignResult again = resolvent_campaign(o);
    EXPECT_EQ(again.seeds[1].ratio1, r.seeds[1].ratio1);
}

TEST(Perturbation, FlatMetricContributesNothing) {
    const FixedTimeProblem pb = indicator_problem(1.0);
    const FixedTimeField f = solve(pb);
    const PerturbationCheck flat = perturbation_check(MetricSpec::minkowski(), f, 0.5, 16);
    EXPECT_EQ(flat.total, 0.0);
    const MetricSpec pert =
        MetricSpec::general(make_radial_function("inverse_r", 0.2), make_short_range("quadrupole", 0.3));
    const PerturbationCheck pc = perturbation_check(pert, f, 1.5, 16);
    EXPECT_TRUE(pc.finite);
    EXPECT_GT(pc.total, 0.0);
}
