#include <gtest/gtest.h>

#include "maxlab/identities.hpp"

using namespace maxlab;

namespace {

Mat4 polar_metric(const MetricSpec& spec, const SpacetimePoint& p) { return to_polar(metric_lower(spec, p), p); }

TwoForm radial_dtdr(const SpacetimePoint& p, double coeff) {
    TwoForm F;
    const Vec3 n = p.x / p.r();
    for (int i = 0; i < 3; ++i) F.set(0, i + 1, coeff * n[i]);
    return F;
}

}  // namespace

TEST(Metric, MinkowskiIsFlat) {
    const auto m = metric_components(MetricSpec::minkowski(), SpacetimePoint(0.3, 1.0, -2.0, 0.5));
    Mat4 eta = Mat4::Identity();
    eta(0, 0) = -1;
    EXPECT_LT((m.g - eta).cwiseAbs().maxCoeff(), 1e-15);
    EXPECT_NEAR(m.sqrt_neg_det, 1.0, 1e-15);
}

TEST(Metric, SchwarzschildPolarComponents) {
    const auto p = SpacetimePoint::spherical(0, 4.0, 0.9, 2.1);
    const Mat4 g = polar_metric(MetricSpec::schwarzschild(1.0), p);
    EXPECT_NEAR(g(0, 0), -0.5, 1e-13);
    EXPECT_NEAR(g(1, 1), 2.0, 1e-13);
    EXPECT_NEAR(g(2, 2), 16.0, 1e-12);
    EXPECT_NEAR(g(3, 3), 16.0 * sqr(std::sin(0.9)), 1e-12);
    EXPECT_NEAR(g(0, 1), 0.0, 1e-13);
}

TEST(Metric, GeneralAngularBlock) {
    const MetricSpec spec =
        MetricSpec::general(make_radial_function("inverse_r", 1.0), make_short_range("none", 0));
    const auto p = SpacetimePoint::spherical(0, 10.0, 1.1, 0.4);
    const Mat4 g = polar_metric(spec, p);
    EXPECT_NEAR(g(2, 2), 1.1 * 100, 1e-11);
    EXPECT_NEAR(g(3, 3), 1.1 * 100 * sqr(std::sin(1.1)), 1e-11);
    EXPECT_NEAR(g(1, 1), 1.0, 1e-13);
    EXPECT_NEAR(g(0, 0), -1.0, 1e-13);
}

TEST(Metric, InsideHorizonIsDomainError) {
    try {
        metric_components(MetricSpec::schwarzschild(1.0), SpacetimePoint(0, 1.5, 0, 0));
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::domain);
    }
}

TEST(Hodge, OrientationAndInvolution) {
    const auto m = metric_components(MetricSpec::minkowski(), SpacetimePoint(0, 1, 2, 3));
    TwoForm F;
    F.set(0, 1, 1.0);
    const TwoForm s = hodge_star(m, F);
    EXPECT_NEAR(s(2, 3), -1.0, 1e-15);
    for (int k = 0; k < 5; ++k) EXPECT_EQ(s[k], 0.0);
    EXPECT_LT((hodge_star(m, s) + F).max_abs(), 1e-15);
}

TEST(Hodge, DoubleStarAcrossCatalog) {
    const TwoFormField G = generic_field();
    for (const auto& spec : {MetricSpec::minkowski(), MetricSpec::schwarzschild(1.0),
                             MetricSpec::general(make_radial_function("inverse_bracket", 0.5),
                                                 make_short_range("quadrupole", 0.4))}) {
        for (double r : {3.0, 7.0, 40.0}) {
            const auto p = SpacetimePoint::spherical(0.2, r, 0.7, 1.9);
            const auto m = metric_components(spec, p);
            const TwoForm F = G(p);
            EXPECT_LT((hodge_star(m, hodge_star(m, F)) + F).max_abs(), 1e-13 * F.max_abs());
        }
    }
}

TEST(Hodge, CoulombDuality) {
    // *(q/r^2 dt^dr) = -q sin(theta) dtheta^dphi in this orientation
    const MetricSpec spec = MetricSpec::schwarzschild(1.0);
    const double q = 1.7;
    for (double th : {0.4, 1.2, 2.6}) {
        const auto p = SpacetimePoint::spherical(0, 5.0, th, 0.8);
        const Mat4 s = to_polar(hodge_star_2form(spec, p, radial_dtdr(p, q / 25.0)).matrix(), p);
        EXPECT_NEAR(s(2, 3), -q * std::sin(th), 1e-12);
        EXPECT_NEAR(s(0, 1), 0.0, 1e-12);
    }
    const TwoFormField coul = [q](const SpacetimePoint& x) { return radial_dtdr(x, q / sqr(x.r())); };
    EXPECT_LT(codifferential_d_star(spec, coul, SpacetimePoint::spherical(0, 6.0, 1.0, 0.3)).max_abs(), 1e-9);
}

TEST(NullFrameTest, RadialFormComponents) {
    const auto p = SpacetimePoint::spherical(0, 9.0, 1.0, 0.5);
    const FrameComponents c = frame_components(radial_dtdr(p, 1.0), null_frame(MetricSpec::minkowski(), p));
    EXPECT_NEAR(c.uv, 0.5, 1e-15);
    EXPECT_NEAR(c.uA, 0.0, 1e-15);
    EXPECT_NEAR(c.vA, 0.0, 1e-15);
    EXPECT_NEAR(c.uB, 0.0, 1e-15);
    EXPECT_NEAR(c.AB, 0.0, 1e-15);
}

TEST(NullFrameTest, AngularRotationCovariance) {
    const auto p = SpacetimePoint::spherical(0, 9.0, 1.0, 0.5);
    const TwoForm F = generic_field()(p);
    const NullFrame fr = null_frame(MetricSpec::schwarzschild(1.0), p);
    const double chi = 0.37;
    const FrameComponents a = frame_components(F, fr), b = frame_components(F, rotate_angular(fr, chi));
    EXPECT_NEAR(b.uA, std::cos(chi) * a.uA + std::sin(chi) * a.uB, 1e-13);
    EXPECT_NEAR(b.uB, -std::sin(chi) * a.uA + std::cos(chi) * a.uB, 1e-13);
    EXPECT_NEAR(b.uv, a.uv, 1e-14);
    EXPECT_NEAR(b.AB, a.AB, 1e-14);
    EXPECT_LT((from_frame_components(a, fr) - F).max_abs(), 1e-13);
}

TEST(Tortoise, KnownValuesAndRoundTrip) {
    EXPECT_EQ(tortoise(MetricSpec::minkowski(), 7.5), 7.5);
    const MetricSpec s = MetricSpec::schwarzschild(1.0);
    EXPECT_NEAR(tortoise(s, 4.0), 4.0, 1e-15);
    for (double r : logspace(2.1, 1e4, 60)) EXPECT_NEAR(inverse_tortoise(s, tortoise(s, r)), r, 1e-12 * r);
    // near the horizon f ~ exp((r* - 2M) / 2M)
    EXPECT_NEAR(lapse_sq_at_rstar(s, -600), std::exp(-301.0), 1e-10 * std::exp(-301.0));
    EXPECT_GE(lapse_sq_at_rstar(s, -1490), 0.0);
    EXPECT_NEAR(lapse_sq_at_rstar(s, tortoise(s, 5.0)), 1 - 2.0 / 5.0, 1e-13);
}

TEST(Curvature, MinkowskiVanishes) {
    const auto c = riemann_fd(MetricSpec::minkowski(), SpacetimePoint(0, 3, 1, 2), 0.05);
    double mx = 0;
    for (double v : c.riemann) mx = std::max(mx, std::abs(v));
    EXPECT_LT(mx, 1e-12);
}

TEST(Curvature, KretschmannOracleAndRicciOrder) {
    const MetricSpec s = MetricSpec::schwarzschild(1.0);
    const SpacetimePoint p = SpacetimePoint::spherical(0, 4.0, 0.8, 0.3);
    const double exact = 48.0 / 4096.0;
    const auto a = riemann_fd(s, p, 0.02), b = riemann_fd(s, p, 0.01);
    const double ea = std::abs(a.kretschmann - exact), eb = std::abs(b.kretschmann - exact);
    EXPECT_LT(eb, 1e-3 * exact);
    EXPECT_GT(std::log2(ea / eb), 1.8);
    const double ra = a.ricci.cwiseAbs().maxCoeff(), rb = b.ricci.cwiseAbs().maxCoeff();
    EXPECT_GT(std::log2(ra / rb), 1.8);
}

TEST(Curvature, StencilLeavingDomainThrows) {
    EXPECT_THROW(riemann_fd(MetricSpec::schwarzschild(1.0), SpacetimePoint(0, 2.05, 0, 0), 0.05), Error);
}

TEST(SymbolClass, Examples) {
    const auto inv = make_radial_function("inverse_r", 1.0);
    EXPECT_TRUE(symbol_class_check(inv, -1, 3).pass);
    const auto wrong = symbol_class_check(inv, -2, 2);
    EXPECT_FALSE(wrong.pass);
    EXPECT_EQ(wrong.first_failing_order, 0);
    RadialFunction osc;
    osc.f = [](double r) { return std::sin(r) / r; };
    const auto o = symbol_class_check(osc, -1, 2);
    EXPECT_FALSE(o.pass);
    EXPECT_EQ(o.first_failing_order, 1);
    SymbolClassOptions so;
    so.r0 = 10;
    for (const auto& c : schwarzschild_coefficients(1.0)) EXPECT_TRUE(symbol_class_check(c.f, c.k, 3, so).pass) << c.f.name;
}
