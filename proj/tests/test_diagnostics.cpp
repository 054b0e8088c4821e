#include <gtest/gtest.h>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "maxlab/maxlab.hpp"

using namespace maxlab;

namespace {

std::vector<double> uniform(double a, double b, std::size_t n) {
    std::vector<double> x(n);
    for (std::size_t i = 0; i < n; ++i) x[i] = a + (b - a) * double(i) / double(n - 1);
    return x;
}

SpaceTimeData filled(std::vector<double> t, std::vector<double> r, std::function<double(double, double)> f) {
    SpaceTimeData d;
    d.t = std::move(t);
    d.r = std::move(r);
    d.names = {"u"};
    std::vector<double> v;
    for (double ti : d.t)
        for (double rj : d.r) v.push_back(f(ti, rj));
    d.values.push_back(std::move(v));
    return d;
}

double integral(std::function<double(double)> f, double a, double b) {
    return boost::math::quadrature::gauss_kronrod<double, 31>::integrate(f, a, b, 10, 1e-14);
}

ExtremeReconstruction synthetic_peeling(double amp) {
    ExtremeReconstruction rec;
    for (double u : {50.0, 100.0, 200.0, 500.0, 1000.0}) {
        ExtremeSeries s;
        s.label = u;
        for (double r : logspace(40, 2000, 80)) {
            s.r.push_back(r);
            s.t.push_back(u + r);
            s.rstar.push_back(r);
            s.F_uA.push_back(amp * std::pow(u, -3) / r);
            s.F_uv.push_back(amp / (r * r));
            s.F_AB.push_back(-amp / (r * r));
            s.F_vA.push_back(amp / (r * r * r));
        }
        rec.u_lines.push_back(s);
    }
    return rec;
}

}  // namespace

TEST(Regions, PartitionIsExact) {
    for (double T : {4.0, 16.0, 50.0}) {
        const auto parts = dyadic_partition(T);
        const RegionSpec whole{RegionKind::C_T, T};
        for (double t : uniform(T, 2 * T, 37))
            for (double r : uniform(0, 2 * T, 101)) {
                int n = 0;
                for (const auto& g : parts) n += g.contains(t, r) ? 1 : 0;
                EXPECT_EQ(n, whole.contains(t, r) ? 1 : 0) << t << " " << r;
            }
    }
}

TEST(Regions, PieceMeasuresSumToWhole) {
    const double T = 16;
    const auto d = filled(uniform(0, 40, 401), uniform(0, 40, 801), [](double, double) { return 1.0; });
    const double whole = le_norms(d, {RegionKind::C_T, T}).region_measure;
    double sum = 0;
    for (const auto& g : dyadic_partition(T)) {
        try {
            sum += le_norms(d, g).region_measure;
        } catch (const Error&) {
        }
    }
    EXPECT_NEAR(sum, whole, 1e-9 * whole);
    // measure of the cone slab: 4 pi int_T^2T t^3/3 dt
    EXPECT_NEAR(whole, 4 * pi * (std::pow(2 * T, 4) - std::pow(T, 4)) / 12, 0.02 * whole);
}

TEST(LocalEnergy, BallOracle) {
    const double T = 4;  // interior piece: r < 2, t in [4, 8]
    const auto d = filled(uniform(4, 8, 81), uniform(0, 2, 2001), [](double, double) { return 1.0; });
    const NormReport rep = le_norms(d, {RegionKind::interior, T});
    const double le2 = 4 * pi * T * integral([](double r) { return r * r / bracket(r); }, 0, 2);
    const double les2 = 4 * pi * T * integral([](double r) { return r * r * bracket(r); }, 0, 2);
    EXPECT_NEAR(rep.LE, std::sqrt(le2), 2e-3 * std::sqrt(le2));
    EXPECT_NEAR(rep.LE_star, std::sqrt(les2), 2e-3 * std::sqrt(les2));
    EXPECT_EQ(rep.LE_max, rep.LE);
    EXPECT_EQ(rep.LE_max_star, rep.LE_star);
}

TEST(LocalEnergy, HomogeneousAndMonotone) {
    const auto d = filled(uniform(0, 40, 201), uniform(0, 40, 401),
                          [](double t, double r) { return std::sin(0.3 * t) / (1 + r); });
    auto d3 = d;
    for (double& v : d3.values[0]) v *= -3;
    const RegionSpec all{RegionKind::C_T, 10};
    const RegionSpec inner{RegionKind::interior, 10};
    const auto a = le_norms(d, all), b = le_norms(d3, all);
    EXPECT_NEAR(b.LE, 3 * a.LE, 1e-12 * a.LE);
    EXPECT_NEAR(b.LE_star, 3 * a.LE_star, 1e-12 * a.LE_star);
    EXPECT_LE(le_norms(d, inner).LE, a.LE);
    EXPECT_LE(le_norms(d, inner).LE_star, a.LE_star);
    // adding a radial part can only increase the Max norms
    auto dr = d;
    dr.radial = d.values;
    const auto c = le_norms(dr, all);
    EXPECT_GT(c.LE_max, c.LE);
    EXPECT_THROW(le_norms(d, {RegionKind::C_T, 100}), Error);
}

TEST(Energies, PolynomialOracle) {
    const auto d = filled(uniform(0, 1, 5), uniform(0, 1, 2001), [](double, double r) { return r; });
    const auto e = energies(d, 1);
    const double e0 = std::sqrt(4 * pi / 5), e1 = e0 + std::sqrt(4 * pi / 3);
    for (double v : e[0]) EXPECT_NEAR(v, e0, 1e-5);
    for (double v : e[1]) EXPECT_NEAR(v, e1, 1e-5);
}

TEST(Fits, PurePowerLaw) {
    const auto t = logspace(1, 1000, 400);
    std::vector<double> v;
    for (double x : t) v.push_back(-2.5 * std::pow(x, -4));
    const DecayFit f = fit_exponent(t, v);
    EXPECT_NEAR(f.exponent, 4.0, 1e-9);
    EXPECT_TRUE(f.stable);
    EXPECT_NEAR(f.t1, 100, 1e-9);
    for (double p : f.local_p) EXPECT_NEAR(p, 4.0, 1e-6);
}

TEST(Fits, SubleadingCorrectionFlagsDrift) {
    const auto t = logspace(1, 1000, 400);
    std::vector<double> v;
    for (double x : t) v.push_back(std::pow(x, -3) * (1 + 20 / x));
    const DecayFit f = fit_exponent(t, v);
    EXPECT_FALSE(f.stable);
    EXPECT_GT(f.drift, 0.02);
}

TEST(Fits, SignChangeMeansTailNotReached) {
    const auto t = logspace(1, 1000, 400);
    std::vector<double> v;
    for (double x : t) v.push_back(std::cos(x) / x);
    try {
        fit_exponent(t, v);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::tail_not_reached);
    }
    WindowPolicy wide;
    wide.decades = 4;
    EXPECT_THROW(fit_exponent(t, std::vector<double>(t.size(), 1.0), wide), Error);
}

TEST(Peeling, SyntheticEnvelopeRoundTrip) {
    PeelingOptions o;
    const PeelingTable a = peeling_scan(synthetic_peeling(1.0), o);
    const PeelingTable b = peeling_scan(synthetic_peeling(7.5), o);
    ASSERT_EQ(a.r_slopes.size(), 4u);
    const double expected[4] = {-1, -2, -2, -3};
    for (std::size_t k = 0; k < 4; ++k) {
        EXPECT_NEAR(a.r_slopes[k].slope, expected[k], 1e-6) << a.r_slopes[k].name;
        EXPECT_TRUE(a.r_slopes[k].pass);
        EXPECT_NEAR(b.r_slopes[k].slope, a.r_slopes[k].slope, 1e-9);
    }
    EXPECT_NEAR(a.u_slope.slope, -3.0, 1e-6);
    EXPECT_NEAR(b.u_slope.slope, a.u_slope.slope, 1e-9);
    EXPECT_EQ(a.u_values.size(), 5u);
}

TEST(Peeling, LowerCutKeepsLineOnTheBoundary) {
    PeelingOptions o;
    o.u_min = 100 * (1 + 1e-14);
    EXPECT_EQ(peeling_scan(synthetic_peeling(1.0), o).u_values.size(), 4u);
    const auto u = logspace(150, 1500, 10);
    EXPECT_EQ(u.front(), 150.0);
    EXPECT_EQ(u.back(), 1500.0);
}

TEST(Peeling, InsufficientSpanIsReported) {
    PeelingOptions o;
    o.u_min = 300;  // leaves 500 and 1000 only
    EXPECT_THROW(peeling_scan(synthetic_peeling(1.0), o), Error);
    o = {};
    o.u0 = 75;
    EXPECT_THROW(peeling_scan(synthetic_peeling(1.0), o), Error);
}

TEST(Embedding, ZeroFieldHasFullMargin) {
    auto d = filled(uniform(0, 40, 81), uniform(0.5, 40, 80), [](double, double) { return 0.0; });
    d.angular_measure = 1;
    d.mode_L = 2;
    const KsReport rep = ks_monitor(d, {4, 8});
    ASSERT_FALSE(rep.entries.empty());
    for (const auto& e : rep.entries) {
        EXPECT_EQ(e.lhs, 0.0);
        EXPECT_EQ(e.margin, 1.0);
    }
    EXPECT_EQ(rep.min_margin, 1.0);
}

TEST(Embedding, SmoothFieldSatisfiesBound) {
    auto d = filled(uniform(0, 40, 161), uniform(0.25, 40, 160),
                    [](double t, double r) { return std::exp(-sqr(t - r - 5) / 8) / (1 + r); });
    d.angular_measure = 1;
    d.mode_L = 2;
    const KsReport rep = ks_monitor(d, {4, 8});
    for (const auto& e : rep.entries) {
        EXPECT_GE(e.rhs, 0.0);
        EXPECT_TRUE(std::isfinite(e.ratio));
    }
}
