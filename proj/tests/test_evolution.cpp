#include <gtest/gtest.h>

#include "maxlab/maxlab.hpp"

using namespace maxlab;

namespace {

EvolutionConfig flat_config() {
    EvolutionConfig c;
    c.metric = MetricSpec::minkowski();
    c.l = 0;
    c.s = 0;
    c.rstar_min = 0;
    c.rstar_max = 200;
    c.dr = 0.1;
    c.data.center = 50;
    c.data.sigma = 3;
    c.data.symmetry = TimeSymmetry::outgoing;
    c.probes = {80};
    c.t_final = 60;
    c.save_every = 5;
    return c;
}

double probe_peak(const ProbeSeries& p, double t_from) {
    double m = 0;
    for (std::size_t i = 0; i < p.t.size(); ++i)
        if (p.t[i] >= t_from) m = std::max(m, std::abs(p.psi[i]));
    return m;
}

void expect_config_error(const EvolutionConfig& c) {
    try {
        evolve(c);
        ADD_FAILURE() << "expected a configuration error";
    } catch (const Error& e) {
        EXPECT_TRUE(e.kind() == ErrorKind::config || e.kind() == ErrorKind::invalid_mode ||
                    e.kind() == ErrorKind::unsupported)
            << e.what();
    }
}

}  // namespace

TEST(Potential, ClosedFormValues) {
    const MetricSpec s = MetricSpec::schwarzschild(1.0);
    EXPECT_NEAR(rw_potential(MetricSpec::minkowski(), 1, 1, 2.0), 0.5, 1e-15);
    EXPECT_NEAR(rw_potential(s, 1, 1, 4.0), 0.5 * 2.0 / 16.0, 1e-15);
    EXPECT_NEAR(rw_potential(s, 1, 0, 4.0), 0.5 * (2.0 / 16.0 + 2.0 / 64.0), 1e-15);
    EXPECT_NEAR(rw_potential(s, 1, 1, 4.0, PotentialVariant::wrong_mass_term), 0.5 * (2.0 / 16.0 + 2.0 / 64.0), 1e-15);
    EXPECT_NEAR(rw_potential(s, 2, 1, 8.0), 0.75 * 6.0 / 64.0, 1e-15);
    for (double r : {2.5, 6.0, 300.0})
        EXPECT_NEAR(rw_potential_rstar(s, 2, 1, tortoise(s, r)), rw_potential(s, 2, 1, r), 1e-13 * rw_potential(s, 2, 1, r));
    EXPECT_THROW(rw_potential(s, 0, 1, 4.0), Error);
    EXPECT_THROW(rw_potential(s, 1, 2, 4.0), Error);
}

TEST(Evolve, FreePulseTravelsUnchanged) {
    const EvolutionConfig c = flat_config();
    const Trajectory tr = evolve(c);
    const ProbeSeries& p = tr.probes.at(0);
    double err = 0;
    for (std::size_t i = 0; i < p.t.size(); ++i) {
        const double exact = c.data.value(80 - p.t[i]);
        err = std::max(err, std::abs(p.psi[i] - exact));
    }
    EXPECT_LT(err, 1e-5);
    EXPECT_NEAR(probe_peak(p, 0), 1.0, 1e-5);
}

TEST(Evolve, SecondOrderStencilAlsoConverges) {
    EvolutionConfig c = flat_config();
    c.space_order = 2;
    const Trajectory tr = evolve(c);
    const ProbeSeries& p = tr.probes.at(0);
    double err = 0;
    for (std::size_t i = 0; i < p.t.size(); ++i) err = std::max(err, std::abs(p.psi[i] - c.data.value(80 - p.t[i])));
    EXPECT_LT(err, 1e-2);
    EXPECT_GT(err, 1e-6);
}

TEST(Evolve, ZeroDataStaysZero) {
    EvolutionConfig c = flat_config();
    c.data.amplitude = 0;
    const Trajectory tr = evolve(c);
    EXPECT_EQ(tr.peak_abs_psi, 0.0);
    for (double v : tr.probes[0].psi) EXPECT_EQ(v, 0.0);
}

TEST(Evolve, EnergyDoesNotGrow) {
    EvolutionConfig c;
    c.metric = MetricSpec::schwarzschild(1.0);
    c.rstar_min = -100;
    c.rstar_max = 150;
    c.dr = 0.2;
    c.data.center = 20;
    c.probes = {20};
    c.t_final = 200;
    const Trajectory tr = evolve(c);
    ASSERT_GT(tr.energy.size(), 3u);
    // the monitor uses a second-order difference, so it is conserved only to O(dr^2)
    for (double e : tr.energy) EXPECT_LE(e, tr.energy.front() * (1 + 5e-3));
    EXPECT_LT(tr.energy.back(), 5e-3 * tr.energy.front());  // radiated through both edges
}

TEST(Evolve, HuygensOnFlatSpaceForMaxwell) {
    EvolutionConfig c;
    c.metric = MetricSpec::minkowski();
    c.l = 1;
    c.s = 1;
    c.rstar_min = 0;
    c.rstar_max = 150;
    c.dr = 0.05;
    c.data.profile = Profile::compact_bump;
    c.data.center = 30;
    c.data.sigma = 2;
    c.probes = {10};
    c.t_final = 90;
    c.save_every = 10;
    const Trajectory tr = evolve(c);
    const double peak = probe_peak(tr.probes[0], 0);
    EXPECT_GT(peak, 0.1);
    EXPECT_LT(probe_peak(tr.probes[0], 55), 1e-4 * peak);
}

TEST(Evolve, CurvedBackgroundLeavesTail) {
    EvolutionConfig c;
    c.metric = MetricSpec::schwarzschild(1.0);
    c.rstar_min = -200;
    c.rstar_max = 300;
    c.dr = 0.2;
    c.data.center = 20;
    c.probes = {20};
    c.t_final = 150;
    c.save_every = 10;
    const Trajectory tr = evolve(c);
    EXPECT_GT(probe_peak(tr.probes[0], 140), 1e-9);
}

TEST(Evolve, Deterministic) {
    EvolutionConfig c = flat_config();
    c.t_final = 20;
    const Trajectory a = evolve(c), b = evolve(c);
    ASSERT_EQ(a.probes[0].psi.size(), b.probes[0].psi.size());
    for (std::size_t i = 0; i < a.probes[0].psi.size(); ++i) EXPECT_EQ(a.probes[0].psi[i], b.probes[0].psi[i]);
}

TEST(Evolve, ConfigErrors) {
    EvolutionConfig c = flat_config();
    c.space_order = 3;
    expect_config_error(c);
    c = flat_config();
    c.rstar_min = -5;
    expect_config_error(c);
    c = flat_config();
    c.cfl = 0.8;
    expect_config_error(c);
    c = flat_config();
    c.probes = {500};
    expect_config_error(c);
    c = flat_config();
    c.metric = MetricSpec::schwarzschild(1.0);
    c.rstar_min = -100;
    c.t_final = 300;
    c.tail_purity = true;
    expect_config_error(c);
    c = flat_config();
    c.l = 0;
    c.s = 1;
    expect_config_error(c);
    c = flat_config();
    c.metric = MetricSpec::general(make_radial_function("inverse_r", 0.1), make_short_range("none", 0));
    expect_config_error(c);
}

TEST(Reconstruction, DirectAmplitudesOddParity) {
    // psi = r F_AB / -L ; Q_u, Q_v from the null derivatives
    const ModeAmplitudes a = direct_amplitudes(1, Parity::odd, 10.0, 0.8, 3.0, 1.0, 0.5);
    EXPECT_NEAR(a.AB, -2.0 * 3.0 / 100.0, 1e-15);
    EXPECT_NEAR(a.uA, std::sqrt(2.0) * 0.25 / 10.0, 1e-15);
    EXPECT_NEAR(a.vA, std::sqrt(2.0) * 0.75 / 10.0, 1e-15);
    EXPECT_EQ(a.uv, 0.0);
    const ModeAmplitudes e = direct_amplitudes(1, Parity::even, 10.0, 0.8, 3.0, 1.0, 0.5);
    EXPECT_NEAR(e.uv, 0.5 * 0.8 * (-0.06), 1e-15);
    EXPECT_EQ(e.AB, 0.0);
}

TEST(Reconstruction, ZeroTrajectoryGivesZeroExtremes) {
    EvolutionConfig c;
    c.metric = MetricSpec::schwarzschild(1.0);
    c.rstar_min = -50;
    c.rstar_max = 150;
    c.dr = 0.2;
    c.data.amplitude = 0;
    c.probes = {20};
    c.u_lines = {{10, 2}};
    c.v_lines = {{80, 2}};
    c.t_final = 60;
    const Trajectory tr = evolve(c);
    const auto ex = reconstruct_extremes(tr, c.metric, {1, 0, Parity::odd}, ParityOutput::odd);
    ASSERT_EQ(ex.u_lines.size(), 1u);
    ASSERT_EQ(ex.v_lines.size(), 1u);
    for (const auto* s : {&ex.u_lines[0], &ex.v_lines[0]}) {
        EXPECT_FALSE(s->t.empty());
        for (double v : s->F_uA) EXPECT_EQ(v, 0.0);
        for (double v : s->F_vA) EXPECT_EQ(v, 0.0);
        for (double v : s->F_AB) EXPECT_EQ(v, 0.0);
    }
}

TEST(ResidualGate, CorrectPotentialConvergesWrongMassTermDoesNot) {
    EvolutionConfig c;
    c.metric = MetricSpec::schwarzschild(1.0);
    c.rstar_min = -60;
    c.rstar_max = 140;
    c.dr = 0.2;
    c.space_order = 2;
    c.data.center = 20;
    c.probes = {20};
    ResidualGateOptions o;
    const auto good = maxwell_residual_order(c, o, Parity::odd);
    EXPECT_TRUE(good.pass) << good.message;
    EXPECT_GT(good.order, 1.8);
    const auto good_even = maxwell_residual_order(c, o, Parity::even);
    EXPECT_TRUE(good_even.pass) << good_even.message;
    c.potential = PotentialVariant::wrong_mass_term;
    const auto bad = maxwell_residual_order(c, o, Parity::odd);
    EXPECT_FALSE(bad.pass);
    EXPECT_LT(bad.order, 1.0);
    EXPECT_FALSE(bad.message.empty());
}

TEST(Convergence, SyntheticSeriesGiveNominalOrder) {
    ProbeSeries a, b, c;
    for (int i = 0; i <= 100; ++i) {
        const double t = 0.1 * i;
        a.t.push_back(t);
        b.t.push_back(t);
        c.t.push_back(t);
        a.psi.push_back(std::sin(t) + 0.04 * std::cos(t));
        b.psi.push_back(std::sin(t) + 0.01 * std::cos(t));
        c.psi.push_back(std::sin(t) + 0.0025 * std::cos(t));
    }
    EXPECT_NEAR(self_convergence(a, b, c).order, 2.0, 1e-12);
}
