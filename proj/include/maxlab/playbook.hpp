// Reproduction playbook: the acceptance runs, their measurements and pass/fail lines.
#pragma once

#include <chrono>
#include <cstdio>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "config.hpp"
#include "diagnostics.hpp"
#include "identities.hpp"
#include "zeroresolvent.hpp"

namespace maxlab {

struct CriterionLine {
    int id = 0;
    std::string title;
    bool pass = false;
    std::string measured;
    std::string target;
    double seconds = 0;
    json detail;
};

struct InfoLine {
    std::string name;
    std::string text;
};

struct PlaybookOptions {
    // tail runs
    double tail_rstar_min = -1490, tail_rstar_max = 1530;
    double tail_probe = 20, tail_t_final = 1500;
    std::vector<double> tail_dr{0.2, 0.1, 0.05};
    std::size_t tail_fit_level = 1;  // dr = 0.1
    double tail_tol = 0.15;
    double gate_time = 25;
    // peeling
    double peel_dr = 0.1;
    double peel_rstar_min = -100, peel_rstar_max = 4100;
    double peel_u_lo = 150, peel_u_hi = 1500;
    int peel_u_count = 10;
    int peel_v_count = 12;
    // Huygens control
    double huygens_dr = 0.0125;
    double huygens_t_final = 150, huygens_after = 95, huygens_ratio = 1e-10;
    // charge sector
    double charge_tol = 1e-8;
    // convergence
    double conv_target = 2.0, conv_tol = 0.2;
    bool informational = true;
};

namespace detail {

template <class... A>
std::string strf(const char* f, A... a) {
    char buf[512];
    std::snprintf(buf, sizeof buf, f, a...);
    return buf;
}

inline double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

}  // namespace detail

inline EvolutionConfig tail_config(int l, int s, double dr, const PlaybookOptions& o = {}) {
    EvolutionConfig c;
    c.metric = MetricSpec::schwarzschild(1.0);
    c.l = l;
    c.s = s;
    c.parity = ParityOutput::odd;
    c.rstar_min = o.tail_rstar_min;
    c.rstar_max = o.tail_rstar_max;
    c.dr = dr;
    c.space_order = 2;
    c.t_final = o.tail_t_final;
    c.save_every = int(std::lround(1.0 / (c.cfl * dr)));  // one sample per unit time
    c.probes = {o.tail_probe};
    c.tail_purity = true;
    return c;
}

inline EvolutionConfig peeling_config(const PlaybookOptions& o = {}) {
    EvolutionConfig c;
    c.metric = MetricSpec::schwarzschild(1.0);
    c.l = 1;
    c.s = 1;
    c.parity = ParityOutput::both;
    c.rstar_min = o.peel_rstar_min;
    c.rstar_max = o.peel_rstar_max;
    c.dr = o.peel_dr;
    c.space_order = 4;
    c.probes = {20};
    c.save_every = int(std::lround(1.0 / (c.cfl * c.dr)));
    const double r_rad = 1000;
    const double u_max = std::max(o.peel_u_hi, 50.0);
    c.t_final = u_max + tortoise(c.metric, r_rad) + 20;
    c.u_lines.push_back({50, 10});
    for (double u : logspace(o.peel_u_lo, o.peel_u_hi, std::size_t(o.peel_u_count))) c.u_lines.push_back({u, 10});
    // v-lines crossing u = 50 at log-spaced radii in [100, 1000]
    for (double r : logspace(100, 1000, std::size_t(o.peel_v_count)))
        c.v_lines.push_back({50 + 2 * tortoise(c.metric, r), 2});
    return c;
}

inline EvolutionConfig huygens_config(const PlaybookOptions& o = {}) {
    EvolutionConfig c;
    c.metric = MetricSpec::minkowski();
    c.l = 1;
    c.s = 1;
    c.rstar_min = 0;
    c.rstar_max = 400;
    c.dr = o.huygens_dr;
    c.space_order = 4;
    c.data.profile = Profile::compact_bump;
    c.t_final = o.huygens_t_final;
    c.save_every = 1;
    c.probes = {20};
    return c;
}

struct ProbeComponents {
    std::vector<double> t, psi, uv, AB, uA, vA;
};

inline ProbeComponents probe_components(const Trajectory& tr, std::size_t probe, Parity parity) {
    const ProbeSeries& p = tr.probes.at(probe);
    const double f = tr.config.metric.lapse_sq(p.r);
    ProbeComponents out;
    for (std::size_t i = 0; i < p.t.size(); ++i) {
        const ModeAmplitudes a = direct_amplitudes(tr.config.l, parity, p.r, f, p.psi[i], p.pi[i], p.dpsi[i]);
        out.t.push_back(p.t[i]);
        out.psi.push_back(p.psi[i]);
        out.uv.push_back(a.uv);
        out.AB.push_back(a.AB);
        out.uA.push_back(a.uA);
        out.vA.push_back(a.vA);
    }
    return out;
}

inline json fit_json(const DecayFit& f) {
    return {{"exponent", f.exponent}, {"stderr", f.stderr_}, {"t1", f.t1},         {"t2", f.t2},
            {"drift", f.drift},       {"stable", f.stable},  {"samples", f.samples}};
}

inline json slope_json(const ComponentSlope& s) {
    return {{"component", s.name}, {"slope", s.slope}, {"stderr", s.stderr_}, {"target", s.target},
            {"samples", s.samples}, {"present", s.present}, {"pass", s.pass}};
}

class Playbook {
public:
    explicit Playbook(PlaybookOptions o = {}) : o_(std::move(o)) {}

    using Progress = std::function<void(const std::string&)>;
    void on_progress(Progress p) { progress_ = std::move(p); }

    // Three resolutions of the Schwarzschild tail run; the spin-1 runs carry the gate snapshot.
    const std::vector<Trajectory>& tail_levels(int s) {
        auto& slot = s == 1 ? maxwell_ : scalar_;
        if (!slot) {
            std::vector<Trajectory> runs;
            for (std::size_t k = 0; k < o_.tail_dr.size(); ++k) {
                EvolutionConfig c = tail_config(s == 1 ? 1 : 0, s, o_.tail_dr[k], o_);
                if (s == 1) c.snapshots = {SnapshotSpec{o_.gate_time}};
                if (s == 1 && k == 0 && o_.informational) c.slices = {50, 5};
                note(detail::strf("tail run s=%d dr=%g", s, o_.tail_dr[k]));
                runs.push_back(evolve(c));
            }
            slot = std::move(runs);
        }
        return *slot;
    }

    const Trajectory& peeling_run() {
        if (!peel_) {
            note("peeling run");
            peel_ = evolve(peeling_config(o_));
        }
        return *peel_;
    }

    CriterionLine tail_criterion(int id, int s, double target) {
        const auto t0 = std::chrono::steady_clock::now();
        CriterionLine c;
        c.id = id;
        c.title = s == 1 ? "interior Maxwell tail (s=1, l=1)" : "scalar tail (s=0, l=0)";
        c.target = detail::strf("p = %.2f +- %.2f", target, o_.tail_tol);
        const auto& runs = tail_levels(s);
        const Trajectory& tr = runs.at(o_.tail_fit_level);
        const ProbeSeries& p = tr.probes.at(0);
        try {
            const DecayFit f = fit_exponent(p.t, p.psi);
            c.pass = std::abs(f.exponent - target) <= o_.tail_tol && f.stable;
            c.measured = detail::strf("p = %.3f +- %.3f on [%.0f, %.0f], drift %.3f%s, run %.1f s", f.exponent, f.stderr_,
                                      f.t1, f.t2, f.drift, f.stable ? "" : " (unstable window)", tr.wall_seconds);
            c.detail["fit"] = fit_json(f);
            c.detail["local_exponent_final"] = f.local_p.empty() ? 0.0 : f.local_p.back();
        } catch (const Error& e) {
            c.measured = e.what();
            // diagnostic only: fit after the last sign change
            double t_sc = 0;
            for (std::size_t i = 1; i < p.t.size(); ++i)
                if (p.psi[i] * p.psi[i - 1] <= 0) t_sc = p.t[i];
            if (t_sc > 0 && 1.1 * t_sc < p.t.back()) {
                WindowPolicy late;
                late.decades = std::log10(p.t.back() / (1.1 * t_sc));
                try {
                    const DecayFit f = fit_exponent(p.t, p.psi, late);
                    c.measured += detail::strf(" (last sign change t = %.0f; p = %.3f on [%.0f, %.0f], drift %.3f)", t_sc,
                                               f.exponent, f.t1, f.t2, f.drift);
                    c.detail["late_fit"] = fit_json(f);
                } catch (const Error&) {
                }
            }
            c.detail["last_sign_change"] = t_sc;
        }
        c.detail["run_seconds"] = tr.wall_seconds;
        c.detail["dr"] = tr.grid.dr;
        c.seconds = detail::seconds_since(t0);
        return c;
    }

    CriterionLine peeling_r_criterion() {
        const auto t0 = std::chrono::steady_clock::now();
        CriterionLine c;
        c.id = 3;
        c.title = "peeling r-slopes at u = 50";
        c.target = "F_uA -1, F_uv -2, F_AB -2, F_vA -3 (+-0.2)";
        const Trajectory& tr = peeling_run();
        bool ok = true;
        std::string m;
        for (Parity par : {Parity::odd, Parity::even}) {
            const auto rec = reconstruct_extremes(tr, tr.config.metric, ModeIndex{1, 0, par},
                                                  par == Parity::odd ? ParityOutput::odd : ParityOutput::even);
            const PeelingTable tab = peeling_scan(rec, peel_options());
            json arr = json::array();
            for (const auto& s : tab.r_slopes) {
                arr.push_back(slope_json(s));
                if (!s.present) continue;
                ok = ok && s.pass;
                m += detail::strf("%s%s[%s] %.3f", m.empty() ? "" : ", ", s.name.c_str(), to_string(par), s.slope);
            }
            c.detail[to_string(par)] = arr;
        }
        c.pass = ok;
        c.measured = m;
        c.seconds = detail::seconds_since(t0);
        return c;
    }

    CriterionLine radiation_criterion() {
        const auto t0 = std::chrono::steady_clock::now();
        CriterionLine c;
        c.id = 4;
        c.title = "radiation field r F_uA vs u at r = 1000";
        c.target = "slope -3.0 +- 0.3";
        const Trajectory& tr = peeling_run();
        const auto rec = reconstruct_extremes(tr, tr.config.metric, ModeIndex{1, 0, Parity::odd}, ParityOutput::odd);
        const PeelingTable tab = peeling_scan(rec, peel_options());
        c.pass = tab.u_slope.pass;
        c.measured = detail::strf("slope %.3f +- %.3f over u in [%.0f, %.0f]", tab.u_slope.slope, tab.u_slope.stderr_,
                                  tab.u_values.front(), tab.u_values.back());
        c.detail["u_slope"] = slope_json(tab.u_slope);
        c.detail["u"] = tab.u_values;
        c.detail["r_F_uA"] = tab.radiation;
        c.seconds = detail::seconds_since(t0);
        return c;
    }

    CriterionLine huygens_criterion() {
        const auto t0 = std::chrono::steady_clock::now();
        CriterionLine c;
        c.id = 5;
        c.title = "Minkowski l=1 control (sharp Huygens)";
        c.target = detail::strf("max |psi| after t = %.0f < %.0e x peak", o_.huygens_after, o_.huygens_ratio);
        note("Huygens run");
        const Trajectory tr = evolve(huygens_config(o_));
        const ProbeSeries& p = tr.probes.at(0);
        double peak = 0, late = 0;
        for (std::size_t i = 0; i < p.t.size(); ++i) {
            peak = std::max(peak, std::abs(p.psi[i]));
            if (p.t[i] >= o_.huygens_after) late = std::max(late, std::abs(p.psi[i]));
        }
        const double ratio = late / peak;
        c.pass = ratio < o_.huygens_ratio;
        c.measured = detail::strf("late/peak = %.2e (peak %.3f)", ratio, peak);
        c.detail = {{"peak", peak}, {"late_max", late}, {"ratio", ratio}, {"dr", tr.grid.dr}};
        c.seconds = detail::seconds_since(t0);
        return c;
    }

    CriterionLine gate_criterion() {
        const auto t0 = std::chrono::steady_clock::now();
        CriterionLine c;
        c.id = 6;
        c.title = "Maxwell residual gate";
        c.target = "order >= 1.8 both parities; wrong mass term fails";
        const auto& runs = tail_levels(1);
        ResidualGateOptions go;
        go.time = o_.gate_time;
        const auto odd = residual_order_from({&runs[0], &runs[1], &runs[2]}, Parity::odd, go);
        const auto even = residual_order_from({&runs[0], &runs[1], &runs[2]}, Parity::even, go);
        EvolutionConfig wrong = tail_config(1, 1, o_.tail_dr[0], o_);
        wrong.potential = PotentialVariant::wrong_mass_term;
        note("negative control");
        const auto neg = maxwell_residual_order(wrong, go, Parity::odd);
        c.pass = odd.pass && even.pass && !neg.pass;
        c.measured = detail::strf("order odd %.3f, even %.3f; wrong-mass order %.3f (%s)", odd.order, even.order,
                                  neg.order, neg.pass ? "passed, bad" : "fails as required");
        auto gj = [](const ResidualGateResult& r) {
            return json{{"dr", r.dr}, {"residual", r.residual}, {"order", r.order}, {"pass", r.pass}};
        };
        c.detail = {{"odd", gj(odd)}, {"even", gj(even)}, {"wrong_mass_term", gj(neg)}};
        c.seconds = detail::seconds_since(t0);
        return c;
    }

    CriterionLine identity_criterion() {
        const auto t0 = std::chrono::steady_clock::now();
        CriterionLine c;
        c.id = 7;
        c.title = "identity suite";
        c.target = "**F = -F; [*, L_Omega] on Schwarzschild; corrected scaling combination; r^2 [*, L_Omega] bounded";
        const IdentityReport rep = run_identity_suite();
        std::string failing;
        json arr = json::array();
        for (const auto& k : rep.checks) {
            arr.push_back({{"name", k.name}, {"residual", k.residual}, {"tolerance", k.tolerance},
                           {"order", std::isfinite(k.order) ? json(k.order) : json(nullptr)}, {"pass", k.pass}});
            if (!k.pass) failing += " " + k.name;
        }
        c.pass = rep.all_pass();
        c.measured = detail::strf("**F %.1e, Killing %.1e (tol %.1e), scaling %.1e, r^2 slope %.3f / %.3f; %zu checks",
                                  rep.get("double_star").residual, rep.get("killing_omega_schwarzschild").residual,
                                  rep.get("killing_omega_schwarzschild").tolerance,
                                  rep.get("scaling_commutator_corrected").residual,
                                  rep.get("omega_commutator_bound_quadrupole").order,
                                  rep.get("omega_commutator_bound_frame_dragging").order, rep.checks.size());
        if (!failing.empty()) c.measured += "; failing:" + failing;
        c.detail["checks"] = arr;
        c.seconds = detail::seconds_since(t0);
        return c;
    }

    CriterionLine resolvent_criterion() {
        const auto t0 = std::chrono::steady_clock::now();
        CriterionLine c;
        c.id = 8;
        c.title = "zero-resolvent campaign (20 seeds)";
        c.target = "residual < 1e-6 (radial < 1e-8), ratio spread <= 2, annuli finite";
        note("resolvent campaign");
        const CampaignResult r = resolvent_campaign(CampaignOptions{});
        c.pass = r.pass;
        c.measured = detail::strf("residual %.1e, radial %.1e, ratio max %.3f spread %.2f, annuli %s", r.max_residual,
                                  r.max_radial_residual, r.max_ratio1, r.spread1, r.annuli_finite ? "finite" : "NOT finite");
        c.detail = campaign_json(r);
        c.seconds = detail::seconds_since(t0);
        return c;
    }

    CriterionLine charge_criterion() {
        const auto t0 = std::chrono::steady_clock::now();
        CriterionLine c;
        c.id = 9;
        c.title = "charge sector q_e = 1 on Schwarzschild";
        c.target = detail::strf("charge drift <= %.0e over r in [5, 100] and run time; Coulomb residual clean", o_.charge_tol);
        const MetricSpec spec = MetricSpec::schwarzschild(1.0);
        EvolutionConfig cfg;
        cfg.metric = spec;
        cfg.rstar_min = -300;
        cfg.rstar_max = 400;
        cfg.dr = 0.1;
        cfg.t_final = 300;
        cfg.probes = {20};
        cfg.save_every = 100;
        const std::vector<double> times{10, 50, 100, 200, 290};
        for (double t : times) cfg.snapshots.push_back({t});
        note("charge-sector run");
        const Trajectory tr = evolve(cfg);
        const ChargeSector cs = charge_sector_evolution(1.0, 0.0, spec);
        const TwoFormField coul = cs.field();
        double drift = 0, qm = 0;
        json samples = json::array();
        for (std::size_t k = 0; k < times.size(); ++k) {
            const TwoFormField rad_odd = snapshot_field(tr, k, Parity::odd);
            const TwoFormField rad_even = snapshot_field(tr, k, Parity::even);
            const TwoFormField F = [&](const SpacetimePoint& p) { return coul(p) + rad_odd(p) + rad_even(p); };
            for (double r : logspace(5, 100, 8)) {
                const ChargePair q = charges(spec, F, tr.snapshots[k].time, r);
                drift = std::max(drift, std::abs(q.q_e - 1.0));
                qm = std::max(qm, std::abs(q.q_m));
                samples.push_back({{"t", tr.snapshots[k].time}, {"r", r}, {"q_e", q.q_e}, {"q_m", q.q_m}});
            }
        }
        double res = 0;
        for (double r : {3.0, 5.0, 20.0, 100.0})
            for (double th : {0.4, 1.3, 2.5}) {
                const SpacetimePoint p = SpacetimePoint::spherical(0, r, th, 0.7);
                const double scale = coul(p).max_abs();
                res = std::max({res, exterior_d(coul, p).max_abs() / scale,
                                codifferential_d_star(spec, coul, p).max_abs() / scale});
            }
        c.pass = drift <= o_.charge_tol && qm <= o_.charge_tol && res <= o_.charge_tol;
        c.measured = detail::strf("max |q_e - 1| = %.1e, max |q_m| = %.1e, Coulomb residual %.1e", drift, qm, res);
        c.detail = {{"drift", drift}, {"q_m", qm}, {"coulomb_residual", res}, {"samples", samples}};
        c.seconds = detail::seconds_since(t0);
        return c;
    }

    CriterionLine convergence_criterion() {
        const auto t0 = std::chrono::steady_clock::now();
        CriterionLine c;
        c.id = 10;
        c.title = "three-level self-convergence";
        c.target = detail::strf("order %.1f +- %.1f on runs 1 and 2", o_.conv_target, o_.conv_tol);
        const auto& m = tail_levels(1);
        const auto& s = tail_levels(0);
        const auto cm = self_convergence(m[0].probes[0], m[1].probes[0], m[2].probes[0]);
        const auto cs = self_convergence(s[0].probes[0], s[1].probes[0], s[2].probes[0]);
        c.pass = std::abs(cm.order - o_.conv_target) <= o_.conv_tol && std::abs(cs.order - o_.conv_target) <= o_.conv_tol;
        c.measured = detail::strf("order s=1 %.3f, s=0 %.3f", cm.order, cs.order);
        c.detail = {{"maxwell", {{"order", cm.order}, {"diff_coarse", cm.diff_coarse}, {"diff_fine", cm.diff_fine}}},
                    {"scalar", {{"order", cs.order}, {"diff_coarse", cs.diff_coarse}, {"diff_fine", cs.diff_fine}}}};
        c.seconds = detail::seconds_since(t0);
        return c;
    }

    // Measurements reported without a target.
    std::vector<InfoLine> informational() {
        std::vector<InfoLine> out;
        auto guarded = [&](const std::string& name, const std::function<std::string()>& f) {
            try {
                out.push_back({name, f()});
            } catch (const Error& e) {
                out.push_back({name, e.what()});
            }
        };
        const auto& m = tail_levels(1);
        guarded("s=1 fit on finest level", [&] {
            const auto f = fit_exponent(m.back().probes[0].t, m.back().probes[0].psi);
            return detail::strf("p = %.3f, local p(t_end) = %.3f", f.exponent, f.local_p.back());
        });
        guarded("s=0 fit on finest level", [&] {
            const auto& s = tail_levels(0);
            const auto f = fit_exponent(s.back().probes[0].t, s.back().probes[0].psi);
            return detail::strf("p = %.3f, local p(t_end) = %.3f", f.exponent, f.local_p.back());
        });
        guarded("s=1 probe components", [&] {
            const ProbeComponents pc = probe_components(m[o_.tail_fit_level], 0, Parity::odd);
            std::string s;
            for (const auto& [n, v] : {std::pair{"F_uA", &pc.uA}, std::pair{"F_vA", &pc.vA}, std::pair{"F_AB", &pc.AB}}) {
                const auto f = fit_exponent(pc.t, *v);
                s += detail::strf("%s%s p = %.3f", s.empty() ? "" : ", ", n, f.exponent);
            }
            return s;
        });
        for (int s : {1, 0}) {
            guarded(detail::strf("s=%d ingoing (non-static) data", s), [&] {
                EvolutionConfig c = tail_config(s == 1 ? 1 : 0, s, o_.tail_dr[o_.tail_fit_level], o_);
                c.data.symmetry = TimeSymmetry::ingoing;
                note(detail::strf("ingoing-data run s=%d", s));
                const Trajectory tr = evolve(c);
                const auto f = fit_exponent(tr.probes[0].t, tr.probes[0].psi);
                return detail::strf("p = %.3f (drift %.3f)", f.exponent, f.drift);
            });
        }
        guarded("ingoing data radiation u-slope", [&] {
            PlaybookOptions po = o_;
            po.peel_dr = 0.2;
            EvolutionConfig c = peeling_config(po);
            c.data.symmetry = TimeSymmetry::ingoing;
            note("ingoing-data peeling run");
            const Trajectory tr = evolve(c);
            const auto rec = reconstruct_extremes(tr, c.metric, ModeIndex{1, 0, Parity::odd}, ParityOutput::odd);
            const PeelingTable tab = peeling_scan(rec, peel_options());
            return detail::strf("slope %.3f", tab.u_slope.slope);
        });
        guarded("Sobolev-embedding monitor on the s=1 run", [&] {
            const SpaceTimeData d = slice_data(m[0]);
            const KsReport k = ks_monitor(d, {40, 80, 160, 320, 640});
            return detail::strf("%zu pieces, min margin %.3f", k.entries.size(), k.min_margin);
        });
        return out;
    }

    // Runs criteria 1..10 in order; `emit` receives each line as soon as it is measured.
    std::vector<CriterionLine> run_all(const std::function<void(const CriterionLine&)>& emit = {}) {
        std::vector<CriterionLine> out;
        auto add = [&](CriterionLine c) {
            if (emit) emit(c);
            out.push_back(std::move(c));
        };
        auto guarded = [&](int id, const char* title, const std::function<CriterionLine()>& f) {
            try {
                add(f());
            } catch (const std::exception& e) {
                CriterionLine c;
                c.id = id;
                c.title = title;
                c.measured = std::string("error: ") + e.what();
                add(c);
            }
        };
        guarded(1, "interior Maxwell tail", [&] { return tail_criterion(1, 1, 4.0); });
        guarded(2, "scalar tail", [&] { return tail_criterion(2, 0, 3.0); });
        guarded(3, "peeling r-slopes", [&] { return peeling_r_criterion(); });
        guarded(4, "radiation field", [&] { return radiation_criterion(); });
        guarded(5, "Huygens control", [&] { return huygens_criterion(); });
        guarded(6, "residual gate", [&] { return gate_criterion(); });
        guarded(7, "identity suite", [&] { return identity_criterion(); });
        guarded(8, "zero resolvent", [&] { return resolvent_criterion(); });
        guarded(9, "charge sector", [&] { return charge_criterion(); });
        guarded(10, "convergence", [&] { return convergence_criterion(); });
        return out;
    }

    static json campaign_json(const CampaignResult& r) {
        json seeds = json::array();
        for (const auto& s : r.seeds)
            seeds.push_back({{"seed", s.seed},
                             {"ratio0", s.ratio0},
                             {"ratio1", s.ratio1},
                             {"residual", s.residual},
                             {"radial_residual", s.radial_residual},
                             {"max_annulus_ratio", s.max_annulus_ratio},
                             {"annuli_finite", s.annuli_finite}});
        return {{"seeds", seeds},
                {"max_ratio0", r.max_ratio0},
                {"max_ratio1", r.max_ratio1},
                {"spread0", r.spread0},
                {"spread1", r.spread1},
                {"max_residual", r.max_residual},
                {"max_radial_residual", r.max_radial_residual},
                {"annuli_finite", r.annuli_finite},
                {"pass", r.pass}};
    }

private:
    PeelingOptions peel_options() const {
        PeelingOptions p;
        p.u_min = o_.peel_u_lo;
        return p;
    }
    void note(const std::string& s) {
        if (progress_) progress_(s);
    }

    PlaybookOptions o_;
    Progress progress_;
    std::optional<std::vector<Trajectory>> maxwell_, scalar_;
    std::optional<Trajectory> peel_;
};

inline json criterion_json(const CriterionLine& c) {
    return {{"id", c.id},         {"title", c.title},     {"pass", c.pass}, {"measured", c.measured},
            {"target", c.target}, {"seconds", c.seconds}, {"detail", c.detail}};
}

inline std::string criterion_text(const CriterionLine& c) {
    return detail::strf("[%s] %2d %-42s measured: %s | target: %s", c.pass ? "PASS" : "FAIL", c.id, c.title.c_str(),
                        c.measured.c_str(), c.target.c_str());
}

}  // namespace maxlab
