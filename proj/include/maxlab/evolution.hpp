// 1+1 evolution of the per-mode master function on (t, r*), null-line recording,
// reconstruction of extreme null components and the Maxwell residual gate.
#pragma once

#include <chrono>
#include <cmath>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "modes.hpp"

namespace maxlab {

enum class Profile { gaussian, compact_bump };
enum class TimeSymmetry { time_symmetric, ingoing, outgoing };
enum class PotentialVariant { standard, wrong_mass_term };
enum class ParityOutput { even, odd, both };

inline const char* to_string(Profile p) { return p == Profile::gaussian ? "gaussian" : "compact_bump"; }
inline const char* to_string(TimeSymmetry s) {
    switch (s) {
    case TimeSymmetry::time_symmetric: return "time_symmetric";
    case TimeSymmetry::ingoing: return "ingoing";
    case TimeSymmetry::outgoing: return "outgoing";
    }
    return "?";
}
inline const char* to_string(PotentialVariant v) { return v == PotentialVariant::standard ? "standard" : "wrong_mass_term"; }
inline const char* to_string(ParityOutput p) {
    switch (p) {
    case ParityOutput::even: return "even";
    case ParityOutput::odd: return "odd";
    case ParityOutput::both: return "both";
    }
    return "?";
}

// V = f (l(l+1)/r^2 + (1 - s^2) 2M/r^3)
inline double rw_potential(const MetricSpec& spec, int l, int s, double r,
                           PotentialVariant variant = PotentialVariant::standard) {
    if (s != 0 && s != 1) throw Error(ErrorKind::invalid_mode, "spin must be 0 or 1");
    if (l < s) throw Error(ErrorKind::invalid_mode, "l < s");
    if (spec.family == MetricFamily::general_normalized)
        throw Error(ErrorKind::unsupported, "evolution runs on Minkowski or Schwarzschild only");
    check_domain(spec, r);
    const double L = l * (l + 1.0);
    const double M = spec.family == MetricFamily::schwarzschild ? spec.mass : 0.0;
    const double f = 1 - 2 * M / r;
    const double mass_coeff = variant == PotentialVariant::wrong_mass_term ? 1.0 : 1.0 - s * s;
    return f * (L / (r * r) + mass_coeff * 2 * M / (r * r * r));
}

// Same potential parametrized by r*, valid arbitrarily close to the horizon.
inline double rw_potential_rstar(const MetricSpec& spec, int l, int s, double rs,
                                 PotentialVariant variant = PotentialVariant::standard) {
    if (spec.family != MetricFamily::schwarzschild) return rw_potential(spec, l, s, inverse_tortoise(spec, rs), variant);
    if (s != 0 && s != 1) throw Error(ErrorKind::invalid_mode, "spin must be 0 or 1");
    if (l < s) throw Error(ErrorKind::invalid_mode, "l < s");
    const double r = inverse_tortoise(spec, rs);
    const double f = lapse_sq_at_rstar(spec, rs);
    const double L = l * (l + 1.0), M = spec.mass;
    const double mass_coeff = variant == PotentialVariant::wrong_mass_term ? 1.0 : 1.0 - s * s;
    return f * (L / (r * r) + mass_coeff * 2 * M / (r * r * r));
}

struct InitialDataSpec {
    Profile profile = Profile::gaussian;
    double center = 50;
    double sigma = 4;
    double amplitude = 1;
    TimeSymmetry symmetry = TimeSymmetry::time_symmetric;

    double support_half_width() const { return 5 * sigma; }

    double value(double rs) const {
        const double x = rs - center;
        if (profile == Profile::gaussian) return amplitude * std::exp(-x * x / (2 * sigma * sigma));
        const double y = x / support_half_width();
        if (std::abs(y) >= 1) return 0;
        return amplitude * std::exp(1.0 - 1.0 / (1 - y * y));
    }
    double derivative(double rs) const {
        const double x = rs - center;
        if (profile == Profile::gaussian) return -x / (sigma * sigma) * value(rs);
        const double w = support_half_width();
        const double y = x / w;
        if (std::abs(y) >= 1) return 0;
        return value(rs) * (-2 * y / sqr(1 - y * y)) / w;
    }
    double time_derivative(double rs) const {
        switch (symmetry) {
        case TimeSymmetry::time_symmetric: return 0;
        case TimeSymmetry::ingoing: return derivative(rs);
        case TimeSymmetry::outgoing: return -derivative(rs);
        }
        return 0;
    }
};

struct SourceSpec {
    std::function<double(double, double)> f;  // S(t, r*)
    double t0 = 0, t1 = 0, rs0 = 0, rs1 = 0;  // support box
};

struct Grid1D {
    double rstar_min = 0, rstar_max = 0;
    std::size_t n = 0;
    double dr = 0, dt = 0;
    double x(std::size_t j) const { return rstar_min + double(j) * dr; }
};

inline Grid1D make_grid(double rmin, double rmax, double dr, double cfl) {
    if (!(rmax > rmin)) throw Error(ErrorKind::config, "grid needs rstar_max > rstar_min");
    if (!(dr > 0)) throw Error(ErrorKind::config, "grid spacing must be positive");
    if (!(cfl > 0) || cfl > 0.5) throw Error(ErrorKind::config, "cfl must lie in (0, 0.5]");
    Grid1D g;
    g.rstar_min = rmin;
    g.rstar_max = rmax;
    g.n = std::size_t(std::llround((rmax - rmin) / dr)) + 1;
    if (g.n < 16) throw Error(ErrorKind::config, "grid has fewer than 16 points");
    g.dr = (rmax - rmin) / double(g.n - 1);
    g.dt = cfl * g.dr;
    return g;
}

struct LineSpec {
    double label = 0;     // u0 for u-lines, v0 for v-lines
    int record_every = 1;  // steps between samples
};

struct SliceSpec {
    int every = 0;   // steps between slices; 0 disables
    int stride = 1;  // grid points between stored samples
};

struct SnapshotSpec {
    double time = 0;
};

struct EvolutionConfig {
    MetricSpec metric = MetricSpec::schwarzschild(1.0);
    int l = 1;
    int s = 1;
    ParityOutput parity = ParityOutput::odd;
    double rstar_min = -1490, rstar_max = 1530;
    double dr = 0.1;
    double cfl = 0.5;
    int space_order = 4;
    InitialDataSpec data;
    std::optional<SourceSpec> source;
    std::vector<double> probes{20};
    std::vector<LineSpec> u_lines, v_lines;
    double t_final = 1500;
    int save_every = 20;
    PotentialVariant potential = PotentialVariant::standard;
    bool tail_purity = false;
    double purity_margin = 10;
    std::vector<SnapshotSpec> snapshots;
    SliceSpec slices;
};

struct ModeState {
    std::vector<double> psi, pi;
    double t = 0;
    ModeIndex mode;
};

struct ProbeSeries {
    double rstar = 0, r = 0;
    std::vector<double> t, psi, pi, dpsi;
};

enum class LineKind { u, v };

struct NullLineRecord {
    LineKind kind = LineKind::u;
    double label = 0;
    std::vector<double> t, rstar, r, psi, pi, dpsi;
};

// Consecutive time levels around a requested time, enough for time derivatives.
struct Snapshot {
    double time = 0;
    std::vector<double> times;
    std::vector<std::vector<double>> psi, pi;
};

struct SliceRecord {
    std::vector<double> rstar, r;
    std::vector<double> t;
    std::vector<std::vector<double>> psi, pi;
};

struct Trajectory {
    EvolutionConfig config;
    Grid1D grid;
    std::vector<ProbeSeries> probes;
    std::vector<NullLineRecord> u_lines, v_lines;
    std::vector<Snapshot> snapshots;
    SliceRecord slices;
    std::vector<double> energy_t, energy;
    long steps = 0;
    double wall_seconds = 0;
    double peak_abs_psi = 0;
};

inline constexpr int snapshot_half_width = 4;

// ---------------------------------------------------------------------------

class Evolver {
public:
    explicit Evolver(const EvolutionConfig& cfg)
        : cfg_(cfg), grid_(make_grid(cfg.rstar_min, cfg.rstar_max, cfg.dr, cfg.cfl)) {
        if (cfg.space_order != 2 && cfg.space_order != 4) throw Error(ErrorKind::config, "space_order must be 2 or 4");
        if (cfg.metric.family == MetricFamily::general_normalized)
            throw Error(ErrorKind::unsupported, "evolution runs on Minkowski or Schwarzschild only");
        if (cfg.s != 0 && cfg.s != 1) throw Error(ErrorKind::invalid_mode, "spin must be 0 or 1");
        if (cfg.l < cfg.s) throw Error(ErrorKind::invalid_mode, "l < s");
        origin_ = cfg.metric.family == MetricFamily::minkowski && std::abs(grid_.rstar_min) < 1e-12;
        if (cfg.metric.family == MetricFamily::minkowski && grid_.rstar_min < 0)
            throw Error(ErrorKind::config, "Minkowski grid must start at r* >= 0");
        r_.resize(grid_.n);
        V_.resize(grid_.n);
        for (std::size_t j = 0; j < grid_.n; ++j) {
            r_[j] = inverse_tortoise(cfg.metric, grid_.x(j));
            V_[j] = (origin_ && j == 0) ? 0.0 : rw_potential_rstar(cfg.metric, cfg.l, cfg.s, grid_.x(j), cfg.potential);
        }
        k_psi_.resize(4, std::vector<double>(grid_.n));
        k_pi_.resize(4, std::vector<double>(grid_.n));
        tmp_psi_.resize(grid_.n);
        tmp_pi_.resize(grid_.n);
    }

    const Grid1D& grid() const { return grid_; }
    const std::vector<double>& radius() const { return r_; }
    const std::vector<double>& potential() const { return V_; }
    bool origin_boundary() const { return origin_; }

    ModeState initial_state() const {
        ModeState s;
        s.mode.l = cfg_.l;
        s.mode.parity = cfg_.parity == ParityOutput::even ? Parity::even : Parity::odd;
        s.psi.resize(grid_.n);
        s.pi.resize(grid_.n);
        for (std::size_t j = 0; j < grid_.n; ++j) {
            s.psi[j] = cfg_.data.value(grid_.x(j));
            s.pi[j] = cfg_.data.time_derivative(grid_.x(j));
        }
        if (origin_) s.psi[0] = s.pi[0] = 0;
        return s;
    }

    void rhs(const std::vector<double>& psi, const std::vector<double>& pi, double t, std::vector<double>& dpsi,
             std::vector<double>& dpi) const {
        const std::size_t n = grid_.n;
        const double dr = grid_.dr;
        const double i2 = 1.0 / (dr * dr);
        for (std::size_t j = 0; j < n; ++j) dpsi[j] = pi[j];
        if (cfg_.space_order == 2) {
            for (std::size_t j = 1; j + 1 < n; ++j) dpi[j] = (psi[j + 1] - 2 * psi[j] + psi[j - 1]) * i2 - V_[j] * psi[j];
        } else {
            const double i12 = i2 / 12.0;
            dpi[1] = (psi[2] - 2 * psi[1] + psi[0]) * i2 - V_[1] * psi[1];
            dpi[n - 2] = (psi[n - 1] - 2 * psi[n - 2] + psi[n - 3]) * i2 - V_[n - 2] * psi[n - 2];
            for (std::size_t j = 2; j + 2 < n; ++j)
                dpi[j] = (-psi[j + 2] + 16 * psi[j + 1] - 30 * psi[j] + 16 * psi[j - 1] - psi[j - 2]) * i12 -
                         V_[j] * psi[j];
        }
        // outgoing at the outer edge, ingoing at the inner edge
        dpi[n - 1] = -(3 * pi[n - 1] - 4 * pi[n - 2] + pi[n - 3]) / (2 * dr);
        if (origin_) {
            dpsi[0] = 0;
            dpi[0] = 0;
        } else {
            dpi[0] = (-3 * pi[0] + 4 * pi[1] - pi[2]) / (2 * dr);
        }
        if (cfg_.source && t >= cfg_.source->t0 && t <= cfg_.source->t1) {
            for (std::size_t j = 1; j + 1 < n; ++j) {
                const double x = grid_.x(j);
                if (x >= cfg_.source->rs0 && x <= cfg_.source->rs1) dpi[j] += cfg_.source->f(t, x);
            }
        }
    }

    void step(ModeState& s) {
        const std::size_t n = grid_.n;
        const double dt = grid_.dt;
        if (dt > 0.5 * grid_.dr * (1 + 1e-12)) throw Error(ErrorKind::config, "CFL violated: dt > 0.5 dr");
        static constexpr double c[4] = {0.0, 0.5, 0.5, 1.0};
        for (int k = 0; k < 4; ++k) {
            if (k == 0) {
                rhs(s.psi, s.pi, s.t, k_psi_[0], k_pi_[0]);
                continue;
            }
            const double a = c[k] * dt;
            for (std::size_t j = 0; j < n; ++j) {
                tmp_psi_[j] = s.psi[j] + a * k_psi_[k - 1][j];
                tmp_pi_[j] = s.pi[j] + a * k_pi_[k - 1][j];
            }
            rhs(tmp_psi_, tmp_pi_, s.t + a, k_psi_[k], k_pi_[k]);
        }
        const double w = dt / 6.0;
        for (std::size_t j = 0; j < n; ++j) {
            s.psi[j] += w * (k_psi_[0][j] + 2 * k_psi_[1][j] + 2 * k_psi_[2][j] + k_psi_[3][j]);
            s.pi[j] += w * (k_pi_[0][j] + 2 * k_pi_[1][j] + 2 * k_pi_[2][j] + k_pi_[3][j]);
        }
        s.t += dt;
    }

    // int (pi^2 + psi'^2 + V psi^2) dr* by the trapezoid rule
    double energy(const ModeState& s) const {
        const std::size_t n = grid_.n;
        double e = 0;
        for (std::size_t j = 1; j + 1 < n; ++j) {
            const double d = (s.psi[j + 1] - s.psi[j - 1]) / (2 * grid_.dr);
            e += s.pi[j] * s.pi[j] + d * d + V_[j] * s.psi[j] * s.psi[j];
        }
        return e * grid_.dr;
    }

    static void check_finite(const ModeState& s) {
        for (std::size_t j = 0; j < s.psi.size(); ++j)
            if (!std::isfinite(s.psi[j]) || !std::isfinite(s.pi[j]))
                throw Error(ErrorKind::instability,
                            "non-finite value at index " + std::to_string(j) + ", t = " + std::to_string(s.t));
    }

    struct PointSample {
        double psi, pi, dpsi;
    };
    PointSample sample(const ModeState& s, double rs) const {
        const auto st = uniform_stencil<6>(grid_.rstar_min, grid_.dr, grid_.n, rs);
        PointSample p{0, 0, 0};
        for (int k = 0; k < 6; ++k) {
            p.psi += st.w[k] * s.psi[st.first + k];
            p.pi += st.w[k] * s.pi[st.first + k];
            p.dpsi += st.dw[k] * s.psi[st.first + k];
        }
        return p;
    }

private:
    EvolutionConfig cfg_;
    Grid1D grid_;
    bool origin_ = false;
    std::vector<double> r_, V_;
    std::vector<std::vector<double>> k_psi_, k_pi_;
    std::vector<double> tmp_psi_, tmp_pi_;
};

inline ModeState step(ModeState state, Evolver& ev) {
    ev.step(state);
    return state;
}

inline void check_causal_purity(const EvolutionConfig& cfg, const Grid1D& g, bool origin) {
    for (double p : cfg.probes) {
        if (g.rstar_max < p + cfg.t_final + cfg.purity_margin)
            throw Error(ErrorKind::config, "probe r* = " + std::to_string(p) +
                                               " outside the causal-purity region (outer boundary too close)");
        if (!origin && g.rstar_min > p - cfg.t_final - cfg.purity_margin)
            throw Error(ErrorKind::config, "probe r* = " + std::to_string(p) +
                                               " outside the causal-purity region (inner boundary too close)");
    }
}

inline Trajectory evolve(const EvolutionConfig& cfg) {
    const auto t_start = std::chrono::steady_clock::now();
    Evolver ev(cfg);
    const Grid1D& g = ev.grid();
    if (cfg.tail_purity) check_causal_purity(cfg, g, ev.origin_boundary());
    if (!(cfg.t_final > 0)) throw Error(ErrorKind::config, "t_final must be positive");
    if (cfg.save_every < 1) throw Error(ErrorKind::config, "save_every must be >= 1");
    const double lo = g.rstar_min + 3 * g.dr, hi = g.rstar_max - 3 * g.dr;
    for (double p : cfg.probes)
        if (p < lo || p > hi) throw Error(ErrorKind::config, "probe r* = " + std::to_string(p) + " outside the grid");

    Trajectory tr;
    tr.config = cfg;
    tr.grid = g;
    for (double p : cfg.probes) {
        ProbeSeries ps;
        ps.rstar = p;
        ps.r = inverse_tortoise(cfg.metric, p);
        tr.probes.push_back(ps);
    }
    for (const auto& l : cfg.u_lines) tr.u_lines.push_back({LineKind::u, l.label, {}, {}, {}, {}, {}, {}});
    for (const auto& l : cfg.v_lines) tr.v_lines.push_back({LineKind::v, l.label, {}, {}, {}, {}, {}, {}});

    const long nsteps = long(std::llround(cfg.t_final / g.dt));
    std::vector<long> snap_center;
    for (const auto& s : cfg.snapshots) {
        const long k = long(std::llround(s.time / g.dt));
        if (k - snapshot_half_width < 0 || k + snapshot_half_width > nsteps)
            throw Error(ErrorKind::config, "snapshot time too close to the run boundaries");
        snap_center.push_back(k);
        Snapshot sn;
        sn.time = double(k) * g.dt;
        tr.snapshots.push_back(sn);
    }
    if (cfg.slices.every > 0) {
        const int st = std::max(1, cfg.slices.stride);
        for (std::size_t j = 0; j < g.n; j += std::size_t(st)) {
            tr.slices.rstar.push_back(g.x(j));
            tr.slices.r.push_back(ev.radius()[j]);
        }
    }

    ModeState s = ev.initial_state();
    auto record = [&](long k) {
        if (k % cfg.save_every == 0) {
            for (auto& ps : tr.probes) {
                const auto v = ev.sample(s, ps.rstar);
                ps.t.push_back(s.t);
                ps.psi.push_back(v.psi);
                ps.pi.push_back(v.pi);
                ps.dpsi.push_back(v.dpsi);
                tr.peak_abs_psi = std::max(tr.peak_abs_psi, std::abs(v.psi));
            }
            tr.energy_t.push_back(s.t);
            tr.energy.push_back(ev.energy(s));
        }
        auto line = [&](NullLineRecord& rec, const LineSpec& spec, double rs) {
            if (rs < lo || rs > hi) return;
            if (k % spec.record_every != 0) return;
            const auto v = ev.sample(s, rs);
            rec.t.push_back(s.t);
            rec.rstar.push_back(rs);
            rec.r.push_back(inverse_tortoise(cfg.metric, rs));
            rec.psi.push_back(v.psi);
            rec.pi.push_back(v.pi);
            rec.dpsi.push_back(v.dpsi);
        };
        for (std::size_t i = 0; i < tr.u_lines.size(); ++i) line(tr.u_lines[i], cfg.u_lines[i], s.t - cfg.u_lines[i].label);
        for (std::size_t i = 0; i < tr.v_lines.size(); ++i) line(tr.v_lines[i], cfg.v_lines[i], cfg.v_lines[i].label - s.t);
        for (std::size_t i = 0; i < snap_center.size(); ++i) {
            if (std::abs(k - snap_center[i]) <= snapshot_half_width) {
                tr.snapshots[i].times.push_back(s.t);
                tr.snapshots[i].psi.push_back(s.psi);
                tr.snapshots[i].pi.push_back(s.pi);
            }
        }
        if (cfg.slices.every > 0 && k % cfg.slices.every == 0) {
            const std::size_t st = std::size_t(std::max(1, cfg.slices.stride));
            std::vector<double> a, b;
            for (std::size_t j = 0; j < g.n; j += st) {
                a.push_back(s.psi[j]);
                b.push_back(s.pi[j]);
            }
            tr.slices.t.push_back(s.t);
            tr.slices.psi.push_back(std::move(a));
            tr.slices.pi.push_back(std::move(b));
        }
    };
    record(0);
    for (long k = 1; k <= nsteps; ++k) {
        ev.step(s);
        s.t = double(k) * g.dt;  // avoid accumulated rounding in the clock
        if (k % 64 == 0 || k == nsteps) Evolver::check_finite(s);
        record(k);
    }
    tr.steps = nsteps;
    tr.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t_start).count();
    return tr;
}

// ---------------------------------------------------------------------------
// Extreme components along null lines

struct ExtremeSeries {
    LineKind kind = LineKind::u;
    double label = 0;
    std::vector<double> t, r, rstar;
    // frame mode amplitudes (not r-weighted)
    std::vector<double> F_uv, F_AB, F_uA, F_vA;
};

namespace detail {

// cumulative integral of uniformly sampled f, fourth order in the interior
inline std::vector<double> cumulative_integral(const std::vector<double>& t, const std::vector<double>& f) {
    const std::size_t n = t.size();
    std::vector<double> I(n, 0.0);
    for (std::size_t i = 0; i + 1 < n; ++i) {
        const double h = t[i + 1] - t[i];
        double inc;
        if (i >= 1 && i + 2 < n)
            inc = h / 24.0 * (-f[i - 1] + 13 * f[i] + 13 * f[i + 1] - f[i + 2]);
        else
            inc = 0.5 * h * (f[i] + f[i + 1]);
        I[i + 1] = I[i] + inc;
    }
    return I;
}

}  // namespace detail

// Odd-parity relations with L = l(l+1):
//   F_AB = -L psi / r^2, r F_uA = sqrt(L) d_u psi, r F_vA = sqrt(L) d_v psi,
//   d_v (r F_uA) = d_u (r F_vA) = (f sqrt(L) / 4) F_AB.
// Even parity is the dual field: F_uv = (f/2) F_AB(odd), F_uA -> F_uA, F_vA -> -F_vA.
inline ExtremeSeries reconstruct_line(const NullLineRecord& rec, const MetricSpec& spec, int l, ParityOutput parity) {
    ExtremeSeries out;
    out.kind = rec.kind;
    out.label = rec.label;
    const std::size_t n = rec.t.size();
    if (n == 0) return out;
    if (n < 4) throw Error(ErrorKind::input, "null line too short to integrate");
    const double L = l * (l + 1.0), sL = std::sqrt(L);
    std::vector<double> src(n), fv(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double r = rec.r[i];
        fv[i] = lapse_sq_at_rstar(spec, rec.rstar[i]);
        // d/dt along either line family equals 2 d_v or 2 d_u
        src[i] = 2.0 * (fv[i] * sL / 4.0) * (-L * rec.psi[i] / (r * r));
    }
    const auto I = detail::cumulative_integral(rec.t, src);
    const double q0 = rec.kind == LineKind::u ? sL * 0.5 * (rec.pi[0] - rec.dpsi[0]) : sL * 0.5 * (rec.pi[0] + rec.dpsi[0]);
    for (std::size_t i = 0; i < n; ++i) {
        const double r = rec.r[i];
        const double transported = q0 + I[i];
        const double Qu = rec.kind == LineKind::u ? transported : sL * 0.5 * (rec.pi[i] - rec.dpsi[i]);
        const double Qv = rec.kind == LineKind::v ? transported : sL * 0.5 * (rec.pi[i] + rec.dpsi[i]);
        const double ab = -L * rec.psi[i] / (r * r);
        out.t.push_back(rec.t[i]);
        out.r.push_back(r);
        out.rstar.push_back(rec.rstar[i]);
        switch (parity) {
        case ParityOutput::odd:
            out.F_uv.push_back(0);
            out.F_AB.push_back(ab);
            out.F_uA.push_back(Qu / r);
            out.F_vA.push_back(Qv / r);
            break;
        case ParityOutput::even:
            out.F_uv.push_back(0.5 * fv[i] * ab);
            out.F_AB.push_back(0);
            out.F_uA.push_back(Qu / r);
            out.F_vA.push_back(-Qv / r);
            break;
        case ParityOutput::both:
            out.F_uv.push_back(0.5 * fv[i] * ab);
            out.F_AB.push_back(ab);
            out.F_uA.push_back(Qu / r);
            out.F_vA.push_back(Qv / r);
            break;
        }
    }
    return out;
}

struct ExtremeReconstruction {
    std::vector<ExtremeSeries> u_lines, v_lines;
};

inline ExtremeReconstruction reconstruct_extremes(const Trajectory& tr, const MetricSpec& spec, const ModeIndex& mode,
                                                  ParityOutput parity) {
    if (tr.config.s != 1) throw Error(ErrorKind::invalid_mode, "extreme components exist for the spin-1 run only");
    ExtremeReconstruction out;
    for (const auto& rec : tr.u_lines) out.u_lines.push_back(reconstruct_line(rec, spec, mode.l, parity));
    for (const auto& rec : tr.v_lines) out.v_lines.push_back(reconstruct_line(rec, spec, mode.l, parity));
    return out;
}

// Direct pointwise frame amplitudes from (psi, pi, psi') at one point.
inline ModeAmplitudes direct_amplitudes(int l, Parity parity, double r, double f, double psi, double pi, double dpsi) {
    const double L = l * (l + 1.0), sL = std::sqrt(L);
    const double ab = -L * psi / (r * r);
    const double Qu = sL * 0.5 * (pi - dpsi), Qv = sL * 0.5 * (pi + dpsi);
    ModeAmplitudes a;
    if (parity == Parity::odd) {
        a.AB = ab;
        a.uA = Qu / r;
        a.vA = Qv / r;
    } else {
        a.uv = 0.5 * f * ab;
        a.uA = Qu / r;
        a.vA = -Qv / r;
    }
    return a;
}

// ---------------------------------------------------------------------------
// Field handle built from a snapshot

inline TwoFormField snapshot_field(const Trajectory& tr, std::size_t snapshot_index, Parity parity) {
    const Snapshot& sn = tr.snapshots.at(snapshot_index);
    if (sn.times.size() != 2 * snapshot_half_width + 1) throw Error(ErrorKind::input, "incomplete snapshot window");
    const MetricSpec spec = tr.config.metric;
    const Grid1D g = tr.grid;
    const int l = tr.config.l;
    const Snapshot* snp = &sn;
    return [snp, spec, g, l, parity](const SpacetimePoint& p) -> TwoForm {
        const double r = p.r();
        const double rs = tortoise(spec, r);
        const auto st = uniform_stencil<6>(g.rstar_min, g.dr, g.n, rs);
        const auto wt = lagrange_weights(snp->times, p.t);
        // d psi / dt from the time interpolant, not from stored pi
        double psi = 0, dpsi = 0, pi = 0;
        for (std::size_t a = 0; a < snp->times.size(); ++a) {
            double v = 0, dv = 0, pv = 0;
            for (int k = 0; k < 6; ++k) {
                v += st.w[k] * snp->psi[a][st.first + k];
                dv += st.dw[k] * snp->psi[a][st.first + k];
                pv += st.w[k] * snp->pi[a][st.first + k];
            }
            psi += wt[a] * v;
            dpsi += wt[a] * dv;
            pi += wt[a] * pv;
        }
        ModeIndex mode{l, 0, parity};
        const ModeAmplitudes amp = direct_amplitudes(l, parity, r, spec.lapse_sq(r), psi, pi, dpsi);
        return mode_sample_to_tensor(spec, mode, amp, p);
    };
}

// ---------------------------------------------------------------------------
// Maxwell residual gate

struct ResidualGateOptions {
    double time = 25;
    std::vector<double> rstar{8, 14, 20, 26};
    std::vector<double> theta{0.4, 1.1, 2.0};
    double phi = 0.3;
    double min_order = 1.8;
    double tolerance = 1e-3;  // relative residual at the finest level
};

struct ResidualGateResult {
    std::vector<double> dr;
    std::vector<double> residual;  // relative, per resolution
    double order = 0;
    bool pass = false;
    std::string message;
};

inline double snapshot_residual(const Trajectory& tr, std::size_t snap, Parity parity, const ResidualGateOptions& o) {
    const TwoFormField F = snapshot_field(tr, snap, parity);
    const MetricSpec& spec = tr.config.metric;
    const double t = tr.snapshots.at(snap).time;
    double res = 0, scale = 0;
    for (double rs : o.rstar) {
        const double r = inverse_tortoise(spec, rs);
        for (double th : o.theta) {
            const SpacetimePoint p = SpacetimePoint::spherical(t, r, th, o.phi);
            const double h = default_step(p);
            const ThreeForm a = exterior_d(F, p, h);
            const ThreeForm b = codifferential_d_star(spec, F, p, h);
            res = std::max({res, a.max_abs(), b.max_abs()});
            scale = std::max(scale, F(p).max_abs());
        }
    }
    if (!(scale > 0)) throw Error(ErrorKind::input, "residual samples see a vanishing field");
    return res / scale;
}

inline ResidualGateResult residual_order_from(const std::vector<const Trajectory*>& runs, Parity parity,
                                              const ResidualGateOptions& o) {
    if (runs.size() != 3) throw Error(ErrorKind::input, "residual gate needs three resolutions");
    ResidualGateResult out;
    for (const Trajectory* t : runs) {
        std::size_t idx = t->snapshots.size();
        for (std::size_t i = 0; i < t->snapshots.size(); ++i)
            if (std::abs(t->snapshots[i].time - o.time) < 1e-9) idx = i;
        if (idx == t->snapshots.size()) throw Error(ErrorKind::input, "trajectory lacks the gate snapshot");
        out.dr.push_back(t->grid.dr);
        out.residual.push_back(snapshot_residual(*t, idx, parity, o));
    }
    const double ratio = out.residual[1] / out.residual[2];
    const double refine = out.dr[1] / out.dr[2];
    out.order = std::log(ratio) / std::log(refine);
    out.pass = out.order >= o.min_order && out.residual[2] <= o.tolerance;
    if (!out.pass)
        out.message = "residual does not converge (order " + std::to_string(out.order) + ", finest " +
                      std::to_string(out.residual[2]) + "): potential or reconstruction coefficients inconsistent";
    return out;
}

// Runs the configuration at dr, dr/2, dr/4 up to shortly after the gate time.
inline ResidualGateResult maxwell_residual_order(EvolutionConfig cfg, const ResidualGateOptions& o,
                                                 Parity parity = Parity::odd) {
    if (cfg.s != 1) throw Error(ErrorKind::invalid_mode, "the residual gate applies to the spin-1 run");
    cfg.t_final = o.time + 1.0;
    cfg.probes.clear();
    cfg.u_lines.clear();
    cfg.v_lines.clear();
    cfg.slices = {};
    cfg.tail_purity = false;
    cfg.snapshots = {SnapshotSpec{o.time}};
    std::vector<Trajectory> runs;
    for (int k = 0; k < 3; ++k) {
        EvolutionConfig c = cfg;
        c.dr = cfg.dr / double(1 << k);
        runs.push_back(evolve(c));
    }
    return residual_order_from({&runs[0], &runs[1], &runs[2]}, parity, o);
}

// ---------------------------------------------------------------------------
// Self-convergence of probe series

struct ConvergenceResult {
    double order = 0;
    double diff_coarse = 0, diff_fine = 0;
};

// Series must share their first time and have sampling intervals in ratio 1 : 1/2 : 1/4 or be aligned.
inline ConvergenceResult self_convergence(const ProbeSeries& a, const ProbeSeries& b, const ProbeSeries& c) {
    auto at = [](const ProbeSeries& s, double t) {
        auto it = std::lower_bound(s.t.begin(), s.t.end(), t - 1e-9);
        if (it == s.t.end() || std::abs(*it - t) > 1e-7) throw Error(ErrorKind::input, "probe times do not align");
        return s.psi[std::size_t(it - s.t.begin())];
    };
    double d1 = 0, d2 = 0;
    for (std::size_t i = 0; i < a.t.size(); ++i) {
        const double t = a.t[i];
        const double pa = a.psi[i], pb = at(b, t), pc = at(c, t);
        d1 += sqr(pa - pb);
        d2 += sqr(pb - pc);
    }
    ConvergenceResult r;
    r.diff_coarse = std::sqrt(d1 / double(a.t.size()));
    r.diff_fine = std::sqrt(d2 / double(a.t.size()));
    r.order = std::log2(r.diff_coarse / r.diff_fine);
    return r;
}

}  // namespace maxlab
