// Measurement layer: local-energy norms, energies, dyadic regions, tail and peeling fits,
// Sobolev-embedding monitors.
#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "evolution.hpp"

namespace maxlab {

// ---------------------------------------------------------------------------
// Regions

enum class RegionKind { C_T, C_T_R, C_T_U, interior };

inline const char* to_string(RegionKind k) {
    switch (k) {
    case RegionKind::C_T: return "C_T";
    case RegionKind::C_T_R: return "C_T^R";
    case RegionKind::C_T_U: return "C_T^U";
    case RegionKind::interior: return "C_T^<T/2";
    }
    return "?";
}

// Pieces of C_T are assigned by r <= t/2 (R-pieces) versus r > t/2 (U-pieces), which makes
// the dyadic pieces an exact partition of C_T. R = 1 is the ball r < 2; U = 1 is t - r < 2.
struct RegionSpec {
    RegionKind kind = RegionKind::C_T;
    double T = 1;
    double R = 1;   // dyadic radius for C_T^R
    double U = 1;   // dyadic retarded time for C_T^U
    double R1 = 0;  // cone offset: C = {r <= t + R1}

    bool in_cone_slab(double t, double r) const { return t >= T && t <= 2 * T && r <= t + R1; }

    bool contains(double t, double r) const {
        if (!in_cone_slab(t, r)) return false;
        switch (kind) {
        case RegionKind::C_T: return true;
        case RegionKind::interior: return r < T / 2;
        case RegionKind::C_T_R: {
            if (r > t / 2) return false;
            return R <= 1 ? r < 2 : (r >= R && r < 2 * R);
        }
        case RegionKind::C_T_U: {
            if (r <= t / 2) return false;
            const double w = t - r;
            return U <= 1 ? w < 2 : (w >= U && w < 2 * U);
        }
        }
        return false;
    }
};

// All nonempty R- and U-pieces of C_T.
inline std::vector<RegionSpec> dyadic_partition(double T, double R1 = 0) {
    std::vector<RegionSpec> out;
    for (double R = 1; R <= 2 * T; R *= 2) out.push_back({RegionKind::C_T_R, T, R, 1, R1});
    for (double U = 1; U <= 2 * T; U *= 2) out.push_back({RegionKind::C_T_U, T, 1, U, R1});
    return out;
}

// ---------------------------------------------------------------------------
// Space-time samples

// Samples on a tensor grid (t_i, r_j); values[c][i * nr + j]. For mode amplitudes with
// normalized harmonics use angular_measure = 1 and set mode_L = l(l+1).
struct SpaceTimeData {
    std::vector<double> t, r;
    std::vector<std::string> names;
    std::vector<std::vector<double>> values;
    std::vector<std::vector<double>> radial;  // radial-part components, same layout; may be empty
    double angular_measure = 4 * pi;
    double mode_L = 0;

    std::size_t nt() const { return t.size(); }
    std::size_t nr() const { return r.size(); }

    void validate() const {
        if (t.empty() || r.empty() || values.empty()) throw Error(ErrorKind::input, "empty space-time data");
        for (const auto& v : values)
            if (v.size() != t.size() * r.size()) throw Error(ErrorKind::input, "component size mismatch");
        for (const auto& v : radial)
            if (v.size() != t.size() * r.size()) throw Error(ErrorKind::input, "radial component size mismatch");
        if (!std::is_sorted(t.begin(), t.end()) || !std::is_sorted(r.begin(), r.end()))
            throw Error(ErrorKind::input, "grids must be ascending");
    }
};

namespace detail {

inline std::vector<double> trapezoid_weights(const std::vector<double>& x) {
    std::vector<double> w(x.size(), 0.0);
    if (x.size() == 1) {
        w[0] = 1;
        return w;
    }
    for (std::size_t i = 0; i + 1 < x.size(); ++i) {
        const double h = 0.5 * (x[i + 1] - x[i]);
        w[i] += h;
        w[i + 1] += h;
    }
    return w;
}

inline int annulus_index(double r) {
    if (r < 2) return 0;
    int k = 1;
    double R = 2;
    while (r >= 2 * R) {
        R *= 2;
        ++k;
    }
    return k;
}

// derivative along one axis of a row-major (nt x nr) array; second order, nonuniform
inline std::vector<double> axis_derivative(const std::vector<double>& a, const std::vector<double>& x, std::size_t nt,
                                           std::size_t nr, bool time_axis) {
    const std::size_t n = time_axis ? nt : nr;
    if (n < 3) throw Error(ErrorKind::input, "missing derivative data: need >= 3 samples along the axis");
    std::vector<double> d(a.size());
    auto idx = [&](std::size_t i, std::size_t j) { return i * nr + j; };
    const std::size_t other = time_axis ? nr : nt;
    for (std::size_t o = 0; o < other; ++o) {
        auto val = [&](std::size_t k) { return time_axis ? a[idx(k, o)] : a[idx(o, k)]; };
        auto put = [&](std::size_t k, double v) {
            if (time_axis)
                d[idx(k, o)] = v;
            else
                d[idx(o, k)] = v;
        };
        for (std::size_t k = 0; k < n; ++k) {
            std::size_t k0 = k == 0 ? 0 : (k == n - 1 ? n - 3 : k - 1);
            const double x0 = x[k0], x1 = x[k0 + 1], x2 = x[k0 + 2], xx = x[k];
            // derivative of the quadratic interpolant through three nodes
            const double c0 = (2 * xx - x1 - x2) / ((x0 - x1) * (x0 - x2));
            const double c1 = (2 * xx - x0 - x2) / ((x1 - x0) * (x1 - x2));
            const double c2 = (2 * xx - x0 - x1) / ((x2 - x0) * (x2 - x1));
            put(k, c0 * val(k0) + c1 * val(k0 + 1) + c2 * val(k0 + 2));
        }
    }
    return d;
}

}  // namespace detail

// Mode-level translation derivatives: d_t, d_r and the angular factor sqrt(L)/r.
inline std::vector<std::vector<double>> mode_derivatives(const SpaceTimeData& d, const std::vector<double>& a) {
    std::vector<std::vector<double>> out;
    out.push_back(detail::axis_derivative(a, d.t, d.nt(), d.nr(), true));
    out.push_back(detail::axis_derivative(a, d.r, d.nt(), d.nr(), false));
    if (d.mode_L > 0) {
        std::vector<double> ang(a.size());
        const double sL = std::sqrt(d.mode_L);
        for (std::size_t i = 0; i < d.nt(); ++i)
            for (std::size_t j = 0; j < d.nr(); ++j) ang[i * d.nr() + j] = sL / d.r[j] * a[i * d.nr() + j];
        out.push_back(std::move(ang));
    }
    return out;
}

// ---------------------------------------------------------------------------
// Local energy norms

struct NormReport {
    RegionSpec region;
    double LE = 0, LE_star = 0, LE_max = 0, LE_max_star = 0;
    std::vector<double> annulus_R;      // dyadic radii seen by the region
    std::vector<double> annulus_measure;  // integral of 1 over region x annulus
    double region_measure = 0;
};

struct NormWeights {
    double le_power = -0.5;      // <r>^{-1/2} for LE
    double le_star_power = 0.5;  // <r>^{+1/2} for LE*
};

namespace detail {

struct AnnulusSums {
    std::vector<double> le, les, measure;
};

inline AnnulusSums annulus_sums(const SpaceTimeData& d, const std::vector<double>& a, const RegionSpec* region,
                                const NormWeights& w, double extra_power) {
    const auto wt = trapezoid_weights(d.t);
    const auto wr = trapezoid_weights(d.r);
    AnnulusSums s;
    for (std::size_t i = 0; i < d.nt(); ++i)
        for (std::size_t j = 0; j < d.nr(); ++j) {
            const double t = d.t[i], r = d.r[j];
            if (region && !region->contains(t, r)) continue;
            const int k = annulus_index(r);
            if (std::size_t(k) >= s.le.size()) {
                s.le.resize(std::size_t(k) + 1, 0.0);
                s.les.resize(std::size_t(k) + 1, 0.0);
                s.measure.resize(std::size_t(k) + 1, 0.0);
            }
            const double vol = wt[i] * wr[j] * r * r * d.angular_measure;
            const double br = bracket(r);
            const double u = a[i * d.nr() + j] * std::pow(br, extra_power);
            s.le[std::size_t(k)] += vol * std::pow(br, 2 * w.le_power) * u * u;
            s.les[std::size_t(k)] += vol * std::pow(br, 2 * w.le_star_power) * u * u;
            s.measure[std::size_t(k)] += vol;
        }
    return s;
}

}  // namespace detail

// Sums over components follow the tensor norms; a single time level gives the fixed-time norms.
inline NormReport le_norms(const SpaceTimeData& d, const RegionSpec& region, const NormWeights& w = {},
                           bool restrict_to_region = true) {
    d.validate();
    NormReport rep;
    rep.region = region;
    const RegionSpec* reg = restrict_to_region ? &region : nullptr;
    bool any = false;
    auto accumulate = [&](const std::vector<std::vector<double>>& comps, double extra, double& le, double& les,
                          bool record) {
        for (const auto& a : comps) {
            const auto s = detail::annulus_sums(d, a, reg, w, extra);
            double sup = 0, sum = 0;
            for (std::size_t k = 0; k < s.le.size(); ++k) {
                sup = std::max(sup, std::sqrt(s.le[k]));
                sum += std::sqrt(s.les[k]);
            }
            le += sup;
            les += sum;
            if (record && rep.annulus_R.empty()) {
                for (std::size_t k = 0; k < s.measure.size(); ++k) {
                    if (s.measure[k] <= 0) continue;
                    any = true;
                    rep.annulus_R.push_back(k == 0 ? 1.0 : std::ldexp(1.0, int(k)));
                    rep.annulus_measure.push_back(s.measure[k]);
                    rep.region_measure += s.measure[k];
                }
            }
        }
    };
    accumulate(d.values, 0.0, rep.LE, rep.LE_star, true);
    if (!any) throw Error(ErrorKind::input, "region lies outside the data");
    double rle = 0, rles = 0;
    accumulate(d.radial, 1.0, rle, rles, false);
    rep.LE_max = rep.LE + rle;
    rep.LE_max_star = rep.LE_star + rles;
    return rep;
}

// E^k(t_i) = sum_{l <= k} ||d^l F(t_i)||_{L^2}, derivatives from mode_derivatives.
inline std::vector<std::vector<double>> energies(const SpaceTimeData& d, int k_max) {
    d.validate();
    if (k_max < 0) throw Error(ErrorKind::input, "k_max must be nonnegative");
    const auto wr = detail::trapezoid_weights(d.r);
    auto slice_norm = [&](const std::vector<double>& a, std::size_t i) {
        double s = 0;
        for (std::size_t j = 0; j < d.nr(); ++j) s += wr[j] * d.r[j] * d.r[j] * d.angular_measure * sqr(a[i * d.nr() + j]);
        return std::sqrt(s);
    };
    std::vector<std::vector<double>> out(std::size_t(k_max) + 1, std::vector<double>(d.nt(), 0.0));
    std::vector<std::vector<double>> level = d.values;
    for (int k = 0; k <= k_max; ++k) {
        for (std::size_t i = 0; i < d.nt(); ++i) {
            double s = 0;
            for (const auto& a : level) s += slice_norm(a, i);
            out[std::size_t(k)][i] = (k > 0 ? out[std::size_t(k - 1)][i] : 0.0) + s;
        }
        if (k == k_max) break;
        std::vector<std::vector<double>> next;
        for (const auto& a : level)
            for (auto& b : mode_derivatives(d, a)) next.push_back(std::move(b));
        level = std::move(next);
    }
    return out;
}

// ---------------------------------------------------------------------------
// Power-law fits

struct WindowPolicy {
    double decades = 1.0;
    double drift_tolerance = 0.02;
    std::optional<double> t_end;  // default: last sample
};

struct DecayFit {
    double exponent = 0;  // p in |v| ~ t^{-p}
    double stderr_ = 0;
    double t1 = 0, t2 = 0;
    double drift = 0;  // relative change of p between the two halves of the window
    bool stable = false;
    std::size_t samples = 0;
    std::vector<double> local_t, local_p;  // p(t) = -d log|v| / d log t
};

// Local logarithmic derivative by centered differences; skips points next to sign changes.
inline void local_exponent(const std::vector<double>& t, const std::vector<double>& v, std::vector<double>& lt,
                           std::vector<double>& lp) {
    lt.clear();
    lp.clear();
    for (std::size_t i = 1; i + 1 < t.size(); ++i) {
        if (!(t[i - 1] > 0) || v[i - 1] == 0 || v[i + 1] == 0 || (v[i - 1] > 0) != (v[i + 1] > 0)) continue;
        lt.push_back(t[i]);
        lp.push_back(-(std::log(std::abs(v[i + 1])) - std::log(std::abs(v[i - 1]))) /
                     (std::log(t[i + 1]) - std::log(t[i - 1])));
    }
}

inline DecayFit fit_exponent(const std::vector<double>& t, const std::vector<double>& v, const WindowPolicy& pol = {}) {
    if (t.size() != v.size() || t.size() < 8) throw Error(ErrorKind::input, "fit_exponent needs >= 8 matching samples");
    const double t2 = pol.t_end.value_or(t.back());
    const double t1 = t2 * std::pow(10.0, -pol.decades);
    if (!(t1 > 0) || t1 < t.front())
        throw Error(ErrorKind::tail_not_reached, "series does not span the fit window; extend t_final");
    std::vector<double> x, y;
    int sign = 0;
    for (std::size_t i = 0; i < t.size(); ++i) {
        if (t[i] < t1 || t[i] > t2) continue;
        const int s = v[i] > 0 ? 1 : (v[i] < 0 ? -1 : 0);
        if (s == 0 || (sign != 0 && s != sign))
            throw Error(ErrorKind::tail_not_reached,
                        "signal not sign-definite on [" + std::to_string(t1) + ", " + std::to_string(t2) +
                            "]; extend t_final");
        sign = s;
        x.push_back(std::log(t[i]));
        y.push_back(std::log(std::abs(v[i])));
    }
    if (x.size() < 8) throw Error(ErrorKind::tail_not_reached, "too few samples in the fit window");
    DecayFit f;
    const LineFit lf = fit_line(x, y);
    f.exponent = -lf.slope;
    f.stderr_ = lf.slope_stderr;
    f.t1 = t1;
    f.t2 = t2;
    f.samples = x.size();
    const double xm = 0.5 * (x.front() + x.back());
    std::vector<double> xa, ya, xb, yb;
    for (std::size_t i = 0; i < x.size(); ++i) {
        if (x[i] <= xm) {
            xa.push_back(x[i]);
            ya.push_back(y[i]);
        } else {
            xb.push_back(x[i]);
            yb.push_back(y[i]);
        }
    }
    if (xa.size() >= 2 && xb.size() >= 2) {
        const double pa = -fit_line(xa, ya).slope, pb = -fit_line(xb, yb).slope;
        f.drift = std::abs(pa - pb) / std::max(std::abs(f.exponent), 1e-300);
    } else {
        f.drift = std::numeric_limits<double>::infinity();
    }
    f.stable = f.drift < pol.drift_tolerance;
    local_exponent(t, v, f.local_t, f.local_p);
    return f;
}

// ---------------------------------------------------------------------------
// Peeling

struct PeelingOptions {
    double u0 = 50;
    double r_lo = 100, r_hi = 1000;
    double r_radiation = 1000;
    double u_min = 0;  // lower cut on u for the radiation-field fit
    double min_u_decades = 1.0;
    double tol_r = 0.2, tol_u = 0.3;
    double target_uA = -1, target_uv = -2, target_AB = -2, target_vA = -3, target_u = -3;
};

struct ComponentSlope {
    std::string name;
    double slope = 0, stderr_ = 0, target = 0;
    std::size_t samples = 0;
    bool present = false;  // false when the component vanishes identically for the parity
    bool pass = false;
};

struct PeelingTable {
    std::vector<ComponentSlope> r_slopes;  // F_uA, F_uv, F_AB, F_vA
    ComponentSlope u_slope;                // r F_uA versus u at fixed r
    std::vector<double> u_values, radiation;
};

namespace detail {

inline double interp_at(const std::vector<double>& x, const std::vector<double>& y, double xq) {
    if (x.size() < 2) throw Error(ErrorKind::input, "interpolation needs >= 2 samples");
    const bool asc = x.back() > x.front();
    std::size_t i = 0;
    // locate bracketing interval
    for (i = 0; i + 1 < x.size(); ++i) {
        const bool in = asc ? (xq >= x[i] && xq <= x[i + 1]) : (xq <= x[i] && xq >= x[i + 1]);
        if (in) break;
    }
    if (i + 1 >= x.size()) throw Error(ErrorKind::input, "interpolation point outside the sampled range");
    std::size_t a = i >= 1 ? i - 1 : 0;
    if (a + 4 > x.size()) a = x.size() >= 4 ? x.size() - 4 : 0;
    const std::size_t m = std::min<std::size_t>(4, x.size());
    std::vector<double> nodes(x.begin() + long(a), x.begin() + long(a + m));
    const auto w = lagrange_weights(nodes, xq);
    double s = 0;
    for (std::size_t k = 0; k < m; ++k) s += w[k] * y[a + k];
    return s;
}

inline ComponentSlope slope_fit(const std::string& name, const std::vector<double>& x, const std::vector<double>& v,
                                double target, double tol) {
    ComponentSlope c;
    c.name = name;
    c.target = target;
    std::vector<double> lx, ly;
    for (std::size_t i = 0; i < x.size(); ++i) {
        if (v[i] == 0) continue;
        lx.push_back(std::log(x[i]));
        ly.push_back(std::log(std::abs(v[i])));
    }
    c.present = lx.size() >= 3;
    if (!c.present) return c;
    const LineFit f = fit_line(lx, ly);
    c.slope = f.slope;
    c.stderr_ = f.slope_stderr;
    c.samples = lx.size();
    c.pass = std::abs(c.slope - target) <= tol;
    return c;
}

}  // namespace detail

// r-slopes along u = u0 and the u-slope of r F_uA at fixed r.
// F_vA on u = u0 is read from the v-line crossings when v-lines exist.
inline PeelingTable peeling_scan(const ExtremeReconstruction& rec, const PeelingOptions& o = {}) {
    const ExtremeSeries* line = nullptr;
    for (const auto& s : rec.u_lines)
        if (std::abs(s.label - o.u0) < 1e-9) line = &s;
    if (!line) throw Error(ErrorKind::input, "no u-line recorded at u0 = " + std::to_string(o.u0));
    if (line->r.empty() || line->r.back() < o.r_hi || line->r.front() > o.r_lo || o.r_hi < 10 * o.r_lo * 0.999)
        throw Error(ErrorKind::input, "insufficient span: the u-line must cover one decade in r");
    PeelingTable tab;
    std::vector<double> rr, uA, uv, AB, vA;
    for (std::size_t i = 0; i < line->r.size(); ++i) {
        if (line->r[i] < o.r_lo || line->r[i] > o.r_hi) continue;
        rr.push_back(line->r[i]);
        uA.push_back(line->F_uA[i]);
        uv.push_back(line->F_uv[i]);
        AB.push_back(line->F_AB[i]);
        vA.push_back(line->F_vA[i]);
    }
    std::vector<double> vr, vv;
    if (!rec.v_lines.empty()) {
        for (const auto& s : rec.v_lines) {
            if (s.t.size() < 4) continue;
            std::vector<double> u(s.t.size());
            for (std::size_t i = 0; i < u.size(); ++i) u[i] = s.t[i] - s.rstar[i];
            if (o.u0 < std::min(u.front(), u.back()) || o.u0 > std::max(u.front(), u.back())) continue;
            const double r = detail::interp_at(u, s.r, o.u0);
            if (r < o.r_lo || r > o.r_hi) continue;
            vr.push_back(r);
            vv.push_back(detail::interp_at(u, s.F_vA, o.u0));
        }
    } else {
        vr = rr;
        vv = vA;
    }
    tab.r_slopes.push_back(detail::slope_fit("F_uA", rr, uA, o.target_uA, o.tol_r));
    tab.r_slopes.push_back(detail::slope_fit("F_uv", rr, uv, o.target_uv, o.tol_r));
    tab.r_slopes.push_back(detail::slope_fit("F_AB", rr, AB, o.target_AB, o.tol_r));
    tab.r_slopes.push_back(detail::slope_fit("F_vA", vr, vv, o.target_vA, o.tol_r));

    for (const auto& s : rec.u_lines) {
        if (s.label < o.u_min * (1 - 1e-12) || s.r.size() < 4) continue;
        if (s.r.front() > o.r_radiation || s.r.back() < o.r_radiation) continue;
        tab.u_values.push_back(s.label);
        tab.radiation.push_back(o.r_radiation * detail::interp_at(s.r, s.F_uA, o.r_radiation));
    }
    if (tab.u_values.size() < 3 ||
        std::log10(*std::max_element(tab.u_values.begin(), tab.u_values.end()) /
                   *std::min_element(tab.u_values.begin(), tab.u_values.end())) < o.min_u_decades * 0.999)
        throw Error(ErrorKind::input, "insufficient span: radiation field needs one decade in u");
    tab.u_slope = detail::slope_fit("rF_uA(u)", tab.u_values, tab.radiation, o.target_u, o.tol_u);
    return tab;
}

// ---------------------------------------------------------------------------
// Sobolev-embedding monitor

struct KsEntry {
    RegionSpec region;
    double lhs = 0;    // sup |u| on the piece
    double rhs = 0;    // embedding right side on the enlarged piece, implicit constant = 1
    double ratio = 0;  // lhs / rhs
    double margin = 0;  // 1 - ratio
};

struct KsReport {
    std::vector<KsEntry> entries;
    double min_margin = std::numeric_limits<double>::infinity();
};

namespace detail {

// enlarged piece: times [T/2, 4T], radii / retarded times over [scale/2, 4 scale]
inline bool in_enlarged(const RegionSpec& g, double t, double r) {
    if (t < g.T / 2 || t > 4 * g.T || r > t + g.R1 + 1) return false;
    if (g.kind == RegionKind::C_T_R) return g.R <= 1 ? r < 4 : (r >= g.R / 2 && r < 4 * g.R);
    const double w = t - r;
    return g.U <= 1 ? w < 4 : (w >= g.U / 2 && w < 4 * g.U);
}

}  // namespace detail

// Both sides of the L^2 -> L^infinity embeddings on every C_T^R, C_T^U piece the data covers.
// u^{<=2} collects u and its first and second mode-level derivatives.
inline KsReport ks_monitor(const SpaceTimeData& d, const std::vector<double>& Ts, double R1 = 0,
                           double constant = 1.0) {
    d.validate();
    if (d.nt() < 3 || d.nr() < 3) throw Error(ErrorKind::input, "missing derivative data for the embedding monitor");
    const auto wt = detail::trapezoid_weights(d.t);
    const auto wr = detail::trapezoid_weights(d.r);
    KsReport rep;
    for (const auto& comp : d.values) {
        std::vector<std::vector<double>> family{comp};
        for (auto& a : mode_derivatives(d, comp)) family.push_back(a);
        const std::size_t first_order = family.size();
        for (std::size_t k = 1; k < first_order; ++k)
            for (auto& a : mode_derivatives(d, family[k])) family.push_back(a);
        std::vector<std::vector<double>> grads;
        for (const auto& a : family)
            for (auto& b : mode_derivatives(d, a)) grads.push_back(std::move(b));

        for (double T : Ts) {
            for (const RegionSpec& g : dyadic_partition(T, R1)) {
                double sup = 0;
                bool any = false;
                std::vector<double> l2(family.size(), 0.0), g2(grads.size(), 0.0);
                for (std::size_t i = 0; i < d.nt(); ++i)
                    for (std::size_t j = 0; j < d.nr(); ++j) {
                        const double t = d.t[i], r = d.r[j];
                        const std::size_t ij = i * d.nr() + j;
                        if (g.contains(t, r)) {
                            any = true;
                            sup = std::max(sup, std::abs(comp[ij]));
                        }
                        if (detail::in_enlarged(g, t, r)) {
                            const double vol = wt[i] * wr[j] * r * r * d.angular_measure;
                            for (std::size_t a = 0; a < family.size(); ++a) l2[a] += vol * sqr(family[a][ij]);
                            for (std::size_t a = 0; a < grads.size(); ++a) g2[a] += vol * sqr(grads[a][ij]);
                        }
                    }
                if (!any) continue;
                double n0 = 0, n1 = 0;
                for (double v : l2) n0 += std::sqrt(v);
                for (double v : g2) n1 += std::sqrt(v);
                KsEntry e;
                e.region = g;
                e.lhs = sup;
                if (g.kind == RegionKind::C_T_R)
                    e.rhs = constant * (n0 / (std::sqrt(T) * std::pow(g.R, 1.5)) + n1 / (std::sqrt(T) * std::sqrt(g.R)));
                else
                    e.rhs = constant * (n0 / (std::pow(T, 1.5) * std::sqrt(g.U)) + std::sqrt(g.U) * n1 / std::pow(T, 1.5));
                e.ratio = e.rhs > 0 ? e.lhs / e.rhs : (e.lhs > 0 ? std::numeric_limits<double>::infinity() : 0.0);
                e.margin = 1 - e.ratio;
                rep.min_margin = std::min(rep.min_margin, e.margin);
                rep.entries.push_back(e);
            }
        }
    }
    return rep;
}

// Builds mode-amplitude space-time data from a trajectory's recorded slices.
inline SpaceTimeData slice_data(const Trajectory& tr, bool use_areal_radius = true) {
    const auto& s = tr.slices;
    if (s.t.empty()) throw Error(ErrorKind::input, "trajectory has no recorded slices");
    SpaceTimeData d;
    d.t = s.t;
    std::vector<std::size_t> keep;
    double prev = 0;
    for (std::size_t j = 0; j < s.r.size(); ++j) {
        // near the horizon r collapses onto 2M in double precision; keep strictly increasing radii
        const double x = use_areal_radius ? s.r[j] : s.rstar[j];
        if (s.r[j] > 0 && (keep.empty() || x > prev * (1 + 1e-9))) {
            keep.push_back(j);
            prev = x;
        }
    }
    for (std::size_t j : keep) d.r.push_back(use_areal_radius ? s.r[j] : s.rstar[j]);
    d.names = {"psi"};
    d.angular_measure = 1;
    d.mode_L = tr.config.l * (tr.config.l + 1.0);
    std::vector<double> v;
    v.reserve(d.t.size() * keep.size());
    for (std::size_t i = 0; i < d.t.size(); ++i)
        for (std::size_t j : keep) v.push_back(s.psi[i][j] / sqr(s.r[j]));  // psi / r^2: the middle component
    d.values.push_back(std::move(v));
    return d;
}

}  // namespace maxlab
