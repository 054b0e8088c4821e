// Fixed-time d0 Maxwell system on Minkowski: constructive solver and weighted-bound checks.
#pragma once

#include <cmath>
#include <functional>
#include <limits>
#include <memory>
#include <random>
#include <string>
#include <vector>

#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "modes.hpp"

namespace maxlab {

// ---------------------------------------------------------------------------
// Quadrature helper

// F(r) = int_a^r f, tabulated on panels by adaptive Gauss-Kronrod and completed inside a panel
// with a fixed Gauss-Legendre rule, so F is smooth in r.
class CumulativeIntegral {
public:
    CumulativeIntegral() = default;
    CumulativeIntegral(std::function<double(double)> f, double a, double b, int panels = 128)
        : f_(std::move(f)), a_(a), b_(b) {
        if (!(b > a)) throw Error(ErrorKind::input, "source support must have b > a");
        nodes_.resize(std::size_t(panels) + 1);
        vals_.assign(std::size_t(panels) + 1, 0.0);
        for (int k = 0; k <= panels; ++k) nodes_[std::size_t(k)] = a + (b - a) * k / panels;
        for (int k = 0; k < panels; ++k) {
            double err = 0;
            const double v = boost::math::quadrature::gauss_kronrod<double, 15>::integrate(
                f_, nodes_[std::size_t(k)], nodes_[std::size_t(k) + 1], 12, 1e-14, &err);
            if (!std::isfinite(v)) throw Error(ErrorKind::input, "non-integrable source");
            vals_[std::size_t(k) + 1] = vals_[std::size_t(k)] + v;
        }
    }

    double a() const { return a_; }
    double b() const { return b_; }
    double total() const { return vals_.empty() ? 0.0 : vals_.back(); }

    double operator()(double r) const {
        if (vals_.empty() || r <= a_) return 0;
        if (r >= b_) return total();
        const double h = (b_ - a_) / double(nodes_.size() - 1);
        std::size_t k = std::min(nodes_.size() - 2, std::size_t((r - a_) / h));
        const double x0 = nodes_[k];
        if (r == x0) return vals_[k];
        return vals_[k] + boost::math::quadrature::gauss<double, 10>::integrate(f_, x0, r);
    }

private:
    std::function<double(double)> f_;
    double a_ = 0, b_ = 0;
    std::vector<double> nodes_, vals_;
};

// ---------------------------------------------------------------------------
// Problem and solution types

// Divergence-type sources: G1 = rho_m dx^dy^dz (magnetic), G2 = rho_e dx^dy^dz (electric).
enum class SourceKind { electric, magnetic };

inline const char* to_string(SourceKind k) { return k == SourceKind::electric ? "electric" : "magnetic"; }

struct RadialSource {
    std::function<double(double)> r2G;  // r^2 times the sphere-averaged 3-form component
    double a = 0, b = 0;                // support
    bool present() const { return static_cast<bool>(r2G); }
};

struct SourceMode {
    int l = 1, m = 0;
    SourceKind kind = SourceKind::electric;
    std::function<double(double)> rho;  // radial profile multiplying the real harmonic Y_lm
    double a = 0, b = 0;
};

struct FixedTimeProblem {
    double r0 = 0.5, r_max = 64;
    RadialSource radial_g1, radial_g2;
    std::vector<SourceMode> modes;

    void validate() const {
        if (!(r0 > 0) || !(r_max > r0)) throw Error(ErrorKind::input, "radial grid needs 0 < r0 < r_max");
        auto inside = [&](double a, double b) {
            if (!(a > r0) || !(b < r_max) || !(b > a))
                throw Error(ErrorKind::input, "source support must lie strictly inside [r0, r_max]");
        };
        if (radial_g1.present()) inside(radial_g1.a, radial_g1.b);
        if (radial_g2.present()) inside(radial_g2.a, radial_g2.b);
        for (const auto& m : modes) {
            if (m.l < 1) throw Error(ErrorKind::invalid_mode, "l = 0 belongs to the radial solve");
            if (std::abs(m.m) > m.l) throw Error(ErrorKind::invalid_mode, "|m| > l");
            inside(m.a, m.b);
        }
    }

    // sphere-averaged source components at radius r
    double radial_g1_at(double r) const { return radial_g1.present() && r >= radial_g1.a && r <= radial_g1.b ? radial_g1.r2G(r) / (r * r) : 0.0; }
    double radial_g2_at(double r) const { return radial_g2.present() && r >= radial_g2.a && r <= radial_g2.b ? radial_g2.r2G(r) / (r * r) : 0.0; }

    // full G1_{xyz}, G2_{xyz}
    std::pair<double, double> source_at(const Vec3& x) const {
        const double r = x.norm();
        const double th = std::atan2(std::hypot(x[0], x[1]), x[2]), ph = std::atan2(x[1], x[0]);
        double g1 = radial_g1_at(r), g2 = radial_g2_at(r);
        for (const auto& m : modes) {
            if (r < m.a || r > m.b) continue;
            const double v = m.rho(r) * real_ylm(m.l, m.m, th, ph);
            (m.kind == SourceKind::magnetic ? g1 : g2) += v;
        }
        return {g1, g2};
    }
};

// d_theta and d_phi of the real harmonic used by real_ylm
inline std::pair<double, double> real_ylm_derivatives(int l, int m, double theta, double phi) {
    const unsigned ul = unsigned(l);
    const int am = std::abs(m);
    auto Th = [&](int k) -> double {
        if (k > l) return 0.0;
        if (k < 0) return -std::sph_legendre(ul, unsigned(-k), theta);  // only k = -1 occurs, at am = 0
        return std::sph_legendre(ul, unsigned(k), theta);
    };
    const double dTh = 0.5 * (std::sqrt(double(l - am) * (l + am + 1)) * Th(am + 1) -
                              std::sqrt(double(l + am) * (l - am + 1)) * Th(am - 1));
    if (m == 0) return {dTh, 0.0};
    const double s2 = std::sqrt(2.0);
    const double base = s2 * Th(am);
    if (m > 0) return {s2 * dTh * std::cos(am * phi), -am * base * std::sin(am * phi)};
    return {s2 * dTh * std::sin(am * phi), am * base * std::cos(am * phi)};
}

// Per-mode radial Green-function solution of u'' + 2u'/r - l(l+1) u / r^2 = rho.
class ModeSolution {
public:
    ModeSolution(const SourceMode& src) : src_(src) {
        const int l = src.l;
        auto rho = src.rho;
        inner_ = CumulativeIntegral([rho, l](double s) { return std::pow(s, l + 2) * rho(s); }, src.a, src.b);
        outer_ = CumulativeIntegral([rho, l](double s) { return std::pow(s, 1 - l) * rho(s); }, src.a, src.b);
    }

    const SourceMode& source() const { return src_; }

    // u and u' at r
    std::pair<double, double> profile(double r) const {
        const int l = src_.l;
        const double c = -1.0 / (2 * l + 1);
        const double I1 = inner_(r);                    // int_0^r s^{l+2} rho
        const double I2 = outer_.total() - outer_(r);   // int_r^inf s^{1-l} rho
        const double u = c * (std::pow(r, -l - 1) * I1 + std::pow(r, l) * I2);
        const double du = c * (-(l + 1) * std::pow(r, -l - 2) * I1 + l * std::pow(r, l - 1) * I2);
        return {u, du};
    }

    // exterior multipole coefficient: u = coeff r^{-l-1} beyond the support
    double exterior_coefficient() const { return -inner_.total() / (2 * src_.l + 1); }

    // Cartesian gradient of u(r) Y_lm
    Vec3 gradient(const Vec3& x) const {
        const double r = x.norm();
        const double rho_xy = std::hypot(x[0], x[1]);
        const double th = std::atan2(rho_xy, x[2]), ph = std::atan2(x[1], x[0]);
        const auto [u, du] = profile(r);
        const double Y = real_ylm(src_.l, src_.m, th, ph);
        const auto [Yt, Yp] = real_ylm_derivatives(src_.l, src_.m, th, ph);
        const double st = std::sin(th);
        const Vec3 n = x / r;
        const Vec3 eth(std::cos(th) * std::cos(ph), std::cos(th) * std::sin(ph), -st);
        const Vec3 eph(-std::sin(ph), std::cos(ph), 0);
        const double yp = st > 1e-300 ? Yp / st : 0.0;
        return du * Y * n + (u / r) * (Yt * eth + yp * eph);
    }

private:
    SourceMode src_;
    CumulativeIntegral inner_, outer_;
};

struct FixedTimeField {
    // radial profiles: F_AB = Fbar_AB(r) on the unit sphere frame, (*F)_AB = Fbar_star_AB(r), F_tr = -Fbar_star_AB
    std::function<double(double)> Fbar_AB = [](double) { return 0.0; };
    std::function<double(double)> Fbar_star_AB = [](double) { return 0.0; };
    std::vector<std::shared_ptr<const ModeSolution>> modes;

    double Fbar_tr(double r) const { return -Fbar_star_AB(r); }

    TwoForm radial_at(const Vec3& x) const {
        const double r = x.norm();
        const Vec3 n = x / r;
        TwoForm F;
        const double e = Fbar_tr(r);
        for (int i = 0; i < 3; ++i) F.set(0, i + 1, e * n[i]);
        const double b = Fbar_AB(r);  // B = b n, F_ij = eps_ijk B_k
        F.set(1, 2, b * n[2]);
        F.set(1, 3, -b * n[1]);
        F.set(2, 3, b * n[0]);
        return F;
    }

    TwoForm nonradial_at(const Vec3& x) const {
        Vec3 E = Vec3::Zero(), B = Vec3::Zero();
        for (const auto& m : modes) {
            const Vec3 g = m->gradient(x);
            if (m->source().kind == SourceKind::electric)
                E -= g;  // F_ti = -d_i phi
            else
                B += g;  // F_ij = eps_ijk d_k chi
        }
        TwoForm F;
        for (int i = 0; i < 3; ++i) F.set(0, i + 1, E[i]);
        F.set(1, 2, B[2]);
        F.set(1, 3, -B[1]);
        F.set(2, 3, B[0]);
        return F;
    }

    TwoForm at(const Vec3& x) const { return radial_at(x) + nonradial_at(x); }

    TwoFormField field() const {
        return [self = *this](const SpacetimePoint& p) { return self.at(p.x); };
    }
    TwoFormField radial_field() const {
        return [self = *this](const SpacetimePoint& p) { return self.radial_at(p.x); };
    }
};

// ---------------------------------------------------------------------------
// Solvers

struct RadialProfiles {
    std::function<double(double)> Fbar_AB, Fbar_star_AB;
};

// r^2 Fbar(r) = -int_r^inf r^2 Gbar, for both sectors
inline RadialProfiles solve_radial(const FixedTimeProblem& pb) {
    pb.validate();
    auto make = [](const RadialSource& s) -> std::function<double(double)> {
        if (!s.present()) return [](double) { return 0.0; };
        auto I = std::make_shared<CumulativeIntegral>(s.r2G, s.a, s.b);
        return [I](double r) { return -(I->total() - (*I)(r)) / (r * r); };
    };
    return {make(pb.radial_g1), make(pb.radial_g2)};
}

inline std::vector<std::shared_ptr<const ModeSolution>> solve_nonradial(const FixedTimeProblem& pb) {
    pb.validate();
    std::vector<std::shared_ptr<const ModeSolution>> out;
    for (const auto& m : pb.modes) out.push_back(std::make_shared<const ModeSolution>(m));
    return out;
}

inline FixedTimeField solve(const FixedTimeProblem& pb) {
    FixedTimeField f;
    const RadialProfiles rp = solve_radial(pb);
    f.Fbar_AB = rp.Fbar_AB;
    f.Fbar_star_AB = rp.Fbar_star_AB;
    f.modes = solve_nonradial(pb);
    return f;
}

// Direct 3D quadrature of the Newtonian kernel: w(x) = -(1/4pi) int rho(s) Y(y)/|x-y| d^3y.
inline double green_kernel_potential(const SourceMode& m, const Vec3& x, int sphere_n = 24) {
    const SphereQuadrature q(sphere_n);
    auto radial = [&](double s) {
        return q.integrate([&](double th, double ph) {
            const Vec3 y(s * std::sin(th) * std::cos(ph), s * std::sin(th) * std::sin(ph), s * std::cos(th));
            return real_ylm(m.l, m.m, th, ph) / (x - y).norm();
        }) * s * s * m.rho(s);
    };
    double err = 0;
    const double v = boost::math::quadrature::gauss_kronrod<double, 31>::integrate(radial, m.a, m.b, 10, 1e-12, &err);
    return -v / (4 * pi);
}

// ---------------------------------------------------------------------------
// Residuals

struct ResolventResidual {
    double full = 0;    // max |d0 F - G1|, |d0 *F - G2| relative to max |G|
    double radial = 0;  // same for the radial sector alone
    std::size_t samples = 0;
};

inline ResolventResidual check_residuals(const FixedTimeProblem& pb, const FixedTimeField& f, int n_r = 12,
                                         int n_ang = 4) {
    const MetricSpec mink = MetricSpec::minkowski();
    const TwoFormField F = f.field(), Fr = f.radial_field();
    ResolventResidual out;
    double res = 0, scale = 0, rres = 0, rscale = 0;
    const double r_hi = std::min(pb.r_max * 0.9, 40.0);
    auto angle = [n_ang](int i, int j) { return std::pair{pi * (i + 0.5) / n_ang, 2 * pi * (j + 0.3) / n_ang}; };
    // reference scale: sup |G| on a dense scan, so coarse residual samples cannot miss the source peak
    for (double r : linspace(pb.r0, r_hi, 400)) {
        rscale = std::max({rscale, std::abs(pb.radial_g1_at(r)), std::abs(pb.radial_g2_at(r))});
        for (int i = 0; i < n_ang; ++i)
            for (int j = 0; j < n_ang; ++j) {
                const auto [th, ph] = angle(i, j);
                const auto [g1, g2] = pb.source_at(SpacetimePoint::spherical(0, r, th, ph).x);
                scale = std::max({scale, std::abs(g1), std::abs(g2)});
            }
    }
    for (double r : linspace(pb.r0 * 1.5, r_hi, std::size_t(n_r)))
        for (int i = 0; i < n_ang; ++i)
            for (int j = 0; j < n_ang; ++j) {
                const auto [th, ph] = angle(i, j);
                const SpacetimePoint p = SpacetimePoint::spherical(0, r, th, ph);
                // smaller than the default step: truncation of the 4th-order stencil stays below 1e-11
                const double h = 3e-4 * std::max(1.0, r);
                const auto [g1, g2] = pb.source_at(p.x);
                const ThreeForm a = d0(F, p, h), b = d0_star(mink, F, p, h);
                ThreeForm ga, gb;
                ga[3] = g1;
                gb[3] = g2;
                res = std::max({res, (a - ga).max_abs(), (b - gb).max_abs()});
                const ThreeForm ra = d0(Fr, p, h), rb = d0_star(mink, Fr, p, h);
                ThreeForm rga, rgb;
                rga[3] = pb.radial_g1_at(r);
                rgb[3] = pb.radial_g2_at(r);
                rres = std::max({rres, (ra - rga).max_abs(), (rb - rgb).max_abs()});
                ++out.samples;
            }
    out.full = scale > 0 ? res / scale : res;
    out.radial = rscale > 0 ? rres / rscale : rres;
    return out;
}

// ---------------------------------------------------------------------------
// Weighted bounds

struct BoundsOptions {
    int r_points_per_annulus = 24;
    int sphere_n = 8;
    double inf_bc_tolerance = 1e-8;
};

struct AnnulusRatio {
    double R = 0, lhs = 0, rhs = 0, ratio = 0;
    bool finite = true;
};

struct BoundsReport {
    double lhs0 = 0, rhs0 = 0, ratio0 = 0;
    double lhs1 = 0, rhs1 = 0, ratio1 = 0;
    std::vector<AnnulusRatio> radial_improvement;
    double inf_bc_tail = 0;  // tail r Fbar norm relative to its maximum over annuli
    bool inf_bc_violated = false;
    bool trivial = false;  // all sides vanish
};

namespace detail {

// per-annulus, per-component weighted sums of squares
struct DyadicSums {
    std::vector<std::vector<double>> s;
    std::size_t comps = 0;
    explicit DyadicSums(std::size_t n_annuli, std::size_t c) : s(n_annuli, std::vector<double>(c, 0.0)), comps(c) {}
    void add(std::size_t k, std::size_t c, double w, double v) { s[k][c] += w * v * v; }
    double le() const {  // sum over components of sup over annuli
        double out = 0;
        for (std::size_t c = 0; c < comps; ++c) {
            double m = 0;
            for (const auto& a : s) m = std::max(m, std::sqrt(a[c]));
            out += m;
        }
        return out;
    }
    double le_star() const {
        double out = 0;
        for (const auto& a : s)
            for (double v : a) out += std::sqrt(v);
        return out;
    }
    double annulus(std::size_t k) const {
        double out = 0;
        for (double v : s[k]) out += std::sqrt(v);
        return out;
    }
};

inline double safe_ratio(double a, double b) {
    if (b > 0) return a / b;
    return a > 0 ? std::numeric_limits<double>::infinity() : 0.0;
}

}  // namespace detail

// Both sides of the strengthened fixed-time bounds and the radial improvement per annulus.
// Tensor norms sum the independent Cartesian components; gradients are finite differences.
inline BoundsReport verify_bounds(const FixedTimeProblem& pb, const FixedTimeField& f, const BoundsOptions& o = {}) {
    if (!f.Fbar_AB || !f.Fbar_star_AB) throw Error(ErrorKind::input, "empty field");
    std::vector<std::pair<double, double>> ann;  // [lo, hi) per dyadic annulus
    std::vector<double> Rs;
    {
        double lo = pb.r0, R = 1;
        while (lo < pb.r_max) {
            const double hi = std::min(2 * R, pb.r_max);
            if (hi > lo) {
                ann.push_back({lo, hi});
                Rs.push_back(R);
                lo = hi;
            }
            R *= 2;
        }
    }
    const std::size_t K = ann.size();
    using detail::DyadicSums;
    DyadicSums F_le(K, 6), rgradF_le(K, 18), rFbar_le(K, 6), r2gradFbar_le(K, 18);
    DyadicSums Finv_le(K, 6), gradF_le(K, 18);
    DyadicSums G_les(K, 2), Ginv_les(K, 2), rGbar_les(K, 2), r2Gbar_les(K, 2);
    DyadicSums Fbar32(K, 6), Fm12(K, 6), rFbar_tail(K, 6);

    const SphereQuadrature q(o.sphere_n);
    const TwoFormField F = f.field(), Fr = f.radial_field();
    for (std::size_t k = 0; k < K; ++k) {
        const double lo = ann[k].first, hi = ann[k].second;
        const double dr = (hi - lo) / o.r_points_per_annulus;
        for (int ir = 0; ir < o.r_points_per_annulus; ++ir) {
            const double r = lo + (ir + 0.5) * dr;
            const double br = bracket(r);
            const double g1b = pb.radial_g1_at(r), g2b = pb.radial_g2_at(r);
            for (std::size_t it = 0; it < q.theta.size(); ++it)
                for (double ph : q.phi) {
                    const double w = dr * r * r * q.w_theta[it] * q.w_phi;
                    const SpacetimePoint p = SpacetimePoint::spherical(0, r, q.theta[it], ph);
                    const TwoForm Fv = F(p), Fb = Fr(p);
                    const auto dF = partials(F, p), dFb = partials(Fr, p);
                    const auto [g1, g2] = pb.source_at(p.x);
                    for (int c = 0; c < 6; ++c) {
                        F_le.add(k, c, w / br, Fv[c]);
                        Finv_le.add(k, c, w / br, Fv[c] / br);
                        rFbar_le.add(k, c, w / br, br * Fb[c]);
                        Fbar32.add(k, c, w, std::pow(br, 1.5) * Fb[c]);
                        Fm12.add(k, c, w, Fv[c] / std::sqrt(br));
                        rFbar_tail.add(k, c, w / br, r * Fb[c]);
                        for (int i = 0; i < 3; ++i) {
                            const std::size_t ci = std::size_t(3 * c + i);
                            rgradF_le.add(k, ci, w / br, br * dF[i + 1][c]);
                            gradF_le.add(k, ci, w / br, dF[i + 1][c]);
                            r2gradFbar_le.add(k, ci, w / br, br * br * dFb[i + 1][c]);
                        }
                    }
                    G_les.add(k, 0, w * br, g1);
                    G_les.add(k, 1, w * br, g2);
                    Ginv_les.add(k, 0, w * br, g1 / br);
                    Ginv_les.add(k, 1, w * br, g2 / br);
                    rGbar_les.add(k, 0, w * br, br * g1b);
                    rGbar_les.add(k, 1, w * br, br * g2b);
                    r2Gbar_les.add(k, 0, w * br, br * br * g1b);
                    r2Gbar_les.add(k, 1, w * br, br * br * g2b);
                }
        }
    }
    BoundsReport rep;
    const double radial_left = rFbar_le.le() + r2gradFbar_le.le();
    rep.lhs0 = F_le.le() + rgradF_le.le() + radial_left;
    rep.rhs0 = G_les.le_star() + rGbar_les.le_star();
    rep.lhs1 = Finv_le.le() + gradF_le.le() + radial_left;
    rep.rhs1 = Ginv_les.le_star() + rGbar_les.le_star();
    rep.ratio0 = detail::safe_ratio(rep.lhs0, rep.rhs0);
    rep.ratio1 = detail::safe_ratio(rep.lhs1, rep.rhs1);
    rep.trivial = rep.lhs0 == 0 && rep.rhs0 == 0;
    const double g_rad = r2Gbar_les.le_star();
    double tail_max = 0;
    for (std::size_t k = 0; k < K; ++k) {
        AnnulusRatio a;
        a.R = Rs[k];
        a.lhs = Fbar32.annulus(k);
        a.rhs = g_rad + Fm12.annulus(k);
        a.ratio = detail::safe_ratio(a.lhs, a.rhs);
        a.finite = std::isfinite(a.ratio);
        rep.radial_improvement.push_back(a);
        tail_max = std::max(tail_max, rFbar_tail.annulus(k));
    }
    // inf-bc: r Fbar must die out; compare the outermost annulus with the largest one
    const double tail = K ? rFbar_tail.annulus(K - 1) : 0.0;
    rep.inf_bc_tail = tail_max > 0 ? tail / tail_max : 0.0;
    rep.inf_bc_violated = rep.inf_bc_tail > o.inf_bc_tolerance;
    return rep;
}

// Field with a stationary Coulomb tail and no source; violates the decay condition at infinity.
inline FixedTimeField coulomb_tail_field(double q) {
    FixedTimeField f;
    f.Fbar_star_AB = [q](double r) { return q / (r * r); };
    return f;
}

// ---------------------------------------------------------------------------
// Single-pass perturbation check on an asymptotically flat metric

struct PerturbationCheck {
    std::vector<double> R;
    std::vector<double> annulus_les;  // LE* contribution of d0((* - star) F) per annulus
    double total = 0;
    double last_fraction = 0;  // outermost contribution / total
    bool finite = false;
};

inline PerturbationCheck perturbation_check(const MetricSpec& spec, const FixedTimeField& f, double r0, double r_max,
                                            int r_points = 16, int sphere_n = 6) {
    const MetricSpec mink = MetricSpec::minkowski();
    const TwoFormField F = f.field();
    const TwoFormField diff = [spec, mink, F](const SpacetimePoint& p) {
        const TwoForm v = F(p);
        return hodge_star_2form(spec, p, v) - hodge_star_2form(mink, p, v);
    };
    const SphereQuadrature q(sphere_n);
    PerturbationCheck out;
    double lo = r0, R = 1;
    while (lo < r_max) {
        const double hi = std::min(2 * R, r_max);
        if (hi > lo) {
            const double dr = (hi - lo) / r_points;
            double s = 0;
            for (int i = 0; i < r_points; ++i) {
                const double r = lo + (i + 0.5) * dr;
                for (std::size_t it = 0; it < q.theta.size(); ++it)
                    for (double ph : q.phi) {
                        const SpacetimePoint p = SpacetimePoint::spherical(0, r, q.theta[it], ph);
                        const ThreeForm e = d0(diff, p);
                        double e2 = 0;
                        for (int c = 0; c < 4; ++c) e2 += e[c] * e[c];
                        s += dr * r * r * q.w_theta[it] * q.w_phi * bracket(r) * e2;
                    }
            }
            out.R.push_back(R);
            out.annulus_les.push_back(std::sqrt(s));
            out.total += std::sqrt(s);
            lo = hi;
        }
        R *= 2;
    }
    out.finite = std::isfinite(out.total);
    out.last_fraction = out.total > 0 ? out.annulus_les.back() / out.total : 0.0;
    return out;
}

// ---------------------------------------------------------------------------
// Fuzzing campaign

struct CampaignOptions {
    int seeds = 20;
    std::uint64_t base_seed = 20240601;
    double support_lo = 2, support_hi = 8;
    int l_min = 1, l_max = 3;
    int modes_per_seed = 3;
    double r0 = 0.5, r_max = 64;
    BoundsOptions bounds;
    double residual_tol = 1e-6, radial_residual_tol = 1e-8, spread_tol = 2.0;
};

struct SeedResult {
    std::uint64_t seed = 0;
    double ratio0 = 0, ratio1 = 0;
    double residual = 0, radial_residual = 0;
    double max_annulus_ratio = 0;
    bool annuli_finite = true;
};

struct CampaignResult {
    std::vector<SeedResult> seeds;
    double max_ratio0 = 0, max_ratio1 = 0;
    double spread0 = 0, spread1 = 0;  // max / min across seeds
    double max_residual = 0, max_radial_residual = 0;
    bool annuli_finite = true;
    bool pass = false;
};

inline std::function<double(double)> bump_profile(double amp, double c, double w) {
    return [amp, c, w](double r) {
        const double y = (r - c) / w;
        if (std::abs(y) >= 1) return 0.0;
        return amp * std::exp(1.0 - 1.0 / (1 - y * y));
    };
}

inline FixedTimeProblem random_problem(std::uint64_t seed, const CampaignOptions& o) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> U(0.0, 1.0);
    auto amp = [&]() { return (U(rng) < 0.5 ? -1.0 : 1.0) * (0.5 + U(rng)); };
    auto support = [&](double& a, double& b, double& c, double& w) {
        const double span = o.support_hi - o.support_lo;
        w = span * (0.15 + 0.3 * U(rng));
        c = o.support_lo + w + (span - 2 * w) * U(rng);
        a = c - w;
        b = c + w;
    };
    FixedTimeProblem pb;
    pb.r0 = o.r0;
    pb.r_max = o.r_max;
    double a, b, c, w;
    support(a, b, c, w);
    pb.radial_g1 = {bump_profile(amp(), c, w), a, b};
    support(a, b, c, w);
    pb.radial_g2 = {bump_profile(amp(), c, w), a, b};
    for (int k = 0; k < o.modes_per_seed; ++k) {
        SourceMode m;
        m.l = o.l_min + int(U(rng) * (o.l_max - o.l_min + 1));
        m.l = std::min(m.l, o.l_max);
        m.m = int(std::floor(U(rng) * (2 * m.l + 1))) - m.l;
        m.m = std::clamp(m.m, -m.l, m.l);
        m.kind = U(rng) < 0.5 ? SourceKind::electric : SourceKind::magnetic;
        support(a, b, c, w);
        m.rho = bump_profile(amp(), c, w);
        m.a = a;
        m.b = b;
        pb.modes.push_back(m);
    }
    return pb;
}

inline CampaignResult resolvent_campaign(const CampaignOptions& o) {
    if (o.seeds < 1) throw Error(ErrorKind::input, "campaign needs at least one seed");
    CampaignResult out;
    double min0 = std::numeric_limits<double>::infinity(), min1 = min0;
    for (int s = 0; s < o.seeds; ++s) {
        const std::uint64_t seed = o.base_seed + std::uint64_t(s);
        const FixedTimeProblem pb = random_problem(seed, o);
        const FixedTimeField f = solve(pb);
        const BoundsReport br = verify_bounds(pb, f, o.bounds);
        const ResolventResidual rr = check_residuals(pb, f);
        SeedResult sr;
        sr.seed = seed;
        sr.ratio0 = br.ratio0;
        sr.ratio1 = br.ratio1;
        sr.residual = rr.full;
        sr.radial_residual = rr.radial;
        for (const auto& a : br.radial_improvement) {
            sr.annuli_finite = sr.annuli_finite && a.finite;
            sr.max_annulus_ratio = std::max(sr.max_annulus_ratio, a.ratio);
        }
        out.seeds.push_back(sr);
        out.max_ratio0 = std::max(out.max_ratio0, sr.ratio0);
        out.max_ratio1 = std::max(out.max_ratio1, sr.ratio1);
        min0 = std::min(min0, sr.ratio0);
        min1 = std::min(min1, sr.ratio1);
        out.max_residual = std::max(out.max_residual, sr.residual);
        out.max_radial_residual = std::max(out.max_radial_residual, sr.radial_residual);
        out.annuli_finite = out.annuli_finite && sr.annuli_finite;
    }
    out.spread0 = out.max_ratio0 / min0;
    out.spread1 = out.max_ratio1 / min1;
    out.pass = out.max_residual < o.residual_tol && out.max_radial_residual < o.radial_residual_tol &&
               std::isfinite(out.max_ratio1) && out.spread1 <= o.spread_tol && out.annuli_finite;
    return out;
}

}  // namespace maxlab
