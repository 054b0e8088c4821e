// Spherical-harmonic bookkeeping: radial projection, charges, mode <-> tensor maps.
#pragma once

#include <cmath>
#include <string>
#include <vector>

#include <boost/math/special_functions/legendre.hpp>

#include "tensorcalc.hpp"

namespace maxlab {

enum class Parity { even, odd };

inline const char* to_string(Parity p) { return p == Parity::even ? "even" : "odd"; }

struct ModeIndex {
    int l = 1;
    int m = 0;
    Parity parity = Parity::odd;
};

// P_l'(x) as a finite Legendre sum; regular at x = +-1.
inline double legendre_dp(int l, double x) {
    double s = 0;
    for (int k = l - 1; k >= 0; k -= 2) s += (2 * k + 1) * std::legendre(unsigned(k), x);
    return s;
}

inline double ylm0_norm(int l) { return std::sqrt((2 * l + 1) / (4 * pi)); }

inline double ylm0(int l, double theta) { return ylm0_norm(l) * std::legendre(unsigned(l), std::cos(theta)); }

inline double ylm0_dtheta(int l, double theta) {
    return -ylm0_norm(l) * std::sin(theta) * legendre_dp(l, std::cos(theta));
}

// cot(theta) d_theta Y_l0, finite on the axis
inline double ylm0_cot_dtheta(int l, double theta) {
    return -ylm0_norm(l) * std::cos(theta) * legendre_dp(l, std::cos(theta));
}

// Real orthonormal harmonics; m < 0 selects the sine branch.
inline double real_ylm(int l, int m, double theta, double phi) {
    if (m == 0) return std::sph_legendre(unsigned(l), 0u, theta);
    const double base = std::sqrt(2.0) * std::sph_legendre(unsigned(l), unsigned(std::abs(m)), theta);
    return m > 0 ? base * std::cos(m * phi) : base * std::sin(-m * phi);
}

// ---------------------------------------------------------------------------
// Sphere quadrature: Gauss-Legendre in cos(theta), trapezoid in phi.

struct SphereQuadrature {
    std::vector<double> theta, w_theta;  // w_theta integrates d(cos theta)
    std::vector<double> phi;
    double w_phi = 0;

    explicit SphereQuadrature(int n = 16) {
        if (n < 2) throw Error(ErrorKind::input, "sphere quadrature needs n >= 2");
        const auto zeros = boost::math::legendre_p_zeros<double>(n);
        std::vector<double> xs;
        for (double z : zeros) {
            xs.push_back(z);
            if (z != 0) xs.push_back(-z);
        }
        std::sort(xs.begin(), xs.end());
        for (double x : xs) {
            const double dp = boost::math::legendre_p_prime<double>(n, x);
            theta.push_back(std::acos(x));
            w_theta.push_back(2.0 / ((1 - x * x) * dp * dp));
        }
        const int nphi = 2 * n;
        for (int k = 0; k < nphi; ++k) phi.push_back(2 * pi * (k + 0.5) / nphi);
        w_phi = 2 * pi / nphi;
    }

    template <class F>
    double integrate(const F& f) const {
        double s = 0;
        for (std::size_t i = 0; i < theta.size(); ++i) {
            double si = 0;
            for (double ph : phi) si += f(theta[i], ph);
            s += w_theta[i] * w_phi * si;
        }
        return s;
    }
};

// ---------------------------------------------------------------------------
// Radial part and charges

struct RadialPart {
    double tr = 0;        // coefficient of dt ^ dr
    double phitheta = 0;  // coefficient of the area form sin(theta) d(theta) ^ d(phi)
};

struct ChargePair {
    double q_e = 0;
    double q_m = 0;
};

namespace detail {

struct SphereBasis {
    Vec3 n, eth, eph;
};

inline SphereBasis sphere_basis(double th, double ph) {
    return {Vec3(std::sin(th) * std::cos(ph), std::sin(th) * std::sin(ph), std::cos(th)),
            Vec3(std::cos(th) * std::cos(ph), std::cos(th) * std::sin(ph), -std::sin(th)),
            Vec3(-std::sin(ph), std::cos(ph), 0)};
}

inline Vec4 spatial(const Vec3& v) {
    Vec4 o;
    o << 0, v;
    return o;
}

}  // namespace detail

inline RadialPart radial_part(const TwoFormField& field, double t, double r, int quadrature_n = 16,
                              const MetricSpec* spec = nullptr) {
    if (quadrature_n < 8) throw Error(ErrorKind::input, "radial_part needs quadrature_n >= 8");
    if (spec) check_domain(*spec, r);
    const SphereQuadrature q(quadrature_n);
    RadialPart out;
    Vec4 et;
    et << 1, 0, 0, 0;
    out.tr = q.integrate([&](double th, double ph) {
        const auto b = detail::sphere_basis(th, ph);
        const Mat4 f = field(SpacetimePoint(t, r * b.n)).matrix();
        return et.dot(f * detail::spatial(b.n));
    }) / (4 * pi);
    out.phitheta = q.integrate([&](double th, double ph) {
        const auto b = detail::sphere_basis(th, ph);
        const Mat4 f = field(SpacetimePoint(t, r * b.n)).matrix();
        return r * r * detail::spatial(b.eth).dot(f * detail::spatial(b.eph));
    }) / (4 * pi);
    return out;
}

// q_m = (1/4pi) oint F, q_e = -(1/4pi) oint *F (so that q/r^2 dt^dr carries q_e = q).
inline ChargePair charges(const MetricSpec& spec, const TwoFormField& field, double t, double r,
                          int quadrature_n = 16) {
    check_domain(spec, r);
    const SphereQuadrature q(quadrature_n);
    ChargePair out;
    double se = 0, sm = 0;
    for (std::size_t i = 0; i < q.theta.size(); ++i)
        for (double ph : q.phi) {
            const auto b = detail::sphere_basis(q.theta[i], ph);
            const SpacetimePoint p(t, r * b.n);
            const TwoForm F = field(p);
            const Mat4 f = F.matrix();
            const Mat4 sf = hodge_star_2form(spec, p, F).matrix();
            const Vec4 A = detail::spatial(b.eth), B = detail::spatial(b.eph);
            const double w = q.w_theta[i] * q.w_phi;
            sm += w * r * r * A.dot(f * B);
            se += w * r * r * A.dot(sf * B);
        }
    out.q_m = sm / (4 * pi);
    out.q_e = -se / (4 * pi);
    return out;
}

// ---------------------------------------------------------------------------
// Charge sector: the stationary l = 0 field with prescribed charges.

class ChargeSector {
public:
    ChargeSector(double q_e, double q_m, MetricSpec spec) : q_e_(q_e), q_m_(q_m), spec_(std::move(spec)) {}

    // F_tr from d*F = 0 with the prescribed electric flux
    double Ftr(double r) const {
        if (q_e_ == 0) return 0;
        const SpacetimePoint p = SpacetimePoint::spherical(0, r, 0.5 * pi, 0);
        const MetricSample m = metric_components(spec_, p);
        const Mat4 L = polar_jacobian(p);
        const Mat4 gp = L.transpose() * m.g * L;
        const Mat4 gi = gp.inverse();
        const double sq = std::sqrt(-gp.determinant());  // includes sin(theta) = 1
        // (*F)_{theta phi} = sqrt(-g) g^tt g^rr F_tr - sqrt(-g) g^tr g^rt F_tr
        const double k = sq * (gi(0, 0) * gi(1, 1) - gi(0, 1) * gi(1, 0));
        return -q_e_ / k;
    }
    double Fphitheta(double) const { return q_m_; }

    TwoForm at(const SpacetimePoint& p) const {
        const double r = p.r();
        const Vec3 n = p.x / r;
        TwoForm F;
        const double e = Ftr(r);
        for (int i = 0; i < 3; ++i) F.set(0, i + 1, e * n[i]);
        // q_m sin(theta) d(theta) ^ d(phi) = q_m eps_ijk x_k / (2 r^3) dx^i ^ dx^j
        const double c = q_m_ / (r * r * r);
        F.set(1, 2, c * p.x[2]);
        F.set(1, 3, -c * p.x[1]);
        F.set(2, 3, c * p.x[0]);
        return F;
    }

    TwoFormField field() const {
        return [self = *this](const SpacetimePoint& p) { return self.at(p); };
    }

    double q_e() const { return q_e_; }
    double q_m() const { return q_m_; }

private:
    double q_e_, q_m_;
    MetricSpec spec_;
};

inline ChargeSector charge_sector_evolution(double q_e, double q_m, const MetricSpec& spec,
                                            bool radial_source_present = false) {
    if (radial_source_present)
        throw Error(ErrorKind::unsupported, "inhomogeneous radial sector belongs to the zero-resolvent solver");
    if (!spec.spherically_symmetric())
        throw Error(ErrorKind::unsupported, "charge sector requires a spherically symmetric background");
    return ChargeSector(q_e, q_m, spec);
}

// ---------------------------------------------------------------------------
// Mode amplitudes in the null frame

// uA and vA are amplitudes of the unit vector harmonic of the given parity:
// even -> grad Y / sqrt(L) (along theta-hat at m = 0), odd -> its rotation (along phi-hat).
struct ModeAmplitudes {
    double uv = 0, AB = 0, uA = 0, vA = 0;
};

inline TwoForm mode_sample_to_tensor(const MetricSpec& spec, const ModeIndex& mode, const ModeAmplitudes& a,
                                     const SpacetimePoint& p) {
    if (mode.l < 1) throw Error(ErrorKind::invalid_mode, "l = 0 belongs to the charge sector");
    if (mode.m != 0) throw Error(ErrorKind::unsupported, "tensor assembly implemented for m = 0");
    const double th = p.theta();
    const double L = mode.l * (mode.l + 1.0);
    const double Y = ylm0(mode.l, th);
    const double V = ylm0_dtheta(mode.l, th) / std::sqrt(L);
    FrameComponents c;
    c.uv = a.uv * Y;
    c.AB = a.AB * Y;
    if (mode.parity == Parity::even) {
        c.uA = a.uA * V;
        c.vA = a.vA * V;
    } else {
        c.uB = a.uA * V;
        c.vB = a.vA * V;
    }
    return from_frame_components(c, null_frame(spec, p));
}

inline ModeAmplitudes project_mode(const TwoFormField& field, const MetricSpec& spec, double t, double r,
                                   const ModeIndex& mode, int quadrature_n = 16) {
    const SphereQuadrature q(quadrature_n);
    const double L = mode.l * (mode.l + 1.0);
    ModeAmplitudes out;
    for (std::size_t i = 0; i < q.theta.size(); ++i) {
        const double th = q.theta[i];
        const double Y = ylm0(mode.l, th);
        const double V = ylm0_dtheta(mode.l, th) / std::sqrt(L);
        for (double ph : q.phi) {
            const SpacetimePoint p = SpacetimePoint::spherical(t, r, th, ph);
            const FrameComponents c = frame_components(field(p), null_frame(spec, p));
            const double w = q.w_theta[i] * q.w_phi;
            out.uv += w * c.uv * Y;
            out.AB += w * c.AB * Y;
            if (mode.parity == Parity::even) {
                out.uA += w * c.uA * V;
                out.vA += w * c.vA * V;
            } else {
                out.uA += w * c.uB * V;
                out.vA += w * c.vB * V;
            }
        }
    }
    return out;
}

}  // namespace maxlab
