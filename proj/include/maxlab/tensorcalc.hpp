// Numerical exterior calculus on sampled 2-form fields.
#pragma once

#include <array>
#include <functional>
#include <string>
#include <type_traits>
#include <vector>

#include "geometry.hpp"

namespace maxlab {

using TwoFormField = std::function<TwoForm(const SpacetimePoint&)>;
using ThreeFormField = std::function<ThreeForm(const SpacetimePoint&)>;
using OneFormField = std::function<Vec4(const SpacetimePoint&)>;

inline double default_step(const SpacetimePoint& p) { return 1e-3 * std::max(1.0, p.r()); }

namespace detail {

inline constexpr int d4_off[4] = {-2, -1, 1, 2};
inline constexpr double d4_w[4] = {1.0 / 12, -8.0 / 12, 8.0 / 12, -1.0 / 12};

template <class F>
auto partial4(const F& f, const SpacetimePoint& p, int mu, double h) {
    using V = std::decay_t<decltype(f(p))>;
    V acc = f(p.shifted(mu, d4_off[0] * h));
    acc *= d4_w[0];
    for (int k = 1; k < 4; ++k) {
        V term = f(p.shifted(mu, d4_off[k] * h));
        term *= d4_w[k];
        acc += term;
    }
    acc *= (1.0 / h);
    return acc;
}

inline double resolve_step(double h, const SpacetimePoint& p) { return h > 0 ? h : default_step(p); }

}  // namespace detail

inline std::array<TwoForm, 4> partials(const TwoFormField& F, const SpacetimePoint& p, double h = -1) {
    h = detail::resolve_step(h, p);
    std::array<TwoForm, 4> d;
    for (int mu = 0; mu < 4; ++mu) d[mu] = detail::partial4(F, p, mu, h);
    return d;
}

// (dF)_abc = d_a F_bc + d_b F_ca + d_c F_ab
inline ThreeForm exterior_d(const TwoFormField& F, const SpacetimePoint& p, double h = -1) {
    const auto d = partials(F, p, h);
    ThreeForm out;
    for (int k = 0; k < 4; ++k) {
        const int a = ThreeForm::triples[k][0], b = ThreeForm::triples[k][1], c = ThreeForm::triples[k][2];
        out[k] = d[a](b, c) + d[b](c, a) + d[c](a, b);
    }
    return out;
}

// d0 F = dF - dt ^ L_{d_t} F : every time derivative removed
inline ThreeForm d0(const TwoFormField& F, const SpacetimePoint& p, double h = -1) {
    h = detail::resolve_step(h, p);
    std::array<TwoForm, 4> d;
    for (int mu = 1; mu < 4; ++mu) d[mu] = detail::partial4(F, p, mu, h);
    ThreeForm out;
    for (int k = 0; k < 4; ++k) {
        const int a = ThreeForm::triples[k][0], b = ThreeForm::triples[k][1], c = ThreeForm::triples[k][2];
        out[k] = d[a](b, c) + d[b](c, a) + d[c](a, b);
    }
    return out;
}

inline TwoForm exterior_d_1form(const OneFormField& A, const SpacetimePoint& p, double h = -1) {
    h = detail::resolve_step(h, p);
    std::array<Vec4, 4> d;
    for (int mu = 0; mu < 4; ++mu) d[mu] = detail::partial4(A, p, mu, h);
    TwoForm out;
    for (int k = 0; k < 6; ++k) {
        const int a = TwoForm::pairs[k][0], b = TwoForm::pairs[k][1];
        out[k] = d[a][b] - d[b][a];
    }
    return out;
}

inline TwoForm d0_1form(const OneFormField& A, const SpacetimePoint& p, double h = -1) {
    h = detail::resolve_step(h, p);
    std::array<Vec4, 4> d;
    d[0] = Vec4::Zero();
    for (int mu = 1; mu < 4; ++mu) d[mu] = detail::partial4(A, p, mu, h);
    TwoForm out;
    for (int k = 0; k < 6; ++k) {
        const int a = TwoForm::pairs[k][0], b = TwoForm::pairs[k][1];
        out[k] = d[a][b] - d[b][a];
    }
    return out;
}

inline TwoFormField star_field(const MetricSpec& spec, TwoFormField F) {
    return [spec, F = std::move(F)](const SpacetimePoint& q) { return hodge_star_2form(spec, q, F(q)); };
}

inline ThreeForm codifferential_d_star(const MetricSpec& spec, const TwoFormField& F, const SpacetimePoint& p,
                                       double h = -1) {
    return exterior_d(star_field(spec, F), p, h);
}

inline ThreeForm d0_star(const MetricSpec& spec, const TwoFormField& F, const SpacetimePoint& p, double h = -1) {
    return d0(star_field(spec, F), p, h);
}

// ---------------------------------------------------------------------------
// Generators

enum class VectorFieldKind { translation, rotation, scaling };

struct VectorField {
    VectorFieldKind kind = VectorFieldKind::translation;
    int i = 0, j = 0;  // translation: d_i; rotation: x_i d_j - x_j d_i (spatial indices 1..3)

    static VectorField translation(int mu) { return {VectorFieldKind::translation, mu, 0}; }
    static VectorField rotation(int a, int b) { return {VectorFieldKind::rotation, a, b}; }
    static VectorField scaling() { return {VectorFieldKind::scaling, 0, 0}; }

    std::string name() const {
        static const char* ax = "txyz";
        switch (kind) {
        case VectorFieldKind::translation: return std::string("d_") + ax[i];
        case VectorFieldKind::rotation: return std::string("Omega_") + ax[i] + ax[j];
        case VectorFieldKind::scaling: return "S";
        }
        return "?";
    }

    Vec4 components(const SpacetimePoint& p) const {
        Vec4 X = Vec4::Zero();
        switch (kind) {
        case VectorFieldKind::translation: X[i] = 1; break;
        case VectorFieldKind::rotation:
            X[j] = p.coord(i);
            X[i] = -p.coord(j);
            break;
        case VectorFieldKind::scaling:
            for (int mu = 0; mu < 4; ++mu) X[mu] = p.coord(mu);
            break;
        }
        return X;
    }

    // J(a, g) = d_a X^g
    Mat4 jacobian(const SpacetimePoint&) const {
        Mat4 J = Mat4::Zero();
        switch (kind) {
        case VectorFieldKind::translation: break;
        case VectorFieldKind::rotation:
            J(i, j) = 1;
            J(j, i) = -1;
            break;
        case VectorFieldKind::scaling: J = Mat4::Identity(); break;
        }
        return J;
    }

    static std::vector<VectorField> catalog() {
        std::vector<VectorField> out;
        for (int mu = 0; mu < 4; ++mu) out.push_back(translation(mu));
        out.push_back(rotation(1, 2));
        out.push_back(rotation(1, 3));
        out.push_back(rotation(2, 3));
        out.push_back(scaling());
        return out;
    }
};

// (L_X F)_ab = X^g d_g F_ab + F_gb d_a X^g + F_ag d_b X^g
inline TwoForm lie_derivative(const TwoFormField& F, const VectorField& X, const SpacetimePoint& p, double h = -1) {
    const auto d = partials(F, p, h);
    const Vec4 x = X.components(p);
    const Mat4 J = X.jacobian(p);
    const Mat4 f = F(p).matrix();
    Mat4 out = J * f + f * J.transpose();
    for (int g = 0; g < 4; ++g)
        if (x[g] != 0) out += x[g] * d[g].matrix();
    return TwoForm::from_matrix(out);
}

// Closed form of *L_X F - L_X *F:
//   -X(K)F + K(F_rn d_m X^r + F_mr d_n X^r) - (K_rb d_a X^r + K_ar d_b X^r)F,
// with K = 1/2 eps sqrt(-g) g g the Hodge operator. X(K) is differentiated along X.
inline TwoForm star_lie_commutator(const MetricSpec& spec, const VectorField& X, const TwoFormField& field,
                                   const SpacetimePoint& p, double h = -1) {
    h = detail::resolve_step(h, p);
    const TwoForm F = field(p);
    const MetricSample m = metric_components(spec, p);
    const Vec4 x = X.components(p);
    const Mat4 J = X.jacobian(p);
    TwoForm XK;
    const double xn = x.norm();
    if (xn > 0) {
        const double s = h / std::max(1.0, xn);
        const Vec4 dir = x;
        for (int k = 0; k < 4; ++k)
            XK += detail::d4_w[k] * hodge_star(metric_components(spec, p.shifted(detail::d4_off[k] * s * dir)), F);
        XK *= 1.0 / s;
    }
    const Mat4 f = F.matrix();
    const TwoForm middle = hodge_star(m, TwoForm::from_matrix(J * f + f * J.transpose()));
    const Mat4 sf = hodge_star(m, F).matrix();
    const TwoForm last = TwoForm::from_matrix(J * sf + sf * J.transpose());
    return -1.0 * XK + middle - last;
}

inline TwoForm star_lie_commutator_fd(const MetricSpec& spec, const VectorField& X, const TwoFormField& field,
                                      const SpacetimePoint& p, double h = -1) {
    h = detail::resolve_step(h, p);
    const TwoForm a = hodge_star_2form(spec, p, lie_derivative(field, X, p, h));
    const TwoForm b = lie_derivative(star_field(spec, field), X, p, h);
    return a - b;
}

// ---------------------------------------------------------------------------
// Polar view (t, r, theta, phi) used by the scaling-commutator bookkeeping

inline Mat4 polar_jacobian(const SpacetimePoint& p) {
    const double r = p.r(), th = p.theta(), ph = p.phi();
    Mat4 L = Mat4::Zero();  // L(mu, a) = d x^mu / d y^a
    L(0, 0) = 1;
    L(1, 1) = std::sin(th) * std::cos(ph);
    L(2, 1) = std::sin(th) * std::sin(ph);
    L(3, 1) = std::cos(th);
    L(1, 2) = r * std::cos(th) * std::cos(ph);
    L(2, 2) = r * std::cos(th) * std::sin(ph);
    L(3, 2) = -r * std::sin(th);
    L(1, 3) = -r * std::sin(th) * std::sin(ph);
    L(2, 3) = r * std::sin(th) * std::cos(ph);
    return L;
}

inline Mat4 to_polar(const Mat4& cart_lower, const SpacetimePoint& p) {
    const Mat4 L = polar_jacobian(p);
    return L.transpose() * cart_lower * L;
}

struct ScalingCommutatorCheck {
    Mat4 commutator_polar = Mat4::Zero();  // ([*, L_S]F) in (t, r, theta, phi)
    Mat4 correction_polar = Mat4::Zero();  // eps F (-S(c) + kappa c)
    Mat4 combination = Mat4::Zero();       // difference
    double scale = 0;                      // max |polar (*F)| for normalization
};

// kappa_tr, kappa_AB are the coefficients used for (a, b) = (t, r) and (theta, phi).
inline ScalingCommutatorCheck scaling_commutator_check(const MetricSpec& spec, const TwoFormField& field,
                                                       const SpacetimePoint& p, double kappa_tr, double kappa_ab,
                                                       double h = -1) {
    h = detail::resolve_step(h, p);
    const VectorField S = VectorField::scaling();
    ScalingCommutatorCheck out;
    out.commutator_polar = to_polar(star_lie_commutator(spec, S, field, p, h).matrix(), p);
    const Mat4 Fp = to_polar(field(p).matrix(), p);
    // c_gd(y) = sqrt(-g) g^gg g^dd in polar coordinates, stationary so S(c) = r d_r c
    auto coeff = [&](const SpacetimePoint& q) {
        const MetricSample m = metric_components(spec, q);
        const Mat4 L = polar_jacobian(q);
        const Mat4 gp = L.transpose() * m.g * L;
        const Mat4 gi = gp.inverse();
        const double sq = std::sqrt(-gp.determinant());
        Mat4 c = Mat4::Zero();
        for (int a = 0; a < 4; ++a)
            for (int b = 0; b < 4; ++b) c(a, b) = sq * gi(a, a) * gi(b, b);
        return c;
    };
    const double r = p.r();
    const Vec3 n = p.x / r;
    const double hr = h;
    Mat4 dc = Mat4::Zero();
    for (int k = 0; k < 4; ++k) dc += detail::d4_w[k] * coeff(SpacetimePoint(p.t, p.x + detail::d4_off[k] * hr * n));
    dc /= hr;
    const Mat4 c0 = coeff(p);
    const Mat4 Sc = r * dc;
    for (int a = 0; a < 4; ++a)
        for (int b = a + 1; b < 4; ++b) {
            int rest[2], k = 0;
            for (int e = 0; e < 4; ++e)
                if (e != a && e != b) rest[k++] = e;
            const int g = rest[0], d = rest[1];
            double kappa = 0;
            if (a == 0 && b == 1) kappa = kappa_tr;
            if (a == 2 && b == 3) kappa = kappa_ab;
            const double v = levi_civita(g, d, a, b) * Fp(g, d) * (-Sc(g, d) + kappa * c0(g, d));
            out.correction_polar(a, b) = v;
            out.correction_polar(b, a) = -v;
        }
    out.combination = out.commutator_polar - out.correction_polar;
    out.scale = to_polar(hodge_star_2form(spec, p, field(p)).matrix(), p).cwiseAbs().maxCoeff();
    return out;
}

// ---------------------------------------------------------------------------
// Second-order form of the Maxwell system:
//   box F_ab - R_a^l F_lb - R_b^l F_al + R_ab^{lg} F_lg = nabla^g G1_gab + nabla_a J_b - nabla_b J_a,
// J = -*G2, curvature convention [nabla_c, nabla_d] V^a = R^a_bcd V^b.

struct MaxwellSources {
    ThreeFormField g1;  // dF
    ThreeFormField g2;  // d*F
};

inline constexpr double current_sign = -1.0;  // nabla^a F_ab = current_sign * (*G2)_b

struct WaveResidual {
    TwoForm lhs;       // wave operator with curvature terms
    TwoForm rhs;       // source combination
    TwoForm residual;  // lhs - rhs
};

namespace detail {

using T3 = std::array<double, 64>;  // T_{g a b} at 16g + 4a + b

inline T3 covariant_gradient(const TwoFormField& F, const SpacetimePoint& q, double h, const Christoffel& G) {
    const auto d = partials(F, q, h);
    const Mat4 f = F(q).matrix();
    T3 T{};
    for (int g = 0; g < 4; ++g) {
        const Mat4 dg = d[g].matrix();
        for (int a = 0; a < 4; ++a)
            for (int b = 0; b < 4; ++b) {
                double s = dg(a, b);
                for (int m = 0; m < 4; ++m) s -= G[gidx(m, g, a)] * f(m, b) + G[gidx(m, g, b)] * f(a, m);
                T[16 * g + 4 * a + b] = s;
            }
    }
    return T;
}

}  // namespace detail

inline WaveResidual wave_residual(const MetricSpec& spec, const TwoFormField& F, const MaxwellSources& src,
                                  const SpacetimePoint& p, double h = -1) {
    h = detail::resolve_step(h, p);
    ChristoffelCache cache(spec, 4);
    const MetricSample m = metric_components(spec, p);
    const Christoffel& G0 = cache.at(p);

    // stencil samples of T = nabla F and of Gamma
    std::array<std::array<detail::T3, 4>, 4> Ts{};
    std::array<std::array<Christoffel, 4>, 4> Gs{};
    for (int d = 0; d < 4; ++d)
        for (int k = 0; k < 4; ++k) {
            const SpacetimePoint q = p.shifted(d, detail::d4_off[k] * h);
            Gs[d][k] = cache.at(q);
            Ts[d][k] = detail::covariant_gradient(F, q, h, Gs[d][k]);
        }
    const detail::T3 T0 = detail::covariant_gradient(F, p, h, G0);

    std::array<detail::T3, 4> dT{};
    std::array<Christoffel, 4> dG{};
    for (int d = 0; d < 4; ++d) {
        for (int k = 0; k < 4; ++k) {
            for (int i = 0; i < 64; ++i) {
                dT[d][i] += detail::d4_w[k] * Ts[d][k][i];
                dG[d][i] += detail::d4_w[k] * Gs[d][k][i];
            }
        }
        for (int i = 0; i < 64; ++i) {
            dT[d][i] /= h;
            dG[d][i] /= h;
        }
    }
    // box F
    Mat4 box = Mat4::Zero();
    for (int a = 0; a < 4; ++a)
        for (int b = 0; b < 4; ++b) {
            double s = 0;
            for (int g = 0; g < 4; ++g)
                for (int d = 0; d < 4; ++d) {
                    const double gi = m.ginv(g, d);
                    if (gi == 0) continue;
                    double v = dT[d][16 * g + 4 * a + b];
                    for (int mu = 0; mu < 4; ++mu)
                        v -= G0[gidx(mu, d, g)] * T0[16 * mu + 4 * a + b] + G0[gidx(mu, d, a)] * T0[16 * g + 4 * mu + b] +
                             G0[gidx(mu, d, b)] * T0[16 * g + 4 * a + mu];
                    s += gi * v;
                }
            box(a, b) = s;
        }
    // curvature from the same Christoffel samples
    Riemann R{};
    for (int a = 0; a < 4; ++a)
        for (int b = 0; b < 4; ++b)
            for (int c = 0; c < 4; ++c)
                for (int d = 0; d < 4; ++d) {
                    double s = dG[c][gidx(a, d, b)] - dG[d][gidx(a, c, b)];
                    for (int e = 0; e < 4; ++e)
                        s += G0[gidx(a, c, e)] * G0[gidx(e, d, b)] - G0[gidx(a, d, e)] * G0[gidx(e, c, b)];
                    R[ridx(a, b, c, d)] = s;
                }
    Mat4 ric = Mat4::Zero();
    for (int b = 0; b < 4; ++b)
        for (int d = 0; d < 4; ++d)
            for (int a = 0; a < 4; ++a) ric(b, d) += R[ridx(a, b, a, d)];
    const Mat4 ric_mixed = ric * m.ginv;  // R_a^l
    const Mat4 f = F(p).matrix();
    const Mat4 fup = m.ginv * f * m.ginv;  // F^{lg}
    Mat4 lhs = box - ric_mixed * f - (ric_mixed * f.transpose()).transpose();
    // + R_ab^{lg} F_lg = g_ar R^r_b lg F^lg
    for (int a = 0; a < 4; ++a)
        for (int b = 0; b < 4; ++b) {
            double s = 0;
            for (int r = 0; r < 4; ++r) {
                if (m.g(a, r) == 0) continue;
                double t = 0;
                for (int l = 0; l < 4; ++l)
                    for (int g = 0; g < 4; ++g) t += R[ridx(r, b, l, g)] * fup(l, g);
                s += m.g(a, r) * t;
            }
            lhs(a, b) += s;
        }

    Mat4 rhs = Mat4::Zero();
    if (src.g1) {
        std::array<ThreeForm, 4> dG1;
        for (int d = 0; d < 4; ++d) dG1[d] = detail::partial4(src.g1, p, d, h);
        const ThreeForm g1 = src.g1(p);
        for (int a = 0; a < 4; ++a)
            for (int b = 0; b < 4; ++b) {
                double s = 0;
                for (int g = 0; g < 4; ++g)
                    for (int d = 0; d < 4; ++d) {
                        const double gi = m.ginv(g, d);
                        if (gi == 0) continue;
                        double v = dG1[d](g, a, b);
                        for (int mu = 0; mu < 4; ++mu)
                            v -= G0[gidx(mu, d, g)] * g1(mu, a, b) + G0[gidx(mu, d, a)] * g1(g, mu, b) +
                                 G0[gidx(mu, d, b)] * g1(g, a, mu);
                        s += gi * v;
                    }
                rhs(a, b) += s;
            }
    }
    if (src.g2) {
        auto J = [&](const SpacetimePoint& q) -> Vec4 {
            return current_sign * hodge_star(metric_components(spec, q), src.g2(q));
        };
        std::array<Vec4, 4> dJ;
        for (int d = 0; d < 4; ++d) dJ[d] = detail::partial4(J, p, d, h);
        for (int a = 0; a < 4; ++a)
            for (int b = 0; b < 4; ++b) rhs(a, b) += dJ[a][b] - dJ[b][a];
    }
    WaveResidual out;
    out.lhs = TwoForm::from_matrix(lhs);
    out.rhs = TwoForm::from_matrix(rhs);
    out.residual = out.lhs - out.rhs;
    return out;
}

// Sources computed from the field itself: G1 = dF, G2 = d*F.
inline MaxwellSources sources_of(const MetricSpec& spec, const TwoFormField& F, double h = -1) {
    MaxwellSources s;
    s.g1 = [F, h](const SpacetimePoint& q) { return exterior_d(F, q, h); };
    s.g2 = [spec, F, h](const SpacetimePoint& q) { return codifferential_d_star(spec, F, q, h); };
    return s;
}

}  // namespace maxlab
