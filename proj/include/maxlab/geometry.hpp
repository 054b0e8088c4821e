// Background metrics, pointwise tensor algebra, null frames and tortoise maps.
#pragma once

#include <array>
#include <cmath>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "core.hpp"

namespace maxlab {

using Vec3 = Eigen::Vector3d;
using Vec4 = Eigen::Vector4d;
using Mat4 = Eigen::Matrix4d;

struct SpacetimePoint {
    double t = 0;
    Vec3 x = Vec3::Zero();

    SpacetimePoint() = default;
    SpacetimePoint(double t_, const Vec3& x_) : t(t_), x(x_) {}
    SpacetimePoint(double t_, double x_, double y_, double z_) : t(t_), x(x_, y_, z_) {}

    double r() const { return x.norm(); }
    double theta() const { return std::atan2(std::hypot(x[0], x[1]), x[2]); }
    double phi() const { return std::atan2(x[1], x[0]); }
    double coord(int mu) const { return mu == 0 ? t : x[mu - 1]; }

    SpacetimePoint shifted(int mu, double d) const {
        SpacetimePoint q = *this;
        if (mu == 0)
            q.t += d;
        else
            q.x[mu - 1] += d;
        return q;
    }
    SpacetimePoint shifted(const Vec4& d) const { return {t + d[0], x + d.tail<3>()}; }

    static SpacetimePoint spherical(double t, double r, double theta, double phi) {
        return {t, Vec3(r * std::sin(theta) * std::cos(phi), r * std::sin(theta) * std::sin(phi),
                        r * std::cos(theta))};
    }
};

// ---------------------------------------------------------------------------
// Coefficient functions

struct RadialFunction {
    std::string name = "zero";
    double amplitude = 0;
    std::function<double(double)> f = [](double) { return 0.0; };
    std::function<double(double)> df;  // optional analytic derivative
};

inline RadialFunction make_radial_function(const std::string& name, double amplitude, double mass = 0) {
    RadialFunction rf;
    rf.name = name;
    rf.amplitude = amplitude;
    const double a = amplitude;
    if (name == "zero") {
        rf.amplitude = 0;
    } else if (name == "inverse_r") {
        rf.f = [a](double r) { return a / r; };
        rf.df = [a](double r) { return -a / (r * r); };
    } else if (name == "inverse_bracket") {
        rf.f = [a](double r) { return a / bracket(r); };
        rf.df = [a](double r) { return -a * r / std::pow(bracket(r), 3); };
    } else if (name == "schwarzschild_mass") {
        // 2M/r, the leading long-range coefficient of Schwarzschild
        const double m = mass;
        rf.f = [m](double r) { return 2 * m / r; };
        rf.df = [m](double r) { return -2 * m / (r * r); };
    } else {
        throw Error(ErrorKind::config, "unknown radial coefficient '" + name + "'");
    }
    return rf;
}

// Stationary short-range part of the metric, returned as a symmetric 4x4 perturbation.
struct ShortRangePart {
    std::string name = "none";
    double amplitude = 0;
    std::function<Mat4(const Vec3&)> h = [](const Vec3&) -> Mat4 { return Mat4::Zero(); };
};

inline ShortRangePart make_short_range(const std::string& name, double amplitude) {
    ShortRangePart s;
    s.name = name;
    s.amplitude = amplitude;
    const double a = amplitude;
    if (name == "none") {
        s.amplitude = 0;
    } else if (name == "frame_dragging") {
        // g_ti = a (x dy - y dx)_i / r^3, axisymmetric about z
        s.h = [a](const Vec3& x) -> Mat4 {
            Mat4 m = Mat4::Zero();
            const double r = x.norm();
            const double c = a / (r * r * r);
            m(0, 1) = m(1, 0) = -c * x[1];
            m(0, 2) = m(2, 0) = c * x[0];
            return m;
        };
    } else if (name == "quadrupole") {
        // a P2(cos theta) / <r>^2 on g_tt and g_zz; breaks spherical symmetry
        s.h = [a](const Vec3& x) -> Mat4 {
            Mat4 m = Mat4::Zero();
            const double r2 = x.squaredNorm();
            const double c2 = r2 > 0 ? x[2] * x[2] / r2 : 1.0;
            const double q = a * 0.5 * (3 * c2 - 1) / (4 + r2);
            m(0, 0) = q;
            m(3, 3) = q;
            return m;
        };
    } else {
        throw Error(ErrorKind::config, "unknown short-range part '" + name + "'");
    }
    return s;
}

// ---------------------------------------------------------------------------
// Metric catalog

enum class MetricFamily { minkowski, schwarzschild, general_normalized };

inline const char* to_string(MetricFamily f) {
    switch (f) {
    case MetricFamily::minkowski: return "minkowski";
    case MetricFamily::schwarzschild: return "schwarzschild";
    case MetricFamily::general_normalized: return "general_normalized";
    }
    return "?";
}

struct MetricSpec {
    MetricFamily family = MetricFamily::minkowski;
    double mass = 0;
    RadialFunction g_omega;
    ShortRangePart g_sr;
    double domain_r_min = 0;

    static MetricSpec minkowski() { return MetricSpec{}; }

    static MetricSpec schwarzschild(double M) {
        if (!(M > 0)) throw Error(ErrorKind::config, "Schwarzschild mass must be positive");
        MetricSpec s;
        s.family = MetricFamily::schwarzschild;
        s.mass = M;
        s.domain_r_min = 2 * M;
        return s;
    }

    static MetricSpec general(RadialFunction g_omega, ShortRangePart g_sr, double r_min = 1.0) {
        MetricSpec s;
        s.family = MetricFamily::general_normalized;
        s.g_omega = std::move(g_omega);
        s.g_sr = std::move(g_sr);
        s.domain_r_min = r_min;
        return s;
    }

    bool spherically_symmetric() const {
        return family != MetricFamily::general_normalized || g_sr.name == "none";
    }

    // 1 - 2M/r for Schwarzschild, 1 otherwise
    double lapse_sq(double r) const { return family == MetricFamily::schwarzschild ? 1 - 2 * mass / r : 1.0; }
};

inline void check_domain(const MetricSpec& spec, double r) {
    if (!std::isfinite(r)) throw Error(ErrorKind::domain, "non-finite radius");
    if (spec.domain_r_min > 0 && r <= spec.domain_r_min)
        throw Error(ErrorKind::domain, "r = " + std::to_string(r) + " inside excision radius " +
                                           std::to_string(spec.domain_r_min));
    if (spec.family == MetricFamily::schwarzschild && r <= 2 * spec.mass)
        throw Error(ErrorKind::domain, "r <= 2M");
}

struct MetricSample {
    Mat4 g;
    Mat4 ginv;
    double sqrt_neg_det = 1;
};

inline Mat4 metric_lower(const MetricSpec& spec, const SpacetimePoint& p) {
    const double r = p.r();
    check_domain(spec, r);
    Mat4 g = Mat4::Zero();
    g(0, 0) = -1;
    g(1, 1) = g(2, 2) = g(3, 3) = 1;
    switch (spec.family) {
    case MetricFamily::minkowski: break;
    case MetricFamily::schwarzschild: {
        const double f = 1 - 2 * spec.mass / r;
        const Vec3 n = p.x / r;
        g(0, 0) = -f;
        const double c = 1 / f - 1;
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) g(i + 1, j + 1) += c * n[i] * n[j];
        break;
    }
    case MetricFamily::general_normalized: {
        if (r > 0) {
            const double w = spec.g_omega.f(r);
            const Vec3 n = p.x / r;
            for (int i = 0; i < 3; ++i)
                for (int j = 0; j < 3; ++j) g(i + 1, j + 1) += w * ((i == j ? 1.0 : 0.0) - n[i] * n[j]);
        }
        g += spec.g_sr.h(p.x);
        break;
    }
    }
    return g;
}

inline MetricSample metric_components(const MetricSpec& spec, const SpacetimePoint& p) {
    MetricSample s;
    s.g = metric_lower(spec, p);
    const double det = s.g.determinant();
    if (!std::isfinite(det) || det >= 0 || std::abs(det) < 1e-300)
        throw Error(ErrorKind::degenerate, "metric determinant " + std::to_string(det) + " is not negative");
    s.ginv = s.g.inverse();
    s.sqrt_neg_det = std::sqrt(-det);
    return s;
}

// ---------------------------------------------------------------------------
// Forms

inline int levi_civita(int a, int b, int c, int d) {
    if (a == b || a == c || a == d || b == c || b == d || c == d) return 0;
    int p[4] = {a, b, c, d};
    int sign = 1;
    for (int i = 0; i < 4; ++i)
        for (int j = i + 1; j < 4; ++j)
            if (p[i] > p[j]) sign = -sign;
    return sign;
}

class TwoForm {
public:
    static constexpr int pairs[6][2] = {{0, 1}, {0, 2}, {0, 3}, {1, 2}, {1, 3}, {2, 3}};

    TwoForm() { c_.fill(0); }

    static int slot(int a, int b) {
        // a < b assumed
        static constexpr int tab[4][4] = {{-1, 0, 1, 2}, {-1, -1, 3, 4}, {-1, -1, -1, 5}, {-1, -1, -1, -1}};
        return tab[a][b];
    }

    double operator()(int a, int b) const {
        if (a == b) return 0;
        return a < b ? c_[slot(a, b)] : -c_[slot(b, a)];
    }
    void set(int a, int b, double v) {
        if (a == b) throw Error(ErrorKind::input, "diagonal component of a 2-form");
        if (a < b)
            c_[slot(a, b)] = v;
        else
            c_[slot(b, a)] = -v;
    }
    double& operator[](int i) { return c_[i]; }
    double operator[](int i) const { return c_[i]; }

    Mat4 matrix() const {
        Mat4 m = Mat4::Zero();
        for (int k = 0; k < 6; ++k) {
            m(pairs[k][0], pairs[k][1]) = c_[k];
            m(pairs[k][1], pairs[k][0]) = -c_[k];
        }
        return m;
    }
    static TwoForm from_matrix(const Mat4& m) {
        TwoForm f;
        for (int k = 0; k < 6; ++k) f.c_[k] = 0.5 * (m(pairs[k][0], pairs[k][1]) - m(pairs[k][1], pairs[k][0]));
        return f;
    }

    double max_abs() const {
        double m = 0;
        for (double v : c_) m = std::max(m, std::abs(v));
        return m;
    }
    double norm() const {
        double s = 0;
        for (double v : c_) s += v * v;
        return std::sqrt(s);
    }

    TwoForm& operator+=(const TwoForm& o) {
        for (int k = 0; k < 6; ++k) c_[k] += o.c_[k];
        return *this;
    }
    TwoForm& operator-=(const TwoForm& o) {
        for (int k = 0; k < 6; ++k) c_[k] -= o.c_[k];
        return *this;
    }
    TwoForm& operator*=(double s) {
        for (double& v : c_) v *= s;
        return *this;
    }
    friend TwoForm operator+(TwoForm a, const TwoForm& b) { return a += b; }
    friend TwoForm operator-(TwoForm a, const TwoForm& b) { return a -= b; }
    friend TwoForm operator*(double s, TwoForm a) { return a *= s; }
    friend TwoForm operator-(TwoForm a) { return a *= -1.0; }

private:
    std::array<double, 6> c_;
};

class ThreeForm {
public:
    static constexpr int triples[4][3] = {{0, 1, 2}, {0, 1, 3}, {0, 2, 3}, {1, 2, 3}};

    ThreeForm() { c_.fill(0); }

    double operator()(int a, int b, int c) const {
        if (a == b || b == c || a == c) return 0;
        int s[3] = {a, b, c};
        int sign = 1;
        for (int i = 0; i < 3; ++i)
            for (int j = i + 1; j < 3; ++j)
                if (s[i] > s[j]) {
                    std::swap(s[i], s[j]);
                    sign = -sign;
                }
        return sign * c_[slot(s[0], s[1], s[2])];
    }
    // the missing index identifies the slot: 3 -> 012, 2 -> 013, 1 -> 023, 0 -> 123
    static int slot(int a, int b, int c) { return 3 - (6 - a - b - c); }

    void set(int a, int b, int c, double v) {
        int s[3] = {a, b, c};
        int sign = 1;
        for (int i = 0; i < 3; ++i)
            for (int j = i + 1; j < 3; ++j)
                if (s[i] > s[j]) {
                    std::swap(s[i], s[j]);
                    sign = -sign;
                }
        if (s[0] == s[1] || s[1] == s[2]) throw Error(ErrorKind::input, "repeated index in 3-form");
        c_[slot(s[0], s[1], s[2])] = sign * v;
    }
    double& operator[](int i) { return c_[i]; }
    double operator[](int i) const { return c_[i]; }

    double max_abs() const {
        double m = 0;
        for (double v : c_) m = std::max(m, std::abs(v));
        return m;
    }

    ThreeForm& operator+=(const ThreeForm& o) {
        for (int k = 0; k < 4; ++k) c_[k] += o.c_[k];
        return *this;
    }
    ThreeForm& operator-=(const ThreeForm& o) {
        for (int k = 0; k < 4; ++k) c_[k] -= o.c_[k];
        return *this;
    }
    ThreeForm& operator*=(double s) {
        for (double& v : c_) v *= s;
        return *this;
    }
    friend ThreeForm operator+(ThreeForm a, const ThreeForm& b) { return a += b; }
    friend ThreeForm operator-(ThreeForm a, const ThreeForm& b) { return a -= b; }
    friend ThreeForm operator*(double s, ThreeForm a) { return a *= s; }

private:
    std::array<double, 4> c_;
};

// (*F)_ab = 1/2 eps_abcd sqrt(-g) F^cd with eps_txyz = +1
inline TwoForm hodge_star(const MetricSample& m, const TwoForm& F) {
    const Mat4 up = m.ginv * F.matrix() * m.ginv;
    TwoForm out;
    for (int k = 0; k < 6; ++k) {
        const int a = TwoForm::pairs[k][0], b = TwoForm::pairs[k][1];
        double s = 0;
        for (int c = 0; c < 4; ++c)
            for (int d = c + 1; d < 4; ++d) s += levi_civita(a, b, c, d) * up(c, d);
        out[k] = m.sqrt_neg_det * s;
    }
    return out;
}

inline TwoForm hodge_star_2form(const MetricSpec& spec, const SpacetimePoint& p, const TwoForm& F) {
    return hodge_star(metric_components(spec, p), F);
}

// (*G)_d = 1/6 sqrt(-g) eps_abcd G^abc, a 1-form
inline Vec4 hodge_star(const MetricSample& m, const ThreeForm& G) {
    double up[4][4][4];
    double low[4][4][4];
    for (int a = 0; a < 4; ++a)
        for (int b = 0; b < 4; ++b)
            for (int c = 0; c < 4; ++c) low[a][b][c] = G(a, b, c);
    // raise one index at a time
    double t1[4][4][4], t2[4][4][4];
    for (int a = 0; a < 4; ++a)
        for (int b = 0; b < 4; ++b)
            for (int c = 0; c < 4; ++c) {
                double s = 0;
                for (int e = 0; e < 4; ++e) s += m.ginv(a, e) * low[e][b][c];
                t1[a][b][c] = s;
            }
    for (int a = 0; a < 4; ++a)
        for (int b = 0; b < 4; ++b)
            for (int c = 0; c < 4; ++c) {
                double s = 0;
                for (int e = 0; e < 4; ++e) s += m.ginv(b, e) * t1[a][e][c];
                t2[a][b][c] = s;
            }
    for (int a = 0; a < 4; ++a)
        for (int b = 0; b < 4; ++b)
            for (int c = 0; c < 4; ++c) {
                double s = 0;
                for (int e = 0; e < 4; ++e) s += m.ginv(c, e) * t2[a][b][e];
                up[a][b][c] = s;
            }
    Vec4 out = Vec4::Zero();
    for (int d = 0; d < 4; ++d) {
        double s = 0;
        for (int k = 0; k < 4; ++k) {
            const int a = ThreeForm::triples[k][0], b = ThreeForm::triples[k][1], c = ThreeForm::triples[k][2];
            s += levi_civita(a, b, c, d) * up[a][b][c];
        }
        out[d] = m.sqrt_neg_det * s;
    }
    return out;
}

// ---------------------------------------------------------------------------
// Null frame

struct NullFrame {
    Vec4 u, v, A, B;  // coordinate components (t, x, y, z)
};

struct FrameComponents {
    double uv = 0, uA = 0, uB = 0, vA = 0, vB = 0, AB = 0;
};

// d r / d r*
inline double dr_drstar(const MetricSpec& spec, double r) { return spec.lapse_sq(r); }

// d_u = (d_t - d_r*)/2, d_v = (d_t + d_r*)/2, e_A = theta-hat, e_B = phi-hat.
inline NullFrame null_frame(const MetricSpec& spec, const SpacetimePoint& p) {
    const double r = p.r();
    if (!(r > 0)) throw Error(ErrorKind::domain, "null frame undefined at r = 0");
    check_domain(spec, r);
    const double th = p.theta(), ph = p.phi();
    const Vec3 n = p.x / r;
    const Vec3 eth(std::cos(th) * std::cos(ph), std::cos(th) * std::sin(ph), -std::sin(th));
    const Vec3 eph(-std::sin(ph), std::cos(ph), 0);
    const double f = dr_drstar(spec, r);
    NullFrame fr;
    fr.u << 0.5, -0.5 * f * n;
    fr.v << 0.5, 0.5 * f * n;
    fr.A << 0, eth;
    fr.B << 0, eph;
    return fr;
}

inline FrameComponents frame_components(const TwoForm& F, const NullFrame& fr) {
    const Mat4 m = F.matrix();
    FrameComponents c;
    c.uv = fr.u.dot(m * fr.v);
    c.uA = fr.u.dot(m * fr.A);
    c.uB = fr.u.dot(m * fr.B);
    c.vA = fr.v.dot(m * fr.A);
    c.vB = fr.v.dot(m * fr.B);
    c.AB = fr.A.dot(m * fr.B);
    return c;
}

inline TwoForm from_frame_components(const FrameComponents& c, const NullFrame& fr) {
    Mat4 E;
    E.col(0) = fr.u;
    E.col(1) = fr.v;
    E.col(2) = fr.A;
    E.col(3) = fr.B;
    Mat4 P = Mat4::Zero();
    P(0, 1) = c.uv;
    P(0, 2) = c.uA;
    P(0, 3) = c.uB;
    P(1, 2) = c.vA;
    P(1, 3) = c.vB;
    P(2, 3) = c.AB;
    P -= Mat4(P.transpose());
    const Mat4 Einv = E.inverse();
    return TwoForm::from_matrix(Einv.transpose() * P * Einv);
}

inline NullFrame rotate_angular(const NullFrame& fr, double chi) {
    NullFrame out = fr;
    out.A = std::cos(chi) * fr.A + std::sin(chi) * fr.B;
    out.B = -std::sin(chi) * fr.A + std::cos(chi) * fr.B;
    return out;
}

// ---------------------------------------------------------------------------
// Tortoise coordinate

inline double tortoise(const MetricSpec& spec, double r) {
    if (spec.family != MetricFamily::schwarzschild) {
        if (r < 0) throw Error(ErrorKind::domain, "negative radius");
        return r;
    }
    const double M = spec.mass;
    if (!(r > 2 * M)) throw Error(ErrorKind::domain, "tortoise undefined for r <= 2M");
    return r + 2 * M * std::log(r / (2 * M) - 1);
}

namespace detail {

// y with r = 2M(1 + e^y), from e^y + y = r*/2M - 1
inline double tortoise_y(double M, double rs) {
    const double c = rs / (2 * M) - 1;
    double y = c > 1 ? std::log(c) : (c < -1 ? c : 0.5 * c);
    for (int it = 0; it < 200; ++it) {
        const double ey = std::exp(y);
        const double dy = (ey + y - c) / (ey + 1);
        y -= dy;
        if (std::abs(dy) <= 1e-15 * (1 + std::abs(y))) return y;
    }
    throw Error(ErrorKind::numeric, "inverse tortoise did not converge");
}

}  // namespace detail

inline double inverse_tortoise(const MetricSpec& spec, double rs) {
    if (spec.family != MetricFamily::schwarzschild) {
        if (rs < 0) throw Error(ErrorKind::domain, "negative radius");
        return rs;
    }
    return 2 * spec.mass * (1 + std::exp(detail::tortoise_y(spec.mass, rs)));
}

// 1 - 2M/r evaluated from r* without cancellation; underflows gracefully to 0 near the horizon.
inline double lapse_sq_at_rstar(const MetricSpec& spec, double rs) {
    if (spec.family != MetricFamily::schwarzschild) return 1.0;
    const double ey = std::exp(detail::tortoise_y(spec.mass, rs));
    return ey / (1 + ey);
}

// ---------------------------------------------------------------------------
// Finite-difference curvature

struct FdStencil {
    std::vector<int> offsets;
    std::vector<double> weights;  // multiply by 1/h
    int radius() const { return offsets.empty() ? 0 : offsets.back(); }
};

inline FdStencil first_derivative_stencil(int order) {
    if (order == 2) return {{-1, 1}, {-0.5, 0.5}};
    if (order == 4) return {{-2, -1, 1, 2}, {1.0 / 12, -8.0 / 12, 8.0 / 12, -1.0 / 12}};
    throw Error(ErrorKind::input, "derivative order must be 2 or 4");
}

using Christoffel = std::array<double, 64>;  // Gamma^a_bc at 16a + 4b + c
using Riemann = std::array<double, 256>;     // R^a_bcd at 64a + 16b + 4c + d

inline int gidx(int a, int b, int c) { return 16 * a + 4 * b + c; }
inline int ridx(int a, int b, int c, int d) { return 64 * a + 16 * b + 4 * c + d; }

// Christoffel symbols from finite-differenced metric samples, cached per point.
class ChristoffelCache {
public:
    ChristoffelCache(const MetricSpec& spec, int order = 4) : spec_(spec), st_(first_derivative_stencil(order)) {}

    double step(const SpacetimePoint& p) const { return 1e-3 * std::max(1.0, p.r()); }

    const Christoffel& at(const SpacetimePoint& p) {
        const std::array<double, 4> key{p.t, p.x[0], p.x[1], p.x[2]};
        auto it = cache_.find(key);
        if (it != cache_.end()) return it->second;
        return cache_.emplace(key, compute(p)).first->second;
    }

    Christoffel compute(const SpacetimePoint& p) const {
        const MetricSample m = metric_components(spec_, p);
        const double h = step(p);
        std::array<Mat4, 4> dg;
        for (int c = 0; c < 4; ++c) {
            dg[c] = Mat4::Zero();
            if (c == 0) continue;  // stationary backgrounds
            for (std::size_t k = 0; k < st_.offsets.size(); ++k)
                dg[c] += st_.weights[k] * metric_lower(spec_, p.shifted(c, st_.offsets[k] * h));
            dg[c] /= h;
        }
        Christoffel G{};
        for (int a = 0; a < 4; ++a)
            for (int b = 0; b < 4; ++b)
                for (int c = b; c < 4; ++c) {
                    double s = 0;
                    for (int d = 0; d < 4; ++d) s += m.ginv(a, d) * (dg[b](d, c) + dg[c](d, b) - dg[d](b, c));
                    G[gidx(a, b, c)] = G[gidx(a, c, b)] = 0.5 * s;
                }
        return G;
    }

    std::size_t size() const { return cache_.size(); }
    const MetricSpec& spec() const { return spec_; }

private:
    MetricSpec spec_;
    FdStencil st_;
    std::map<std::array<double, 4>, Christoffel> cache_;
};

struct CurvatureSample {
    Riemann riemann{};  // R^a_bcd
    Mat4 ricci = Mat4::Zero();
    double ricci_scalar = 0;
    double kretschmann = 0;
};

inline CurvatureSample riemann_fd(const MetricSpec& spec, const SpacetimePoint& p, double h, int order = 2) {
    const FdStencil st = first_derivative_stencil(order);
    const double reach = 2.0 * st.radius() * h * std::sqrt(3.0);
    if (spec.domain_r_min > 0 || spec.family == MetricFamily::schwarzschild) {
        const double rmin = std::max(spec.domain_r_min, spec.family == MetricFamily::schwarzschild ? 2 * spec.mass : 0.0);
        if (p.r() - reach <= rmin) throw Error(ErrorKind::domain, "curvature stencil leaves the domain");
    }
    auto christoffel = [&](const SpacetimePoint& q) {
        const MetricSample m = metric_components(spec, q);
        std::array<Mat4, 4> dg;
        for (int c = 0; c < 4; ++c) {
            dg[c] = Mat4::Zero();
            if (c == 0) continue;
            for (std::size_t k = 0; k < st.offsets.size(); ++k)
                dg[c] += st.weights[k] * metric_lower(spec, q.shifted(c, st.offsets[k] * h));
            dg[c] /= h;
        }
        Christoffel G{};
        for (int a = 0; a < 4; ++a)
            for (int b = 0; b < 4; ++b)
                for (int c = 0; c < 4; ++c) {
                    double s = 0;
                    for (int d = 0; d < 4; ++d) s += m.ginv(a, d) * (dg[b](d, c) + dg[c](d, b) - dg[d](b, c));
                    G[gidx(a, b, c)] = 0.5 * s;
                }
        return G;
    };
    const Christoffel G0 = christoffel(p);
    std::array<Christoffel, 4> dG{};
    for (int c = 1; c < 4; ++c) {
        Christoffel acc{};
        for (std::size_t k = 0; k < st.offsets.size(); ++k) {
            const Christoffel Gk = christoffel(p.shifted(c, st.offsets[k] * h));
            for (int i = 0; i < 64; ++i) acc[i] += st.weights[k] * Gk[i];
        }
        for (int i = 0; i < 64; ++i) dG[c][i] = acc[i] / h;
    }
    CurvatureSample out;
    for (int a = 0; a < 4; ++a)
        for (int b = 0; b < 4; ++b)
            for (int c = 0; c < 4; ++c)
                for (int d = 0; d < 4; ++d) {
                    double s = dG[c][gidx(a, d, b)] - dG[d][gidx(a, c, b)];
                    for (int e = 0; e < 4; ++e)
                        s += G0[gidx(a, c, e)] * G0[gidx(e, d, b)] - G0[gidx(a, d, e)] * G0[gidx(e, c, b)];
                    out.riemann[ridx(a, b, c, d)] = s;
                }
    for (int b = 0; b < 4; ++b)
        for (int d = 0; d < 4; ++d) {
            double s = 0;
            for (int a = 0; a < 4; ++a) s += out.riemann[ridx(a, b, a, d)];
            out.ricci(b, d) = s;
        }
    const MetricSample m = metric_components(spec, p);
    out.ricci_scalar = (m.ginv.cwiseProduct(out.ricci)).sum();
    // R_a^bcd: lower a, raise b, c, d
    Riemann low{}, tmp{};
    for (int a = 0; a < 4; ++a)
        for (int b = 0; b < 4; ++b)
            for (int c = 0; c < 4; ++c)
                for (int d = 0; d < 4; ++d) {
                    double s = 0;
                    for (int e = 0; e < 4; ++e) s += m.g(a, e) * out.riemann[ridx(e, b, c, d)];
                    low[ridx(a, b, c, d)] = s;
                }
    Riemann mixed = low;
    for (int slot = 1; slot < 4; ++slot) {
        for (int a = 0; a < 4; ++a)
            for (int b = 0; b < 4; ++b)
                for (int c = 0; c < 4; ++c)
                    for (int d = 0; d < 4; ++d) {
                        int idx[4] = {a, b, c, d};
                        double s = 0;
                        for (int e = 0; e < 4; ++e) {
                            int j[4] = {a, b, c, d};
                            j[slot] = e;
                            s += m.ginv(idx[slot], e) * mixed[ridx(j[0], j[1], j[2], j[3])];
                        }
                        tmp[ridx(a, b, c, d)] = s;
                    }
        mixed = tmp;
    }
    double k = 0;
    for (int i = 0; i < 256; ++i) k += out.riemann[i] * mixed[i];
    out.kretschmann = k;
    return out;
}

// ---------------------------------------------------------------------------
// Symbol classes S^Z(r^k)

struct SymbolClassOptions {
    double r0 = 1.0;
    double r1 = 1e4;
    int samples = 400;
    std::vector<double> bounds;  // c_j; default 100 for every order
};

struct SymbolClassReport {
    int k = 0;
    std::vector<double> sup_ratio;
    std::vector<double> bound;
    bool pass = true;
    int first_failing_order = -1;
};

// j-th derivative by the central binomial difference, step 1e-4 max(1, r) scaled up for high j
inline double radial_derivative(const RadialFunction& f, double r, int j) {
    if (j == 0) return f.f(r);
    if (j == 1 && f.df) return f.df(r);
    const double h = (j <= 1 ? 1e-4 : std::pow(1e-16, 1.0 / (j + 2))) * std::max(1.0, r);
    double s = 0, binom = 1;
    for (int i = 0; i <= j; ++i) {
        const double x = r + (0.5 * j - i) * h;
        s += ((i % 2) ? -1.0 : 1.0) * binom * f.f(x);
        binom = binom * (j - i) / (i + 1);
    }
    return s / std::pow(h, j);
}

inline SymbolClassReport symbol_class_check(const RadialFunction& f, int k, int j_max,
                                            const SymbolClassOptions& opt = {}) {
    SymbolClassReport rep;
    rep.k = k;
    const auto rs = logspace(opt.r0, opt.r1, std::size_t(opt.samples));
    for (int j = 0; j <= j_max; ++j) {
        double sup = 0;
        for (double r : rs) {
            const double d = radial_derivative(f, r, j);
            if (!std::isfinite(d)) throw Error(ErrorKind::input, "non-finite sample of coefficient function");
            sup = std::max(sup, std::pow(r, j) * std::abs(d) / std::pow(bracket(r), k));
        }
        const double c = j < int(opt.bounds.size()) ? opt.bounds[j] : 100.0;
        rep.sup_ratio.push_back(sup);
        rep.bound.push_back(c);
        if (!(sup <= c) && rep.pass) {
            rep.pass = false;
            rep.first_failing_order = j;
        }
    }
    return rep;
}

// Coefficients of Schwarzschild relative to Minkowski with their decay classes.
struct NamedCoefficient {
    RadialFunction f;
    int k;
};

inline std::vector<NamedCoefficient> schwarzschild_coefficients(double M) {
    std::vector<NamedCoefficient> out;
    RadialFunction gtt;
    gtt.name = "g_tt+1";
    gtt.f = [M](double r) { return 2 * M / r; };
    out.push_back({gtt, -1});
    RadialFunction grr;
    grr.name = "g_rr-1";
    grr.f = [M](double r) { return 2 * M / (r - 2 * M); };
    out.push_back({grr, -1});
    out.push_back({make_radial_function("schwarzschild_mass", 1.0, M), -1});
    return out;
}

}  // namespace maxlab
