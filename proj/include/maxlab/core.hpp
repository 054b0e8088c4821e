// Shared error types and small numerical helpers.
#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace maxlab {

enum class ErrorKind {
    domain,
    degenerate,
    input,
    numeric,
    unsupported,
    config,
    instability,
    tail_not_reached,
    formulation,
    invalid_mode,
};

inline const char* to_string(ErrorKind k) {
    switch (k) {
    case ErrorKind::domain: return "domain";
    case ErrorKind::degenerate: return "degenerate";
    case ErrorKind::input: return "input";
    case ErrorKind::numeric: return "numeric";
    case ErrorKind::unsupported: return "unsupported";
    case ErrorKind::config: return "config";
    case ErrorKind::instability: return "instability";
    case ErrorKind::tail_not_reached: return "tail_not_reached";
    case ErrorKind::formulation: return "formulation";
    case ErrorKind::invalid_mode: return "invalid_mode";
    }
    return "unknown";
}

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& what)
        : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}
    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

inline constexpr double pi = 3.14159265358979323846;

// Japanese bracket <r> = sqrt(4 + r^2), always >= 2.
inline double bracket(double r) { return std::sqrt(4.0 + r * r); }

inline double sqr(double x) { return x * x; }

struct LineFit {
    double slope = 0;
    double intercept = 0;
    double slope_stderr = 0;
};

// Ordinary least squares y = a + b x.
inline LineFit fit_line(const std::vector<double>& x, const std::vector<double>& y) {
    const std::size_t n = x.size();
    if (n < 2 || y.size() != n) throw Error(ErrorKind::input, "fit_line needs >= 2 matching samples");
    double mx = 0, my = 0;
    for (std::size_t i = 0; i < n; ++i) {
        mx += x[i];
        my += y[i];
    }
    mx /= double(n);
    my /= double(n);
    double sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < n; ++i) {
        sxx += (x[i] - mx) * (x[i] - mx);
        sxy += (x[i] - mx) * (y[i] - my);
    }
    if (sxx <= 0) throw Error(ErrorKind::input, "fit_line: degenerate abscissae");
    LineFit f;
    f.slope = sxy / sxx;
    f.intercept = my - f.slope * mx;
    if (n > 2) {
        double ss = 0;
        for (std::size_t i = 0; i < n; ++i) ss += sqr(y[i] - f.intercept - f.slope * x[i]);
        f.slope_stderr = std::sqrt(ss / double(n - 2) / sxx);
    }
    return f;
}

// Lagrange interpolation on a uniform grid x_j = x0 + j*dx with a K-point stencil.
template <int K>
struct UniformStencil {
    std::size_t first = 0;
    std::array<double, K> w{};
    std::array<double, K> dw{};
};

template <int K>
UniformStencil<K> uniform_stencil(double x0, double dx, std::size_t n, double x) {
    static_assert(K >= 2);
    if (n < std::size_t(K)) throw Error(ErrorKind::input, "grid smaller than interpolation stencil");
    double s = (x - x0) / dx;
    long j = long(std::floor(s)) - (K / 2 - 1);
    j = std::clamp<long>(j, 0, long(n) - K);
    UniformStencil<K> st;
    st.first = std::size_t(j);
    std::array<double, K> xi{};
    for (int k = 0; k < K; ++k) xi[k] = double(j + k);
    for (int k = 0; k < K; ++k) {
        double num = 1, den = 1, dsum = 0;
        for (int m = 0; m < K; ++m) {
            if (m == k) continue;
            num *= (s - xi[m]);
            den *= (xi[k] - xi[m]);
        }
        // derivative of prod_{m!=k} (s - xi_m)
        for (int q = 0; q < K; ++q) {
            if (q == k) continue;
            double p = 1;
            for (int m = 0; m < K; ++m) {
                if (m == k || m == q) continue;
                p *= (s - xi[m]);
            }
            dsum += p;
        }
        st.w[k] = num / den;
        st.dw[k] = dsum / den / dx;
    }
    return st;
}

// One-dimensional Lagrange weights on arbitrary nodes evaluated at x.
inline std::vector<double> lagrange_weights(const std::vector<double>& nodes, double x) {
    std::vector<double> w(nodes.size(), 1.0);
    for (std::size_t k = 0; k < nodes.size(); ++k)
        for (std::size_t m = 0; m < nodes.size(); ++m)
            if (m != k) w[k] *= (x - nodes[m]) / (nodes[k] - nodes[m]);
    return w;
}

inline std::vector<double> logspace(double a, double b, std::size_t n) {
    std::vector<double> out(n);
    if (n == 1) {
        out[0] = a;
        return out;
    }
    const double la = std::log(a), lb = std::log(b);
    for (std::size_t i = 0; i < n; ++i) out[i] = std::exp(la + (lb - la) * double(i) / double(n - 1));
    out.front() = a;
    out.back() = b;
    return out;
}

inline std::vector<double> linspace(double a, double b, std::size_t n) {
    std::vector<double> out(n);
    if (n == 1) {
        out[0] = a;
        return out;
    }
    for (std::size_t i = 0; i < n; ++i) out[i] = a + (b - a) * double(i) / double(n - 1);
    return out;
}

}  // namespace maxlab
