// SPDX-License-Identifier: Apache-2.0
// Closed-form and brute-force reference solutions. Nothing here calls into the
// propagation or measurement code; the engine's results are judged against these.
#pragma once

#include <cmath>
#include <complex>
#include <functional>
#include <vector>

namespace rgame::oracle {

using cplx = std::complex<double>;
inline constexpr double kPi = 3.14159265358979323846;

// Free spreading Gaussian with psi(x, 0) = (2 pi s0^2)^(-1/4) exp(-(x-x0)^2/(4 s0^2) + i k0 x).
inline cplx free_gaussian(double x, double t, double s0, double x0, double k0, double hbar = 1.0, double m = 1.0) {
    const cplx st = s0 * cplx(1.0, hbar * t / (2.0 * m * s0 * s0));
    const double v = hbar * k0 / m;
    const double u = x - x0 - v * t;
    return std::pow(2.0 * kPi, -0.25) / std::sqrt(st) *
           std::exp(-u * u / (4.0 * s0 * st) + cplx(0.0, k0 * x - hbar * k0 * k0 * t / (2.0 * m)));
}

// sigma(t) = s0 sqrt(1 + (hbar t / (2 m s0^2))^2).
inline double gaussian_width(double t, double s0, double hbar = 1.0, double m = 1.0) {
    const double r = hbar * t / (2.0 * m * s0 * s0);
    return s0 * std::sqrt(1.0 + r * r);
}

// Composite Simpson rule with n (even) intervals.
template <class F>
auto simpson(F&& f, double a, double b, int n) -> decltype(f(a)) {
    if (n % 2) ++n;
    const double h = (b - a) / n;
    auto sum = f(a) + f(b);
    for (int i = 1; i < n; ++i) sum += (i % 2 ? 4.0 : 2.0) * f(a + i * h);
    return sum * (h / 3.0);
}

// Free kernel K_t(u) = (m / (2 pi i hbar t))^(1/2) exp(i m u^2 / (2 hbar t)).
inline cplx free_kernel(double u, double t, double hbar = 1.0, double m = 1.0) {
    return std::sqrt(cplx(0.0, -m / (2.0 * kPi * hbar * t))) * std::exp(cplx(0.0, m * u * u / (2.0 * hbar * t)));
}

// (K_t * psi)(y) by fine quadrature over [a, b].
inline cplx apply_kernel(const std::function<cplx(double)>& psi, double y, double t, double a, double b, int n,
                         double hbar = 1.0, double m = 1.0) {
    return simpson([&](double x) { return free_kernel(y - x, t, hbar, m) * psi(x); }, a, b, n);
}

struct SlitGeometry {
    double c = 2.0;  // inner edge of the upper slit
    double d = 4.0;  // outer edge
};

// y-part of a free packet after passing a two-slit mask at time t_a and
// propagating for tau more. `open` selects {lower, upper} slits.
inline cplx two_slit_amplitude(double y, double t_a, double tau, double sy, double y0, const SlitGeometry& g,
                               bool lower_open = true, bool upper_open = true, double hbar = 1.0, double m = 1.0) {
    auto src = [&](double yy) { return free_gaussian(yy, t_a, sy, y0, 0.0, hbar, m); };
    const int n = 4000;
    cplx total{};
    if (upper_open) total += apply_kernel(src, y, tau, g.c, g.d, n, hbar, m);
    if (lower_open) total += apply_kernel(src, y, tau, -g.d, -g.c, n, hbar, m);
    return total;
}

// Probability mass of |f|^2 on each of `edges.size() - 1` consecutive intervals.
inline std::vector<double> cell_masses(const std::function<double(double)>& density, const std::vector<double>& edges,
                                       int per_cell = 64) {
    std::vector<double> out;
    for (std::size_t i = 0; i + 1 < edges.size(); ++i) out.push_back(simpson(density, edges[i], edges[i + 1], per_cell));
    return out;
}

// Total-variation distance between two nonnegative vectors after normalization.
inline double tv_distance(std::vector<double> p, std::vector<double> q) {
    double sp = 0.0, sq = 0.0;
    for (double v : p) sp += v;
    for (double v : q) sq += v;
    double tv = 0.0;
    for (std::size_t i = 0; i < p.size(); ++i) tv += std::abs(p[i] / sp - q[i] / sq);
    return 0.5 * tv;
}

}  // namespace rgame::oracle
