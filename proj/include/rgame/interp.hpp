// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <array>
#include <cmath>
#include <fstream>
#include <functional>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "rgame/common.hpp"

namespace rgame::interp {

// Unnormalized cardinal sine sin(x)/x, 1 at the origin.
inline double sinc(double x) {
    if (x == 0.0) return 1.0;
    return std::sin(x) / x;
}

// Samples f(n / 2W) for n in [first, first + values.size()).
struct SampleSet1D {
    double W = 1.0;
    int first = 0;
    std::vector<Complex> values;

    double spacing() const { return 0.5 / W; }
    int last() const { return first + static_cast<int>(values.size()) - 1; }

    template <class Fn>
    static SampleSet1D sample(Fn&& f, double W, int N) {
        SampleSet1D s{W, -N, {}};
        s.values.reserve(static_cast<std::size_t>(2 * N + 1));
        for (int n = -N; n <= N; ++n) s.values.push_back(f(n / (2.0 * W)));
        return s;
    }
};

// sum_n f(n/2W) sin(pi(2Wt - n)) / (pi(2Wt - n)) over the stored window.
inline Complex wsk_reconstruct(const SampleSet1D& s, double t) {
    if (!(s.W > 0.0)) throw domain_error("wsk_reconstruct: W must be positive");
    const double u = 2.0 * s.W * t;
    Complex sum{0.0, 0.0};
    for (std::size_t i = 0; i < s.values.size(); ++i) {
        const int n = s.first + static_cast<int>(i);
        sum += s.values[i] * sinc_pi(u - n);
    }
    return sum;
}

// Samples g(pi k / sigma) on a box of index tuples; row-major, axis 0 outermost.
struct SampleGrid {
    std::vector<double> sigma;
    std::vector<int> first;
    std::vector<int> count;
    std::vector<Complex> values;

    std::size_t dims() const { return sigma.size(); }

    template <class Fn>
    static SampleGrid sample(Fn&& f, std::vector<double> sigma, std::vector<int> radius) {
        SampleGrid g;
        g.sigma = std::move(sigma);
        const std::size_t d = g.sigma.size();
        if (radius.size() != d) throw domain_error("SampleGrid::sample: dimension mismatch");
        std::size_t total = 1;
        for (std::size_t k = 0; k < d; ++k) {
            g.first.push_back(-radius[k]);
            g.count.push_back(2 * radius[k] + 1);
            total *= static_cast<std::size_t>(g.count[k]);
        }
        g.values.resize(total);
        std::vector<double> z(d);
        for (std::size_t flat = 0; flat < total; ++flat) {
            std::size_t rem = flat;
            for (std::size_t k = d; k-- > 0;) {
                const int idx = g.first[k] + static_cast<int>(rem % static_cast<std::size_t>(g.count[k]));
                rem /= static_cast<std::size_t>(g.count[k]);
                z[k] = pi * idx / g.sigma[k];
            }
            g.values[flat] = f(z);
        }
        return g;
    }
};

// sum_k g_k prod_i sinc(sigma_i z_i - pi k_i); separable contraction, last axis first.
inline Complex parzen_reconstruct(const SampleGrid& g, const std::vector<double>& z) {
    const std::size_t d = g.dims();
    if (z.size() != d || g.first.size() != d || g.count.size() != d) {
        throw domain_error("parzen_reconstruct: dimension mismatch");
    }
    if (d == 0) return g.values.empty() ? Complex{} : g.values[0];
    std::vector<Complex> cur = g.values;
    for (std::size_t k = d; k-- > 0;) {
        const auto n = static_cast<std::size_t>(g.count[k]);
        std::vector<double> w(n);
        for (std::size_t i = 0; i < n; ++i) {
            w[i] = sinc_pi(g.sigma[k] * z[k] / pi - (g.first[k] + static_cast<int>(i)));
        }
        std::vector<Complex> next(cur.size() / n, Complex{});
        for (std::size_t outer = 0; outer < next.size(); ++outer) {
            for (std::size_t i = 0; i < n; ++i) next[outer] += w[i] * cur[outer * n + i];
        }
        cur = std::move(next);
    }
    return cur[0];
}

// (sqrt 2 / pi) E |sin(pi t / dt)| sqrt(T dt / (T^2 - t^2)); an estimate of the
// error from truncating the cardinal series to the duration [-T, T].
inline double truncation_error_bound(double E, double T, double delta_t, double t) {
    if (!(delta_t > 0.0)) throw domain_error("truncation_error_bound: delta_t must be positive");
    if (!(std::abs(t) < T)) throw domain_error("truncation_error_bound: requires |t| < T");
    return std::sqrt(2.0) / pi * E * std::abs(sin_pi(t / delta_t)) * std::sqrt(T * delta_t / (T * T - t * t));
}

// |f(t) - sum_{|n| <= N} f(n/2W) sinc(pi(2Wt - n))|.
template <class Fn>
double empirical_truncation_error(Fn&& f, double W, int N, double t) {
    if (N < 1) throw domain_error("empirical_truncation_error: N must be at least 1");
    const auto s = SampleSet1D::sample(f, W, N);
    return std::abs(Complex(f(t)) - wsk_reconstruct(s, t));
}

// t_P l_P^3 / (pi^4 T L^3): the sampling-error magnitude for a Planck-spaced lattice.
inline double planck_sampling_error(double t_planck, double l_planck, double T, double L) {
    return t_planck * l_planck * l_planck * l_planck / (std::pow(pi, 4) * T * L * L * L);
}

// CSV: header "n,re,im" (1-D) or "k1,k2,re,im" (2-D).
inline void write_csv(std::ostream& os, const SampleSet1D& s) {
    os << "n,re,im\n";
    for (std::size_t i = 0; i < s.values.size(); ++i) {
        os << s.first + static_cast<int>(i) << ',' << format_double(s.values[i].real()) << ','
           << format_double(s.values[i].imag()) << '\n';
    }
}

inline void write_csv(std::ostream& os, const SampleGrid& g) {
    if (g.dims() != 2) throw domain_error("write_csv: grid CSV supports two axes");
    os << "k1,k2,re,im\n";
    for (int i = 0; i < g.count[0]; ++i) {
        for (int j = 0; j < g.count[1]; ++j) {
            const Complex v = g.values[static_cast<std::size_t>(i) * g.count[1] + j];
            os << g.first[0] + i << ',' << g.first[1] + j << ',' << format_double(v.real()) << ','
               << format_double(v.imag()) << '\n';
        }
    }
}

namespace detail {
inline std::vector<std::string> split_csv(const std::string& line) {
    std::vector<std::string> out;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) out.push_back(cell);
    return out;
}
}  // namespace detail

// Reads consecutive indices n; gaps are filled with zeros.
inline SampleSet1D read_csv_1d(std::istream& is, double W) {
    std::string line;
    if (!std::getline(is, line) || line != "n,re,im") throw domain_error("read_csv_1d: expected header n,re,im");
    std::vector<std::pair<int, Complex>> rows;
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        auto cells = detail::split_csv(line);
        if (cells.size() != 3) throw domain_error("read_csv_1d: malformed row '" + line + "'");
        rows.push_back({std::stoi(cells[0]), Complex(std::stod(cells[1]), std::stod(cells[2]))});
    }
    SampleSet1D s{W, 0, {}};
    if (rows.empty()) return s;
    int lo = rows[0].first, hi = rows[0].first;
    for (const auto& r : rows) {
        lo = std::min(lo, r.first);
        hi = std::max(hi, r.first);
    }
    s.first = lo;
    s.values.assign(static_cast<std::size_t>(hi - lo + 1), Complex{});
    for (const auto& [n, v] : rows) s.values[static_cast<std::size_t>(n - lo)] = v;
    return s;
}

inline SampleGrid read_csv_2d(std::istream& is, std::vector<double> sigma) {
    std::string line;
    if (!std::getline(is, line) || line != "k1,k2,re,im") throw domain_error("read_csv_2d: expected header k1,k2,re,im");
    if (sigma.size() != 2) throw domain_error("read_csv_2d: two band limits required");
    std::vector<std::tuple<int, int, Complex>> rows;
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        auto cells = detail::split_csv(line);
        if (cells.size() != 4) throw domain_error("read_csv_2d: malformed row '" + line + "'");
        rows.emplace_back(std::stoi(cells[0]), std::stoi(cells[1]), Complex(std::stod(cells[2]), std::stod(cells[3])));
    }
    SampleGrid g;
    g.sigma = std::move(sigma);
    if (rows.empty()) {
        g.first = {0, 0};
        g.count = {0, 0};
        return g;
    }
    std::array<int, 2> lo{std::get<0>(rows[0]), std::get<1>(rows[0])}, hi = lo;
    for (const auto& [a, b, v] : rows) {
        lo = {std::min(lo[0], a), std::min(lo[1], b)};
        hi = {std::max(hi[0], a), std::max(hi[1], b)};
    }
    g.first = {lo[0], lo[1]};
    g.count = {hi[0] - lo[0] + 1, hi[1] - lo[1] + 1};
    g.values.assign(static_cast<std::size_t>(g.count[0]) * g.count[1], Complex{});
    for (const auto& [a, b, v] : rows) g.values[static_cast<std::size_t>(a - lo[0]) * g.count[1] + (b - lo[1])] = v;
    return g;
}

}  // namespace rgame::interp
