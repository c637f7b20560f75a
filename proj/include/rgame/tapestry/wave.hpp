// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <algorithm>
#include <array>
#include <map>
#include <optional>
#include <vector>

#include "rgame/common.hpp"
#include "rgame/tapestry/informon.hpp"

namespace rgame::tapestry {

// Samples on one regular grid: value[i] sits at start + i * spacing (per axis),
// row-major over `count`.
struct WaveComponent {
    int dims = 1;
    std::array<double, kMaxDims> start{};
    std::array<double, kMaxDims> spacing{1.0, 1.0};
    std::array<int, kMaxDims> count{0, 1};
    std::vector<Complex> values;

    Complex at(int i, int j = 0) const { return values[static_cast<std::size_t>(i) * count[1] + j]; }
};

namespace detail {

// sinc_pi(u - k) for k = 0..n-1, using sin(pi(u-k)) = (-1)^k sin(pi u).
inline void sinc_row(double u, int n, std::vector<double>& out) {
    out.assign(static_cast<std::size_t>(n), 0.0);
    const double nearest = std::round(u);
    // Lattice coordinates recomputed as k*dx/dx land within a few ulps of k.
    if (std::abs(u - nearest) <= 1e-12 * std::max(1.0, std::abs(u))) {
        if (nearest >= 0 && nearest < n) out[static_cast<std::size_t>(nearest)] = 1.0;
        return;
    }
    const double s = sin_pi(u) / pi;
    for (int k = 0; k < n; ++k) {
        const double sign = (k & 1) ? -1.0 : 1.0;
        out[static_cast<std::size_t>(k)] = sign * s / (u - k);
    }
}

}  // namespace detail

// Band-limited wave Phi(z) = sum_n Theta_n prod_k sinc(pi (z_k - x_nk) / h_k),
// summed over one or more sample grids.
class InterpolatedWave {
public:
    InterpolatedWave() = default;
    explicit InterpolatedWave(int dims) : dims_(dims) {}

    int dims() const { return dims_; }
    const std::vector<WaveComponent>& components() const { return components_; }
    void add(WaveComponent c) {
        c.dims = dims_;
        if (dims_ == 1) c.count[1] = 1;
        components_.push_back(std::move(c));
    }

    Complex operator()(double x, double y = 0.0) const {
        Complex sum{0.0, 0.0};
        std::vector<double> sx, sy;
        for (const auto& c : components_) {
            detail::sinc_row((x - c.start[0]) / c.spacing[0], c.count[0], sx);
            if (dims_ == 1) {
                for (int i = 0; i < c.count[0]; ++i) {
                    if (sx[i] != 0.0) sum += sx[i] * c.values[static_cast<std::size_t>(i)];
                }
                continue;
            }
            detail::sinc_row((y - c.start[1]) / c.spacing[1], c.count[1], sy);
            for (int i = 0; i < c.count[0]; ++i) {
                if (sx[i] == 0.0) continue;
                Complex row{0.0, 0.0};
                for (int j = 0; j < c.count[1]; ++j) row += sy[j] * c.at(i, j);
                sum += sx[i] * row;
            }
        }
        return sum;
    }

    // Values on the tensor grid xs x ys (row-major, x outer). 1-D waves ignore ys.
    std::vector<Complex> evaluate_grid(const std::vector<double>& xs, const std::vector<double>& ys = {0.0}) const {
        const std::size_t ny = dims_ == 1 ? 1 : ys.size();
        std::vector<Complex> out(xs.size() * ny, Complex{0.0, 0.0});
        std::vector<double> s;
        for (const auto& c : components_) {
            // Contract along y first: tmp[i][q] = sum_j sinc(y_q, j) v[i][j].
            std::vector<Complex> tmp(static_cast<std::size_t>(c.count[0]) * ny);
            if (dims_ == 1) {
                for (int i = 0; i < c.count[0]; ++i) tmp[i] = c.values[static_cast<std::size_t>(i)];
            } else {
                std::vector<std::vector<double>> sy(ny);
                for (std::size_t q = 0; q < ny; ++q) detail::sinc_row((ys[q] - c.start[1]) / c.spacing[1], c.count[1], sy[q]);
                for (int i = 0; i < c.count[0]; ++i) {
                    for (std::size_t q = 0; q < ny; ++q) {
                        Complex acc{0.0, 0.0};
                        for (int j = 0; j < c.count[1]; ++j) {
                            if (sy[q][j] != 0.0) acc += sy[q][j] * c.at(i, j);
                        }
                        tmp[static_cast<std::size_t>(i) * ny + q] = acc;
                    }
                }
            }
            for (std::size_t p = 0; p < xs.size(); ++p) {
                detail::sinc_row((xs[p] - c.start[0]) / c.spacing[0], c.count[0], s);
                for (int i = 0; i < c.count[0]; ++i) {
                    if (s[i] == 0.0) continue;
                    for (std::size_t q = 0; q < ny; ++q) out[p * ny + q] += s[i] * tmp[static_cast<std::size_t>(i) * ny + q];
                }
            }
        }
        return out;
    }

    // Exact L2 inner product <this, other>; components must share per-axis spacing.
    Complex inner(const InterpolatedWave& other) const {
        if (dims_ != other.dims_) throw domain_error("inner: dimension mismatch");
        Complex sum{0.0, 0.0};
        for (const auto& a : components_) {
            for (const auto& b : other.components_) sum += component_inner(a, b);
        }
        return sum;
    }

    double norm2() const { return inner(*this).real(); }

private:
    Complex component_inner(const WaveComponent& a, const WaveComponent& b) const {
        double cell = 1.0;
        std::array<double, kMaxDims> shift{};
        std::array<bool, kMaxDims> aligned{};
        for (int k = 0; k < dims_; ++k) {
            if (std::abs(a.spacing[k] - b.spacing[k]) > 1e-12 * a.spacing[k]) {
                throw domain_error("inner: components with different spacing");
            }
            cell *= a.spacing[k];
            shift[k] = (b.start[k] - a.start[k]) / a.spacing[k];  // b index j sits at a index j + shift
            aligned[k] = std::abs(shift[k] - std::round(shift[k])) < 1e-9;
        }
        // Int sinc(u - i) sinc(u - j - s) du = sinc(i - j - s) (in index units).
        auto kernel = [&](int k, int i, int j) {
            const double d = i - j - shift[k];
            if (aligned[k]) return std::round(d) == 0.0 ? 1.0 : 0.0;
            return sinc_pi(d);
        };
        Complex sum{0.0, 0.0};
        if (dims_ == 1) {
            for (int i = 0; i < a.count[0]; ++i) {
                const Complex ai = std::conj(a.values[static_cast<std::size_t>(i)]);
                if (ai == Complex{}) continue;
                if (aligned[0]) {
                    const int j = i - static_cast<int>(std::round(shift[0]));
                    if (j >= 0 && j < b.count[0]) sum += ai * b.values[static_cast<std::size_t>(j)];
                    continue;
                }
                for (int j = 0; j < b.count[0]; ++j) sum += ai * kernel(0, i, j) * b.values[static_cast<std::size_t>(j)];
            }
            return sum * cell;
        }
        for (int i0 = 0; i0 < a.count[0]; ++i0) {
            for (int j0 = 0; j0 < b.count[0]; ++j0) {
                const double k0 = kernel(0, i0, j0);
                if (k0 == 0.0) continue;
                for (int i1 = 0; i1 < a.count[1]; ++i1) {
                    const Complex ai = std::conj(a.at(i0, i1));
                    if (ai == Complex{}) continue;
                    for (int j1 = 0; j1 < b.count[1]; ++j1) {
                        const double k1 = kernel(1, i1, j1);
                        if (k1 != 0.0) sum += ai * k0 * k1 * b.at(j0, j1);
                    }
                }
            }
        }
        return sum * cell;
    }

    int dims_ = 1;
    std::vector<WaveComponent> components_;
};

// Dense component on the lattice (sublattice phase `phase` of stride `stride`
// along axis 0) from a sample function over the extent.
template <class Fn>
WaveComponent sample_component(const LatticeConfig& cfg, Fn&& f, int stride = 1, int phase = 0) {
    WaveComponent c;
    c.dims = cfg.dims;
    const int e = cfg.extent;
    int first0 = -e;
    while (((first0 % stride) + stride) % stride != phase) ++first0;
    c.count[0] = (e - first0) / stride + 1;
    c.start[0] = first0 * cfg.dx;
    c.spacing[0] = stride * cfg.dx;
    if (cfg.dims == 2) {
        c.count[1] = cfg.sites_per_axis();
        c.start[1] = -e * cfg.dx;
        c.spacing[1] = cfg.dx;
    } else {
        c.count[1] = 1;
    }
    c.values.resize(static_cast<std::size_t>(c.count[0]) * c.count[1]);
    for (int i = 0; i < c.count[0]; ++i) {
        for (int j = 0; j < c.count[1]; ++j) {
            const double x = c.start[0] + i * c.spacing[0];
            const double y = cfg.dims == 2 ? c.start[1] + j * c.spacing[1] : 0.0;
            c.values[static_cast<std::size_t>(i) * c.count[1] + j] = f(x, y);
        }
    }
    return c;
}

// Interprets the slice as a wave: one sinc-interpolated component per sublattice
// phase of the site layout. With `tag` set, only informons carrying it contribute.
inline InterpolatedWave interpret_state(const CausalTapestry& tap, std::optional<Tag> tag = std::nullopt) {
    const auto& cfg = tap.config();
    const auto& layout = tap.layout();
    InterpolatedWave wave(cfg.dims);
    std::map<int, std::vector<const Informon*>> by_phase;
    for (const auto& inf : tap.informons()) {
        if (tag && inf.tag != tag) continue;
        by_phase[layout.phase(inf.point.x)].push_back(&inf);
    }
    for (const auto& [phase, infs] : by_phase) {
        std::array<int, kMaxDims> lo{infs.front()->point.x[0], infs.front()->point.x[1]};
        std::array<int, kMaxDims> hi = lo;
        for (const Informon* inf : infs) {
            for (int k = 0; k < cfg.dims; ++k) {
                lo[k] = std::min(lo[k], inf->point.x[k]);
                hi[k] = std::max(hi[k], inf->point.x[k]);
            }
        }
        WaveComponent c;
        c.dims = cfg.dims;
        const int stride = layout.stride;
        c.count[0] = (hi[0] - lo[0]) / stride + 1;
        c.start[0] = lo[0] * cfg.dx;
        c.spacing[0] = stride * cfg.dx;
        if (cfg.dims == 2) {
            c.count[1] = hi[1] - lo[1] + 1;
            c.start[1] = lo[1] * cfg.dx;
            c.spacing[1] = cfg.dx;
        }
        c.values.assign(static_cast<std::size_t>(c.count[0]) * c.count[1], Complex{0.0, 0.0});
        for (const Informon* inf : infs) {
            const int i = (inf->point.x[0] - lo[0]) / stride;
            const int j = cfg.dims == 2 ? inf->point.x[1] - lo[1] : 0;
            c.values[static_cast<std::size_t>(i) * c.count[1] + j] += inf->theta;
        }
        wave.add(std::move(c));
    }
    return wave;
}

}  // namespace rgame::tapestry
