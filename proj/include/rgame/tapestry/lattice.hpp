// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <array>
#include <cstdint>
#include <cstdlib>
#include <optional>
#include <string>
#include <vector>

#include "rgame/common.hpp"

namespace rgame::tapestry {

inline constexpr int kMaxDims = 2;

using SiteIndex = std::array<int, kMaxDims>;

// Regular space-time lattice in natural units. Every slice covers the
// integer box [-extent, extent]^dims.
struct LatticeConfig {
    double dt = 0.05;
    double dx = 0.1;
    int dims = 1;
    int extent = 400;
    double hbar = 1.0;
    double mass = 1.0;
    // Highest spatial angular frequency the represented states may carry.
    // Unset means "the lattice Nyquist frequency pi/dx".
    std::optional<double> band_limit;

    double effective_band_limit() const { return band_limit ? *band_limit : pi / dx; }
    int sites_per_axis() const { return 2 * extent + 1; }
    std::size_t sites_per_slice() const {
        std::size_t n = 1;
        for (int k = 0; k < dims; ++k) {
            n *= static_cast<std::size_t>(sites_per_axis());
        }
        return n;
    }

    friend bool operator==(const LatticeConfig&, const LatticeConfig&) = default;
};

struct ConstraintViolation {
    std::string field;
    std::string constraint;

    friend bool operator==(const ConstraintViolation&, const ConstraintViolation&) = default;
};

inline std::vector<ConstraintViolation> check_config(const LatticeConfig& c) {
    std::vector<ConstraintViolation> out;
    if (!(c.dt > 0.0)) out.push_back({"dt", "dt > 0"});
    if (!(c.dx > 0.0)) out.push_back({"dx", "dx > 0"});
    if (c.dims < 1 || c.dims > kMaxDims) out.push_back({"dims", "dims in {1, 2}"});
    if (c.extent < 1) out.push_back({"extent", "extent >= 1"});
    if (!(c.hbar > 0.0)) out.push_back({"hbar", "hbar > 0"});
    if (!(c.mass > 0.0)) out.push_back({"mass", "mass > 0"});
    if (c.band_limit) {
        if (!(*c.band_limit > 0.0)) {
            out.push_back({"band_limit", "band_limit > 0"});
        } else if (c.dx > 0.0 && c.dx > pi / *c.band_limit) {
            out.push_back({"dx", "Nyquist: dx <= pi / band_limit"});
        }
    }
    return out;
}

// A lattice site in one time slice. Components of x beyond `dims` are zero.
struct LatticePoint {
    std::int64_t t = 0;
    SiteIndex x{};
    int dims = 1;

    friend bool operator==(const LatticePoint&, const LatticePoint&) = default;
    friend auto operator<=>(const LatticePoint&, const LatticePoint&) = default;
};

inline LatticePoint point1(std::int64_t t, int x) { return {t, {x, 0}, 1}; }
inline LatticePoint point2(std::int64_t t, int x, int y) { return {t, {x, y}, 2}; }

struct Coordinates {
    double t = 0.0;
    std::array<double, kMaxDims> x{};
    int dims = 1;
};

inline bool within_extent(const LatticePoint& p, const LatticeConfig& c) {
    if (p.dims != c.dims) return false;
    for (int k = 0; k < p.dims; ++k) {
        if (std::abs(p.x[k]) > c.extent) return false;
    }
    for (int k = p.dims; k < kMaxDims; ++k) {
        if (p.x[k] != 0) return false;
    }
    return true;
}

// Lattice index -> real coordinates (t * dt, x * dx).
inline Coordinates embed(const LatticePoint& p, const LatticeConfig& c) {
    if (!within_extent(p, c)) {
        throw domain_error("embed: lattice point outside the configured extent");
    }
    Coordinates out;
    out.t = static_cast<double>(p.t) * c.dt;
    out.dims = p.dims;
    for (int k = 0; k < p.dims; ++k) {
        out.x[k] = static_cast<double>(p.x[k]) * c.dx;
    }
    return out;
}

// Causal order of the flat NRQM manifold: space is an antichain, time orders.
inline bool causal_leq(const LatticePoint& p, const LatticePoint& q) { return p.t <= q.t; }

// Row-major offset of a site inside the slice box; -1 when outside.
inline std::int64_t site_offset(const SiteIndex& x, const LatticeConfig& c) {
    std::int64_t off = 0;
    const int n = c.sites_per_axis();
    for (int k = 0; k < c.dims; ++k) {
        if (std::abs(x[k]) > c.extent) return -1;
        off = off * n + (x[k] + c.extent);
    }
    return off;
}

inline SiteIndex site_from_offset(std::int64_t off, const LatticeConfig& c) {
    SiteIndex x{};
    const int n = c.sites_per_axis();
    for (int k = c.dims - 1; k >= 0; --k) {
        x[k] = static_cast<int>(off % n) - c.extent;
        off /= n;
    }
    return x;
}

}  // namespace rgame::tapestry
