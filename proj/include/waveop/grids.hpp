#pragma once

#include <cmath>
#include <complex>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace waveop {

using cplx = std::complex<double>;

// Numerical-quality failure (unresolved limits, resolution too coarse).
// Distinct from std::invalid_argument so callers can map it to its own
// exit code.
struct QualityError : std::runtime_error {
    explicit QualityError(const std::string& what) : std::runtime_error(what) {}
};

/// Uniform grid on (0, x_max]: nodes x_i = i*h, i = 1..n.  The origin is a
/// Dirichlet node (value identically zero) and is not stored.
struct RadialGrid {
    double x_max = 0.0;
    std::size_t n = 0;
    double h = 0.0;

    RadialGrid() = default;
    RadialGrid(double xmax, std::size_t count) : x_max(xmax), n(count) {
        if (!(xmax > 0.0)) throw std::invalid_argument("RadialGrid: x_max must be positive");
        if (count < 2) throw std::invalid_argument("RadialGrid: need at least 2 nodes");
        h = xmax / static_cast<double>(count);
    }

    double node(std::size_t i) const { return h * static_cast<double>(i + 1); }

    // trapezoid weight for integrals over [0, x_max] with an implicit zero
    // value at x = 0 (half cell at both ends; the x=0 half cell carries 0)
    double weight(std::size_t i) const { return (i + 1 == n) ? 0.5 * h : h; }

    bool operator==(const RadialGrid& o) const {
        return x_max == o.x_max && n == o.n;
    }
};

inline RadialGrid make_grid(double x_max, std::size_t n) { return RadialGrid(x_max, n); }

/// Uniform momentum grid on [k_min, k_max] (endpoints included), k_min > 0.
/// Energies are E_j = k_j^2.
struct MomentumGrid {
    double k_min = 0.0;
    double k_max = 0.0;
    std::size_t m = 0;

    MomentumGrid() = default;
    MomentumGrid(double kmin, double kmax, std::size_t count)
        : k_min(kmin), k_max(kmax), m(count) {
        if (!(kmin > 0.0)) throw std::invalid_argument("MomentumGrid: k_min must be positive");
        if (!(kmax > kmin)) throw std::invalid_argument("MomentumGrid: k_max must exceed k_min");
        if (count < 2) throw std::invalid_argument("MomentumGrid: need at least 2 nodes");
    }

    double spacing() const { return (k_max - k_min) / static_cast<double>(m - 1); }
    double node(std::size_t j) const { return k_min + spacing() * static_cast<double>(j); }
    double energy(std::size_t j) const { double k = node(j); return k * k; }

    // trapezoid weight for integrals dk over [k_min, k_max]
    double weight(std::size_t j) const {
        double dk = spacing();
        return (j == 0 || j + 1 == m) ? 0.5 * dk : dk;
    }

    bool operator==(const MomentumGrid& o) const {
        return k_min == o.k_min && k_max == o.k_max && m == o.m;
    }
};

/// Complex-valued state sampled on a RadialGrid.
struct WavePacket {
    RadialGrid grid;
    std::vector<cplx> values;

    WavePacket() = default;
    explicit WavePacket(const RadialGrid& g) : grid(g), values(g.n, cplx{0.0, 0.0}) {}
    WavePacket(const RadialGrid& g, std::vector<cplx> v) : grid(g), values(std::move(v)) {
        if (values.size() != grid.n)
            throw std::invalid_argument("WavePacket: value count does not match grid");
    }

    double norm_sq() const {
        double s = 0.0;
        for (std::size_t i = 0; i < values.size(); ++i)
            s += std::norm(values[i]) * grid.weight(i);
        return s;
    }
    double norm() const { return std::sqrt(norm_sq()); }
};

/// Complex samples on a MomentumGrid.
struct MomentumProfile {
    MomentumGrid grid;
    std::vector<cplx> values;

    MomentumProfile() = default;
    explicit MomentumProfile(const MomentumGrid& g) : grid(g), values(g.m, cplx{0.0, 0.0}) {}

    double norm_sq() const {
        double s = 0.0;
        for (std::size_t j = 0; j < values.size(); ++j)
            s += std::norm(values[j]) * grid.weight(j);
        return s;
    }
};

inline cplx inner_product(const WavePacket& f, const WavePacket& g) {
    if (!(f.grid == g.grid)) throw std::invalid_argument("inner_product: grid mismatch");
    cplx s{0.0, 0.0};
    for (std::size_t i = 0; i < f.values.size(); ++i)
        s += std::conj(f.values[i]) * g.values[i] * f.grid.weight(i);
    return s;
}

inline double distance(const WavePacket& f, const WavePacket& g) {
    if (!(f.grid == g.grid)) throw std::invalid_argument("distance: grid mismatch");
    double s = 0.0;
    for (std::size_t i = 0; i < f.values.size(); ++i)
        s += std::norm(f.values[i] - g.values[i]) * f.grid.weight(i);
    return std::sqrt(s);
}

// inner product of a real sampled function against a packet
inline cplx inner_product_real(const std::vector<double>& u, const WavePacket& g) {
    if (u.size() != g.values.size()) throw std::invalid_argument("inner_product_real: size mismatch");
    cplx s{0.0, 0.0};
    for (std::size_t i = 0; i < u.size(); ++i)
        s += u[i] * g.values[i] * g.grid.weight(i);
    return s;
}

}  // namespace waveop
