#pragma once

#include <cmath>
#include <complex>
#include <numbers>
#include <stdexcept>
#include <vector>

#include "waveop/fft.hpp"
#include "waveop/grids.hpp"

namespace waveop {

// kappa = -1/((1+i) sqrt(2 pi)) = (-1+i)/(2 sqrt(2 pi)); |kappa| = 1/(2 sqrt(pi))
inline cplx dispersive_kappa() {
    const double s = 2.0 * std::sqrt(2.0 * std::numbers::pi);
    return cplx{-1.0 / s, 1.0 / s};
}

/// The fixed C-infinity bump exp(-1/((k-a)(b-k))) on (a,b), zero outside.
inline double bump_value(double a, double b, double k) {
    if (!(k > a && k < b)) return 0.0;
    const double p = (k - a) * (b - k);
    return std::exp(-1.0 / p);
}

/// Closed-form odd Fourier transform of a canonical bump packet:
/// fhat_o(k) = amp * B(k) for k > 0 (odd continuation to k < 0).
struct BumpProfile {
    double a = 0.0;
    double b = 0.0;
    double amp = 1.0;

    cplx operator()(double k) const {
        if (k >= 0.0) return cplx{amp * bump_value(a, b, k), 0.0};
        return cplx{-amp * bump_value(a, b, -k), 0.0};
    }
    double support_max() const { return b; }
};

namespace detail {

// ||B||^2 on (a,b) by composite Simpson; B is smooth and vanishes with all
// derivatives at the endpoints
inline double bump_l2sq(double a, double b) {
    const std::size_t m = 4096;
    const double dk = (b - a) / static_cast<double>(m);
    double s = 0.0;
    for (std::size_t j = 1; j < m; ++j) {
        const double k = a + dk * static_cast<double>(j);
        const double v = bump_value(a, b, k);
        s += ((j % 2) ? 4.0 : 2.0) * v * v;
    }
    return s * dk / 3.0;
}

}  // namespace detail

/// fhat_o(k) = int f_o(x) e^{ikx} dx = 2i int_0^inf f(x) sin(kx) dx,
/// trapezoid on the packet's grid.  Direct summation; exact reference for
/// the chirp-based fast path.
inline MomentumProfile odd_fourier_direct(const WavePacket& f, const MomentumGrid& kg) {
    MomentumProfile out(kg);
    const std::size_t n = f.grid.n;
    for (std::size_t j = 0; j < kg.m; ++j) {
        const double k = kg.node(j);
        cplx s{0.0, 0.0};
        for (std::size_t i = 0; i < n; ++i)
            s += f.values[i] * (std::sin(k * f.grid.node(i)) * f.grid.weight(i));
        out.values[j] = cplx{0.0, 2.0} * s;
    }
    return out;
}

/// Same transform evaluated with an exact chirp sum, O((n+m) log(n+m)).
inline MomentumProfile odd_fourier(const WavePacket& f, const MomentumGrid& kg) {
    const std::size_t n = f.grid.n;
    if (static_cast<double>(n) * static_cast<double>(kg.m) <= 1 << 22)
        return odd_fourier_direct(f, kg);
    // sum_i g_i sin(k_j x_i) = (A_j - conj(A'_j)) / (2i) with
    // A_j  = sum_i g_i        e^{i k_j x_i},
    // A'_j = sum_i conj(g_i)  e^{i k_j x_i},   k_j = k_min + j dk, x_i = i h.
    const double dk = kg.spacing();
    const double alpha = dk * f.grid.h;
    std::vector<cplx> ga(n + 1, cplx{0.0, 0.0}), gb(n + 1, cplx{0.0, 0.0});
    for (std::size_t i = 0; i < n; ++i) {
        const double x = f.grid.node(i);
        const cplx ph{std::cos(kg.k_min * x), std::sin(kg.k_min * x)};
        const cplx g = f.values[i] * f.grid.weight(i);
        ga[i + 1] = g * ph;
        gb[i + 1] = std::conj(g) * ph;
    }
    auto A = detail::chirp_sum(ga, alpha, 0, kg.m);
    auto Ap = detail::chirp_sum(gb, alpha, 0, kg.m);
    MomentumProfile out(kg);
    const cplx inv2i{0.0, -0.5};  // 1/(2i)
    for (std::size_t j = 0; j < kg.m; ++j)
        out.values[j] = cplx{0.0, 2.0} * (inv2i * (A[j] - std::conj(Ap[j])));
    return out;
}

/// fhat_o sampled at the uniform momenta w_i = x_i/(2t) of a radial grid
/// (the momenta the dispersive profile needs).
inline std::vector<cplx> odd_fourier_at_nodes_over(const WavePacket& f, double scale) {
    // w_i = scale * x_i, x_i = i h on f's grid; returns values for i = 1..n
    const std::size_t n = f.grid.n;
    const double alpha = scale * f.grid.h * f.grid.h;
    std::vector<cplx> ga(n + 1, cplx{0.0, 0.0}), gb(n + 1, cplx{0.0, 0.0});
    for (std::size_t i = 0; i < n; ++i) {
        const cplx g = f.values[i] * f.grid.weight(i);
        ga[i + 1] = g;
        gb[i + 1] = std::conj(g);
    }
    auto A = detail::chirp_sum(ga, alpha, 1, n);
    auto Ap = detail::chirp_sum(gb, alpha, 1, n);
    std::vector<cplx> out(n);
    for (std::size_t i = 0; i < n; ++i) out[i] = A[i] - std::conj(Ap[i]);
    return out;
}

/// Wave packet whose odd Fourier transform is the canonical bump on [a,b],
/// scaled to unit L2 norm; carries the closed-form profile.
struct BumpPacket {
    WavePacket f;
    BumpProfile profile;  // fhat_o(k) = profile(k) exactly (up to quadrature)
    double a = 0.0;
    double b = 0.0;
};

inline BumpPacket wave_packet_from_bump(double a, double b, const RadialGrid& grid) {
    if (!(a > 0.0)) throw std::invalid_argument("wave_packet_from_bump: a must be positive");
    if (!(b > a)) throw std::invalid_argument("wave_packet_from_bump: b must exceed a");
    // ||f||^2_{L2(R+)} = (1/4pi) ||fhat_o||^2_{L2(R)} = (amp^2/2pi)||B||^2_(a,b)
    const double amp = std::sqrt(2.0 * std::numbers::pi / detail::bump_l2sq(a, b));

    // f(x) = (1/2pi) int fhat_o(w) e^{-iwx} dw = (-i amp/pi) int_a^b B sin(wx) dw.
    // Uniform w-grid; the chirp sum evaluates the sampled sum exactly, so the
    // spacing only needs to stay below the Nyquist limit pi/x_max of the
    // largest node (plus margin), and B's smooth compactly supported shape
    // makes the trapezoid sum superalgebraically accurate.
    const std::size_t n = grid.n;
    std::size_t M = 4096;
    const double needed = 4.0 * (b - a) * grid.x_max / std::numbers::pi;
    while (static_cast<double>(M) < needed) M *= 2;
    const double dw = (b - a) / static_cast<double>(M);
    std::vector<cplx> Bs(M + 1, cplx{0.0, 0.0});
    for (std::size_t j = 0; j <= M; ++j)
        Bs[j] = cplx{bump_value(a, b, a + dw * static_cast<double>(j)), 0.0};
    // S_i = sum_j B_j sin(w_j x_i) = Im( e^{i a x_i} sum_j B_j e^{i j dw x_i} )
    const double alpha = dw * grid.h;
    // chirp over output index i with x_i = i h, i = 1..n: inner phase e^{i dw x_i j}
    auto C = detail::chirp_sum(Bs, alpha, 1, n);
    BumpPacket pk;
    pk.a = a;
    pk.b = b;
    pk.profile = BumpProfile{a, b, amp};
    pk.f = WavePacket(grid);
    const double pref = amp / std::numbers::pi * dw;
    for (std::size_t i = 0; i < n; ++i) {
        const double x = grid.node(i);
        const cplx e{std::cos(a * x), std::sin(a * x)};
        const double S = (e * C[i]).imag();
        pk.f.values[i] = cplx{0.0, -pref * S};
    }
    return pk;
}

}  // namespace waveop
