#pragma once

#include <bit>
#include <cmath>
#include <complex>
#include <cstddef>
#include <numbers>
#include <vector>

#include "waveop/grids.hpp"

// Internal discrete transforms: iterative radix-2 FFT, Bluestein's algorithm
// for arbitrary lengths, uniform chirp sums, and the DST-I used by the free
// propagator.  Not a public FFT surface; only what the transforms here need.

namespace waveop::detail {

inline bool is_pow2(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }

inline std::size_t next_pow2(std::size_t n) {
    std::size_t p = 1;
    while (p < n) p <<= 1;
    return p;
}

// In-place iterative Cooley-Tukey, length must be a power of two.
// sign = -1: forward  e^{-2pi i jm/N};  sign = +1: inverse kernel (no 1/N).
inline void fft_pow2(std::vector<cplx>& a, int sign) {
    const std::size_t n = a.size();
    if (n < 2) return;
    // bit-reversal permutation
    for (std::size_t i = 1, j = 0; i < n; ++i) {
        std::size_t bit = n >> 1;
        for (; j & bit; bit >>= 1) j ^= bit;
        j ^= bit;
        if (i < j) std::swap(a[i], a[j]);
    }
    for (std::size_t len = 2; len <= n; len <<= 1) {
        const double ang = sign * 2.0 * std::numbers::pi / static_cast<double>(len);
        const cplx wl{std::cos(ang), std::sin(ang)};
        for (std::size_t i = 0; i < n; i += len) {
            cplx w{1.0, 0.0};
            for (std::size_t j = 0; j < len / 2; ++j) {
                cplx u = a[i + j];
                cplx v = a[i + j + len / 2] * w;
                a[i + j] = u + v;
                a[i + j + len / 2] = u - v;
                w *= wl;
            }
        }
    }
}

// Forward DFT of arbitrary length via Bluestein (chirp-z).  Kernel
// e^{sign * 2pi i jm/N}; no normalization.
inline void fft_any(std::vector<cplx>& a, int sign) {
    const std::size_t n = a.size();
    if (n < 2) return;
    if (is_pow2(n)) {
        fft_pow2(a, sign);
        return;
    }
    // jm = (j^2 + m^2 - (j-m)^2)/2
    const double base = sign * std::numbers::pi / static_cast<double>(n);
    std::vector<cplx> u(n), v;
    const std::size_t L = next_pow2(2 * n - 1);
    v.assign(L, cplx{0.0, 0.0});
    std::vector<cplx> w(L, cplx{0.0, 0.0});
    for (std::size_t j = 0; j < n; ++j) {
        const double ph = base * static_cast<double>(j) * static_cast<double>(j);
        const cplx chirp{std::cos(ph), std::sin(ph)};
        w[j] = a[j] * chirp;
        v[j] = std::conj(chirp);
        if (j != 0) v[L - j] = std::conj(chirp);
    }
    fft_pow2(w, -1);
    fft_pow2(v, -1);
    for (std::size_t j = 0; j < L; ++j) w[j] *= v[j];
    fft_pow2(w, +1);
    const double invL = 1.0 / static_cast<double>(L);
    for (std::size_t j = 0; j < n; ++j) {
        const double ph = base * static_cast<double>(j) * static_cast<double>(j);
        a[j] = w[j] * invL * cplx{std::cos(ph), std::sin(ph)};
    }
}

/// g[r] = sum_{j=0}^{N-1} f[j] * exp(i * alpha * (i_begin + r) * j),
/// r = 0..count-1.  Exact evaluation of a uniform chirp sum in
/// O((N+count) log) via Bluestein's identity  Ij = (I^2 + j^2 - (I-j)^2)/2.
inline std::vector<cplx> chirp_sum(const std::vector<cplx>& f, double alpha,
                                   std::size_t i_begin, std::size_t count) {
    const std::size_t n = f.size();
    std::vector<cplx> out(count, cplx{0.0, 0.0});
    if (n == 0 || count == 0) return out;
    if (static_cast<double>(n) * static_cast<double>(count) <= 65536.0) {
        for (std::size_t r = 0; r < count; ++r) {
            const double ii = static_cast<double>(i_begin + r);
            cplx s{0.0, 0.0};
            for (std::size_t j = 0; j < n; ++j) {
                const double ph = alpha * ii * static_cast<double>(j);
                s += f[j] * cplx{std::cos(ph), std::sin(ph)};
            }
            out[r] = s;
        }
        return out;
    }
    const double half = 0.5 * alpha;
    auto chirp = [half](double idx) {
        const double ph = half * idx * idx;
        return cplx{std::cos(ph), std::sin(ph)};
    };
    // u_j = f_j e^{i a j^2/2};  v_d = e^{-i a d^2/2},  d = I - j in
    // [i_begin - (n-1), i_begin + count - 1];  g_I = e^{i a I^2/2} (u * v)_I
    const std::ptrdiff_t dmin = static_cast<std::ptrdiff_t>(i_begin) - static_cast<std::ptrdiff_t>(n - 1);
    const std::size_t mv = n - 1 + count;
    const std::size_t L = next_pow2(n + mv - 1);
    std::vector<cplx> u(L, cplx{0.0, 0.0}), v(L, cplx{0.0, 0.0});
    for (std::size_t j = 0; j < n; ++j) u[j] = f[j] * chirp(static_cast<double>(j));
    for (std::size_t mIdx = 0; mIdx < mv; ++mIdx)
        v[mIdx] = std::conj(chirp(static_cast<double>(dmin + static_cast<std::ptrdiff_t>(mIdx))));
    fft_pow2(u, -1);
    fft_pow2(v, -1);
    for (std::size_t j = 0; j < L; ++j) u[j] *= v[j];
    fft_pow2(u, +1);
    const double invL = 1.0 / static_cast<double>(L);
    for (std::size_t r = 0; r < count; ++r) {
        const double ii = static_cast<double>(i_begin + r);
        out[r] = u[n - 1 + r] * invL * chirp(ii);
    }
    return out;
}

/// DST-I on the interior nodes of a Dirichlet grid: given s_1..s_{n-1}
/// (values at x_i = i h, i = 1..n-1, zero at both 0 and n h), returns
/// S_j = sum_i s_i sin(pi i j / n), j = 1..n-1.  Self-inverse up to 2/n.
inline std::vector<cplx> dst_interior(const std::vector<cplx>& s, std::size_t n) {
    std::vector<cplx> w(2 * n, cplx{0.0, 0.0});
    for (std::size_t i = 1; i < n; ++i) {
        w[i] = s[i - 1];
        w[2 * n - i] = -s[i - 1];
    }
    fft_any(w, -1);
    std::vector<cplx> out(n - 1);
    const cplx half_i{0.0, 0.5};
    for (std::size_t j = 1; j < n; ++j) out[j - 1] = half_i * w[j];
    return out;
}

}  // namespace waveop::detail
