#pragma once

#include <cmath>
#include <complex>
#include <numbers>
#include <stdexcept>
#include <vector>

#include "waveop/fft.hpp"
#include "waveop/grids.hpp"
#include "waveop/potential.hpp"
#include "waveop/spectral.hpp"
#include "waveop/transforms.hpp"

namespace waveop {

enum class PropagatorMethod { Spectral, FiniteDifference };

struct PropagatorConfig {
    double dt = 0.01;
    std::vector<double> t_list;
    PropagatorMethod method = PropagatorMethod::Spectral;
    double k_max = 4.0;  // top resolved momentum, for the accuracy precondition

    void validate() const {
        if (!(dt > 0.0)) throw std::invalid_argument("PropagatorConfig: dt must be positive");
        for (std::size_t i = 0; i < t_list.size(); ++i) {
            if (!(t_list[i] > 0.0)) throw std::invalid_argument("PropagatorConfig: snapshot times must be positive");
            if (i > 0 && !(t_list[i] > t_list[i - 1]))
                throw std::invalid_argument("PropagatorConfig: snapshot times must be sorted");
        }
    }
};

/// e^{-i H_0 t} f by sine diagonalization on the Dirichlet grid: the interior
/// modes sin(k_j x), k_j = j pi / x_max, each acquire the exact phase
/// e^{-i t k_j^2}.  Exactly unitary and exactly composable in t.
inline WavePacket free_evolve(const WavePacket& f, double t) {
    if (!(t >= 0.0)) throw std::invalid_argument("free_evolve: requires t >= 0");
    if (t == 0.0) return f;
    const std::size_t n = f.grid.n;
    std::vector<cplx> s(f.values.begin(), f.values.end() - 1);  // interior nodes 1..n-1
    auto S = detail::dst_interior(s, n);
    const double dk = std::numbers::pi / f.grid.x_max;
    for (std::size_t j = 0; j + 1 < n; ++j) {
        const double k = dk * static_cast<double>(j + 1);
        const double ph = -t * k * k;
        S[j] *= cplx{std::cos(ph), std::sin(ph)};
    }
    auto back = detail::dst_interior(S, n);
    WavePacket out(f.grid);
    const double scale = 2.0 / static_cast<double>(n);
    for (std::size_t i = 0; i + 1 < n; ++i) out.values[i] = back[i] * scale;
    out.values[n - 1] = cplx{0.0, 0.0};
    return out;
}

/// kappa e^{ix^2/(4t)} / sqrt(t) * fhat_o(x/(2t)) on the grid, fhat_o taken
/// from a closed-form profile.
inline WavePacket dispersive_profile(const BumpProfile& prof, const RadialGrid& g, double t) {
    if (!(t > 0.0)) throw std::invalid_argument("dispersive_profile: requires t > 0");
    WavePacket out(g);
    const cplx kap = dispersive_kappa();
    const double inv_sqrt_t = 1.0 / std::sqrt(t);
    for (std::size_t i = 0; i < g.n; ++i) {
        const double x = g.node(i);
        const cplx fh = prof(x / (2.0 * t));
        if (fh == cplx{0.0, 0.0}) continue;
        const double ph = x * x / (4.0 * t);
        out.values[i] = kap * inv_sqrt_t * cplx{std::cos(ph), std::sin(ph)} * fh;
    }
    return out;
}

/// Same profile with fhat_o computed from the packet itself (exact chirp
/// evaluation of the grid quadrature at the momenta x_i/(2t)).
inline WavePacket dispersive_profile(const WavePacket& f, double t) {
    if (!(t > 0.0)) throw std::invalid_argument("dispersive_profile: requires t > 0");
    const auto fh = odd_fourier_at_nodes_over(f, 1.0 / (2.0 * t));
    WavePacket out(f.grid);
    const cplx kap = dispersive_kappa();
    const double inv_sqrt_t = 1.0 / std::sqrt(t);
    for (std::size_t i = 0; i < f.grid.n; ++i) {
        const double x = f.grid.node(i);
        const double ph = x * x / (4.0 * t);
        out.values[i] = kap * inv_sqrt_t * cplx{std::cos(ph), std::sin(ph)} * fh[i];
    }
    return out;
}

namespace detail {

inline void apply_modified_phase(WavePacket& w, const Potential& p, double t) {
    for (std::size_t i = 0; i < w.grid.n; ++i) {
        if (w.values[i] == cplx{0.0, 0.0}) continue;
        const double ph = -(t / w.grid.node(i)) * p.Q[i];
        w.values[i] *= cplx{std::cos(ph), std::sin(ph)};
    }
}

}  // namespace detail

/// U(t) f: the dispersive profile times exp(-i (t/x) int_0^x q).
inline WavePacket modified_free(const WavePacket& f, const Potential& p, double t) {
    if (!(f.grid == p.grid)) throw std::invalid_argument("modified_free: grid mismatch");
    WavePacket out = dispersive_profile(f, t);
    detail::apply_modified_phase(out, p, t);
    return out;
}

/// U(t) applied to a bump packet (closed-form profile path).  Refuses t
/// outside the ballistic window 2 b t <= x_max rather than aliasing.
inline WavePacket modified_free(const BumpPacket& pk, const Potential& p, double t) {
    if (!(2.0 * pk.b * t <= p.grid.x_max))
        throw std::invalid_argument("modified_free: ballistic window violated: 2*b*t = " +
                                    std::to_string(2.0 * pk.b * t) + " > x_max = " +
                                    std::to_string(p.grid.x_max));
    WavePacket out = dispersive_profile(pk.profile, p.grid, t);
    detail::apply_modified_phase(out, p, t);
    return out;
}

/// e^{-itH} through the generalized eigenfunction expansion: phases e^{-itE}
/// on the continuous part and e^{+it kappa_j^2} on bound states.
inline WavePacket full_evolve_spectral(const WavePacket& f, const SpectralData& sd,
                                       const EigenfunctionSet& eigs, double t,
                                       std::size_t threads = 0) {
    auto tr = generalized_transform(f, sd, eigs, threads);
    for (std::size_t j = 0; j < sd.kgrid.m; ++j) {
        const double ph = -t * sd.kgrid.energy(j);
        tr.breve.values[j] *= cplx{std::cos(ph), std::sin(ph)};
    }
    for (std::size_t jb = 0; jb < tr.bound_coeffs.size(); ++jb) {
        const double ph = t * sd.bound[jb].kappa * sd.bound[jb].kappa;
        tr.bound_coeffs[jb] *= cplx{std::cos(ph), std::sin(ph)};
    }
    return inverse_transform(tr.breve, tr.bound_coeffs, sd, eigs, threads);
}

/// Crank-Nicolson unitary step on the Dirichlet grid; the independent
/// cross-check for the spectral propagator at moderate t.
inline WavePacket full_evolve_fd(const WavePacket& f, const Potential& p, double t,
                                 const PropagatorConfig& cfg) {
    if (!(f.grid == p.grid)) throw std::invalid_argument("full_evolve_fd: grid mismatch");
    cfg.validate();
    if (!(t >= 0.0)) throw std::invalid_argument("full_evolve_fd: requires t >= 0");
    const double load = cfg.dt * (cfg.k_max * cfg.k_max + p.max_abs());
    if (!(load < 0.5))
        throw std::invalid_argument("full_evolve_fd: dt*(k_max^2 + max|q|) = " +
                                    std::to_string(load) + " must stay below 0.5");
    if (t == 0.0) return f;
    const std::size_t n = f.grid.n;
    const std::size_t steps = static_cast<std::size_t>(std::ceil(t / cfg.dt - 1e-12));
    const double dt = t / static_cast<double>(steps);
    const double h2 = f.grid.h * f.grid.h;
    // H = tridiag(-1/h^2, 2/h^2 + q_i, -1/h^2), Dirichlet at x=0 and beyond x_max
    const cplx lam = cplx{0.0, 0.5 * dt};  // (I + i dt/2 H) psi^{n+1} = (I - i dt/2 H) psi^n
    const double off = -1.0 / h2;
    std::vector<cplx> diag_p(n), rhs(n), cprime(n);
    for (std::size_t i = 0; i < n; ++i)
        diag_p[i] = 1.0 + lam * (2.0 / h2 + p.q[i]);
    const cplx off_p = lam * off;

    WavePacket out = f;
    std::vector<cplx>& psi = out.values;
    for (std::size_t s = 0; s < steps; ++s) {
        for (std::size_t i = 0; i < n; ++i) {
            const cplx left = (i > 0) ? psi[i - 1] : cplx{0.0, 0.0};
            const cplx right = (i + 1 < n) ? psi[i + 1] : cplx{0.0, 0.0};
            rhs[i] = psi[i] - lam * ((2.0 / h2 + p.q[i]) * psi[i] + off * (left + right));
        }
        // Thomas solve
        cprime[0] = off_p / diag_p[0];
        rhs[0] /= diag_p[0];
        for (std::size_t i = 1; i < n; ++i) {
            const cplx m = diag_p[i] - off_p * cprime[i - 1];
            cprime[i] = off_p / m;
            rhs[i] = (rhs[i] - off_p * rhs[i - 1]) / m;
        }
        psi[n - 1] = rhs[n - 1];
        for (std::size_t i = n - 1; i > 0; --i) psi[i - 1] = rhs[i - 1] - cprime[i - 1] * psi[i];
    }
    return out;
}

}  // namespace waveop
