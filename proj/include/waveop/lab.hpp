#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <stdexcept>
#include <string>
#include <vector>

#include "waveop/evolution.hpp"
#include "waveop/grids.hpp"
#include "waveop/oscillatory.hpp"
#include "waveop/parallel.hpp"
#include "waveop/potential.hpp"
#include "waveop/spectral.hpp"
#include "waveop/transforms.hpp"

namespace waveop {

/// Momentum grid for eigenfunction synthesis over the packet band [a,b]:
/// spacing pi/x_max (the sine-faithful resolution of [0, x_max]), nodes
/// k_j = j pi / x_max.  Coarser grids alias the synthesized packet back
/// into the domain once x exceeds pi/dk.
inline MomentumGrid synthesis_band(const RadialGrid& g, double a, double b) {
    const double dk = std::numbers::pi / g.x_max;
    const std::size_t jlo = static_cast<std::size_t>(std::ceil(a / dk));
    const std::size_t jhi = static_cast<std::size_t>(std::floor(b / dk));
    if (jhi < jlo + 1) throw std::invalid_argument("synthesis_band: band too narrow for this grid");
    return MomentumGrid(dk * static_cast<double>(jlo), dk * static_cast<double>(jhi),
                        jhi - jlo + 1);
}

namespace detail {

inline void require_synthesis_resolution(const EigenfunctionSet& eigs, double x_extent,
                                         const char* who) {
    const double dk = eigs.kgrid.spacing();
    const double limit = std::numbers::pi / x_extent;
    if (dk > 1.0001 * limit)
        throw QualityError(std::string(who) + ": momentum spacing " + std::to_string(dk) +
                           " too coarse for synthesis up to x = " + std::to_string(x_extent) +
                           " (need dk <= pi/x = " + std::to_string(limit) + ")");
}

}  // namespace detail

/// The modified wave limit W_f: generalized Fourier transform
/// breve W_f(k^2) = fhat_o(k) j_m(k) / (2ik)  (the prefactor
/// -kappa sqrt(2 pi)(1+i) collapses to 1), zero bound components.
struct WaveLimit {
    MomentumProfile breve_W;
    WavePacket W;
    std::vector<cplx> bound_coeffs;  // all zero
    double unresolved_mass = 0.0;    // |fhat_o|^2 share on flagged j_m nodes
};

namespace detail {

inline WaveLimit build_wave_limit_from(const MomentumProfile& fhat, const SpectralData& sd,
                                       const EigenfunctionSet& eigs, std::size_t threads) {
    WaveLimit wl;
    wl.breve_W = MomentumProfile(eigs.kgrid);
    double flagged = 0.0, total = 0.0;
    for (std::size_t j = 0; j < eigs.kgrid.m; ++j) {
        const double k = eigs.kgrid.node(j);
        const double w = std::norm(fhat.values[j]);
        total += w;
        if (eigs.jm_residual[j] > 0.10) flagged += w;
        wl.breve_W.values[j] = fhat.values[j] * eigs.jm[j] / cplx{0.0, 2.0 * k};
    }
    wl.unresolved_mass = (total > 0.0) ? flagged / total : 0.0;
    if (wl.unresolved_mass > 0.05)
        throw QualityError("build_wave_limit: j_m unresolved on " +
                           std::to_string(100.0 * wl.unresolved_mass) +
                           "% of the packet's spectral mass; enlarge x_max");
    wl.bound_coeffs.assign(sd.bound.size(), cplx{0.0, 0.0});
    wl.W = inverse_transform(wl.breve_W, wl.bound_coeffs, sd, eigs, threads);
    return wl;
}

}  // namespace detail

inline WaveLimit build_wave_limit(const BumpPacket& pk, const SpectralData& sd,
                                  const EigenfunctionSet& eigs, std::size_t threads = 0) {
    MomentumProfile fhat(eigs.kgrid);
    for (std::size_t j = 0; j < eigs.kgrid.m; ++j) fhat.values[j] = pk.profile(eigs.kgrid.node(j));
    return detail::build_wave_limit_from(fhat, sd, eigs, threads);
}

inline WaveLimit build_wave_limit(const WavePacket& f, const SpectralData& sd,
                                  const EigenfunctionSet& eigs, std::size_t threads = 0) {
    const auto fhat = odd_fourier(f, eigs.kgrid);
    return detail::build_wave_limit_from(fhat, sd, eigs, threads);
}

/// breve psi(t,k) = int_0^inf u(x,k) [U(t)f](x) dx on the set's grid.
inline GeneralizedTransform breve_psi(const BumpPacket& pk, const Potential& p,
                                      const SpectralData& sd, const EigenfunctionSet& eigs,
                                      double t, std::size_t threads = 0) {
    const WavePacket ut = modified_free(pk, p, t);
    return generalized_transform(ut, sd, eigs, threads);
}

/// Cesaro-averaged discrepancy report.
struct TheoremReport {
    std::vector<double> horizons;
    std::vector<double> cesaro;         // (1/T) int_0^T ||U(t)f - e^{-itH} W_f||^2 dt
    std::vector<double> cesaro_dyadic;  // (2/T) int_{T/2}^T ... dt
    std::vector<std::vector<double>> t_nodes;
    std::vector<std::vector<double>> discrepancy;
    double norm_f_sq = 0.0;
    double norm_W_sq = 0.0;
    double unresolved_mass = 0.0;
};

/// (1/T) int_0^T ||U(t)f - e^{-itH} W_f||^2 dt per horizon, uniform t-grid
/// and trapezoid rule.  The integrand at t = 0 is taken at its weak limit
/// ||f||^2 + ||W_f||^2 (the cross term carries a vanishing stationary-phase
/// factor sqrt(t)).
inline TheoremReport cesaro_discrepancy(const BumpPacket& pk, const Potential& p,
                                        const SpectralData& sd, const EigenfunctionSet& eigs,
                                        const std::vector<double>& T_list,
                                        std::size_t nodes_per_horizon = 128,
                                        std::size_t threads = 0) {
    if (T_list.empty()) throw std::invalid_argument("cesaro_discrepancy: empty horizon list");
    for (double T : T_list)
        if (!(T > 0.0)) throw std::invalid_argument("cesaro_discrepancy: horizons must be positive");
    const double T_max = *std::max_element(T_list.begin(), T_list.end());
    const double reach = 2.0 * pk.b * T_max;
    if (!(reach <= p.grid.x_max))
        throw std::invalid_argument("cesaro_discrepancy: ballistic window violated: 2*b*max(T) = " +
                                    std::to_string(reach) + " > x_max = " +
                                    std::to_string(p.grid.x_max));
    detail::require_synthesis_resolution(eigs, std::min(p.grid.x_max, reach + 150.0),
                                         "cesaro_discrepancy");
    if (nodes_per_horizon < 2 || nodes_per_horizon % 2 != 0)
        throw std::invalid_argument("cesaro_discrepancy: nodes_per_horizon must be even and >= 2");

    const WaveLimit wl = build_wave_limit(pk, sd, eigs, threads);
    TheoremReport rep;
    rep.horizons = T_list;
    rep.norm_f_sq = pk.f.norm_sq();
    rep.norm_W_sq = wl.W.norm_sq();
    rep.unresolved_mass = wl.unresolved_mass;

    const std::size_t m = eigs.kgrid.m;
    std::vector<double> wq(m);  // mu * 2k * trapezoid dk
    for (std::size_t j = 0; j < m; ++j) {
        const double k = eigs.kgrid.node(j);
        wq[j] = eigs.mu[j] * 2.0 * k * eigs.kgrid.weight(j);
    }

    auto discrepancy_at = [&](double t) -> double {
        if (t == 0.0) return rep.norm_f_sq + rep.norm_W_sq;
        const WavePacket ut = modified_free(pk, p, t);
        std::vector<cplx> coef(m);
        for (std::size_t j = 0; j < m; ++j) {
            const double ph = -t * eigs.kgrid.energy(j);
            coef[j] = wl.breve_W.values[j] * wq[j] * cplx{std::cos(ph), std::sin(ph)};
        }
        const std::size_t keep = eigs.x_keep;
        double acc = 0.0;
        for (std::size_t i = 0; i < p.grid.n; ++i) {
            cplx s{0.0, 0.0};
            if (i < keep)
                for (std::size_t j = 0; j < m; ++j) s += coef[j] * eigs.u[j][i];
            acc += std::norm(ut.values[i] - s) * p.grid.weight(i);
        }
        return acc;
    };

    for (double T : T_list) {
        const std::size_t N = nodes_per_horizon;
        std::vector<double> ts(N + 1), Ds(N + 1);
        for (std::size_t r = 0; r <= N; ++r) ts[r] = T * static_cast<double>(r) / static_cast<double>(N);
        parallel_for(N + 1, threads, [&](std::size_t r) { Ds[r] = discrepancy_at(ts[r]); });
        double integral = 0.0;
        for (std::size_t r = 0; r < N; ++r) integral += 0.5 * (Ds[r] + Ds[r + 1]) * (ts[r + 1] - ts[r]);
        double dyadic = 0.0;
        for (std::size_t r = N / 2; r < N; ++r) dyadic += 0.5 * (Ds[r] + Ds[r + 1]) * (ts[r + 1] - ts[r]);
        rep.cesaro.push_back(integral / T);
        rep.cesaro_dyadic.push_back(dyadic / (0.5 * T));
        rep.t_nodes.push_back(std::move(ts));
        rep.discrepancy.push_back(std::move(Ds));
    }
    return rep;
}

/// Distance of  (e^{itk^2}/sqrt(t)) int_{2kt}^{2bt} fhat_o(s/(2t))
/// e^{i(s^2/(4t) - sk)} ds  to its stationary-phase limit
/// fhat_o(k) sqrt(pi/2)(1+i).  Evaluated after the exact substitution
/// s = 2 t sigma as 2 sqrt(t) int_k^b fhat_o(sigma) e^{i t (sigma-k)^2} d sigma.
struct StationaryPhaseRow {
    double t = 0.0;
    cplx value{0.0, 0.0};
    double error = 0.0;
};

inline std::vector<StationaryPhaseRow> stationary_phase_check(const BumpPacket& pk, double k,
                                                              const std::vector<double>& t_list) {
    if (!(k > pk.a && k < pk.b))
        throw std::invalid_argument("stationary_phase_check: k must lie inside (a,b)");
    const cplx limit = pk.profile(k) * std::sqrt(std::numbers::pi / 2.0) * cplx{1.0, 1.0};
    std::vector<StationaryPhaseRow> rows;
    rows.reserve(t_list.size());
    for (double t : t_list) {
        if (!(t > 0.0)) throw std::invalid_argument("stationary_phase_check: t must be positive");
        const auto integrand = [&](double sig) -> cplx {
            const double ph = t * (sig - k) * (sig - k);
            return pk.profile(sig) * cplx{std::cos(ph), std::sin(ph)};
        };
        const cplx val = 2.0 * std::sqrt(t) * integrate_adaptive(integrand, k, pk.b, 1e-10);
        rows.push_back({t, val, std::abs(val - limit)});
    }
    return rows;
}

struct Lemma1Entry {
    double t = 0.0, k = 0.0, x = 0.0;
    double lhs = 0.0;    // |oscillatory_tail|
    double bound = 0.0;  // sqrt(t) / (x - kt + sqrt(t))
    double ratio = 0.0;
};

struct Lemma1Scan {
    std::vector<Lemma1Entry> entries;
    std::vector<double> t_values;
    std::vector<double> fitted;  // max ratio per t
    double fitted_constant = 0.0;
    double stability = 0.0;  // max/min of the per-t constants
};

/// Scan of |(1/sqrt t) int_x^infty F(s/t) e^{i(s^2/2t - sk)} ds| against
/// C sqrt(t)/(x - kt + sqrt t) over x > kt.
inline Lemma1Scan lemma1_scan(const SmoothProfile& F, const std::vector<double>& t_list,
                              const std::vector<double>& k_list) {
    Lemma1Scan scan;
    scan.t_values = t_list;
    for (double t : t_list) {
        double fit = 0.0;
        for (double k : k_list) {
            if (!(k > 0.0)) throw std::invalid_argument("lemma1_scan: k must be positive");
            const double st = std::sqrt(t);
            for (double mult : {1.0, 2.0, 4.0, 8.0, 16.0, 32.0, 64.0}) {
                const double x = k * t + mult * st;
                if (x >= F.hi * t) break;
                Lemma1Entry e;
                e.t = t;
                e.k = k;
                e.x = x;
                e.lhs = std::abs(oscillatory_tail(F, t, k, x));
                e.bound = st / (x - k * t + st);
                e.ratio = e.lhs / e.bound;
                fit = std::max(fit, e.ratio);
                scan.entries.push_back(e);
            }
        }
        scan.fitted.push_back(fit);
    }
    double lo = 1e300, hi = 0.0;
    for (double c : scan.fitted) {
        lo = std::min(lo, c);
        hi = std::max(hi, c);
    }
    scan.fitted_constant = hi;
    scan.stability = (lo > 0.0) ? hi / lo : 0.0;
    return scan;
}

/// || P_{[-delta,delta]} U(t) f ||^2: bound-state overlaps with kappa^2 <= delta
/// plus the continuous spectral mass below E = delta.
inline double low_energy_mass(const BumpPacket& pk, const Potential& p, const SpectralData& sd,
                              const EigenfunctionSet& eigs, double t, double delta,
                              std::size_t threads = 0) {
    if (!(delta > sd.kgrid.k_min * sd.kgrid.k_min))
        throw std::invalid_argument("low_energy_mass: delta must exceed k_min^2 (resolvable energy)");
    const WavePacket ut = modified_free(pk, p, t);
    double mass = 0.0;
    for (const auto& bs : sd.bound)
        if (bs.kappa * bs.kappa <= delta) mass += std::norm(inner_product(bs.e, ut));
    // continuous part below sqrt(delta), on the set's grid
    const double k_top = std::sqrt(delta);
    std::vector<double> contrib(eigs.kgrid.m, 0.0);
    parallel_for(eigs.kgrid.m, threads, [&](std::size_t j) {
        const double k = eigs.kgrid.node(j);
        if (k > k_top) return;
        const auto& uj = eigs.u[j];
        cplx s{0.0, 0.0};
        for (std::size_t i = 0; i < uj.size(); ++i) s += uj[i] * ut.values[i] * p.grid.weight(i);
        contrib[j] = std::norm(s) * eigs.mu[j] * 2.0 * k * eigs.kgrid.weight(j);
    });
    for (double c : contrib) mass += c;
    return mass;
}

struct OverlapRow {
    double t = 0.0;
    std::size_t j = 0;
    double overlap = 0.0;  // |<U(t)f, e_j>|
};

inline std::vector<OverlapRow> bound_state_overlaps(const BumpPacket& pk, const Potential& p,
                                                    const SpectralData& sd,
                                                    const std::vector<double>& t_list) {
    std::vector<OverlapRow> rows;
    for (double t : t_list) {
        const WavePacket ut = modified_free(pk, p, t);
        for (std::size_t j = 0; j < sd.bound.size(); ++j)
            rows.push_back({t, j + 1, std::abs(inner_product(sd.bound[j].e, ut))});
    }
    return rows;
}

}  // namespace waveop
