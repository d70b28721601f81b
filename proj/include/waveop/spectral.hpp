#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <stdexcept>
#include <vector>

#include "waveop/grids.hpp"
#include "waveop/parallel.hpp"
#include "waveop/potential.hpp"

namespace waveop {

/// Regular solution of -u'' + q u = k^2 u, u(0) = 0, u'(0) = 1, sampled on
/// the potential's grid.
struct GeneralizedEigenfunction {
    double k = 0.0;
    std::vector<double> u;
    std::vector<double> du;
};

namespace detail {

// q sampled at nodes and substep midpoints: values at x = j * (h/(2s)),
// j = 0 .. 2 n s, where s substeps per grid cell
struct HalfStepTable {
    std::vector<double> v;
    std::size_t substeps = 1;
};

inline HalfStepTable half_step_table(const Potential& p, std::size_t substeps) {
    HalfStepTable t;
    t.substeps = substeps;
    const std::size_t total = 2 * p.grid.n * substeps + 1;
    t.v.resize(total);
    const double dx = p.grid.h / (2.0 * static_cast<double>(substeps));
    for (std::size_t j = 0; j < total; ++j) t.v[j] = p(dx * static_cast<double>(j));
    return t;
}

inline std::size_t substeps_for(const Potential& p, double k) {
    // fixed step <= min(h, 0.1/k)
    const double target = std::min(p.grid.h, 0.1 / std::max(k, 1e-12));
    return static_cast<std::size_t>(std::ceil(p.grid.h / target - 1e-12));
}

// One RK4 march of u'' = (q - E) u from x = 0 with u = 0, u' = 1.
// Calls visit(i, u, du) after completing each grid node i (0-based).
template <class Visit>
void march_regular(const Potential& p, const HalfStepTable& qt, double E, Visit&& visit) {
    const std::size_t n = p.grid.n;
    const std::size_t s = qt.substeps;
    const double hh = p.grid.h / static_cast<double>(s);
    double u = 0.0, v = 1.0;
    std::size_t base = 0;  // index of current x in the half-step table
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t r = 0; r < s; ++r) {
            const double qa = qt.v[base];
            const double qb = qt.v[base + 1];
            const double qc = qt.v[base + 2];
            const double k1u = v, k1v = (qa - E) * u;
            const double k2u = v + 0.5 * hh * k1v, k2v = (qb - E) * (u + 0.5 * hh * k1u);
            const double k3u = v + 0.5 * hh * k2v, k3v = (qb - E) * (u + 0.5 * hh * k2u);
            const double k4u = v + hh * k3v, k4v = (qc - E) * (u + hh * k3u);
            u += hh / 6.0 * (k1u + 2.0 * k2u + 2.0 * k3u + k4u);
            v += hh / 6.0 * (k1v + 2.0 * k2v + 2.0 * k3v + k4v);
            base += 2;
        }
        if (!(std::abs(u) < 1e250) || !std::isfinite(u) || !std::isfinite(v))
            throw QualityError("regular solution overflow: energy below inf q; "
                               "use the bound-state search instead");
        visit(i, u, v);
    }
}

}  // namespace detail

inline GeneralizedEigenfunction solve_regular(const Potential& p, double k) {
    if (!(k > 0.0)) throw std::invalid_argument("solve_regular: requires k > 0");
    GeneralizedEigenfunction eig;
    eig.k = k;
    eig.u.resize(p.grid.n);
    eig.du.resize(p.grid.n);
    const auto qt = detail::half_step_table(p, detail::substeps_for(p, k));
    detail::march_regular(p, qt, k * k, [&](std::size_t i, double u, double v) {
        eig.u[i] = u;
        eig.du[i] = v;
    });
    return eig;
}

/// phi(0,k,x) = Q(x)/(2k)
inline double modified_phase(const Potential& p, double k, double x) {
    if (k == 0.0) throw std::invalid_argument("modified_phase: k must be nonzero");
    return p.antiderivative(x) / (2.0 * k);
}

/// Modified Jost amplitude along the grid:
///   jm(k,x) = (u'(x) - i k u(x)) e^{+i(kx - phi(x))},  phi = Q/(2k).
/// u is recovered exactly from jm via
///   u = (1/(2ik)) ( conj(jm) e^{i(kx-phi)} - jm e^{-i(kx-phi)} ).
struct ModifiedJost {
    double k = 0.0;
    std::vector<double> phi;
    std::vector<cplx> jm;
};

inline ModifiedJost extract_jost(const GeneralizedEigenfunction& eig, const Potential& p) {
    ModifiedJost mj;
    mj.k = eig.k;
    const std::size_t n = p.grid.n;
    mj.phi.resize(n);
    mj.jm.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double x = p.grid.node(i);
        mj.phi[i] = p.Q[i] / (2.0 * eig.k);
        const double th = eig.k * x - mj.phi[i];
        mj.jm[i] = cplx{eig.du[i], -eig.k * eig.u[i]} * cplx{std::cos(th), std::sin(th)};
    }
    return mj;
}

struct JostLimit {
    cplx value{0.0, 0.0};
    double residual = 0.0;  // rms oscillation about the mean, relative
    bool resolved = false;
};

namespace detail {

// Tail window over the last quarter of [0, x_max], trimmed to a whole number
// of pi/k periods to damp the residual e^{2ikx} oscillation.
inline std::pair<std::size_t, std::size_t> tail_window(const RadialGrid& g, double k) {
    const double quarter = 0.25 * g.x_max;
    const double period = std::numbers::pi / k;
    const double whole = std::floor(quarter / period) * period;
    const double start = g.x_max - (whole > 0.0 ? whole : quarter);
    std::size_t i0 = static_cast<std::size_t>(std::ceil(start / g.h));
    if (i0 < 1) i0 = 1;
    return {i0 - 1, g.n};  // node index range [i0-1, n)
}

}  // namespace detail

inline JostLimit jost_limit(const ModifiedJost& mj, const RadialGrid& g) {
    JostLimit out;
    auto [i0, i1] = detail::tail_window(g, mj.k);
    cplx mean{0.0, 0.0};
    for (std::size_t i = i0; i < i1; ++i) mean += mj.jm[i];
    mean /= static_cast<double>(i1 - i0);
    double dev = 0.0;
    for (std::size_t i = i0; i < i1; ++i) dev += std::norm(mj.jm[i] - mean);
    dev = std::sqrt(dev / static_cast<double>(i1 - i0));
    out.value = mean;
    out.residual = dev / std::abs(mean);
    out.resolved = out.residual <= 0.10;
    return out;
}

/// Bound state at energy -kappa^2 with unit-norm eigenfunction.
struct BoundState {
    double kappa = 0.0;
    WavePacket e;
};

namespace detail {

struct ShootResult {
    double mismatch = 0.0;  // u'(xR) + kappa u(xR), jointly rescaled
    int nodes = 0;
};

// march u'' = (q - E) u to x_match with periodic rescaling (sign data only)
inline ShootResult shoot(const Potential& p, const detail::HalfStepTable& qt, double E,
                         double x_match) {
    const std::size_t n_cells = std::min<std::size_t>(
        p.grid.n, static_cast<std::size_t>(std::ceil(x_match / p.grid.h)));
    const double hh = p.grid.h;
    double u = 0.0, v = 1.0, prev = 0.0;
    int nodes = 0;
    std::size_t base = 0;
    for (std::size_t i = 0; i < n_cells; ++i) {
        const double qa = qt.v[base], qb = qt.v[base + 1], qc = qt.v[base + 2];
        const double k1u = v, k1v = (qa - E) * u;
        const double k2u = v + 0.5 * hh * k1v, k2v = (qb - E) * (u + 0.5 * hh * k1u);
        const double k3u = v + 0.5 * hh * k2v, k3v = (qb - E) * (u + 0.5 * hh * k2u);
        const double k4u = v + hh * k3v, k4v = (qc - E) * (u + hh * k3u);
        u += hh / 6.0 * (k1u + 2.0 * k2u + 2.0 * k3u + k4u);
        v += hh / 6.0 * (k1v + 2.0 * k2v + 2.0 * k3v + k4v);
        base += 2;
        if (prev * u < 0.0) ++nodes;
        if (u != 0.0) prev = u;
        const double big = std::max(std::abs(u), std::abs(v));
        if (big > 1e120) {
            u /= big;
            v /= big;
            prev = u;
        }
    }
    const double kap = std::sqrt(std::max(-E, 0.0));
    return ShootResult{v + kap * u, nodes};
}

}  // namespace detail

/// Shooting + bisection on E < 0.  The decay-mismatch u' + kappa u is driven
/// to zero at a matching point past the potential's effective support;
/// eigenfunctions get the analytic e^{-kappa x} tail beyond it and unit norm.
inline std::vector<BoundState> find_bound_states(const Potential& p) {
    std::vector<BoundState> out;
    double qmin = p(0.0);
    for (double v : p.q) qmin = std::min(qmin, v);
    if (qmin >= 0.0) return out;

    const auto qt = detail::half_step_table(p, 1);
    const double supp = (p.support_end() > 0.0) ? p.support_end() : 0.25 * p.grid.x_max;
    auto x_match_for = [&](double E) {
        const double kap = std::sqrt(std::max(-E, 1e-8));
        return std::min(p.grid.x_max, supp + 35.0 / kap);
    };
    auto mism = [&](double E) { return detail::shoot(p, qt, E, x_match_for(E)).mismatch; };

    const double E_lo = qmin * (1.0 + 1e-9) - 1e-9;
    const double E_hi = -1e-6;
    const int NE = 600;
    double prevE = E_lo, prevD = mism(E_lo);
    std::vector<double> roots;
    for (int j = 1; j <= NE; ++j) {
        const double E = E_lo + (E_hi - E_lo) * static_cast<double>(j) / NE;
        const double D = mism(E);
        if (prevD == 0.0) roots.push_back(prevE);
        else if (prevD * D < 0.0) {
            double lo = prevE, hi = E, flo = prevD;
            for (int it = 0; it < 80; ++it) {
                const double mid = 0.5 * (lo + hi);
                const double fm = mism(mid);
                if (flo * fm <= 0.0) hi = mid;
                else { lo = mid; flo = fm; }
            }
            roots.push_back(0.5 * (lo + hi));
        }
        prevE = E;
        prevD = D;
    }
    std::sort(roots.begin(), roots.end());
    roots.erase(std::unique(roots.begin(), roots.end(),
                            [](double a, double b) { return std::abs(a - b) < 1e-9; }),
                roots.end());

    for (double E : roots) {
        const double kap = std::sqrt(-E);
        // assemble the eigenfunction by marching only to kap*(x-supp) ~ 15:
        // past that the roundoff-seeded growing mode e^{+kap x} overtakes the
        // decaying solution, so the analytic tail takes over there
        const double xm = std::min(p.grid.x_max, supp + 15.0 / kap);
        const std::size_t n_cells = std::min<std::size_t>(
            p.grid.n, static_cast<std::size_t>(std::ceil(xm / p.grid.h)));
        WavePacket e(p.grid);
        double u = 0.0, v = 1.0;
        const double hh = p.grid.h;
        std::size_t base = 0;
        for (std::size_t i = 0; i < n_cells; ++i) {
            const double qa = qt.v[base], qb = qt.v[base + 1], qc = qt.v[base + 2];
            const double k1u = v, k1v = (qa - E) * u;
            const double k2u = v + 0.5 * hh * k1v, k2v = (qb - E) * (u + 0.5 * hh * k1u);
            const double k3u = v + 0.5 * hh * k2v, k3v = (qb - E) * (u + 0.5 * hh * k2u);
            const double k4u = v + hh * k3v, k4v = (qc - E) * (u + hh * k3u);
            u += hh / 6.0 * (k1u + 2.0 * k2u + 2.0 * k3u + k4u);
            v += hh / 6.0 * (k1v + 2.0 * k2v + 2.0 * k3v + k4v);
            base += 2;
            e.values[i] = cplx{u, 0.0};
        }
        const double u_m = e.values[n_cells - 1].real();
        const double x_m = p.grid.node(n_cells - 1);
        for (std::size_t i = n_cells; i < p.grid.n; ++i)
            e.values[i] = cplx{u_m * std::exp(-kap * (p.grid.node(i) - x_m)), 0.0};
        // grid norm plus the analytic tail beyond x_max
        double nrm2 = e.norm_sq();
        const double u_end = e.values[p.grid.n - 1].real();
        nrm2 += u_end * u_end / (2.0 * kap);
        const double scale = 1.0 / std::sqrt(nrm2);
        for (auto& z : e.values) z *= scale;
        out.push_back(BoundState{kap, std::move(e)});
    }
    return out;
}

/// Continuous spectral density and bound data on a momentum grid.
/// Theta (the a.c. support) is taken to be all of R+; no singular part.
struct SpectralData {
    MomentumGrid kgrid;
    std::vector<double> mu;
    std::vector<cplx> jm;
    std::vector<double> jm_residual;
    std::vector<BoundState> bound;
    bool theta_full = true;
};

/// Precomputed regular eigenfunctions on a momentum grid.  u(x,k) is stored
/// on the first `x_keep` nodes (synthesis and projections are only valid for
/// packets carried by that range); tail statistics always use the full march.
struct EigenfunctionSet {
    MomentumGrid kgrid;
    RadialGrid xgrid;
    std::size_t x_keep = 0;
    std::vector<std::vector<double>> u;  // [k][node], node < x_keep
    std::vector<cplx> jm;
    std::vector<double> jm_residual;
    std::vector<double> mu;  // k/(pi |jm|^2)

    static EigenfunctionSet build(const Potential& p, const MomentumGrid& kg,
                                  std::size_t x_keep, std::size_t threads = 0) {
        EigenfunctionSet set;
        set.kgrid = kg;
        set.xgrid = p.grid;
        set.x_keep = std::min(x_keep, p.grid.n);
        set.u.resize(kg.m);
        set.jm.resize(kg.m);
        set.jm_residual.resize(kg.m);
        set.mu.resize(kg.m);
        // substep count is k-dependent in general; the table is shared when
        // uniform (the common case k_max <= 0.1/h)
        const std::size_t s_all = detail::substeps_for(p, kg.k_max);
        const auto qt = detail::half_step_table(p, s_all);
        parallel_for(kg.m, threads, [&](std::size_t j) {
            const double k = kg.node(j);
            auto [i0, i1] = detail::tail_window(p.grid, k);
            std::vector<double>& uj = set.u[j];
            uj.assign(set.x_keep, 0.0);
            cplx jm_sum{0.0, 0.0};
            double dev_sum = 0.0;
            std::vector<cplx> tail;
            tail.reserve(i1 - i0);
            detail::march_regular(p, qt, k * k, [&](std::size_t i, double u, double v) {
                if (i < set.x_keep) uj[i] = u;
                if (i >= i0) {
                    const double x = p.grid.node(i);
                    const double th = k * x - p.Q[i] / (2.0 * k);
                    const cplx jm = cplx{v, -k * u} * cplx{std::cos(th), std::sin(th)};
                    tail.push_back(jm);
                    jm_sum += jm;
                }
            });
            const cplx mean = jm_sum / static_cast<double>(tail.size());
            for (const cplx& z : tail) dev_sum += std::norm(z - mean);
            set.jm[j] = mean;
            set.jm_residual[j] = std::sqrt(dev_sum / static_cast<double>(tail.size())) / std::abs(mean);
            set.mu[j] = k / (std::numbers::pi * std::norm(mean));
        });
        return set;
    }
};

inline SpectralData make_spectral_data(const Potential& p, const EigenfunctionSet& set,
                                       bool with_bound = true) {
    SpectralData sd;
    sd.kgrid = set.kgrid;
    sd.mu = set.mu;
    sd.jm = set.jm;
    sd.jm_residual = set.jm_residual;
    if (with_bound) sd.bound = find_bound_states(p);
    return sd;
}

/// mu(k^2) = k / (pi |j_m(k)|^2); the free case gives sqrt(E)/pi.
inline double spectral_density(const Potential& p, double k) {
    const auto eig = solve_regular(p, k);
    const auto mj = extract_jost(eig, p);
    const auto lim = jost_limit(mj, p.grid);
    if (!lim.resolved)
        throw QualityError("spectral_density: j_m limit unresolved at k = " + std::to_string(k) +
                           " (residual " + std::to_string(lim.residual) + "); enlarge x_max");
    return k / (std::numbers::pi * std::norm(lim.value));
}

struct GeneralizedTransform {
    MomentumProfile breve;
    std::vector<cplx> bound_coeffs;
};

/// breve f(k) = int_0^inf u(x,k) f(x) dx plus bound-state coefficients
/// c_j = <f, e_j>.
inline GeneralizedTransform generalized_transform(const WavePacket& f, const SpectralData& sd,
                                                  const EigenfunctionSet& eigs,
                                                  std::size_t threads = 0) {
    if (!(f.grid == eigs.xgrid))
        throw std::invalid_argument("generalized_transform: grid mismatch");
    if (eigs.x_keep < f.grid.n) {
        double tail = 0.0;
        for (std::size_t i = eigs.x_keep; i < f.grid.n; ++i)
            tail += std::norm(f.values[i]) * f.grid.weight(i);
        if (tail > 1e-10 * f.norm_sq())
            throw QualityError("generalized_transform: packet mass beyond the stored "
                               "eigenfunction range");
    }
    GeneralizedTransform out;
    out.breve = MomentumProfile(sd.kgrid);
    parallel_for(sd.kgrid.m, threads, [&](std::size_t j) {
        const auto& uj = eigs.u[j];
        cplx s{0.0, 0.0};
        for (std::size_t i = 0; i < uj.size(); ++i)
            s += uj[i] * f.values[i] * f.grid.weight(i);
        out.breve.values[j] = s;
    });
    out.bound_coeffs.reserve(sd.bound.size());
    for (const auto& bs : sd.bound) out.bound_coeffs.push_back(inner_product(bs.e, f));
    return out;
}

/// f(x) = sum_j c_j e_j(x) + int u(x,k) g(k) mu(E) dE  with dE = 2k dk.
inline WavePacket inverse_transform(const MomentumProfile& g, const std::vector<cplx>& coeffs,
                                    const SpectralData& sd, const EigenfunctionSet& eigs,
                                    std::size_t threads = 0) {
    if (!(g.grid == sd.kgrid) || !(g.grid == eigs.kgrid))
        throw std::invalid_argument("inverse_transform: momentum grid mismatch");
    if (coeffs.size() != sd.bound.size())
        throw std::invalid_argument("inverse_transform: bound coefficient count mismatch");
    WavePacket f(eigs.xgrid);
    std::vector<cplx> w(g.grid.m);
    for (std::size_t j = 0; j < g.grid.m; ++j) {
        const double k = g.grid.node(j);
        w[j] = g.values[j] * (sd.mu[j] * 2.0 * k * g.grid.weight(j));
    }
    const std::size_t nkeep = eigs.x_keep;
    parallel_for_blocks(nkeep, threads, [&](std::size_t lo, std::size_t hi) {
        for (std::size_t j = 0; j < g.grid.m; ++j) {
            const auto& uj = eigs.u[j];
            const cplx wj = w[j];
            for (std::size_t i = lo; i < hi; ++i) f.values[i] += wj * uj[i];
        }
    });
    for (std::size_t jb = 0; jb < coeffs.size(); ++jb) {
        const auto& e = sd.bound[jb].e;
        for (std::size_t i = 0; i < f.values.size(); ++i) f.values[i] += coeffs[jb] * e.values[i];
    }
    return f;
}

/// Parseval total sum |c_j|^2 + int |breve f|^2 mu dE against which the
/// spectral conventions are certified.
inline double parseval_total(const GeneralizedTransform& tr, const SpectralData& sd) {
    double s = 0.0;
    for (const cplx& c : tr.bound_coeffs) s += std::norm(c);
    for (std::size_t j = 0; j < sd.kgrid.m; ++j) {
        const double k = sd.kgrid.node(j);
        s += std::norm(tr.breve.values[j]) * sd.mu[j] * 2.0 * k * sd.kgrid.weight(j);
    }
    return s;
}

}  // namespace waveop
