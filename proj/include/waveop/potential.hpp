#pragma once

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "waveop/fft.hpp"
#include "waveop/grids.hpp"

namespace waveop {

enum class PotentialFamily { Zero, Bump, Cosine, Well };

inline std::string family_name(PotentialFamily f) {
    switch (f) {
        case PotentialFamily::Zero: return "zero";
        case PotentialFamily::Bump: return "bump";
        case PotentialFamily::Cosine: return "cosine";
        case PotentialFamily::Well: return "well";
    }
    return "?";
}

struct PotentialParams {
    double c = 0.0;      // amplitude (bump, cosine)
    double x0 = 0.0;     // bump center
    double w = 0.0;      // bump half-width
    double alpha = 0.0;  // cosine decay exponent
    double omega = 0.0;  // cosine frequency
    double v0 = 0.0;     // well depth
    double len = 0.0;    // well width
};

/// Real potential on a radial grid: node samples q_i, cumulative trapezoid
/// antiderivative Q(x) = int_0^x q, cumulative |q|, and the closed form for
/// off-node evaluation.
class Potential {
public:
    RadialGrid grid;
    std::vector<double> q;   // at nodes
    std::vector<double> Q;   // antiderivative at nodes (Q(0) = 0)
    PotentialFamily family = PotentialFamily::Zero;
    PotentialParams params;

    static Potential zero(const RadialGrid& g) {
        return Potential(g, PotentialFamily::Zero, PotentialParams{});
    }
    static Potential bump(const RadialGrid& g, double c, double x0, double w) {
        PotentialParams p;
        p.c = c; p.x0 = x0; p.w = w;
        return Potential(g, PotentialFamily::Bump, p);
    }
    static Potential cosine(const RadialGrid& g, double c, double alpha, double omega) {
        PotentialParams p;
        p.c = c; p.alpha = alpha; p.omega = omega;
        return Potential(g, PotentialFamily::Cosine, p);
    }
    static Potential well(const RadialGrid& g, double v0, double len) {
        PotentialParams p;
        p.v0 = v0; p.len = len;
        return Potential(g, PotentialFamily::Well, p);
    }

    // closed-form evaluation (used by the ODE integrator at half steps)
    double operator()(double x) const {
        switch (family) {
            case PotentialFamily::Zero: return 0.0;
            case PotentialFamily::Bump: {
                const double r = (x - params.x0) / params.w;
                if (!(std::abs(r) < 1.0)) return 0.0;
                return params.c * std::exp(-1.0 / (1.0 - r * r));
            }
            case PotentialFamily::Cosine:
                return params.c * std::pow(1.0 + x, -params.alpha) * std::cos(params.omega * x);
            case PotentialFamily::Well:
                return (x >= 0.0 && x <= params.len) ? -params.v0 : 0.0;
        }
        return 0.0;
    }

    double max_abs() const {
        double m = 0.0;
        for (double v : q) m = std::max(m, std::abs(v));
        return std::max(m, std::abs((*this)(0.0)));
    }

    // x beyond which the closed form is identically zero (0 = never)
    double support_end() const {
        switch (family) {
            case PotentialFamily::Zero: return 1e-12;
            case PotentialFamily::Bump: return params.x0 + params.w;
            case PotentialFamily::Well: return params.len;
            case PotentialFamily::Cosine: return 0.0;
        }
        return 0.0;
    }

    /// Q(x) by linear interpolation of the cumulative trapezoid values.
    double antiderivative(double x) const {
        if (!(x > 0.0 && x <= grid.x_max + 1e-12 * grid.x_max))
            throw std::invalid_argument("antiderivative: x outside (0, x_max]");
        const double h = grid.h;
        if (x <= h) return Q[0] * (x / h);
        std::size_t i = static_cast<std::size_t>(x / h);  // node index below (1-based node i at i*h)
        if (i >= grid.n) return Q[grid.n - 1];
        const double x_lo = h * static_cast<double>(i);
        const double frac = (x - x_lo) / h;
        return Q[i - 1] + frac * (Q[i] - Q[i - 1]);
    }

    /// (1/x) int_0^x |q(u)| du
    double cesaro_abs_average(double x) const {
        if (!(x > 0.0 && x <= grid.x_max + 1e-12 * grid.x_max))
            throw std::invalid_argument("cesaro_abs_average: x outside (0, x_max]");
        const double h = grid.h;
        double val;
        if (x <= h) {
            val = Qabs_[0] * (x / h);
        } else {
            std::size_t i = static_cast<std::size_t>(x / h);
            if (i >= grid.n) {
                val = Qabs_[grid.n - 1];
            } else {
                const double x_lo = h * static_cast<double>(i);
                val = Qabs_[i - 1] + (x - x_lo) / h * (Qabs_[i] - Qabs_[i - 1]);
            }
        }
        return val / x;
    }

private:
    std::vector<double> Qabs_;  // cumulative trapezoid of |q|

    Potential(const RadialGrid& g, PotentialFamily fam, PotentialParams p)
        : grid(g), family(fam), params(p) {
        q.resize(g.n);
        Q.resize(g.n);
        Qabs_.resize(g.n);
        for (std::size_t i = 0; i < g.n; ++i) q[i] = (*this)(g.node(i));
        const double q0 = (*this)(0.0);
        double acc = 0.5 * g.h * (q0 + q[0]);
        double acca = 0.5 * g.h * (std::abs(q0) + std::abs(q[0]));
        Q[0] = acc;
        Qabs_[0] = acca;
        for (std::size_t i = 1; i < g.n; ++i) {
            acc += 0.5 * g.h * (q[i - 1] + q[i]);
            acca += 0.5 * g.h * (std::abs(q[i - 1]) + std::abs(q[i]));
            Q[i] = acc;
            Qabs_[i] = acca;
        }
    }
};

struct AdmissibilityReport {
    double value = 0.0;        // int_0^{x_max} q^2 ln^2(x+2) dx
    bool tail_convergent = true;
    double tail_slope = 0.0;   // fitted log2 slope of octave contributions
};

/// int q^2 ln^2(x+2) plus a power-law verdict on the tail.  The verdict fits
/// q^2 ~ x^{-p} from the last four octave contributions with the known ln^2
/// factor divided out (it would otherwise bias the finite-scale slope), and
/// declares the tail convergent when the fitted log2 slope is below -0.25,
/// i.e. p comfortably above 1.
inline AdmissibilityReport admissibility_norm(const Potential& p) {
    const auto& g = p.grid;
    AdmissibilityReport rep;
    auto integrand = [&](double x, double qv) {
        const double l = std::log(x + 2.0);
        return qv * qv * l * l;
    };
    std::vector<double> cum(g.n);
    double q0 = p(0.0);
    double acc = 0.5 * g.h * (integrand(0.0, q0) + integrand(g.node(0), p.q[0]));
    cum[0] = acc;
    for (std::size_t i = 1; i < g.n; ++i) {
        acc += 0.5 * g.h * (integrand(g.node(i - 1), p.q[i - 1]) + integrand(g.node(i), p.q[i]));
        cum[i] = acc;
    }
    rep.value = cum[g.n - 1];

    auto cum_at = [&](double x) {
        std::size_t i = std::min<std::size_t>(g.n - 1, static_cast<std::size_t>(x / g.h));
        return cum[i == 0 ? 0 : i - 1];
    };
    // octave contributions D_j over [x_max/2^{j+1}, x_max/2^j], j = 0..3,
    // normalized by ln^2 at the octave's geometric midpoint
    double D[4];
    bool all_tiny = true;
    for (int j = 0; j < 4; ++j) {
        const double hi = g.x_max / std::pow(2.0, j);
        const double lo = 0.5 * hi;
        const double lmid = std::log(std::sqrt(lo * hi) + 2.0);
        D[j] = std::max(0.0, cum_at(hi) - cum_at(lo)) / (lmid * lmid);
        if (D[j] > 1e-14 * (1.0 + rep.value)) all_tiny = false;
    }
    if (all_tiny) {
        rep.tail_convergent = true;
        rep.tail_slope = -99.0;
        return rep;
    }
    // least-squares slope of log2 D_j against octave index (scale halves per j)
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    int cnt = 0;
    for (int j = 0; j < 4; ++j) {
        if (D[j] <= 0.0) continue;
        const double xj = -static_cast<double>(j);  // log2(scale) decreases with j
        const double yj = std::log2(D[j]);
        sx += xj; sy += yj; sxx += xj * xj; sxy += xj * yj;
        ++cnt;
    }
    if (cnt < 2) {
        rep.tail_convergent = true;
        rep.tail_slope = -99.0;
        return rep;
    }
    rep.tail_slope = (static_cast<double>(cnt) * sxy - sx * sy) /
                     (static_cast<double>(cnt) * sxx - sx * sx);
    rep.tail_convergent = rep.tail_slope < -0.25;
    return rep;
}

struct FrequencySplit {
    std::vector<double> q1;  // low-frequency part, |omega| < 1
    std::vector<double> q2;  // q - q1
    std::vector<double> v;   // v(x) = -int_x^{x_max} q2, so q2 = v' and v(x_max) = 0
};

/// Sharp Fourier cutoff at |omega| = 1 of the even extension of q, with a
/// cosine taper over the last 5% of the grid to suppress wrap-around.
inline FrequencySplit split_low_high(const Potential& p) {
    const auto& g = p.grid;
    const std::size_t n = g.n;
    const std::size_t M = 2 * n;
    const double taper_start = 0.95 * g.x_max;
    auto tapered = [&](std::size_t i) {
        const double x = g.node(i);
        double w = 1.0;
        if (x > taper_start) {
            const double s = (x - taper_start) / (g.x_max - taper_start);
            const double cw = std::cos(0.5 * std::numbers::pi * s);
            w = cw * cw;
        }
        return p.q[i] * w;
    };
    // even array over [-x_max, x_max): index j <-> x = (j - n) h
    std::vector<cplx> a(M, cplx{0.0, 0.0});
    const double q0 = p(0.0);
    for (std::size_t j = 0; j < M; ++j) {
        const std::ptrdiff_t off = static_cast<std::ptrdiff_t>(j) - static_cast<std::ptrdiff_t>(n);
        const std::size_t ai = static_cast<std::size_t>(off < 0 ? -off : off);
        a[j] = (ai == 0) ? cplx{q0, 0.0} : cplx{tapered(ai - 1), 0.0};
    }
    detail::fft_any(a, -1);
    // frequencies omega_m = pi m / x_max (aliased for m > n)
    const double dw = std::numbers::pi / g.x_max;
    for (std::size_t mIdx = 0; mIdx < M; ++mIdx) {
        const std::size_t mm = (mIdx <= n) ? mIdx : M - mIdx;
        if (!(dw * static_cast<double>(mm) < 1.0)) a[mIdx] = cplx{0.0, 0.0};
    }
    detail::fft_any(a, +1);
    const double invM = 1.0 / static_cast<double>(M);

    FrequencySplit fs;
    fs.q1.resize(n);
    fs.q2.resize(n);
    fs.v.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        // node x_i = (i+1) h <-> array index n + i + 1, wrapping x = x_max to 0
        const std::size_t j = (n + i + 1) % M;
        fs.q1[i] = a[j].real() * invM;
        fs.q2[i] = p.q[i] - fs.q1[i];
    }
    fs.v[n - 1] = 0.0;
    for (std::size_t i = n - 1; i > 0; --i)
        fs.v[i - 1] = fs.v[i] - 0.5 * g.h * (fs.q2[i - 1] + fs.q2[i]);
    return fs;
}

}  // namespace waveop
