#pragma once

#include <cmath>
#include <complex>
#include <functional>
#include <stdexcept>

#include "waveop/grids.hpp"
#include "waveop/transforms.hpp"

namespace waveop {

namespace detail {

template <class F>
cplx adaptive_simpson_rec(const F& f, double a, double b, cplx fa, cplx fm, cplx fb,
                          cplx whole, double tol, int depth) {
    const double m = 0.5 * (a + b);
    const cplx flm = f(0.5 * (a + m));
    const cplx frm = f(0.5 * (m + b));
    const cplx left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    const cplx right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    const cplx delta = left + right - whole;
    if (depth <= 0 || std::abs(delta) <= 15.0 * tol)
        return left + right + delta / 15.0;
    return adaptive_simpson_rec(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
           adaptive_simpson_rec(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}

}  // namespace detail

/// Adaptive Simpson quadrature for complex integrands.
template <class F>
cplx integrate_adaptive(const F& f, double a, double b, double tol = 1e-9, int max_depth = 40) {
    if (a == b) return cplx{0.0, 0.0};
    const cplx fa = f(a), fb = f(b), fm = f(0.5 * (a + b));
    const cplx whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    return detail::adaptive_simpson_rec(f, a, b, fa, fm, fb, whole, tol, max_depth);
}

/// A smooth compactly supported momentum profile used by the oscillatory
/// integral checks (real-valued).
struct SmoothProfile {
    std::function<double(double)> value;
    double lo = 0.0;
    double hi = 0.0;
};

inline SmoothProfile bump_smooth_profile(double a, double b, double amp = 1.0) {
    return SmoothProfile{[a, b, amp](double s) { return amp * bump_value(a, b, s); }, a, b};
}

/// (1/sqrt(t)) int_x^{hi*t} F(s/t) exp(i (s^2/(2t) - s k)) ds.
/// Truncated at the upper edge of supp F(./t); the integrand vanishes
/// identically beyond it.  Requires x > k t (no stationary point inside).
inline cplx oscillatory_tail(const SmoothProfile& F, double t, double k, double x,
                             double tol = 1e-7) {
    if (!(t > 1.0)) throw std::invalid_argument("oscillatory_tail: requires t > 1");
    if (!(k > 0.0)) throw std::invalid_argument("oscillatory_tail: requires k > 0");
    if (!(x > k * t)) throw std::invalid_argument("oscillatory_tail: requires x > k t");
    const double s_hi = F.hi * t;
    if (x >= s_hi) return cplx{0.0, 0.0};
    const auto integrand = [&](double s) -> cplx {
        const double ph = s * s / (2.0 * t) - s * k;
        return F.value(s / t) * cplx{std::cos(ph), std::sin(ph)};
    };
    return integrate_adaptive(integrand, x, s_hi, tol) / std::sqrt(t);
}

/// int_x^infinity e^{i u^2} du evaluated on the rotated ray u = x + r e^{i pi/4}:
/// e^{i pi/4} e^{i x^2} int_0^inf e^{-r^2} e^{i sqrt(2) x r (i+1)/sqrt(2)...} dr,
/// concretely  integrand(r) = exp(-r^2 - sqrt(2) x r) * exp(i(x^2 + sqrt(2) x r)).
/// Non-oscillatory and rapidly decaying; plain quadrature suffices.
inline cplx fresnel_tail(double x) {
    if (!(x >= 0.0)) throw std::invalid_argument("fresnel_tail: requires x >= 0");
    const double s2 = std::numbers::sqrt2;
    const auto integrand = [&](double r) -> cplx {
        const double mod = std::exp(-r * r - s2 * x * r);
        const double ph = x * x + s2 * x * r;
        return mod * cplx{std::cos(ph), std::sin(ph)};
    };
    const double rmax = 10.0;  // e^{-100} tail
    const cplx rot{std::cos(std::numbers::pi / 4.0), std::sin(std::numbers::pi / 4.0)};
    return rot * integrate_adaptive(integrand, 0.0, rmax, 1e-12);
}

}  // namespace waveop
