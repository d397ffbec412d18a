#pragma once

// Critical numbers k0: the planar sqrt(n) ln n law and its two-term form, the
// one-dimensional 4 c^2 n^(2/3) law, the general-exponent power law, the
// kappa = 0 numeric fixed point, and the flicker-noise critical energy.

#include <cmath>
#include <string>

#include "parastat/common.hpp"
#include "parastat/quadrature.hpp"

namespace parastat::thresholds {

struct ThresholdResult {
    enum class Method { erdos_two_term, leading_order, d1_closed, general_alpha, numeric_fixed_point };
    double k0 = 0.0;
    Method method = Method::leading_order;
    double alpha = 1.0;
    double n = 0.0;
    std::string note; // non-empty when a degraded-regime warning applies
};

// c of the two-term law and its correction coefficient
inline double erdos_c() { return 2.0 * M_PI / std::sqrt(6.0); }
inline double erdos_alpha_corr() { return -2.0 * std::log(erdos_c() / 2.0); }

// Leading law: k0 = (1/2) sqrt(n / (pi^2/6)) ln n = (sqrt(6)/(2 pi)) sqrt(n) ln n.
inline ThresholdResult k0_leading(double n) {
    if (!(n >= 2.0)) throw OutOfRange("k0_leading: n >= 2 required");
    ThresholdResult r;
    r.k0 = 0.5 * std::sqrt(n / (M_PI * M_PI / 6.0)) * std::log(n);
    r.method = ThresholdResult::Method::leading_order;
    r.n = n;
    return r;
}

// Two-term law: k0 = c^-1 sqrt(n) (ln n - 2 ln(c/2)) = c^-1 sqrt(n) ln(4n/c^2),
// c = 2 pi / sqrt(6). The correction coefficient is alpha = -2 ln(c/2); writing
// the bracket as ln n + alpha makes the first term carry the full ln n, which
// is the form that tracks the exact argmax of p_k(n).
inline ThresholdResult k0_erdos(double n) {
    if (!(n >= 2.0)) throw OutOfRange("k0_erdos: n >= 2 required");
    ThresholdResult r;
    r.k0 = (1.0 / erdos_c()) * std::sqrt(n) * (std::log(n) + erdos_alpha_corr());
    r.method = ThresholdResult::Method::erdos_two_term;
    r.n = n;
    return r;
}

// Inverse temperature of the one-dimensional system, b = (2n)^(-2/3) I^(-2/3)
// with I = int sqrt(xi) d xi / (e^xi - 1). The printed chain also contains the
// form without the factor 2; `half_factor` selects between them (default keeps
// the rightmost printed form b^{-3/2} I, i.e. no factor 2).
inline double b_d1(double n, bool half_factor = false) {
    double I = 2.0 * quad::bose_integral(1.0, 0.5).value; // Gamma(3/2) zeta(3/2)
    double nn = half_factor ? 2.0 * n : n;
    return std::pow(I / nn, 2.0 / 3.0);
}

// d = 1 closed form: k0 = 4 c^2 n^(2/3).
inline ThresholdResult k0_d1(double n) {
    if (!(n >= 2.0)) throw OutOfRange("k0_d1: n >= 2 required");
    double c = quad::c_one_dim().value;
    ThresholdResult r;
    r.k0 = 4.0 * c * c * std::pow(n, 2.0 / 3.0);
    r.method = ThresholdResult::Method::d1_closed;
    r.alpha = 0.5;
    r.n = n;
    return r;
}

// Cross-check for the d = 1 threshold: solve the quadratic in x = sqrt(k0)
// coming from k0 sqrt(b) = c~ (1 - sqrt(k0)), c~ the (negative) first factor.
inline double k0_d1_quadratic(double n, bool half_factor = false) {
    double ct = quad::c_one_dim_factor1();
    double b = b_d1(n, half_factor);
    double sb = std::sqrt(b);
    double disc = ct * ct + 4.0 * sb * ct;
    if (disc < 0.0) throw NoConvergence("k0_d1_quadratic: negative discriminant");
    double x = (-ct + std::sqrt(disc)) / (2.0 * sb);
    return x * x;
}

// General 0 < alpha < 1: k0 = c^(1/alpha) n^(1/(1+alpha)) I^(-1/(1+alpha)),
// c = regularized_c(alpha), I = bose_integral(1, alpha). n may be non-integer.
inline ThresholdResult k0_general(double n, double alpha) {
    if (!(alpha > 0.0) || !(alpha < 1.0))
        throw DivergentIntegral("k0_general: requires 0 < alpha < 1");
    if (!(n >= 2.0)) throw OutOfRange("k0_general: n >= 2 required");
    double c = quad::regularized_c(alpha).value;
    double I = quad::bose_integral(1.0, alpha).value;
    ThresholdResult r;
    r.k0 = std::pow(c, 1.0 / alpha) * std::pow(n, 1.0 / (1.0 + alpha)) *
           std::pow(I, -1.0 / (1.0 + alpha));
    r.method = ThresholdResult::Method::general_alpha;
    r.alpha = alpha;
    r.n = n;
    if (alpha > 0.95)
        r.note = "alpha close to 1: c(alpha) grows without bound, formula degrades toward the planar log law";
    return r;
}

// kappa = 0 fixed point k0 = b^-alpha J(k0), J(k) = c(alpha)(k^{1-alpha} - 1)
// for alpha < 1 and ln k at alpha = 1, with b from the kappa = 0 energy relation.
inline ThresholdResult k0_numeric(double n, double alpha) {
    if (!(alpha > 0.0) || alpha > 1.0)
        throw DivergentIntegral("k0_numeric: requires 0 < alpha <= 1");
    if (!(n >= 100.0)) throw OutOfRange("k0_numeric: n >= 100 (asymptotic regime)");
    double I = quad::bose_integral(1.0, alpha).value;
    double b = std::pow(I / n, 1.0 / (1.0 + alpha));
    double ba = std::pow(b, alpha);
    auto fixed_point_gap = [&](double k) {
        double J = (std::fabs(alpha - 1.0) < 1e-12)
                       ? std::log(k)
                       : quad::regularized_c_closed(alpha) * (std::pow(k, 1.0 - alpha) - 1.0);
        return J / ba - k;
    };
    double k0 = find_root(fixed_point_gap, 2.0, n, 1e-10);
    double resid = std::fabs(fixed_point_gap(k0)) / k0;
    if (resid > 1e-8) throw NoConvergence("k0_numeric: fixed-point residual too large");
    ThresholdResult r;
    r.k0 = k0;
    r.method = ThresholdResult::Method::numeric_fixed_point;
    r.alpha = alpha;
    r.n = n;
    return r;
}

struct FlickerCritical {
    double gamma = 0.0;     // 1/2 - alpha/4
    double beta = 0.0;      // from the kappa = 0 energy relation
    double e_s = 0.0;       // pi^2 energy / s^2
    double e_s_crit = 0.0;  // pi^2 c0 c^(-1/gamma) beta^(-gamma)
    double s_tilde = 0.0;   // c^(1/gamma) c0^(1/(1+gamma)) E^(1/(1+gamma)), as printed
    double s_tilde_analogy = 0.0; // c0 exponent flipped to -1/(1+gamma)
};

// Critical energy of the explosive-flicker ensemble at spectral exponent alpha.
inline FlickerCritical flicker_critical_energy(double alpha, double energy, long long s) {
    if (!(alpha > 0.0) || !(alpha < 2.0))
        throw UnsupportedAlpha("flicker_critical_energy: alpha must lie in (0, 2)");
    if (!(energy > 0.0)) throw ZeroEnergy("flicker_critical_energy: energy must be positive");
    FlickerCritical out;
    out.gamma = 0.5 - alpha / 4.0;
    double c = quad::regularized_c(out.gamma).value;
    double c0 = quad::bose_integral(1.0, out.gamma).value;
    out.beta = std::pow(c0 / energy, 1.0 / (1.0 + out.gamma));
    out.e_s = M_PI * M_PI * energy / (static_cast<double>(s) * static_cast<double>(s));
    out.e_s_crit = M_PI * M_PI * c0 * std::pow(c, -1.0 / out.gamma) * std::pow(out.beta, -out.gamma);
    double epow = std::pow(energy, 1.0 / (1.0 + out.gamma));
    out.s_tilde = std::pow(c, 1.0 / out.gamma) * std::pow(c0, 1.0 / (1.0 + out.gamma)) * epow;
    out.s_tilde_analogy =
        std::pow(c, 1.0 / out.gamma) * std::pow(c0, -1.0 / (1.0 + out.gamma)) * epow;
    return out;
}

} // namespace parastat::thresholds
