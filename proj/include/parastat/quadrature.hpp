#pragma once

// Special integrals behind every threshold formula: Bose integrals with the
// Stieltjes measure d(xi^alpha) = alpha xi^(alpha-1) dxi, the regularized
// constant c(alpha) = int (1/xi - 1/(e^xi-1)) d xi^alpha, its one-dimensional
// analogue, and c1(alpha) = int d eta^alpha / (2(1+eta/2)).
//
// Every routine is deterministic: fixed evaluation order, no shared state.

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <utility>
#include <vector>

#include "parastat/common.hpp"

namespace parastat::quad {

struct IntegralValue {
    enum class Method { closed_form, adaptive_quadrature };
    double value = 0.0;
    double abs_error_estimate = 0.0; // 0 exactly for closed_form
    Method method = Method::closed_form;
};

struct Tolerances {
    double abs_tol = 1e-10;
    double rel_tol = 1e-9;
    int max_depth = 60;
};

namespace detail {

// Gauss 7 / Kronrod 15 nodes and weights on [-1, 1]
inline const double gk_nodes[8] = {
    0.000000000000000, 0.405845151377397, 0.741531185599394, 0.949107912342759,
    0.207784955007898, 0.586087235467691, 0.864864423359769, 0.991455371120813};
inline const double gk_wg[8] = {
    0.417959183673469, 0.381830050505119, 0.279705391489277, 0.129484966168870,
    0.0, 0.0, 0.0, 0.0};
inline const double gk_wk[8] = {
    0.209482141084728, 0.190350578064785, 0.140653259715525, 0.063092092629979,
    0.204432940075298, 0.169004726639267, 0.104790010322250, 0.022935322010529};

template <class F>
std::pair<double, double> gk15(F&& f, double a, double b) {
    const double c = 0.5 * (a + b);
    const double h = 0.5 * (b - a);
    double y0 = f(c);
    double g7 = gk_wg[0] * y0;
    double k15 = gk_wk[0] * y0;
    for (int i = 1; i < 8; ++i) {
        double dx = h * gk_nodes[i];
        double yi = f(c + dx) + f(c - dx);
        g7 += gk_wg[i] * yi;
        k15 += gk_wk[i] * yi;
    }
    g7 *= h;
    k15 *= h;
    // conservative local error: the raw Gauss/Kronrod difference
    double err = std::fabs(k15 - g7) + 1e-300;
    return {k15, err};
}

struct Interval {
    double a, b;
    int depth;
};

} // namespace detail

// Adaptive Gauss-Kronrod on a finite interval.
template <class F>
double integrate(F&& f, double a, double b, const Tolerances& tol = {}, double* err_out = nullptr) {
    if (!(b > a)) {
        if (err_out) *err_out = 0.0;
        return 0.0;
    }
    std::vector<detail::Interval> stack;
    stack.push_back({a, b, 0});
    double sum = 0.0, err_sum = 0.0;
    const double span = b - a;
    while (!stack.empty()) {
        auto iv = stack.back();
        stack.pop_back();
        auto [v, e] = detail::gk15(f, iv.a, iv.b);
        double local_tol = std::max(tol.abs_tol * (iv.b - iv.a) / span, tol.rel_tol * std::fabs(v));
        if (e <= local_tol || iv.depth >= tol.max_depth) {
            sum += v;
            err_sum += e;
            continue;
        }
        double mid = 0.5 * (iv.a + iv.b);
        stack.push_back({mid, iv.b, iv.depth + 1});
        stack.push_back({iv.a, mid, iv.depth + 1});
    }
    if (err_out) *err_out = err_sum;
    return sum;
}

// Independent route: adaptive Simpson with interval halving. Used as the
// second quadrature in dual-route checks; shares nothing with gk15.
template <class F>
double integrate_simpson(F&& f, double a, double b, double tol = 1e-10, int max_depth = 60) {
    struct Rec {
        F& f;
        int max_depth;
        double run(double a, double b, double fa, double fm, double fb, double whole, double tol,
                   int depth) {
            double m = 0.5 * (a + b);
            double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
            double flm = f(lm), frm = f(rm);
            double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
            double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
            double delta = left + right - whole;
            if (depth >= max_depth || std::fabs(delta) <= 15.0 * tol)
                return left + right + delta / 15.0;
            return run(a, m, fa, flm, fm, left, tol / 2.0, depth + 1) +
                   run(m, b, fm, frm, fb, right, tol / 2.0, depth + 1);
        }
    };
    if (!(b > a)) return 0.0;
    double fa = f(a), fb = f(b), fm = f(0.5 * (a + b));
    double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    Rec rec{f, max_depth};
    return rec.run(a, b, fa, fm, fb, whole, tol, 0);
}

namespace detail {

// Truncation point for integrands decaying like x^q e^{-x}: smallest U with
// U^q e^{-U} < cut * peak, peak ~ q^q e^{-q}.
inline double exp_tail_cutoff(double q, double cut = 1e-16) {
    double lpeak = q > 0.0 ? q * (std::log(q) - 1.0) : 0.0;
    double U = std::max(40.0, 2.0 * q + 10.0);
    for (int it = 0; it < 200; ++it) {
        double lval = q * std::log(U) - U - lpeak;
        if (lval < std::log(cut)) break;
        U += 5.0;
    }
    return U;
}

// bound for int_U^inf x^q e^{-x} / (1 - e^{-x}) dx, U > max(q, 1)
inline double exp_tail_bound(double q, double U) {
    if (U <= q + 1.0) return std::numeric_limits<double>::infinity();
    double lead = std::exp(q * std::log(U) - U);
    return lead / (1.0 - q / U) / (1.0 - std::exp(-U));
}

} // namespace detail

// int_0^inf xi^p d xi^alpha / (e^xi - 1) = alpha Gamma(p+alpha) zeta(p+alpha).
// Convergent iff p + alpha > 1.
inline IntegralValue bose_integral(double p, double alpha) {
    if (!(alpha > 0.0) || !(p + alpha > 1.0))
        throw DivergentIntegral("bose_integral: requires p + alpha > 1 and alpha > 0");
    double s = p + alpha;
    IntegralValue out;
    out.value = alpha * std::tgamma(s) * std::riemann_zeta(s);
    out.abs_error_estimate = 0.0;
    out.method = IntegralValue::Method::closed_form;
    return out;
}

// Same integral by adaptive quadrature; the 1/xi singularity at the origin is
// subtracted analytically on (0,1) as in the k0 derivations.
inline IntegralValue bose_integral_quad(double p, double alpha, const Tolerances& tol = {}) {
    if (!(alpha > 0.0) || !(p + alpha > 1.0))
        throw DivergentIntegral("bose_integral_quad: requires p + alpha > 1 and alpha > 0");
    const double q = p + alpha - 1.0; // integrand = alpha x^q / (e^x - 1)
    double err1 = 0.0, err2 = 0.0;
    // (0,1): alpha x^q (1/(e^x-1) - 1/x) + alpha x^(q-1); second term analytic
    auto smooth = [&](double x) {
        double sub = (x > 1e-8) ? (1.0 / std::expm1(x) - 1.0 / x) : (-0.5 + x / 12.0);
        return alpha * std::pow(x, q) * sub;
    };
    double head = integrate(smooth, 0.0, 1.0, tol, &err1) + alpha / q;
    double U = detail::exp_tail_cutoff(q);
    auto body = [&](double x) { return alpha * std::pow(x, q) / std::expm1(x); };
    double mid = integrate(body, 1.0, U, tol, &err2);
    IntegralValue out;
    out.value = head + mid;
    out.abs_error_estimate = err1 + err2 + alpha * detail::exp_tail_bound(q, U);
    out.method = IntegralValue::Method::adaptive_quadrature;
    return out;
}

// c(alpha) = int_0^inf (1/xi - 1/(e^xi-1)) d xi^alpha, 0 < alpha < 1.
// Equals -Gamma(1+alpha) zeta(alpha); grows without bound as alpha -> 1.
inline IntegralValue regularized_c(double alpha, const Tolerances& tol = {}) {
    if (!(alpha > 0.0) || !(alpha < 1.0))
        throw DivergentIntegral("regularized_c: requires 0 < alpha < 1");
    double err1 = 0.0, err2 = 0.0;
    // (0,1): bounded integrand alpha x^(alpha-1) (1/x - 1/(e^x-1)), limit 1/2 at 0
    auto head_f = [&](double x) {
        double sub = (x > 1e-8) ? (1.0 / x - 1.0 / std::expm1(x)) : (0.5 - x / 12.0);
        return alpha * std::pow(x, alpha - 1.0) * sub;
    };
    double head = integrate(head_f, 0.0, 1.0, tol, &err1);
    // (1,inf): alpha x^(alpha-2) integrates to alpha/(1-alpha); Bose part decays
    double tail_analytic = alpha / (1.0 - alpha);
    double U = detail::exp_tail_cutoff(alpha);
    auto body = [&](double x) { return -alpha * std::pow(x, alpha - 1.0) / std::expm1(x); };
    double body_v = integrate(body, 1.0, U, tol, &err2);
    IntegralValue out;
    out.value = head + tail_analytic + body_v;
    out.abs_error_estimate = err1 + err2 + alpha * detail::exp_tail_bound(alpha - 1.0, U);
    out.method = IntegralValue::Method::adaptive_quadrature;
    return out;
}

// closed-form route, for cross-checks
inline double regularized_c_closed(double alpha) {
    if (!(alpha > 0.0) || !(alpha < 1.0))
        throw DivergentIntegral("regularized_c_closed: requires 0 < alpha < 1");
    return -std::tgamma(1.0 + alpha) * std::riemann_zeta(alpha);
}

// c = int_0^inf (1/(e^{xi^2}-1) - 1/xi^2) d xi * (1/2 int_0^inf sqrt(xi) d xi/(e^xi-1))^(2/3).
// First factor is negative (analytic form sqrt(pi) zeta(1/2)/2); downstream
// formulas use c^2 so the sign never matters.
// first factor of c_one_dim alone (negative; analytic form sqrt(pi) zeta(1/2)/2)
inline double c_one_dim_factor1(const Tolerances& tol = {}, double* err_out = nullptr) {
    double err1 = 0.0, err2 = 0.0;
    auto head_f = [](double x) {
        double u = x * x;
        double sub = (u > 1e-8) ? (1.0 / std::expm1(u) - 1.0 / u) : (-0.5 + u / 12.0);
        return sub;
    };
    double head = integrate(head_f, 0.0, 1.0, tol, &err1);
    // (1,inf): -1/x^2 integrates to -1; rest decays like e^{-x^2}
    auto body = [](double x) { return 1.0 / std::expm1(x * x); };
    double body_v = integrate(body, 1.0, 8.0, tol, &err2);
    if (err_out) *err_out = err1 + err2 + 1e-30;
    return head + body_v - 1.0;
}

inline IntegralValue c_one_dim(const Tolerances& tol = {}) {
    double err = 0.0;
    double factor1 = c_one_dim_factor1(tol, &err);
    IntegralValue second = bose_integral(1.0, 0.5); // = 1/2 Gamma(3/2) zeta(3/2)
    IntegralValue out;
    out.value = factor1 * std::pow(second.value, 2.0 / 3.0);
    out.abs_error_estimate = err * std::pow(second.value, 2.0 / 3.0);
    out.method = IntegralValue::Method::adaptive_quadrature;
    return out;
}

// c1(alpha) = int_0^inf d eta^alpha / (2 (1 + eta/2)), 0 < alpha < 1.
// Closed form alpha 2^(alpha-1) pi / sin(pi alpha) kept as a cross-check.
inline IntegralValue c1_const(double alpha, const Tolerances& tol = {}) {
    if (!(alpha > 0.0) || !(alpha < 1.0))
        throw DivergentIntegral("c1_const: requires 0 < alpha < 1");
    double err1 = 0.0, err2 = 0.0;
    auto f = [&](double x) { return alpha * std::pow(x, alpha - 1.0) / (2.0 + x); };
    double head = integrate(f, 0.0, 1.0, tol, &err1);
    const double U = 1e8;
    double body = integrate(f, 1.0, U, tol, &err2);
    // exact tail expansion: alpha U^(a-1)/(1-a) - 2 alpha U^(a-2)/(2-a) + O(U^(a-3))
    double tail = alpha * std::pow(U, alpha - 1.0) / (1.0 - alpha) -
                  2.0 * alpha * std::pow(U, alpha - 2.0) / (2.0 - alpha);
    IntegralValue out;
    out.value = head + body + tail;
    out.abs_error_estimate = err1 + err2 + 4.0 * alpha * std::pow(U, alpha - 3.0);
    out.method = IntegralValue::Method::adaptive_quadrature;
    return out;
}

inline double c1_const_closed(double alpha) {
    if (!(alpha > 0.0) || !(alpha < 1.0))
        throw DivergentIntegral("c1_const_closed: requires 0 < alpha < 1");
    return alpha * std::pow(2.0, alpha - 1.0) * M_PI / std::sin(M_PI * alpha);
}

} // namespace parastat::quad
