#pragma once

// Two-equation parastatistic system for (b, kappa) at given (n, k, alpha):
//
//   int_0^inf [ 1/(e^{b(x+kappa)}-1) - k/(e^{bk(x+kappa)}-1) ]   d x^alpha = k
//   int_0^inf x [ ... same bracket ... ]                         d x^alpha = n
//
// kappa = 0 defines the critical number k0; for k > k0 the solution has
// kappa < 0 with mu = -kappa below the first level. In the scaled variable
// y = b x the system factorizes: b^alpha = Phi1(bk appa)/k and
// b^{1+alpha} = Phi2(b kappa)/n, leaving one scalar equation in the scaled
// chemical potential kappa_hat = b kappa.
//
// A discrete-sum variant (levels i = 1, 2, ... with the occupancy cap written
// through k+1, i.e. the consistent finite-geometric-series pair) backs the
// entropy/log-probability path; its saddle value plus the Gaussian
// fluctuation determinant tracks ln p_k(n) at desk scale.

#include <cmath>
#include <utility>
#include <vector>

#include "parastat/common.hpp"
#include "parastat/quadrature.hpp"

namespace parastat::solver {

enum class SolveMode { integral, discrete_sum };

struct ParastatProblem {
    long long n = 0;     // total sum / global energy in level units
    long long k = 0;     // number of parts / particles
    double alpha = 1.0;  // d/2; alpha = 1 is the planar case
    double epsilon = 1.0;
};

struct ThermoParams {
    double b = 0.0;      // inverse temperature
    double kappa = 0.0;  // chemical potential with negative sign, level units
    std::pair<double, double> residuals{0.0, 0.0}; // relative, count then sum
    SolveMode mode = SolveMode::integral;
    double kappa_scaled() const { return b * kappa; } // as in the scaled statistic
};

// bracket of Eqs. (count/sum): 1/(e^y-1) - k/(e^{ky}-1); finite through y=0
// with value (k-1)/2, by the reflection g(-u) = -1 - g(u).
inline double parastat_bracket(double y, double k) {
    double ky = k * y;
    if (std::fabs(ky) < 1e-4) {
        double k2 = k * k;
        return (k - 1.0) / 2.0 - (k2 - 1.0) * y / 12.0 + (k2 * k2 - 1.0) * y * y * y / 720.0;
    }
    double t1 = (std::fabs(y) < 1e-5 && y != 0.0) ? (1.0 / y - 0.5 + y / 12.0) : bose_g(y);
    return t1 - k * bose_g(ky);
}

// same bracket with the cap written through K = k+1 (finite geometric series
// of length k+1); this is the pair consistent with the entropy product
inline double gentile_bracket(double y, double kcap) {
    return parastat_bracket(y, kcap + 1.0);
}

// Occupancy density of Eq.-(10) form at level coordinate x. Throws when the
// argument crosses zero unless the negative branch is explicitly enabled.
inline double occupancy_density(double x, const ThermoParams& p, long long k, double alpha,
                                bool allow_negative_branch = false) {
    (void)alpha;
    double arg = x + p.kappa;
    if (arg <= 0.0 && !allow_negative_branch)
        throw PoleAtZero("occupancy_density: x + kappa <= 0 (enable the kappa<0 branch)");
    return parastat_bracket(p.b * arg, static_cast<double>(k));
}

namespace detail {

// Phi_m(kh) = alpha int_0^inf y^(alpha-1+m) bracket(y + kh) dy, m = 0, 1
template <class Bracket>
double phi_integral(double kh, double k, double alpha, int m, Bracket&& br) {
    quad::Tolerances tol;
    tol.abs_tol = 1e-12;
    tol.rel_tol = 1e-11;
    auto f = [&](double y) {
        return alpha * std::pow(y, alpha - 1.0 + m) * br(y + kh, k);
    };
    // split at the shifted pole location and the parastat crossover 1/k
    std::vector<double> pts;
    if (kh < 0.0) pts.push_back(-kh);
    pts.push_back(std::max(1e-12, std::fabs(kh) + 1.0 / k));
    pts.push_back(1.0);
    std::sort(pts.begin(), pts.end());
    double upper = 60.0 + std::fabs(kh);
    double sum = 0.0, lo = 0.0;
    for (double hi : pts) {
        if (hi <= lo || hi >= upper) continue;
        sum += quad::integrate(f, lo, hi, tol);
        lo = hi;
    }
    sum += quad::integrate(f, lo, upper, tol);
    return sum;
}

inline double phi1(double kh, double k, double alpha) {
    return phi_integral(kh, k, alpha, 0, [](double y, double kk) { return parastat_bracket(y, kk); });
}
inline double phi2(double kh, double k, double alpha) {
    return phi_integral(kh, k, alpha, 1, [](double y, double kk) { return parastat_bracket(y, kk); });
}

} // namespace detail

// Solve the integral system. Newton on the scaled variable with bracketing
// fallback; initialization is the kappa = 0 closed form for b.
inline ThermoParams solve_b_kappa(const ParastatProblem& prob, SolveMode mode = SolveMode::integral);

namespace detail {

inline ThermoParams solve_integral(const ParastatProblem& prob) {
    const double n = static_cast<double>(prob.n);
    const double k = static_cast<double>(prob.k);
    const double alpha = prob.alpha;
    // R(kh) = (1+a) ln(Phi1/k) - a ln(Phi2/n); root gives the scaled potential
    auto R = [&](double kh) {
        double p1 = phi1(kh, k, alpha);
        double p2 = phi2(kh, k, alpha);
        if (!(p1 > 0.0) || !(p2 > 0.0)) return std::numeric_limits<double>::quiet_NaN();
        return (1.0 + alpha) * std::log(p1 / k) - alpha * std::log(p2 / n);
    };
    double kh;
    try {
        kh = find_root_expand(R, 0.0, 0.05, -50.0, 5e3, 1e-15);
    } catch (const NoConvergence&) {
        throw NoConvergence("solve_b_kappa: no root for the scaled potential");
    }
    double p2 = phi2(kh, k, alpha);
    double b = std::pow(p2 / n, 1.0 / (1.0 + alpha));
    ThermoParams out;
    out.b = b;
    out.kappa = kh / b;
    out.mode = SolveMode::integral;
    double F1 = phi1(kh, k, alpha) / std::pow(b, alpha);
    double F2 = p2 / std::pow(b, 1.0 + alpha);
    out.residuals = {std::fabs(F1 - k) / k, std::fabs(F2 - n) / n};
    if (out.residuals.first > 1e-6 || out.residuals.second > 1e-6)
        throw NoConvergence("solve_b_kappa: residuals above tolerance");
    return out;
}

// discrete sums over levels i >= 1 with the k+1 cap
struct DiscreteSums {
    double f1 = 0.0, f2 = 0.0;       // count, sum
    double v11 = 0.0, v12 = 0.0, v22 = 0.0; // occupancy covariance sums
};

inline DiscreteSums discrete_sums(double b, double kh, double k, long long imax) {
    DiscreteSums s;
    const double K = k + 1.0;
    for (long long i = 1; i <= imax; ++i) {
        double t = b * static_cast<double>(i) + kh;
        double occ = parastat_bracket(t, K);
        double var;
        double Kt = K * t;
        if (std::fabs(Kt) < 1e-4) {
            var = (K * K - 1.0) / 12.0 - (K * K * K * K - 1.0) * t * t / 240.0;
        } else {
            var = -(bose_g_prime(t) - K * K * bose_g_prime(Kt));
        }
        double di = static_cast<double>(i);
        s.f1 += occ;
        s.f2 += di * occ;
        s.v11 += var;
        s.v12 += di * var;
        s.v22 += di * di * var;
    }
    return s;
}

inline ThermoParams solve_discrete(const ParastatProblem& prob) {
    if (std::fabs(prob.alpha - 1.0) > 1e-12)
        throw InfeasibleProblem("solve_b_kappa: discrete_sum mode requires alpha = 1");
    const double n = static_cast<double>(prob.n);
    const double k = static_cast<double>(prob.k);
    const double b0 = std::sqrt(quad::bose_integral(1.0, 1.0).value / n);
    auto imax_for = [&](double b) { return static_cast<long long>(60.0 / b) + 8; };
    // nested bisection: inner solve of the sum equation in b, outer in kh
    auto b_for = [&](double kh) {
        auto g = [&](double lb) {
            double b = std::exp(lb);
            return discrete_sums(b, kh, k, imax_for(b)).f2 - n;
        };
        double lb = find_root_expand(g, std::log(b0), 0.2, std::log(b0) - 8.0,
                                     std::log(b0) + 8.0, 1e-15);
        return std::exp(lb);
    };
    auto H = [&](double kh) {
        double b = b_for(kh);
        return discrete_sums(b, kh, k, imax_for(b)).f1 - k;
    };
    double kh = find_root_expand(H, 0.0, 0.02, -3.0, 1e4, 1e-15);
    double b = b_for(kh);
    ThermoParams out;
    out.b = b;
    out.kappa = kh / b;
    out.mode = SolveMode::discrete_sum;
    auto s = discrete_sums(b, kh, k, imax_for(b));
    out.residuals = {std::fabs(s.f1 - k) / k, std::fabs(s.f2 - n) / n};
    if (out.residuals.first > 1e-6 || out.residuals.second > 1e-6)
        throw NoConvergence("solve_b_kappa: discrete residuals above tolerance");
    return out;
}

// ln[(1 - e^{-(k+1) t}) / (1 - e^{-t})], valid for t of either sign
inline double log_xi_ratio(double t, double k) {
    const double K = k + 1.0;
    if (std::fabs(t) < 1e-9) return std::log(K);
    if (t > 0.0) {
        double la = (K * t < 700.0) ? std::log(-std::expm1(-K * t)) : 0.0;
        double lb = std::log(-std::expm1(-t));
        return la - lb;
    }
    double u = -t; // ratio of negatives: (e^{Ku}-1)/(e^u-1)
    double la = (K * u > 1e-8) ? std::min(K * u, 700.0) + std::log1p(-std::exp(-std::min(K * u, 1400.0)))
                               : std::log(K * u);
    double lb = (u > 1e-8) ? u + std::log1p(-std::exp(-u)) : std::log(u);
    return la - lb;
}

} // namespace detail

inline ThermoParams solve_b_kappa(const ParastatProblem& prob, SolveMode mode) {
    if (prob.n <= 0 || prob.k <= 0) throw InfeasibleProblem("solve_b_kappa: need n, k >= 1");
    if (!(prob.alpha > 0.0) || prob.alpha > 1.0)
        throw InfeasibleProblem("solve_b_kappa: alpha must lie in (0, 1]");
    if (static_cast<double>(prob.n) / static_cast<double>(prob.k) < 2.0)
        throw InfeasibleProblem("solve_b_kappa: n/k < 2 is outside the asymptotic regime");
    return mode == SolveMode::integral ? detail::solve_integral(prob)
                                       : detail::solve_discrete(prob);
}

// Entropy of the solved ensemble. Integral form
//   S = b n + kh k + (1/b) int_0^inf ln[(1-e^{-(k+1)(t+kh)})/(1-e^{-(t+kh)})] dt
// (the kh k term vanishes at the critical point); discrete form replaces the
// integral by the sum over levels i >= 1.
inline double entropy(const ParastatProblem& prob, const ThermoParams& p) {
    const double k = static_cast<double>(prob.k);
    const double n = static_cast<double>(prob.n);
    const double kh = p.kappa_scaled();
    if (p.mode == SolveMode::discrete_sum) {
        long long imax = static_cast<long long>(60.0 / p.b) + 8;
        double sum = 0.0;
        for (long long i = 1; i <= imax; ++i)
            sum += detail::log_xi_ratio(p.b * static_cast<double>(i) + kh, k);
        return p.b * n + kh * k + sum;
    }
    quad::Tolerances tol;
    auto f = [&](double t) { return detail::log_xi_ratio(t + kh, k); };
    double upper = 60.0 + std::fabs(kh);
    double split = std::max(1e-9, -kh);
    double integral = quad::integrate(f, 0.0, split, tol) + quad::integrate(f, split, upper, tol);
    return p.b * n + kh * k + integral / p.b;
}

// Saddle-point estimate of ln p_k(n): discrete entropy minus the Gaussian
// fluctuation factor ln(2 pi sqrt(det Sigma)) with Sigma the occupancy
// covariance of (count, sum).
inline double log_pk_saddle(long long n, long long k) {
    ParastatProblem prob{n, k, 1.0, 1.0};
    ThermoParams p = solve_b_kappa(prob, SolveMode::discrete_sum);
    double S = entropy(prob, p);
    long long imax = static_cast<long long>(60.0 / p.b) + 8;
    auto s = detail::discrete_sums(p.b, p.kappa_scaled(), static_cast<double>(k), imax);
    double det = s.v22 * s.v11 - s.v12 * s.v12;
    return S - std::log(2.0 * M_PI) - 0.5 * std::log(det);
}

// S(k) - S(k0) = ln(p_k(n)/p_{k0}(n)) via the corrected saddle.
inline double log_prob_ratio(const ParastatProblem& prob, long long k, long long k0) {
    if (k == k0) return 0.0;
    return log_pk_saddle(prob.n, k) - log_pk_saddle(prob.n, k0);
}

} // namespace parastat::solver
