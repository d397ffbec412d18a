#pragma once

// Testable content of the weak-convergence and condensate theorems: the
// lattice-sum-minus-integral statistic
//
//   b^alpha sum_i N_i phi(b e_i)  -  alpha int_0^inf phi(x) x^(alpha-1) bracket(x + b kappa) dx
//
// with e_i = i^(1/alpha) the level energy (e_i = i in the planar case), and
// the empirical condensate bound check. The three dimension cases share this
// one code path parameterized by (prefactor exponent, weight exponent).

#include <algorithm>
#include <cmath>
#include <vector>

#include "parastat/common.hpp"
#include "parastat/partitions.hpp"
#include "parastat/quadrature.hpp"
#include "parastat/solver.hpp"
#include "parastat/thresholds.hpp"

namespace parastat::condensate {

struct TestFunction {
    enum class Kind { exp_decay, indicator_interval, polynomial_cutoff };
    Kind kind = Kind::exp_decay;
    double p0 = 1.0; // decay rate / left edge / power
    double p1 = 0.0; // right edge / cutoff scale

    double operator()(double x) const {
        switch (kind) {
            case Kind::exp_decay: return std::exp(-p0 * x);
            case Kind::indicator_interval: return (x >= p0 && x <= p1) ? 1.0 : 0.0;
            case Kind::polynomial_cutoff: {
                double t = x / p1;
                return std::pow(x, p0) * std::exp(-t * t);
            }
        }
        return 0.0;
    }

    static TestFunction exp_decay(double rate = 1.0) { return {Kind::exp_decay, rate, 0.0}; }
    static TestFunction indicator(double a, double b) { return {Kind::indicator_interval, a, b}; }
    static TestFunction poly_cutoff(double power, double scale) {
        return {Kind::polynomial_cutoff, power, scale};
    }
};

struct ConvergenceReport {
    long long n = 0;
    long long k = 0;
    double alpha = 1.0;
    double statistic = 0.0;  // empirical mean of the per-sample difference
    double spread = 0.0;     // sample standard deviation
    std::size_t samples = 0;
    double median_abs = 0.0; // median |difference|, the trend statistic
    double integral = 0.0;   // the deterministic integral term
};

namespace detail {

// snap indicator edges off the lattice points b*e_i (continuity requirement)
inline TestFunction snap_edges(TestFunction phi, double b) {
    if (phi.kind != TestFunction::Kind::indicator_interval || b <= 0.0) return phi;
    auto snap = [&](double edge) {
        double q = edge / b;
        if (std::fabs(q - std::round(q)) * b < 1e-9) return edge + 1e-9 * std::max(1.0, b);
        return edge;
    };
    phi.p0 = snap(phi.p0);
    phi.p1 = snap(phi.p1);
    return phi;
}

inline double weighted_integral(const TestFunction& phi, double kh, double k, double alpha,
                                double trunc_k = -1.0) {
    quad::Tolerances tol;
    tol.abs_tol = 1e-12;
    tol.rel_tol = 1e-10;
    double kk = (trunc_k > 0.0) ? trunc_k : k;
    auto f = [&](double x) {
        return phi(x) * alpha * std::pow(x, alpha - 1.0) *
               solver::parastat_bracket(x + kh, kk);
    };
    std::vector<double> pts;
    if (kh < 0.0) pts.push_back(-kh);
    pts.push_back(std::fabs(kh) + 1.0 / kk);
    if (phi.kind == TestFunction::Kind::indicator_interval) {
        pts.push_back(phi.p0);
        pts.push_back(phi.p1);
    }
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

} // namespace detail

// Per-sample statistic of the weak-convergence difference over a sample set.
// `a_cutoff` > 0 restricts the lattice sum to levels with e_i <= a_cutoff / b
// (the truncated variant used beyond the critical number, where the integral
// is taken with the k0 parameters at kappa = 0).
inline ConvergenceReport weak_convergence_statistic(
    const std::vector<partitions::OccupancyVector>& samples, const solver::ParastatProblem& prob,
    const solver::ThermoParams& params, TestFunction phi, double a_cutoff = -1.0,
    double k_integral = -1.0) {
    if (samples.empty()) throw OutOfRange("weak_convergence_statistic: no samples");
    const double alpha = prob.alpha;
    const double b = params.b;
    const double ba = std::pow(b, alpha);
    phi = detail::snap_edges(phi, b);
    double kh = (k_integral > 0.0) ? 0.0 : params.kappa_scaled();
    double I = detail::weighted_integral(phi, kh, static_cast<double>(prob.k), alpha, k_integral);
    ConvergenceReport rep;
    rep.n = prob.n;
    rep.k = prob.k;
    rep.alpha = alpha;
    rep.samples = samples.size();
    rep.integral = I;
    std::vector<double> ds;
    ds.reserve(samples.size());
    double mean = 0.0;
    for (const auto& s : samples) {
        double lat = 0.0;
        for (const auto& [i, c] : s.counts) {
            double e = (std::fabs(alpha - 1.0) < 1e-12)
                           ? static_cast<double>(i)
                           : std::pow(static_cast<double>(i), 1.0 / alpha);
            if (a_cutoff > 0.0 && e > a_cutoff / b) continue;
            lat += static_cast<double>(c) * phi(b * e);
        }
        double d = ba * lat - I;
        ds.push_back(d);
        mean += d;
    }
    mean /= static_cast<double>(ds.size());
    double var = 0.0;
    for (double d : ds) var += (d - mean) * (d - mean);
    rep.statistic = mean;
    rep.spread = ds.size() > 1 ? std::sqrt(var / static_cast<double>(ds.size() - 1)) : 0.0;
    std::vector<double> abs_ds(ds.size());
    for (std::size_t i = 0; i < ds.size(); ++i) abs_ds[i] = std::fabs(ds[i]);
    std::sort(abs_ds.begin(), abs_ds.end());
    std::size_t m = abs_ds.size();
    rep.median_abs = (m % 2) ? abs_ds[m / 2] : 0.5 * (abs_ds[m / 2 - 1] + abs_ds[m / 2]);
    return rep;
}

// concentration tail exponent per dimension case: alpha/(alpha+1) - delta
// (1/2 - delta planar, 1/3 - delta one-dimensional)
inline double tail_exponent(double alpha, double delta) {
    return alpha / (alpha + 1.0) - delta;
}

struct BoundCheckReport {
    std::size_t samples = 0;
    double band_halfwidth = 0.0;
    double violation_fraction = 0.0;
    double bound = 0.0;
    double exponent = 0.0;
    double mc_sigma = 0.0; // binomial standard error of the fraction at the bound
    bool passed = false;
};

// Empirical check of the condensate concentration bound. The band halfwidth is
// delta1 * k0 in the planar case and delta1 * n^(1/(1+alpha)) otherwise.
inline BoundCheckReport condensate_bound_check(const std::vector<partitions::OccupancyVector>& samples,
                                               long long k,
                                               const thresholds::ThresholdResult& threshold,
                                               double delta = 0.1, double delta1 = 0.15) {
    double k0 = threshold.k0;
    if (static_cast<double>(k) <= k0)
        throw HypothesisUnmet("condensate_bound_check: requires k > k0");
    BoundCheckReport rep;
    rep.samples = samples.size();
    bool planar = std::fabs(threshold.alpha - 1.0) < 1e-12;
    rep.band_halfwidth =
        planar ? delta1 * k0 : delta1 * std::pow(threshold.n, 1.0 / (1.0 + threshold.alpha));
    rep.exponent = tail_exponent(threshold.alpha, delta);
    rep.bound = std::exp(-std::pow(static_cast<double>(k) - k0, rep.exponent));
    std::size_t viol = 0;
    for (const auto& s : samples) {
        double dev = std::fabs(static_cast<double>(s.n0) - (static_cast<double>(k) - k0));
        if (dev > rep.band_halfwidth) ++viol;
    }
    rep.violation_fraction = static_cast<double>(viol) / static_cast<double>(samples.size());
    rep.mc_sigma = std::sqrt(std::max(rep.bound * (1.0 - rep.bound), 1.0 / static_cast<double>(samples.size())) /
                             static_cast<double>(samples.size()));
    rep.passed = rep.violation_fraction <= rep.bound + 3.0 * rep.mc_sigma;
    return rep;
}

} // namespace parastat::condensate
