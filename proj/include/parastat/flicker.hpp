#pragma once

// Explosive flicker-noise analysis: cosine collocation transform of a time
// series b_0..b_s, spectral density A_l, decay-exponent fit, global energy,
// critical energy and the condensate-size verdict, plus the weak-convergence
// statistic over the equiprobable occupancy ensemble.

#include <algorithm>
#include <cmath>
#include <map>
#include <vector>

#include "parastat/common.hpp"
#include "parastat/condensate.hpp"
#include "parastat/quadrature.hpp"
#include "parastat/solver.hpp"
#include "parastat/thresholds.hpp"

namespace parastat::flicker {

struct TimeSeries {
    std::vector<double> samples; // b_0 .. b_s at integer times
    long long s() const { return static_cast<long long>(samples.size()) - 1; }

    void validate() const {
        if (samples.size() < 9) throw DegenerateSeries("TimeSeries: need s >= 8");
        double ss = 0.0;
        for (double v : samples) ss += v * v;
        double eps = std::numeric_limits<double>::epsilon();
        if (!(ss > 10.0 * static_cast<double>(s()) * eps))
            throw DegenerateSeries("TimeSeries: sum of squares too small");
    }
};

struct Spectrum {
    std::vector<double> a;  // amplitudes a_0 .. a_s
    double A0 = 0.0;        // (1/s) sum a_i^2 = (1/s) sum b_j^2
    double global_energy = 0.0; // (1/A0) sum i^2 a_i^2
    std::map<long long, double> densities; // l -> A_l on the default grid
    long long s() const { return static_cast<long long>(a.size()) - 1; }

    // A_l = (1/(s-l)) sum_{i=l}^{s} a_i^2
    double spectral_density(long long l) const {
        long long S = s();
        if (l < 1 || l >= S) throw OutOfRange("spectral_density: l in [1, s)");
        double acc = 0.0;
        for (long long i = l; i <= S; ++i) acc += a[i] * a[i];
        return acc / static_cast<double>(S - l);
    }
};

// geometric grid of 8 points between s/16 and s/2 (9 band edges)
inline std::vector<long long> default_l_grid(long long S) {
    std::vector<long long> grid;
    double lo = std::max(2.0, static_cast<double>(S) / 16.0);
    double hi = std::max(lo + 1.0, static_cast<double>(S) / 2.0);
    const int points = 9;
    long long prev = -1;
    for (int i = 0; i < points; ++i) {
        double x = lo * std::pow(hi / lo, static_cast<double>(i) / (points - 1));
        long long l = static_cast<long long>(std::llround(x));
        if (l <= prev) l = prev + 1;
        grid.push_back(l);
        prev = l;
    }
    return grid;
}

// Collocation cosine transform: amplitudes a_i with
// sum_i a_i cos(pi i j / s) = b_j for every j. Endpoints carry half weight in
// the inverse sums. Round-trip reconstruction is exact up to rounding.
inline Spectrum cosine_transform(const TimeSeries& series) {
    series.validate();
    const long long S = series.s();
    const auto& b = series.samples;
    bool all_zero = true;
    for (double v : b)
        if (v != 0.0) { all_zero = false; break; }
    if (all_zero) throw DegenerateSeries("cosine_transform: all-zero input");
    Spectrum spec;
    spec.a.assign(S + 1, 0.0);
    const double pis = M_PI / static_cast<double>(S);
    for (long long i = 0; i <= S; ++i) {
        double acc = 0.0;
        for (long long j = 0; j <= S; ++j) {
            double w = (j == 0 || j == S) ? 0.5 : 1.0;
            acc += w * b[j] * std::cos(pis * static_cast<double>(i) * static_cast<double>(j));
        }
        double norm = (i == 0 || i == S) ? static_cast<double>(S) : static_cast<double>(S) / 2.0;
        spec.a[i] = acc / norm;
    }
    double sa = 0.0, se = 0.0;
    for (long long i = 0; i <= S; ++i) {
        sa += spec.a[i] * spec.a[i];
        se += static_cast<double>(i) * static_cast<double>(i) * spec.a[i] * spec.a[i];
    }
    spec.A0 = sa / static_cast<double>(S);
    spec.global_energy = (spec.A0 > 0.0) ? se / spec.A0 : 0.0;
    for (long long l : default_l_grid(S))
        spec.densities[l] = spec.spectral_density(l);
    return spec;
}

// reconstruct b_j from amplitudes (inverse of the collocation system)
inline std::vector<double> reconstruct(const Spectrum& spec) {
    const long long S = spec.s();
    std::vector<double> b(S + 1, 0.0);
    const double pis = M_PI / static_cast<double>(S);
    for (long long j = 0; j <= S; ++j) {
        double acc = 0.0;
        for (long long i = 0; i <= S; ++i)
            acc += spec.a[i] * std::cos(pis * static_cast<double>(i) * static_cast<double>(j));
        b[j] = acc;
    }
    return b;
}

struct GlobalEnergy {
    double energy = 0.0; // script-E
    double e_s = 0.0;    // pi^2 energy / s^2, the "temperature"
};

inline GlobalEnergy global_energy(const Spectrum& spec) {
    if (!(spec.A0 > 0.0)) throw ZeroEnergy("global_energy: A0 must be positive");
    GlobalEnergy out;
    out.energy = spec.global_energy;
    double S = static_cast<double>(spec.s());
    out.e_s = M_PI * M_PI * out.energy / (S * S);
    return out;
}

// Least-squares decay exponent of the spectral density: slope of log
// (band-averaged a_i^2) against log i over geometric bands spanning the grid,
// negated. White noise fits ~0, a Wiener tail fits ~2.
inline double estimate_alpha(const Spectrum& spec, std::vector<long long> l_grid = {}) {
    const long long S = spec.s();
    if (l_grid.empty()) l_grid = default_l_grid(S);
    if (l_grid.size() < 4) throw IllConditionedFit("estimate_alpha: need at least 4 grid points");
    std::vector<double> xs, ys;
    for (std::size_t g = 0; g + 1 < l_grid.size(); ++g) {
        long long lo = l_grid[g], hi = std::min(l_grid[g + 1], S);
        if (hi <= lo) continue;
        double acc = 0.0;
        long long cnt = 0;
        for (long long i = lo; i < hi; ++i) {
            acc += spec.a[i] * spec.a[i];
            ++cnt;
        }
        if (cnt == 0) continue;
        double mean = acc / static_cast<double>(cnt);
        if (!(mean > 1e-14 * spec.A0))
            throw IllConditionedFit("estimate_alpha: vanishing band power");
        xs.push_back(std::log(std::sqrt(static_cast<double>(lo) * static_cast<double>(hi))));
        ys.push_back(std::log(mean));
    }
    if (xs.size() < 3) throw IllConditionedFit("estimate_alpha: too few usable bands");
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) { mx += xs[i]; my += ys[i]; }
    mx /= xs.size();
    my /= ys.size();
    double sxx = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        sxx += (xs[i] - mx) * (xs[i] - mx);
        sxy += (xs[i] - mx) * (ys[i] - my);
    }
    if (!(sxx > 0.0)) throw IllConditionedFit("estimate_alpha: degenerate grid");
    return -sxy / sxx;
}

struct FlickerVerdict {
    double alpha_fit = 0.0;
    double gamma = 0.0;      // 1/2 - alpha/4
    double e_s = 0.0;
    double e_s_crit = 0.0;
    double s_tilde = 0.0;
    double s_tilde_analogy = 0.0;
    double s0_estimate = 0.0; // s - s_tilde clamped at zero
    bool explosive = false;   // e_s < e_s_crit
};

// Verdict from the spectrum at the given decay exponent. The printed form of
// s~(alpha) is reported alongside the exponent-analogy form; the
// `s_tilde_use_analogy` switch selects which one drives s0.
inline FlickerVerdict flicker_verdict(const Spectrum& spec, double alpha,
                                      bool s_tilde_use_analogy = false) {
    if (!(alpha > 0.0) || !(alpha < 2.0))
        throw UnsupportedAlpha("flicker_verdict: alpha must lie in (0, 2)");
    GlobalEnergy ge = global_energy(spec);
    auto crit = thresholds::flicker_critical_energy(alpha, ge.energy, spec.s());
    FlickerVerdict v;
    v.alpha_fit = alpha;
    v.gamma = crit.gamma;
    v.e_s = crit.e_s;
    v.e_s_crit = crit.e_s_crit;
    v.s_tilde = crit.s_tilde;
    v.s_tilde_analogy = crit.s_tilde_analogy;
    v.explosive = v.e_s < v.e_s_crit;
    double st = s_tilde_use_analogy ? v.s_tilde_analogy : v.s_tilde;
    v.s0_estimate = v.explosive ? std::max(0.0, static_cast<double>(spec.s()) - st) : 0.0;
    return v;
}

// ---- equiprobable occupancy ensemble ----------------------------------------
//
// Occupancies m_i >= 0 (i = 1..s; m_0 is the condensate slack) under
//   sum m_i <= s,  [(1/A0) sum a_i^2 m_i] = s,  (1/A0) sum i^2 a_i^2 m_i = E.
// Sampling: uniform DP sampling of the quantized-energy partition, then
// rejection on the count and floor constraints.

class OccupancySampler {
  public:
    // energies q_i on the integer lattice; q_i = i^2 for a flat spectrum
    OccupancySampler(std::vector<long long> level_energy, long long energy_total)
        : q_(std::move(level_energy)), E_(energy_total) {
        if (E_ < 1) throw OutOfRange("OccupancySampler: energy must be >= 1");
        long long levels = static_cast<long long>(q_.size());
        if (levels < 1) throw OutOfRange("OccupancySampler: no levels");
        build();
    }

    // uniform occupancy vector {m_i} with sum q_i m_i = E_ (any counts)
    std::map<long long, long long> sample_unconstrained(SplitMix64& rng) const {
        std::map<long long, long long> occ;
        long long e = E_;
        std::size_t j = q_.size();
        while (e > 0 && j > 0) {
            long long q = q_[j - 1];
            double p = 0.0;
            if (e >= q && L_[j][e - q] > -1e300)
                p = std::exp(L_[j][e - q] - L_[j][e]);
            if (rng.next_double() < p) {
                occ[static_cast<long long>(j)] += 1;
                e -= q;
            } else {
                --j;
            }
        }
        if (e != 0) throw NoConvergence("OccupancySampler: walk failed");
        return occ;
    }

    // rejection on sum m_i <= s; throws after max_tries candidates
    std::map<long long, long long> sample(long long s, std::uint64_t seed,
                                          std::uint64_t sample_index,
                                          long long max_tries = 200000) const {
        SplitMix64 rng = SplitMix64::for_sample(seed, sample_index);
        for (long long t = 0; t < max_tries; ++t) {
            auto occ = sample_unconstrained(rng);
            long long used = 0;
            for (auto& [i, c] : occ) used += c;
            if (used <= s) return occ;
        }
        throw NoConvergence("OccupancySampler: rejection budget exhausted");
    }

    double log_count(long long e) const { return L_[q_.size()][e]; }

  private:
    std::vector<long long> q_;
    long long E_;
    std::vector<std::vector<double>> L_; // L_[j][e]: partitions of e into parts q_1..q_j

    void build() {
        const double ninf = -std::numeric_limits<double>::infinity();
        std::size_t J = q_.size();
        L_.assign(J + 1, std::vector<double>(E_ + 1, ninf));
        L_[0][0] = 0.0;
        for (std::size_t j = 1; j <= J; ++j) {
            L_[j] = L_[j - 1];
            long long q = q_[j - 1];
            if (q <= 0) throw OutOfRange("OccupancySampler: non-positive level energy");
            for (long long e = q; e <= E_; ++e) {
                double a = L_[j][e], bb = L_[j][e - q];
                if (bb == ninf) continue;
                if (a == ninf) {
                    L_[j][e] = bb;
                } else {
                    double m = std::max(a, bb);
                    L_[j][e] = m + std::log1p(std::exp(std::min(a, bb) - m));
                }
            }
        }
        if (L_[J][E_] == ninf)
            throw InfeasibleProblem("OccupancySampler: energy not representable");
    }
};

// Weak-convergence statistic of the flicker ensemble: prefactor beta^gamma,
// weight gamma x^(gamma-1), lattice positions beta * (i^2 a_i^2 / A0). A
// gamma below `gamma_floor` routes to the planar exponent-1 path.
struct FlickerConvergence {
    condensate::ConvergenceReport report;
    bool routed_to_planar = false;
};

inline FlickerConvergence flicker_weak_convergence(
    const std::vector<std::map<long long, long long>>& occupancies, const Spectrum& spec,
    double gamma, long long s_count, double energy, const condensate::TestFunction& phi,
    double gamma_floor = 0.01) {
    FlickerConvergence out;
    double g = gamma;
    if (gamma < gamma_floor) {
        g = 1.0;
        out.routed_to_planar = true;
    }
    // solve (beta, kappa_hat) of the gamma-ensemble at (E, s)
    solver::ParastatProblem prob;
    prob.n = static_cast<long long>(std::llround(energy));
    prob.k = s_count;
    prob.alpha = g;
    auto R = [&](double kh) {
        double p1 = solver::detail::phi1(kh, static_cast<double>(s_count), g);
        double p2 = solver::detail::phi2(kh, static_cast<double>(s_count), g);
        return (1.0 + g) * std::log(p1 / static_cast<double>(s_count)) -
               g * std::log(p2 / energy);
    };
    double kh = find_root_expand(R, 0.0, 0.05, -50.0, 5e3, 1e-15);
    double beta = std::pow(solver::detail::phi2(kh, static_cast<double>(s_count), g) / energy,
                           1.0 / (1.0 + g));
    condensate::TestFunction phis = phi;
    double I = condensate::detail::weighted_integral(phis, kh, static_cast<double>(s_count), g);
    std::vector<double> ds;
    ds.reserve(occupancies.size());
    double bg = std::pow(beta, g);
    double mean = 0.0;
    for (const auto& occ : occupancies) {
        double lat = 0.0;
        for (const auto& [i, c] : occ) {
            double di = static_cast<double>(i);
            double e_i = (spec.a.empty()) ? di * di
                                          : di * di * spec.a[i] * spec.a[i] / spec.A0;
            lat += static_cast<double>(c) * phis(beta * e_i);
        }
        double d = bg * lat - I;
        ds.push_back(d);
        mean += d;
    }
    if (ds.empty()) throw OutOfRange("flicker_weak_convergence: no samples");
    mean /= static_cast<double>(ds.size());
    double var = 0.0;
    for (double d : ds) var += (d - mean) * (d - mean);
    out.report.n = prob.n;
    out.report.k = s_count;
    out.report.alpha = g;
    out.report.samples = ds.size();
    out.report.statistic = mean;
    out.report.spread = ds.size() > 1 ? std::sqrt(var / static_cast<double>(ds.size() - 1)) : 0.0;
    out.report.integral = I;
    std::vector<double> ad(ds.size());
    for (std::size_t i = 0; i < ds.size(); ++i) ad[i] = std::fabs(ds[i]);
    std::sort(ad.begin(), ad.end());
    out.report.median_abs = (ad.size() % 2) ? ad[ad.size() / 2]
                                            : 0.5 * (ad[ad.size() / 2 - 1] + ad[ad.size() / 2]);
    return out;
}

} // namespace parastat::flicker
