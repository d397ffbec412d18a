#pragma once

// Debt-crisis application: ingest (size, duration) records into a flow series
// E_i = Nbar_i l_1 / l_i, estimate the inverse temperature b on a
// short-duration window, and compare the mean duration T = sum E / sum Nbar
// against the threshold I2(b)/I1(b) (or T_cr = c0 c^(-1/alpha) b^(-alpha) when
// the integrals are classified divergent).

#include <algorithm>
#include <cmath>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "parastat/common.hpp"
#include "parastat/quadrature.hpp"

namespace parastat::debt {

struct DebtRecord {
    double size = 0.0;     // currency units
    double duration = 0.0; // pay-out period, days
};

struct IngestConfig {
    double duration_window = 0.0;   // bucket width in days; required, no default
    double fill_granularity = 0.0;  // 0 disables virtual gap filling
    double duration_unit_days = 1.0; // input durations are multiplied by this
};

struct FlowSeries {
    std::vector<double> durations_desc; // l_1 >= l_2 >= ...
    std::vector<double> debt_means;     // Nbar_i (bucket debt totals)
    std::vector<double> flows;          // E_i = Nbar_i l_1 / l_i
    std::vector<double> x;              // normalized rank i/count
    std::vector<double> lambda;         // E_i / E_0, E_0 = min flow
    double e0 = 0.0;

    std::size_t size() const { return durations_desc.size(); }
};

struct CrisisVerdict {
    double mean_duration_T = 0.0;
    double threshold = 0.0;
    enum class Kind { integral_ratio, critical_Tcr } threshold_kind = Kind::integral_ratio;
    bool crisis = false;
    double b_estimate = 0.0;
    std::optional<double> alpha_fit; // present on the critical_Tcr branch
};

namespace detail {

inline void recompute_derived(FlowSeries& s) {
    std::size_t n = s.size();
    s.flows.resize(n);
    s.x.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        s.flows[i] = s.debt_means[i] * s.durations_desc[0] / s.durations_desc[i];
        s.x[i] = static_cast<double>(i + 1) / static_cast<double>(n);
    }
    s.e0 = *std::min_element(s.flows.begin(), s.flows.end());
    s.lambda.resize(n);
    for (std::size_t i = 0; i < n; ++i) s.lambda[i] = s.flows[i] / s.e0;
}

// least-squares line a + b x
inline std::pair<double, double> fit_line(const std::vector<double>& x,
                                          const std::vector<double>& y, std::size_t lo,
                                          std::size_t hi) {
    double mx = 0.0, my = 0.0;
    std::size_t n = hi - lo;
    for (std::size_t i = lo; i < hi; ++i) { mx += x[i]; my += y[i]; }
    mx /= n; my /= n;
    double sxx = 0.0, sxy = 0.0;
    for (std::size_t i = lo; i < hi; ++i) {
        sxx += (x[i] - mx) * (x[i] - mx);
        sxy += (x[i] - mx) * (y[i] - my);
    }
    double slope = (sxx > 0.0) ? sxy / sxx : 0.0;
    return {my - slope * mx, slope};
}

inline std::pair<double, double> fit_loglog(const std::vector<double>& x,
                                            const std::vector<double>& y, std::size_t lo,
                                            std::size_t hi) {
    std::vector<double> lx, ly;
    for (std::size_t i = lo; i < hi; ++i) {
        if (x[i] <= 0.0 || y[i] <= 0.0) continue;
        lx.push_back(std::log(x[i]));
        ly.push_back(std::log(y[i]));
    }
    if (lx.size() < 2) throw DivergenceUndetermined("fit_loglog: too few positive knots");
    return fit_line(lx, ly, 0, lx.size());
}

// Bose-weighted mean of lambda over window knots, scaled so large arguments
// cannot underflow the ratio.
inline double weighted_mean_lambda(double b, const std::vector<double>& lam_hat) {
    double umin = std::numeric_limits<double>::infinity();
    for (double l : lam_hat) umin = std::min(umin, b * l);
    double num = 0.0, den = 0.0;
    for (double l : lam_hat) {
        double u = b * l;
        double w = std::exp(-(u - umin)) / (-std::expm1(-std::min(u, 700.0)));
        num += l * w;
        den += w;
    }
    return num / den;
}

// Fritsch-Carlson monotone cubic interpolant
class Pchip {
  public:
    Pchip(std::vector<double> x, std::vector<double> y) : x_(std::move(x)), y_(std::move(y)) {
        std::size_t n = x_.size();
        m_.assign(n, 0.0);
        if (n < 2) { if (n == 1) m_[0] = 0.0; return; }
        std::vector<double> d(n - 1);
        for (std::size_t i = 0; i + 1 < n; ++i) d[i] = (y_[i + 1] - y_[i]) / (x_[i + 1] - x_[i]);
        m_[0] = d[0];
        m_[n - 1] = d[n - 2];
        for (std::size_t i = 1; i + 1 < n; ++i) {
            if (d[i - 1] * d[i] <= 0.0) {
                m_[i] = 0.0;
            } else {
                double w1 = 2.0 * (x_[i + 1] - x_[i]) + (x_[i] - x_[i - 1]);
                double w2 = (x_[i + 1] - x_[i]) + 2.0 * (x_[i] - x_[i - 1]);
                m_[i] = (w1 + w2) / (w1 / d[i - 1] + w2 / d[i]);
            }
        }
    }

    double operator()(double xq) const {
        std::size_t n = x_.size();
        if (xq <= x_.front()) return y_.front();
        if (xq >= x_.back()) return y_.back();
        std::size_t i = std::upper_bound(x_.begin(), x_.end(), xq) - x_.begin() - 1;
        double h = x_[i + 1] - x_[i];
        double t = (xq - x_[i]) / h;
        double t2 = t * t, t3 = t2 * t;
        double h00 = 2 * t3 - 3 * t2 + 1, h10 = t3 - 2 * t2 + t;
        double h01 = -2 * t3 + 3 * t2, h11 = t3 - t2;
        return h00 * y_[i] + h10 * h * m_[i] + h01 * y_[i + 1] + h11 * h * m_[i + 1];
    }

  private:
    std::vector<double> x_, y_, m_;
};

} // namespace detail

// Bucket, sort by duration descending, and (optionally) insert virtual knots
// into duration gaps so that bucket sums of debts and flows are preserved.
inline FlowSeries ingest(const std::vector<DebtRecord>& records, const IngestConfig& cfg) {
    if (!(cfg.duration_window > 0.0))
        throw OutOfRange("ingest: duration_window is required and must be positive");
    for (std::size_t i = 0; i < records.size(); ++i) {
        if (!(records[i].size > 0.0) || !(records[i].duration > 0.0))
            throw NonPositiveValue("ingest: non-positive size or duration at record " +
                                   std::to_string(i + 1));
    }
    // bucket durations by window
    std::map<long long, std::pair<double, double>> buckets; // key -> (duration sum*w, size sum)
    std::map<long long, double> wsum;
    for (const auto& r : records) {
        double dur = r.duration * cfg.duration_unit_days;
        long long key = static_cast<long long>(std::floor(dur / cfg.duration_window));
        buckets[key].first += dur * r.size;
        buckets[key].second += r.size;
        wsum[key] += r.size;
    }
    if (buckets.size() < 3) throw InsufficientData("ingest: need >= 3 distinct durations");
    FlowSeries s;
    for (auto it = buckets.rbegin(); it != buckets.rend(); ++it) {
        s.durations_desc.push_back(it->second.first / it->second.second); // size-weighted mean
        s.debt_means.push_back(it->second.second);
    }
    // virtual fill: geometric interpolation of Nbar across gaps, then an
    // affine correction u + v (l1/l) solving the two conservation equations
    if (cfg.fill_granularity > 0.0) {
        std::vector<double> nd, nn;
        double l1 = s.durations_desc[0];
        for (std::size_t i = 0; i + 1 < s.size(); ++i) {
            nd.push_back(s.durations_desc[i]);
            nn.push_back(s.debt_means[i]);
            double la = s.durations_desc[i], lb = s.durations_desc[i + 1];
            long long steps = static_cast<long long>(std::floor((la - lb) / cfg.fill_granularity));
            if (steps < 2) continue;
            double D = s.debt_means[i] + s.debt_means[i + 1];
            double F = s.debt_means[i] * l1 / la + s.debt_means[i + 1] * l1 / lb;
            std::vector<double> lv, nv;
            for (long long t = 1; t < steps; ++t) {
                double l = la - cfg.fill_granularity * static_cast<double>(t);
                if (l <= lb) break;
                double theta = (std::log(la) - std::log(l)) / (std::log(la) - std::log(lb));
                lv.push_back(l);
                nv.push_back(std::pow(s.debt_means[i], 1.0 - theta) *
                             std::pow(s.debt_means[i + 1], theta));
            }
            // solve 2x2 for Nbar' = Nbar (u + v l1/l): preserve D and F over
            // the bracket pair plus the inserted knots
            double A11 = s.debt_means[i] + s.debt_means[i + 1];
            double A12 = s.debt_means[i] * l1 / la + s.debt_means[i + 1] * l1 / lb;
            double A21 = A12;
            double A22 = s.debt_means[i] * (l1 / la) * (l1 / la) +
                         s.debt_means[i + 1] * (l1 / lb) * (l1 / lb);
            double B1 = D, B2 = F;
            for (std::size_t t = 0; t < lv.size(); ++t) {
                A11 += nv[t];
                A12 += nv[t] * l1 / lv[t];
                A21 += nv[t] * l1 / lv[t];
                A22 += nv[t] * (l1 / lv[t]) * (l1 / lv[t]);
            }
            double det = A11 * A22 - A12 * A21;
            double u = 1.0, v = 0.0;
            if (std::fabs(det) > 1e-12 * std::fabs(A11 * A22)) {
                u = (B1 * A22 - A12 * B2) / det;
                v = (A11 * B2 - B1 * A21) / det;
            }
            auto scale = [&](double nbar, double l) {
                double f = u + v * l1 / l;
                return (f > 0.0) ? nbar * f : nbar; // keep positivity; sums re-checked by tests
            };
            nn.back() = scale(s.debt_means[i], la);
            for (std::size_t t = 0; t < lv.size(); ++t) {
                nd.push_back(lv[t]);
                nn.push_back(scale(nv[t], lv[t]));
            }
            s.debt_means[i + 1] = scale(s.debt_means[i + 1], lb);
        }
        nd.push_back(s.durations_desc.back());
        nn.push_back(s.debt_means.back());
        s.durations_desc = nd;
        s.debt_means = nn;
    }
    detail::recompute_derived(s);
    return s;
}

// T = sum E_i / sum Nbar_i
inline double mean_duration(const FlowSeries& s) {
    if (s.size() == 0) throw EmptySeries("mean_duration: empty series");
    double fe = 0.0, fn = 0.0;
    for (std::size_t i = 0; i < s.size(); ++i) {
        fe += s.flows[i];
        fn += s.debt_means[i];
    }
    return fe / fn;
}

// Estimate b by matching the debt-weighted mean of lambda over the window
// [s, a s] (ranks, 1-based) against the Bose-occupancy model on the fitted
// line segment lambda'(x) = const.
inline double estimate_b(const FlowSeries& series, long long s_rank, double window_factor_a,
                         double linear_tol = 0.1) {
    if (s_rank < 1 || window_factor_a <= 1.0)
        throw WindowOutOfRange("estimate_b: need s >= 1 and a > 1");
    std::size_t lo = static_cast<std::size_t>(s_rank - 1);
    std::size_t hi = std::min<std::size_t>(series.size(),
                                           static_cast<std::size_t>(std::llround(
                                               window_factor_a * static_cast<double>(s_rank))));
    if (lo >= series.size() || hi - lo < 2)
        throw WindowOutOfRange("estimate_b: window [s, a s] not inside the series");
    auto [c0, c1] = detail::fit_line(series.x, series.lambda, lo, hi);
    // linearity check: rms residual relative to the lambda spread
    double rms = 0.0, spread = 0.0, lmean = 0.0;
    for (std::size_t i = lo; i < hi; ++i) lmean += series.lambda[i];
    lmean /= (hi - lo);
    for (std::size_t i = lo; i < hi; ++i) {
        double r = series.lambda[i] - (c0 + c1 * series.x[i]);
        rms += r * r;
        spread += (series.lambda[i] - lmean) * (series.lambda[i] - lmean);
    }
    if (hi - lo > 2 && spread > 0.0 && std::sqrt(rms / spread) > linear_tol)
        throw NonlinearWindow("estimate_b: window is not approximately linear");
    std::vector<double> lam_hat;
    double trel_num = 0.0, trel_den = 0.0;
    for (std::size_t i = lo; i < hi; ++i) {
        lam_hat.push_back(std::max(1e-9, c0 + c1 * series.x[i]));
        trel_num += series.lambda[i] * series.debt_means[i];
        trel_den += series.debt_means[i];
    }
    double trel = trel_num / trel_den;
    auto gap = [&](double lb) { return detail::weighted_mean_lambda(std::exp(lb), lam_hat) - trel; };
    double lb;
    try {
        lb = find_root_expand(gap, 0.0, 0.5, std::log(1e-9), std::log(1e6), 1e-13);
    } catch (const NoConvergence&) {
        throw NoConvergence("estimate_b: windowed ratio outside the model range");
    }
    return std::exp(lb);
}

// Crisis verdict at inverse temperature b. Tail classification: log-log slope
// of lambda over the last quartile of knots; slope > 1 means I1, I2 converge
// and the threshold is I2/I1, otherwise alpha is fitted near the lambda
// minimum and the threshold is T_cr = c0 c^(-1/alpha) b^(-alpha).
inline CrisisVerdict duration_threshold(const FlowSeries& series, double b) {
    if (series.size() < 3) throw InsufficientData("duration_threshold: need >= 3 knots");
    if (!(b > 0.0)) throw OutOfRange("duration_threshold: b must be positive");
    CrisisVerdict v;
    v.b_estimate = b;
    v.mean_duration_T = mean_duration(series);
    std::size_t n = series.size();
    std::size_t q_lo = (n >= 8) ? n - n / 4 : n - 2;
    auto [tc0, tslope] = detail::fit_loglog(series.x, series.lambda, q_lo, n);
    (void)tc0;
    if (tslope > 1.0) {
        v.threshold_kind = CrisisVerdict::Kind::integral_ratio;
        detail::Pchip pch(series.x, series.lambda);
        double x_last = series.x.back(), lam_last = series.lambda.back();
        auto lam_of = [&](double x) {
            if (x <= series.x.front()) return series.lambda.front();
            if (x <= x_last) return pch(x);
            return lam_last * std::pow(x / x_last, tslope);
        };
        quad::Tolerances tol;
        auto w = [&](double x) {
            double u = b * lam_of(x);
            return (u < 700.0) ? std::exp(-u) / (-std::expm1(-u)) : 0.0;
        };
        // upper cut where b lambda(x) ~ 700
        double xc = x_last * std::pow(700.0 / std::max(1e-12, b * lam_last), 1.0 / tslope);
        double upper = std::max(2.0 * x_last, std::min(xc, 1e9));
        double I1 = quad::integrate(w, 0.0, x_last, tol) + quad::integrate(w, x_last, upper, tol);
        auto lw = [&](double x) { return lam_of(x) * w(x); };
        double I2 = quad::integrate(lw, 0.0, x_last, tol) + quad::integrate(lw, x_last, upper, tol);
        if (!(I1 > 0.0)) throw DivergenceUndetermined("duration_threshold: I1 vanished");
        v.threshold = I2 / I1;
    } else {
        v.threshold_kind = CrisisVerdict::Kind::critical_Tcr;
        std::size_t q_hi = std::max<std::size_t>(2, n / 4);
        auto [fc0, fslope] = detail::fit_loglog(series.x, series.lambda, 0, q_hi);
        (void)fc0;
        if (!(fslope > 0.0)) throw DivergenceUndetermined("duration_threshold: lambda not increasing near its minimum");
        double alpha = 1.0 / fslope;
        if (!(alpha > 0.0) || !(alpha < 1.0))
            throw DivergenceUndetermined("duration_threshold: fitted d = 2 alpha outside (0, 2)");
        double c = quad::regularized_c(alpha).value;
        double c0v = quad::bose_integral(1.0, alpha).value;
        v.threshold = c0v * std::pow(c, -1.0 / alpha) * std::pow(b, -alpha);
        v.alpha_fit = alpha;
    }
    v.crisis = v.mean_duration_T < v.threshold; // boundary T == threshold is no crisis
    return v;
}

} // namespace parastat::debt
