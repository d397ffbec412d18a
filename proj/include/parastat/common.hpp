#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>

namespace parastat {

struct Error : std::runtime_error {
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

struct DivergentIntegral : Error { using Error::Error; };
struct NoConvergence : Error { using Error::Error; };
struct InfeasibleProblem : Error { using Error::Error; };
struct PoleAtZero : Error { using Error::Error; };
struct BudgetExceeded : Error { using Error::Error; };
struct OutOfRange : Error { using Error::Error; };
struct HypothesisUnmet : Error { using Error::Error; };
struct InsufficientData : Error { using Error::Error; };
struct NonPositiveValue : Error { using Error::Error; };
struct WindowOutOfRange : Error { using Error::Error; };
struct NonlinearWindow : Error { using Error::Error; };
struct EmptySeries : Error { using Error::Error; };
struct DivergenceUndetermined : Error { using Error::Error; };
struct DegenerateSeries : Error { using Error::Error; };
struct ZeroEnergy : Error { using Error::Error; };
struct IllConditionedFit : Error { using Error::Error; };
struct UnsupportedAlpha : Error { using Error::Error; };

// SplitMix64. Seed derivation contract: the generator for sample index j of a
// run seeded with s is SplitMix64 seeded with mix64(s ^ mix64(j + 1)).
// Uniform doubles come from the top 53 bits, so streams are identical on every
// platform with IEEE-754 doubles.
class SplitMix64 {
  public:
    explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next_u64() {
        state_ += 0x9E3779B97F4A7C15ull;
        return mix64(state_);
    }

    // uniform in [0, 1)
    double next_double() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    static std::uint64_t mix64(std::uint64_t z) {
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
        return z ^ (z >> 31);
    }

    static SplitMix64 for_sample(std::uint64_t seed, std::uint64_t sample_index) {
        return SplitMix64(mix64(seed ^ mix64(sample_index + 1)));
    }

  private:
    std::uint64_t state_;
};

// 1/(e^u - 1) continued through u = 0 by 1/(e^{-u}-1) = -1 - 1/(e^u-1).
inline double bose_g(double u) {
    if (u > 690.0) return 0.0;
    if (u > 1e-5) return 1.0 / std::expm1(u);
    if (u > 0.0) return 1.0 / u - 0.5 + u / 12.0;
    if (u == 0.0) return std::numeric_limits<double>::infinity();
    return -1.0 - bose_g(-u);
}

// d/du [1/(e^u-1)] = -1/(4 sinh^2(u/2)), valid for u of either sign
inline double bose_g_prime(double u) {
    double au = std::fabs(u);
    if (au < 1e-6) return -1.0 / (u * u) + 1.0 / 12.0;
    if (au > 690.0) return 0.0;
    double s = 2.0 * std::sinh(u / 2.0);
    return -1.0 / (s * s);
}

// Brent root finder on a bracketing interval [a, b] with f(a) f(b) <= 0.
template <class F>
double find_root(F&& f, double a, double b, double xtol = 1e-14, int max_iter = 200) {
    double fa = f(a), fb = f(b);
    if (fa == 0.0) return a;
    if (fb == 0.0) return b;
    if (fa * fb > 0.0) throw NoConvergence("find_root: interval does not bracket a root");
    double c = a, fc = fa, d = b - a, e = d;
    for (int it = 0; it < max_iter; ++it) {
        if (std::fabs(fc) < std::fabs(fb)) {
            a = b; b = c; c = a;
            fa = fb; fb = fc; fc = fa;
        }
        double tol1 = 2.0 * std::numeric_limits<double>::epsilon() * std::fabs(b) + 0.5 * xtol;
        double xm = 0.5 * (c - b);
        if (std::fabs(xm) <= tol1 || fb == 0.0) return b;
        if (std::fabs(e) >= tol1 && std::fabs(fa) > std::fabs(fb)) {
            double s = fb / fa, p, q;
            if (a == c) {
                p = 2.0 * xm * s;
                q = 1.0 - s;
            } else {
                double qq = fa / fc, r = fb / fc;
                p = s * (2.0 * xm * qq * (qq - r) - (b - a) * (r - 1.0));
                q = (qq - 1.0) * (r - 1.0) * (s - 1.0);
            }
            if (p > 0.0) q = -q;
            p = std::fabs(p);
            if (2.0 * p < std::min(3.0 * xm * q - std::fabs(tol1 * q), std::fabs(e * q))) {
                e = d;
                d = p / q;
            } else {
                d = xm;
                e = d;
            }
        } else {
            d = xm;
            e = d;
        }
        a = b;
        fa = fb;
        b += (std::fabs(d) > tol1) ? d : (xm > 0 ? tol1 : -tol1);
        fb = f(b);
        if ((fb > 0) == (fc > 0)) {
            c = a;
            fc = fa;
            d = b - a;
            e = d;
        }
    }
    throw NoConvergence("find_root: max iterations");
}

// Expand a bracket around x0 until f changes sign, then solve.
template <class F>
double find_root_expand(F&& f, double x0, double step, double lo_limit, double hi_limit,
                        double xtol = 1e-14) {
    double a = x0, b = x0 + step;
    double fa = f(a);
    double fb = f(b);
    for (int it = 0; it < 200 && fa * fb > 0.0; ++it) {
        if (std::fabs(fa) < std::fabs(fb)) {
            a -= (b - a);
            if (a < lo_limit) a = lo_limit;
            fa = f(a);
        } else {
            b += (b - a);
            if (b > hi_limit) b = hi_limit;
            fb = f(b);
        }
        if (a == lo_limit && b == hi_limit && fa * fb > 0.0)
            throw NoConvergence("find_root_expand: no sign change within limits");
    }
    if (fa * fb > 0.0) throw NoConvergence("find_root_expand: no bracket found");
    return find_root(f, a, b, xtol);
}

} // namespace parastat
