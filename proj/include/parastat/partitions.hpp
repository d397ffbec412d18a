#pragma once

// Exact partition counting p_k(n), uniform random sampling of partitions into
// at most (or exactly) k parts, and condensate occupancy statistics.
//
// Counts satisfy p_k(n) = p_k(n-k) + p_{k-1}(n-1). Exact mode stores GMP
// integers and is bit-reproducible; log-space mode stores log p_k(n) in
// doubles with log-sum-exp accumulation, crossover at n = 3000.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <map>
#include <string>
#include <vector>

#include <gmpxx.h>

#include "parastat/common.hpp"

namespace parastat::partitions {

enum class TableMode : std::uint8_t { exact = 0, log_space = 1 };

struct OccupancyVector {
    std::map<long long, long long> counts; // part value i -> N_i
    long long parts_total = 0;             // sum N_i
    long long sum_total = 0;               // sum i N_i
    long long n0 = 0;                      // k - parts_total when a budget k is attached
};

struct CondensateStats {
    std::size_t samples = 0;
    double band_halfwidth = 0.0;   // delta1 * k0
    double median_abs_dev = 0.0;   // median |N0 - (k - k0)|
    double violation_fraction = 0.0;
    double bound = 0.0;            // exp(-(k-k0)^(exponent))
    double exponent = 0.0;
    bool band_checked = false;     // false when k <= k0 (hypothesis unmet)
};

class PartitionTable {
  public:
    PartitionTable(long long n_max, long long k_max, TableMode mode)
        : n_max_(n_max), k_max_(std::min(k_max, n_max)), mode_(mode) {
        if (n_max < 0 || k_max < 1) throw OutOfRange("PartitionTable: bad dimensions");
        long double cells = 0;
        for (long long m = 0; m <= n_max_; ++m) cells += std::min(m, k_max_) + 1;
        if (cells > 2e9) throw BudgetExceeded("PartitionTable: more than 2e9 cells");
        if (mode == TableMode::exact && n_max_ > 3000)
            throw BudgetExceeded("PartitionTable: exact mode limited to n_max <= 3000");
        build();
    }

    long long n_max() const { return n_max_; }
    long long k_max() const { return k_max_; }
    TableMode mode() const { return mode_; }

    // p_k(n), exact mode only
    const mpz_class& count_exact(long long n, long long k) const {
        check_range(n, k);
        if (mode_ != TableMode::exact) throw OutOfRange("count_exact: table is log-space");
        return exact_[idx(n, k)];
    }

    // log p_k(n); -inf when p_k(n) = 0
    double log_count(long long n, long long k) const {
        check_range(n, k);
        if (k > std::min(n, k_max_)) return -inf();
        if (mode_ == TableMode::exact) {
            const mpz_class& v = exact_[idx(n, k)];
            if (v == 0) return -inf();
            signed long exp2;
            double d = mpz_get_d_2exp(&exp2, v.get_mpz_t());
            return std::log(d) + static_cast<double>(exp2) * std::log(2.0);
        }
        return logs_[idx(n, k)];
    }

    // sum_{m <= k} p_m(n) as exact integer (exact mode)
    mpz_class count_at_most_exact(long long n, long long k) const {
        check_range(n, k);
        if (mode_ != TableMode::exact) throw OutOfRange("count_at_most_exact: table is log-space");
        mpz_class total = (n == 0) ? 1 : 0;
        for (long long m = 1; m <= std::min(n, k); ++m) total += exact_[idx(n, m)];
        return total;
    }

    // log sum_{m <= k} p_m(n); stable log-sum-exp
    double log_count_at_most(long long n, long long k) const {
        check_range(n, k);
        if (n == 0) return 0.0;
        double mx = -inf();
        for (long long m = 1; m <= std::min(n, k); ++m) mx = std::max(mx, log_count(n, m));
        if (mx == -inf()) return mx;
        double acc = 0.0;
        for (long long m = 1; m <= std::min(n, k); ++m) {
            double l = log_count(n, m);
            if (l > -inf()) acc += std::exp(l - mx);
        }
        return mx + std::log(acc);
    }

    // Uniform sample of a partition of n into at most k parts (default), or
    // exactly k parts. Reproducible: (seed, sample_index) fixes the draw.
    OccupancyVector sample(long long n, long long k, std::uint64_t seed,
                           std::uint64_t sample_index = 0, bool exactly_k = false) const {
        check_range(n, k);
        SplitMix64 rng = SplitMix64::for_sample(seed, sample_index);
        OccupancyVector occ;
        if (n == 0) {
            occ.n0 = k;
            return occ;
        }
        long long j = exactly_k ? k : draw_part_count(n, k, rng);
        occ.parts_total = j;
        occ.n0 = k - j;
        if (j == 0) throw OutOfRange("sample: no partition of n>0 into 0 parts");
        // exactly-j walk: p_j(m) = p_{j-1}(m-1) [smallest part is 1]
        //                        + p_j(m-j)    [strip 1 from every part]
        long long m = n, h = 0;
        while (j > 0) {
            if (m == j) { // only the all-ones partition remains
                occ.counts[1 + h] += j;
                break;
            }
            double u = rng.next_double();
            bool take_one;
            if (mode_ == TableMode::exact) {
                const mpz_class& tot = exact_[idx(m, j)];
                const mpz_class& ones = exact_[idx(m - 1, j - 1)];
                mpz_class r = uniform_below(tot, rng);
                take_one = (r < ones);
                (void)u;
            } else {
                double lp = logs_[idx(m - 1, j - 1)] - logs_[idx(m, j)];
                take_one = (u < std::exp(lp));
            }
            if (take_one) {
                occ.counts[1 + h] += 1;
                m -= 1;
                j -= 1;
            } else {
                m -= j;
                h += 1;
            }
        }
        occ.sum_total = 0;
        for (auto& [i, c] : occ.counts) occ.sum_total += i * c;
        return occ;
    }

    // argmax_k p_k(n); ties broken toward smaller k
    long long most_probable_parts(long long n) const {
        check_range(n, std::min(n, k_max_));
        long long best = 1;
        double best_l = log_count(n, 1);
        for (long long k = 2; k <= std::min(n, k_max_); ++k) {
            double l = log_count(n, k);
            if (l > best_l) {
                best_l = l;
                best = k;
            }
        }
        return best;
    }

    // Versioned cache: magic "PKTB", version u16, mode u8, n_max u64, k_max u64,
    // row-major payload. All integers little-endian; exact cells are
    // (u32 byte count, magnitude bytes LSB first), identical across platforms.
    void save(const std::string& path) const {
        std::ofstream f(path, std::ios::binary);
        if (!f) throw OutOfRange("save: cannot open " + path);
        f.write("PKTB", 4);
        put_u16(f, 1);
        std::uint8_t m = static_cast<std::uint8_t>(mode_);
        f.write(reinterpret_cast<const char*>(&m), 1);
        put_u64(f, static_cast<std::uint64_t>(n_max_));
        put_u64(f, static_cast<std::uint64_t>(k_max_));
        if (mode_ == TableMode::exact) {
            std::vector<unsigned char> buf;
            for (const auto& v : exact_) {
                std::size_t bytes = (mpz_sizeinbase(v.get_mpz_t(), 2) + 7) / 8;
                if (v == 0) bytes = 0;
                buf.resize(bytes);
                std::size_t written = 0;
                if (bytes)
                    mpz_export(buf.data(), &written, -1, 1, -1, 0, v.get_mpz_t());
                put_u32(f, static_cast<std::uint32_t>(written));
                if (written) f.write(reinterpret_cast<const char*>(buf.data()), written);
            }
        } else {
            for (double d : logs_) {
                std::uint64_t bits;
                std::memcpy(&bits, &d, 8);
                put_u64(f, bits);
            }
        }
    }

    static PartitionTable load(const std::string& path) {
        std::ifstream f(path, std::ios::binary);
        if (!f) throw OutOfRange("load: cannot open " + path);
        char magic[4];
        f.read(magic, 4);
        if (!f || std::memcmp(magic, "PKTB", 4) != 0) throw OutOfRange("load: bad magic");
        std::uint16_t ver = get_u16(f);
        if (ver != 1) throw OutOfRange("load: unsupported version");
        std::uint8_t m;
        f.read(reinterpret_cast<char*>(&m), 1);
        std::uint64_t nm = get_u64(f), km = get_u64(f);
        PartitionTable t(static_cast<long long>(nm), static_cast<long long>(km),
                         static_cast<TableMode>(m), FromCache{});
        if (t.mode_ == TableMode::exact) {
            for (auto& v : t.exact_) {
                std::uint32_t len = get_u32(f);
                std::vector<unsigned char> buf(len);
                if (len) f.read(reinterpret_cast<char*>(buf.data()), len);
                v = 0;
                if (len) mpz_import(v.get_mpz_t(), len, -1, 1, -1, 0, buf.data());
            }
        } else {
            for (double& d : t.logs_) {
                std::uint64_t bits = get_u64(f);
                std::memcpy(&d, &bits, 8);
            }
        }
        if (!f) throw OutOfRange("load: truncated cache file");
        return t;
    }

  private:
    struct FromCache {};
    PartitionTable(long long n_max, long long k_max, TableMode mode, FromCache)
        : n_max_(n_max), k_max_(std::min(k_max, n_max)), mode_(mode) {
        if (n_max < 0 || k_max < 1) throw OutOfRange("PartitionTable: bad dimensions");
        allocate();
    }

    long long n_max_, k_max_;
    TableMode mode_;
    std::vector<mpz_class> exact_;
    std::vector<double> logs_;
    std::vector<std::size_t> row_off_;

    static double inf() { return std::numeric_limits<double>::infinity(); }

    std::size_t idx(long long n, long long k) const { return row_off_[n] + k; }

    void check_range(long long n, long long k) const {
        if (n < 0 || n > n_max_ || k < 0 || k > k_max_)
            throw OutOfRange("partition table: (n,k) out of range");
    }

    void allocate() {
        row_off_.resize(n_max_ + 1);
        std::size_t total = 0;
        for (long long m = 0; m <= n_max_; ++m) {
            row_off_[m] = total;
            total += static_cast<std::size_t>(std::min(m, k_max_) + 1);
        }
        if (mode_ == TableMode::exact)
            exact_.assign(total, mpz_class(0));
        else
            logs_.assign(total, -std::numeric_limits<double>::infinity());
    }

    void build() {
        allocate();
        if (mode_ == TableMode::exact) {
            exact_[idx(0, 0)] = 1;
            for (long long m = 1; m <= n_max_; ++m)
                for (long long k = 1; k <= std::min(m, k_max_); ++k) {
                    mpz_class v = 0;
                    if (k - 1 <= std::min(m - 1, k_max_)) v += exact_[idx(m - 1, k - 1)];
                    if (m - k >= 0 && k <= std::min(m - k, k_max_)) v += exact_[idx(m - k, k)];
                    exact_[idx(m, k)] = v;
                }
        } else {
            logs_[idx(0, 0)] = 0.0;
            for (long long m = 1; m <= n_max_; ++m)
                for (long long k = 1; k <= std::min(m, k_max_); ++k) {
                    double a = (k - 1 <= std::min(m - 1, k_max_)) ? logs_[idx(m - 1, k - 1)]
                                                                  : -std::numeric_limits<double>::infinity();
                    double b = (m - k >= 0 && k <= std::min(m - k, k_max_))
                                   ? logs_[idx(m - k, k)]
                                   : -std::numeric_limits<double>::infinity();
                    logs_[idx(m, k)] = log_add(a, b);
                }
        }
    }

    static double log_add(double a, double b) {
        if (a == -std::numeric_limits<double>::infinity()) return b;
        if (b == -std::numeric_limits<double>::infinity()) return a;
        double m = std::max(a, b);
        return m + std::log1p(std::exp(std::min(a, b) - m));
    }

    long long draw_part_count(long long n, long long k, SplitMix64& rng) const {
        long long kc = std::min(n, k);
        if (mode_ == TableMode::exact) {
            mpz_class total = 0;
            for (long long m = 1; m <= kc; ++m) total += exact_[idx(n, m)];
            mpz_class r = uniform_below(total, rng);
            mpz_class acc = 0;
            for (long long m = 1; m <= kc; ++m) {
                acc += exact_[idx(n, m)];
                if (r < acc) return m;
            }
            return kc;
        }
        double mx = -std::numeric_limits<double>::infinity();
        for (long long m = 1; m <= kc; ++m) mx = std::max(mx, logs_[idx(n, m)]);
        double z = 0.0;
        for (long long m = 1; m <= kc; ++m) z += std::exp(logs_[idx(n, m)] - mx);
        double u = rng.next_double() * z, acc = 0.0;
        for (long long m = 1; m <= kc; ++m) {
            acc += std::exp(logs_[idx(n, m)] - mx);
            if (u < acc) return m;
        }
        return kc;
    }

    // uniform integer in [0, bound) via rejection on whole 64-bit limbs
    static mpz_class uniform_below(const mpz_class& bound, SplitMix64& rng) {
        if (bound <= 1) return 0;
        std::size_t bits = mpz_sizeinbase(bound.get_mpz_t(), 2);
        std::size_t words = (bits + 63) / 64;
        while (true) {
            mpz_class r = 0;
            for (std::size_t w = 0; w < words; ++w) {
                mpz_class limb = static_cast<unsigned long>(rng.next_u64() >> 32);
                limb <<= 32;
                limb |= static_cast<unsigned long>(rng.next_u64() & 0xFFFFFFFFull);
                r <<= 64;
                r |= limb;
            }
            std::size_t excess = words * 64 - bits;
            r >>= excess;
            if (r < bound) return r;
        }
    }

    static void put_u16(std::ofstream& f, std::uint16_t v) {
        unsigned char b[2] = {static_cast<unsigned char>(v & 0xFF),
                              static_cast<unsigned char>(v >> 8)};
        f.write(reinterpret_cast<const char*>(b), 2);
    }
    static void put_u32(std::ofstream& f, std::uint32_t v) {
        unsigned char b[4];
        for (int i = 0; i < 4; ++i) b[i] = static_cast<unsigned char>((v >> (8 * i)) & 0xFF);
        f.write(reinterpret_cast<const char*>(b), 4);
    }
    static void put_u64(std::ofstream& f, std::uint64_t v) {
        unsigned char b[8];
        for (int i = 0; i < 8; ++i) b[i] = static_cast<unsigned char>((v >> (8 * i)) & 0xFF);
        f.write(reinterpret_cast<const char*>(b), 8);
    }
    static std::uint16_t get_u16(std::ifstream& f) {
        unsigned char b[2];
        f.read(reinterpret_cast<char*>(b), 2);
        return static_cast<std::uint16_t>(b[0] | (b[1] << 8));
    }
    static std::uint32_t get_u32(std::ifstream& f) {
        unsigned char b[4];
        f.read(reinterpret_cast<char*>(b), 4);
        std::uint32_t v = 0;
        for (int i = 3; i >= 0; --i) v = (v << 8) | b[i];
        return v;
    }
    static std::uint64_t get_u64(std::ifstream& f) {
        unsigned char b[8];
        f.read(reinterpret_cast<char*>(b), 8);
        std::uint64_t v = 0;
        for (int i = 7; i >= 0; --i) v = (v << 8) | b[i];
        return v;
    }
};

// Empirical condensate summary against the concentration band |N0 - (k-k0)| <= delta1*k0.
inline CondensateStats condensate_statistics(const std::vector<OccupancyVector>& samples,
                                             long long k, double k0, double delta = 0.1,
                                             double delta1 = 0.15) {
    if (samples.size() < 30) throw OutOfRange("condensate_statistics: need at least 30 samples");
    CondensateStats st;
    st.samples = samples.size();
    st.band_halfwidth = delta1 * k0;
    std::vector<double> devs;
    devs.reserve(samples.size());
    for (const auto& s : samples)
        devs.push_back(std::fabs(static_cast<double>(s.n0) - (static_cast<double>(k) - k0)));
    std::sort(devs.begin(), devs.end());
    std::size_t n = devs.size();
    st.median_abs_dev = (n % 2) ? devs[n / 2] : 0.5 * (devs[n / 2 - 1] + devs[n / 2]);
    if (static_cast<double>(k) > k0) {
        st.band_checked = true;
        std::size_t viol = 0;
        for (double d : devs)
            if (d > st.band_halfwidth) ++viol;
        st.violation_fraction = static_cast<double>(viol) / static_cast<double>(n);
        st.exponent = 0.5 - delta;
        st.bound = std::exp(-std::pow(static_cast<double>(k) - k0, st.exponent));
    }
    return st;
}

} // namespace parastat::partitions
