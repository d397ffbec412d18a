#include <catch2/catch_amalgamated.hpp>

#include <cstdio>
#include <fstream>

#include "oracles.hpp"
#include "parastat/partitions.hpp"
#include "parastat/thresholds.hpp"

using namespace parastat;
using partitions::PartitionTable;
using partitions::TableMode;

TEST_CASE("small exact counts") {
    PartitionTable t(30, 30, TableMode::exact);
    REQUIRE(t.count_exact(5, 2) == 2);
    REQUIRE(t.count_at_most_exact(5, 5) == 7);
    for (long long n = 1; n <= 30; ++n) {
        REQUIRE(t.count_exact(n, n) == 1);
        REQUIRE(t.count_exact(n, 1) == 1);
    }
}

TEST_CASE("recurrence holds on every cell") {
    PartitionTable t(200, 200, TableMode::exact);
    for (long long n = 2; n <= 200; ++n)
        for (long long k = 2; k <= n; ++k) {
            mpz_class expect = t.count_exact(n - 1, k - 1);
            if (n - k >= k) expect += t.count_exact(n - k, k);
            REQUIRE(t.count_exact(n, k) == expect);
        }
}

TEST_CASE("pentagonal totals match the table") {
    auto pent = oracles::pentagonal_totals(300);
    PartitionTable t(300, 300, TableMode::exact);
    for (long long n = 0; n <= 300; ++n) REQUIRE(t.count_at_most_exact(n, n) == pent[n]);
}

TEST_CASE("exhaustive enumeration matches for small n") {
    PartitionTable t(14, 14, TableMode::exact);
    for (long long n = 1; n <= 14; ++n) {
        std::vector<long long> counts;
        oracles::enumerate_partitions(n, counts);
        for (long long k = 1; k <= n; ++k)
            REQUIRE(t.count_exact(n, k) == mpz_class(static_cast<long>(counts[k])));
    }
}

TEST_CASE("counting partitions of 10 into at most 2 parts") {
    PartitionTable t(10, 10, TableMode::exact);
    REQUIRE(t.count_at_most_exact(10, 2) == 6);
}

TEST_CASE("log-space agrees with exact counts") {
    PartitionTable ex(500, 500, TableMode::exact);
    PartitionTable lg(500, 500, TableMode::log_space);
    for (long long n : {7, 50, 123, 250, 500})
        for (long long k : {1LL, 2LL, 5LL, n / 3, n / 2, n}) {
            if (k < 1) continue;
            double le = ex.log_count(n, k);
            double ll = lg.log_count(n, k);
            REQUIRE(std::fabs(le - ll) < 1e-12 * std::max(1.0, std::fabs(le)));
        }
    REQUIRE(std::fabs(lg.log_count_at_most(500, 500) - ex.log_count_at_most(500, 500)) <
            1e-12 * ex.log_count_at_most(500, 500));
}

TEST_CASE("sampler covers the 7 partitions of 5 uniformly") {
    PartitionTable t(5, 5, TableMode::exact);
    std::map<std::string, long long> freq;
    const long long N = 70000;
    for (long long i = 0; i < N; ++i) {
        auto occ = t.sample(5, 5, 424242, static_cast<std::uint64_t>(i));
        REQUIRE(occ.sum_total == 5);
        std::string key;
        for (auto& [part, cnt] : occ.counts) key += std::to_string(part) + "x" + std::to_string(cnt) + ";";
        freq[key] += 1;
    }
    REQUIRE(freq.size() == 7);
    double p = 1.0 / 7.0;
    double sigma = std::sqrt(p * (1 - p) / static_cast<double>(N));
    for (auto& [key, cnt] : freq) {
        double f = static_cast<double>(cnt) / static_cast<double>(N);
        INFO(key << " freq " << f);
        REQUIRE(std::fabs(f - p) <= 3.0 * sigma);
    }
}

TEST_CASE("sampling edge cases and invariants") {
    PartitionTable t(60, 60, TableMode::exact);
    auto one = t.sample(1, 9, 7, 0);
    REQUIRE(one.counts.at(1) == 1);
    REQUIRE(one.parts_total == 1);
    REQUIRE(one.n0 == 8);
    // sum and count invariants across a small random grid
    for (std::uint64_t i = 0; i < 200; ++i) {
        SplitMix64 g = SplitMix64::for_sample(99, i);
        long long n = 1 + static_cast<long long>(g.next_u64() % 60);
        long long k = 1 + static_cast<long long>(g.next_u64() % n);
        auto occ = t.sample(n, k, 5, i);
        REQUIRE(occ.sum_total == n);
        REQUIRE(occ.parts_total <= k);
        REQUIRE(occ.n0 == k - occ.parts_total);
        for (auto& [part, cnt] : occ.counts) {
            REQUIRE(part >= 1);
            REQUIRE(cnt >= 1);
        }
    }
    // exactly-k flag
    for (std::uint64_t i = 0; i < 50; ++i) {
        auto occ = t.sample(40, 12, 11, i, /*exactly_k=*/true);
        REQUIRE(occ.parts_total == 12);
        REQUIRE(occ.sum_total == 40);
    }
}

TEST_CASE("sampler is reproducible per seed") {
    PartitionTable t(100, 50, TableMode::log_space);
    auto a = t.sample(100, 50, 1234, 7);
    auto b = t.sample(100, 50, 1234, 7);
    REQUIRE(a.counts == b.counts);
    auto c = t.sample(100, 50, 1235, 7);
    REQUIRE((a.counts != c.counts || a.parts_total == c.parts_total));
}

TEST_CASE("most probable part count") {
    PartitionTable t5(5, 5, TableMode::exact);
    REQUIRE(t5.most_probable_parts(5) == 2);
    PartitionTable t100(100, 100, TableMode::exact);
    long long am = t100.most_probable_parts(100);
    double k0 = thresholds::k0_erdos(100.0).k0;
    REQUIRE(static_cast<double>(am) >= 0.7 * k0);
    REQUIRE(static_cast<double>(am) <= 1.4 * k0);
}

TEST_CASE("part-count distribution is unimodal at n = 2000") {
    PartitionTable t(2000, 600, TableMode::log_space);
    int direction_changes = 0;
    double prev = t.log_count(2000, 1);
    bool rising = true;
    for (long long k = 2; k <= 600; ++k) {
        double cur = t.log_count(2000, k);
        if (rising && cur < prev) {
            rising = false;
            ++direction_changes;
        } else if (!rising && cur > prev) {
            rising = true;
            ++direction_changes;
        }
        prev = cur;
    }
    REQUIRE(direction_changes <= 1);
}

TEST_CASE("budget and range guards") {
    REQUIRE_THROWS_AS(PartitionTable(3001, 3001, TableMode::exact), BudgetExceeded);
    REQUIRE_THROWS_AS(PartitionTable(100000, 100000, TableMode::log_space), BudgetExceeded);
    PartitionTable t(20, 10, TableMode::exact);
    REQUIRE_THROWS_AS(t.count_exact(25, 2), OutOfRange);
    REQUIRE_THROWS_AS(t.count_exact(10, 15), OutOfRange);
}

TEST_CASE("cache round-trip, exact and log") {
    for (auto mode : {TableMode::exact, TableMode::log_space}) {
        PartitionTable t(80, 40, mode);
        std::string path = "/tmp/parastat_cache_test.bin";
        t.save(path);
        auto u = PartitionTable::load(path);
        REQUIRE(u.n_max() == 80);
        REQUIRE(u.k_max() == 40);
        for (long long n : {1, 17, 80})
            for (long long k = 1; k <= std::min<long long>(n, 40); k += 3)
                REQUIRE(t.log_count(n, k) == u.log_count(n, k));
        // identical bytes on re-save
        u.save(path + ".2");
        std::ifstream f1(path, std::ios::binary), f2(path + ".2", std::ios::binary);
        std::string s1((std::istreambuf_iterator<char>(f1)), std::istreambuf_iterator<char>());
        std::string s2((std::istreambuf_iterator<char>(f2)), std::istreambuf_iterator<char>());
        REQUIRE(s1 == s2);
        std::remove(path.c_str());
        std::remove((path + ".2").c_str());
    }
}

TEST_CASE("condensate statistics bookkeeping") {
    PartitionTable t(400, 120, TableMode::exact);
    std::vector<partitions::OccupancyVector> occs;
    for (std::uint64_t i = 0; i < 60; ++i) occs.push_back(t.sample(400, 120, 3, i));
    // hypothesis unmet: k <= k0 skips the band check
    auto skipped = partitions::condensate_statistics(occs, 120, 150.0);
    REQUIRE_FALSE(skipped.band_checked);
    // delta1 sweep: violations are non-increasing in delta1
    double prev = 1.0;
    for (double d1 : {0.05, 0.1, 0.2}) {
        auto st = partitions::condensate_statistics(occs, 120, 40.0, 0.1, d1);
        REQUIRE(st.band_checked);
        REQUIRE(st.violation_fraction <= prev + 1e-12);
        prev = st.violation_fraction;
    }
    REQUIRE_THROWS_AS(partitions::condensate_statistics({}, 10, 5.0), OutOfRange);
}
