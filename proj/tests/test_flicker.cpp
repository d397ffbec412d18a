#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "parastat/flicker.hpp"

using namespace parastat;
using flicker::Spectrum;
using flicker::TimeSeries;

namespace {

TimeSeries from_amplitudes(const std::vector<double>& a) {
    Spectrum spec;
    spec.a = a;
    TimeSeries ts;
    ts.samples = flicker::reconstruct(spec);
    return ts;
}

Spectrum spectrum_from_power(long long s, double alpha_true, double scale = 1.0) {
    std::vector<double> a(s + 1, 0.0);
    SplitMix64 rng(2024);
    for (long long i = 1; i <= s; ++i) {
        double mag = scale * std::pow(static_cast<double>(i), -alpha_true / 2.0);
        a[i] = (rng.next_double() < 0.5 ? -1.0 : 1.0) * mag;
    }
    TimeSeries ts = from_amplitudes(a);
    return flicker::cosine_transform(ts);
}

} // namespace

TEST_CASE("single-mode series transforms to a single amplitude") {
    const long long s = 48;
    TimeSeries ts;
    for (long long j = 0; j <= s; ++j)
        ts.samples.push_back(std::cos(M_PI * static_cast<double>(j) / static_cast<double>(s)));
    auto spec = flicker::cosine_transform(ts);
    REQUIRE(std::fabs(spec.a[1] - 1.0) < 1e-10);
    for (long long i = 0; i <= s; ++i) {
        if (i == 1) continue;
        REQUIRE(std::fabs(spec.a[i]) < 1e-10);
    }
}

TEST_CASE("constant series is pure DC") {
    TimeSeries ts;
    ts.samples.assign(33, 4.25);
    auto spec = flicker::cosine_transform(ts);
    REQUIRE(std::fabs(spec.a[0] - 4.25) < 1e-12);
    for (std::size_t i = 1; i < spec.a.size(); ++i) REQUIRE(std::fabs(spec.a[i]) < 1e-12);
}

TEST_CASE("random series round trip and Parseval") {
    const long long s = 64;
    TimeSeries ts;
    SplitMix64 rng(99);
    double maxb = 0.0;
    for (long long j = 0; j <= s; ++j) {
        ts.samples.push_back(2.0 * rng.next_double() - 1.0);
        maxb = std::max(maxb, std::fabs(ts.samples.back()));
    }
    auto spec = flicker::cosine_transform(ts);
    auto back = flicker::reconstruct(spec);
    for (long long j = 0; j <= s; ++j)
        REQUIRE(std::fabs(back[j] - ts.samples[j]) < 1e-8 * maxb);
    double sb = 0.0;
    for (double v : ts.samples) sb += v * v;
    double sa = 0.0;
    for (double v : spec.a) sa += v * v;
    REQUIRE(std::fabs(sa - sb) < 1e-8 * sb);
}

TEST_CASE("degenerate series are rejected") {
    TimeSeries ts;
    ts.samples.assign(5, 1.0);
    REQUIRE_THROWS_AS(flicker::cosine_transform(ts), DegenerateSeries);
    ts.samples.assign(33, 0.0);
    REQUIRE_THROWS_AS(flicker::cosine_transform(ts), DegenerateSeries);
}

TEST_CASE("global energy bookkeeping") {
    // single mode a_1 = 1 at s = 10: A0 = 1/10, E = 1/A0 = 10
    Spectrum spec;
    spec.a.assign(11, 0.0);
    spec.a[1] = 1.0;
    spec.A0 = 0.1;
    spec.global_energy = 10.0;
    auto ge = flicker::global_energy(spec);
    REQUIRE(ge.energy == Catch::Approx(10.0));
    REQUIRE(ge.e_s == Catch::Approx(M_PI * M_PI * 10.0 / 100.0));
    // doubling all amplitudes leaves the energy unchanged
    auto sp2 = spectrum_from_power(100, 1.0);
    auto sp2b = spectrum_from_power(100, 1.0, 2.0);
    REQUIRE(sp2.global_energy == Catch::Approx(sp2b.global_energy).epsilon(1e-9));
    // flat spectrum: direct summation oracle
    std::vector<double> flat(101, 0.0);
    for (int i = 0; i <= 100; ++i) flat[i] = 1.0;
    auto tsf = from_amplitudes(flat);
    auto spf = flicker::cosine_transform(tsf);
    double se = 0.0, sa = 0.0;
    for (long long i = 0; i <= 100; ++i) {
        se += static_cast<double>(i * i) * spf.a[i] * spf.a[i];
        sa += spf.a[i] * spf.a[i];
    }
    REQUIRE(spf.global_energy == Catch::Approx(se / (sa / 100.0)).epsilon(1e-9));
    Spectrum zero;
    zero.a.assign(11, 0.0);
    zero.A0 = 0.0;
    REQUIRE_THROWS_AS(flicker::global_energy(zero), ZeroEnergy);
}

TEST_CASE("decay exponent recovery") {
    for (double alpha_true : {0.5, 1.0, 1.5, 2.0}) {
        auto spec = spectrum_from_power(512, alpha_true);
        double fit = flicker::estimate_alpha(spec);
        INFO("alpha_true " << alpha_true << " fit " << fit);
        REQUIRE(std::fabs(fit - alpha_true) <= 0.15);
    }
    // flat spectrum fits zero
    auto flat = spectrum_from_power(512, 0.0);
    REQUIRE(std::fabs(flicker::estimate_alpha(flat)) <= 0.1);
}

TEST_CASE("decay exponent is scale invariant") {
    auto s1 = spectrum_from_power(256, 1.0, 1.0);
    auto s2 = spectrum_from_power(256, 1.0, 7.5);
    REQUIRE(std::fabs(flicker::estimate_alpha(s1) - flicker::estimate_alpha(s2)) < 1e-12);
}

TEST_CASE("ill-conditioned fits are refused") {
    TimeSeries ts;
    for (int j = 0; j <= 32; ++j) ts.samples.push_back(3.0);
    auto spec = flicker::cosine_transform(ts); // DC only
    REQUIRE_THROWS_AS(flicker::estimate_alpha(spec), IllConditionedFit);
    auto good = spectrum_from_power(128, 1.0);
    REQUIRE_THROWS_AS(flicker::estimate_alpha(good, {4, 8}), IllConditionedFit);
}

TEST_CASE("verdict splits on the critical energy") {
    REQUIRE(flicker::flicker_verdict(spectrum_from_power(64, 1.0), 1.0).gamma == 0.25);
    // concentrated low-frequency series: E = s, deep in the explosive regime
    const long long s = 100;
    TimeSeries ts;
    for (long long j = 0; j <= s; ++j)
        ts.samples.push_back(std::cos(M_PI * static_cast<double>(j) / static_cast<double>(s)));
    auto spec = flicker::cosine_transform(ts);
    auto v = flicker::flicker_verdict(spec, 1.0);
    REQUIRE(v.explosive);
    REQUIRE(v.s0_estimate > 0.0);
    REQUIRE(v.s0_estimate == Catch::Approx(static_cast<double>(s) - v.s_tilde));
    // flat spectrum: energy of order s^3, far above critical
    auto flat = spectrum_from_power(100, 0.0);
    auto vf = flicker::flicker_verdict(flat, 0.5);
    REQUIRE_FALSE(vf.explosive);
    REQUIRE(vf.s0_estimate == 0.0);
    REQUIRE_THROWS_AS(flicker::flicker_verdict(spec, 2.0), UnsupportedAlpha);
}

TEST_CASE("verdict monotone in the global energy, one flip") {
    Spectrum spec;
    const long long s = 128;
    spec.a.assign(s + 1, 0.0);
    spec.a[1] = 1.0;
    spec.A0 = 1.0 / static_cast<double>(s);
    int flips = 0;
    bool prev = true;
    double prev_es = 0.0;
    for (double E = 10.0; E < 1e7; E *= 2.0) {
        spec.global_energy = E;
        auto v = flicker::flicker_verdict(spec, 1.0);
        REQUIRE(v.e_s > prev_es);
        prev_es = v.e_s;
        if (v.explosive != prev) ++flips;
        prev = v.explosive;
    }
    REQUIRE(flips == 1);
}

TEST_CASE("occupancy sampler constraints") {
    // levels with energies {1, 4, 9}: energy 5 = 1+4 representable, 6 is not
    std::vector<long long> q{1, 4, 9};
    flicker::OccupancySampler ok(q, 5);
    SplitMix64 rng(1);
    auto occ = ok.sample_unconstrained(rng);
    long long e = 0;
    for (auto& [i, c] : occ) e += q[i - 1] * c;
    REQUIRE(e == 5);
    REQUIRE_THROWS_AS(flicker::OccupancySampler(q, 6), InfeasibleProblem);
}

TEST_CASE("flicker statistic: flat-spectrum bookkeeping and trend") {
    const double gamma = 0.5; // alpha = 0 (flat)
    auto phi = condensate::TestFunction::indicator(0.5, 2.0);
    double med_small = 0.0, med_large = 0.0;
    for (auto [s, E] : {std::pair<long long, long long>{256, 2048}, {1024, 16384}}) {
        std::vector<long long> q;
        long long jmax = static_cast<long long>(std::sqrt(static_cast<double>(E)));
        for (long long j = 1; j <= jmax; ++j) q.push_back(j * j);
        flicker::OccupancySampler sampler(q, E);
        std::vector<std::map<long long, long long>> occs;
        for (std::uint64_t i = 0; occs.size() < 60 && i < 50000; ++i) {
            SplitMix64 rng = SplitMix64::for_sample(77, i);
            auto occ = sampler.sample_unconstrained(rng);
            long long used = 0;
            for (auto& [lvl, c] : occ) used += c;
            if (used <= s) occs.push_back(occ);
        }
        REQUIRE(occs.size() == 60);
        Spectrum flat;
        flat.a.assign(jmax + 1, 1.0);
        flat.A0 = 1.0;
        auto out = flicker::flicker_weak_convergence(occs, flat, gamma, s,
                                                     static_cast<double>(E), phi);
        REQUIRE_FALSE(out.routed_to_planar);
        if (s == 256)
            med_small = out.report.median_abs;
        else
            med_large = out.report.median_abs;
        // phi = 1 reduces to the count normalization per sample
        auto one = condensate::TestFunction::indicator(0.0, 1e12);
        for (int t = 0; t < 5; ++t) {
            std::vector<std::map<long long, long long>> single{occs[t]};
            auto r1 = flicker::flicker_weak_convergence(single, flat, gamma, s,
                                                        static_cast<double>(E), one);
            long long used = 0;
            for (auto& [lvl, c] : occs[t]) used += c;
            double beta_g = r1.report.integral / static_cast<double>(s); // beta^gamma
            double expect = beta_g * (static_cast<double>(used) - static_cast<double>(s));
            REQUIRE(std::fabs(r1.report.statistic - expect) < 1e-5);
        }
    }
    REQUIRE(med_large < med_small);
}

TEST_CASE("gamma at the boundary routes to the planar analogue") {
    Spectrum flat;
    flat.a.assign(65, 1.0);
    flat.A0 = 1.0;
    std::vector<std::map<long long, long long>> occs{{{1, 2}, {2, 1}}};
    auto out = flicker::flicker_weak_convergence(occs, flat, 0.005, 32, 200.0,
                                                 condensate::TestFunction::exp_decay(1.0));
    REQUIRE(out.routed_to_planar);
}
