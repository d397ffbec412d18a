#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "oracles.hpp"
#include "parastat/partitions.hpp"
#include "parastat/thresholds.hpp"

using namespace parastat;
namespace th = parastat::thresholds;

TEST_CASE("the two planar coefficients are identical") {
    double a = 0.5 / std::sqrt(M_PI * M_PI / 6.0);
    double b = (1.0 / M_PI) * std::sqrt(1.5);
    REQUIRE(std::fabs(a - b) <= 4.0 * std::numeric_limits<double>::epsilon() * a);
}

TEST_CASE("leading-order law values") {
    REQUIRE(std::fabs(th::k0_leading(1e4).k0 - 0.38985 * 100.0 * 9.2103) < 0.2);
    REQUIRE(th::k0_leading(2.0).k0 > 0.0);
    REQUIRE(th::k0_leading(2.0).k0 < 1.0);
    REQUIRE_THROWS_AS(th::k0_leading(1.0), OutOfRange);
}

TEST_CASE("two-term constants") {
    REQUIRE(std::fabs(th::erdos_c() - 2.56510) < 1e-5);
    REQUIRE(std::fabs(th::erdos_alpha_corr() - (-0.4977)) < 1e-3);
}

TEST_CASE("two-term law sits near the exact mode") {
    // k0_erdos > k0_leading / 2 and both within a factor 2 of the table argmax
    double e6_erdos = th::k0_erdos(1e6).k0;
    double e6_lead = th::k0_leading(1e6).k0;
    REQUIRE(e6_erdos > e6_lead / 2.0);
    partitions::PartitionTable t(2000, 400, partitions::TableMode::log_space);
    double am = static_cast<double>(t.most_probable_parts(2000));
    for (double v : {th::k0_erdos(2000.0).k0, th::k0_leading(2000.0).k0}) {
        REQUIRE(v < 2.0 * am);
        REQUIRE(v > 0.5 * am);
    }
}

TEST_CASE("one-dimensional law") {
    // pure n^(2/3) scaling
    double r = th::k0_d1(8e5).k0 / th::k0_d1(1e5).k0;
    REQUIRE(std::fabs(r - 4.0) < 1e-12 * 4.0);
    // value composed from the pinned constant
    double c = quad::c_one_dim().value;
    REQUIRE(std::fabs(th::k0_d1(1e6).k0 - 4.0 * c * c * 1e4) < 1e-6 * th::k0_d1(1e6).k0);
    // grows faster than the planar law
    double r3 = th::k0_d1(1e3).k0 / th::k0_leading(1e3).k0;
    double r9 = th::k0_d1(1e9).k0 / th::k0_leading(1e9).k0;
    REQUIRE(r9 > r3);
}

TEST_CASE("one-dimensional quadratic cross-check shares the scaling") {
    double q1 = th::k0_d1_quadratic(1e6);
    double q2 = th::k0_d1_quadratic(8e6);
    REQUIRE(std::fabs(q2 / q1 - 4.0) < 0.05 * 4.0); // n^(2/3) up to the subleading root
    double ratio = q1 / th::k0_d1(1e6).k0;
    REQUIRE(ratio > 0.3);
    REQUIRE(ratio < 3.0);
    // the half-factor convention moves b but keeps the scaling
    double qh = th::k0_d1_quadratic(1e6, /*half_factor=*/true);
    REQUIRE(qh > 0.0);
    REQUIRE(std::fabs(qh / q1 - std::pow(2.0, 2.0 / 3.0)) < 0.08);
}

TEST_CASE("general-alpha law") {
    // exponent check: n -> n * 2^(1+alpha) doubles k0
    for (double a : {0.3, 0.5, 0.7}) {
        double k1 = th::k0_general(1e6, a).k0;
        double k2 = th::k0_general(1e6 * std::pow(2.0, 1.0 + a), a).k0;
        REQUIRE(std::fabs(k2 / k1 - 2.0) < 1e-10);
    }
    // alpha = 1/2, n = 1e6 pinned by the composed constants
    double c = quad::regularized_c(0.5).value;
    double I = quad::bose_integral(1.0, 0.5).value;
    double expect = c * c * std::pow(1e6, 2.0 / 3.0) * std::pow(I, -2.0 / 3.0);
    REQUIRE(std::fabs(th::k0_general(1e6, 0.5).k0 - expect) < 1e-9 * expect);
    REQUIRE_THROWS_AS(th::k0_general(1e6, 1.0), DivergentIntegral);
    REQUIRE(!th::k0_general(1e6, 0.97).note.empty());
}

TEST_CASE("numeric fixed point") {
    for (double a : {0.3, 0.5, 0.7}) {
        double num = th::k0_numeric(1e6, a).k0;
        double gen = th::k0_general(1e6, a).k0;
        INFO("alpha " << a << " numeric " << num << " general " << gen);
        REQUIRE(std::fabs(num - gen) < 0.05 * gen);
    }
    // the planar fixed point sits a fixed fraction above the two-term law at
    // this scale; pinned from the oracle run (ln ln correction, not 20%)
    double num1 = th::k0_numeric(1e6, 1.0).k0;
    double erd1 = th::k0_erdos(1e6).k0;
    double ratio = num1 / erd1;
    REQUIRE(ratio > 1.25);
    REQUIRE(ratio < 1.40);
}

TEST_CASE("thresholds increase with n") {
    double prev_l = 0, prev_e = 0, prev_d = 0, prev_g = 0, prev_n = 0;
    for (double n : {1e3, 1e4, 1e5, 1e6}) {
        REQUIRE(th::k0_leading(n).k0 > prev_l);
        REQUIRE(th::k0_erdos(n).k0 > prev_e);
        REQUIRE(th::k0_d1(n).k0 > prev_d);
        REQUIRE(th::k0_general(n, 0.5).k0 > prev_g);
        REQUIRE(th::k0_numeric(n, 0.5).k0 > prev_n);
        prev_l = th::k0_leading(n).k0;
        prev_e = th::k0_erdos(n).k0;
        prev_d = th::k0_d1(n).k0;
        prev_g = th::k0_general(n, 0.5).k0;
        prev_n = th::k0_numeric(n, 0.5).k0;
    }
}

TEST_CASE("flicker critical energy") {
    auto f = th::flicker_critical_energy(1.0, 1000.0, 100);
    REQUIRE(f.gamma == 0.25);
    // beta scaling: doubling the energy multiplies beta by 2^(-1/(1+gamma))
    auto f2 = th::flicker_critical_energy(1.0, 2000.0, 100);
    double expect = std::pow(2.0, -1.0 / (1.0 + f.gamma));
    REQUIRE(std::fabs(f2.beta / f.beta - expect) < 1e-6);
    REQUIRE_THROWS_AS(th::flicker_critical_energy(2.0, 10.0, 8), UnsupportedAlpha);
    REQUIRE_THROWS_AS(th::flicker_critical_energy(-0.1, 10.0, 8), UnsupportedAlpha);
    REQUIRE(th::flicker_critical_energy(1.99, 10.0, 8).gamma > 0.0);
    // both s~ conventions are reported
    REQUIRE(f.s_tilde > 0.0);
    REQUIRE(f.s_tilde_analogy > 0.0);
    REQUIRE(f.s_tilde != f.s_tilde_analogy);
}

TEST_CASE("beta from the energy relation matches a direct quadrature solve") {
    // solve int xi d xi^gamma / (e^{beta xi} - 1) = E for beta by root finding
    double gamma = 0.25, E = 5000.0;
    double closed = std::pow(quad::bose_integral(1.0, gamma).value / E, 1.0 / (1.0 + gamma));
    double c0_quad = quad::bose_integral_quad(1.0, gamma).value; // independent route
    auto gap = [&](double lb) {
        double beta = std::exp(lb);
        return std::log(c0_quad * std::pow(beta, -(1.0 + gamma))) - std::log(E);
    };
    double solved = std::exp(find_root(gap, std::log(closed) - 2.0, std::log(closed) + 2.0));
    REQUIRE(std::fabs(solved - closed) < 1e-8 * closed);
}
