#include "oracle.hpp"

#include <tmlog/constants.hpp>
#include <tmlog/error.hpp>

#include <doctest.h>

#include <cmath>
#include <numbers>

using namespace tmlog;
using std::numbers::pi;

TEST_CASE("binomials are exact") {
    CHECK(binomial(1, 0) == 1);
    CHECK(binomial(3, 1) == 3);
    CHECK(binomial(10, 5) == 252);
    CHECK(binomial(60, 30) == 118264581564861424ULL);
    CHECK_THROWS_AS(binomial(3, 4), ValidationError);
}

TEST_CASE("planar constants") {
    const auto s = compute_constants({2, 1, 0.0, Weight::w0});
    CHECK(s.c_n == doctest::Approx(2 * pi).epsilon(1e-15));
    CHECK(s.gamma_nb == 2.0);
    CHECK(std::abs(s.alpha_nb / (4 * pi) - 1) < 1e-14);
    CHECK(s.alpha_n == s.alpha_nb);
}

TEST_CASE("four dimensional constants") {
    const auto s = compute_constants({4, 2, 0.0, Weight::w0});
    CHECK(std::abs(s.c_n / (3 * pi * pi) - 1) < 1e-14);
    CHECK(s.gamma_nb == 1.5);
    CHECK(std::abs(s.alpha_nb / (4 * std::sqrt(3.0) * pi) - 1) < 1e-14);
}

TEST_CASE("half log weight in the plane") {
    const auto s = compute_constants({2, 1, 0.5, Weight::w0});
    CHECK(s.gamma_nb == 4.0);
    CHECK(std::abs(s.alpha_nb / (2 * pi * pi) - 1) < 1e-14);
}

TEST_CASE("constants reject bad parameters") {
    CHECK_THROWS_AS(compute_constants({2, 1, 1.0, Weight::w0}), ValidationError);
    CHECK_THROWS_AS(compute_constants({4, 1, 0.0, Weight::w0}), ValidationError);
    CHECK_THROWS_AS(compute_constants({1, 1, 0.0, Weight::w0}), ValidationError);
}

TEST_CASE("critical coefficient is continuous at zero") {
    for (int n : {2, 4, 6, 8}) {
        const Params p{n, n / 2, 0.0, Weight::w0};
        const double a0 = compute_constants(p).alpha_n;
        CHECK(std::abs(critical_coefficient(n, 1e-8) / a0 - 1) < 1e-6);
        CHECK(std::abs(critical_coefficient(n, 0.0) / a0 - 1) < 1e-14);
    }
}

TEST_CASE("gamma times (1 - beta) is constant") {
    for (int n : {2, 4, 6}) {
        for (int i = 0; i < 100; ++i) {
            const double beta = i / 100.0;
            CHECK(std::abs(critical_exponent(n, beta) * (1 - beta) - (n + 2.0) / n) < 1e-14);
        }
    }
}

TEST_CASE("digamma against reference") {
    // frozen from a 30-digit reference, cross-checked against the Boost oracle
    CHECK(std::abs(digamma(0.3) - -3.5025242222001331249) < 1e-13);
    CHECK(std::abs(digamma(7.25) - 1.9104535268837360284) < 1e-13);
    CHECK(std::abs(digamma(-2.5) - 1.1031566406452431872) < 1e-12);
    CHECK(std::abs(oracle::digamma(0.3) - -3.5025242222001331249) < 1e-13);
    oracle::Gen g(11);
    for (int i = 0; i < 200; ++i) {
        const double x = g.uniform(0.05, 40.0);
        CHECK(std::abs(digamma(x) - oracle::digamma(x)) < 1e-12 * std::max(1.0, std::abs(oracle::digamma(x))));
        CHECK(std::abs(digamma(x + 1) - digamma(x) - 1 / x) < 1e-12 * std::max(1.0, 1 / x));
    }
    CHECK_THROWS_AS(digamma(-2.0), ValidationError);
}

TEST_CASE("concentration bound values") {
    CHECK(std::abs(digamma_bound(2) - 1.8591409142295226177) < 1e-12);
    CHECK(std::abs(digamma_bound(4) - 1.3704222675845162057) < 1e-12);
    CHECK(std::abs(digamma_bound(6) - 1.2091168253227214527) < 1e-12);
    for (int n = 2; n <= 40; n += 2) {
        const double ref = (1 + std::exp(oracle::digamma(n / 2.0 + 1) + std::numbers::egamma)) / n;
        CHECK(std::abs(digamma_bound(n) - ref) < 1e-12 * ref);
        CHECK(digamma_bound(n) > 1.0 / n);
    }
    CHECK_THROWS_AS(digamma_bound(3), ValidationError);
}
