#include "tmlog/constants.hpp"

#include "tmlog/error.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <string>

namespace tmlog {

std::string_view to_string(Weight w) { return w == Weight::w0 ? "w0" : "w1"; }

Weight parse_weight(std::string_view s) {
    if (s == "w0" || s == "W0") return Weight::w0;
    if (s == "w1" || s == "W1") return Weight::w1;
    throw ValidationError("weight must be w0 or w1, got '" + std::string(s) + "'");
}

void validate(const Params& p) {
    require(p.n >= 2, "n must be >= 2");
    require(p.k >= 1, "k must be >= 1");
    require(std::isfinite(p.beta), "beta must be finite");
}

void validate_moser(const Params& p) {
    validate(p);
    require(p.n % 2 == 0, "n must be even");
    require(p.n == 2 * p.k, "Trudinger-Moser operations need n == 2k");
}

std::uint64_t binomial(int n, int k) {
    require(n >= 0 && k >= 0 && k <= n, "binomial needs 0 <= k <= n");
    k = std::min(k, n - k);
    std::uint64_t r = 1;
    for (int i = 1; i <= k; ++i) {
        // r * (n - k + i) / i stays integral at every step.
        const std::uint64_t num = static_cast<std::uint64_t>(n - k + i);
        require(r <= std::numeric_limits<std::uint64_t>::max() / num, "binomial overflow");
        r = r * num / static_cast<std::uint64_t>(i);
    }
    return r;
}

double sphere_area(int m) {
    const double h = (m + 1) / 2.0;
    return 2.0 * std::pow(std::numbers::pi, h) / std::tgamma(h);
}

double hessian_normalization(int n, int k) {
    require(n >= 1 && k >= 1 && k <= n, "need 1 <= k <= n");
    return sphere_area(n - 1) / k * static_cast<double>(binomial(n - 1, k - 1));
}

double critical_exponent(int n, double beta) {
    require(beta < 1.0, "critical exponent needs beta < 1");
    return (n + 2.0) / (n * (1.0 - beta));
}

double critical_coefficient(int n, double beta) {
    require(beta < 1.0, "critical coefficient needs beta < 1");
    require(n % 2 == 0 && n >= 2, "n must be even and >= 2");
    const double c = hessian_normalization(n, n / 2);
    return n * std::pow(std::pow(c, 2.0 / n) * (1.0 - beta), 1.0 / (1.0 - beta));
}

SharpConstants compute_constants(const Params& p) {
    validate_moser(p);
    require(p.beta < 1.0, "gamma_nb and alpha_nb need beta < 1");
    SharpConstants s;
    s.c_n = hessian_normalization(p.n, p.k);
    s.alpha_n = p.n * std::pow(s.c_n, 2.0 / p.n);
    s.gamma_nb = critical_exponent(p.n, p.beta);
    s.alpha_nb = p.beta == 0.0 ? s.alpha_n : critical_coefficient(p.n, p.beta);
    return s;
}

double digamma(double x) {
    require(std::isfinite(x), "digamma of non-finite argument");
    if (x <= 0.0) {
        require(x != std::floor(x), "digamma pole at non-positive integer");
        // reflection
        return digamma(1.0 - x) - std::numbers::pi / std::tan(std::numbers::pi * x);
    }
    double acc = 0.0;
    while (x < 6.0) {
        acc -= 1.0 / x;
        x += 1.0;
    }
    const double z = 1.0 / (x * x);
    // Bernoulli tail: B_{2j} / (2j) for j = 1..8
    const double series =
        z * (1.0 / 12 -
             z * (1.0 / 120 -
                  z * (1.0 / 252 -
                       z * (1.0 / 240 -
                            z * (1.0 / 132 -
                                 z * (691.0 / 32760 - z * (1.0 / 12 - z * 3617.0 / 8160)))))));
    return acc + std::log(x) - 0.5 / x - series;
}

double digamma_bound(int n) {
    require(n >= 2 && n % 2 == 0, "digamma bound needs even n >= 2");
    return (1.0 + std::exp(digamma(n / 2.0 + 1.0) + std::numbers::egamma)) / n;
}

} // namespace tmlog
