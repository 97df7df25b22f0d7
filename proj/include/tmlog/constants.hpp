#pragma once

#include <cstdint>
#include <string_view>

namespace tmlog {

// w0(r) = (ln 1/r)^{beta n/2}, w1(r) = (ln e/r)^{beta n/2}
enum class Weight { w0, w1 };

std::string_view to_string(Weight w);
Weight parse_weight(std::string_view s);

struct Params {
    int n = 2;
    int k = 1;
    double beta = 0.0;
    Weight weight = Weight::w0;

    // Exponent of the log factor in the weight.
    double log_power() const { return beta * n / 2.0; }
    bool moser_pair() const { return n == 2 * k; }
};

// Basic validity: n >= 2, k >= 1. Beta is not policed here.
void validate(const Params& p);
// Validity plus n == 2k, needed by every Trudinger-Moser operation.
void validate_moser(const Params& p);

struct SharpConstants {
    double c_n = 0;       // omega_{n-1}/k * C(n-1, k-1)
    double alpha_n = 0;   // n c_n^{2/n}
    double gamma_nb = 0;  // (n+2)/(n(1-beta))
    double alpha_nb = 0;  // n [c_n^{2/n}(1-beta)]^{1/(1-beta)}
};

// Exact integer binomial coefficient. Throws on overflow.
std::uint64_t binomial(int n, int k);

// Surface area of the unit sphere S^{m}, i.e. 2 pi^{(m+1)/2} / Gamma((m+1)/2).
double sphere_area(int m);

double hessian_normalization(int n, int k);

// Requires n == 2k and beta < 1.
SharpConstants compute_constants(const Params& p);

// Critical exponent and coefficient at arbitrary beta < 1 for dimension n = 2k.
double critical_exponent(int n, double beta);
double critical_coefficient(int n, double beta);

double digamma(double x);

// (1/n)(1 + exp(digamma(n/2 + 1) + euler_gamma)) for even n >= 2.
double digamma_bound(int n);

} // namespace tmlog
