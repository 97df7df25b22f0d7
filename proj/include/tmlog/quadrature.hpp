#pragma once

#include "tmlog/error.hpp"

#include <functional>
#include <limits>
#include <span>
#include <vector>

namespace tmlog {

struct QuadResult {
    double value = 0.0;
    double abs_error_estimate = 0.0;
    int panels_used = 0;
    Status status = Status::ok;

    bool finite() const { return status == Status::ok; }
};

using RealFn = std::function<double(double)>;

// Nodes and weights on [-1, 1].
struct GaussRule {
    std::vector<double> x;
    std::vector<double> w;
};

// Cached rule of the given order (order >= 1).
const GaussRule& gauss_legendre(int order);

inline constexpr int kPanelOrder = 32;
inline constexpr double kAbsFloor = 1e-15;

// Adaptive dyadic Gauss-Legendre on [a, b]. Breakpoints inside (a, b) start new panels.
// A non-finite integrand value marks the result divergent.
QuadResult integrate(const RealFn& f, double a, double b, double rel_tol,
                     std::span<const double> breakpoints = {});

// Integral over (0, inf). The truncation point doubles from 32 until the last
// increment is negligible; monotone growth across three doublings is reported
// as divergent.
QuadResult integrate_half_line(const RealFn& g, double rel_tol,
                               std::span<const double> breakpoints = {});

enum class LogKind { one_over_r, e_over_r };

// Represents  int_{r_lo}^{r_hi} f(r) r^a L(r)^b dr  with L = ln(1/r) or ln(e/r).
struct WeightedIntegrand {
    RealFn f;
    double a = 0.0;
    double b = 0.0;
    LogKind logkind = LogKind::one_over_r;
    double r_lo = 0.0;
    double r_hi = 1.0;
    std::vector<double> r_breakpoints;
};

// Evaluated after the substitution t = ln(1/r).
QuadResult integrate_weighted(const WeightedIntegrand& w, double rel_tol);

// Gamma(eta, y) = int_y^inf s^{eta-1} e^{-s} ds; any real eta when y > 0.
double gamma_upper(double eta, double y);
// gamma(eta, y) = int_0^y s^{eta-1} e^{-s} ds, eta > 0.
double gamma_lower(double eta, double y);
// h(eta, y) = int_0^y s^{eta-1} e^{s} ds, eta > 0.
double h_exp(double eta, double y);

} // namespace tmlog
