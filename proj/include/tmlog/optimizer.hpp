#pragma once

#include "tmlog/profiles.hpp"

#include <optional>
#include <string_view>
#include <vector>

namespace tmlog {

// Maximize  J(v) = int_0^1 r^{n-1} exp(alpha |v|^gamma) dr  over profiles of
// unit weighted norm, discretized as piecewise-linear in t = ln(1/r) on a
// uniform grid of grid_size cells over [0, t_max] and constant beyond.
struct MaximizerProblem {
    Params params;  // weight w0, 0 <= beta < 1, n = 2k
    std::size_t grid_size = 4096;
    double t_max = 60.0;
    std::optional<double> alpha;  // defaults to the critical coefficient
    std::optional<double> gamma;  // defaults to the critical exponent
    double tol = 1e-9;
    int max_iterations = 10000;
    // Amplitude, relative to the start profile's sup, of the seeded smooth
    // perturbation added to the ascent's start.
    double jitter = 0.01;

    double resolved_alpha() const;
    double resolved_gamma() const;
};

void validate(const MaximizerProblem& prob);

enum class Strategy { ascent, fixed_point };
std::string_view to_string(Strategy s);

struct StrategyRun {
    RadialProfile profile = RadialProfile::zero();
    double value = 0.0;
    int iterations = 0;
    Status status = Status::ok;
    // largest |norm - 1| seen after any accepted iteration
    double max_sphere_deviation = 0.0;
};

struct MaximizerReport {
    RadialProfile profile = RadialProfile::zero();
    double value = 0.0;
    double lambda = 0.0;
    double el_residual = 0.0;
    bool monotone_decreasing = false;
    // |v'(r)| at the smallest grid radius, and the largest |v'| on the grid
    double derivative_at_zero = 0.0;
    double max_derivative = 0.0;
    bool admissible = false;
    double norm = 0.0;
    Status status = Status::ok;
    Strategy strategy = Strategy::ascent;
    double t_max = 0.0;  // after the doubling rule
    StrategyRun ascent;
    StrategyRun fixed_point;
};

// Runs both strategies and keeps the larger value (ties broken by residual).
// The seed only affects the ascent's start perturbation.
MaximizerReport maximize(const MaximizerProblem& prob, unsigned seed);

// One strategy on a fixed grid, for testing them separately.
StrategyRun run_strategy(const MaximizerProblem& prob, Strategy s, unsigned seed);

// Lagrange multiplier (int r^{n-1} |v|^gamma e^{alpha |v|^gamma} dr)^{-1}.
double el_multiplier(const RadialProfile& v, const Params& p, double alpha, double gamma);

// max |L - R| / max R over cells, where
//   L = c_n r^{n-k} |v'|^k w(r),  R = lambda int_0^r s^{n-1} |v|^{gamma-1} e^{alpha |v|^gamma} ds.
// L uses the cell's constant slope and the cell average of w; R is taken at the
// cell midpoint. Non-sampled profiles are resampled on 8192 cells first.
// Zero for v == 0.
double el_residual(const RadialProfile& v, const Params& p, double alpha, double gamma);

// z = (alpha_{n,from}/alpha_{n,to})^{n(1-to)/(n+2)} v |v|^{(from-to)/(1-from)}, with
// the returned profile carrying beta = to. Requires 0 <= to < from < 1 and the w0 weight.
RadialProfile beta_change(const RadialProfile& v, double beta_from, double beta_to, const Params& p);

struct ConcentrationReport {
    std::vector<double> ells;
    std::vector<double> values;
    std::vector<double> floors;  // (2 - e^{-ell}) / n
    double limsup = 0.0;         // max over the given ells
    double bound = 0.0;          // digamma_bound(n)
    bool above_floor = true;
    bool below_bound = true;     // every value <= 1.1 * bound
};

// J at the critical coefficient and exponent along MOSER_W0(ell).
ConcentrationReport concentration_probe(const Params& p, const std::vector<double>& ells);

} // namespace tmlog
