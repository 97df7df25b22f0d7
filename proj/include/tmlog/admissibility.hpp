#pragma once

#include "tmlog/profiles.hpp"

#include <optional>
#include <vector>

namespace tmlog {

// Radial k-admissibility of the stored (non-positive, increasing in r) profile u:
//   (r^{n-j} (u')^j)' >= 0  for j = 1..k.
struct JCheck {
    int j = 1;
    // Minimum over the grid; empty when the quantity is ill-posed (even j on a
    // profile that is not monotone).
    std::optional<double> min;
    double worst_r = 1.0;
};

struct AdmissibilityReport {
    std::vector<JCheck> per_j;
    bool admissible = false;
    bool monotone = true;
    double worst_r = 1.0;
    // max_j max_r |r^{n-j} (u')^j|; the tolerance is 1e-8 times this
    double scale = 0.0;
    double tol = 0.0;
    // Radii where u' jumps (u is not C^2 there). Stencils straddling these are
    // left out of the minima.
    std::vector<double> flagged_r;
};

// One evaluation point of the flux derivative d/dr [r^{n-j} (u')^j].
struct FluxSample {
    double r = 0.0;
    double flux = 0.0;       // r^{n-j} (u')^j
    double derivative = 0.0; // centered difference in r
    // false when the stencil's slopes are below the roundoff level of the
    // sampled values; such points do not enter the minima
    bool resolved = true;
};

// Evaluation grid: the nodes of a sampled profile, otherwise 4096 uniform
// points in t up to max(2 * last break + 10, 20).
std::vector<FluxSample> flux_derivative(const RadialProfile& v, const Params& p, int j);

AdmissibilityReport check_admissible(const RadialProfile& v, const Params& p);

// Replaces v near each kink by its convolution with the C^2 kernel
// (1 - s^2)^3 of half-width epsilon/4, blended back into v by a C^2 cutoff
// over the rest of the epsilon-neighbourhood. Agrees with v beyond epsilon of
// every kink. Requires 0 < epsilon < (smallest gap between 0 and the kinks)/4.
RadialProfile smooth(const RadialProfile& v, double epsilon);

struct SmoothingSweep {
    RadialProfile profile;
    double epsilon = 0.0;
    double distance = 0.0;  // weighted norm of smooth(v) - v
    bool admissible = false;
    bool converged = false;
};

// Tries epsilon = 2^-m for m = 1, 2, ... (starting below the allowed maximum)
// until smooth(v) is admissible and within max_distance of v. Gives up after 40
// halvings with converged = false.
SmoothingSweep smooth_until(const RadialProfile& v, const Params& p, double max_distance);

} // namespace tmlog
