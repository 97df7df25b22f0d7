#pragma once
// Hand-rolled generators for property tests.

#include "oracle.hpp"

#include <tmlog/profiles.hpp>

#include <cmath>
#include <vector>

namespace gen {

// Non-positive profile with |v| increasing in t, built from a few smooth bumps
// in the slope. Not normalized.
inline tmlog::RadialProfile decreasing_profile(oracle::Gen& g, double t_max = 30.0, std::size_t cells = 600) {
    const int bumps = g.integer(1, 4);
    std::vector<double> amp(bumps), centre(bumps), width(bumps);
    for (int j = 0; j < bumps; ++j) {
        amp[j] = g.uniform(0.05, 1.0);
        centre[j] = g.uniform(0.0, 0.6 * t_max);
        width[j] = g.uniform(0.3, 6.0);
    }
    const double floor_slope = g.uniform(0.0, 0.02);
    const double h = t_max / static_cast<double>(cells);
    std::vector<double> t(cells + 1), v(cells + 1, 0.0);
    for (std::size_t i = 0; i <= cells; ++i) t[i] = h * static_cast<double>(i);
    for (std::size_t i = 1; i <= cells; ++i) {
        const double tm = t[i] - 0.5 * h;
        double s = floor_slope * std::exp(-tm / t_max);
        for (int j = 0; j < bumps; ++j) s += amp[j] * std::exp(-0.5 * std::pow((tm - centre[j]) / width[j], 2));
        v[i] = v[i - 1] - s * h;
    }
    t.back() = t_max;
    return tmlog::RadialProfile::sampled(std::move(t), std::move(v));
}

inline tmlog::RadialProfile normalized(const tmlog::RadialProfile& v, const tmlog::Params& p) {
    const double nrm = tmlog::weighted_norm(v, p).value;
    return v.scaled(1.0 / nrm);
}

} // namespace gen
