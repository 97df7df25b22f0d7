#pragma once
// Shared query grids and a hand-derived reference criterion for Hardy tests.

#include "oracle.hpp"

#include <tmlog/hardy.hpp>

#include <vector>

namespace cases {

using tmlog::LogKind;
using tmlog::hardy::HardyQuery;
using tmlog::hardy::HessianHardyQuery;

// 200 pseudo-random queries: alpha in [-0.9, 3], theta in [-3, 1], nu in
// [-1, q+1], mu in [-2, q], p and q from {1, 1.5, 2, 3}, alternating log kinds.
inline std::vector<HardyQuery> random_grid(unsigned seed = 20240601, int count = 200) {
    oracle::Gen g(seed);
    const double powers[] = {1.0, 1.5, 2.0, 3.0};
    std::vector<HardyQuery> out;
    for (int i = 0; i < count; ++i) {
        HardyQuery h;
        h.p = g.pick(powers);
        h.q = g.pick(powers);
        h.alpha = g.uniform(-0.9, 3.0);
        h.theta = g.uniform(-3.0, 1.0);
        h.nu = g.uniform(-1.0, h.q + 1.0);
        h.mu = g.uniform(-2.0, h.q);
        h.R = 1.0;
        h.log = i % 2 == 0 ? LogKind::one_over_r : LogKind::e_over_r;
        out.push_back(h);
    }
    return out;
}

// Whether the inequality holds, from the endpoint asymptotics of the
// criterion for alpha > -1 and parameters off every threshold. Derived by
// hand: near x = R the left integral is ~ L^{theta+1} (ln R/t kind, theta < -1)
// or bounded; near x = 0 it is ~ ell^theta x^{alpha+1}; the right factor is
// the sup of 1/g (q = 1) or int_x^R g^{-1/(q-1)}.
inline bool generic_holds(const HardyQuery& h) {
    const double a1 = h.alpha + 1.0, p = h.p, q = h.q;
    if (h.log == LogKind::one_over_r) {
        if (q == 1.0) {
            return h.mu < 0 && h.nu < a1 / p && (h.theta > -1 || h.mu <= (h.theta + 1) / p);
        }
        const bool near_R = h.theta > -1 || (h.theta + 1) / p + (q - 1 - h.mu) / q > 0;
        if (h.mu >= q - 1 || !near_R) return false;
        if (h.nu < q - 1) return true;
        return p * (h.nu - q + 1) / q < a1;
    }
    if (q == 1.0) return h.nu < a1 / p;
    return h.nu < q - 1 || p * (h.nu - q + 1) / q < a1;
}

// 500 dimension-style queries on a lattice that hits the thresholds exactly
// (n = 2k, beta n = 2k, p = critical exponent) a good fraction of the time.
inline std::vector<HessianHardyQuery> theorem_grid(tmlog::Weight w, unsigned seed = 777, int count = 500) {
    oracle::Gen g(seed);
    const double alphas[] = {-1.5, -1.0, -0.5, 0.0, 0.5, 1.0, 2.0, 3.0};
    const double betas[] = {-1.0, -0.5, 0.0, 0.25, 0.5, 1.0, 1.5};
    const double ns[] = {-2.0, -1.0, 0.0, 0.5, 1.0, 2.0, 3.0, 4.0, 5.0, 6.0};
    const double ks[] = {0.0, 0.5, 1.0, 1.5, 2.0, 3.0};
    const double ps[] = {1.0, 1.25, 1.5, 2.0, 3.0, 4.0, 6.0};
    std::vector<HessianHardyQuery> out;
    while (static_cast<int>(out.size()) < count) {
        HessianHardyQuery h;
        h.alpha = g.pick(alphas);
        h.beta = g.pick(betas);
        h.n = g.pick(ns);
        h.k = g.pick(ks);
        h.weight = w;
        h.p = g.pick(ps);
        const int mode = g.integer(0, 5);
        if (mode == 0 && h.n > 2 * h.k) {
            const double crit = (h.alpha + 1) * (h.k + 1) / (h.n - 2 * h.k);
            if (crit >= 1.0) h.p = crit;
        } else if (mode == 1 && h.n != 0) {
            h.beta = 2 * h.k / h.n;
        } else if (mode == 2 && h.k == 0 && h.n > 0 && h.alpha > -1) {
            const double p = (h.alpha + 1) / h.n;
            if (p >= 1.0) h.p = p;
        }
        out.push_back(h);
    }
    return out;
}

} // namespace cases
