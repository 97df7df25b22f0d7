#include "tmlog/quadrature.hpp"

#include <boost/math/special_functions/expint.hpp>
#include <boost/math/special_functions/gamma.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <mutex>
#include <numbers>

namespace tmlog {

namespace {

GaussRule build_rule(int order) {
    GaussRule r;
    r.x.resize(order);
    r.w.resize(order);
    for (int i = 0; i < order; ++i) {
        // Chebyshev-like initial guess, then Newton on P_order.
        double x = std::cos(std::numbers::pi * (i + 0.75) / (order + 0.5));
        double dp = 0.0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0, p1 = x;
            for (int m = 2; m <= order; ++m) {
                const double p2 = ((2.0 * m - 1.0) * x * p1 - (m - 1.0) * p0) / m;
                p0 = p1;
                p1 = p2;
            }
            dp = order * (x * p1 - p0) / (x * x - 1.0);
            const double dx = p1 / dp;
            x -= dx;
            if (std::abs(dx) < 1e-16) break;
        }
        r.x[i] = x;
        r.w[i] = 2.0 / ((1.0 - x * x) * dp * dp);
    }
    return r;
}

// Sum of a small fixed-size buffer in pairwise order.
double pairwise(const double* v, std::size_t n) {
    if (n <= 4) {
        double s = 0.0;
        for (std::size_t i = 0; i < n; ++i) s += v[i];
        return s;
    }
    const std::size_t h = n / 2;
    return pairwise(v, h) + pairwise(v + h, n - h);
}

struct Estimate {
    double value = 0.0;
    double abs_sum = 0.0;
    bool bad = false;
};

Estimate apply_rule(const RealFn& f, double a, double b) {
    const GaussRule& rule = gauss_legendre(kPanelOrder);
    const double c = 0.5 * (a + b);
    const double h = 0.5 * (b - a);
    double terms[kPanelOrder];
    double abs_terms[kPanelOrder];
    Estimate e;
    for (int i = 0; i < kPanelOrder; ++i) {
        const double y = f(c + h * rule.x[i]);
        if (!std::isfinite(y)) e.bad = true;
        terms[i] = rule.w[i] * y;
        abs_terms[i] = std::abs(terms[i]);
    }
    e.value = h * pairwise(terms, kPanelOrder);
    e.abs_sum = std::abs(h) * pairwise(abs_terms, kPanelOrder);
    return e;
}

// Deep enough for algebraic endpoint singularities close to non-integrable.
constexpr int kMaxDepth = 240;

// parent_err is the error estimate one level up. Near an endpoint singularity the
// halving estimate shrinks slowly; the ratio to the parent corrects for the
// remaining geometric tail of errors.
QuadResult adapt(const RealFn& f, double a, double b, const Estimate& whole, double target, int depth,
                 double parent_err) {
    const double m = 0.5 * (a + b);
    const Estimate left = apply_rule(f, a, m);
    const Estimate right = apply_rule(f, m, b);
    QuadResult r;
    if (left.bad || right.bad) {
        r.status = Status::divergent;
        r.value = std::numeric_limits<double>::infinity();
        r.panels_used = 2;
        return r;
    }
    const double two = left.value + right.value;
    const double err = std::abs(two - whole.value);
    const double roundoff = 64.0 * std::numeric_limits<double>::epsilon() * (left.abs_sum + right.abs_sum);
    double err_eff = err;
    double rho = 0.0;
    if (parent_err > 0.0) {
        rho = err / parent_err;
        if (rho > 0.5) err_eff = err * std::min(rho, 0.999) / (1.0 - std::min(rho, 0.999));
    }
    if (depth >= kMaxDepth && rho >= 0.999 && err_eff > target && err > roundoff) {
        // errors stopped shrinking at the finest level: non-integrable endpoint
        r.status = Status::divergent;
        r.value = std::numeric_limits<double>::infinity();
        r.panels_used = 2;
        return r;
    }
    if (err_eff <= target || err <= roundoff || depth >= kMaxDepth || !(m > a && b > m)) {
        r.value = two;
        r.abs_error_estimate = err_eff;
        r.panels_used = 2;
        return r;
    }
    const QuadResult l = adapt(f, a, m, left, 0.5 * target, depth + 1, err);
    if (!l.finite()) return l;
    const QuadResult rr = adapt(f, m, b, right, 0.5 * target, depth + 1, err);
    if (!rr.finite()) return rr;
    r.value = l.value + rr.value;
    r.abs_error_estimate = l.abs_error_estimate + rr.abs_error_estimate;
    r.panels_used = l.panels_used + rr.panels_used;
    return r;
}

std::vector<double> cut_points(double a, double b, std::span<const double> breakpoints) {
    std::vector<double> pts{a};
    for (double x : breakpoints)
        if (x > a && x < b) pts.push_back(x);
    std::sort(pts.begin() + 1, pts.end());
    pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
    pts.push_back(b);
    return pts;
}

// Integrate over consecutive panels with an absolute target shared in proportion
// to panel width.
QuadResult integrate_abs(const RealFn& f, const std::vector<double>& pts, double rel_tol, double abs_target) {
    const std::size_t np = pts.size() - 1;
    std::vector<Estimate> first(np);
    std::vector<double> vals(np);
    for (std::size_t i = 0; i < np; ++i) {
        first[i] = apply_rule(f, pts[i], pts[i + 1]);
        if (first[i].bad) {
            QuadResult r;
            r.status = Status::divergent;
            r.value = std::numeric_limits<double>::infinity();
            r.panels_used = static_cast<int>(i + 1);
            return r;
        }
        vals[i] = first[i].value;
    }
    const double rough = std::abs(pairwise(vals.data(), np));
    const double target = std::max({rel_tol * rough, abs_target, kAbsFloor});
    std::vector<double> parts(np), errs(np);
    QuadResult total;
    for (std::size_t i = 0; i < np; ++i) {
        const QuadResult r = adapt(f, pts[i], pts[i + 1], first[i], target / np, 0, 0.0);
        if (!r.finite()) return r;
        parts[i] = r.value;
        errs[i] = r.abs_error_estimate;
        total.panels_used += r.panels_used;
    }
    total.value = pairwise(parts.data(), np);
    total.abs_error_estimate = pairwise(errs.data(), np);
    return total;
}

void check_tol(double rel_tol) {
    require(rel_tol > 1e-14 && rel_tol < 1e-2, "rel_tol must lie in (1e-14, 1e-2)");
}

} // namespace

const GaussRule& gauss_legendre(int order) {
    require(order >= 1 && order <= 256, "Gauss-Legendre order must be in [1, 256]");
    static std::mutex mu;
    static std::map<int, GaussRule> cache;
    std::lock_guard lock(mu);
    auto it = cache.find(order);
    if (it == cache.end()) it = cache.emplace(order, build_rule(order)).first;
    return it->second;
}

QuadResult integrate(const RealFn& f, double a, double b, double rel_tol, std::span<const double> breakpoints) {
    check_tol(rel_tol);
    require(std::isfinite(a) && std::isfinite(b), "integration limits must be finite");
    if (a == b) return QuadResult{0.0, 0.0, 1, Status::ok};
    if (a > b) {
        QuadResult r = integrate(f, b, a, rel_tol, breakpoints);
        r.value = -r.value;
        return r;
    }
    return integrate_abs(f, cut_points(a, b, breakpoints), rel_tol, 0.0);
}

QuadResult integrate_half_line(const RealFn& g, double rel_tol, std::span<const double> breakpoints) {
    check_tol(rel_tol);
    constexpr int kMaxDoublings = 48;
    double T = 32.0;
    double last_break = 0.0;
    for (double x : breakpoints)
        if (std::isfinite(x)) last_break = std::max(last_break, x);
    QuadResult acc = integrate_abs(g, cut_points(0.0, T, breakpoints), 0.5 * rel_tol, 0.0);
    if (!acc.finite()) return acc;

    std::vector<double> sums{acc.value};
    std::vector<double> increments;
    for (int d = 0; d < kMaxDoublings; ++d) {
        const double abs_target = 0.1 * rel_tol * std::abs(acc.value);
        const QuadResult piece = integrate_abs(g, cut_points(T, 2 * T, breakpoints), rel_tol, abs_target);
        acc.panels_used += piece.panels_used;
        if (!piece.finite()) {
            acc.status = Status::divergent;
            acc.value = std::numeric_limits<double>::infinity();
            return acc;
        }
        acc.value += piece.value;
        acc.abs_error_estimate += piece.abs_error_estimate;
        sums.push_back(acc.value);
        increments.push_back(piece.value);
        T *= 2;

        // a small piece says nothing while structure (a breakpoint) lies further out
        if (T >= last_break &&
            std::abs(piece.value) <= std::max(0.1 * rel_tol * std::abs(acc.value), kAbsFloor)) {
            acc.abs_error_estimate += std::abs(piece.value);
            return acc;
        }

        // Three successive doublings with monotone growth of |S|, and either a
        // growth factor >= 1.5 at each step or increments that fail to shrink.
        const std::size_t m = sums.size();
        if (m >= 4 && T > last_break) {
            bool growing = true, factor = true, stalled = true;
            for (std::size_t i = m - 3; i < m; ++i) {
                const double prev = std::abs(sums[i - 1]);
                const double cur = std::abs(sums[i]);
                growing = growing && cur > prev;
                factor = factor && cur >= 1.5 * prev;
            }
            const std::size_t q = increments.size();
            for (std::size_t i = q - 2; i < q; ++i)
                stalled = stalled && std::abs(increments[i]) >= std::abs(increments[i - 1]);
            if (growing && (factor || stalled)) {
                acc.status = Status::divergent;
                return acc;
            }
        }
    }
    acc.status = Status::non_converged;
    return acc;
}

QuadResult integrate_weighted(const WeightedIntegrand& w, double rel_tol) {
    check_tol(rel_tol);
    require(static_cast<bool>(w.f), "integrand function is empty");
    require(w.r_lo >= 0.0 && w.r_lo < w.r_hi && w.r_hi <= 1.0, "need 0 <= r_lo < r_hi <= 1");
    const double shift = w.logkind == LogKind::one_over_r ? 0.0 : 1.0;
    // r = e^{-t}, dr = e^{-t} dt
    const RealFn g = [&](double t) {
        const double r = std::exp(-t);
        const double lg = t + shift;
        const double logf = w.b == 0.0 ? 1.0 : std::pow(lg, w.b);
        const double fr = w.f(r);
        if (fr == 0.0) return 0.0;
        return fr * std::exp(-(w.a + 1.0) * t) * logf;
    };
    std::vector<double> tb;
    for (double r : w.r_breakpoints)
        if (r > w.r_lo && r < w.r_hi) tb.push_back(-std::log(r));
    const double t_lo = -std::log(w.r_hi);
    if (w.r_lo > 0.0) return integrate(g, t_lo, -std::log(w.r_lo), rel_tol, tb);
    if (t_lo == 0.0) return integrate_half_line(g, rel_tol, tb);
    const RealFn shifted = [&](double s) { return g(s + t_lo); };
    for (double& x : tb) x -= t_lo;
    return integrate_half_line(shifted, rel_tol, tb);
}

double gamma_upper(double eta, double y) {
    require(std::isfinite(eta) && std::isfinite(y) && y >= 0.0, "gamma_upper needs finite eta and y >= 0");
    if (y == 0.0) {
        require(eta > 0.0, "gamma_upper(eta, 0) diverges for eta <= 0");
        return std::tgamma(eta);
    }
    if (eta > 0.0) return boost::math::tgamma(eta, y);
    // Step down from a positive (or zero) order: G(a, y) = (G(a+1, y) - y^a e^{-y}) / a
    const double m = std::ceil(-eta);
    double a = eta + m;
    // a == 0 exactly when eta is a non-positive integer
    double g = a == 0.0 ? boost::math::expint(1, y) : boost::math::tgamma(a, y);
    for (int i = 0; i < static_cast<int>(m); ++i) {
        const double lower = a - 1.0;
        g = (g - std::pow(y, lower) * std::exp(-y)) / lower;
        a = lower;
    }
    return g;
}

double gamma_lower(double eta, double y) {
    require(eta > 0.0 && y >= 0.0 && std::isfinite(y), "gamma_lower needs eta > 0 and y >= 0");
    if (y == 0.0) return 0.0;
    return boost::math::tgamma_lower(eta, y);
}

double h_exp(double eta, double y) {
    require(eta > 0.0 && y >= 0.0 && std::isfinite(y), "h_exp needs eta > 0 and y >= 0");
    if (y == 0.0) return 0.0;
    // sum_m y^{eta+m} / (m! (eta+m)); all terms positive
    double term = std::pow(y, eta);
    double sum = 0.0;
    for (int m = 0; m < 100000; ++m) {
        const double add = term / (eta + m);
        sum += add;
        if (m > y && add < 1e-17 * sum) break;
        term *= y / (m + 1);
    }
    return sum;
}

} // namespace tmlog
