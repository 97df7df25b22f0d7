#include "tmlog/admissibility.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace tmlog {

namespace {

std::vector<double> positive_kinks(const RadialProfile& v) {
    std::vector<double> k = v.kinks();
    k.erase(std::remove_if(k.begin(), k.end(), [](double x) { return !(x > 0.0); }), k.end());
    std::sort(k.begin(), k.end());
    k.erase(std::unique(k.begin(), k.end()), k.end());
    return k;
}

struct Grid {
    std::vector<double> t;
    std::vector<double> slope;  // dv/dt at each t
    // false where a sampled slope is a difference of values equal to within roundoff
    std::vector<bool> resolved;
    bool one_sided_ends = false;
};

Grid evaluation_grid(const RadialProfile& v) {
    Grid g;
    if (v.kind() == RadialProfile::Kind::sampled) {
        g.t = v.nodes();
        g.slope.resize(g.t.size());
        for (std::size_t i = 0; i < g.t.size(); ++i) g.slope[i] = v.node_slope(i);
        g.one_sided_ends = true;
        const auto& val = v.values();
        const double floor = 1e-10 * v.sup_abs();
        const std::size_t m = val.size();
        g.resolved.assign(m, true);
        for (std::size_t i = 0; i < m; ++i) {
            const std::size_t lo = i == 0 ? 0 : i - 1, hi = i + 1 == m ? i : i + 1;
            g.resolved[i] = std::abs(val[hi] - val[lo]) > floor;
        }
        return g;
    }
    std::vector<double> breaks = v.panel_breaks();
    breaks.erase(std::remove_if(breaks.begin(), breaks.end(), [](double x) { return !(x > 0.0); }), breaks.end());
    std::sort(breaks.begin(), breaks.end());
    breaks.erase(std::unique(breaks.begin(), breaks.end()), breaks.end());
    const double last = breaks.empty() ? 0.0 : breaks.back();
    const double span = std::max(20.0, 2.0 * last + 10.0);
    constexpr int kCells = 4096;
    for (int i = 1; i <= kCells; ++i) g.t.push_back(span * i / kCells);
    // refine between neighbouring breaks so narrow smoothing zones are resolved
    for (std::size_t i = 0; i + 1 < breaks.size(); ++i) {
        const double a = breaks[i], b = breaks[i + 1];
        if (b - a >= span / kCells) continue;
        for (int m = 1; m < 16; ++m) g.t.push_back(a + (b - a) * m / 16.0);
    }
    for (double b : breaks) {
        // one point on each side of every break, close enough to see a jump
        const double d = 1e-7 * std::max(1.0, b);
        g.t.push_back(b - d);
        g.t.push_back(b + d);
    }
    std::sort(g.t.begin(), g.t.end());
    g.t.erase(std::unique(g.t.begin(), g.t.end()), g.t.end());
    g.t.erase(std::remove_if(g.t.begin(), g.t.end(), [](double x) { return !(x > 0.0); }), g.t.end());
    g.slope.resize(g.t.size());
    for (std::size_t i = 0; i < g.t.size(); ++i) g.slope[i] = v.slope(g.t[i]);
    g.resolved.assign(g.t.size(), true);
    return g;
}

// r^{n-j} (u')^j with u' = -(dv/dt) e^t
double flux_at(double t, double s, int n, int j) {
    const double up = -s;
    const double pw = (j % 2 == 1) ? std::copysign(std::pow(std::abs(up), j), up) : std::pow(std::abs(up), j);
    return std::exp(-(n - 2.0 * j) * t) * pw;
}

// Sampled grids drop the end nodes, whose slopes are one-sided.
std::vector<FluxSample> flux_on(const Grid& g, int n, int j) {
    std::vector<FluxSample> out;
    const std::size_t m = g.t.size();
    if (m < 3) return out;
    const std::size_t skip = g.one_sided_ends ? 1 : 0;
    std::vector<double> f(m), r(m);
    for (std::size_t i = 0; i < m; ++i) {
        f[i] = flux_at(g.t[i], g.slope[i], n, j);
        r[i] = std::exp(-g.t[i]);
    }
    out.reserve(m - 2);
    for (std::size_t i = 1 + skip; i + 1 + skip < m; ++i)
        out.push_back({r[i], f[i], (f[i + 1] - f[i - 1]) / (r[i + 1] - r[i - 1]),
                       g.resolved[i - 1] && g.resolved[i + 1]});
    return out;
}

} // namespace

std::vector<FluxSample> flux_derivative(const RadialProfile& v, const Params& p, int j) {
    validate(p);
    require(j >= 1 && j <= p.k, "j must lie in 1..k");
    return flux_on(evaluation_grid(v), p.n, j);
}

AdmissibilityReport check_admissible(const RadialProfile& v, const Params& p) {
    validate(p);
    AdmissibilityReport rep;
    const Grid g = evaluation_grid(v);
    require(g.t.size() >= 3, "profile grid too small for admissibility");

    double max_slope = 0.0;
    for (double s : g.slope) max_slope = std::max(max_slope, std::abs(s));
    for (double s : g.slope)
        if (s > 1e-10 * max_slope) rep.monotone = false;

    // stencils straddling a slope jump are excluded and the jump is reported
    std::vector<double> jumps;
    if (v.kind() != RadialProfile::Kind::sampled) {
        for (double b : positive_kinks(v)) {
            const double d = 1e-9 * std::max(1.0, b);
            if (std::abs(v.slope(b - d) - v.slope(b + d)) > 1e-8 * max_slope) {
                jumps.push_back(b);
                rep.flagged_r.push_back(std::exp(-b));
            }
        }
    }
    auto straddles = [&](std::size_t i) {
        // jumps are only tracked on non-sampled grids, where sample i sits at grid index i + 1
        if (jumps.empty()) return false;
        const double lo = g.t[i], hi = g.t[i + 2];
        return std::any_of(jumps.begin(), jumps.end(), [&](double b) { return b >= lo && b <= hi; });
    };

    std::vector<std::vector<FluxSample>> samples;
    for (int j = 1; j <= p.k; ++j) {
        samples.push_back(flux_on(g, p.n, j));
        for (const auto& s : samples.back()) rep.scale = std::max(rep.scale, std::abs(s.flux));
    }
    rep.tol = 1e-8 * rep.scale;

    rep.admissible = true;
    double worst = std::numeric_limits<double>::infinity();
    for (int j = 1; j <= p.k; ++j) {
        JCheck c;
        c.j = j;
        if (!rep.monotone && j % 2 == 0) {
            rep.admissible = false;
            rep.per_j.push_back(c);
            continue;
        }
        double m = std::numeric_limits<double>::infinity();
        const auto& ss = samples[j - 1];
        for (std::size_t i = 0; i < ss.size(); ++i) {
            if (!ss[i].resolved || straddles(i)) continue;
            if (ss[i].derivative < m) {
                m = ss[i].derivative;
                c.worst_r = ss[i].r;
            }
        }
        c.min = m;
        if (m < -rep.tol) rep.admissible = false;
        if (m < worst) {
            worst = m;
            rep.worst_r = c.worst_r;
        }
        rep.per_j.push_back(c);
    }
    return rep;
}

namespace {

// C^2 cutoff: 1 on [0, a], 0 beyond b, quintic smoothstep in between.
struct Cutoff {
    double a, b;
    double value(double d) const {
        if (d <= a) return 1.0;
        if (d >= b) return 0.0;
        const double x = (d - a) / (b - a);
        return 1.0 - x * x * x * (10.0 - 15.0 * x + 6.0 * x * x);
    }
    double derivative(double d) const {
        if (d <= a || d >= b) return 0.0;
        const double x = (d - a) / (b - a);
        return -30.0 * x * x * (1.0 - x) * (1.0 - x) / (b - a);
    }
};

class SmoothedMap final : public ProfileMap {
public:
    SmoothedMap(RadialProfile base, std::vector<double> kinks, double eps)
        : base_(std::move(base)), kinks_(std::move(kinks)), eps_(eps), half_(eps / 4.0), cut_{eps / 4.0, eps} {}

    double at(double t) const override {
        const double b = nearest(t);
        const double d = std::abs(t - b);
        if (d >= eps_) return base_.at(t);
        const double conv = convolve(t, b, false);
        if (d <= half_) return conv;
        const double v = base_.at(t);
        return v + cut_.value(d) * (conv - v);
    }

    double slope(double t) const override {
        const double b = nearest(t);
        const double d = std::abs(t - b);
        if (d >= eps_) return base_.slope(t);
        const double conv_s = convolve(t, b, true);
        if (d <= half_) return conv_s;
        const double v = base_.at(t), s = base_.slope(t);
        const double conv = convolve(t, b, false);
        const double dphi = cut_.derivative(d) * (t > b ? 1.0 : -1.0);
        return s + dphi * (conv - v) + cut_.value(d) * (conv_s - s);
    }

    std::vector<double> kinks() const override { return {}; }

    std::vector<double> panel_breaks() const override {
        std::vector<double> out;
        for (double b : kinks_)
            for (double o : {-eps_, -half_, 0.0, half_, eps_}) out.push_back(b + o);
        // joins of the base that are not kinks stay as they are
        for (double x : base_.panel_breaks())
            if (!std::binary_search(kinks_.begin(), kinks_.end(), x)) out.push_back(x);
        std::sort(out.begin(), out.end());
        out.erase(std::unique(out.begin(), out.end()), out.end());
        return out;
    }

    double support_end() const override { return base_.support_end() + eps_; }
    double sup_abs() const override { return base_.sup_abs(); }

private:
    RadialProfile base_;
    std::vector<double> kinks_;
    double eps_, half_;
    Cutoff cut_;

    double nearest(double t) const {
        const auto it = std::lower_bound(kinks_.begin(), kinks_.end(), t);
        if (it == kinks_.end()) return kinks_.back();
        if (it == kinks_.begin()) return *it;
        return (*it - t) < (t - *(it - 1)) ? *it : *(it - 1);
    }

    // int K(s) f(t - s) ds over |s| < half, split where t - s crosses the kink b
    double convolve(double t, double b, bool of_slope) const {
        const GaussRule& gr = gauss_legendre(16);
        auto piece = [&](double lo, double hi) {
            if (hi <= lo) return 0.0;
            const double c = 0.5 * (lo + hi), h = 0.5 * (hi - lo);
            double acc = 0.0;
            for (std::size_t i = 0; i < gr.x.size(); ++i) {
                const double s = c + h * gr.x[i];
                const double x = s / half_;
                const double k = 1.0 - x * x;
                const double f = of_slope ? base_.slope(t - s) : base_.at(t - s);
                acc += gr.w[i] * k * k * k * f;
            }
            return acc * h;
        };
        const double split = std::clamp(t - b, -half_, half_);
        return (35.0 / 32.0) / half_ * (piece(-half_, split) + piece(split, half_));
    }
};

} // namespace

RadialProfile smooth(const RadialProfile& v, double epsilon) {
    require(std::isfinite(epsilon) && epsilon > 0.0, "epsilon must be positive");
    std::vector<double> kinks = positive_kinks(v);
    if (kinks.empty()) return v;
    double gap = kinks.front();
    for (std::size_t i = 1; i < kinks.size(); ++i) gap = std::min(gap, kinks[i] - kinks[i - 1]);
    require(epsilon < gap / 4.0, "epsilon must be below a quarter of the smallest kink gap (" +
                                     std::to_string(gap / 4.0) + ")");
    return RadialProfile::derived(std::make_shared<SmoothedMap>(v, std::move(kinks), epsilon), v.params());
}

SmoothingSweep smooth_until(const RadialProfile& v, const Params& p, double max_distance) {
    require(max_distance > 0.0, "distance target must be positive");
    SmoothingSweep out{v, 0.0, 0.0, false, false};
    const std::vector<double> kinks = positive_kinks(v);
    if (kinks.empty()) {
        out.admissible = check_admissible(v, p).admissible;
        out.converged = out.admissible;
        return out;
    }
    double gap = kinks.front();
    for (std::size_t i = 1; i < kinks.size(); ++i) gap = std::min(gap, kinks[i] - kinks[i - 1]);
    double eps = 0.5;
    while (eps >= gap / 4.0) eps /= 2.0;
    for (int m = 0; m < 40; ++m, eps /= 2.0) {
        RadialProfile s = smooth(v, eps);
        const QuadResult d = weighted_distance(s, v, p);
        const bool adm = check_admissible(s, p).admissible;
        out = {s, eps, d.value, adm, false};
        if (d.finite() && d.value <= max_distance && adm) {
            out.converged = true;
            break;
        }
    }
    return out;
}

} // namespace tmlog
