#include "tmlog/optimizer.hpp"

#include "tmlog/admissibility.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

namespace tmlog {

double MaximizerProblem::resolved_alpha() const {
    return alpha ? *alpha : critical_coefficient(params.n, params.beta);
}

double MaximizerProblem::resolved_gamma() const {
    return gamma ? *gamma : critical_exponent(params.n, params.beta);
}

void validate(const MaximizerProblem& prob) {
    validate_moser(prob.params);
    require(prob.params.weight == Weight::w0, "maximize uses the w0 weight");
    require(prob.params.beta >= 0.0 && prob.params.beta < 1.0, "maximize needs 0 <= beta < 1");
    require(prob.grid_size >= 256, "grid_size must be at least 256");
    require(prob.t_max >= 20.0, "t_max must be at least 20");
    require(prob.tol > 0.0 && prob.tol < 1e-2, "tol must lie in (0, 1e-2)");
    require(prob.max_iterations >= 1, "max_iterations must be positive");
    require(prob.jitter >= 0.0 && prob.jitter < 0.5, "jitter must lie in [0, 0.5)");
    require(prob.resolved_alpha() > 0.0, "alpha must be positive");
    require(prob.resolved_gamma() > 1.0, "gamma must exceed 1");
}

std::string_view to_string(Strategy s) { return s == Strategy::ascent ? "ascent" : "fixed_point"; }

namespace {

// Nodal values u_i = |v(t_i)|, i = 0..N with u_0 = 0. Cell i is [t_i, t_{i+1}].
using Nodes = std::vector<double>;

class Discrete {
public:
    explicit Discrete(const MaximizerProblem& prob)
        : n_(prob.params.n), k_(prob.params.k), alpha_(prob.resolved_alpha()), gamma_(prob.resolved_gamma()),
          c_(hessian_normalization(prob.params.n, prob.params.k)), N_(prob.grid_size), T_(prob.t_max),
          h_(prob.t_max / static_cast<double>(prob.grid_size)), gl_(gauss_legendre(8)) {
        // exact cell integrals of the weight t^a
        const double a = prob.params.log_power();
        W_.resize(N_);
        for (std::size_t i = 0; i < N_; ++i)
            W_[i] = (std::pow(node(i + 1), a + 1.0) - std::pow(node(i), a + 1.0)) / (a + 1.0);
    }

    std::size_t cells() const { return N_; }
    double step() const { return h_; }
    double node(std::size_t i) const { return i == N_ ? T_ : h_ * static_cast<double>(i); }

    double energy(const Nodes& u) const {
        double e = 0.0;
        for (std::size_t i = 0; i < N_; ++i) e += std::pow(std::abs(u[i + 1] - u[i]) / h_, k_ + 1) * W_[i];
        return c_ * e;
    }

    double norm(const Nodes& u) const { return std::pow(energy(u), 1.0 / (k_ + 1)); }

    double distance(const Nodes& a, const Nodes& b) const {
        double e = 0.0;
        for (std::size_t i = 0; i < N_; ++i)
            e += std::pow(std::abs((a[i + 1] - a[i]) - (b[i + 1] - b[i])) / h_, k_ + 1) * W_[i];
        return std::pow(c_ * e, 1.0 / (k_ + 1));
    }

    void normalize(Nodes& u) const {
        const double s = 1.0 / norm(u);
        for (double& x : u) x *= s;
    }

    // GL8 per cell plus the constant tail beyond T
    double functional(const Nodes& u) const {
        double sum = 0.0;
        for (std::size_t i = 0; i < N_; ++i) {
            double cell = 0.0;
            for (std::size_t q = 0; q < gl_.x.size(); ++q) {
                const double w = 0.5 * (1.0 + gl_.x[q]);
                const double x = std::abs(u[i] + w * (u[i + 1] - u[i]));
                cell += gl_.w[q] * std::exp(alpha_ * std::pow(x, gamma_) - n_ * (node(i) + w * h_));
            }
            sum += 0.5 * h_ * cell;
        }
        return sum + tail(u[N_]);
    }

    // exact gradient of functional() with respect to u_1..u_N (index 0 unused)
    Nodes gradient(const Nodes& u) const {
        Nodes g(N_ + 1, 0.0);
        for (std::size_t i = 0; i < N_; ++i) {
            for (std::size_t q = 0; q < gl_.x.size(); ++q) {
                const double w = 0.5 * (1.0 + gl_.x[q]);
                const double x = u[i] + w * (u[i + 1] - u[i]);
                const double ax = std::abs(x);
                const double d = ax == 0.0 ? 0.0
                                           : alpha_ * gamma_ * std::pow(ax, gamma_ - 1.0) * std::copysign(1.0, x) *
                                                 std::exp(alpha_ * std::pow(ax, gamma_) - n_ * (node(i) + w * h_));
                const double f = 0.5 * h_ * gl_.w[q] * d;
                g[i] += (1.0 - w) * f;
                g[i + 1] += w * f;
            }
        }
        const double uN = std::abs(u[N_]);
        if (uN > 0.0) g[N_] += alpha_ * gamma_ * std::pow(uN, gamma_ - 1.0) * tail(uN);
        g[0] = 0.0;
        return g;
    }

    // Discrete Euler-Lagrange map: slopes^k proportional to (sum_{j >= i} g_j) / W_{i-1}.
    Nodes el_map(const Nodes& u) const {
        const Nodes g = gradient(u);
        Nodes out(N_ + 1, 0.0);
        double tail_sum = 0.0;
        std::vector<double> slope(N_);
        for (std::size_t i = N_; i >= 1; --i) {
            tail_sum += g[i];
            slope[i - 1] = std::pow(std::max(tail_sum, 0.0) / W_[i - 1], 1.0 / k_);
        }
        for (std::size_t i = 0; i < N_; ++i) out[i + 1] = out[i] + h_ * slope[i];
        normalize(out);
        return out;
    }

    // Solves P d = g with P the weighted second-difference operator of the
    // energy (Hessian of the energy for k = 1, slope-lagged for k > 1).
    Nodes precondition(const Nodes& u, const Nodes& g) const {
        std::vector<double> a(N_);
        double smax = 0.0;
        for (std::size_t i = 0; i < N_; ++i) smax = std::max(smax, std::abs(u[i + 1] - u[i]) / h_);
        for (std::size_t i = 0; i < N_; ++i) {
            const double s = std::max(std::abs(u[i + 1] - u[i]) / h_, 1e-6 * smax);
            a[i] = W_[i] * std::pow(s, k_ - 1) / (h_ * h_);
        }
        // unknowns d_1..d_N; Dirichlet at node 0, natural at node N
        const std::size_t m = N_;
        std::vector<double> diag(m), upper(m, 0.0), rhs(m);
        for (std::size_t r = 0; r < m; ++r) {
            const std::size_t i = r + 1;
            diag[r] = a[i - 1] + (i < N_ ? a[i] : 0.0);
            if (i < N_) upper[r] = -a[i];
            rhs[r] = g[i];
        }
        // Thomas algorithm (P is symmetric positive definite)
        for (std::size_t r = 1; r < m; ++r) {
            const double f = upper[r - 1] / diag[r - 1];
            diag[r] -= f * upper[r - 1];
            rhs[r] -= f * rhs[r - 1];
        }
        Nodes d(N_ + 1, 0.0);
        d[m] = rhs[m - 1] / diag[m - 1];
        for (std::size_t r = m - 1; r-- > 0;) d[r + 1] = (rhs[r] - upper[r] * d[r + 2]) / diag[r];
        return d;
    }

    RadialProfile to_profile(const Nodes& u) const {
        std::vector<double> t(N_ + 1), v(N_ + 1);
        for (std::size_t i = 0; i <= N_; ++i) {
            t[i] = node(i);
            v[i] = -u[i];
        }
        v[0] = 0.0;
        return RadialProfile::sampled(std::move(t), std::move(v));
    }

private:
    int n_, k_;
    double alpha_, gamma_, c_;
    std::size_t N_;
    double T_, h_;
    const GaussRule& gl_;
    std::vector<double> W_;

    // int_T^inf exp(alpha u^gamma - n t) dt for the constant tail value u
    double tail(double u) const { return std::exp(alpha_ * std::pow(std::abs(u), gamma_) - n_ * T_) / n_; }
};

Nodes moser_start(const MaximizerProblem& prob, const Discrete& d) {
    const RadialProfile m = RadialProfile::family(Family::moser_w0, prob.params, 2.0);
    Nodes u(d.cells() + 1);
    for (std::size_t i = 0; i <= d.cells(); ++i) u[i] = std::abs(m.at(d.node(i)));
    return u;
}

// Smooth perturbation supported on the start profile's ramp [0, tb], so the
// plateau beyond it stays exactly flat.
void add_jitter(Nodes& u, const Discrete& d, double amplitude, double tb, unsigned seed) {
    if (amplitude == 0.0) return;
    std::mt19937 gen(seed);
    std::uniform_real_distribution<double> unit(-1.0, 1.0);
    const double xi[3] = {unit(gen), unit(gen), unit(gen)};
    const double sup = *std::max_element(u.begin(), u.end());
    for (std::size_t i = 1; i <= d.cells(); ++i) {
        const double t = d.node(i);
        if (t >= tb) break;
        double p = 0.0;
        for (int m = 0; m < 3; ++m) p += xi[m] * std::sin((m + 1) * M_PI * t / tb);
        u[i] += amplitude * sup * p / 3.0;
    }
}

StrategyRun finish(const Discrete& d, const Nodes& u, int iterations, bool converged, double dev) {
    StrategyRun run;
    run.profile = d.to_profile(u);
    run.value = d.functional(u);
    run.iterations = iterations;
    run.status = converged ? Status::ok : Status::non_converged;
    run.max_sphere_deviation = dev;
    return run;
}

StrategyRun ascent(const MaximizerProblem& prob, const Discrete& d, unsigned seed) {
    Nodes u = moser_start(prob, d);
    add_jitter(u, d, prob.jitter, 2.0 / prob.params.n, seed);
    d.normalize(u);
    double J = d.functional(u);
    double dev = std::abs(d.norm(u) - 1.0);
    std::vector<double> history{J};
    double tau = 1.0;
    for (int it = 1; it <= prob.max_iterations; ++it) {
        Nodes dir = d.precondition(u, d.gradient(u));
        // scale the direction to unit norm so tau is measured on the sphere
        const double dn = d.norm(dir);
        if (!(dn > 0.0) || !std::isfinite(dn)) return finish(d, u, it, true, dev);
        for (double& x : dir) x /= dn;
        bool accepted = false;
        for (int tries = 0; tries < 60; ++tries) {
            Nodes cand(u.size());
            for (std::size_t i = 0; i < u.size(); ++i) cand[i] = u[i] + tau * dir[i];
            d.normalize(cand);
            const double Jc = d.functional(cand);
            if (std::isfinite(Jc) && Jc > J) {
                u = std::move(cand);
                J = Jc;
                dev = std::max(dev, std::abs(d.norm(u) - 1.0));
                accepted = true;
                tau = std::min(tau * 2.0, 1e8);
                break;
            }
            tau *= 0.5;
        }
        // no ascent step exists at this resolution: a discrete maximum
        if (!accepted) return finish(d, u, it, true, dev);
        history.push_back(J);
        if (history.size() > 20 && J - history[history.size() - 21] <= prob.tol * J)
            return finish(d, u, it, true, dev);
    }
    return finish(d, u, prob.max_iterations, false, dev);
}

StrategyRun fixed_point(const MaximizerProblem& prob, const Discrete& d) {
    Nodes u = moser_start(prob, d);
    d.normalize(u);
    double J = d.functional(u);
    double dev = std::abs(d.norm(u) - 1.0);
    double theta = 1.0;
    for (int it = 1; it <= prob.max_iterations; ++it) {
        const Nodes next = d.el_map(u);
        Nodes cand(u.size());
        for (std::size_t i = 0; i < u.size(); ++i) cand[i] = (1.0 - theta) * u[i] + theta * next[i];
        d.normalize(cand);
        const double Jc = d.functional(cand);
        // damp when a full step would lose value
        if (!(Jc >= J * (1.0 - 1e-14)) && theta > 1.0 / 1024) {
            theta *= 0.5;
            continue;
        }
        const double moved = d.distance(cand, u);
        u = std::move(cand);
        J = Jc;
        dev = std::max(dev, std::abs(d.norm(u) - 1.0));
        if (moved < prob.tol) return finish(d, u, it, true, dev);
    }
    return finish(d, u, prob.max_iterations, false, dev);
}

bool tail_is_flat(const RadialProfile& v) {
    // remaining variation over the last unit of t, against the profile's size
    const auto& t = v.nodes();
    const double T = t.back();
    return std::abs(v.at(T) - v.at(T - 1.0)) < 1e-8 * v.sup_abs();
}

} // namespace

StrategyRun run_strategy(const MaximizerProblem& prob, Strategy s, unsigned seed) {
    validate(prob);
    const Discrete d(prob);
    return s == Strategy::ascent ? ascent(prob, d, seed) : fixed_point(prob, d);
}

MaximizerReport maximize(const MaximizerProblem& input, unsigned seed) {
    validate(input);
    MaximizerProblem prob = input;
    MaximizerReport rep;
    for (int attempt = 0; attempt < 2; ++attempt) {
        rep.ascent = run_strategy(prob, Strategy::ascent, seed);
        rep.fixed_point = run_strategy(prob, Strategy::fixed_point, seed);
        const StrategyRun& a = rep.ascent;
        const StrategyRun& b = rep.fixed_point;
        const double ra = el_residual(a.profile, prob.params, prob.resolved_alpha(), prob.resolved_gamma());
        const double rb = el_residual(b.profile, prob.params, prob.resolved_alpha(), prob.resolved_gamma());
        const bool tie = std::abs(a.value - b.value) <= 1e-12 * std::max(a.value, b.value);
        const bool pick_a = tie ? ra <= rb : a.value > b.value;
        const StrategyRun& best = pick_a ? a : b;
        rep.strategy = pick_a ? Strategy::ascent : Strategy::fixed_point;
        rep.profile = best.profile;
        rep.status = best.status;
        rep.el_residual = pick_a ? ra : rb;
        rep.t_max = prob.t_max;
        if (tail_is_flat(rep.profile) || attempt == 1) break;
        prob.t_max *= 2.0;
        prob.grid_size *= 2;
    }
    const Params& p = prob.params;
    const double alpha = prob.resolved_alpha(), gamma = prob.resolved_gamma();
    rep.value = moser_functional(rep.profile, alpha, gamma, p.n).value;
    rep.norm = weighted_norm(rep.profile, p).value;
    rep.lambda = el_multiplier(rep.profile, p, alpha, gamma);

    const auto& v = rep.profile.values();
    const auto& t = rep.profile.nodes();
    const double sup = rep.profile.sup_abs();
    rep.monotone_decreasing = true;
    for (std::size_t i = 1; i < v.size(); ++i)
        if (v[i] > v[i - 1] + 1e-14 * sup) rep.monotone_decreasing = false;
    // |v'(r)| = |dv/dt| / r
    for (std::size_t i = 0; i < t.size(); ++i)
        rep.max_derivative = std::max(rep.max_derivative, std::abs(rep.profile.node_slope(i)) * std::exp(t[i]));
    rep.derivative_at_zero = std::abs(rep.profile.node_slope(t.size() - 1)) * std::exp(t.back());
    rep.admissible = check_admissible(rep.profile, p).admissible;
    return rep;
}

double el_multiplier(const RadialProfile& v, const Params& p, double alpha, double gamma) {
    validate(p);
    const QuadResult q = integrate_half_line(
        [&](double t) {
            const double x = std::pow(std::abs(v.at(t)), gamma);
            return x * std::exp(alpha * x - p.n * t);
        },
        kDefaultRelTol, v.panel_breaks());
    require(q.finite(), "multiplier integral diverges");
    return q.value > 0.0 ? 1.0 / q.value : std::numeric_limits<double>::infinity();
}

double el_residual(const RadialProfile& input, const Params& p, double alpha, double gamma) {
    validate(p);
    require(alpha > 0.0 && gamma > 1.0, "need alpha > 0 and gamma > 1");
    RadialProfile v = input;
    if (v.kind() != RadialProfile::Kind::sampled) {
        double last = 0.0;
        for (double b : v.panel_breaks()) last = std::max(last, b);
        v = v.resample(std::max(20.0, 2.0 * last + 10.0), 8192);
    }
    if (v.sup_abs() == 0.0) return 0.0;
    const double lambda = el_multiplier(v, p, alpha, gamma);
    const double c = hessian_normalization(p.n, p.k);
    const double lp = p.log_power();
    const int n = p.n, gap = p.n - 2 * p.k;
    const auto& t = v.nodes();
    const std::size_t N = t.size() - 1;
    const GaussRule& gl = gauss_legendre(8);

    const auto source = [&](double x) {
        const double a = std::abs(v.at(x));
        return std::exp(-n * x) * std::pow(a, gamma - 1.0) * std::exp(alpha * std::pow(a, gamma));
    };
    const auto gl_int = [&](double a, double b) {
        const double m = 0.5 * (a + b), h = 0.5 * (b - a);
        double s = 0.0;
        for (std::size_t q = 0; q < gl.x.size(); ++q) s += gl.w[q] * source(m + h * gl.x[q]);
        return s * h;
    };
    // cell average of the log weight, exact for a piecewise-constant slope
    const double shift = p.weight == Weight::w0 ? 0.0 : 1.0;
    const auto mean_weight = [&](double a, double b) {
        return (std::pow(b + shift, lp + 1.0) - std::pow(a + shift, lp + 1.0)) / ((lp + 1.0) * (b - a));
    };

    // cumulative source integral from each node to infinity
    const double vN = std::abs(v.values()[N]);
    double above = std::exp(-n * t[N]) * std::pow(vN, gamma - 1.0) * std::exp(alpha * std::pow(vN, gamma)) / n;
    std::vector<double> L(N), R(N);
    for (std::size_t i = N; i-- > 0;) {
        const double mid = 0.5 * (t[i] + t[i + 1]);
        R[i] = lambda * (above + gl_int(mid, t[i + 1]));
        const double s = std::abs(v.values()[i + 1] - v.values()[i]) / (t[i + 1] - t[i]);
        L[i] = c * std::pow(s, p.k) * mean_weight(t[i], t[i + 1]) * std::exp(-gap * mid);
        above += gl_int(t[i], t[i + 1]);
    }
    double diff = 0.0, scale = 0.0;
    for (std::size_t i = 0; i < N; ++i) {
        diff = std::max(diff, std::abs(L[i] - R[i]));
        scale = std::max(scale, R[i]);
    }
    return scale > 0.0 ? diff / scale : 0.0;
}

namespace {

class PowerMap final : public ProfileMap {
public:
    PowerMap(RadialProfile base, double coef, double extra) : base_(std::move(base)), coef_(coef), extra_(extra) {}
    double at(double t) const override {
        const double v = base_.at(t);
        return coef_ * v * std::pow(std::abs(v), extra_);
    }
    double slope(double t) const override {
        const double v = base_.at(t);
        if (v == 0.0) return extra_ == 0.0 ? coef_ * base_.slope(t) : 0.0;
        return coef_ * (1.0 + extra_) * std::pow(std::abs(v), extra_) * base_.slope(t);
    }
    std::vector<double> kinks() const override { return base_.kinks(); }
    std::vector<double> panel_breaks() const override { return base_.panel_breaks(); }
    double support_end() const override { return base_.support_end(); }
    double sup_abs() const override { return coef_ * std::pow(base_.sup_abs(), 1.0 + extra_); }

private:
    RadialProfile base_;
    double coef_, extra_;
};

} // namespace

RadialProfile beta_change(const RadialProfile& v, double beta_from, double beta_to, const Params& p) {
    validate_moser(p);
    require(p.weight == Weight::w0, "beta change is defined for the w0 weight");
    require(beta_to >= 0.0 && beta_to < beta_from && beta_from < 1.0, "beta change needs 0 <= to < from < 1");
    Params from = p, to = p;
    from.beta = beta_from;
    to.beta = beta_to;
    const QuadResult nv = weighted_norm(v, from);
    require(nv.finite() && nv.value <= 1.0 + 1e-8, "beta change needs norm at most 1 under the source weight");
    const int n = p.n;
    const double coef = std::pow(critical_coefficient(n, beta_from) / critical_coefficient(n, beta_to),
                                 n * (1.0 - beta_to) / (n + 2.0));
    const double extra = (beta_from - beta_to) / (1.0 - beta_from);
    return RadialProfile::derived(std::make_shared<PowerMap>(v, coef, extra), to);
}

ConcentrationReport concentration_probe(const Params& p, const std::vector<double>& ells) {
    validate_moser(p);
    require(!ells.empty(), "need at least one ell");
    require(p.weight == Weight::w0, "the probe follows MOSER_W0 and needs weight w0");
    ConcentrationReport rep;
    rep.bound = digamma_bound(p.n);
    const double alpha = critical_coefficient(p.n, p.beta), gamma = critical_exponent(p.n, p.beta);
    for (double ell : ells) {
        const RadialProfile v = RadialProfile::family(Family::moser_w0, p, ell);
        const double J = moser_functional(v, alpha, gamma, p.n).value;
        const double floor = (2.0 - std::exp(-ell)) / p.n;
        rep.ells.push_back(ell);
        rep.values.push_back(J);
        rep.floors.push_back(floor);
        rep.limsup = std::max(rep.limsup, J);
        if (!(J > floor)) rep.above_floor = false;
        if (!(J <= 1.1 * rep.bound)) rep.below_bound = false;
    }
    return rep;
}

} // namespace tmlog
