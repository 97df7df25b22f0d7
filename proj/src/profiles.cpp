#include "tmlog/profiles.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>
#include <string>

namespace tmlog {

std::string_view to_string(Family f) {
    switch (f) {
    case Family::moser_w0: return "moser-w0";
    case Family::moser_w1: return "moser-w1";
    case Family::dexp: return "dexp";
    case Family::trunc_log: return "trunc-log";
    }
    return "?";
}

Family parse_family(std::string_view s) {
    for (Family f : {Family::moser_w0, Family::moser_w1, Family::dexp, Family::trunc_log})
        if (s == to_string(f)) return f;
    throw ValidationError("unknown family '" + std::string(s) + "' (moser-w0, moser-w1, dexp, trunc-log)");
}

RadialProfile RadialProfile::family(Family f, const Params& p, double index) {
    validate_moser(p);
    require(std::isfinite(index), "family index must be finite");
    RadialProfile v;
    v.kind_ = Kind::closed_form;
    v.family_ = f;
    v.params_ = p;
    v.index_ = index;
    const int n = p.n, k = p.k;
    const double c = hessian_normalization(n, k);
    switch (f) {
    case Family::moser_w0: {
        require(p.weight == Weight::w0, "moser-w0 needs weight w0");
        require(p.beta >= 0.0 && p.beta < 1.0, "moser-w0 needs 0 <= beta < 1");
        require(index >= 1.0, "moser-w0 needs ell >= 1");
        const auto s = compute_constants(p);
        v.amp_ = std::pow(index / s.alpha_nb, 1.0 / s.gamma_nb);
        v.tb_ = index / n;
        break;
    }
    case Family::moser_w1: {
        require(p.weight == Weight::w1, "moser-w1 needs weight w1");
        require(p.beta >= 0.0 && p.beta < 1.0, "moser-w1 needs 0 <= beta < 1");
        require(index > n, "moser-w1 needs ell > n");
        const auto s = compute_constants(p);
        const double L = std::pow(index, 1.0 - p.beta), N = std::pow(static_cast<double>(n), 1.0 - p.beta);
        v.amp_ = std::pow(index / s.alpha_nb, 1.0 / s.gamma_nb) * std::pow(L / (L - N), 1.0 / (k + 1));
        v.tb_ = index / n - 1.0;
        v.extra_ = L;
        break;
    }
    case Family::dexp: {
        require(p.weight == Weight::w1 && p.beta == 1.0, "dexp needs weight w1 with beta = 1");
        require(index >= 1.0, "dexp needs ell >= 1");
        v.amp_ = std::pow(c * std::log1p(index), -1.0 / (k + 1));
        v.tb_ = index;
        break;
    }
    case Family::trunc_log: {
        require(p.beta >= 0.0 && p.beta < 1.0, "trunc-log needs 0 <= beta < 1");
        const double g = critical_exponent(n, p.beta);
        require(index > 0.0 && index < 1.0 / g, "trunc-log needs 0 < eta < 1/gamma");
        v.extra_ = 1.0 / g - index;  // exponent on the inner branch
        v.tb_ = 1.0 / n;
        break;
    }
    }
    return v;
}

RadialProfile RadialProfile::sampled(std::vector<double> t, std::vector<double> v) {
    require(t.size() == v.size(), "sampled profile: t and v differ in length");
    require(t.size() >= 16, "sampled profile needs at least 16 nodes");
    require(t.front() == 0.0 && v.front() == 0.0, "sampled profile must start at t = 0 with v = 0");
    for (std::size_t i = 1; i < t.size(); ++i) {
        require(t[i] > t[i - 1], "sampled profile nodes must increase strictly");
        require(std::isfinite(v[i]), "sampled profile values must be finite");
    }
    RadialProfile p;
    p.kind_ = Kind::sampled;
    const double h = t[1] - t[0];
    p.uniform_ = true;
    for (std::size_t i = 1; i < t.size() && p.uniform_; ++i)
        p.uniform_ = std::abs((t[i] - t[i - 1]) - h) <= 1e-12 * t.back();
    p.t_ = std::move(t);
    p.v_ = std::move(v);
    return p;
}

RadialProfile RadialProfile::derived(std::shared_ptr<const ProfileMap> map, const Params& p) {
    require(map != nullptr, "derived profile needs a map");
    RadialProfile v;
    v.kind_ = Kind::derived;
    v.params_ = p;
    v.map_ = std::move(map);
    return v;
}

RadialProfile RadialProfile::zero() {
    std::vector<double> t(16), v(16, 0.0);
    for (std::size_t i = 0; i < t.size(); ++i) t[i] = static_cast<double>(i);
    return sampled(std::move(t), std::move(v));
}

std::size_t RadialProfile::cell_of(double t) const {
    // index i with t_i <= t < t_{i+1}, clamped to [0, size - 2]
    const std::size_t last = t_.size() - 2;
    if (t <= t_.front()) return 0;
    if (t >= t_.back()) return last;
    if (uniform_) {
        const double h = (t_.back() - t_.front()) / static_cast<double>(t_.size() - 1);
        auto i = static_cast<std::size_t>(t / h);
        i = std::min(i, last);
        while (i > 0 && t < t_[i]) --i;
        while (i < last && t >= t_[i + 1]) ++i;
        return i;
    }
    const auto it = std::upper_bound(t_.begin(), t_.end(), t);
    return std::min(static_cast<std::size_t>(it - t_.begin()) - 1, last);
}

double RadialProfile::at(double t) const {
    if (t <= 0.0) return 0.0;
    if (kind_ == Kind::derived) return map_->at(t);
    if (kind_ == Kind::sampled) {
        if (t >= t_.back()) return v_.back();
        const std::size_t i = cell_of(t);
        const double w = (t - t_[i]) / (t_[i + 1] - t_[i]);
        return v_[i] + w * (v_[i + 1] - v_[i]);
    }
    const int n = params_.n;
    const double b = params_.beta;
    switch (family_) {
    case Family::moser_w0:
        return t >= tb_ ? -amp_ : -amp_ * std::pow(t / tb_, 1.0 - b);
    case Family::moser_w1: {
        const double N = std::pow(static_cast<double>(n), 1.0 - b);
        const double tt = std::min(t, tb_);
        return -amp_ * (std::pow(n * (1.0 + tt), 1.0 - b) - N) / extra_;
    }
    case Family::dexp:
        return -amp_ * std::log1p(std::min(t, tb_));
    case Family::trunc_log:
        return t >= tb_ ? -std::pow(n * t, extra_) : -n * t;
    }
    return 0.0;
}

double RadialProfile::slope(double t) const {
    if (kind_ == Kind::derived) return t < 0.0 ? 0.0 : map_->slope(t);
    if (kind_ == Kind::sampled) {
        if (t >= t_.back() || t < 0.0) return 0.0;
        const std::size_t i = cell_of(t);
        return (v_[i + 1] - v_[i]) / (t_[i + 1] - t_[i]);
    }
    const int n = params_.n;
    const double b = params_.beta;
    switch (family_) {
    case Family::moser_w0:
        return t >= tb_ ? 0.0 : -amp_ * (1.0 - b) * std::pow(t, -b) / std::pow(tb_, 1.0 - b);
    case Family::moser_w1:
        return t >= tb_ ? 0.0 : -amp_ * (1.0 - b) * std::pow(static_cast<double>(n), 1.0 - b) *
                                    std::pow(1.0 + t, -b) / extra_;
    case Family::dexp:
        return t >= tb_ ? 0.0 : -amp_ / (1.0 + t);
    case Family::trunc_log:
        return t >= tb_ ? -extra_ * n * std::pow(n * t, extra_ - 1.0) : -static_cast<double>(n);
    }
    return 0.0;
}

double RadialProfile::node_slope(std::size_t i) const {
    require(kind_ == Kind::sampled, "node_slope applies to sampled profiles");
    require(i < t_.size(), "node index out of range");
    if (i == 0) return (v_[1] - v_[0]) / (t_[1] - t_[0]);
    const std::size_t m = t_.size() - 1;
    if (i == m) return (v_[m] - v_[m - 1]) / (t_[m] - t_[m - 1]);
    return (v_[i + 1] - v_[i - 1]) / (t_[i + 1] - t_[i - 1]);
}

double RadialProfile::value(double r) const {
    require(r > 0.0 && r <= 1.0, "radius must lie in (0, 1]");
    return at(-std::log(r));
}

double RadialProfile::derivative(double r) const {
    require(r > 0.0 && r <= 1.0, "radius must lie in (0, 1]");
    return -slope(-std::log(r)) / r;
}

std::vector<double> RadialProfile::kinks() const {
    if (kind_ == Kind::derived) return map_->kinks();
    if (kind_ == Kind::sampled) return t_;
    return {tb_};
}

std::vector<double> RadialProfile::panel_breaks() const {
    if (kind_ == Kind::derived) return map_->panel_breaks();
    return kinks();
}

double RadialProfile::support_end() const {
    if (kind_ == Kind::derived) return map_->support_end();
    if (kind_ == Kind::sampled) return t_.back();
    return std::numeric_limits<double>::infinity();
}

double RadialProfile::sup_abs() const {
    if (kind_ == Kind::derived) return map_->sup_abs();
    if (kind_ == Kind::sampled) {
        double m = 0.0;
        for (double x : v_) m = std::max(m, std::abs(x));
        return m;
    }
    if (family_ == Family::trunc_log) return std::numeric_limits<double>::infinity();
    return std::abs(at(tb_));
}

RadialProfile RadialProfile::resample(double t_max, std::size_t cells) const {
    require(t_max > 0.0 && cells >= 15, "resample needs t_max > 0 and at least 15 cells");
    std::vector<double> t(cells + 1), v(cells + 1);
    for (std::size_t i = 0; i <= cells; ++i) {
        t[i] = t_max * static_cast<double>(i) / static_cast<double>(cells);
        v[i] = at(t[i]);
    }
    t.back() = t_max;
    return sampled(std::move(t), std::move(v));
}

RadialProfile RadialProfile::scaled(double factor) const {
    require(kind_ == Kind::sampled, "scaling applies to sampled profiles");
    RadialProfile p = *this;
    for (double& x : p.v_) x *= factor;
    return p;
}

void RadialProfile::write_csv(std::ostream& os) const {
    require(kind_ == Kind::sampled, "only sampled profiles serialize as CSV");
    os << "t,v\n";
    os.precision(17);
    for (std::size_t i = 0; i < t_.size(); ++i) os << t_[i] << ',' << v_[i] << '\n';
}

RadialProfile RadialProfile::read_csv(std::istream& is) {
    std::string line;
    require(static_cast<bool>(std::getline(is, line)), "empty profile CSV");
    if (!line.empty() && line.back() == '\r') line.pop_back();
    require(line == "t,v", "profile CSV header must be 't,v'");
    std::vector<double> t, v;
    while (std::getline(is, line)) {
        if (line.empty() || line == "\r") continue;
        std::istringstream row(line);
        std::string a, b;
        require(std::getline(row, a, ',') && std::getline(row, b), "malformed profile CSV row: " + line);
        try {
            t.push_back(std::stod(a));
            v.push_back(std::stod(b));
        } catch (const std::exception&) {
            throw ValidationError("non-numeric profile CSV row: " + line);
        }
    }
    return sampled(std::move(t), std::move(v));
}

namespace {

double log_factor(double t, Weight w) { return w == Weight::w0 ? t : 1.0 + t; }

std::vector<double> breakpoints_for(const RadialProfile& v) {
    std::vector<double> k = v.panel_breaks();
    k.erase(std::remove_if(k.begin(), k.end(), [](double x) { return !(x > 0.0); }), k.end());
    return k;
}

// |dv/dt|^{k+1} L(t)^{lp} e^{-gap t}, in log form so a huge slope against a
// vanishing weight near t = 0 does not overflow
double energy_density(double slope, double t, const Params& p, double lp, int gap) {
    const double L = log_factor(t, p.weight);
    if (lp != 0.0 && L == 0.0) return 0.0;
    return std::exp((p.k + 1) * std::log(slope) + (lp != 0.0 ? lp * std::log(L) : 0.0) - gap * t);
}

QuadResult combine(QuadResult a, const QuadResult& b) {
    a.value += b.value;
    a.abs_error_estimate += b.abs_error_estimate;
    a.panels_used += b.panels_used;
    if (a.status == Status::ok) a.status = b.status;
    return a;
}

// int_0^end g, with t = first * e^{-y} on the first panel: a density like
// t^{-beta} near r = 1 becomes the smooth decay e^{-(1-beta) y} on a half line.
QuadResult integrate_from_zero(const RealFn& g, double end, double rel_tol, const std::vector<double>& bps) {
    double first = std::min(1.0, end);
    for (double b : bps)
        if (b > 0.0) first = std::min(first, b);
    const QuadResult head = integrate_half_line(
        [&](double y) {
            const double t = first * std::exp(-y);
            // subnormal t carries too few bits to evaluate g reliably
            return t < std::numeric_limits<double>::min() ? 0.0 : g(t) * t;
        },
        rel_tol);
    std::vector<double> rest;
    for (double b : bps)
        if (b > first) rest.push_back(b);
    if (std::isfinite(end)) {
        if (end <= first) return head;
        return combine(head, integrate(g, first, end, rel_tol, rest));
    }
    for (double& b : rest) b -= first;
    return combine(head, integrate_half_line([&](double x) { return g(first + x); }, rel_tol, rest));
}

} // namespace

QuadResult weighted_energy(const RadialProfile& v, const Params& p, double rel_tol) {
    validate(p);
    const double c = hessian_normalization(p.n, p.k);
    const double lp = p.log_power();
    const int gap = p.n - 2 * p.k;
    // r^{n-k} |v'|^{k+1} w dr = e^{-(n-2k)t} |dv/dt|^{k+1} L(t)^{beta n/2} dt
    const RealFn g = [&](double t) {
        const double s = std::abs(v.slope(t));
        if (s == 0.0) return 0.0;
        return energy_density(s, t, p, lp, gap);
    };
    const auto bps = breakpoints_for(v);
    QuadResult r = integrate_from_zero(g, v.support_end(), rel_tol, bps);
    r.value *= c;
    r.abs_error_estimate *= c;
    return r;
}

QuadResult weighted_norm(const RadialProfile& v, const Params& p, double rel_tol) {
    QuadResult r = weighted_energy(v, p, rel_tol);
    if (!r.finite()) return r;
    const double root = 1.0 / (p.k + 1);
    const double e = r.value;
    r.value = std::pow(e, root);
    r.abs_error_estimate = e > 0 ? r.value * root * r.abs_error_estimate / e : 0.0;
    return r;
}

QuadResult weighted_distance(const RadialProfile& a, const RadialProfile& b, const Params& p, double rel_tol) {
    validate(p);
    const double c = hessian_normalization(p.n, p.k);
    const double lp = p.log_power();
    const int gap = p.n - 2 * p.k;
    const RealFn g = [&](double t) {
        const double s = std::abs(a.slope(t) - b.slope(t));
        if (s == 0.0) return 0.0;
        return energy_density(s, t, p, lp, gap);
    };
    std::vector<double> bps = breakpoints_for(a);
    const auto more = breakpoints_for(b);
    bps.insert(bps.end(), more.begin(), more.end());
    std::sort(bps.begin(), bps.end());
    bps.erase(std::unique(bps.begin(), bps.end()), bps.end());
    const double end = std::max(a.support_end(), b.support_end());
    QuadResult r = integrate_from_zero(g, end, rel_tol, bps);
    if (!r.finite()) return r;
    const double root = 1.0 / (p.k + 1);
    const double e = c * r.value;
    r.value = std::pow(e, root);
    r.abs_error_estimate = e > 0 ? r.value * root * c * r.abs_error_estimate / e : 0.0;
    return r;
}

QuadResult moser_functional(const RadialProfile& v, double alpha, double gamma, int n, double rel_tol) {
    require(alpha > 0.0, "alpha must be positive");
    require(gamma > 1.0, "gamma must exceed 1");
    require(n >= 1, "n must be positive");
    // r^{n-1} dr = e^{-nt} dt
    const RealFn g = [&](double t) {
        const double a = std::abs(v.at(t));
        return std::exp(alpha * std::pow(a, gamma) - n * t);
    };
    return integrate_half_line(g, rel_tol, breakpoints_for(v));
}

QuadResult double_exp_functional(const RadialProfile& v, double a, int n, double rel_tol) {
    require(a > 0.0, "a must be positive");
    require(n >= 2 && n % 2 == 0, "n must be even");
    const double cc = std::pow(hessian_normalization(n, n / 2), 2.0 / n);
    const double e = (n + 2.0) / n;
    const RealFn g = [&](double t) {
        const double x = std::abs(v.at(t));
        return std::exp(a * std::exp(cc * std::pow(x, e)) - n * t);
    };
    return integrate_half_line(g, rel_tol, breakpoints_for(v));
}

double moser_floor(const RadialProfile& v, double alpha_ratio) {
    require(v.is_closed_form(), "floor applies to closed-form families");
    const Params& p = v.params();
    const double ell = v.index();
    const int n = p.n;
    if (v.family_kind() == Family::moser_w0) return std::exp(ell * (alpha_ratio - 1.0)) / n;
    require(v.family_kind() == Family::moser_w1, "floor defined for moser-w0 and moser-w1");
    const auto s = compute_constants(p);
    const double L = std::pow(ell, 1.0 - p.beta), N = std::pow(static_cast<double>(n), 1.0 - p.beta);
    const double shrink = std::pow(L / (L - N), -p.k * s.gamma_nb / (p.k + 1.0));
    return std::exp(static_cast<double>(n)) / n * std::exp(ell * (alpha_ratio * shrink - 1.0));
}

double double_exp_floor(double ell, double a, int n) { return std::exp(a) / n * std::exp(ell * (a - n)); }

double radial_bound_factor(double t, const Params& p) {
    validate_moser(p);
    const int n = p.n;
    const double c = hessian_normalization(n, p.k);
    const double e = n / (n + 2.0);
    const double cpart = std::pow(c, -2.0 / (n + 2.0));
    if (p.weight == Weight::w0) {
        require(p.beta < 1.0, "w0 radial bound needs beta < 1");
        return cpart * std::pow(1.0 - p.beta, -e) * std::pow(t, (1.0 - p.beta) * e);
    }
    if (p.beta == 1.0) return cpart * std::pow(std::log1p(t), e);
    return cpart * std::pow(std::abs(1.0 - p.beta), -e) * std::pow(std::abs(std::pow(1.0 + t, 1.0 - p.beta) - 1.0), e);
}

RadialBoundReport radial_bound_check(const RadialProfile& v, const Params& p) {
    validate_moser(p);
    RadialBoundReport rep;
    const QuadResult nr = weighted_norm(v, p);
    require(nr.finite(), "radial bound check needs a finite norm");
    rep.norm = nr.value;
    double span = 20.0;
    for (double x : breakpoints_for(v)) span = std::max(span, 2.0 * x);
    if (std::isfinite(v.support_end())) span = std::max(span, v.support_end() * 1.25);
    constexpr int kPoints = 512;
    for (int i = 1; i <= kPoints; ++i) {
        const double t = span * i / kPoints;
        const double mag = std::abs(v.at(t));
        if (mag == 0.0) continue;
        const double ratio = mag / (radial_bound_factor(t, p) * rep.norm);
        if (ratio > rep.max_ratio) {
            rep.max_ratio = ratio;
            rep.worst_t = t;
        }
    }
    return rep;
}

IncrementBound increment_bound(const RadialProfile& v, const Params& p, double t_lo, double t_hi) {
    validate_moser(p);
    require(t_lo >= 0.0 && t_hi > t_lo, "need 0 <= t_lo < t_hi");
    const int n = p.n;
    const double c = hessian_normalization(n, p.k);
    IncrementBound b;
    b.lhs = std::abs(v.at(t_hi) - v.at(t_lo));
    // A = c^{-2/n} int ds / (s w^{2/n}(s)) = c^{-2/n} int dt / L(t)^beta
    std::vector<double> bps;
    for (double x : breakpoints_for(v))
        if (x > t_lo && x < t_hi) bps.push_back(x);
    const QuadResult a = integrate(
        [&](double t) { return std::pow(log_factor(t, p.weight), -p.beta); }, t_lo, t_hi, 1e-12);
    const QuadResult e = integrate(
        [&](double t) {
            const double s = std::abs(v.slope(t));
            return s == 0.0 ? 0.0 : std::pow(s, p.k + 1) * std::pow(log_factor(t, p.weight), p.log_power());
        },
        t_lo, t_hi, 1e-12, bps);
    b.rhs = std::pow(std::pow(c, -2.0 / n) * a.value, n / (n + 2.0)) * std::pow(c * e.value, 2.0 / (n + 2.0));
    return b;
}

double TransportPair::psi(double s) const { return scale * std::abs(v.at(s / params.n)); }

double TransportPair::psi_slope(double s) const { return -scale * v.slope(s / params.n) / params.n; }

TransportPair transport(const RadialProfile& v, const Params& p, double alpha) {
    validate_moser(p);
    require(p.weight == Weight::w0, "transport is defined for the w0 weight");
    require(p.beta >= 0.0 && p.beta < 1.0, "transport needs 0 <= beta < 1");
    require(alpha > 0.0, "alpha must be positive");
    const auto sc = compute_constants(p);
    const int n = p.n;
    const double e = n / (n + 2.0);
    TransportPair tp{v, p, 0.0, alpha, alpha / sc.alpha_nb, sc.gamma_nb};
    tp.scale = std::pow(sc.c_n, 2.0 / (n + 2.0)) * std::pow(static_cast<double>(n), e * (1.0 - p.beta)) *
               std::pow(1.0 - p.beta, e);
    return tp;
}

double transport_factor(int n) { return 1.0 / n; }

TransportResiduals verify_transport(const TransportPair& tp, double rel_tol) {
    TransportResiduals res;
    const Params& p = tp.params;
    const int n = p.n;
    const QuadResult lhs_norm = weighted_energy(tp.v, p, rel_tol);
    std::vector<double> sb;
    for (double x : breakpoints_for(tp.v)) sb.push_back(n * x);
    const RealFn norm_rhs = [&](double s) {
        const double d = std::abs(tp.psi_slope(s));
        return d == 0.0 ? 0.0 : std::pow(s, p.log_power()) * std::pow(d, p.k + 1);
    };
    const QuadResult rhs_norm = std::isfinite(tp.v.support_end())
                                    ? integrate(norm_rhs, 0.0, n * tp.v.support_end(), rel_tol, sb)
                                    : integrate_half_line(norm_rhs, rel_tol, sb);
    const QuadResult lhs_f = moser_functional(tp.v, tp.alpha, tp.gamma, n, rel_tol);
    const QuadResult rhs_f = integrate_half_line(
        [&](double s) { return std::exp(tp.alpha_ratio * std::pow(tp.psi(s), tp.gamma) - s); }, rel_tol, sb);
    if (!lhs_norm.finite() || !rhs_norm.finite() || !lhs_f.finite() || !rhs_f.finite()) {
        res.status = Status::divergent;
        return res;
    }
    res.norm_lhs = lhs_norm.value;
    res.norm_rhs = rhs_norm.value * std::pow(1.0 - p.beta, -n / 2.0);
    res.norm_residual = std::abs(res.norm_lhs - res.norm_rhs);
    res.functional_lhs = lhs_f.value;
    res.functional_rhs = rhs_f.value;
    res.measured_factor = lhs_f.value / rhs_f.value;
    res.functional_residual = std::abs(lhs_f.value - transport_factor(n) * rhs_f.value);

    double span = 40.0;
    for (double x : sb) span = std::max(span, 2.0 * x);
    res.max_psi_excess = -std::numeric_limits<double>::infinity();
    for (int i = 1; i <= 2048; ++i) {
        const double s = span * i / 2048.0;
        res.max_psi_excess = std::max(res.max_psi_excess, std::pow(tp.psi(s), tp.gamma) - s);
    }
    return res;
}

} // namespace tmlog
