#include "tmlog/hardy.hpp"

#include "tmlog/error.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <exception>
#include <limits>
#include <string>

namespace tmlog::hardy {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kBand = 1e-12;

// Threshold comparisons with a relative 1e-12 band around equality. Remembers
// whether any comparison was decided inside the band rather than exactly.
class Cmp {
public:
    bool eq(double a, double b) {
        if (a == b) return true;
        if (!std::isfinite(a) || !std::isfinite(b)) return false;
        if (std::abs(a - b) <= kBand * std::max({1.0, std::abs(a), std::abs(b)})) {
            banded_ = true;
            return true;
        }
        return false;
    }
    bool lt(double a, double b) { return a < b && !eq(a, b); }
    bool le(double a, double b) { return a < b || eq(a, b); }
    bool gt(double a, double b) { return lt(b, a); }
    bool ge(double a, double b) { return le(b, a); }
    bool banded() const { return banded_; }

private:
    bool banded_ = false;
};

constexpr std::array<const char*, 8> kRoman = {"i", "ii", "iii", "iv", "v", "vi", "vii", "viii"};

template <std::size_t N>
HardyVerdict first_match(std::string_view label, Regime regime, const Cmp& c,
                         const std::array<bool, N>& items) {
    HardyVerdict v;
    v.regime = regime;
    for (std::size_t i = 0; i < N; ++i) {
        if (items[i]) {
            v.holds = true;
            v.condition = std::string(label) + "(" + kRoman[i] + ")";
            break;
        }
    }
    v.near_boundary = c.banded();
    return v;
}

// q = 1, ell = ln(R/t)
HardyVerdict decide_log_r_q1(const HardyQuery& h) {
    Cmp c;
    const double a = h.alpha, th = h.theta, nu = h.nu, mu = h.mu, p = h.p;
    const double top = (th + 1.0) / p;
    const double nu_max = (a + 1.0) / p;
    const std::array<bool, 7> items = {
        c.eq(a, -1) && c.lt(th, -1) && c.eq(nu, 0) && c.eq(mu, top),
        c.ge(a, -1) && c.lt(th, -1) && c.lt(nu, 0) && c.le(mu, top),
        c.gt(a, -1) && c.lt(th, -1) && c.le(0, nu) && c.le(nu, nu_max) && c.le(th / p, mu) && c.le(mu, top),
        c.gt(a, -1) && c.eq(th, -1) && c.le(0, nu) && c.le(nu, nu_max) && c.le(-1 / p, mu) && c.lt(mu, 0),
        c.gt(a, -1) && c.eq(th, -1) && c.lt(nu, 0) && c.lt(mu, 0),
        c.gt(a, -1) && c.gt(th, -1) && c.le(th, 0) && c.le(0, nu) && c.le(nu, nu_max) && c.le(th / p, mu) &&
            c.le(mu, 0),
        c.gt(a, -1) && c.gt(th, -1) && c.le(th, 0) && c.lt(nu, 0) && c.le(mu, 0),
    };
    auto v = first_match("Prop2.1", Regime::q_eq_1, c, items);
    Cmp probe;
    if (probe.eq(a, -1) && probe.lt(th, -1) && probe.eq(nu, 0)) {
        v.notes.push_back("item (i) uses mu = (theta+1)/p; the case table writes (theta+1)/q, "
                          "which only agrees when p = 1; item list applied");
    }
    return v;
}

// 1 < q <= p, ell = ln(R/t)
HardyVerdict decide_log_r_qlep(const HardyQuery& h) {
    Cmp c;
    const double a = h.alpha, th = h.theta, nu = h.nu, mu = h.mu, p = h.p, q = h.q;
    const bool gate = c.lt(mu, q - 1);
    const double p_low = -q * (th + 1.0) / (q - 1.0 - mu);
    const double a_crit = (nu - q + 1.0) * p / q - 1.0;
    const std::array<bool, 8> items = {
        gate && c.eq(a, -1) && c.lt(th, -1) && c.lt(nu, q - 1) && c.ge(p, p_low),
        gate && c.eq(a, -1) && c.le(th, mu - q) && c.eq(nu, q - 1) && c.eq(p, p_low),
        gate && c.gt(a, -1) && c.lt(th, -1) && c.le(nu, q - 1) && c.ge(p, p_low),
        gate && c.gt(a, a_crit) && c.lt(th, -1) && c.gt(nu, q - 1) && c.ge(p, p_low),
        gate && c.eq(a, a_crit) && c.lt(th, -1) && c.gt(nu, q - 1) && c.ge(p, p_low) && c.le(th / p, mu / q),
        gate && c.gt(a, -1) && c.ge(th, -1) && c.le(nu, q - 1),
        gate && c.gt(a, a_crit) && c.ge(th, -1) && c.gt(nu, q - 1),
        gate && c.eq(a, a_crit) && c.ge(th, -1) && c.gt(nu, q - 1) && c.le(th / p, mu / q),
    };
    return first_match("Prop2.2", Regime::q_le_p, c, items);
}

// 1 <= p < q, ell = ln(R/t)
HardyVerdict decide_log_r_pltq(const HardyQuery& h) {
    Cmp c;
    const double a = h.alpha, th = h.theta, nu = h.nu, mu = h.mu, p = h.p, q = h.q;
    const bool gate = c.lt(mu, q - 1);
    const double p_low = -q * (th + 1.0) / (q - 1.0 - mu);
    const double p_crit = (a + 1.0) * q / (nu - q + 1.0);
    const std::array<bool, 5> items = {
        gate && c.ge(a, -1) && c.lt(th, -1) && c.lt(nu, q - 1) && c.gt(p, p_low),
        gate && c.gt(a, -1) && c.lt(th, -1) && c.eq(nu, q - 1) && c.gt(p, p_low),
        gate && c.gt(a, -1) && c.gt(nu, q - 1) && c.lt(p_low, p) && c.lt(p, p_crit),
        gate && c.gt(a, -1) && c.gt(nu, q - 1) && c.lt(p_low, p) && c.eq(p, p_crit) &&
            c.gt(p * (mu + 1), q * (th + 1)),
        gate && c.gt(a, -1) && c.ge(th, -1) && c.le(nu, q - 1),
    };
    return first_match("Prop2.3", Regime::p_lt_q, c, items);
}

// q = 1, ell = ln(eR/t)
HardyVerdict decide_log_er_q1(const HardyQuery& h) {
    Cmp c;
    const double a = h.alpha, th = h.theta, nu = h.nu, mu = h.mu, p = h.p;
    const std::array<bool, 8> items = {
        c.eq(a, -1) && c.lt(th, -1) && c.le((th + 1) / p, mu) && c.lt(mu, 0) && c.eq(nu, 0),
        c.eq(a, -1) && c.lt(th, -1) && c.lt(mu, 0) && c.lt(nu, 0),
        c.eq(a, -1) && c.lt(th, -1) && c.ge(mu, 0) && c.le(nu, 0),
        c.eq(a, -1) && c.lt(th, -1) && c.gt(mu, 0) && c.gt(nu, 0),
        c.gt(a, -1) && c.le(nu, 0),
        c.gt(a, -1) && c.le(mu, 0) && c.lt(0, nu) && c.lt(nu, (a + 1) / p),
        c.gt(a, -1) && c.le(th, mu * p) && c.le(mu, 0) && c.eq(nu, (a + 1) / p),
        c.gt(a, -1) && c.gt(mu, 0) && c.gt(nu, 0),
    };
    auto v = first_match("Prop2.4", Regime::q_eq_1, c, items);
    Cmp probe;
    if (probe.eq(a, -1) && probe.lt(th, -1) && probe.eq(nu, 0) && probe.lt(mu, 0)) {
        v.notes.push_back("item (i) requires (theta+1)/p <= mu; the case table writes p mu <= theta+1; "
                          "item list applied");
    }
    return v;
}

// 1 < q <= p, ell = ln(eR/t)
HardyVerdict decide_log_er_qlep(const HardyQuery& h) {
    Cmp c;
    const double a = h.alpha, th = h.theta, nu = h.nu, mu = h.mu, p = h.p, q = h.q;
    const double a_crit = (nu - q + 1.0) * p / q - 1.0;
    const bool low_mu = c.lt(mu, q - 1);
    const double p_low = low_mu ? -q * (th + 1.0) / (q - 1.0 - mu) : kInf;
    const std::array<bool, 6> items = {
        c.eq(a, -1) && c.lt(th, -1) && c.lt(nu, q - 1),
        c.eq(a, -1) && c.lt(th, -1) && c.eq(nu, q - 1) && low_mu && c.ge(p, p_low),
        c.eq(a, -1) && c.lt(th, -1) && c.eq(nu, q - 1) && c.ge(mu, q - 1),
        c.gt(a, -1) && c.le(nu, q - 1),
        c.gt(a, a_crit) && c.gt(nu, q - 1),
        c.eq(a, a_crit) && c.gt(nu, q - 1) && c.le(th / p, mu / q),
    };
    auto v = first_match("Prop2.5", Regime::q_le_p, c, items);
    Cmp probe;
    if (probe.eq(a, -1) && probe.lt(th, -1) && probe.eq(nu, q - 1) && probe.lt(mu, q - 1)) {
        v.notes.push_back("item (ii) requires p >= -q(theta+1)/(q-1-mu); the case table writes p <= "
                          "the same bound; item list applied");
    }
    return v;
}

// 1 <= p < q, ell = ln(eR/t)
HardyVerdict decide_log_er_pltq(const HardyQuery& h) {
    Cmp c;
    const double a = h.alpha, th = h.theta, nu = h.nu, mu = h.mu, p = h.p, q = h.q;
    const bool low_mu = c.lt(mu, q - 1);
    const double p_low = low_mu ? -(th + 1.0) * q / (q - 1.0 - mu) : kInf;
    const double p_crit = (a + 1.0) * q / (nu - q + 1.0);
    const std::array<bool, 6> items = {
        c.eq(a, -1) && c.lt(th, -1) && c.lt(nu, q - 1),
        c.eq(a, -1) && c.lt(th, -1) && c.eq(nu, q - 1) && low_mu && c.lt(p, p_low),
        c.eq(a, -1) && c.lt(th, -1) && c.eq(nu, q - 1) && c.ge(mu, q - 1),
        c.gt(a, -1) && c.le(nu, q - 1),
        c.gt(a, -1) && c.gt(nu, q - 1) && c.lt(p, p_crit),
        c.gt(a, -1) && c.gt(nu, q - 1) && c.eq(p, p_crit) && c.gt(p * (mu + 1), q * (th + 1)),
    };
    return first_match("Prop2.6", Regime::p_lt_q, c, items);
}

} // namespace

void validate(const HardyQuery& hq) {
    require(std::isfinite(hq.alpha) && std::isfinite(hq.theta) && std::isfinite(hq.nu) && std::isfinite(hq.mu),
            "hardy exponents must be finite");
    require(std::isfinite(hq.p) && hq.p >= 1.0, "hardy query needs p >= 1");
    require(std::isfinite(hq.q) && hq.q >= 1.0, "hardy query needs q >= 1");
    require(std::isfinite(hq.R) && hq.R > 0.0, "hardy query needs finite R > 0");
}

std::string_view to_string(Regime r) {
    switch (r) {
    case Regime::q_eq_1: return "Q_EQ_1";
    case Regime::q_le_p: return "Q_LE_P";
    case Regime::p_lt_q: return "P_LT_Q";
    }
    return "?";
}

Regime regime_of(double p, double q) {
    Cmp c;
    if (c.eq(q, 1.0)) return Regime::q_eq_1;
    if (c.le(q, p)) return Regime::q_le_p;
    return Regime::p_lt_q;
}

std::string_view log_name(LogKind k) {
    return k == LogKind::one_over_r ? "LOG_R_OVER_T" : "LOG_ER_OVER_T";
}

LogKind parse_log(std::string_view s) {
    if (s == "LOG_R_OVER_T" || s == "log-r" || s == "r" || s == "w0") return LogKind::one_over_r;
    if (s == "LOG_ER_OVER_T" || s == "log-er" || s == "er" || s == "w1") return LogKind::e_over_r;
    throw ValidationError("unknown log kind: " + std::string(s));
}

HardyVerdict decide(const HardyQuery& hq) {
    validate(hq);
    const bool er = hq.log == LogKind::e_over_r;
    switch (regime_of(hq.p, hq.q)) {
    case Regime::q_eq_1: return er ? decide_log_er_q1(hq) : decide_log_r_q1(hq);
    case Regime::q_le_p: return er ? decide_log_er_qlep(hq) : decide_log_r_qlep(hq);
    case Regime::p_lt_q: return er ? decide_log_er_pltq(hq) : decide_log_r_pltq(hq);
    }
    return {};
}

HardyQuery HessianHardyQuery::mapped(double R) const {
    HardyQuery hq;
    hq.alpha = alpha;
    hq.theta = 0.0;
    hq.nu = n - k;
    hq.mu = beta * n / 2.0;
    hq.p = p;
    hq.q = k + 1.0;
    hq.R = R;
    hq.log = weight == Weight::w0 ? LogKind::one_over_r : LogKind::e_over_r;
    return hq;
}

void validate(const HessianHardyQuery& h) {
    require(std::isfinite(h.alpha) && std::isfinite(h.beta) && std::isfinite(h.n), "parameters must be finite");
    require(std::isfinite(h.k) && h.k >= 0.0, "k must be >= 0");
    require(std::isfinite(h.p) && h.p >= 1.0, "p must be >= 1");
}

HardyVerdict decide(const HessianHardyQuery& h) {
    validate(h);
    Cmp c;
    const double a = h.alpha, b = h.beta, n = h.n, k = h.k, p = h.p;
    const double bn = b * n;
    const double crit = (a + 1.0) * (k + 1.0) / (n - 2.0 * k);
    const bool ok_a = c.gt(a, -1);
    const Regime regime = regime_of(p, k + 1.0);
    if (h.weight == Weight::w0) {
        const std::array<bool, 7> items = {
            ok_a && c.ge(b, 0) && c.lt(n, 0) && c.eq(k, 0),
            ok_a && c.eq(n, 0) && c.eq(k, 0),
            ok_a && c.eq(b, 0) && c.gt(n, 0) && c.eq(k, 0) && c.le(p, (a + 1) / n),
            ok_a && c.lt(bn, 2 * k) && c.le(n, 2 * k) && c.gt(k, 0),
            ok_a && c.lt(bn, 2 * k) && c.gt(n, 2 * k) && c.gt(k, 0) && c.lt(p, crit),
            ok_a && c.le(0, bn) && c.lt(bn, 2 * k) && c.gt(n, 2 * k) && c.gt(k, 0) && c.le(k + 1, p) &&
                c.eq(p, crit),
            ok_a && c.lt((2 * k + 2) / p - 2, bn) && c.lt(bn, 2 * k) && c.gt(n, 2 * k) && c.gt(k, 0) &&
                c.eq(p, crit) && c.lt(p, k + 1),
        };
        return first_match("Thm2.1", regime, c, items);
    }
    const std::array<bool, 7> items = {
        ok_a && c.le(n, 0) && c.eq(k, 0),
        ok_a && c.le(n, 2 * k) && c.gt(k, 0),
        ok_a && c.le(b, 0) && c.lt(0, n) && c.lt(n, (a + 1) / p) && c.eq(k, 0),
        ok_a && c.eq(b, 0) && c.eq(n, (a + 1) / p) && c.eq(k, 0),
        ok_a && c.gt(b, 0) && c.gt(n, 0) && c.eq(k, 0),
        ok_a && c.gt(n, 2 * k) && c.gt(k, 0) && c.lt(p, crit),
        ok_a && c.ge(b, 0) && c.gt(n, 2 * k) && c.gt(k, 0) && c.eq(p, crit),
    };
    return first_match("Thm2.2", regime, c, items);
}

std::string_view to_string(Classification c) {
    switch (c) {
    case Classification::finite: return "FINITE";
    case Classification::infinite: return "INFINITE";
    case Classification::undecided: return "UNDECIDED";
    }
    return "?";
}

namespace {

constexpr int kPerDecade = 12;
constexpr double kReach = 1e-12;  // closest approach to either endpoint, relative to R
const double kLogGrowth = std::log(1.5);
const double kLogSettle = std::log1p(1e-3);

// Logs of the building blocks of both criteria, as functions of L = ln(R/x).
class Pieces {
public:
    explicit Pieces(const HardyQuery& hq)
        : h_(hq), er_(hq.log == LogKind::e_over_r), q1_(regime_of(hq.p, hq.q) == Regime::q_eq_1),
          lnR_(std::log(hq.R)) {}

    // log of ell at the point with ln(R/t) = s
    double log_ell(double s) const { return er_ ? std::log1p(s) : std::log(s); }

    // log int_0^x f
    double log_left(double L) const {
        const double a1 = h_.alpha + 1.0, t1 = h_.theta + 1.0;
        if (a1 > 0.0) {
            const double shift = er_ ? 1.0 : 0.0;
            const double g = gamma_upper(t1, a1 * (L + shift));
            return a1 * (lnR_ + shift) - t1 * std::log(a1) + std::log(g);
        }
        if (a1 == 0.0 && t1 < 0.0) return t1 * log_ell(L) - std::log(-t1);
        return kInf;
    }

    // log sup over (x, R) of 1/g, for q = 1
    double log_sup_inv_g(double L) const {
        const double mu = h_.mu, nu = h_.nu;
        auto phi = [&](double s) { return -mu * log_ell(s) + nu * s; };
        double best = -kInf;
        // the s -> 0 end
        if (er_) {
            best = 0.0;
        } else if (mu > 0.0) {
            return kInf;
        } else if (mu == 0.0) {
            best = 0.0;
        }
        best = std::max(best, phi(L));
        if (nu != 0.0) {
            const double s_star = er_ ? mu / nu - 1.0 : mu / nu;
            if (s_star > 0.0 && s_star < L) best = std::max(best, phi(s_star));
        }
        return -nu * lnR_ + best;
    }

    // log int_x^R g^{-1/(q-1)}, for q > 1
    double log_right(double L) const {
        const double mup = h_.mu / (h_.q - 1.0), nup = h_.nu / (h_.q - 1.0);
        const double c = 1.0 - nup;
        const double base = c * lnR_;
        if (er_) {
            // smooth on [0, L]; direct quadrature avoids cancelling incomplete gammas
            auto f = [&](double s) { return std::exp(-mup * std::log1p(s) - c * s); };
            const auto r = integrate(f, 0.0, L, 1e-12);
            if (!r.finite()) return kInf;
            return base + std::log(r.value);
        }
        const double eta = 1.0 - mup;
        if (eta <= 0.0) return kInf;  // non-integrable at t = R
        if (c > 0.0) return base - eta * std::log(c) + std::log(gamma_lower(eta, c * L));
        if (c == 0.0) return base + eta * std::log(L) - std::log(eta);
        return base - eta * std::log(-c) + std::log(h_exp(eta, -c * L));
    }

    // log of g(x)^{-1/(q-1)}
    double log_inv_g_power(double L) const {
        const double lnx = lnR_ - L;
        return -(h_.mu * log_ell(L) + h_.nu * lnx) / (h_.q - 1.0);
    }

    // log of the sup-form quantity at x
    double log_sup_quantity(double L) const {
        const double lf = log_left(L) / h_.p;
        if (q1_) return lf + log_sup_inv_g(L);
        return lf + (h_.q - 1.0) / h_.q * log_right(L);
    }

    // log of the integrand of the integral criterion, per unit dx
    double log_integrand(double L) const {
        const double p = h_.p, q = h_.q;
        double v = q / (q - p) * log_left(L) + log_inv_g_power(L);
        if (p > 1.0) v += q * (p - 1.0) / (q - p) * log_right(L);
        return v;
    }

    double lnR() const { return lnR_; }

private:
    HardyQuery h_;
    bool er_;
    bool q1_;
    double lnR_;
};

double log_add(double a, double b) {
    if (a == -kInf) return b;
    if (b == -kInf) return a;
    if (a == kInf || b == kInf) return kInf;
    const double m = std::max(a, b);
    return m + std::log(std::exp(a - m) + std::exp(b - m));
}

// L values of the sweep from the truncation point toward x = 0 or x = R.
// Index j = 0 is the truncation point; every 12th point closes a decade.
std::vector<double> sweep(double trunc_rel, bool toward_zero, int& decades) {
    const double span = toward_zero ? trunc_rel : 1.0 - trunc_rel;
    decades = static_cast<int>(std::floor(std::log10(span / kReach) + 1e-9));
    std::vector<double> L;
    L.reserve(decades * kPerDecade + 1);
    for (int j = 0; j <= decades * kPerDecade; ++j) {
        const double d = span * std::pow(10.0, -static_cast<double>(j) / kPerDecade);
        L.push_back(toward_zero ? -std::log(d) : -std::log1p(-d));
    }
    return L;
}

// Pointwise samples behind a tracked quantity: the sup-form value itself, or
// the per-decade increment of a cumulative integral. `ell` is the log factor
// (L or 1+L) at each sample.
struct Trend {
    std::vector<double> L;
    std::vector<double> ell;
    std::vector<double> y;
    bool toward_zero = true;
};

// Coefficient e of the fit y = A + e L + c ln ell + d / ell through the last
// four samples. Near x = 0 the quantities are power-log laws x^{-e} ell^c with
// a 1/ell correction from the incomplete gamma tail, so e > 0 means eventual
// growth even when the samples are still falling.
double far_power(const Trend& t) {
    const std::size_t n = t.y.size();
    std::array<std::array<double, 5>, 4> m{};
    for (std::size_t i = 0; i < 4; ++i) {
        const std::size_t j = n - 4 + i;
        m[i] = {1.0, t.L[j], std::log(t.ell[j]), 1.0 / t.ell[j], t.y[j]};
    }
    for (std::size_t c = 0; c < 4; ++c) {
        std::size_t piv = c;
        for (std::size_t r = c + 1; r < 4; ++r)
            if (std::abs(m[r][c]) > std::abs(m[piv][c])) piv = r;
        std::swap(m[c], m[piv]);
        for (std::size_t r = 0; r < 4; ++r) {
            if (r == c) continue;
            const double f = m[r][c] / m[c][c];
            for (std::size_t k = c; k < 5; ++k) m[r][k] -= f * m[c][k];
        }
    }
    return m[1][4] / m[1][1];
}

// Classifies a tracked log-quantity sampled at decade boundaries: INFINITE on
// 1.5x growth per decade over the last three decades, FINITE once it moves by
// less than 1e-3 per decade. A settled value is still UNDECIDED when the
// pointwise samples are rising or, toward x = 0, fit a growing power law.
Classification classify(const std::vector<double>& logs, const Trend& trend) {
    const std::size_t n = logs.size();
    for (double v : logs) {
        if (v == kInf) return Classification::infinite;
        if (std::isnan(v)) return Classification::undecided;
    }
    if (n < 4) return Classification::undecided;
    bool growing = true;
    for (std::size_t i = n - 3; i < n; ++i) {
        if (!(logs[i] - logs[i - 1] >= kLogGrowth)) growing = false;
    }
    if (growing) return Classification::infinite;
    for (std::size_t i = n - 2; i < n; ++i) {
        if (!(std::abs(logs[i] - logs[i - 1]) < kLogSettle)) return Classification::undecided;
    }
    const auto& y = trend.y;
    if (y.size() >= 4) {
        if (!(y[y.size() - 1] - y[y.size() - 2] < kLogSettle)) return Classification::undecided;
        if (trend.toward_zero && std::isfinite(y[y.size() - 4]) && !(far_power(trend) <= 0.0))
            return Classification::undecided;
    }
    return Classification::finite;
}

Classification combine(Classification a, Classification b) {
    if (a == Classification::infinite || b == Classification::infinite) return Classification::infinite;
    if (a == Classification::finite && b == Classification::finite) return Classification::finite;
    return Classification::undecided;
}

struct SweepResult {
    Classification cls = Classification::undecided;
    double log_max = -kInf;
};

bool heads_to_zero(const std::vector<double>& L) { return L.size() > 1 && L[1] > L[0]; }

// Running maximum of the sup-form quantity along one sweep.
SweepResult sup_sweep(const Pieces& pc, const std::vector<double>& L) {
    SweepResult out;
    std::vector<double> marks;
    Trend trend;
    trend.toward_zero = heads_to_zero(L);
    for (std::size_t j = 0; j < L.size(); ++j) {
        const double v = pc.log_sup_quantity(L[j]);
        if (std::isnan(v)) return out;
        out.log_max = std::max(out.log_max, v);
        if (j % kPerDecade == 0) {
            marks.push_back(out.log_max);
            trend.L.push_back(L[j]);
            trend.ell.push_back(std::exp(pc.log_ell(L[j])));
            trend.y.push_back(v);
        }
    }
    out.cls = classify(marks, trend);
    return out;
}

// Cumulative integral criterion along one sweep; each cell is integrated in
// u = ln L with an 8-point Gauss rule, dx = x L du.
SweepResult integral_sweep(const Pieces& pc, const std::vector<double>& L) {
    SweepResult out;
    const auto& rule = gauss_legendre(8);
    std::vector<double> marks;
    Trend trend;
    trend.toward_zero = heads_to_zero(L);
    double acc = -kInf, decade = -kInf;
    for (std::size_t j = 1; j < L.size(); ++j) {
        const double u0 = std::log(L[j - 1]), u1 = std::log(L[j]);
        const double mid = 0.5 * (u0 + u1), half = 0.5 * (u1 - u0);
        double cell = -kInf;
        for (std::size_t i = 0; i < rule.x.size(); ++i) {
            const double u = mid + half * rule.x[i];
            const double l = std::exp(u);
            const double v = pc.log_integrand(l) + pc.lnR() - l + u;
            if (std::isnan(v)) return out;
            cell = log_add(cell, v + std::log(std::abs(half) * rule.w[i]));
        }
        acc = log_add(acc, cell);
        decade = log_add(decade, cell);
        if (j % kPerDecade == 0) {
            marks.push_back(acc);
            trend.L.push_back(L[j]);
            trend.ell.push_back(std::exp(pc.log_ell(L[j])));
            trend.y.push_back(decade);
            decade = -kInf;
        }
    }
    out.cls = classify(marks, trend);
    out.log_max = acc;
    return out;
}

} // namespace

CriterionReport numeric_criterion(const HardyQuery& hq, double truncation) {
    validate(hq);
    require(truncation > 0.0 && truncation < hq.R / 2.0, "truncation must lie in (0, R/2)");
    CriterionReport rep;
    const Pieces pc(hq);
    const double rel = truncation / hq.R;
    int d0 = 0, d1 = 0;
    const auto to_zero = sweep(rel, true, d0);
    const auto to_R = sweep(rel, false, d1);
    try {
        const auto s0 = sup_sweep(pc, to_zero);
        const auto s1 = sup_sweep(pc, to_R);
        rep.log_sup = std::max(s0.log_max, s1.log_max);
        if (regime_of(hq.p, hq.q) == Regime::p_lt_q) {
            const auto i0 = integral_sweep(pc, to_zero);
            const auto i1 = integral_sweep(pc, to_R);
            rep.near_zero = i0.cls;
            rep.near_R = i1.cls;
        } else {
            rep.near_zero = s0.cls;
            rep.near_R = s1.cls;
        }
    } catch (const std::exception& e) {
        rep.near_zero = rep.near_R = Classification::undecided;
        rep.reason = e.what();
    }
    rep.result = combine(rep.near_zero, rep.near_R);
    return rep;
}

double best_constant_estimate(const HardyQuery& hq) {
    const auto v = decide(hq);
    require(v.holds, "best_constant_estimate needs a query for which the inequality holds");
    const Pieces pc(hq);
    const double rel = 0.25;
    int d0 = 0, d1 = 0;
    const auto a = sup_sweep(pc, sweep(rel, true, d0));
    const auto b = sup_sweep(pc, sweep(rel, false, d1));
    return std::exp(std::max(a.log_max, b.log_max));
}

EmbeddingVerdict embedding_conditions(const HessianHardyQuery& h) {
    validate(h);
    require(h.n >= 1.0 && h.k >= 1.0, "embedding needs n, k >= 1");
    require(h.alpha > -1.0, "embedding needs alpha > -1");
    require(h.weight != Weight::w0 || h.beta * h.n < 2.0 * h.k, "embedding with w0 needs beta n < 2k");
    EmbeddingVerdict v;
    Cmp c;
    if (c.ge(h.k, h.n / 2.0)) {
        v.critical_exponent = kInf;
        v.embeds = true;
        return v;
    }
    const double gap = h.n - 2.0 * h.k;
    v.critical_exponent = (h.alpha + 1.0) * (h.k + 1.0) / gap;
    if (c.lt(h.p, v.critical_exponent)) {
        v.embeds = true;
    } else if (c.eq(h.p, v.critical_exponent)) {
        v.critical_condition_applied = true;
        if (h.weight == Weight::w1 || c.ge(h.alpha + 1.0, gap)) {
            v.embeds = c.ge(h.beta, 0);
        } else {
            v.embeds = c.gt(h.beta * h.n / 2.0, gap / (h.alpha + 1.0) - 1.0);
        }
    }
    return v;
}

} // namespace tmlog::hardy
