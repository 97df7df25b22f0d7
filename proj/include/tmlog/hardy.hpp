#pragma once

#include "tmlog/constants.hpp"
#include "tmlog/quadrature.hpp"

#include <string>
#include <string_view>
#include <vector>

namespace tmlog::hardy {

// Weighted Hardy inequality on (0, R) for v with v(R) = 0:
//   (int |v|^p ell^theta t^alpha)^{1/p} <= C (int |v'|^q ell^mu t^nu)^{1/q}
// where ell = ln(R/t) (LogKind::one_over_r) or ln(eR/t) (LogKind::e_over_r).
struct HardyQuery {
    double alpha = 0.0;
    double theta = 0.0;
    double nu = 0.0;
    double mu = 0.0;
    double p = 1.0;
    double q = 1.0;
    double R = 1.0;
    LogKind log = LogKind::one_over_r;
};

void validate(const HardyQuery& hq);

enum class Regime { q_eq_1, q_le_p, p_lt_q };

std::string_view to_string(Regime r);
Regime regime_of(double p, double q);

std::string_view log_name(LogKind k);  // "LOG_R_OVER_T" / "LOG_ER_OVER_T"
LogKind parse_log(std::string_view s);

struct HardyVerdict {
    bool holds = false;
    std::string condition = "NONE";  // e.g. "Prop2.1(iii)" or "Thm2.1(iv)"
    Regime regime = Regime::q_eq_1;
    // Some comparison landed within 1e-12 of its threshold without being exact.
    bool near_boundary = false;
    std::vector<std::string> notes;
};

// Evaluates the item list of the proposition matching (log kind, regime).
HardyVerdict decide(const HardyQuery& hq);

// Dimension-style parameters: q = k+1, theta = 0, mu = beta n/2, nu = n-k.
struct HessianHardyQuery {
    double alpha = 0.0;
    double beta = 0.0;
    double n = 2.0;
    double k = 1.0;
    double p = 1.0;
    Weight weight = Weight::w0;

    HardyQuery mapped(double R = 1.0) const;
};

void validate(const HessianHardyQuery& h);

// Evaluates the theorem-level item list directly (w0 -> "Thm2.1", w1 -> "Thm2.2").
HardyVerdict decide(const HessianHardyQuery& h);

enum class Classification { finite, infinite, undecided };
std::string_view to_string(Classification c);

struct CriterionReport {
    Classification result = Classification::undecided;
    Classification near_zero = Classification::undecided;
    Classification near_R = Classification::undecided;
    // log of the largest sampled value of the sup-form quantity over both sweeps
    double log_sup = 0.0;
    std::string reason;
};

// Numerical check of the criterion for the query's regime: the sup criterion
// for q <= p, the integral criterion for p < q. Sweeps 12 points per decade
// from `truncation` toward 0 and toward R, down to 1e-12 R on either side.
CriterionReport numeric_criterion(const HardyQuery& hq, double truncation);
inline CriterionReport numeric_criterion(const HardyQuery& hq) {
    return numeric_criterion(hq, hq.R / 4.0);
}

// Largest sampled value of sup-form quantity F(x)^{1/p} * (right factor)
// over the same grid (truncation R/4). Requires decide(hq).holds.
double best_constant_estimate(const HardyQuery& hq);

struct EmbeddingVerdict {
    bool embeds = false;
    double critical_exponent = 0.0;  // +inf when k >= n/2
    bool critical_condition_applied = false;
};

// Continuous embedding of the weighted radial Sobolev space into L^p_alpha.
// Requires n, k >= 1, alpha > -1, p >= 1, and beta n < 2k for w0.
EmbeddingVerdict embedding_conditions(const HessianHardyQuery& h);

} // namespace tmlog::hardy
