#pragma once

#include "tmlog/constants.hpp"
#include "tmlog/quadrature.hpp"

#include <iosfwd>
#include <memory>
#include <optional>
#include <string_view>
#include <vector>

namespace tmlog {

enum class Family { moser_w0, moser_w1, dexp, trunc_log };

std::string_view to_string(Family f);
Family parse_family(std::string_view s);

// Pointwise definition of a profile built from other profiles (smoothing,
// exponent changes). Evaluated exactly rather than resampled.
class ProfileMap {
public:
    virtual ~ProfileMap() = default;
    virtual double at(double t) const = 0;
    virtual double slope(double t) const = 0;
    // slope discontinuities
    virtual std::vector<double> kinks() const = 0;
    // kinks plus points where higher derivatives jump; used as quadrature panel edges
    virtual std::vector<double> panel_breaks() const = 0;
    // slope vanishes beyond this t (+inf when it never does)
    virtual double support_end() const = 0;
    virtual double sup_abs() const = 0;
};

// Radial profile on (0, 1] with v(1) = 0, stored with the non-positive sign
// convention. Internally everything is a function of t = ln(1/r).
//
// Sampled profiles are the continuous piecewise-linear interpolant of the
// nodes in t and are constant beyond the last node.
class RadialProfile {
public:
    enum class Kind { closed_form, sampled, derived };

    static RadialProfile family(Family f, const Params& p, double index);
    // t must start at 0 with v[0] == 0, be strictly increasing and hold >= 16 nodes.
    static RadialProfile sampled(std::vector<double> t, std::vector<double> v);
    static RadialProfile zero();
    static RadialProfile derived(std::shared_ptr<const ProfileMap> map, const Params& p);

    Kind kind() const { return kind_; }
    bool is_closed_form() const { return kind_ == Kind::closed_form; }
    Family family_kind() const { return family_; }
    const Params& params() const { return params_; }
    double index() const { return index_; }
    const std::vector<double>& nodes() const { return t_; }
    const std::vector<double>& values() const { return v_; }

    // v as a function of t = ln(1/r)
    double at(double t) const;
    // dv/dt; on a sampled profile this is the slope of the cell containing t
    double slope(double t) const;
    // centered difference in t at node i, one-sided at the ends
    double node_slope(std::size_t i) const;

    double value(double r) const;
    // dv/dr
    double derivative(double r) const;

    // Kinks of the profile in t (family breakpoints or sampled nodes).
    std::vector<double> kinks() const;
    // Kinks plus smooth-but-not-analytic joins; quadrature panel edges.
    std::vector<double> panel_breaks() const;
    // The slope vanishes beyond this t; +inf for closed forms.
    double support_end() const;
    // Largest |v|.
    double sup_abs() const;

    // Sample onto a uniform t grid with `cells` cells on [0, t_max].
    RadialProfile resample(double t_max, std::size_t cells) const;
    RadialProfile scaled(double factor) const;

    void write_csv(std::ostream& os) const;
    static RadialProfile read_csv(std::istream& is);

private:
    RadialProfile() = default;

    Kind kind_ = Kind::sampled;
    Family family_ = Family::moser_w0;
    Params params_{};
    double index_ = 0.0;
    // closed-form data
    double amp_ = 0.0;    // plateau or scale amplitude
    double tb_ = 0.0;     // breakpoint in t
    double extra_ = 0.0;  // family-specific constant
    // sampled data
    std::vector<double> t_;
    std::vector<double> v_;
    bool uniform_ = false;
    // derived data
    std::shared_ptr<const ProfileMap> map_;

    std::size_t cell_of(double t) const;
};

inline constexpr double kDefaultRelTol = 1e-11;

// (c_n int_0^1 r^{n-k} |v'|^{k+1} w dr)^{1/(k+1)} with w selected by p.weight.
QuadResult weighted_norm(const RadialProfile& v, const Params& p, double rel_tol = kDefaultRelTol);
// The same integral without the root.
QuadResult weighted_energy(const RadialProfile& v, const Params& p, double rel_tol = kDefaultRelTol);

// Weighted norm of a - b.
QuadResult weighted_distance(const RadialProfile& a, const RadialProfile& b, const Params& p,
                             double rel_tol = kDefaultRelTol);

// int_0^1 r^{n-1} exp(alpha |v|^gamma) dr
QuadResult moser_functional(const RadialProfile& v, double alpha, double gamma, int n,
                            double rel_tol = kDefaultRelTol);

// int_0^1 r^{n-1} exp(a exp(c_n^{2/n} |v|^{(n+2)/n})) dr
QuadResult double_exp_functional(const RadialProfile& v, double a, int n, double rel_tol = kDefaultRelTol);

// Lower floors for the functionals along the concentrating families, above
// the critical coefficient.
double moser_floor(const RadialProfile& v, double alpha_ratio);
double double_exp_floor(double ell, double a, int n);

// Pointwise radial bound |v(r)| <= B(r) ||v||_w for the selected weight.
double radial_bound_factor(double t, const Params& p);

struct RadialBoundReport {
    double max_ratio = 0.0;
    double worst_t = 0.0;
    double norm = 0.0;
};

// Max over 512 points in t of |v| / (B ||v||).
RadialBoundReport radial_bound_check(const RadialProfile& v, const Params& p);

// Increment estimate between 0 < r < s <= 1 in terms of t_hi = ln 1/r > t_lo = ln 1/s.
struct IncrementBound {
    double lhs = 0.0;  // |v(r) - v(s)|
    double rhs = 0.0;  // A^{n/(n+2)} * (partial energy)^{2/(n+2)}
};
IncrementBound increment_bound(const RadialProfile& v, const Params& p, double t_lo, double t_hi);

// Transport to the half line: s = n t, psi(s) = scale * |v|.
struct TransportPair {
    RadialProfile v;
    Params params;
    double scale = 0.0;
    double alpha = 0.0;
    double alpha_ratio = 0.0;
    double gamma = 0.0;

    double psi(double s) const;
    double psi_slope(double s) const;
};

TransportPair transport(const RadialProfile& v, const Params& p, double alpha);

// Normalization of the transported functional: the r-side integral equals this
// factor times the half-line integral. Measured by verify_transport.
double transport_factor(int n);

struct TransportResiduals {
    double norm_lhs = 0.0;
    double norm_rhs = 0.0;
    double norm_residual = 0.0;
    double functional_lhs = 0.0;
    double functional_rhs = 0.0;
    double measured_factor = 0.0;
    double functional_residual = 0.0;  // |lhs - transport_factor(n) * rhs|
    double max_psi_excess = 0.0;       // max over a grid of psi^gamma(s) - s
    Status status = Status::ok;
};

TransportResiduals verify_transport(const TransportPair& tp, double rel_tol = kDefaultRelTol);

} // namespace tmlog
