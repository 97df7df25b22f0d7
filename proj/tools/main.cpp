// tmlog: command-line front end to the library. Every command builds one JSON
// report; --format csv flattens it, --out redirects it.

#include "emit.hpp"

#include <tmlog/admissibility.hpp>
#include <tmlog/constants.hpp>
#include <tmlog/hardy.hpp>
#include <tmlog/optimizer.hpp>
#include <tmlog/profiles.hpp>

#include <CLI11.hpp>

#include <cmath>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace tmlog::cli {
namespace {

constexpr int kExitUsage = 2;
constexpr int kExitStrict = 3;

struct RunConfig {
    std::optional<int> n, k;
    std::optional<double> beta;
    std::optional<std::string> weight, family;
    std::optional<double> alpha, alpha_ratio, gamma;
    double p = 1.0;
    std::optional<double> q;
    double R = 1.0;
    double theta = 0.0, nu = 0.0, mu = 0.0;
    std::string log = "LOG_R_OVER_T";
    std::optional<double> ell;
    std::size_t grid = 4096;
    double tmax = 60.0;
    std::optional<double> tol;
    unsigned seed = 0;
    int iterations = 10000;
    std::optional<double> eps;
    double max_distance = 0.2;
    std::optional<double> truncation;
    std::string profile_in, save_profile, plot, batch_in, out, format = "json";
    bool strict = false;
};

// A command's report plus whether any quadrature or optimizer status was not ok.
struct Outcome {
    Json report;
    bool failed = false;
    // plot data, written when --plot is set
    std::vector<double> px, py;
    std::string x_label, y_label;
};

Outcome start(const std::string& command) {
    Outcome o;
    o.report["schema"] = "1";
    o.report["command"] = command;
    return o;
}

int dimension(const RunConfig& c) { return c.n.value_or(2); }

Family family_of(const RunConfig& c) { return parse_family(c.family.value_or("moser-w0")); }

Params params_for(const RunConfig& c, std::optional<Family> f = std::nullopt) {
    Params p;
    p.n = dimension(c);
    p.k = c.k.value_or(p.n / 2);
    const bool w1_family = f && (*f == Family::moser_w1 || *f == Family::dexp);
    p.weight = c.weight ? parse_weight(*c.weight) : (w1_family ? Weight::w1 : Weight::w0);
    p.beta = c.beta.value_or(f && *f == Family::dexp ? 1.0 : 0.0);
    validate(p);
    return p;
}

double rel_tol(const RunConfig& c) { return c.tol.value_or(kDefaultRelTol); }

double required_ell(const RunConfig& c) {
    require(c.ell.has_value(), "--ell is required (the family index; eta for trunc-log)");
    return *c.ell;
}

Json params_json(const Params& p) {
    Json j;
    j["n"] = p.n;
    j["k"] = p.k;
    j["beta"] = p.beta;
    j["weight"] = std::string(to_string(p.weight));
    return j;
}

void sample_profile(Outcome& o, const RadialProfile& v) {
    // r on (0, 1], skipping r = 0 where t is infinite
    constexpr int kPoints = 512;
    for (int i = kPoints; i >= 1; --i) {
        const double r = static_cast<double>(i) / kPoints;
        o.px.push_back(r);
        o.py.push_back(v.value(r));
    }
    std::reverse(o.px.begin(), o.px.end());
    std::reverse(o.py.begin(), o.py.end());
    o.x_label = "r";
    o.y_label = "v";
}

// --profile FILE, otherwise the family given by --family/--ell
RadialProfile load_profile(const RunConfig& c, Params& p) {
    if (!c.profile_in.empty()) {
        std::ifstream in(c.profile_in);
        require(static_cast<bool>(in), "cannot read profile file " + c.profile_in);
        p = params_for(c);
        return RadialProfile::read_csv(in);
    }
    const Family f = family_of(c);
    p = params_for(c, f);
    return RadialProfile::family(f, p, required_ell(c));
}

void save_profile(const RunConfig& c, const RadialProfile& v) {
    if (c.save_profile.empty()) return;
    std::ofstream os(c.save_profile);
    require(static_cast<bool>(os), "cannot write " + c.save_profile);
    (v.kind() == RadialProfile::Kind::sampled ? v : v.resample(c.tmax, c.grid)).write_csv(os);
}

void put_quad(Json& j, const std::string& key, const QuadResult& q, Outcome& o) {
    j[key] = q.value;
    j[key + "_status"] = to_string(q.status);
    if (!q.finite()) o.failed = true;
}

Outcome cmd_constants(const RunConfig& c) {
    const Params p = params_for(c);
    const auto sc = compute_constants(p);
    Outcome o = start("constants");
    o.report.update(params_json(p));
    o.report["c_n"] = sc.c_n;
    o.report["alpha_n"] = sc.alpha_n;
    o.report["gamma_nb"] = sc.gamma_nb;
    o.report["alpha_crit"] = sc.alpha_nb;
    o.report["digamma_bound"] = digamma_bound(p.n);
    return o;
}

// Functional of a family member at the requested coefficient. The double
// exponential family takes a = alpha, or alpha_ratio * n.
void evaluate_functional(const RunConfig& c, const RadialProfile& v, const Params& p, Json& j, Outcome& o) {
    const double ratio = c.alpha_ratio.value_or(1.0);
    if (v.family_kind() == Family::dexp) {
        const double a = c.alpha.value_or(ratio * p.n);
        j["a"] = a;
        put_quad(j, "J", double_exp_functional(v, a, p.n, rel_tol(c)), o);
        j["floor"] = double_exp_floor(v.index(), a, p.n);
        return;
    }
    const auto sc = compute_constants(p);
    const double alpha = c.alpha.value_or(ratio * sc.alpha_nb);
    const double gamma = c.gamma.value_or(sc.gamma_nb);
    j["alpha"] = alpha;
    j["alpha_ratio"] = alpha / sc.alpha_nb;
    j["gamma"] = gamma;
    put_quad(j, "J", moser_functional(v, alpha, gamma, p.n, rel_tol(c)), o);
    if (v.family_kind() != Family::trunc_log) j["floor"] = moser_floor(v, alpha / sc.alpha_nb);
}

Outcome cmd_eval(const RunConfig& c) {
    const Family f = family_of(c);
    const Params p = params_for(c, f);
    const auto v = RadialProfile::family(f, p, required_ell(c));
    Outcome o = start("eval");
    o.report["family"] = std::string(to_string(f));
    o.report["ell"] = v.index();
    o.report.update(params_json(p));
    put_quad(o.report, "norm", weighted_norm(v, p, rel_tol(c)), o);
    evaluate_functional(c, v, p, o.report, o);
    sample_profile(o, v);
    return o;
}

Outcome cmd_sharpness(const RunConfig& c) {
    const Family f = family_of(c);
    const Params p = params_for(c, f);
    const int count = static_cast<int>(c.ell.value_or(30));
    require(count >= 1, "--ell (number of indices) must be >= 1");
    // moser-w1 needs ell > n
    const int first = f == Family::moser_w1 ? p.n + 1 : 1;
    RunConfig cc = c;
    if (!cc.alpha_ratio && !cc.alpha) cc.alpha_ratio = 1.05;
    Outcome o = start("sharpness");
    o.report["family"] = std::string(to_string(f));
    o.report.update(params_json(p));
    Json rows = Json::array();
    bool increasing = true, above_floor = true;
    double prev = -std::numeric_limits<double>::infinity();
    for (int ell = first; ell < first + count; ++ell) {
        const auto v = RadialProfile::family(f, p, ell);
        Json scratch;
        put_quad(scratch, "norm", weighted_norm(v, p, rel_tol(c)), o);
        evaluate_functional(cc, v, p, scratch, o);
        const double J = scratch["J"].get<double>();
        increasing = increasing && J > prev;
        if (scratch.contains("floor")) above_floor = above_floor && J >= scratch["floor"].get<double>();
        prev = J;
        Json row;
        row["ell"] = ell;
        row["norm"] = scratch["norm"];
        row["J"] = J;
        rows.push_back(row);
        o.px.push_back(ell);
        o.py.push_back(J);
    }
    o.report["alpha_ratio"] = cc.alpha_ratio ? Json(*cc.alpha_ratio) : Json(nullptr);
    o.report["strictly_increasing"] = increasing;
    o.report["above_floor"] = above_floor;
    o.report["rows"] = rows;
    o.x_label = "ell";
    o.y_label = "J";
    return o;
}

Outcome cmd_transport(const RunConfig& c) {
    const Family f = family_of(c);
    const Params p = params_for(c, f);
    const auto v = RadialProfile::family(f, p, required_ell(c));
    const auto sc = compute_constants(p);
    const double alpha = c.alpha.value_or(c.alpha_ratio.value_or(1.0) * sc.alpha_nb);
    const auto res = verify_transport(transport(v, p, alpha), rel_tol(c));
    Outcome o = start("transport-check");
    o.report["family"] = std::string(to_string(f));
    o.report["ell"] = v.index();
    o.report.update(params_json(p));
    o.report["alpha"] = alpha;
    o.report["factor"] = transport_factor(p.n);
    o.report["norm_lhs"] = res.norm_lhs;
    o.report["norm_rhs"] = res.norm_rhs;
    o.report["norm_residual"] = res.norm_residual;
    o.report["functional_lhs"] = res.functional_lhs;
    o.report["functional_rhs"] = res.functional_rhs;
    o.report["measured_factor"] = res.measured_factor;
    o.report["functional_residual"] = res.functional_residual;
    o.report["max_psi_excess"] = res.max_psi_excess;
    o.report["status"] = to_string(res.status);
    o.failed = res.status != Status::ok;
    return o;
}

// Dimension-style flags when --n is given, otherwise the raw exponents.
hardy::HardyQuery hardy_query(const RunConfig& c) {
    if (c.n) {
        hardy::HessianHardyQuery h;
        h.alpha = c.alpha.value_or(0.0);
        h.beta = c.beta.value_or(0.0);
        h.n = *c.n;
        h.k = c.k.value_or(*c.n / 2);
        h.p = c.p;
        h.weight = parse_weight(c.weight.value_or("w0"));
        hardy::validate(h);
        return h.mapped(c.R);
    }
    hardy::HardyQuery hq;
    hq.alpha = c.alpha.value_or(0.0);
    hq.theta = c.theta;
    hq.nu = c.nu;
    hq.mu = c.mu;
    hq.p = c.p;
    hq.q = c.q.value_or(1.0);
    hq.R = c.R;
    hq.log = hardy::parse_log(c.log);
    hardy::validate(hq);
    return hq;
}

Json query_json(const hardy::HardyQuery& hq) {
    Json j;
    j["alpha"] = hq.alpha;
    j["theta"] = hq.theta;
    j["nu"] = hq.nu;
    j["mu"] = hq.mu;
    j["p"] = hq.p;
    j["q"] = hq.q;
    j["R"] = hq.R;
    j["log"] = std::string(hardy::log_name(hq.log));
    return j;
}

void put_verdict(Json& j, const hardy::HardyVerdict& v) {
    j["holds"] = v.holds;
    j["condition"] = v.condition;
    j["regime"] = std::string(hardy::to_string(v.regime));
    j["near_boundary"] = v.near_boundary;
}

// Theorem-level verdict for dimension-style input, proposition-level otherwise.
hardy::HardyVerdict verdict_for(const RunConfig& c, const hardy::HardyQuery& hq) {
    if (!c.n) return hardy::decide(hq);
    hardy::HessianHardyQuery h;
    h.alpha = c.alpha.value_or(0.0);
    h.beta = c.beta.value_or(0.0);
    h.n = *c.n;
    h.k = c.k.value_or(*c.n / 2);
    h.p = c.p;
    h.weight = parse_weight(c.weight.value_or("w0"));
    return hardy::decide(h);
}

Outcome cmd_hardy_decide(const RunConfig& c) {
    const auto hq = hardy_query(c);
    const auto v = verdict_for(c, hq);
    Outcome o = start("hardy decide");
    put_verdict(o.report, v);
    o.report["query"] = query_json(hq);
    o.report["notes"] = v.notes;
    return o;
}

void put_numeric(Json& j, const hardy::HardyQuery& hq, const hardy::HardyVerdict& v, double truncation) {
    const auto cr = hardy::numeric_criterion(hq, truncation);
    j["numeric"] = std::string(hardy::to_string(cr.result));
    j["near_zero"] = std::string(hardy::to_string(cr.near_zero));
    j["near_R"] = std::string(hardy::to_string(cr.near_R));
    j["log_sup"] = cr.log_sup;
    if (cr.result == hardy::Classification::undecided)
        j["agree"] = nullptr;
    else
        j["agree"] = (cr.result == hardy::Classification::finite) == v.holds;
}

Outcome cmd_hardy_verify(const RunConfig& c) {
    const auto hq = hardy_query(c);
    const auto v = verdict_for(c, hq);
    Outcome o = start("hardy verify");
    put_verdict(o.report, v);
    put_numeric(o.report, hq, v, c.truncation.value_or(hq.R / 4.0));
    if (v.holds) o.report["best_constant_estimate"] = hardy::best_constant_estimate(hq);
    o.report["query"] = query_json(hq);
    return o;
}

// One query per line: alpha theta nu mu p q R [log], separated by spaces or
// commas; blank lines and lines starting with '#' are skipped.
Outcome cmd_hardy_batch(const RunConfig& c) {
    std::ifstream file;
    if (c.batch_in != "-") {
        file.open(c.batch_in);
        require(static_cast<bool>(file), "cannot read batch file " + c.batch_in);
    }
    std::istream& in = c.batch_in == "-" ? std::cin : file;
    Outcome o = start("hardy batch");
    Json rows = Json::array();
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto first = line.find_first_not_of(" \t\r");
        if (first == std::string::npos || line[first] == '#') continue;
        std::replace(line.begin(), line.end(), ',', ' ');
        std::istringstream ls(line);
        hardy::HardyQuery hq;
        std::string log = "LOG_R_OVER_T";
        ls >> hq.alpha >> hq.theta >> hq.nu >> hq.mu >> hq.p >> hq.q >> hq.R;
        require(static_cast<bool>(ls), "batch line " + std::to_string(lineno) + ": expected 7 numbers");
        ls >> log;
        hq.log = hardy::parse_log(log);
        hardy::validate(hq);
        const auto v = hardy::decide(hq);
        Json row;
        row["line"] = lineno;
        row.update(query_json(hq));
        put_verdict(row, v);
        put_numeric(row, hq, v, hq.R / 4.0);
        rows.push_back(row);
    }
    o.report["count"] = rows.size();
    o.report["rows"] = rows;
    return o;
}

Outcome cmd_embed(const RunConfig& c) {
    hardy::HessianHardyQuery h;
    h.alpha = c.alpha.value_or(0.0);
    h.beta = c.beta.value_or(0.0);
    h.n = dimension(c);
    h.k = c.k.value_or(dimension(c) / 2);
    h.p = c.p;
    h.weight = parse_weight(c.weight.value_or("w0"));
    const auto e = hardy::embedding_conditions(h);
    Outcome o = start("embed");
    o.report["n"] = h.n;
    o.report["k"] = h.k;
    o.report["beta"] = h.beta;
    o.report["weight"] = std::string(to_string(h.weight));
    o.report["alpha"] = h.alpha;
    o.report["p"] = h.p;
    o.report["embeds"] = e.embeds;
    o.report["critical_exponent"] = e.critical_exponent;
    o.report["critical_condition_applied"] = e.critical_condition_applied;
    return o;
}

Json run_json(const StrategyRun& r) {
    Json j;
    j["value"] = r.value;
    j["iterations"] = r.iterations;
    j["status"] = to_string(r.status);
    j["max_sphere_deviation"] = r.max_sphere_deviation;
    return j;
}

Outcome cmd_maximize(const RunConfig& c) {
    MaximizerProblem prob;
    prob.params = params_for(c);
    prob.grid_size = c.grid;
    prob.t_max = c.tmax;
    prob.alpha = c.alpha;
    prob.gamma = c.gamma;
    if (c.tol) prob.tol = *c.tol;
    prob.max_iterations = c.iterations;
    const auto rep = maximize(prob, c.seed);
    Outcome o = start("maximize");
    o.report.update(params_json(prob.params));
    o.report["alpha"] = prob.resolved_alpha();
    o.report["gamma"] = prob.resolved_gamma();
    o.report["grid"] = prob.grid_size;
    o.report["seed"] = c.seed;
    o.report["value"] = rep.value;
    o.report["lambda"] = rep.lambda;
    o.report["el_residual"] = rep.el_residual;
    o.report["norm"] = rep.norm;
    o.report["monotone_decreasing"] = rep.monotone_decreasing;
    o.report["derivative_at_zero"] = rep.derivative_at_zero;
    o.report["max_derivative"] = rep.max_derivative;
    o.report["admissible"] = rep.admissible;
    o.report["status"] = to_string(rep.status);
    o.report["strategy"] = std::string(to_string(rep.strategy));
    o.report["t_max"] = rep.t_max;
    o.report["ascent"] = run_json(rep.ascent);
    o.report["fixed_point"] = run_json(rep.fixed_point);
    o.failed = rep.status != Status::ok;
    save_profile(c, rep.profile);
    sample_profile(o, rep.profile);
    return o;
}

Json admissibility_json(const AdmissibilityReport& a) {
    Json j;
    j["admissible"] = a.admissible;
    j["monotone"] = a.monotone;
    j["worst_r"] = a.worst_r;
    j["scale"] = a.scale;
    j["tol"] = a.tol;
    Json per = Json::array();
    for (const auto& c : a.per_j) {
        Json e;
        e["j"] = c.j;
        e["min"] = c.min ? Json(*c.min) : Json(nullptr);
        e["worst_r"] = c.worst_r;
        per.push_back(e);
    }
    j["per_j"] = per;
    j["flagged_r"] = a.flagged_r;
    return j;
}

Outcome cmd_admissible(const RunConfig& c) {
    Params p;
    const auto v = load_profile(c, p);
    Outcome o = start("admissible");
    o.report.update(params_json(p));
    o.report.update(admissibility_json(check_admissible(v, p)));
    return o;
}

Outcome cmd_smooth(const RunConfig& c) {
    Params p;
    const auto v = load_profile(c, p);
    Outcome o = start("smooth");
    o.report.update(params_json(p));
    RadialProfile s = v;
    if (c.eps) {
        s = smooth(v, *c.eps);
        o.report["epsilon"] = *c.eps;
        put_quad(o.report, "distance", weighted_distance(s, v, p, rel_tol(c)), o);
        o.report["admissible"] = check_admissible(s, p).admissible;
    } else {
        const auto sw = smooth_until(v, p, c.max_distance);
        s = sw.profile;
        o.report["max_distance"] = c.max_distance;
        o.report["epsilon"] = sw.epsilon;
        o.report["distance"] = sw.distance;
        o.report["admissible"] = sw.admissible;
        o.report["converged"] = sw.converged;
        o.failed = !sw.converged;
    }
    save_profile(c, s);
    sample_profile(o, s);
    return o;
}

Outcome cmd_concentration(const RunConfig& c) {
    const Params p = params_for(c, Family::moser_w0);
    const int count = static_cast<int>(c.ell.value_or(10));
    require(count >= 1, "--ell (largest index) must be >= 1");
    std::vector<double> ells;
    for (int i = 1; i <= count; ++i) ells.push_back(i);
    const auto rep = concentration_probe(p, ells);
    Outcome o = start("concentration");
    o.report.update(params_json(p));
    o.report["limsup"] = rep.limsup;
    o.report["bound"] = rep.bound;
    o.report["above_floor"] = rep.above_floor;
    o.report["below_bound"] = rep.below_bound;
    Json rows = Json::array();
    for (std::size_t i = 0; i < ells.size(); ++i) {
        Json row;
        row["ell"] = ells[i];
        row["J"] = rep.values[i];
        row["floor"] = rep.floors[i];
        rows.push_back(row);
    }
    o.report["rows"] = rows;
    o.px = rep.ells;
    o.py = rep.values;
    o.x_label = "ell";
    o.y_label = "J";
    return o;
}

void add_options(CLI::App& app, RunConfig& c) {
    app.add_option("--n", c.n, "dimension (even)");
    app.add_option("--k", c.k, "Hessian order (default n/2)");
    app.add_option("--beta", c.beta, "log-weight exponent parameter");
    app.add_option("--weight", c.weight, "w0 or w1 (default follows the family)");
    app.add_option("--family", c.family, "moser-w0, moser-w1, dexp or trunc-log");
    app.add_option("--alpha", c.alpha, "coefficient (Hardy: power of t)");
    app.add_option("--alpha-ratio", c.alpha_ratio, "coefficient as a multiple of the critical one");
    app.add_option("--gamma", c.gamma, "exponent (default critical)");
    app.add_option("--p", c.p, "Hardy/embedding exponent p");
    app.add_option("--q", c.q, "Hardy exponent q");
    app.add_option("--R", c.R, "Hardy interval end");
    app.add_option("--theta", c.theta, "Hardy log power on the left");
    app.add_option("--nu", c.nu, "Hardy power of t on the right");
    app.add_option("--mu", c.mu, "Hardy log power on the right");
    app.add_option("--log", c.log, "LOG_R_OVER_T or LOG_ER_OVER_T");
    app.add_option("--ell", c.ell, "family index (eta for trunc-log); count for sweeps");
    app.add_option("--grid", c.grid, "cells for the optimizer grid and profile output");
    app.add_option("--tmax", c.tmax, "largest t on the optimizer grid");
    app.add_option("--tol", c.tol, "quadrature or optimizer tolerance");
    app.add_option("--seed", c.seed, "optimizer jitter seed");
    app.add_option("--iterations", c.iterations, "optimizer iteration cap");
    app.add_option("--eps", c.eps, "smoothing radius (default: sweep)");
    app.add_option("--max-distance", c.max_distance, "smoothing sweep target distance");
    app.add_option("--truncation", c.truncation, "Hardy numeric sweep start (default R/4)");
    app.add_option("--profile", c.profile_in, "profile CSV (t,v) instead of a family");
    app.add_option("--save-profile", c.save_profile, "write the resulting profile as CSV");
    app.add_option("--plot", c.plot, "write PREFIX.dat and PREFIX.svg");
    app.add_option("--out", c.out, "write the report here instead of stdout");
    app.add_flag("--strict", c.strict, "exit 3 on divergent or non-converged results");
    app.add_option("--format", c.format, "json or csv")->check(CLI::IsMember({"json", "csv"}));
}

} // namespace

int run(int argc, char** argv) {
    CLI::App app{"Trudinger-Moser and Hardy-type computations on radial profiles", "tmlog"};
    app.require_subcommand(1);
    app.set_config("--config", "", "key=value file; flags override it");
    app.allow_config_extras(CLI::config_extras_mode::error);
    RunConfig c;
    add_options(app, c);

    auto sub = [&](CLI::App& parent, const char* name, const char* help) {
        auto* s = parent.add_subcommand(name, help);
        s->fallthrough();
        return s;
    };
    auto* constants = sub(app, "constants", "sharp constants for n = 2k");
    auto* eval = sub(app, "eval", "norm and functional of a family member");
    auto* sharpness = sub(app, "sharpness", "functional growth over ell (CSV columns ell,norm,J)");
    auto* transport_cmd = sub(app, "transport-check", "half-line transport identities");
    auto* hardy_cmd = sub(app, "hardy", "weighted Hardy inequalities");
    hardy_cmd->require_subcommand(1);
    auto* decide = sub(*hardy_cmd, "decide", "closed-form verdict");
    auto* verify = sub(*hardy_cmd, "verify", "verdict plus the numerical criterion");
    auto* batch = sub(*hardy_cmd, "batch", "verdicts for a file of queries");
    batch->add_option("input", c.batch_in, "query file, '-' for stdin")->required();
    auto* embed = sub(app, "embed", "weighted Sobolev embedding conditions");
    auto* maximize_cmd = sub(app, "maximize", "maximize the functional on the unit sphere");
    auto* admissible = sub(app, "admissible", "radial k-admissibility check");
    auto* smooth_cmd = sub(app, "smooth", "smooth the kinks of a profile");
    auto* concentration = sub(app, "concentration", "functional along the concentrating family");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        std::cerr << app.help();
        return kExitUsage;
    }

    try {
        Outcome o;
        if (constants->parsed()) o = cmd_constants(c);
        else if (eval->parsed()) o = cmd_eval(c);
        else if (sharpness->parsed()) o = cmd_sharpness(c);
        else if (transport_cmd->parsed()) o = cmd_transport(c);
        else if (decide->parsed()) o = cmd_hardy_decide(c);
        else if (verify->parsed()) o = cmd_hardy_verify(c);
        else if (batch->parsed()) o = cmd_hardy_batch(c);
        else if (embed->parsed()) o = cmd_embed(c);
        else if (maximize_cmd->parsed()) o = cmd_maximize(c);
        else if (admissible->parsed()) o = cmd_admissible(c);
        else if (smooth_cmd->parsed()) o = cmd_smooth(c);
        else if (concentration->parsed()) o = cmd_concentration(c);

        std::ofstream file;
        if (!c.out.empty()) {
            file.open(c.out);
            require(static_cast<bool>(file), "cannot write " + c.out);
        }
        std::ostream& os = c.out.empty() ? std::cout : file;
        if (c.format == "csv")
            write_csv(os, o.report);
        else
            write_json(os, o.report);
        if (!c.plot.empty()) {
            require(!o.px.empty(), "this command has nothing to plot");
            write_plot(c.plot, o.px, o.py, o.x_label, o.y_label);
        }
        return c.strict && o.failed ? kExitStrict : 0;
    } catch (const ValidationError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitUsage;
    }
}

} // namespace tmlog::cli

int main(int argc, char** argv) { return tmlog::cli::run(argc, argv); }
