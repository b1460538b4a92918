#include "gaussmax/cli.hpp"

#include <cmath>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "gaussmax/covariance.hpp"
#include "gaussmax/errors.hpp"
#include "gaussmax/montecarlo.hpp"
#include "gaussmax/normal.hpp"
#include "gaussmax/process.hpp"
#include "gaussmax/version.hpp"

namespace gaussmax {

namespace {

using ordered_json = nlohmann::ordered_json;

std::string csv_number(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

std::string utc_timestamp() {
    const std::time_t now = std::time(nullptr);
    std::tm tm_utc;
    gmtime_r(&now, &tm_utc);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm_utc);
    return buf;
}

const char* command_name(RunConfig::Command c) {
    switch (c) {
        case RunConfig::Command::bound: return "bound";
        case RunConfig::Command::bracket: return "bracket";
        case RunConfig::Command::certify: return "certify";
        case RunConfig::Command::scan: return "scan";
        case RunConfig::Command::process_bound: return "process-bound";
        case RunConfig::Command::inequality_grid: return "inequality-grid";
    }
    return "unknown";
}

struct CheckRecord {
    std::string name;
    bool pass = true;
    ordered_json detail;
};

struct Report {
    ordered_json inputs;
    ordered_json results;
    std::vector<CheckRecord> checks;
    std::vector<std::string> csv_header;
    std::vector<std::vector<std::string>> csv_rows;

    bool pass() const {
        for (const auto& c : checks) {
            if (!c.pass) {
                return false;
            }
        }
        return true;
    }
};

// ---- target handling -------------------------------------------------

long long parse_positive(const std::string& text, const std::string& what) {
    try {
        size_t pos = 0;
        const long long value = std::stoll(text, &pos);
        if (pos != text.size() || value < 1) {
            throw std::invalid_argument("");
        }
        return value;
    } catch (...) {
        throw std::invalid_argument("invalid " + what + ": '" + text + "'");
    }
}

double parse_real(const std::string& text, const std::string& what) {
    try {
        size_t pos = 0;
        const double value = std::stod(text, &pos);
        if (pos != text.size()) {
            throw std::invalid_argument("");
        }
        return value;
    } catch (...) {
        throw std::invalid_argument("invalid " + what + ": '" + text + "'");
    }
}

CovarianceMatrix parse_synthetic_target(const std::string& spec) {
    std::vector<std::string> parts;
    std::istringstream ss(spec);
    std::string item;
    while (std::getline(ss, item, ':')) {
        parts.push_back(item);
    }
    if (parts.size() == 2 && parts[0] == "identity") {
        return CovarianceMatrix::identity(
            static_cast<int>(parse_positive(parts[1], "target dimension")));
    }
    if (parts.size() == 3 && parts[0] == "equicorr") {
        return CovarianceMatrix::equicorrelated(
            static_cast<int>(parse_positive(parts[1], "target dimension")),
            parse_real(parts[2], "target correlation"));
    }
    if (parts.size() == 3 && parts[0] == "ar1") {
        return CovarianceMatrix::ar1_toeplitz(
            static_cast<int>(parse_positive(parts[1], "target dimension")),
            parse_real(parts[2], "target correlation"));
    }
    throw std::invalid_argument(
        "unknown target '" + spec + "'; expected identity:N, equicorr:N:RHO or ar1:N:RHO");
}

bool has_matrix_source(const RunConfig& c) {
    return !c.cov_path.empty() || !c.target.empty();
}

CovarianceMatrix load_matrix(const RunConfig& c) {
    if (!c.cov_path.empty() && !c.target.empty()) {
        throw std::invalid_argument("give either --cov or --target, not both");
    }
    if (!c.cov_path.empty()) {
        return read_covariance_file(c.cov_path);
    }
    return parse_synthetic_target(c.target);
}

struct OrderingSpec {
    bool best_of = false;
    int k = 0;
};

OrderingSpec parse_ordering(const std::string& text) {
    if (text == "natural") {
        return {};
    }
    const std::string prefix = "best-of:";
    if (text.rfind(prefix, 0) == 0) {
        OrderingSpec spec;
        spec.best_of = true;
        spec.k = static_cast<int>(
            parse_positive(text.substr(prefix.size()), "ordering count"));
        return spec;
    }
    throw std::invalid_argument("invalid --ordering '" + text +
                                "'; expected natural or best-of:K");
}

struct SigmaTauChoice {
    long long n = 0;
    double sigma = 1.0;
    double tau = 0.0;
    std::string source = "iid";
    std::vector<int> ordering;
};

SigmaTauChoice resolve_sigma_tau(const RunConfig& config) {
    SigmaTauChoice choice;
    if (has_matrix_source(config)) {
        const CovarianceMatrix c = load_matrix(config);
        choice.n = c.dim();
        if (config.use_eigen) {
            const auto [lmin, lmax] = eigen_bounds(c);
            if (!(lmin > 0.0)) {
                throw numeric_error("eigen_bounds: nonpositive smallest eigenvalue");
            }
            choice.sigma = std::sqrt(lmin);
            choice.tau = std::sqrt(lmax);
            choice.source = "eigenvalue";
            return choice;
        }
        const OrderingSpec spec = parse_ordering(config.ordering);
        if (spec.best_of) {
            const auto best = best_ordering(c, spec.k, config.alpha, config.seed);
            choice.sigma = best.sigma;
            choice.tau = best.tau;
            choice.source = "best-of-" + std::to_string(spec.k);
            choice.ordering = best.ordering;
            return choice;
        }
        const auto [sigma, tau] = sigma_tau(c);
        choice.sigma = sigma;
        choice.tau = tau;
        choice.source = "sequential";
        return choice;
    }
    if (config.lambda_min.has_value() || config.lambda_max.has_value()) {
        if (!config.lambda_min.has_value() || !config.lambda_max.has_value()) {
            throw std::invalid_argument("--lambda-min and --lambda-max must be given together");
        }
        if (!(*config.lambda_min > 0.0) || !(*config.lambda_max >= *config.lambda_min)) {
            throw std::invalid_argument(
                "requires 0 < lambda-min <= lambda-max");
        }
        if (config.n < 1) {
            throw std::invalid_argument("requires --n >= 1 with eigenvalue inputs");
        }
        choice.n = config.n;
        choice.sigma = std::sqrt(*config.lambda_min);
        choice.tau = std::sqrt(*config.lambda_max);
        choice.source = "eigenvalue-inputs";
        return choice;
    }
    if (config.n < 1) {
        throw std::invalid_argument("requires --n >= 1 (or a covariance source)");
    }
    choice.n = config.n;
    return choice;
}

ordered_json certificate_json(const LowerBoundCertificate& cert) {
    ordered_json j;
    j["n"] = cert.n;
    j["alpha"] = cert.alpha;
    j["l_alpha"] = cert.l_alpha;
    j["sigma"] = cert.sigma;
    j["tau"] = cert.tau;
    j["threshold"] = cert.threshold;
    j["guaranteed_tail"] = cert.guaranteed_tail;
    return j;
}

ordered_json estimate_json(const TailEstimate& est) {
    ordered_json j;
    j["threshold"] = est.threshold;
    j["hits"] = est.hits;
    j["replications"] = est.replications;
    j["point"] = est.point;
    j["ci_low"] = est.ci_low;
    j["ci_high"] = est.ci_high;
    return j;
}

// ---- command handlers -------------------------------------------------

Report handle_bound(const RunConfig& config) {
    Report rep;
    const SigmaTauChoice choice = resolve_sigma_tau(config);
    const auto cert =
        lower_bound_certificate(choice.n, config.alpha, choice.sigma, choice.tau);

    rep.inputs["n"] = choice.n;
    rep.inputs["alpha"] = config.alpha;
    rep.inputs["sigma_source"] = choice.source;
    if (!config.cov_path.empty()) {
        rep.inputs["cov"] = config.cov_path;
    }
    if (!config.target.empty()) {
        rep.inputs["target"] = config.target;
    }
    rep.results["certificate"] = certificate_json(cert);
    rep.results["big_n"] = MaxQuery(choice.n).big_n;
    if (!choice.ordering.empty()) {
        rep.results["ordering"] = choice.ordering;
    }

    rep.csv_header = {"n",   "alpha",     "sigma",          "tau",
                      "l_alpha", "threshold", "guaranteed_tail", "sigma_source"};
    rep.csv_rows.push_back({std::to_string(cert.n), csv_number(cert.alpha),
                            csv_number(cert.sigma), csv_number(cert.tau),
                            csv_number(cert.l_alpha), csv_number(cert.threshold),
                            csv_number(cert.guaranteed_tail), choice.source});
    return rep;
}

Report handle_bracket(const RunConfig& config) {
    if (config.n < 1) {
        throw std::invalid_argument("bracket: requires --n >= 1");
    }
    Report rep;
    std::vector<double> grid = config.p_grid;
    if (grid.empty()) {
        for (int i = 1; i <= 19; ++i) {
            grid.push_back(i * 0.05);
        }
    }
    const MaxQuery q(config.n);
    rep.inputs["n"] = config.n;
    rep.inputs["strict"] = config.strict;
    rep.results["big_n"] = q.big_n;
    rep.results["rows"] = ordered_json::array();
    rep.csv_header = {"p",         "g",         "msq_lower", "msq_upper",
                      "regime_ok", "e",         "dependent_msq_upper"};

    for (double p : grid) {
        const double g = gumbel_quantile(p);
        const double e = exponential_quantile(p);
        const double dep_upper = dependent_msq_upper(q, e);
        ordered_json row;
        row["p"] = p;
        row["g"] = g;
        std::vector<std::string> csv_row{csv_number(p), csv_number(g)};
        const bool defined = q.big_n + 2.0 * g > 1.0;
        bool regime_ok = false;
        if (defined) {
            const auto bracket = independent_msq_bracket(q, g);
            regime_ok = bracket.regime_ok;
            row["msq_lower"] = *bracket.msq_lower;
            row["msq_upper"] = bracket.msq_upper;
            row["regime_ok"] = bracket.regime_ok;
            csv_row.push_back(csv_number(*bracket.msq_lower));
            csv_row.push_back(csv_number(bracket.msq_upper));
            csv_row.push_back(bracket.regime_ok ? "true" : "false");
        } else {
            row["msq_lower"] = nullptr;
            row["msq_upper"] = nullptr;
            row["regime_ok"] = false;
            csv_row.insert(csv_row.end(), {"", "", "false"});
        }
        row["e"] = e;
        row["dependent_msq_upper"] = dep_upper;
        csv_row.push_back(csv_number(e));
        csv_row.push_back(csv_number(dep_upper));
        rep.results["rows"].push_back(row);
        rep.csv_rows.push_back(csv_row);

        if (config.strict) {
            CheckRecord check;
            check.name = "regime p=" + csv_number(p);
            check.pass = defined && regime_ok;
            check.detail["regime_ok"] = regime_ok;
            check.detail["defined"] = defined;
            rep.checks.push_back(check);
        }
    }
    return rep;
}

void append_lower_check(Report& rep, const LowerBoundCheck& check) {
    CheckRecord rec;
    rec.name = "lower_bound";
    rec.pass = check.pass;
    rec.detail["certificate"] = certificate_json(check.certificate);
    rec.detail["observed"] = estimate_json(check.observed);
    rec.detail["slack"] = check.slack;
    rep.checks.push_back(rec);
}

void append_upper_checks(Report& rep, const UpperBoundCheck& check) {
    for (const auto& row : check.rows) {
        CheckRecord rec;
        rec.name = "upper_bound A=" + csv_number(row.threshold);
        rec.pass = row.pass;
        rec.detail["bound"] = row.bound;
        rec.detail["observed"] = estimate_json(row.observed);
        rec.detail["slack"] = row.slack;
        rep.checks.push_back(rec);
    }
}

Report handle_certify(const RunConfig& config) {
    Report rep;
    SimulationPlan plan;
    plan.seed = config.seed;
    plan.replications = config.reps;
    plan.threads = config.threads;

    std::vector<double> thresholds = config.thresholds;
    if (thresholds.empty()) {
        thresholds = {2.0, 2.5, 3.0};
    }

    // The thread count is deliberately not echoed: results are identical
    // for every parallelism degree, and so must the report be.
    rep.inputs["seed"] = config.seed;
    rep.inputs["replications"] = config.reps;
    rep.inputs["alpha"] = config.alpha;
    rep.inputs["thresholds"] = thresholds;

    if (!config.process_path.empty()) {
        if (has_matrix_source(config)) {
            throw std::invalid_argument("certify: give either a matrix source or --process");
        }
        if (config.n < 1) {
            throw std::invalid_argument("certify: requires --n (window length) with --process");
        }
        if (config.k < 1) {
            throw std::invalid_argument("certify: requires --k >= 1");
        }
        const WoldModel model = read_process_spec_file(config.process_path);
        rep.inputs["process"] = config.process_path;
        rep.inputs["n"] = config.n;
        rep.inputs["k"] = config.k;

        const auto cert = stationary_lower_bound(model, config.n, config.k, config.alpha);
        const auto samples = sample_process_max(model, config.n, plan);
        append_lower_check(rep, certify_lower_bound_from_samples(cert, samples));
        append_upper_checks(rep, certify_upper_bounds(config.n, samples, thresholds));
        rep.results["subcount"] = cert.n;
        rep.results["sigma"] = cert.sigma;
        rep.results["tau"] = cert.tau;
    } else {
        const CovarianceMatrix c = load_matrix(config);
        rep.inputs["n"] = c.dim();
        if (!config.cov_path.empty()) {
            rep.inputs["cov"] = config.cov_path;
        } else {
            rep.inputs["target"] = config.target;
        }
        rep.inputs["ordering"] = config.ordering;

        const OrderingSpec spec = parse_ordering(config.ordering);
        double sigma = 0.0;
        double tau = 0.0;
        if (spec.best_of) {
            const auto best = best_ordering(c, spec.k, config.alpha, config.seed);
            sigma = best.sigma;
            tau = best.tau;
        } else {
            std::tie(sigma, tau) = sigma_tau(c);
        }
        const auto cert = lower_bound_certificate(c.dim(), config.alpha, sigma, tau);
        const auto samples = sample_max(c, plan);
        append_lower_check(rep, certify_lower_bound_from_samples(cert, samples));
        append_upper_checks(rep, certify_upper_bounds(c.dim(), samples, thresholds));

        const bool is_identity =
            (c.entries() - Eigen::MatrixXd::Identity(c.dim(), c.dim()))
                .cwiseAbs()
                .maxCoeff() == 0.0;
        if (is_identity) {
            const auto coupling = gumbel_coupling_test(c.dim(), plan);
            CheckRecord rec;
            rec.name = "gumbel_coupling";
            rec.pass = coupling.pass;
            rec.detail["ks_statistic"] = coupling.ks_statistic;
            rec.detail["ks_critical"] = coupling.ks_critical;
            rec.detail["sandwich_violations"] = coupling.sandwich_violations;
            rep.checks.push_back(rec);
        }
        if (config.hi_a.has_value() || config.hi_b.has_value()) {
            if (!config.hi_a.has_value() || !config.hi_b.has_value()) {
                throw std::invalid_argument("--hi-a and --hi-b must be given together");
            }
            const auto hi = certify_hi_inequality(c, *config.hi_a, *config.hi_b, plan);
            CheckRecord rec;
            rec.name = "hi_inequality";
            rec.pass = hi.pass;
            rec.detail["a"] = hi.a;
            rec.detail["b"] = hi.b;
            rec.detail["lhs"] = estimate_json(hi.lhs);
            rec.detail["max_r"] = estimate_json(hi.max_r);
            rec.detail["min_e"] = estimate_json(hi.min_e);
            rec.detail["min_e_index"] = hi.min_e_index;
            rec.detail["rhs_point"] = hi.rhs_point;
            rec.detail["slack"] = hi.slack;
            rep.checks.push_back(rec);
        }
    }

    rep.csv_header = {"check", "pass", "threshold", "reference",
                      "point", "ci_low", "ci_high", "slack"};
    for (const auto& check : rep.checks) {
        std::vector<std::string> row{check.name, check.pass ? "true" : "false"};
        if (check.detail.contains("observed")) {
            const auto& obs = check.detail["observed"];
            const double reference = check.detail.contains("bound")
                                         ? check.detail["bound"].get<double>()
                                         : check.detail["certificate"]["guaranteed_tail"].get<double>();
            row.push_back(csv_number(obs["threshold"].get<double>()));
            row.push_back(csv_number(reference));
            row.push_back(csv_number(obs["point"].get<double>()));
            row.push_back(csv_number(obs["ci_low"].get<double>()));
            row.push_back(csv_number(obs["ci_high"].get<double>()));
            row.push_back(csv_number(check.detail["slack"].get<double>()));
        } else if (check.detail.contains("ks_statistic")) {
            row.push_back("");
            row.push_back(csv_number(check.detail["ks_critical"].get<double>()));
            row.push_back(csv_number(check.detail["ks_statistic"].get<double>()));
            row.push_back("");
            row.push_back("");
            row.push_back(csv_number(check.detail["ks_critical"].get<double>() -
                                     check.detail["ks_statistic"].get<double>()));
        } else if (check.detail.contains("lhs")) {
            const auto& lhs = check.detail["lhs"];
            row.push_back(csv_number(check.detail["a"].get<double>() +
                                     check.detail["b"].get<double>()));
            row.push_back(csv_number(check.detail["rhs_point"].get<double>()));
            row.push_back(csv_number(lhs["point"].get<double>()));
            row.push_back(csv_number(lhs["ci_low"].get<double>()));
            row.push_back(csv_number(lhs["ci_high"].get<double>()));
            row.push_back(csv_number(check.detail["slack"].get<double>()));
        } else {
            row.insert(row.end(), {"", "", "", "", "", ""});
        }
        rep.csv_rows.push_back(row);
    }
    return rep;
}

Report handle_scan(const RunConfig& config) {
    const bool over_n = !config.scan_ns.empty();
    const bool over_alpha = !config.scan_alphas.empty();
    if (over_n == over_alpha) {
        throw std::invalid_argument("scan: give exactly one of --ns or --alphas");
    }
    Report rep;
    const SigmaTauChoice base = resolve_sigma_tau(config);
    rep.inputs["sigma"] = base.sigma;
    rep.inputs["tau"] = base.tau;
    rep.inputs["sigma_source"] = base.source;
    rep.results["rows"] = ordered_json::array();
    rep.csv_header = {"n", "alpha", "sigma", "tau", "threshold", "guaranteed_tail", "status"};

    auto add_row = [&](long long n, double alpha) {
        ordered_json row;
        row["n"] = n;
        row["alpha"] = alpha;
        row["sigma"] = base.sigma;
        row["tau"] = base.tau;
        std::vector<std::string> csv_row{std::to_string(n), csv_number(alpha),
                                         csv_number(base.sigma), csv_number(base.tau)};
        try {
            const auto cert = lower_bound_certificate(n, alpha, base.sigma, base.tau);
            row["threshold"] = cert.threshold;
            row["guaranteed_tail"] = cert.guaranteed_tail;
            row["status"] = "ok";
            csv_row.push_back(csv_number(cert.threshold));
            csv_row.push_back(csv_number(cert.guaranteed_tail));
            csv_row.push_back("ok");
        } catch (const gate_error&) {
            row["threshold"] = nullptr;
            row["guaranteed_tail"] = nullptr;
            row["status"] = "gate";
            csv_row.insert(csv_row.end(), {"", "", "gate"});
            if (config.strict) {
                CheckRecord check;
                check.name = "gate n=" + std::to_string(n) + " alpha=" + csv_number(alpha);
                check.pass = false;
                rep.checks.push_back(check);
            }
        }
        rep.results["rows"].push_back(row);
        rep.csv_rows.push_back(csv_row);
    };

    if (over_n) {
        rep.inputs["alpha"] = config.alpha;
        for (long long n : config.scan_ns) {
            add_row(n, config.alpha);
        }
    } else {
        rep.inputs["n"] = base.n;
        for (double alpha : config.scan_alphas) {
            add_row(base.n, alpha);
        }
    }
    return rep;
}

Report handle_process_bound(const RunConfig& config) {
    if (config.process_path.empty()) {
        throw std::invalid_argument("process-bound: requires --process");
    }
    if (config.n < 1) {
        throw std::invalid_argument("process-bound: requires --n >= 1");
    }
    const WoldModel model = read_process_spec_file(config.process_path);
    Report rep;
    rep.inputs["process"] = config.process_path;
    rep.inputs["n"] = config.n;
    rep.inputs["alpha"] = config.alpha;
    rep.results["innovation_sd"] = model.innovation_sd;
    rep.results["psi_terms"] = static_cast<long long>(model.psi.size());
    rep.results["truncation_tail"] = model.truncation_tail;

    if (config.k_sweep.has_value()) {
        const long long usable = largest_usable_k(config.n, config.alpha);
        if (usable < 1) {
            // Surfaces the gate message for k = 1.
            stationary_lower_bound(model, config.n, 1, config.alpha);
        }
        const long long k_hi = std::min(*config.k_sweep, usable);
        rep.inputs["k_sweep"] = *config.k_sweep;
        rep.results["largest_usable_k"] = usable;
        rep.results["rows"] = ordered_json::array();
        rep.csv_header = {"k", "subcount", "sigma", "tau", "threshold", "guaranteed_tail"};
        long long best_k = 0;
        double best_threshold = 0.0;
        for (long long k = 1; k <= k_hi; ++k) {
            const auto cert = stationary_lower_bound(model, config.n, k, config.alpha);
            ordered_json row;
            row["k"] = k;
            row["subcount"] = cert.n;
            row["sigma"] = cert.sigma;
            row["tau"] = cert.tau;
            row["threshold"] = cert.threshold;
            row["guaranteed_tail"] = cert.guaranteed_tail;
            rep.results["rows"].push_back(row);
            rep.csv_rows.push_back({std::to_string(k), std::to_string(cert.n),
                                    csv_number(cert.sigma), csv_number(cert.tau),
                                    csv_number(cert.threshold),
                                    csv_number(cert.guaranteed_tail)});
            if (best_k == 0 || cert.threshold > best_threshold) {
                best_k = k;
                best_threshold = cert.threshold;
            }
        }
        rep.results["best_k"] = best_k;
        rep.results["best_threshold"] = best_threshold;
        return rep;
    }

    if (config.k < 1) {
        throw std::invalid_argument("process-bound: requires --k >= 1");
    }
    rep.inputs["k"] = config.k;
    const auto cert = stationary_lower_bound(model, config.n, config.k, config.alpha);
    rep.results["certificate"] = certificate_json(cert);
    rep.results["subcount"] = cert.n;
    rep.csv_header = {"k", "subcount", "sigma", "tau", "threshold", "guaranteed_tail"};
    rep.csv_rows.push_back({std::to_string(config.k), std::to_string(cert.n),
                            csv_number(cert.sigma), csv_number(cert.tau),
                            csv_number(cert.threshold), csv_number(cert.guaranteed_tail)});
    return rep;
}

Report handle_inequality_grid(const RunConfig&) {
    Report rep;
    const GridCheckReport grid = run_inequality_grids();
    rep.results["points"] = grid.points;

    const auto add = [&](const char* name, long long violations) {
        CheckRecord rec;
        rec.name = name;
        rec.pass = violations == 0;
        rec.detail["violations"] = violations;
        rep.checks.push_back(rec);
        rep.csv_rows.push_back({name, std::to_string(violations),
                                violations == 0 ? "true" : "false"});
    };
    rep.csv_header = {"check", "violations", "pass"};
    add("lower_inversion", grid.lower_violations);
    add("upper_inversion", grid.upper_violations);
    add("mills_bracket", grid.mills_violations);
    add("v_monotone", grid.monotone_violations);
    return rep;
}

std::string render_json(const RunConfig& config, const Report& rep) {
    ordered_json doc;
    doc["tool"] = "gaussmax";
    doc["version"] = kVersion;
    doc["command"] = command_name(config.command);
    if (!config.no_timestamp) {
        doc["timestamp"] = utc_timestamp();
    }
    doc["inputs"] = rep.inputs;
    doc["results"] = rep.results;
    doc["checks"] = ordered_json::array();
    for (const auto& check : rep.checks) {
        ordered_json c;
        c["name"] = check.name;
        c["pass"] = check.pass;
        c["detail"] = check.detail;
        doc["checks"].push_back(c);
    }
    doc["pass"] = rep.pass();
    return doc.dump(2) + "\n";
}

std::string render_csv(const RunConfig& config, const Report& rep) {
    std::ostringstream out;
    out << "# gaussmax " << kVersion << " " << command_name(config.command);
    if (!config.no_timestamp) {
        out << " " << utc_timestamp();
    }
    out << "\n";
    for (size_t i = 0; i < rep.csv_header.size(); ++i) {
        out << (i ? "," : "") << rep.csv_header[i];
    }
    out << "\n";
    for (const auto& row : rep.csv_rows) {
        for (size_t i = 0; i < row.size(); ++i) {
            out << (i ? "," : "") << row[i];
        }
        out << "\n";
    }
    return out.str();
}

}  // namespace

int run(const RunConfig& config, std::ostream& out) {
    if (config.format != "json" && config.format != "csv") {
        throw std::invalid_argument("invalid --format '" + config.format +
                                    "'; expected json or csv");
    }
    Report rep;
    switch (config.command) {
        case RunConfig::Command::bound:
            rep = handle_bound(config);
            break;
        case RunConfig::Command::bracket:
            rep = handle_bracket(config);
            break;
        case RunConfig::Command::certify:
            rep = handle_certify(config);
            break;
        case RunConfig::Command::scan:
            rep = handle_scan(config);
            break;
        case RunConfig::Command::process_bound:
            rep = handle_process_bound(config);
            break;
        case RunConfig::Command::inequality_grid:
            rep = handle_inequality_grid(config);
            break;
    }
    const std::string text =
        config.format == "json" ? render_json(config, rep) : render_csv(config, rep);
    if (!config.out_path.empty()) {
        std::ofstream file(config.out_path);
        if (!file) {
            throw std::invalid_argument("cannot write output file: " + config.out_path);
        }
        file << text;
    } else {
        out << text;
    }
    return rep.pass() ? 0 : 1;
}

}  // namespace gaussmax
