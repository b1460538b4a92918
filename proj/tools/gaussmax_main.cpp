#include <exception>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "gaussmax/cli.hpp"
#include "gaussmax/errors.hpp"
#include "gaussmax/version.hpp"

namespace {

void add_matrix_options(CLI::App* cmd, gaussmax::RunConfig& config) {
    cmd->add_option("--cov", config.cov_path,
                    "whitespace covariance matrix file ('#' comments)");
    cmd->add_option("--target", config.target,
                    "synthetic covariance: identity:N, equicorr:N:RHO or ar1:N:RHO");
}

void add_output_options(CLI::App* cmd, gaussmax::RunConfig& config) {
    cmd->add_option("--format", config.format, "report format: json or csv")
        ->default_val("json");
    cmd->add_option("--out", config.out_path, "write the report to this file");
    cmd->add_flag("--no-timestamp", config.no_timestamp,
                  "omit the timestamp from the report");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"bounds and simulation checks for the maximum of correlated normals"};
    app.set_version_flag("--version", std::string(gaussmax::kVersion));
    app.require_subcommand(1);

    gaussmax::RunConfig config;

    auto* bound = app.add_subcommand(
        "bound", "lower-bound certificate for the maximum");
    bound->add_option("--n", config.n, "number of variables");
    bound->add_option("--alpha", config.alpha, "certificate level in (0, 1/2)")
        ->default_val(0.25);
    add_matrix_options(bound, config);
    bound->add_option("--ordering", config.ordering,
                      "natural or best-of:K (seeded random orderings)")
        ->default_val("natural");
    bound->add_flag("--eigen", config.use_eigen,
                    "use eigenvalue bounds instead of the sequential decomposition");
    bound->add_option("--lambda-min", config.lambda_min,
                      "smallest eigenvalue (with --lambda-max and --n)");
    bound->add_option("--lambda-max", config.lambda_max, "largest eigenvalue");
    bound->add_option("--seed", config.seed, "seed for best-of orderings")
        ->default_val(2024);
    add_output_options(bound, config);

    auto* bracket = app.add_subcommand(
        "bracket", "independent-case brackets for the squared maximum");
    bracket->add_option("--n", config.n, "number of variables")->required();
    bracket->add_option("--p", config.p_grid,
                        "probability grid (default 0.05..0.95 step 0.05)");
    bracket->add_flag("--strict", config.strict,
                      "fail when the explicit-regime condition does not hold");
    add_output_options(bracket, config);

    auto* certify = app.add_subcommand(
        "certify", "Monte Carlo check of the certificates against sampled maxima");
    add_matrix_options(certify, config);
    certify->add_option("--process", config.process_path,
                        "stationary process spec file (key=value lines)");
    certify->add_option("--n", config.n, "window length for --process");
    certify->add_option("--k", config.k, "subsample spacing for --process")
        ->default_val(1);
    certify->add_option("--alpha", config.alpha, "certificate level")
        ->default_val(0.25);
    certify->add_option("--ordering", config.ordering, "natural or best-of:K")
        ->default_val("natural");
    certify->add_option("--thresholds", config.thresholds,
                        "union-bound thresholds (default 2 2.5 3)");
    certify->add_option("--hi-a", config.hi_a,
                        "joint-tail factorization check: threshold a > 0");
    certify->add_option("--hi-b", config.hi_b,
                        "joint-tail factorization check: threshold b <= 0");
    certify->add_option("--seed", config.seed, "simulation seed")->default_val(2024);
    certify->add_option("--reps", config.reps, "replications")->default_val(100000);
    certify->add_option("--threads", config.threads, "worker threads")
        ->default_val(1);
    add_output_options(certify, config);

    auto* scan = app.add_subcommand(
        "scan", "certificate thresholds over a grid of n or alpha");
    scan->add_option("--ns", config.scan_ns, "grid of variable counts");
    scan->add_option("--alphas", config.scan_alphas, "grid of levels");
    scan->add_option("--n", config.n, "number of variables (with --alphas)");
    scan->add_option("--alpha", config.alpha, "level (with --ns)")
        ->default_val(0.25);
    add_matrix_options(scan, config);
    scan->add_flag("--eigen", config.use_eigen, "use eigenvalue bounds");
    scan->add_option("--lambda-min", config.lambda_min, "smallest eigenvalue");
    scan->add_option("--lambda-max", config.lambda_max, "largest eigenvalue");
    scan->add_flag("--strict", config.strict, "fail when any grid point hits the gate");
    scan->add_option("--seed", config.seed, "seed for best-of orderings")
        ->default_val(2024);
    scan->add_option("--ordering", config.ordering, "natural or best-of:K")
        ->default_val("natural");
    add_output_options(scan, config);

    auto* process_bound = app.add_subcommand(
        "process-bound", "stationary-process certificate via subsampling");
    process_bound->add_option("--process", config.process_path, "process spec file")
        ->required();
    process_bound->add_option("--n", config.n, "window length")->required();
    process_bound->add_option("--k", config.k, "subsample spacing")->default_val(1);
    process_bound->add_option("--k-sweep", config.k_sweep,
                              "sweep k = 1..K and report the best spacing");
    process_bound->add_option("--alpha", config.alpha, "certificate level")
        ->default_val(0.25);
    add_output_options(process_bound, config);

    auto* grid = app.add_subcommand(
        "inequality-grid", "dense self-checks of the tail-inversion inequalities");
    add_output_options(grid, config);

    CLI11_PARSE(app, argc, argv);

    if (bound->parsed()) {
        config.command = gaussmax::RunConfig::Command::bound;
    } else if (bracket->parsed()) {
        config.command = gaussmax::RunConfig::Command::bracket;
    } else if (certify->parsed()) {
        config.command = gaussmax::RunConfig::Command::certify;
    } else if (scan->parsed()) {
        config.command = gaussmax::RunConfig::Command::scan;
    } else if (process_bound->parsed()) {
        config.command = gaussmax::RunConfig::Command::process_bound;
    } else if (grid->parsed()) {
        config.command = gaussmax::RunConfig::Command::inequality_grid;
    }

    try {
        return gaussmax::run(config, std::cout);
    } catch (const gaussmax::gate_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const gaussmax::decomposition_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const gaussmax::numeric_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const gaussmax::resource_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    }
}
