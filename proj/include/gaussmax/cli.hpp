#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace gaussmax {

/// Parsed command-line request.  Numeric fields are validated against the
/// gates of the invoked operation before any computation runs.
struct RunConfig {
    enum class Command {
        bound,
        bracket,
        certify,
        scan,
        process_bound,
        inequality_grid,
    };

    Command command = Command::bound;

    std::string cov_path;      // covariance matrix file
    std::string target;        // synthetic target: identity:N | equicorr:N:RHO | ar1:N:RHO
    std::string process_path;  // process spec file
    std::string out_path;      // write the report here instead of the stream
    std::string format = "json";
    std::string ordering = "natural";  // natural | best-of:K

    long long n = 0;
    double alpha = 0.25;
    long long k = 1;
    std::uint64_t seed = 2024;
    long long reps = 100000;
    int threads = 1;

    bool use_eigen = false;
    std::optional<double> lambda_min;
    std::optional<double> lambda_max;
    std::vector<double> thresholds;  // certify: upper-bound grid
    std::vector<double> p_grid;      // bracket: probability grid
    std::vector<long long> scan_ns;
    std::vector<double> scan_alphas;
    std::optional<long long> k_sweep;  // process-bound: sweep k = 1..value
    std::optional<double> hi_a;
    std::optional<double> hi_b;

    bool strict = false;
    bool no_timestamp = false;
};

/// Executes the command and writes the report (json or csv) to `out`, or
/// to config.out_path when set.  Returns 0 when every requested check
/// passed, 1 otherwise.  Invalid inputs and gate violations throw
/// std::invalid_argument / gate_error; numeric failures throw
/// decomposition_error / numeric_error.  The caller maps these to exit
/// codes 2 and 3.
int run(const RunConfig& config, std::ostream& out);

}  // namespace gaussmax
