#include "gaussmax/process.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "gaussmax/errors.hpp"

namespace gaussmax {

namespace {

constexpr int kMaxWindowDim = 1024;
constexpr long long kMaxWindowSpan = 4'000'000;  // n * k cap
constexpr int kMaxPsiTerms = 1'000'000;

// gamma(lag) = sigma^2 sum_j psi_j psi_{j+lag} with psi_0 = 1.
double autocovariance(const WoldModel& m, long long lag) {
    const long long K = static_cast<long long>(m.psi.size());
    if (lag > K) {
        return 0.0;
    }
    double s = lag == 0 ? 1.0 : m.psi[lag - 1];
    for (long long j = 1; j + lag <= K; ++j) {
        s += m.psi[j - 1] * m.psi[j + lag - 1];
    }
    return m.innovation_sd * m.innovation_sd * s;
}

std::string trim(const std::string& s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string::npos) {
        return "";
    }
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

double parse_double(const std::string& text, const std::string& key) {
    std::istringstream ss(text);
    double value = 0.0;
    if (!(ss >> value) || !(ss >> std::ws).eof()) {
        throw std::invalid_argument("process spec: bad value for " + key);
    }
    return value;
}

}  // namespace

double WoldModel::process_variance() const {
    double s = 1.0;
    for (double p : psi) {
        s += p * p;
    }
    return innovation_sd * innovation_sd * s;
}

WoldModel ar1_model(double rho, double tail_tol) {
    if (!(std::fabs(rho) < 1.0)) {
        throw std::invalid_argument("ar1_model: requires |rho| < 1");
    }
    if (!(tail_tol > 0.0)) {
        throw std::invalid_argument("ar1_model: requires tail_tol > 0");
    }
    WoldModel m;
    m.innovation_sd = std::sqrt(1.0 - rho * rho);
    const double r2 = rho * rho;
    double discarded = r2;  // rho^{2(K+1)} at K = 0
    int K = 0;
    while (discarded > tail_tol) {
        ++K;
        discarded *= r2;
        if (K > kMaxPsiTerms) {
            throw std::invalid_argument(
                "ar1_model: tail_tol unreachable within the coefficient cap");
        }
    }
    m.psi.resize(K);
    double c = 1.0;
    for (int j = 0; j < K; ++j) {
        c *= rho;
        m.psi[j] = c;
    }
    m.truncation_tail = discarded;
    return m;
}

WoldModel wold_from_psi(const std::vector<double>& psi) {
    double s = 1.0;
    for (double p : psi) {
        if (!std::isfinite(p)) {
            throw std::invalid_argument("wold_from_psi: coefficients must be finite");
        }
        s += p * p;
    }
    WoldModel m;
    m.psi = psi;
    m.innovation_sd = 1.0 / std::sqrt(s);
    m.truncation_tail = 0.0;
    return m;
}

double subsample_residual_variance(const WoldModel& m, long long k) {
    if (k < 1) {
        throw std::invalid_argument("subsample_residual_variance: requires k >= 1");
    }
    double s = 1.0;
    const long long terms = std::min<long long>(k - 1, m.psi.size());
    for (long long j = 0; j < terms; ++j) {
        s += m.psi[j] * m.psi[j];
    }
    return m.innovation_sd * m.innovation_sd * s;
}

CovarianceMatrix window_covariance(const WoldModel& m, int n, long long k) {
    if (n < 1 || k < 1) {
        throw std::invalid_argument("window_covariance: requires n >= 1 and k >= 1");
    }
    if (n > kMaxWindowDim || static_cast<long long>(n) * k > kMaxWindowSpan) {
        throw resource_error("window_covariance: window size exceeds the configured cap");
    }
    std::vector<double> gamma(n);
    for (int h = 0; h < n; ++h) {
        gamma[h] = autocovariance(m, static_cast<long long>(h) * k);
    }
    Eigen::MatrixXd cov(n, n);
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            cov(i, j) = gamma[std::abs(i - j)];
        }
    }
    return CovarianceMatrix(std::move(cov));
}

long long largest_usable_k(long long n, double alpha) {
    if (n < 1) {
        throw std::invalid_argument("largest_usable_k: requires n >= 1");
    }
    const long long n_min = smallest_valid_n(alpha);
    if (n_min == 0 || n < n_min) {
        return 0;
    }
    return n / n_min;
}

LowerBoundCertificate stationary_lower_bound(const WoldModel& m, long long n,
                                             long long k, double alpha) {
    if (n < 1 || k < 1) {
        throw std::invalid_argument("stationary_lower_bound: requires n >= 1 and k >= 1");
    }
    if (!(alpha > 0.0 && alpha < 0.5)) {
        throw std::invalid_argument("stationary_lower_bound: requires alpha in (0, 1/2)");
    }
    const long long subcount = n / k;
    const long long n_min = smallest_valid_n(alpha);
    if (subcount == 0 || n_min == 0 || subcount < n_min) {
        const long long k_max = largest_usable_k(n, alpha);
        std::string msg =
            "stationary_lower_bound: subsampled count floor(n/k) = " +
            std::to_string(subcount) + " fails the N + L_alpha >= 6 gate";
        if (k_max >= 1) {
            msg += "; largest usable k at this n is " + std::to_string(k_max);
        } else {
            msg += "; no usable k at this n (requires n >= " +
                   (n_min > 0 ? std::to_string(n_min) : std::string("beyond range")) + ")";
        }
        throw gate_error(msg);
    }
    const double sigma_sq = subsample_residual_variance(m, k);
    const double tau_sq = std::max(0.0, 1.0 - sigma_sq);
    return lower_bound_certificate(subcount, alpha, std::sqrt(sigma_sq),
                                   std::sqrt(tau_sq));
}

WoldModel read_process_spec(std::istream& in) {
    std::string kind;
    bool have_rho = false;
    double rho = 0.0;
    double tail_tol = 1e-12;
    bool have_psi = false;
    std::vector<double> psi;

    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const auto hash = line.find('#');
        if (hash != std::string::npos) {
            line.erase(hash);
        }
        line = trim(line);
        if (line.empty()) {
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            throw std::invalid_argument("process spec: expected key=value on line " +
                                        std::to_string(line_no));
        }
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key == "kind") {
            kind = value;
        } else if (key == "rho") {
            rho = parse_double(value, key);
            have_rho = true;
        } else if (key == "tail_tol") {
            tail_tol = parse_double(value, key);
        } else if (key == "psi") {
            psi.clear();
            std::istringstream ss(value);
            std::string item;
            while (std::getline(ss, item, ',')) {
                psi.push_back(parse_double(trim(item), key));
            }
            have_psi = true;
        } else {
            throw std::invalid_argument("process spec: unknown key '" + key + "'");
        }
    }
    if (kind == "ar1") {
        if (!have_rho) {
            throw std::invalid_argument("process spec: kind=ar1 requires rho");
        }
        return ar1_model(rho, tail_tol);
    }
    if (kind == "psi-list") {
        if (!have_psi) {
            throw std::invalid_argument("process spec: kind=psi-list requires psi");
        }
        return wold_from_psi(psi);
    }
    throw std::invalid_argument("process spec: kind must be ar1 or psi-list");
}

WoldModel read_process_spec_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw std::invalid_argument("cannot open process spec file: " + path);
    }
    return read_process_spec(in);
}

}  // namespace gaussmax
