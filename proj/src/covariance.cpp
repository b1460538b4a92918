#include "gaussmax/covariance.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "gaussmax/errors.hpp"

namespace gaussmax {

namespace {

// Left-looking Cholesky of the permuted matrix with a relative pivot check.
// Returns the decomposition; throws decomposition_error on a failing pivot.
ConditionalDecomposition factorize(const Eigen::MatrixXd& m,
                                   const std::vector<int>& ordering) {
    const int n = static_cast<int>(m.rows());
    double max_diag = 0.0;
    for (int i = 0; i < n; ++i) {
        max_diag = std::max(max_diag, m(i, i));
    }
    const double pivot_tol = static_cast<double>(n) * 1e-12 * max_diag;

    ConditionalDecomposition d;
    d.ordering = ordering;
    d.lower_factor = Eigen::MatrixXd::Zero(n, n);
    d.residual_vars.resize(n);
    d.condmean_vars.resize(n);

    for (int j = 0; j < n; ++j) {
        const double cjj = m(ordering[j], ordering[j]);
        double pivot = cjj;
        for (int k = 0; k < j; ++k) {
            pivot -= d.lower_factor(j, k) * d.lower_factor(j, k);
        }
        if (!(pivot > pivot_tol)) {
            throw decomposition_error(
                "decompose: matrix is not positive definite, pivot " +
                    std::to_string(j) + " (variable " + std::to_string(ordering[j]) +
                    ") is below tolerance",
                j);
        }
        d.lower_factor(j, j) = std::sqrt(pivot);
        d.residual_vars[j] = pivot;
        d.condmean_vars[j] = std::max(0.0, cjj - pivot);
        for (int i = j + 1; i < n; ++i) {
            double s = m(ordering[i], ordering[j]);
            for (int k = 0; k < j; ++k) {
                s -= d.lower_factor(i, k) * d.lower_factor(j, k);
            }
            d.lower_factor(i, j) = s / d.lower_factor(j, j);
        }
    }
    return d;
}

void validate_ordering(const std::vector<int>& ordering, int n) {
    if (static_cast<int>(ordering.size()) != n) {
        throw std::invalid_argument("decompose: ordering size must equal dim");
    }
    std::vector<char> seen(n, 0);
    for (int idx : ordering) {
        if (idx < 0 || idx >= n || seen[idx]) {
            throw std::invalid_argument("decompose: ordering must be a permutation of 0..dim-1");
        }
        seen[idx] = 1;
    }
}

}  // namespace

CovarianceMatrix::CovarianceMatrix(Eigen::MatrixXd entries) : m_(std::move(entries)) {
    const int n = static_cast<int>(m_.rows());
    if (n < 1 || m_.cols() != m_.rows()) {
        throw std::invalid_argument("CovarianceMatrix: requires a square matrix of dim >= 1");
    }
    double max_abs = 0.0;
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            if (!std::isfinite(m_(i, j))) {
                throw std::invalid_argument("CovarianceMatrix: entries must be finite");
            }
            max_abs = std::max(max_abs, std::fabs(m_(i, j)));
        }
    }
    const double sym_tol = 1e-12 * std::max(max_abs, 1e-300);
    for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j) {
            if (std::fabs(m_(i, j) - m_(j, i)) > sym_tol) {
                throw std::invalid_argument(
                    "CovarianceMatrix: not symmetric at (" + std::to_string(i) + "," +
                    std::to_string(j) + ")");
            }
        }
    }
    factorize(m_, natural_ordering(n));  // rejects singular and indefinite inputs
}

CovarianceMatrix CovarianceMatrix::identity(int n) {
    return CovarianceMatrix(Eigen::MatrixXd::Identity(n, n));
}

CovarianceMatrix CovarianceMatrix::equicorrelated(int n, double rho) {
    Eigen::MatrixXd m = Eigen::MatrixXd::Constant(n, n, rho);
    m.diagonal().setConstant(1.0);
    return CovarianceMatrix(std::move(m));
}

CovarianceMatrix CovarianceMatrix::ar1_toeplitz(int n, double rho) {
    Eigen::MatrixXd m(n, n);
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            m(i, j) = std::pow(rho, std::abs(i - j));
        }
    }
    return CovarianceMatrix(std::move(m));
}

CovarianceMatrix read_covariance(std::istream& in) {
    std::vector<std::vector<double>> rows;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const auto hash = line.find('#');
        if (hash != std::string::npos) {
            line.erase(hash);
        }
        std::istringstream ls(line);
        std::vector<double> row;
        double value = 0.0;
        while (ls >> value) {
            row.push_back(value);
        }
        if (!ls.eof()) {
            throw std::invalid_argument("covariance input: bad token on line " +
                                        std::to_string(line_no));
        }
        if (!row.empty()) {
            rows.push_back(std::move(row));
        }
    }
    if (rows.empty()) {
        throw std::invalid_argument("covariance input: no rows");
    }
    const int n = static_cast<int>(rows.size());
    Eigen::MatrixXd m(n, n);
    for (int i = 0; i < n; ++i) {
        if (static_cast<int>(rows[i].size()) != n) {
            throw std::invalid_argument(
                "covariance input: row " + std::to_string(i + 1) + " has " +
                std::to_string(rows[i].size()) + " entries, expected " + std::to_string(n));
        }
        for (int j = 0; j < n; ++j) {
            m(i, j) = rows[i][j];
        }
    }
    return CovarianceMatrix(std::move(m));
}

CovarianceMatrix read_covariance_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw std::invalid_argument("cannot open covariance file: " + path);
    }
    return read_covariance(in);
}

std::vector<int> natural_ordering(int n) {
    std::vector<int> ordering(n);
    for (int i = 0; i < n; ++i) {
        ordering[i] = i;
    }
    return ordering;
}

double ConditionalDecomposition::min_residual_var() const {
    return *std::min_element(residual_vars.begin(), residual_vars.end());
}

double ConditionalDecomposition::max_condmean_var() const {
    return *std::max_element(condmean_vars.begin(), condmean_vars.end());
}

ConditionalDecomposition decompose(const CovarianceMatrix& c,
                                   const std::vector<int>& ordering) {
    validate_ordering(ordering, c.dim());
    return factorize(c.entries(), ordering);
}

ConditionalDecomposition decompose(const CovarianceMatrix& c) {
    return factorize(c.entries(), natural_ordering(c.dim()));
}

std::pair<double, double> sigma_tau(const CovarianceMatrix& c,
                                    const std::vector<int>& ordering) {
    const auto d = decompose(c, ordering);
    return {std::sqrt(d.min_residual_var()), std::sqrt(d.max_condmean_var())};
}

std::pair<double, double> sigma_tau(const CovarianceMatrix& c) {
    return sigma_tau(c, natural_ordering(c.dim()));
}

std::pair<double, double> eigen_bounds(const CovarianceMatrix& c) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(c.entries(),
                                                          Eigen::EigenvaluesOnly);
    if (solver.info() != Eigen::Success) {
        throw numeric_error("eigen_bounds: eigenvalue iteration failed to converge");
    }
    const auto& values = solver.eigenvalues();
    return {values(0), values(values.size() - 1)};
}

std::vector<double> precision_residuals(const CovarianceMatrix& c) {
    Eigen::LLT<Eigen::MatrixXd> llt(c.entries());
    if (llt.info() != Eigen::Success) {
        throw numeric_error("precision_residuals: factorization failed");
    }
    const Eigen::MatrixXd inv =
        llt.solve(Eigen::MatrixXd::Identity(c.dim(), c.dim()));
    std::vector<double> out(c.dim());
    for (int i = 0; i < c.dim(); ++i) {
        out[i] = 1.0 / inv(i, i);
    }
    return out;
}

}  // namespace gaussmax
