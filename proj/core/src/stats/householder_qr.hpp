#pragma once

#include <cmath>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "botsim/errors.hpp"

namespace botsim::stats::detail {

/// Column-major Householder QR of an n x p matrix (n > p), no pivoting.
/// Columns are processed left to right so that the first dependent column
/// can be reported by index.
class HouseholderQr {
public:
    HouseholderQr(std::vector<double> a, std::size_t rows, std::size_t cols, const std::vector<std::string>& names)
        : a_(std::move(a)), n_(rows), p_(cols), tau_(cols, 0.0) {
        for (std::size_t j = 0; j < p_; ++j) {
            double original = 0.0;
            for (std::size_t i = 0; i < n_; ++i) original += at(i, j) * at(i, j);
            original = std::sqrt(original);
            // Apply earlier reflectors to column j (already done in place by
            // the update below), then measure what is left below the diagonal.
            double norm = 0.0;
            for (std::size_t i = j; i < n_; ++i) norm += at(i, j) * at(i, j);
            norm = std::sqrt(norm);
            if (original == 0.0 || norm <= 1e-10 * original) {
                const std::string label = j < names.size() ? names[j] : "column " + std::to_string(j);
                throw SingularityError(j, "design matrix is rank deficient: '" + label +
                                              "' is a linear combination of earlier columns");
            }
            const double alpha = at(j, j) > 0 ? -norm : norm;
            const double v0 = at(j, j) - alpha;
            // v = (v0, a[j+1..n, j]); normalize so v(0) = 1.
            for (std::size_t i = j + 1; i < n_; ++i) at(i, j) /= v0;
            tau_[j] = -v0 / alpha;
            at(j, j) = alpha;
            for (std::size_t k = j + 1; k < p_; ++k) {
                double dot = at(j, k);
                for (std::size_t i = j + 1; i < n_; ++i) dot += at(i, j) * at(i, k);
                dot *= tau_[j];
                at(j, k) -= dot;
                for (std::size_t i = j + 1; i < n_; ++i) at(i, k) -= dot * at(i, j);
            }
        }
    }

    /// Q^T y.
    std::vector<double> apply_qt(std::span<const double> y) const {
        std::vector<double> out(y.begin(), y.end());
        for (std::size_t j = 0; j < p_; ++j) {
            double dot = out[j];
            for (std::size_t i = j + 1; i < n_; ++i) dot += at(i, j) * out[i];
            dot *= tau_[j];
            out[j] -= dot;
            for (std::size_t i = j + 1; i < n_; ++i) out[i] -= dot * at(i, j);
        }
        return out;
    }

    /// Solves R x = (Q^T y)[0..p).
    std::vector<double> solve_r(std::span<const double> qty) const {
        std::vector<double> x(p_);
        for (std::size_t jj = p_; jj-- > 0;) {
            double s = qty[jj];
            for (std::size_t k = jj + 1; k < p_; ++k) s -= r(jj, k) * x[k];
            x[jj] = s / r(jj, jj);
        }
        return x;
    }

    /// Diagonal of (R^T R)^{-1} = row norms of R^{-1}.
    std::vector<double> inverse_gram_diagonal() const {
        // Columns of R^{-1} by back substitution on unit vectors.
        std::vector<double> rinv(p_ * p_, 0.0);
        for (std::size_t c = 0; c < p_; ++c) {
            for (std::size_t jj = c + 1; jj-- > 0;) {
                double s = jj == c ? 1.0 : 0.0;
                for (std::size_t k = jj + 1; k <= c; ++k) s -= r(jj, k) * rinv[k * p_ + c];
                rinv[jj * p_ + c] = s / r(jj, jj);
            }
        }
        std::vector<double> diag(p_, 0.0);
        for (std::size_t i = 0; i < p_; ++i)
            for (std::size_t c = 0; c < p_; ++c) diag[i] += rinv[i * p_ + c] * rinv[i * p_ + c];
        return diag;
    }

    double r(std::size_t i, std::size_t j) const { return a_[j * n_ + i]; }

private:
    double& at(std::size_t i, std::size_t j) { return a_[j * n_ + i]; }
    double at(std::size_t i, std::size_t j) const { return a_[j * n_ + i]; }

    std::vector<double> a_;
    std::size_t n_;
    std::size_t p_;
    std::vector<double> tau_;
};

}  // namespace botsim::stats::detail
