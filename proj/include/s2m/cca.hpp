#pragma once

#include "s2m/core.hpp"
#include "s2m/embedding.hpp"

#include <Eigen/Core>

#include <cstddef>
#include <optional>
#include <span>

namespace s2m {

/// Relative ridge used when none is given: this factor times the mean
/// diagonal of the unregularized auto-covariances.
inline constexpr double kDefaultRelativeRidge = 1e-6;

/// Pooled, mean-centered covariances of paired embedded samples.
///
/// `xx` and `yy` are the raw auto-covariances; the ridge is kept separately
/// and applied by `regularized_xx()` / `regularized_yy()`.
struct CovarianceSet {
    Eigen::MatrixXd xx;
    Eigen::MatrixXd yy;
    Eigen::MatrixXd xy;
    double ridge = 0.0;
    std::size_t sample_count = 0;
    EmbeddingConfig embedding;

    Eigen::MatrixXd regularized_xx() const;
    Eigen::MatrixXd regularized_yy() const;
};

struct EmbeddedPair {
    EmbeddedSeries x;
    EmbeddedSeries y;
};

/// Pools covariances over all rows of all pairs, centered by the pooled mean
/// and normalized by the total row count. Pairs are reduced in index order.
/// Without an explicit ridge, kDefaultRelativeRidge is applied.
CovarianceSet accumulate_covariances(std::span<const EmbeddedPair> pairs,
                                     std::optional<double> ridge = std::nullopt);

/// First canonical pair: projections for X and Y whose latent series are
/// maximally correlated.
struct LatentMap {
    Eigen::VectorXd w_x;
    Eigen::VectorXd w_y;
    double rho = 0.0;
    EmbeddingConfig embedding;
    double ridge = 0.0;
};

/// Solves the regularized CCA problem for the top canonical pair.
///
/// Both regularized auto-covariances are Cholesky-factored; the whitened
/// cross-covariance K = Lx^-1 Rxy Ly^-T is embedded in the symmetric matrix
/// [[0, K], [K^T, 0]] whose largest eigenvalue is rho. The returned vectors
/// have unit variance under the regularized metrics, rho >= 0, and the first
/// nonzero component of w_x is positive.
///
/// Throws NumericalError when a regularized covariance is not positive definite.
LatentMap fit_cca(const CovarianceSet& covs);

/// output[k] = row k of `embedded` dotted with `w`.
TimeSeries project(const EmbeddedSeries& embedded, const Eigen::VectorXd& w);

/// Normwise relative residual of the two generalized eigen equations
///   Rxy w_y = rho Cxx w_x  and  Rxy^T w_x = rho Cyy w_y,
/// with C the regularized auto-covariances. Returns the larger of the two.
double stationarity_residual(const CovarianceSet& covs, const LatentMap& map);

/// Value of the CCA objective for arbitrary projections under the
/// regularized metrics.
double cca_objective(const CovarianceSet& covs, const Eigen::VectorXd& w_x,
                     const Eigen::VectorXd& w_y);

} // namespace s2m
