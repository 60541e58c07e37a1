#include "s2m/cca.hpp"

#include "s2m/error.hpp"

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <string>

namespace s2m {

Eigen::MatrixXd CovarianceSet::regularized_xx() const
{
    Eigen::MatrixXd out = xx;
    out.diagonal().array() += ridge;
    return out;
}

Eigen::MatrixXd CovarianceSet::regularized_yy() const
{
    Eigen::MatrixXd out = yy;
    out.diagonal().array() += ridge;
    return out;
}

CovarianceSet accumulate_covariances(std::span<const EmbeddedPair> pairs, std::optional<double> ridge)
{
    if (pairs.empty()) {
        throw InvalidInput("covariance estimation needs at least one series pair");
    }
    if (ridge && (!(*ridge >= 0.0) || !std::isfinite(*ridge))) {
        throw InvalidInput("ridge must be a nonnegative finite number");
    }
    const EmbeddingConfig config = pairs.front().x.config;
    const auto dim = static_cast<Eigen::Index>(config.dimension());

    std::size_t total = 0;
    for (std::size_t p = 0; p < pairs.size(); ++p) {
        const auto& [x, y] = pairs[p];
        if (x.config != config || y.config != config) {
            throw InvalidInput("pair " + std::to_string(p) + " uses a different embedding");
        }
        if (x.rows() != y.rows()) {
            throw InvalidInput("pair " + std::to_string(p) + " has series of different lengths (" +
                               std::to_string(x.rows()) + " vs " + std::to_string(y.rows()) + ")");
        }
        if (x.vectors.cols() != dim || y.vectors.cols() != dim) {
            throw InvalidInput("pair " + std::to_string(p) + " has inconsistent embedding width");
        }
        total += x.rows();
    }
    if (total < config.dimension()) {
        throw InvalidInput("need at least " + std::to_string(config.dimension()) +
                           " embedded samples, got " + std::to_string(total));
    }

    Eigen::RowVectorXd mean_x = Eigen::RowVectorXd::Zero(dim);
    Eigen::RowVectorXd mean_y = Eigen::RowVectorXd::Zero(dim);
    for (const auto& [x, y] : pairs) {
        mean_x += x.vectors.colwise().sum();
        mean_y += y.vectors.colwise().sum();
    }
    const double n = static_cast<double>(total);
    mean_x /= n;
    mean_y /= n;

    CovarianceSet out;
    out.xx = Eigen::MatrixXd::Zero(dim, dim);
    out.yy = Eigen::MatrixXd::Zero(dim, dim);
    out.xy = Eigen::MatrixXd::Zero(dim, dim);
    for (const auto& [x, y] : pairs) {
        const Eigen::MatrixXd xc = x.vectors.rowwise() - mean_x;
        const Eigen::MatrixXd yc = y.vectors.rowwise() - mean_y;
        out.xx.noalias() += xc.transpose() * xc;
        out.yy.noalias() += yc.transpose() * yc;
        out.xy.noalias() += xc.transpose() * yc;
    }
    out.xx /= n;
    out.yy /= n;
    out.xy /= n;
    // Products are symmetric only up to rounding.
    out.xx = 0.5 * (out.xx + out.xx.transpose()).eval();
    out.yy = 0.5 * (out.yy + out.yy.transpose()).eval();

    out.ridge = ridge ? *ridge
                      : kDefaultRelativeRidge * (out.xx.trace() + out.yy.trace()) /
                            (2.0 * static_cast<double>(dim));
    out.sample_count = total;
    out.embedding = config;
    return out;
}

namespace {

Eigen::LLT<Eigen::MatrixXd> factor(const Eigen::MatrixXd& cov, const char* name)
{
    Eigen::LLT<Eigen::MatrixXd> llt(cov);
    if (llt.info() != Eigen::Success) {
        throw NumericalError(std::string("regularized ") + name +
                             " covariance is not positive definite; increase the ridge");
    }
    const auto diag = llt.matrixLLT().diagonal().cwiseAbs();
    const double lo = diag.minCoeff();
    const double hi = diag.maxCoeff();
    if (!(lo > 0.0) || lo * lo <= 1e-14 * hi * hi) {
        throw NumericalError(std::string("regularized ") + name +
                             " covariance is numerically singular; increase the ridge");
    }
    return llt;
}

Eigen::VectorXd unit_or_basis(const Eigen::VectorXd& v)
{
    const double norm = v.norm();
    if (norm > 0.0 && std::isfinite(norm)) {
        return v / norm;
    }
    Eigen::VectorXd e = Eigen::VectorXd::Zero(v.size());
    e(0) = 1.0;
    return e;
}

} // namespace

LatentMap fit_cca(const CovarianceSet& covs)
{
    const Eigen::Index dim = covs.xx.rows();
    if (dim == 0 || covs.yy.rows() != dim || covs.xy.rows() != dim || covs.xy.cols() != dim) {
        throw InvalidInput("covariance set has inconsistent dimensions");
    }
    const auto llt_x = factor(covs.regularized_xx(), "X");
    const auto llt_y = factor(covs.regularized_yy(), "Y");

    // K = Lx^-1 Rxy Ly^-T
    const Eigen::MatrixXd left = llt_x.matrixL().solve(covs.xy);
    const Eigen::MatrixXd whitened = llt_y.matrixL().solve(left.transpose()).transpose();

    Eigen::MatrixXd augmented = Eigen::MatrixXd::Zero(2 * dim, 2 * dim);
    augmented.topRightCorner(dim, dim) = whitened;
    augmented.bottomLeftCorner(dim, dim) = whitened.transpose();

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(augmented);
    if (solver.info() != Eigen::Success) {
        throw NumericalError("symmetric eigensolver did not converge");
    }
    const Eigen::Index top = 2 * dim - 1;
    const Eigen::VectorXd vec = solver.eigenvectors().col(top);
    const Eigen::VectorXd u = unit_or_basis(vec.head(dim));
    const Eigen::VectorXd v = unit_or_basis(vec.tail(dim));

    LatentMap out;
    out.w_x = llt_x.matrixU().solve(u);
    out.w_y = llt_y.matrixU().solve(v);
    out.rho = std::clamp(solver.eigenvalues()(top), 0.0, 1.0);
    out.embedding = covs.embedding;
    out.ridge = covs.ridge;

    const double scale = out.w_x.cwiseAbs().maxCoeff();
    for (Eigen::Index k = 0; k < dim; ++k) {
        if (std::abs(out.w_x(k)) > 1e-12 * scale) {
            if (out.w_x(k) < 0.0) {
                out.w_x = -out.w_x;
                out.w_y = -out.w_y;
            }
            break;
        }
    }
    return out;
}

TimeSeries project(const EmbeddedSeries& embedded, const Eigen::VectorXd& w)
{
    if (static_cast<std::size_t>(w.size()) != embedded.config.dimension() ||
        w.size() != embedded.vectors.cols()) {
        throw InvalidInput("projection has dimension " + std::to_string(w.size()) +
                           " but the embedding has " + std::to_string(embedded.vectors.cols()));
    }
    const Eigen::VectorXd latent = embedded.vectors * w;
    return TimeSeries(std::vector<double>(latent.data(), latent.data() + latent.size()));
}

double stationarity_residual(const CovarianceSet& covs, const LatentMap& map)
{
    const Eigen::MatrixXd cxx = covs.regularized_xx();
    const Eigen::MatrixXd cyy = covs.regularized_yy();
    const auto relative = [](const Eigen::VectorXd& lhs, const Eigen::VectorXd& rhs, double scale) {
        const double diff = (lhs - rhs).norm();
        return scale > 0.0 ? diff / scale : diff;
    };
    const double norm_xy = covs.xy.norm();
    const double r1 = relative(covs.xy * map.w_y, map.rho * (cxx * map.w_x),
                               norm_xy * map.w_y.norm() + map.rho * cxx.norm() * map.w_x.norm());
    const double r2 = relative(covs.xy.transpose() * map.w_x, map.rho * (cyy * map.w_y),
                               norm_xy * map.w_x.norm() + map.rho * cyy.norm() * map.w_y.norm());
    return std::max(r1, r2);
}

double cca_objective(const CovarianceSet& covs, const Eigen::VectorXd& w_x, const Eigen::VectorXd& w_y)
{
    const double num = w_x.dot(covs.xy * w_y);
    const double vx = w_x.dot(covs.regularized_xx() * w_x);
    const double vy = w_y.dot(covs.regularized_yy() * w_y);
    return num / std::sqrt(vx * vy);
}

} // namespace s2m
