#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "oracles.hpp"

#include "s2m/cca.hpp"
#include "s2m/embedding.hpp"
#include "s2m/error.hpp"

#include <cmath>
#include <random>

using namespace s2m;

namespace {

std::vector<double> gaussian(std::mt19937_64& rng, std::size_t n)
{
    std::normal_distribution<double> normal;
    std::vector<double> v(n);
    for (auto& x : v) x = normal(rng);
    return v;
}

std::vector<EmbeddedPair> one_pair(const TimeSeries& x, const TimeSeries& y, const EmbeddingConfig& cfg)
{
    return {EmbeddedPair{embed(x, cfg), embed(y, cfg)}};
}

std::vector<std::vector<double>> rows_of(const EmbeddedSeries& e)
{
    std::vector<std::vector<double>> out(e.rows());
    for (std::size_t r = 0; r < e.rows(); ++r) {
        for (Eigen::Index c = 0; c < e.vectors.cols(); ++c) out[r].push_back(e.vectors(static_cast<Eigen::Index>(r), c));
    }
    return out;
}

} // namespace

TEST_CASE("covariances of identical scalar series")
{
    const TimeSeries x{1, 4, 2, 8, 5};
    const auto covs = accumulate_covariances(one_pair(x, x, {0, 0}), 0.25);
    // mean 4, squared deviations 9 0 4 16 1 -> population variance 6
    CHECK(covs.xx(0, 0) == doctest::Approx(6.0));
    CHECK(covs.yy(0, 0) == doctest::Approx(6.0));
    CHECK(covs.xy(0, 0) == doctest::Approx(6.0));
    CHECK(covs.regularized_xx()(0, 0) == doctest::Approx(6.25));
    CHECK(covs.regularized_yy()(0, 0) == doctest::Approx(6.25));
    CHECK(covs.sample_count == 5);
}

TEST_CASE("constant series give only the ridge")
{
    const TimeSeries c(std::vector<double>(6, 3.0));
    const std::vector<EmbeddedPair> pairs{{embed(c, {1, 0}), embed(c, {1, 0})}, {embed(c, {1, 0}), embed(c, {1, 0})}};
    const auto covs = accumulate_covariances(pairs, 0.5);
    CHECK(covs.xx.norm() == 0.0);
    CHECK(covs.xy.norm() == 0.0);
    CHECK(covs.regularized_xx().isApprox(0.5 * Eigen::Matrix2d::Identity()));
    CHECK(accumulate_covariances(pairs).ridge == 0.0);
}

TEST_CASE("pooled covariances match a textbook computation")
{
    std::mt19937_64 rng(7);
    const EmbeddingConfig cfg{1, 0};
    const std::vector<EmbeddedPair> pairs{
        {embed(TimeSeries(gaussian(rng, 25)), cfg), embed(TimeSeries(gaussian(rng, 25)), cfg)},
        {embed(TimeSeries(gaussian(rng, 17)), cfg), embed(TimeSeries(gaussian(rng, 17)), cfg)}};
    std::vector<std::vector<double>> xs, ys;
    for (const auto& p : pairs) {
        for (const auto& r : rows_of(p.x)) xs.push_back(r);
        for (const auto& r : rows_of(p.y)) ys.push_back(r);
    }
    const auto covs = accumulate_covariances(pairs, 0.0);
    CHECK(covs.sample_count == 42);
    CHECK((covs.xx - oracle::covariance(xs, xs)).cwiseAbs().maxCoeff() < 1e-12);
    CHECK((covs.yy - oracle::covariance(ys, ys)).cwiseAbs().maxCoeff() < 1e-12);
    CHECK((covs.xy - oracle::covariance(xs, ys)).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("default ridge is relative to the mean auto-variance")
{
    std::mt19937_64 rng(8);
    const auto x = TimeSeries(gaussian(rng, 50));
    const auto y = TimeSeries(gaussian(rng, 50));
    const auto covs = accumulate_covariances(one_pair(x, y, {2, 0}));
    const double mean_diag = (covs.xx.trace() + covs.yy.trace()) / 6.0;
    CHECK(covs.ridge == doctest::Approx(1e-6 * mean_diag).epsilon(1e-12));
}

TEST_CASE("covariance input errors")
{
    const TimeSeries a{1, 2, 3, 4}, b{1, 2, 3};
    CHECK_THROWS_AS(accumulate_covariances(std::vector<EmbeddedPair>{}), InvalidInput);
    CHECK_THROWS_AS(accumulate_covariances(one_pair(a, b, {0, 0})), InvalidInput);
    CHECK_THROWS_AS(accumulate_covariances(one_pair(a, a, {0, 0}), -1.0), InvalidInput);
    CHECK_THROWS_AS(accumulate_covariances(one_pair(b, b, {2, 1})), InvalidInput);
    const std::vector<EmbeddedPair> mixed{{embed(a, {0, 0}), embed(a, {0, 0})}, {embed(a, {1, 0}), embed(a, {1, 0})}};
    CHECK_THROWS_AS(accumulate_covariances(mixed), InvalidInput);
}

TEST_CASE("perfectly correlated scalars")
{
    const TimeSeries x{1, 4, 2, 8, 5};
    const auto covs = accumulate_covariances(one_pair(x, x, {0, 0}), 0.0);
    const LatentMap map = fit_cca(covs);
    CHECK(map.rho == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(map.w_x(0) == doctest::Approx(1.0 / std::sqrt(6.0)));
    CHECK(map.w_y(0) == doctest::Approx(1.0 / std::sqrt(6.0)));
    CHECK(stationarity_residual(covs, map) < 1e-6);
}

TEST_CASE("identical nondegenerate X and Y give rho one")
{
    std::mt19937_64 rng(9);
    const TimeSeries x(gaussian(rng, 200));
    const auto covs = accumulate_covariances(one_pair(x, x, {2, 2}), 0.0);
    const LatentMap map = fit_cca(covs);
    CHECK(std::abs(map.rho - 1.0) < 1e-8);
    CHECK(stationarity_residual(covs, map) < 1e-6);
}

TEST_CASE("independent series are nearly uncorrelated")
{
    std::mt19937_64 rng(10);
    const auto xv = gaussian(rng, 10000);
    const auto yv = gaussian(rng, 10000);
    const auto covs = accumulate_covariances(one_pair(TimeSeries(xv), TimeSeries(yv), {0, 0}), 0.0);
    const LatentMap map = fit_cca(covs);
    CHECK(map.rho < 0.1);
    CHECK(map.rho == doctest::Approx(std::abs(oracle::correlation(xv, yv))).epsilon(1e-9));
    CHECK(stationarity_residual(covs, map) < 1e-6);
}

TEST_CASE("two-dimensional fits agree with a direction grid search")
{
    std::mt19937_64 rng(11);
    std::normal_distribution<double> normal;
    for (int t = 0; t < 5; ++t) {
        const std::size_t n = 40;
        const EmbeddingConfig cfg{0, 1};
        EmbeddedPair p{{Eigen::MatrixXd(n, 2), cfg}, {Eigen::MatrixXd(n, 2), cfg}};
        for (std::size_t r = 0; r < n; ++r) {
            const double s = normal(rng);
            p.x.vectors(r, 0) = s + normal(rng);
            p.x.vectors(r, 1) = normal(rng);
            p.y.vectors(r, 0) = normal(rng);
            p.y.vectors(r, 1) = -s + 0.5 * normal(rng);
        }
        const std::vector<EmbeddedPair> pairs{p};
        const auto covs = accumulate_covariances(pairs, 1e-6);
        const LatentMap map = fit_cca(covs);
        const double grid = oracle::cca_grid_2d(covs.regularized_xx(), covs.regularized_yy(), covs.xy, 1e-3);
        CHECK(std::abs(map.rho - grid) < 1e-3);
        CHECK(map.rho >= grid - 1e-12);
        CHECK(stationarity_residual(covs, map) < 1e-6);
    }
}

TEST_CASE("normalization, sign convention and objective")
{
    std::mt19937_64 rng(12);
    auto xv = gaussian(rng, 300);
    auto yv = gaussian(rng, 300);
    for (std::size_t k = 1; k < xv.size(); ++k) yv[k] += 0.8 * xv[k - 1];
    const auto covs = accumulate_covariances(one_pair(TimeSeries(xv), TimeSeries(yv), {2, 1}));
    const LatentMap map = fit_cca(covs);
    CHECK(map.w_x.dot(covs.regularized_xx() * map.w_x) == doctest::Approx(1.0).epsilon(1e-10));
    CHECK(map.w_y.dot(covs.regularized_yy() * map.w_y) == doctest::Approx(1.0).epsilon(1e-10));
    CHECK(map.w_x(0) > 0.0);
    CHECK(map.rho > 0.5);
    CHECK(map.rho <= 1.0);
    CHECK(cca_objective(covs, map.w_x, map.w_y) == doctest::Approx(map.rho).epsilon(1e-10));
    CHECK(cca_objective(covs, -map.w_x, -map.w_y) == doctest::Approx(map.rho).epsilon(1e-10));
    CHECK(map.embedding == EmbeddingConfig{2, 1});
    CHECK(map.ridge == covs.ridge);
    CHECK(stationarity_residual(covs, map) < 1e-6);
}

TEST_CASE("scaling X leaves rho and the latent series unchanged")
{
    std::mt19937_64 rng(13);
    auto xv = gaussian(rng, 120);
    auto yv = gaussian(rng, 120);
    for (std::size_t k = 0; k < xv.size(); ++k) yv[k] += xv[k];
    const EmbeddingConfig cfg{1, 1};
    const TimeSeries x(xv), y(yv);
    for (double c : {0.01, 3.0, 250.0}) {
        std::vector<double> scaled = xv;
        for (auto& v : scaled) v *= c;
        const TimeSeries xc(scaled);
        const LatentMap m1 = fit_cca(accumulate_covariances(one_pair(x, y, cfg), 0.0));
        const LatentMap m2 = fit_cca(accumulate_covariances(one_pair(xc, y, cfg), 0.0));
        CHECK(std::abs(m1.rho - m2.rho) < 1e-8);
        CHECK((m2.w_x * c - m1.w_x).norm() < 1e-6 * m1.w_x.norm());
        const TimeSeries l1 = project(embed(x, cfg), m1.w_x);
        const TimeSeries l2 = project(embed(xc, cfg), m2.w_x);
        for (std::size_t k = 0; k < l1.size(); ++k) CHECK(std::abs(l1[k] - l2[k]) < 1e-6);
    }
}

TEST_CASE("singular covariances raise a numerical error")
{
    const TimeSeries c(std::vector<double>(10, 1.0));
    const TimeSeries x{1, 2, 3, 1, 2, 3, 1, 2, 3, 0};
    CHECK_THROWS_AS(fit_cca(accumulate_covariances(one_pair(c, x, {0, 0}), 0.0)), NumericalError);
    CHECK_THROWS_AS(fit_cca(accumulate_covariances(one_pair(x, c, {0, 0}), 0.0)), NumericalError);
    CHECK_NOTHROW(fit_cca(accumulate_covariances(one_pair(c, x, {0, 0}), 1e-3)));
}
