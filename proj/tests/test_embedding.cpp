#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "s2m/cca.hpp"
#include "s2m/embedding.hpp"

#include <random>

using namespace s2m;

namespace {

std::vector<std::vector<double>> rows_of(const EmbeddedSeries& e)
{
    std::vector<std::vector<double>> out(e.rows());
    for (std::size_t r = 0; r < e.rows(); ++r) {
        for (Eigen::Index c = 0; c < e.vectors.cols(); ++c) {
            out[r].push_back(e.vectors(static_cast<Eigen::Index>(r), c));
        }
    }
    return out;
}

} // namespace

TEST_CASE("identity embedding")
{
    const auto e = embed(TimeSeries{1, 2, 3}, {0, 0});
    CHECK(e.config.dimension() == 1);
    CHECK(rows_of(e) == std::vector<std::vector<double>>{{1}, {2}, {3}});
}

TEST_CASE("edges replicate")
{
    CHECK(rows_of(embed(TimeSeries{1, 2, 3}, {1, 1})) ==
          std::vector<std::vector<double>>{{1, 1, 2}, {1, 2, 3}, {2, 3, 3}});
    CHECK(rows_of(embed(TimeSeries{4}, {2, 1})) == std::vector<std::vector<double>>{{4, 4, 4, 4}});
}

TEST_CASE("asymmetric windows put past samples first")
{
    CHECK(rows_of(embed(TimeSeries{1, 2, 3, 4}, {2, 0})) ==
          std::vector<std::vector<double>>{{1, 1, 1}, {1, 1, 2}, {1, 2, 3}, {2, 3, 4}});
    CHECK(rows_of(embed(TimeSeries{1, 2, 3}, {0, 2})) ==
          std::vector<std::vector<double>>{{1, 2, 3}, {2, 3, 3}, {3, 3, 3}});
}

TEST_CASE("constant series embeds to identical rows")
{
    const auto rows = rows_of(embed(TimeSeries(std::vector<double>(9, 2.5)), {3, 2}));
    for (const auto& r : rows) CHECK(r == rows.front());
}

TEST_CASE("projection")
{
    const TimeSeries s{3, -1, 4, 1, -5, 9};
    const auto e = embed(s, {1, 1});
    SUBCASE("center coordinate recovers the series")
    {
        CHECK(project(e, Eigen::Vector3d(0, 1, 0)) == s);
    }
    SUBCASE("zero weights give zeros")
    {
        CHECK(project(e, Eigen::Vector3d::Zero()) == TimeSeries(std::vector<double>(6, 0.0)));
    }
    SUBCASE("random weights match a per-row dot product")
    {
        std::mt19937_64 rng(5);
        std::normal_distribution<double> normal;
        for (int t = 0; t < 20; ++t) {
            const Eigen::Vector3d w(normal(rng), normal(rng), normal(rng));
            const TimeSeries out = project(e, w);
            for (std::size_t k = 0; k < s.size(); ++k) {
                const double prev = s[k == 0 ? 0 : k - 1];
                const double next = s[std::min(k + 1, s.size() - 1)];
                CHECK(out[k] == doctest::Approx(w[0] * prev + w[1] * s[k] + w[2] * next).epsilon(1e-14));
            }
        }
    }
    SUBCASE("dimension mismatch is rejected")
    {
        CHECK_THROWS(project(e, Eigen::Vector2d(1, 1)));
    }
}
