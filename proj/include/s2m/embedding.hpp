#pragma once

#include "s2m/core.hpp"

#include <Eigen/Core>

#include <cstddef>

namespace s2m {

struct EmbeddingConfig {
    std::size_t past = 0;
    std::size_t future = 0;

    std::size_t dimension() const noexcept { return past + future + 1; }

    friend bool operator==(const EmbeddingConfig&, const EmbeddingConfig&) = default;
};

/// Row k holds series[k - past .. k + future].
struct EmbeddedSeries {
    Eigen::MatrixXd vectors;
    EmbeddingConfig config;

    std::size_t rows() const noexcept { return static_cast<std::size_t>(vectors.rows()); }
};

/// Time-delay embedding with edge replication at both boundaries.
EmbeddedSeries embed(const TimeSeries& series, const EmbeddingConfig& config);

} // namespace s2m
