#include "s2m/embedding.hpp"

#include <algorithm>

namespace s2m {

EmbeddedSeries embed(const TimeSeries& series, const EmbeddingConfig& config)
{
    const auto n = static_cast<std::ptrdiff_t>(series.size());
    const auto m = static_cast<std::ptrdiff_t>(config.dimension());
    const auto past = static_cast<std::ptrdiff_t>(config.past);

    EmbeddedSeries out{Eigen::MatrixXd(n, m), config};
    for (std::ptrdiff_t c = 0; c < m; ++c) {
        const std::ptrdiff_t offset = c - past;
        for (std::ptrdiff_t k = 0; k < n; ++k) {
            const std::ptrdiff_t src = std::clamp<std::ptrdiff_t>(k + offset, 0, n - 1);
            out.vectors(k, c) = series[static_cast<std::size_t>(src)];
        }
    }
    return out;
}

} // namespace s2m
