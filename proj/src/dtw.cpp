#include "s2m/dtw.hpp"

#include "s2m/error.hpp"

#include <algorithm>
#include <limits>
#include <vector>

namespace s2m {

Alignment dtw_align(std::span<const double> a, std::span<const double> b, const DtwConfig& config)
{
    const std::size_t na = a.size();
    const std::size_t nb = b.size();
    if (na == 0 || nb == 0) {
        throw InvalidInput("dtw requires two nonempty series");
    }
    const std::size_t gap = na > nb ? na - nb : nb - na;
    if (config.window && *config.window < gap) {
        throw InvalidInput("dtw window " + std::to_string(*config.window) +
                           " is smaller than the length difference " + std::to_string(gap));
    }

    constexpr double inf = std::numeric_limits<double>::infinity();
    // acc(i, j): cheapest cost of a path from (0, 0) to (i, j), row-major.
    std::vector<double> acc(na * nb, inf);
    const auto at = [&](std::size_t i, std::size_t j) -> double& { return acc[i * nb + j]; };

    for (std::size_t i = 0; i < na; ++i) {
        std::size_t j_lo = 0;
        std::size_t j_hi = nb;
        if (config.window) {
            j_lo = i > *config.window ? i - *config.window : 0;
            j_hi = std::min(nb, i + *config.window + 1);
        }
        for (std::size_t j = j_lo; j < j_hi; ++j) {
            const double cost = local_cost(a[i], b[j]);
            if (i == 0 && j == 0) {
                at(i, j) = cost;
                continue;
            }
            double best = inf;
            if (i > 0 && j > 0) {
                best = at(i - 1, j - 1);
            }
            if (i > 0) {
                best = std::min(best, at(i - 1, j));
            }
            if (j > 0) {
                best = std::min(best, at(i, j - 1));
            }
            at(i, j) = cost + best;
        }
    }

    Alignment out;
    out.total_cost = at(na - 1, nb - 1);
    std::size_t i = na - 1;
    std::size_t j = nb - 1;
    out.path.push_back({i, j});
    while (i > 0 || j > 0) {
        if (i == 0) {
            --j;
        } else if (j == 0) {
            --i;
        } else {
            const double diag = at(i - 1, j - 1);
            const double up = at(i - 1, j);
            const double left = at(i, j - 1);
            if (diag <= up && diag <= left) {
                --i;
                --j;
            } else if (up <= left) {
                --i;
            } else {
                --j;
            }
        }
        out.path.push_back({i, j});
    }
    std::reverse(out.path.begin(), out.path.end());
    return out;
}

double path_cost(const Alignment& alignment, std::span<const double> a, std::span<const double> b)
{
    double total = 0.0;
    for (const PathStep& step : alignment.path) {
        total += local_cost(a[step.a], b[step.b]);
    }
    return total;
}

} // namespace s2m
