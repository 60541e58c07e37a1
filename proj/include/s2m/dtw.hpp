#pragma once

#include "s2m/core.hpp"

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

namespace s2m {

struct DtwConfig {
    // Sakoe-Chiba half-width: only cells with |i - j| <= window are reachable.
    std::optional<std::size_t> window;
};

inline double local_cost(double u, double v) noexcept
{
    const double d = u - v;
    return d * d;
}

/// Unconstrained (or banded) DTW with steps (1,0), (0,1), (1,1) and squared
/// local cost. Backtracking prefers the diagonal, then (1,0), then (0,1).
Alignment dtw_align(std::span<const double> a, std::span<const double> b,
                    const DtwConfig& config = {});

inline Alignment dtw_align(const std::vector<double>& a, const std::vector<double>& b,
                           const DtwConfig& config = {})
{
    return dtw_align(std::span<const double>(a), std::span<const double>(b), config);
}

inline Alignment dtw_align(const TimeSeries& a, const TimeSeries& b, const DtwConfig& config = {})
{
    return dtw_align(a.values(), b.values(), config);
}

/// Sum of local costs along the stored path.
double path_cost(const Alignment& alignment, std::span<const double> a, std::span<const double> b);

} // namespace s2m
