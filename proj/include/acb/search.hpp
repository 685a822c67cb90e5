#pragma once

#include <cstdint>
#include <functional>
#include <limits>
#include <vector>

namespace acb::search {

struct PatternSearchOptions {
    int restarts{16};
    int evaluations_per_restart{400};
    double initial_step{0.25};  // fraction of each bound width
    double min_step{1e-3};
    std::uint64_t seed{1};
    // Stop everything once an objective value at or below this is found.
    double target{-std::numeric_limits<double>::infinity()};
};

struct SearchResult {
    std::vector<double> x;
    double value{std::numeric_limits<double>::infinity()};
    int evaluations{0};
    int restart{-1};  // restart that produced the best point
};

using Objective = std::function<double(const std::vector<double>&)>;

/// Seeded multi-start compass search within box bounds. The first restart
/// starts at the box centre (or `start` if given), later ones at uniform
/// random points.
SearchResult pattern_search(const Objective& f, const std::vector<double>& lo, const std::vector<double>& hi,
                            const PatternSearchOptions& options = {}, const std::vector<double>& start = {});

}  // namespace acb::search
