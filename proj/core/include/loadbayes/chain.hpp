#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

namespace loadbayes {

/// Ordered posterior draws for a named parameter vector, after burn-in and
/// thinning. Draws are stored row-major: draw r of parameter c sits at
/// r * names.size() + c.
struct Chain {
    std::vector<std::string> names;
    std::vector<double> draws;
    std::size_t n_kept = 0;
    std::size_t burn_in = 0;
    std::size_t thinning = 1;
    std::uint64_t seed = 0;
    double acceptance_rate = -1.0;  // fraction of accepted proposals; -1 for Gibbs
    std::vector<std::string> warnings;

    double at(std::size_t row, std::size_t col) const;
    std::vector<double> column(std::size_t col) const;
    std::size_t column_index(const std::string& name) const;
    std::vector<double> column(const std::string& name) const;
    double mean(const std::string& name) const;
    bool has_warning(const std::string& tag) const;
};

}  // namespace loadbayes
