#include "loadbayes/chain.hpp"

#include <algorithm>
#include <stdexcept>

namespace loadbayes {

double Chain::at(std::size_t row, std::size_t col) const {
    return draws[row * names.size() + col];
}

std::vector<double> Chain::column(std::size_t col) const {
    std::vector<double> out(n_kept);
    for (std::size_t r = 0; r < n_kept; ++r) {
        out[r] = at(r, col);
    }
    return out;
}

std::size_t Chain::column_index(const std::string& name) const {
    const auto it = std::find(names.begin(), names.end(), name);
    if (it == names.end()) {
        throw std::out_of_range("Chain: no parameter named " + name);
    }
    return static_cast<std::size_t>(it - names.begin());
}

std::vector<double> Chain::column(const std::string& name) const {
    return column(column_index(name));
}

double Chain::mean(const std::string& name) const {
    const std::size_t col = column_index(name);
    double sum = 0.0;
    for (std::size_t r = 0; r < n_kept; ++r) {
        sum += at(r, col);
    }
    return n_kept == 0 ? 0.0 : sum / static_cast<double>(n_kept);
}

bool Chain::has_warning(const std::string& tag) const {
    for (const auto& w : warnings) {
        if (w.rfind(tag, 0) == 0) {
            return true;
        }
    }
    return false;
}

}  // namespace loadbayes
