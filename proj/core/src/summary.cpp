#include "loadbayes/summary.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace loadbayes {

namespace {

double mean_of(std::span<const double> v) {
    double sum = 0.0;
    for (const double x : v) {
        sum += x;
    }
    return sum / static_cast<double>(v.size());
}

double variance_of(std::span<const double> v, double mean) {
    if (v.size() < 2) {
        return 0.0;
    }
    double ss = 0.0;
    for (const double x : v) {
        ss += (x - mean) * (x - mean);
    }
    return ss / static_cast<double>(v.size() - 1);
}

double quantile_sorted(const std::vector<double>& sorted, double q) {
    if (sorted.size() == 1) {
        return sorted.front();
    }
    const double pos = q * static_cast<double>(sorted.size() - 1);
    const std::size_t lo = static_cast<std::size_t>(pos);
    const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
    const double frac = pos - static_cast<double>(lo);
    return sorted[lo] + frac * (sorted[hi] - sorted[lo]);
}

}  // namespace

const ParameterSummary& PosteriorSummary::operator[](const std::string& name) const {
    for (const auto& p : params) {
        if (p.name == name) {
            return p;
        }
    }
    throw std::out_of_range("PosteriorSummary: no parameter named " + name);
}

double effective_sample_size(std::span<const double> draws) {
    const std::size_t n = draws.size();
    if (n < 4) {
        return static_cast<double>(n);
    }
    const double mean = mean_of(draws);
    double c0 = 0.0;
    for (const double x : draws) {
        c0 += (x - mean) * (x - mean);
    }
    c0 /= static_cast<double>(n);
    if (c0 == 0.0) {
        return static_cast<double>(n);
    }

    auto autocov = [&](std::size_t lag) {
        double sum = 0.0;
        for (std::size_t i = 0; i + lag < n; ++i) {
            sum += (draws[i] - mean) * (draws[i + lag] - mean);
        }
        return sum / static_cast<double>(n);
    };

    double rho_sum = 0.0;
    for (std::size_t lag = 1; lag + 1 < n; lag += 2) {
        const double pair = (autocov(lag) + autocov(lag + 1)) / c0;
        if (pair <= 0.0) {
            break;
        }
        rho_sum += pair;
    }
    const double ess = static_cast<double>(n) / (1.0 + 2.0 * rho_sum);
    return std::clamp(ess, 1.0, static_cast<double>(n));
}

PosteriorSummary summarize(const Chain& chain) {
    if (chain.n_kept == 0 || chain.names.empty()) {
        throw std::invalid_argument("summarize: empty chain");
    }
    PosteriorSummary summary;
    summary.params.reserve(chain.names.size());
    for (std::size_t c = 0; c < chain.names.size(); ++c) {
        const std::vector<double> draws = chain.column(c);
        ParameterSummary p;
        p.name = chain.names[c];
        p.mean = mean_of(draws);
        p.std_dev = std::sqrt(variance_of(draws, p.mean));
        p.ess = effective_sample_size(draws);
        std::vector<double> sorted = draws;
        std::sort(sorted.begin(), sorted.end());
        p.median = quantile_sorted(sorted, 0.5);
        p.q05 = quantile_sorted(sorted, 0.05);
        p.q95 = quantile_sorted(sorted, 0.95);
        summary.params.push_back(std::move(p));
    }
    return summary;
}

ConvergenceReport convergence_check(const std::vector<Chain>& chains, double threshold) {
    if (chains.size() < 2) {
        throw std::invalid_argument("convergence_check: need at least two chains");
    }
    const Chain& first = chains.front();
    for (const Chain& chain : chains) {
        if (chain.names != first.names || chain.n_kept != first.n_kept) {
            throw std::invalid_argument("convergence_check: chains have mismatched shapes");
        }
    }
    if (first.n_kept < 4) {
        throw std::invalid_argument("convergence_check: chains too short");
    }

    ConvergenceReport report;
    report.names = first.names;
    report.threshold = threshold;
    report.pass = true;

    const std::size_t half = first.n_kept / 2;
    for (std::size_t c = 0; c < first.names.size(); ++c) {
        // Split every chain in two to detect trends within a chain as well.
        std::vector<std::vector<double>> pieces;
        for (const Chain& chain : chains) {
            const std::vector<double> draws = chain.column(c);
            pieces.emplace_back(draws.begin(), draws.begin() + static_cast<long>(half));
            pieces.emplace_back(draws.begin() + static_cast<long>(half),
                                draws.begin() + static_cast<long>(2 * half));
        }
        const double m = static_cast<double>(pieces.size());
        const double len = static_cast<double>(half);

        std::vector<double> means;
        double w = 0.0;
        for (const auto& piece : pieces) {
            const double mu = mean_of(piece);
            means.push_back(mu);
            w += variance_of(piece, mu);
        }
        w /= m;
        const double grand = mean_of(means);
        double b = 0.0;
        for (const double mu : means) {
            b += (mu - grand) * (mu - grand);
        }
        b *= len / (m - 1.0);

        double rhat = 1.0;
        if (w > 0.0) {
            const double var_plus = (len - 1.0) / len * w + b / len;
            rhat = std::sqrt(var_plus / w);
        } else if (b > 0.0) {
            rhat = std::numeric_limits<double>::infinity();
        }
        report.psrf.push_back(rhat);
        if (!(rhat < threshold)) {
            report.pass = false;
        }
    }
    return report;
}

}  // namespace loadbayes
