#pragma once

#include <span>
#include <string>
#include <vector>

#include "loadbayes/chain.hpp"

namespace loadbayes {

struct ParameterSummary {
    std::string name;
    double mean = 0.0;
    double std_dev = 0.0;
    double median = 0.0;
    double q05 = 0.0;  // central 90% interval bounds
    double q95 = 0.0;
    double ess = 0.0;  // effective sample size estimate
};

struct PosteriorSummary {
    std::vector<ParameterSummary> params;

    const ParameterSummary& operator[](const std::string& name) const;
};

/// Moments, quantiles and an autocorrelation-based effective sample size per
/// parameter. Throws std::invalid_argument on an empty chain.
PosteriorSummary summarize(const Chain& chain);

/// Initial-positive-sequence estimator: autocorrelations are summed until
/// the first nonpositive consecutive pair.
double effective_sample_size(std::span<const double> draws);

struct ConvergenceReport {
    std::vector<std::string> names;
    std::vector<double> psrf;  // split-chain potential scale reduction
    double threshold = 1.05;
    bool pass = false;
};

/// Split-chain potential-scale-reduction check across at least two chains of
/// identical shape; passes when every parameter's statistic is below the
/// threshold.
ConvergenceReport convergence_check(const std::vector<Chain>& chains,
                                    double threshold = 1.05);

}  // namespace loadbayes
