#pragma once

// Independent reference implementations used only by tests: a brute-force
// grid integrator for posterior densities, a Gauss-Seidel admittance-matrix
// power flow, and a small dense least-squares solver. None of them share
// code with the library paths they check.

#include <functional>
#include <span>
#include <vector>

#include "loadbayes/conjugate.hpp"
#include "loadbayes/feeder.hpp"

namespace loadbayes::oracles {

struct GridMoments {
    double mean = 0.0;
    double variance = 0.0;
};

/// Mean and variance of exp(log_density) integrated on a uniform grid of
/// `points` nodes over [lo, hi].
GridMoments grid_moments(const std::function<double(double)>& log_density, double lo,
                         double hi, int points = 2001);

/// Brute-force posterior for one linear coefficient, evaluated from the
/// likelihood product and the prior density directly.
GridMoments grid_normal_posterior(const NormalPrior& prior, const CoefficientView& view,
                                  double lo, double hi, int points = 2001);

/// Brute-force posterior for a noise precision with centered residuals.
GridMoments grid_gamma_posterior(const GammaPrior& prior, std::span<const double> residuals,
                                 double lo, double hi, int points = 2001);

/// Gauss-Seidel iteration on the full admittance matrix; returns per-bus
/// voltage magnitudes. Throws std::runtime_error when it fails to converge.
std::vector<double> ybus_voltages(const FeederTopology& topo,
                                  const std::vector<double>& multipliers,
                                  const std::vector<ZipAttachment>& attachments,
                                  double slack_v, double tol = 1e-12,
                                  int max_iter = 200000);

/// Ordinary least squares through dense normal equations (k parameters,
/// k <= 6): rows of `features` are per-sample regressors.
std::vector<double> least_squares(const std::vector<std::vector<double>>& features,
                                  const std::vector<double>& targets);

}  // namespace loadbayes::oracles
