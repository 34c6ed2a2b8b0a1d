#pragma once

#include <span>

#include "loadbayes/rng.hpp"

namespace loadbayes {

/// Normal prior in mean/precision form.
struct NormalPrior {
    double mu = 0.0;
    double tau = 1e-4;
};

/// Gamma prior in shape/rate form.
struct GammaPrior {
    double alpha = 0.01;
    double beta = 0.01;
};

/// One coefficient's linear view of a residual system: row t reads
/// target_t = coeff * feature_t + offset_t + noise, noise ~ N(0, 1/precision).
/// Every conditional coefficient update in this library is an instance of
/// this shape.
struct CoefficientView {
    std::span<const double> features;
    std::span<const double> offsets;
    std::span<const double> targets;
    double precision = 1.0;
};

struct NormalPosterior {
    double mu = 0.0;
    double tau = 0.0;
    double draw = 0.0;
};

struct GammaPosterior {
    double alpha = 0.0;
    double beta = 0.0;
    double draw = 0.0;
};

/// Closed-form conditional for the coefficient of a CoefficientView:
///   tau* = prior.tau + precision * sum(f^2)
///   mu*  = (prior.tau * prior.mu + precision * sum(f * (y - g))) / tau*
/// Returns the posterior and one draw from N(mu*, 1/tau*).
NormalPosterior conjugate_normal_update(const NormalPrior& prior,
                                        const CoefficientView& view,
                                        RngStream& rng);

/// Closed-form conditional for a noise precision given centered residuals:
///   alpha* = prior.alpha + n/2,  beta* = prior.beta + sum(r^2)/2.
GammaPosterior gamma_precision_update(const GammaPrior& prior,
                                      std::span<const double> residuals,
                                      RngStream& rng);

}  // namespace loadbayes
