#include "loadbayes/conjugate.hpp"

#include <cmath>
#include <stdexcept>

namespace loadbayes {

NormalPosterior conjugate_normal_update(const NormalPrior& prior,
                                        const CoefficientView& view,
                                        RngStream& rng) {
    if (view.features.size() != view.offsets.size() ||
        view.features.size() != view.targets.size()) {
        throw std::invalid_argument("conjugate_normal_update: view arrays must match");
    }
    if (!(prior.tau > 0.0) || !(view.precision > 0.0)) {
        throw std::invalid_argument("conjugate_normal_update: precisions must be positive");
    }
    double sum_ff = 0.0;
    double sum_fr = 0.0;
    for (std::size_t t = 0; t < view.features.size(); ++t) {
        const double f = view.features[t];
        sum_ff += f * f;
        sum_fr += f * (view.targets[t] - view.offsets[t]);
    }
    if (!std::isfinite(sum_ff) || !std::isfinite(sum_fr)) {
        throw std::runtime_error("conjugate_normal_update: non-finite sums");
    }
    NormalPosterior post;
    post.tau = prior.tau + view.precision * sum_ff;
    post.mu = (prior.tau * prior.mu + view.precision * sum_fr) / post.tau;
    post.draw = rng.normal(post.mu, 1.0 / std::sqrt(post.tau));
    return post;
}

GammaPosterior gamma_precision_update(const GammaPrior& prior,
                                      std::span<const double> residuals,
                                      RngStream& rng) {
    if (!(prior.alpha > 0.0) || !(prior.beta > 0.0)) {
        throw std::invalid_argument("gamma_precision_update: prior must be positive");
    }
    double sum_rr = 0.0;
    for (const double r : residuals) {
        sum_rr += r * r;
    }
    if (!std::isfinite(sum_rr)) {
        throw std::runtime_error("gamma_precision_update: non-finite residuals");
    }
    GammaPosterior post;
    post.alpha = prior.alpha + 0.5 * static_cast<double>(residuals.size());
    post.beta = prior.beta + 0.5 * sum_rr;
    post.draw = rng.gamma(post.alpha, post.beta);
    return post;
}

}  // namespace loadbayes
