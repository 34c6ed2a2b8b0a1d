#pragma once

#include <cstdint>
#include <vector>

#include "loadbayes/chain.hpp"
#include "loadbayes/conjugate.hpp"
#include "loadbayes/induction_motor.hpp"
#include "loadbayes/rng.hpp"
#include "loadbayes/zip.hpp"

namespace loadbayes {

struct GibbsConfig {
    std::size_t n_iter = 10000;
    std::size_t burn_in = 2000;
    std::size_t thinning = 1;
    std::uint64_t seed = kDefaultSeed;

    void validate() const;
};

struct Zip2Priors {
    NormalPrior alpha1;
    NormalPrior alpha2;
    GammaPrior tau;
};

struct Zip3Priors {
    NormalPrior alpha1;
    NormalPrior alpha2;
    NormalPrior alpha3;
    GammaPrior tau;
};

struct ImPriors {
    NormalPrior beta1, beta2, beta3, alpha_b, alpha_c;
    GammaPrior tau_e, tau_omega, tau_i;
};

enum class MhProposalKind {
    random_walk,  // candidate = current + N(0, proposal_sigma^2)
    independent   // candidate ~ N(proposal_mu, proposal_sigma^2), fixed
};

/// Random-walk or fixed-proposal Metropolis sampler for the one-coefficient
/// model y = theta * x with known Gaussian noise. Acceptance uses the plain
/// posterior ratio in log space: accept when r > 1, otherwise when a
/// uniform draw falls below r.
struct MhConfig {
    std::size_t n_iter = 10000;
    std::size_t burn_in = 2000;
    std::size_t thinning = 1;
    std::uint64_t seed = kDefaultSeed;
    MhProposalKind proposal = MhProposalKind::random_walk;
    double proposal_mu = 1.0;
    double proposal_sigma = 0.5;
    double noise_sigma = 0.05;  // known measurement noise std of y
    NormalPrior prior{0.0, 1e-4};
    bool init_from_prior = true;
    double init_value = 0.1;

    void validate() const;
};

/// Log of the (unnormalized) posterior density the MH sampler targets.
double mh_log_posterior(const ZipSeries& data, const MhConfig& cfg, double theta);

Chain mh_single_param(const ZipSeries& data, const MhConfig& cfg);

/// Gibbs sampler for the normalized two-coefficient polynomial model
/// y ~ N(a1*x^2 + a2*x + 1 - a1 - a2, 1/tau). The chain reports columns
/// alpha1, alpha2, alpha3 (derived as 1 - a1 - a2) and tau.
Chain gibbs_zip2(const ZipSeries& data, const Zip2Priors& priors, const GibbsConfig& cfg);

/// Gibbs sampler for the unconstrained three-coefficient model
/// y ~ N(a1*x^2 + a2*x + a3, 1/tau). Columns: alpha1..alpha3, tau.
Chain gibbs_zip3(const ZipSeries& data, const Zip3Priors& priors, const GibbsConfig& cfg);

/// Gibbs sampler over the motor coefficients and the three noise
/// precisions. Columns: beta1, beta2, beta3, alpha_b, alpha_c, tau_e,
/// tau_omega, tau_i. The flux-pair and current-pair updates pool both of
/// their residual equations.
Chain gibbs_im(const ImRegressionData& data, const ImPriors& priors, const GibbsConfig& cfg);

/// Feature/offset/target triple for one conditional update; the Gibbs loops
/// are thin drivers over these builders.
struct ViewArrays {
    std::vector<double> features;
    std::vector<double> offsets;
    std::vector<double> targets;

    CoefficientView view(double precision) const {
        return {features, offsets, targets, precision};
    }
};

ViewArrays zip2_alpha1_view(const ZipSeries& data, double alpha2);
ViewArrays zip2_alpha2_view(const ZipSeries& data, double alpha1);
std::vector<double> zip2_residuals(const ZipSeries& data, double alpha1, double alpha2);

ViewArrays zip3_alpha1_view(const ZipSeries& data, double alpha2, double alpha3);
ViewArrays zip3_alpha2_view(const ZipSeries& data, double alpha1, double alpha3);
ViewArrays zip3_alpha3_view(const ZipSeries& data, double alpha1, double alpha2);
std::vector<double> zip3_residuals(const ZipSeries& data, double alpha1, double alpha2,
                                   double alpha3);

ViewArrays im_beta1_view(const ImRegressionData& data, double beta2);
ViewArrays im_beta2_view(const ImRegressionData& data, double beta1);
ViewArrays im_beta3_view(const ImRegressionData& data);
ViewArrays im_alpha_b_view(const ImRegressionData& data, double alpha_c);
ViewArrays im_alpha_c_view(const ImRegressionData& data, double alpha_b);
std::vector<double> im_flux_residuals(const ImRegressionData& data, double beta1,
                                      double beta2);
std::vector<double> im_speed_residuals(const ImRegressionData& data, double beta3);
std::vector<double> im_current_residuals(const ImRegressionData& data, double alpha_b,
                                         double alpha_c);

}  // namespace loadbayes
