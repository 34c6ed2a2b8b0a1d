#include "loadbayes/samplers.hpp"

#include <cmath>
#include <stdexcept>

namespace loadbayes {

namespace {

double sample_variance(const std::vector<double>& v) {
    if (v.size() < 2) {
        return 0.0;
    }
    double mean = 0.0;
    for (const double x : v) {
        mean += x;
    }
    mean /= static_cast<double>(v.size());
    double ss = 0.0;
    for (const double x : v) {
        ss += (x - mean) * (x - mean);
    }
    return ss / static_cast<double>(v.size() - 1);
}

void check_series(const ZipSeries& data, std::size_t min_n, const char* who) {
    if (data.x.size() != data.y.size()) {
        throw std::invalid_argument(std::string(who) + ": x and y length mismatch");
    }
    if (data.size() < min_n) {
        throw std::invalid_argument(std::string(who) + ": too few samples");
    }
}

struct ChainRecorder {
    Chain chain;
    std::size_t iter = 0;
    GibbsConfig cfg;

    ChainRecorder(std::vector<std::string> names, const GibbsConfig& config) {
        cfg = config;
        chain.names = std::move(names);
        chain.burn_in = cfg.burn_in;
        chain.thinning = cfg.thinning;
        chain.seed = cfg.seed;
        const std::size_t kept = (cfg.n_iter - cfg.burn_in) / cfg.thinning;
        chain.draws.reserve(kept * chain.names.size());
    }

    void record(std::initializer_list<double> values) {
        ++iter;
        if (iter <= cfg.burn_in || (iter - cfg.burn_in) % cfg.thinning != 0) {
            return;
        }
        for (const double v : values) {
            if (!std::isfinite(v)) {
                throw std::runtime_error("sampler produced a non-finite draw");
            }
            chain.draws.push_back(v);
        }
        ++chain.n_kept;
    }
};

}  // namespace

void GibbsConfig::validate() const {
    if (n_iter == 0) {
        throw std::invalid_argument("GibbsConfig: n_iter must be at least 1");
    }
    if (burn_in >= n_iter) {
        throw std::invalid_argument("GibbsConfig: burn_in must be below n_iter");
    }
    if (thinning == 0) {
        throw std::invalid_argument("GibbsConfig: thinning must be at least 1");
    }
}

void MhConfig::validate() const {
    if (n_iter == 0) {
        throw std::invalid_argument("MhConfig: n_iter must be at least 1");
    }
    if (burn_in >= n_iter) {
        throw std::invalid_argument("MhConfig: burn_in must be below n_iter");
    }
    if (thinning == 0) {
        throw std::invalid_argument("MhConfig: thinning must be at least 1");
    }
    if (proposal_sigma < 0.0 || !(noise_sigma > 0.0)) {
        throw std::invalid_argument("MhConfig: bad proposal_sigma or noise_sigma");
    }
    if (!(prior.tau > 0.0)) {
        throw std::invalid_argument("MhConfig: prior precision must be positive");
    }
}

// ---------------------------------------------------------------------------
// View builders
// ---------------------------------------------------------------------------

ViewArrays zip2_alpha1_view(const ZipSeries& data, double alpha2) {
    ViewArrays v;
    const std::size_t n = data.size();
    v.features.resize(n);
    v.offsets.resize(n);
    v.targets = data.y;
    for (std::size_t i = 0; i < n; ++i) {
        const double x = data.x[i];
        v.features[i] = x * x - 1.0;
        v.offsets[i] = alpha2 * (x - 1.0) + 1.0;
    }
    return v;
}

ViewArrays zip2_alpha2_view(const ZipSeries& data, double alpha1) {
    ViewArrays v;
    const std::size_t n = data.size();
    v.features.resize(n);
    v.offsets.resize(n);
    v.targets = data.y;
    for (std::size_t i = 0; i < n; ++i) {
        const double x = data.x[i];
        v.features[i] = x - 1.0;
        v.offsets[i] = alpha1 * (x * x - 1.0) + 1.0;
    }
    return v;
}

std::vector<double> zip2_residuals(const ZipSeries& data, double alpha1, double alpha2) {
    std::vector<double> r(data.size());
    for (std::size_t i = 0; i < data.size(); ++i) {
        const double x = data.x[i];
        r[i] = data.y[i] - (alpha1 * x * x + alpha2 * x + 1.0 - alpha1 - alpha2);
    }
    return r;
}

ViewArrays zip3_alpha1_view(const ZipSeries& data, double alpha2, double alpha3) {
    ViewArrays v;
    const std::size_t n = data.size();
    v.features.resize(n);
    v.offsets.resize(n);
    v.targets = data.y;
    for (std::size_t i = 0; i < n; ++i) {
        const double x = data.x[i];
        v.features[i] = x * x;
        v.offsets[i] = alpha2 * x + alpha3;
    }
    return v;
}

ViewArrays zip3_alpha2_view(const ZipSeries& data, double alpha1, double alpha3) {
    ViewArrays v;
    const std::size_t n = data.size();
    v.features.resize(n);
    v.offsets.resize(n);
    v.targets = data.y;
    for (std::size_t i = 0; i < n; ++i) {
        const double x = data.x[i];
        v.features[i] = x;
        v.offsets[i] = alpha1 * x * x + alpha3;
    }
    return v;
}

ViewArrays zip3_alpha3_view(const ZipSeries& data, double alpha1, double alpha2) {
    ViewArrays v;
    const std::size_t n = data.size();
    v.features.assign(n, 1.0);
    v.offsets.resize(n);
    v.targets = data.y;
    for (std::size_t i = 0; i < n; ++i) {
        const double x = data.x[i];
        v.offsets[i] = alpha1 * x * x + alpha2 * x;
    }
    return v;
}

std::vector<double> zip3_residuals(const ZipSeries& data, double alpha1, double alpha2,
                                   double alpha3) {
    std::vector<double> r(data.size());
    for (std::size_t i = 0; i < data.size(); ++i) {
        const double x = data.x[i];
        r[i] = data.y[i] - (alpha1 * x * x + alpha2 * x + alpha3);
    }
    return r;
}

ViewArrays im_beta1_view(const ImRegressionData& data, double beta2) {
    const std::size_t n = data.size();
    ViewArrays v;
    v.features.resize(2 * n);
    v.offsets.resize(2 * n);
    v.targets.resize(2 * n);
    for (std::size_t t = 0; t < n; ++t) {
        const double slip = data.omega[t] - 1.0;
        v.features[t] = data.ed[t];
        v.offsets[t] = beta2 * data.iq[t] - slip * data.eq[t];
        v.targets[t] = data.y_ed[t];
        v.features[n + t] = data.eq[t];
        v.offsets[n + t] = -beta2 * data.id[t] + slip * data.ed[t];
        v.targets[n + t] = data.y_eq[t];
    }
    return v;
}

ViewArrays im_beta2_view(const ImRegressionData& data, double beta1) {
    const std::size_t n = data.size();
    ViewArrays v;
    v.features.resize(2 * n);
    v.offsets.resize(2 * n);
    v.targets.resize(2 * n);
    for (std::size_t t = 0; t < n; ++t) {
        const double slip = data.omega[t] - 1.0;
        v.features[t] = data.iq[t];
        v.offsets[t] = beta1 * data.ed[t] - slip * data.eq[t];
        v.targets[t] = data.y_ed[t];
        v.features[n + t] = -data.id[t];
        v.offsets[n + t] = beta1 * data.eq[t] + slip * data.ed[t];
        v.targets[n + t] = data.y_eq[t];
    }
    return v;
}

ViewArrays im_beta3_view(const ImRegressionData& data) {
    const std::size_t n = data.size();
    ViewArrays v;
    v.features.resize(n);
    v.offsets.assign(n, 0.0);
    v.targets = data.y_omega;
    for (std::size_t t = 0; t < n; ++t) {
        const double w = data.omega[t];
        v.features[t] = w * w * data.t0 - data.ed[t] * data.id[t] - data.eq[t] * data.iq[t];
    }
    return v;
}

ViewArrays im_alpha_b_view(const ImRegressionData& data, double alpha_c) {
    const std::size_t n = data.size();
    ViewArrays v;
    v.features.resize(2 * n);
    v.offsets.resize(2 * n);
    v.targets.resize(2 * n);
    for (std::size_t t = 0; t < n; ++t) {
        const double dd = data.ud[t] - data.ed[t];
        const double dq = data.uq[t] - data.eq[t];
        v.features[t] = dd;
        v.offsets[t] = alpha_c * dq;
        v.targets[t] = data.y_id[t];
        v.features[n + t] = dq;
        v.offsets[n + t] = -alpha_c * dd;
        v.targets[n + t] = data.y_iq[t];
    }
    return v;
}

ViewArrays im_alpha_c_view(const ImRegressionData& data, double alpha_b) {
    const std::size_t n = data.size();
    ViewArrays v;
    v.features.resize(2 * n);
    v.offsets.resize(2 * n);
    v.targets.resize(2 * n);
    for (std::size_t t = 0; t < n; ++t) {
        const double dd = data.ud[t] - data.ed[t];
        const double dq = data.uq[t] - data.eq[t];
        v.features[t] = dq;
        v.offsets[t] = alpha_b * dd;
        v.targets[t] = data.y_id[t];
        v.features[n + t] = -dd;
        v.offsets[n + t] = alpha_b * dq;
        v.targets[n + t] = data.y_iq[t];
    }
    return v;
}

std::vector<double> im_flux_residuals(const ImRegressionData& data, double beta1,
                                      double beta2) {
    const std::size_t n = data.size();
    std::vector<double> r(2 * n);
    for (std::size_t t = 0; t < n; ++t) {
        const double slip = data.omega[t] - 1.0;
        r[t] = data.y_ed[t] - (beta1 * data.ed[t] + beta2 * data.iq[t] - slip * data.eq[t]);
        r[n + t] =
            data.y_eq[t] - (beta1 * data.eq[t] - beta2 * data.id[t] + slip * data.ed[t]);
    }
    return r;
}

std::vector<double> im_speed_residuals(const ImRegressionData& data, double beta3) {
    const std::size_t n = data.size();
    std::vector<double> r(n);
    for (std::size_t t = 0; t < n; ++t) {
        const double w = data.omega[t];
        const double f = w * w * data.t0 - data.ed[t] * data.id[t] - data.eq[t] * data.iq[t];
        r[t] = data.y_omega[t] - beta3 * f;
    }
    return r;
}

std::vector<double> im_current_residuals(const ImRegressionData& data, double alpha_b,
                                         double alpha_c) {
    const std::size_t n = data.size();
    std::vector<double> r(2 * n);
    for (std::size_t t = 0; t < n; ++t) {
        const double dd = data.ud[t] - data.ed[t];
        const double dq = data.uq[t] - data.eq[t];
        r[t] = data.y_id[t] - (alpha_b * dd + alpha_c * dq);
        r[n + t] = data.y_iq[t] - (alpha_b * dq - alpha_c * dd);
    }
    return r;
}

// ---------------------------------------------------------------------------
// Metropolis-Hastings
// ---------------------------------------------------------------------------

namespace {

struct MhSuffStats {
    double sxx = 0.0;
    double sxy = 0.0;
    double syy = 0.0;
    std::size_t n = 0;
};

MhSuffStats mh_suff_stats(const ZipSeries& data) {
    MhSuffStats s;
    s.n = data.size();
    for (std::size_t i = 0; i < data.size(); ++i) {
        s.sxx += data.x[i] * data.x[i];
        s.sxy += data.x[i] * data.y[i];
        s.syy += data.y[i] * data.y[i];
    }
    return s;
}

double mh_log_posterior_impl(const MhSuffStats& s, const MhConfig& cfg, double theta) {
    const double tau_noise = 1.0 / (cfg.noise_sigma * cfg.noise_sigma);
    const double log_lik =
        -0.5 * tau_noise * (s.syy - 2.0 * theta * s.sxy + theta * theta * s.sxx);
    const double d = theta - cfg.prior.mu;
    const double log_prior = -0.5 * cfg.prior.tau * d * d;
    return log_lik + log_prior;
}

}  // namespace

double mh_log_posterior(const ZipSeries& data, const MhConfig& cfg, double theta) {
    cfg.validate();
    check_series(data, 1, "mh_log_posterior");
    return mh_log_posterior_impl(mh_suff_stats(data), cfg, theta);
}

Chain mh_single_param(const ZipSeries& data, const MhConfig& cfg) {
    cfg.validate();
    check_series(data, 1, "mh_single_param");
    const MhSuffStats stats = mh_suff_stats(data);

    RngStream rng(cfg.seed);
    GibbsConfig rec_cfg;
    rec_cfg.n_iter = cfg.n_iter;
    rec_cfg.burn_in = cfg.burn_in;
    rec_cfg.thinning = cfg.thinning;
    rec_cfg.seed = cfg.seed;
    ChainRecorder rec({"alpha2"}, rec_cfg);

    double theta = cfg.init_from_prior
                       ? rng.normal(cfg.prior.mu, 1.0 / std::sqrt(cfg.prior.tau))
                       : cfg.init_value;
    double log_post = mh_log_posterior_impl(stats, cfg, theta);
    std::size_t accepted = 0;

    for (std::size_t i = 0; i < cfg.n_iter; ++i) {
        const double cand = cfg.proposal == MhProposalKind::random_walk
                                ? theta + rng.normal(0.0, cfg.proposal_sigma)
                                : rng.normal(cfg.proposal_mu, cfg.proposal_sigma);
        const double cand_log_post = mh_log_posterior_impl(stats, cfg, cand);
        const double log_r = cand_log_post - log_post;
        bool accept = log_r > 0.0;
        if (!accept) {
            const double u = rng.uniform01();
            accept = u > 0.0 && std::log(u) < log_r;
        }
        if (accept) {
            theta = cand;
            log_post = cand_log_post;
            ++accepted;
        }
        rec.record({theta});
    }
    rec.chain.acceptance_rate =
        static_cast<double>(accepted) / static_cast<double>(cfg.n_iter);
    if (sample_variance(data.x) < 1e-14 && data.size() > 1) {
        rec.chain.warnings.push_back("non_identifiable: constant regressor");
    }
    return rec.chain;
}

// ---------------------------------------------------------------------------
// Gibbs samplers
// ---------------------------------------------------------------------------

Chain gibbs_zip2(const ZipSeries& data, const Zip2Priors& priors, const GibbsConfig& cfg) {
    cfg.validate();
    check_series(data, 3, "gibbs_zip2");

    RngStream rng(cfg.seed);
    ChainRecorder rec({"alpha1", "alpha2", "alpha3", "tau"}, cfg);
    if (sample_variance(data.x) < 1e-14) {
        rec.chain.warnings.push_back("non_identifiable: voltage samples are constant");
    }

    double alpha1 = priors.alpha1.mu;
    double alpha2 = priors.alpha2.mu;
    double tau = priors.tau.alpha / priors.tau.beta;

    for (std::size_t i = 0; i < cfg.n_iter; ++i) {
        alpha1 = conjugate_normal_update(priors.alpha1, zip2_alpha1_view(data, alpha2).view(tau),
                                         rng)
                     .draw;
        alpha2 = conjugate_normal_update(priors.alpha2, zip2_alpha2_view(data, alpha1).view(tau),
                                         rng)
                     .draw;
        const auto residuals = zip2_residuals(data, alpha1, alpha2);
        tau = gamma_precision_update(priors.tau, residuals, rng).draw;
        rec.record({alpha1, alpha2, 1.0 - alpha1 - alpha2, tau});
    }
    return rec.chain;
}

Chain gibbs_zip3(const ZipSeries& data, const Zip3Priors& priors, const GibbsConfig& cfg) {
    cfg.validate();
    check_series(data, 4, "gibbs_zip3");

    RngStream rng(cfg.seed);
    ChainRecorder rec({"alpha1", "alpha2", "alpha3", "tau"}, cfg);
    if (sample_variance(data.x) < 1e-14) {
        rec.chain.warnings.push_back("non_identifiable: voltage samples are constant");
    }

    double alpha1 = priors.alpha1.mu;
    double alpha2 = priors.alpha2.mu;
    double alpha3 = priors.alpha3.mu;
    double tau = priors.tau.alpha / priors.tau.beta;

    for (std::size_t i = 0; i < cfg.n_iter; ++i) {
        alpha1 = conjugate_normal_update(priors.alpha1,
                                         zip3_alpha1_view(data, alpha2, alpha3).view(tau), rng)
                     .draw;
        alpha2 = conjugate_normal_update(priors.alpha2,
                                         zip3_alpha2_view(data, alpha1, alpha3).view(tau), rng)
                     .draw;
        alpha3 = conjugate_normal_update(priors.alpha3,
                                         zip3_alpha3_view(data, alpha1, alpha2).view(tau), rng)
                     .draw;
        const auto residuals = zip3_residuals(data, alpha1, alpha2, alpha3);
        tau = gamma_precision_update(priors.tau, residuals, rng).draw;
        rec.record({alpha1, alpha2, alpha3, tau});
    }
    return rec.chain;
}

Chain gibbs_im(const ImRegressionData& data, const ImPriors& priors, const GibbsConfig& cfg) {
    cfg.validate();
    data.validate();
    if (data.size() < 6) {
        throw std::invalid_argument("gibbs_im: too few samples");
    }

    RngStream rng(cfg.seed);
    ChainRecorder rec(
        {"beta1", "beta2", "beta3", "alpha_b", "alpha_c", "tau_e", "tau_omega", "tau_i"}, cfg);
    if (sample_variance(data.id) < 1e-14 && sample_variance(data.iq) < 1e-14) {
        rec.chain.warnings.push_back("non_identifiable: stator currents are constant");
    }
    if (sample_variance(data.ed) < 1e-14 && sample_variance(data.eq) < 1e-14) {
        rec.chain.warnings.push_back("non_identifiable: flux linkages are constant");
    }

    double beta1 = priors.beta1.mu;
    double beta2 = priors.beta2.mu;
    double beta3 = priors.beta3.mu;
    double alpha_b = priors.alpha_b.mu;
    double alpha_c = priors.alpha_c.mu;
    double tau_e = priors.tau_e.alpha / priors.tau_e.beta;
    double tau_omega = priors.tau_omega.alpha / priors.tau_omega.beta;
    double tau_i = priors.tau_i.alpha / priors.tau_i.beta;

    for (std::size_t i = 0; i < cfg.n_iter; ++i) {
        beta1 =
            conjugate_normal_update(priors.beta1, im_beta1_view(data, beta2).view(tau_e), rng)
                .draw;
        beta2 =
            conjugate_normal_update(priors.beta2, im_beta2_view(data, beta1).view(tau_e), rng)
                .draw;
        beta3 = conjugate_normal_update(priors.beta3, im_beta3_view(data).view(tau_omega), rng)
                    .draw;
        alpha_b = conjugate_normal_update(priors.alpha_b,
                                          im_alpha_b_view(data, alpha_c).view(tau_i), rng)
                      .draw;
        alpha_c = conjugate_normal_update(priors.alpha_c,
                                          im_alpha_c_view(data, alpha_b).view(tau_i), rng)
                      .draw;
        tau_e = gamma_precision_update(priors.tau_e, im_flux_residuals(data, beta1, beta2), rng)
                    .draw;
        tau_omega =
            gamma_precision_update(priors.tau_omega, im_speed_residuals(data, beta3), rng).draw;
        tau_i = gamma_precision_update(priors.tau_i,
                                       im_current_residuals(data, alpha_b, alpha_c), rng)
                    .draw;
        rec.record({beta1, beta2, beta3, alpha_b, alpha_c, tau_e, tau_omega, tau_i});
    }
    return rec.chain;
}

}  // namespace loadbayes
