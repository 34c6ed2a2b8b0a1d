#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "loadbayes/samplers.hpp"
#include "loadbayes/scenario.hpp"
#include "loadbayes/summary.hpp"

namespace loadbayes {

/// Measured voltage/power pairs in consistent units; q may be empty when
/// only active power was recorded.
struct PqSeries {
    std::vector<double> v;
    std::vector<double> p;
    std::vector<double> q;
};

/// Mean squared deviation between measured and model-predicted powers,
/// (1/n) * sum((p - P(v))^2 + (q - Q(v))^2); the reactive term is dropped
/// when no q data is present.
double fit_objective(const ZipParams& params, const PqSeries& data);

/// Mean squared residual of all five motor equations at the chain's
/// posterior means.
double im_residual_mse(const ImRegressionData& data, const Chain& chain);

// ---------------------------------------------------------------------------
// Synthetic data generators shared by the experiment driver and the CLI.
// ---------------------------------------------------------------------------

/// Polynomial regression data: x ~ U(x_lo, x_hi), y = a1*x^2 + a2*x + a3
/// + N(0, 1/tau) with a3 = 1 - a1 - a2. The wide default x range keeps the
/// quadratic and linear regressors distinguishable.
struct ZipRegressionGen {
    double alpha1 = 3.0;
    double alpha2 = -5.0;
    double tau = 0.2;
    std::size_t n = 1000;
    double x_lo = 0.05;
    double x_hi = 4.0;
};
ZipSeries generate_zip_regression(const ZipRegressionGen& gen, std::uint64_t seed);

/// Motor regression data with the documented sampling laws
///   ed ~ N(0.9, 0.15^2), eq ~ N(0.45, 0.15^2), ud ~ N(0.95, 0.1^2),
///   uq ~ N(0.3, 0.1^2), omega ~ N(0.98, 0.02^2),
/// currents computed from the coefficient equations, and independent
/// Gaussian noise on each target scaled to noise_frac of that target's
/// sample standard deviation.
struct ImRegressionGen {
    ImCoefficients coeff{0.0077, 0.018, 25.0, 0.20, 0.80};
    double t0 = 1.0;
    double noise_frac = 0.01;
    std::size_t n = 2000;
};
ImRegressionData generate_im_regression(const ImRegressionGen& gen, std::uint64_t seed);

/// Deterministic voltage playback used by trajectory generation:
///   ud(t) = 1 + 0.05 sin(2 pi t / 5) + 0.02 sin(2 pi t / 1.3)
///   uq(t) = 0.02 sin(2 pi t / 2.7)
ImInput im_trajectory_input(double t);

/// Motor parameter set whose regression-space magnitudes match the default
/// ImRegressionGen coefficients (up to the physical signs).
ImPhysicalParams default_im_physical();

struct ImTrajectoryGen {
    ImPhysicalParams physical = default_im_physical();
    double dt = 0.01;
    std::size_t steps = 2000;
};
std::vector<ImSample> generate_im_trajectory(const ImTrajectoryGen& gen);

// ---------------------------------------------------------------------------
// Experiment driver
// ---------------------------------------------------------------------------

enum class ExperimentKind { zip_regression, zip_feeder, im_regression, im_trajectory };

std::string to_string(ExperimentKind kind);
ExperimentKind experiment_kind_from_string(const std::string& text);

struct ZipFeederGen {
    std::string feeder = "embedded";  // "embedded" or a feeder CSV path
    ScenarioConfig scenario;
};

/// Full description of a generate -> fit -> summarize (-> replay) pipeline.
/// Everything that affects the output lives here, so a descriptor plus its
/// seed reproduces the report byte for byte.
struct ExperimentSpec {
    std::string name = "experiment";
    ExperimentKind kind = ExperimentKind::zip_regression;
    std::uint64_t seed = kDefaultSeed;

    ZipRegressionGen zip_regression;
    ZipFeederGen zip_feeder;
    ImRegressionGen im_regression;
    ImTrajectoryGen im_trajectory;

    std::string model = "zip2";  // zip1-mh | zip2 | zip3 | im
    GibbsConfig gibbs;
    MhConfig mh;
    NormalPrior coeff_prior;
    GammaPrior precision_prior;
    bool normalize = false;  // zip3: also report the renormalized triple

    bool do_replay = false;                     // zip_feeder only
    std::optional<std::array<double, 3>> replay_reference;  // extra comparison triple

    void validate() const;
};

struct ReplaySummary {
    double max_dv = 0.0;
    double mean_dv = 0.0;
    std::size_t n_runs = 0;
    std::size_t n_excluded = 0;
};

struct FitReport {
    int schema_version = 1;
    std::string name;
    ExperimentKind kind = ExperimentKind::zip_regression;
    std::uint64_t seed = 0;
    std::string model;
    PosteriorSummary summary;
    std::vector<std::string> warnings;
    double objective = 0.0;
    std::optional<std::array<double, 3>> normalized_triple;
    std::optional<ReplaySummary> replay_estimated;
    std::optional<ReplaySummary> replay_reference;
};

/// Executes the pipeline and persists every artifact under out_dir:
/// the generated dataset(s), samples.csv with one column per parameter,
/// report.json, and replay CSVs when replays ran. Stage failures are
/// reported as std::runtime_error prefixed with the stage name.
FitReport run_experiment(const ExperimentSpec& spec, const std::filesystem::path& out_dir);

std::string experiment_to_json(const ExperimentSpec& spec);
ExperimentSpec experiment_from_json(const std::string& text);
std::string fit_report_to_json(const FitReport& report, const ExperimentSpec& spec);

void write_chain_csv(const std::filesystem::path& path, const Chain& chain);
Chain read_chain_csv(const std::filesystem::path& path);

}  // namespace loadbayes
