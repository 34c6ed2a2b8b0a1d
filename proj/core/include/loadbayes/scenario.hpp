#pragma once

#include <cstdint>
#include <vector>

#include "loadbayes/feeder.hpp"
#include "loadbayes/rng.hpp"
#include "loadbayes/zip.hpp"

namespace loadbayes {

/// Per-bus load multiplier distribution.
struct MultiplierLaw {
    enum class Kind { normal, uniform };
    Kind kind = Kind::normal;
    double a = 2.0;  // mean (normal) or lower bound (uniform)
    double b = 0.8;  // std (normal) or upper bound (uniform)

    static MultiplierLaw normal(double mean, double stddev) {
        return {Kind::normal, mean, stddev};
    }
    static MultiplierLaw uniform(double lo, double hi) { return {Kind::uniform, lo, hi}; }
    void validate() const;
    double draw(RngStream& rng, double floor_value) const;
};

/// One randomized-load measurement campaign: each run scales every native
/// bus load by an independent multiplier draw and records the measured bus
/// voltage together with the attached load's active power.
struct ScenarioConfig {
    MultiplierLaw law;
    std::size_t n_runs = 1000;
    int measured_bus = 18;
    ZipParams zip;  // attachment; p0 in kW, q0 in kvar. v0 <= 0 means
                    // "resolve from the base case with the attachment".
    bool replace_native_load = false;
    std::uint64_t seed = kDefaultSeed;
    PowerFlowOptions flow;
    double multiplier_floor = 1e-6;
    std::size_t threads = 1;

    void validate() const;
};

struct ScenarioRun {
    std::size_t run = 0;
    double v_pu = 0.0;
    double p_pu = 0.0;
    bool converged = false;
};

struct ScenarioResult {
    ZipSeries series;  // converged runs only, normalized to (v0, p0)
    std::vector<ScenarioRun> log;
    double v0 = 0.0;  // reference voltage at the measured bus, p.u.
    double p0 = 0.0;  // attachment active power at the reference, p.u.
    std::size_t n_failed = 0;
    double v_min = 0.0;
    double v_max = 0.0;

    double v_range() const { return v_max - v_min; }
};

/// Reference operating point of the attachment: solve the base case
/// (multipliers all one) with the rating as a constant-PQ load and pin v0 to
/// the resulting voltage at the measured bus. At that point the polynomial
/// evaluates to exactly (p0, q0), so the reference is self-consistent.
double resolve_attachment_v0(const FeederTopology& topo, const ScenarioConfig& cfg);

ScenarioResult run_zip_scenario(const FeederTopology& topo, const ScenarioConfig& cfg);

struct ReplayRun {
    std::size_t run = 0;
    double v_a = 0.0;
    double v_b = 0.0;
    double dv = 0.0;  // |v_a - v_b|
};

struct ReplayResult {
    std::vector<ReplayRun> runs;  // runs converged under both parameter sets
    double max_dv = 0.0;
    double mean_dv = 0.0;
    std::size_t n_excluded = 0;
};

/// Re-solves the same multiplier draws under two coefficient sets and
/// compares the measured-bus voltages. Ratings and the resolved reference
/// point are shared so that identical coefficients give dv == 0 exactly.
ReplayResult replay_compare(const FeederTopology& topo,
                            const ScenarioConfig& cfg,
                            const ZipParams& params_a,
                            const ZipParams& params_b);

}  // namespace loadbayes
