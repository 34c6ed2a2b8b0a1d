#include "loadbayes/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <thread>

namespace loadbayes {

void MultiplierLaw::validate() const {
    if (kind == Kind::normal) {
        if (!(b > 0.0)) {
            throw std::invalid_argument("MultiplierLaw: normal std must be positive");
        }
    } else if (!(a <= b)) {
        throw std::invalid_argument("MultiplierLaw: uniform needs lo <= hi");
    }
}

double MultiplierLaw::draw(RngStream& rng, double floor_value) const {
    const double value = kind == Kind::normal ? rng.normal(a, b) : rng.uniform(a, b);
    return std::max(value, floor_value);
}

void ScenarioConfig::validate() const {
    law.validate();
    if (n_runs < 1) {
        throw std::invalid_argument("ScenarioConfig: n_runs must be at least 1");
    }
    if (measured_bus < 0) {
        throw std::invalid_argument("ScenarioConfig: measured_bus must be nonnegative");
    }
    if (!(multiplier_floor > 0.0)) {
        throw std::invalid_argument("ScenarioConfig: multiplier_floor must be positive");
    }
    if (threads < 1) {
        throw std::invalid_argument("ScenarioConfig: threads must be at least 1");
    }
}

namespace {

void validate_for_scenario(const ScenarioConfig& cfg, const FeederTopology& topo) {
    cfg.validate();
    if (static_cast<std::size_t>(cfg.measured_bus) >= topo.bus_count()) {
        throw std::invalid_argument("ScenarioConfig: measured_bus out of range");
    }
}

std::vector<double> draw_multipliers(const ScenarioConfig& cfg, std::size_t run,
                                     std::size_t n_buses) {
    RngStream rng = RngStream(cfg.seed).substream(run);
    std::vector<double> mult(n_buses);
    for (double& m : mult) {
        m = cfg.law.draw(rng, cfg.multiplier_floor);
    }
    return mult;
}

ZipAttachment make_attachment(const ScenarioConfig& cfg, const ZipParams& params,
                              double v0) {
    ZipAttachment att;
    att.bus = cfg.measured_bus;
    att.params = params;
    att.params.p0 = cfg.zip.p0;
    att.params.q0 = cfg.zip.q0;
    att.params.v0 = v0;
    return att;
}

struct RunOutcome {
    double v = 0.0;
    double p_pu = 0.0;
    bool ok = false;
};

RunOutcome solve_run(const FeederTopology& topo, const ScenarioConfig& cfg,
                     const ZipAttachment& att, const std::vector<double>& mult) {
    PowerFlowOptions opts = cfg.flow;
    opts.replace_native_load = cfg.replace_native_load;
    RunOutcome out;
    try {
        const PowerFlowSolution sol = solve_power_flow(topo, mult, {att}, opts);
        if (!sol.converged) {
            return out;
        }
        out.v = sol.v_mag[static_cast<std::size_t>(cfg.measured_bus)];
        out.p_pu = zip_power(att.params, out.v, PowerKind::active) / (topo.base_mva * 1000.0);
        out.ok = true;
    } catch (const DivergenceError&) {
        out.ok = false;
    }
    return out;
}

template <typename Fn>
void parallel_runs(std::size_t n_runs, std::size_t threads, Fn&& fn) {
    if (threads <= 1 || n_runs < 2) {
        for (std::size_t run = 0; run < n_runs; ++run) {
            fn(run);
        }
        return;
    }
    const std::size_t workers = std::min(threads, n_runs);
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) {
        pool.emplace_back([&, w] {
            for (std::size_t run = w; run < n_runs; run += workers) {
                fn(run);
            }
        });
    }
    for (auto& t : pool) {
        t.join();
    }
}

}  // namespace

double resolve_attachment_v0(const FeederTopology& topo, const ScenarioConfig& cfg) {
    if (cfg.zip.v0 > 0.0) {
        return cfg.zip.v0;
    }
    // Constant-PQ stand-in for the rating: v0 = 1 makes the polynomial flat
    // only at w = 1, so instead use a pure constant-power parameter set.
    ZipParams constant_power;
    constant_power.alpha1 = constant_power.alpha2 = 0.0;
    constant_power.alpha3 = 1.0;
    constant_power.alpha4 = constant_power.alpha5 = 0.0;
    constant_power.alpha6 = 1.0;
    constant_power.p0 = cfg.zip.p0;
    constant_power.q0 = cfg.zip.q0;
    constant_power.v0 = 1.0;

    ZipAttachment att;
    att.bus = cfg.measured_bus;
    att.params = constant_power;

    PowerFlowOptions opts = cfg.flow;
    opts.replace_native_load = cfg.replace_native_load;
    const PowerFlowSolution sol = solve_power_flow(topo, {}, {att}, opts);
    if (!sol.converged) {
        throw std::runtime_error("resolve_attachment_v0: base case did not converge");
    }
    return sol.v_mag[static_cast<std::size_t>(cfg.measured_bus)];
}

ScenarioResult run_zip_scenario(const FeederTopology& topo, const ScenarioConfig& cfg) {
    topo.validate();
    validate_for_scenario(cfg, topo);

    const double v0 = resolve_attachment_v0(topo, cfg);
    const ZipAttachment att = make_attachment(cfg, cfg.zip, v0);

    ScenarioResult result;
    result.v0 = v0;
    result.p0 = cfg.zip.p0 / (topo.base_mva * 1000.0);

    std::vector<RunOutcome> outcomes(cfg.n_runs);
    parallel_runs(cfg.n_runs, cfg.threads, [&](std::size_t run) {
        const std::vector<double> mult = draw_multipliers(cfg, run, topo.bus_count());
        outcomes[run] = solve_run(topo, cfg, att, mult);
    });

    result.log.reserve(cfg.n_runs);
    bool first = true;
    for (std::size_t run = 0; run < cfg.n_runs; ++run) {
        const RunOutcome& out = outcomes[run];
        result.log.push_back({run, out.v, out.p_pu, out.ok});
        if (!out.ok) {
            ++result.n_failed;
            continue;
        }
        result.series.x.push_back(out.v / result.v0);
        result.series.y.push_back(out.p_pu / result.p0);
        if (first || out.v < result.v_min) {
            result.v_min = out.v;
        }
        if (first || out.v > result.v_max) {
            result.v_max = out.v;
        }
        first = false;
    }
    return result;
}

ReplayResult replay_compare(const FeederTopology& topo,
                            const ScenarioConfig& cfg,
                            const ZipParams& params_a,
                            const ZipParams& params_b) {
    topo.validate();
    validate_for_scenario(cfg, topo);

    const double v0 = resolve_attachment_v0(topo, cfg);
    const ZipAttachment att_a = make_attachment(cfg, params_a, v0);
    const ZipAttachment att_b = make_attachment(cfg, params_b, v0);

    struct Pair {
        RunOutcome a, b;
    };
    std::vector<Pair> outcomes(cfg.n_runs);
    parallel_runs(cfg.n_runs, cfg.threads, [&](std::size_t run) {
        const std::vector<double> mult = draw_multipliers(cfg, run, topo.bus_count());
        outcomes[run].a = solve_run(topo, cfg, att_a, mult);
        outcomes[run].b = solve_run(topo, cfg, att_b, mult);
    });

    ReplayResult result;
    double sum_dv = 0.0;
    for (std::size_t run = 0; run < cfg.n_runs; ++run) {
        const Pair& pair = outcomes[run];
        if (!pair.a.ok || !pair.b.ok) {
            ++result.n_excluded;
            continue;
        }
        const double dv = std::abs(pair.a.v - pair.b.v);
        result.runs.push_back({run, pair.a.v, pair.b.v, dv});
        result.max_dv = std::max(result.max_dv, dv);
        sum_dv += dv;
    }
    if (!result.runs.empty()) {
        result.mean_dv = sum_dv / static_cast<double>(result.runs.size());
    }
    return result;
}

}  // namespace loadbayes
