#include "loadbayes/experiment.hpp"

#include <cmath>
#include <fstream>
#include <numbers>
#include <stdexcept>

#include <json.hpp>

#include "loadbayes/csv.hpp"

namespace loadbayes {

using ordered_json = nlohmann::ordered_json;

double fit_objective(const ZipParams& params, const PqSeries& data) {
    if (data.v.empty()) {
        throw std::invalid_argument("fit_objective: empty series");
    }
    if (data.p.size() != data.v.size()) {
        throw std::invalid_argument("fit_objective: v and p length mismatch");
    }
    const bool with_q = !data.q.empty();
    if (with_q && data.q.size() != data.v.size()) {
        throw std::invalid_argument("fit_objective: q length mismatch");
    }
    double sum = 0.0;
    for (std::size_t i = 0; i < data.v.size(); ++i) {
        const double dp = data.p[i] - zip_power(params, data.v[i], PowerKind::active);
        sum += dp * dp;
        if (with_q) {
            const double dq = data.q[i] - zip_power(params, data.v[i], PowerKind::reactive);
            sum += dq * dq;
        }
    }
    return sum / static_cast<double>(data.v.size());
}

// ---------------------------------------------------------------------------
// Generators
// ---------------------------------------------------------------------------

ZipSeries generate_zip_regression(const ZipRegressionGen& gen, std::uint64_t seed) {
    if (gen.n == 0) {
        throw std::invalid_argument("generate_zip_regression: n must be at least 1");
    }
    if (!(gen.tau > 0.0) || !(gen.x_lo <= gen.x_hi)) {
        throw std::invalid_argument("generate_zip_regression: bad tau or x range");
    }
    const double alpha3 = 1.0 - gen.alpha1 - gen.alpha2;
    const double sigma = 1.0 / std::sqrt(gen.tau);
    RngStream rng(seed);
    ZipSeries series;
    series.x.resize(gen.n);
    series.y.resize(gen.n);
    for (std::size_t i = 0; i < gen.n; ++i) {
        const double x = rng.uniform(gen.x_lo, gen.x_hi);
        series.x[i] = x;
        series.y[i] = gen.alpha1 * x * x + gen.alpha2 * x + alpha3 + rng.normal(0.0, sigma);
    }
    return series;
}

namespace {

double population_std(const std::vector<double>& v) {
    double mean = 0.0;
    for (const double x : v) {
        mean += x;
    }
    mean /= static_cast<double>(v.size());
    double ss = 0.0;
    for (const double x : v) {
        ss += (x - mean) * (x - mean);
    }
    return std::sqrt(ss / static_cast<double>(v.size()));
}

void add_target_noise(std::vector<double>& target, double noise_frac, RngStream& rng) {
    if (noise_frac <= 0.0) {
        return;
    }
    const double sigma = noise_frac * population_std(target);
    for (double& y : target) {
        y += rng.normal(0.0, sigma);
    }
}

}  // namespace

ImRegressionData generate_im_regression(const ImRegressionGen& gen, std::uint64_t seed) {
    if (gen.n < 6) {
        throw std::invalid_argument("generate_im_regression: n must be at least 6");
    }
    if (gen.noise_frac < 0.0) {
        throw std::invalid_argument("generate_im_regression: negative noise fraction");
    }
    RngStream rng(seed);
    ImRegressionData data;
    data.t0 = gen.t0;
    data.ed.resize(gen.n);
    data.eq.resize(gen.n);
    data.id.resize(gen.n);
    data.iq.resize(gen.n);
    data.ud.resize(gen.n);
    data.uq.resize(gen.n);
    data.omega.resize(gen.n);
    data.y_ed.resize(gen.n);
    data.y_eq.resize(gen.n);
    data.y_omega.resize(gen.n);
    data.y_id.resize(gen.n);
    data.y_iq.resize(gen.n);

    const ImCoefficients& k = gen.coeff;
    for (std::size_t t = 0; t < gen.n; ++t) {
        const double ed = rng.normal(0.9, 0.15);
        const double eq = rng.normal(0.45, 0.15);
        const double ud = rng.normal(0.95, 0.1);
        const double uq = rng.normal(0.3, 0.1);
        const double omega = rng.normal(0.98, 0.02);
        const double dd = ud - ed;
        const double dq = uq - eq;
        const double id = k.alpha_b * dd + k.alpha_c * dq;
        const double iq = k.alpha_b * dq - k.alpha_c * dd;
        const double slip = omega - 1.0;
        data.ed[t] = ed;
        data.eq[t] = eq;
        data.ud[t] = ud;
        data.uq[t] = uq;
        data.omega[t] = omega;
        data.id[t] = id;
        data.iq[t] = iq;
        data.y_ed[t] = k.beta1 * ed + k.beta2 * iq - slip * eq;
        data.y_eq[t] = k.beta1 * eq - k.beta2 * id + slip * ed;
        data.y_omega[t] = k.beta3 * (omega * omega * gen.t0 - ed * id - eq * iq);
        data.y_id[t] = id;
        data.y_iq[t] = iq;
    }
    add_target_noise(data.y_ed, gen.noise_frac, rng);
    add_target_noise(data.y_eq, gen.noise_frac, rng);
    add_target_noise(data.y_omega, gen.noise_frac, rng);
    add_target_noise(data.y_id, gen.noise_frac, rng);
    add_target_noise(data.y_iq, gen.noise_frac, rng);
    return data;
}

ImInput im_trajectory_input(double t) {
    constexpr double two_pi = 2.0 * std::numbers::pi;
    ImInput u;
    u.ud = 1.0 + 0.05 * std::sin(two_pi * t / 5.0) + 0.02 * std::sin(two_pi * t / 1.3);
    u.uq = 0.02 * std::sin(two_pi * t / 2.7);
    return u;
}

ImPhysicalParams default_im_physical() {
    // Chosen so that T' = 1/0.0077, (X - X')/T' = 0.018, 1/(2H) = 25 and
    // (alpha_b, alpha_c) = (0.2, 0.8).
    ImPhysicalParams p;
    p.rs = 5.0 / 17.0;
    p.xs = 0.1;
    p.xm = 3.4141329262;
    p.rr = 0.0383948052;
    p.xr = 1.5721746070;
    p.h = 0.02;
    p.a = 1.0;
    p.b = 0.0;
    p.c = 0.0;
    p.t0 = 0.2;
    return p;
}

std::vector<ImSample> generate_im_trajectory(const ImTrajectoryGen& gen) {
    gen.physical.validate();
    const ImInput u0 = im_trajectory_input(0.0);
    const ImState start = im_equilibrium(u0, gen.physical, {u0.ud, u0.uq, 0.99});
    return simulate_im(start, im_trajectory_input, gen.physical, gen.dt, gen.steps);
}

// ---------------------------------------------------------------------------
// Experiment driver
// ---------------------------------------------------------------------------

std::string to_string(ExperimentKind kind) {
    switch (kind) {
        case ExperimentKind::zip_regression: return "zip-regression";
        case ExperimentKind::zip_feeder: return "zip-feeder";
        case ExperimentKind::im_regression: return "im-regression";
        case ExperimentKind::im_trajectory: return "im-trajectory";
    }
    throw std::logic_error("unknown experiment kind");
}

ExperimentKind experiment_kind_from_string(const std::string& text) {
    if (text == "zip-regression") return ExperimentKind::zip_regression;
    if (text == "zip-feeder") return ExperimentKind::zip_feeder;
    if (text == "im-regression") return ExperimentKind::im_regression;
    if (text == "im-trajectory") return ExperimentKind::im_trajectory;
    throw std::invalid_argument("unknown experiment kind: " + text);
}

void ExperimentSpec::validate() const {
    if (model != "zip1-mh" && model != "zip2" && model != "zip3" && model != "im") {
        throw std::invalid_argument("ExperimentSpec: unknown model " + model);
    }
    if (kind == ExperimentKind::zip_feeder) {
        if (zip_feeder.scenario.n_runs == 0) {
            throw std::invalid_argument("ExperimentSpec: n_runs must be at least 1");
        }
        if (model == "im") {
            throw std::invalid_argument("ExperimentSpec: feeder data needs a zip model");
        }
    }
    if ((kind == ExperimentKind::im_regression || kind == ExperimentKind::im_trajectory) !=
        (model == "im")) {
        throw std::invalid_argument("ExperimentSpec: model does not match the data kind");
    }
    if (do_replay && kind != ExperimentKind::zip_feeder) {
        throw std::invalid_argument("ExperimentSpec: replay needs a feeder experiment");
    }
    model == "zip1-mh" ? mh.validate() : gibbs.validate();
}

namespace {

[[noreturn]] void stage_fail(const char* stage, const std::exception& e) {
    throw std::runtime_error(std::string(stage) + ": " + e.what());
}

Zip2Priors make_zip2_priors(const ExperimentSpec& spec) {
    return {spec.coeff_prior, spec.coeff_prior, spec.precision_prior};
}

Zip3Priors make_zip3_priors(const ExperimentSpec& spec) {
    return {spec.coeff_prior, spec.coeff_prior, spec.coeff_prior, spec.precision_prior};
}

ImPriors make_im_priors(const ExperimentSpec& spec) {
    return {spec.coeff_prior,     spec.coeff_prior, spec.coeff_prior,
            spec.coeff_prior,     spec.coeff_prior, spec.precision_prior,
            spec.precision_prior, spec.precision_prior};
}

void write_series_csv(const std::filesystem::path& path, const ZipSeries& series) {
    CsvTable table;
    table.add("x", series.x).add("y", series.y);
    write_csv(path, table);
}

void write_regression_csv(const std::filesystem::path& path, const ImRegressionData& d) {
    CsvTable table;
    table.add("ed", d.ed)
        .add("eq", d.eq)
        .add("id", d.id)
        .add("iq", d.iq)
        .add("ud", d.ud)
        .add("uq", d.uq)
        .add("omega", d.omega)
        .add("y_ed", d.y_ed)
        .add("y_eq", d.y_eq)
        .add("y_omega", d.y_omega)
        .add("y_id", d.y_id)
        .add("y_iq", d.y_iq)
        .add("t0", std::vector<double>(d.size(), d.t0));
    write_csv(path, table);
}

void write_scenario_csv(const std::filesystem::path& path, const ScenarioResult& result) {
    CsvTable table;
    std::vector<double> run, v, p, ok;
    for (const ScenarioRun& row : result.log) {
        run.push_back(static_cast<double>(row.run));
        v.push_back(row.v_pu);
        p.push_back(row.p_pu);
        ok.push_back(row.converged ? 1.0 : 0.0);
    }
    table.add("run", run).add("v_pu", v).add("p_pu", p).add("converged", ok);
    write_csv(path, table);
}

void write_trajectory_csv(const std::filesystem::path& path,
                          const std::vector<ImSample>& traj) {
    CsvTable table;
    std::vector<double> t, ed, eq, omega, ud, uq;
    for (const ImSample& s : traj) {
        t.push_back(s.t);
        ed.push_back(s.state.ed);
        eq.push_back(s.state.eq);
        omega.push_back(s.state.omega);
        ud.push_back(s.input.ud);
        uq.push_back(s.input.uq);
    }
    table.add("t", t).add("ed", ed).add("eq", eq).add("omega", omega).add("ud", ud).add(
        "uq", uq);
    write_csv(path, table);
}

void write_replay_csv(const std::filesystem::path& path, const ReplayResult& result) {
    CsvTable table;
    std::vector<double> run, va, vb, dv;
    for (const ReplayRun& row : result.runs) {
        run.push_back(static_cast<double>(row.run));
        va.push_back(row.v_a);
        vb.push_back(row.v_b);
        dv.push_back(row.dv);
    }
    table.add("run", run).add("v_a", va).add("v_b", vb).add("dv", dv);
    write_csv(path, table);
}

ReplaySummary summarize_replay(const ReplayResult& result) {
    return {result.max_dv, result.mean_dv, result.runs.size(), result.n_excluded};
}

}  // namespace

double im_residual_mse(const ImRegressionData& data, const Chain& chain) {
    const double beta1 = chain.mean("beta1");
    const double beta2 = chain.mean("beta2");
    const double beta3 = chain.mean("beta3");
    const double alpha_b = chain.mean("alpha_b");
    const double alpha_c = chain.mean("alpha_c");
    double sum = 0.0;
    std::size_t count = 0;
    for (const double r : im_flux_residuals(data, beta1, beta2)) {
        sum += r * r;
        ++count;
    }
    for (const double r : im_speed_residuals(data, beta3)) {
        sum += r * r;
        ++count;
    }
    for (const double r : im_current_residuals(data, alpha_b, alpha_c)) {
        sum += r * r;
        ++count;
    }
    return sum / static_cast<double>(count);
}

void write_chain_csv(const std::filesystem::path& path, const Chain& chain) {
    CsvTable table;
    for (std::size_t c = 0; c < chain.names.size(); ++c) {
        table.add(chain.names[c], chain.column(c));
    }
    write_csv(path, table);
}

Chain read_chain_csv(const std::filesystem::path& path) {
    const CsvTable table = read_csv(path);
    Chain chain;
    chain.names = table.names;
    chain.n_kept = table.rows();
    chain.draws.resize(chain.n_kept * chain.names.size());
    for (std::size_t r = 0; r < chain.n_kept; ++r) {
        for (std::size_t c = 0; c < chain.names.size(); ++c) {
            chain.draws[r * chain.names.size() + c] = table.columns[c][r];
        }
    }
    return chain;
}

FitReport run_experiment(const ExperimentSpec& spec, const std::filesystem::path& out_dir) {
    spec.validate();
    std::filesystem::create_directories(out_dir);

    FitReport report;
    report.name = spec.name;
    report.kind = spec.kind;
    report.seed = spec.seed;
    report.model = spec.model;

    // Stage 1: generate.
    ZipSeries series;
    ImRegressionData im_data;
    ScenarioConfig scenario;
    FeederTopology topo;
    try {
        switch (spec.kind) {
            case ExperimentKind::zip_regression:
                series = generate_zip_regression(spec.zip_regression, spec.seed);
                write_series_csv(out_dir / "series.csv", series);
                break;
            case ExperimentKind::zip_feeder: {
                topo = spec.zip_feeder.feeder == "embedded"
                           ? embedded_feeder33()
                           : load_feeder_table(spec.zip_feeder.feeder);
                scenario = spec.zip_feeder.scenario;
                scenario.seed = spec.seed;
                const ScenarioResult result = run_zip_scenario(topo, scenario);
                if (result.series.size() < 4) {
                    throw std::runtime_error("not enough converged runs");
                }
                series = result.series;
                write_scenario_csv(out_dir / "scenario.csv", result);
                write_series_csv(out_dir / "series.csv", series);
                break;
            }
            case ExperimentKind::im_regression:
                im_data = generate_im_regression(spec.im_regression, spec.seed);
                write_regression_csv(out_dir / "regression.csv", im_data);
                break;
            case ExperimentKind::im_trajectory: {
                const std::vector<ImSample> traj = generate_im_trajectory(spec.im_trajectory);
                im_data = build_im_regression(traj, spec.im_trajectory.physical,
                                              spec.im_trajectory.dt,
                                              DerivativeMode::finite_difference);
                write_trajectory_csv(out_dir / "trajectory.csv", traj);
                write_regression_csv(out_dir / "regression.csv", im_data);
                break;
            }
        }
    } catch (const std::exception& e) {
        stage_fail("generate", e);
    }

    // Stage 2: fit.
    Chain chain;
    try {
        GibbsConfig gibbs = spec.gibbs;
        gibbs.seed = spec.seed;
        if (spec.model == "zip2") {
            chain = gibbs_zip2(series, make_zip2_priors(spec), gibbs);
        } else if (spec.model == "zip3") {
            chain = gibbs_zip3(series, make_zip3_priors(spec), gibbs);
        } else if (spec.model == "im") {
            chain = gibbs_im(im_data, make_im_priors(spec), gibbs);
        } else {
            MhConfig mh = spec.mh;
            mh.seed = spec.seed;
            mh.prior = spec.coeff_prior;
            chain = mh_single_param(series, mh);
        }
        write_chain_csv(out_dir / "samples.csv", chain);
    } catch (const std::exception& e) {
        stage_fail("fit", e);
    }

    // Stage 3: summarize.
    try {
        report.summary = summarize(chain);
        report.warnings = chain.warnings;
        if (spec.model == "im") {
            report.objective = im_residual_mse(im_data, chain);
        } else if (spec.model == "zip1-mh") {
            ZipParams params;
            params.alpha1 = 0.0;
            params.alpha2 = chain.mean("alpha2");
            params.alpha3 = 0.0;
            report.objective = fit_objective(params, {series.x, series.y, {}});
        } else {
            ZipParams params;
            params.alpha1 = chain.mean("alpha1");
            params.alpha2 = chain.mean("alpha2");
            params.alpha3 = chain.mean("alpha3");
            report.objective = fit_objective(params, {series.x, series.y, {}});
        }
        if (spec.model == "zip3" && spec.normalize) {
            const double a1 = chain.mean("alpha1");
            const double a2 = chain.mean("alpha2");
            report.normalized_triple = {{a1, a2, 1.0 - a1 - a2}};
        }
    } catch (const std::exception& e) {
        stage_fail("summarize", e);
    }

    // Stage 4: replay.
    if (spec.do_replay) {
        try {
            ZipParams estimated = scenario.zip;
            estimated.alpha1 = chain.mean("alpha1");
            estimated.alpha2 = chain.mean("alpha2");
            estimated.alpha3 = spec.normalize && report.normalized_triple
                                   ? (*report.normalized_triple)[2]
                                   : chain.mean("alpha3");
            const ReplayResult est = replay_compare(topo, scenario, scenario.zip, estimated);
            write_replay_csv(out_dir / "replay_estimated.csv", est);
            report.replay_estimated = summarize_replay(est);
            if (spec.replay_reference) {
                ZipParams reference = scenario.zip;
                reference.alpha1 = (*spec.replay_reference)[0];
                reference.alpha2 = (*spec.replay_reference)[1];
                reference.alpha3 = (*spec.replay_reference)[2];
                const ReplayResult ref =
                    replay_compare(topo, scenario, scenario.zip, reference);
                write_replay_csv(out_dir / "replay_reference.csv", ref);
                report.replay_reference = summarize_replay(ref);
            }
        } catch (const std::exception& e) {
            stage_fail("replay", e);
        }
    }

    std::ofstream out(out_dir / "report.json", std::ios::binary);
    if (!out) {
        throw std::runtime_error("run_experiment: cannot write report.json");
    }
    out << fit_report_to_json(report, spec) << '\n';
    return report;
}

// ---------------------------------------------------------------------------
// JSON serialization
// ---------------------------------------------------------------------------

namespace {

ordered_json zip_params_to_json(const ZipParams& z) {
    return {{"alpha1", z.alpha1}, {"alpha2", z.alpha2}, {"alpha3", z.alpha3},
            {"alpha4", z.alpha4}, {"alpha5", z.alpha5}, {"alpha6", z.alpha6},
            {"p0", z.p0},         {"q0", z.q0},         {"v0", z.v0}};
}

ZipParams zip_params_from_json(const ordered_json& j) {
    ZipParams z;
    z.alpha1 = j.value("alpha1", z.alpha1);
    z.alpha2 = j.value("alpha2", z.alpha2);
    z.alpha3 = j.value("alpha3", z.alpha3);
    z.alpha4 = j.value("alpha4", z.alpha4);
    z.alpha5 = j.value("alpha5", z.alpha5);
    z.alpha6 = j.value("alpha6", z.alpha6);
    z.p0 = j.value("p0", z.p0);
    z.q0 = j.value("q0", z.q0);
    z.v0 = j.value("v0", z.v0);
    return z;
}

ordered_json spec_to_json_impl(const ExperimentSpec& spec) {
    ordered_json j;
    j["schema_version"] = 1;
    j["name"] = spec.name;
    j["kind"] = to_string(spec.kind);
    j["seed"] = spec.seed;
    j["model"] = spec.model;
    j["gibbs"] = {{"n_iter", spec.gibbs.n_iter},
                  {"burn_in", spec.gibbs.burn_in},
                  {"thinning", spec.gibbs.thinning}};
    j["mh"] = {{"n_iter", spec.mh.n_iter},
               {"burn_in", spec.mh.burn_in},
               {"thinning", spec.mh.thinning},
               {"proposal",
                spec.mh.proposal == MhProposalKind::random_walk ? "random-walk" : "independent"},
               {"proposal_mu", spec.mh.proposal_mu},
               {"proposal_sigma", spec.mh.proposal_sigma},
               {"noise_sigma", spec.mh.noise_sigma},
               {"init_from_prior", spec.mh.init_from_prior},
               {"init_value", spec.mh.init_value}};
    j["coeff_prior"] = {{"mu", spec.coeff_prior.mu}, {"tau", spec.coeff_prior.tau}};
    j["precision_prior"] = {{"alpha", spec.precision_prior.alpha},
                            {"beta", spec.precision_prior.beta}};
    j["normalize"] = spec.normalize;
    switch (spec.kind) {
        case ExperimentKind::zip_regression:
            j["zip_regression"] = {{"alpha1", spec.zip_regression.alpha1},
                                   {"alpha2", spec.zip_regression.alpha2},
                                   {"tau", spec.zip_regression.tau},
                                   {"n", spec.zip_regression.n},
                                   {"x_lo", spec.zip_regression.x_lo},
                                   {"x_hi", spec.zip_regression.x_hi}};
            break;
        case ExperimentKind::zip_feeder: {
            const ScenarioConfig& s = spec.zip_feeder.scenario;
            j["zip_feeder"] = {
                {"feeder", spec.zip_feeder.feeder},
                {"law",
                 {{"kind", s.law.kind == MultiplierLaw::Kind::normal ? "normal" : "uniform"},
                  {"a", s.law.a},
                  {"b", s.law.b}}},
                {"n_runs", s.n_runs},
                {"measured_bus", s.measured_bus},
                {"zip", zip_params_to_json(s.zip)},
                {"replace_native_load", s.replace_native_load},
                {"slack_v", s.flow.slack_v},
                {"tol", s.flow.tol},
                {"max_iter", s.flow.max_iter},
                {"multiplier_floor", s.multiplier_floor},
                {"threads", s.threads}};
            break;
        }
        case ExperimentKind::im_regression:
            j["im_regression"] = {{"beta1", spec.im_regression.coeff.beta1},
                                  {"beta2", spec.im_regression.coeff.beta2},
                                  {"beta3", spec.im_regression.coeff.beta3},
                                  {"alpha_b", spec.im_regression.coeff.alpha_b},
                                  {"alpha_c", spec.im_regression.coeff.alpha_c},
                                  {"t0", spec.im_regression.t0},
                                  {"noise_frac", spec.im_regression.noise_frac},
                                  {"n", spec.im_regression.n}};
            break;
        case ExperimentKind::im_trajectory: {
            const ImPhysicalParams& p = spec.im_trajectory.physical;
            j["im_trajectory"] = {{"rs", p.rs},   {"xs", p.xs}, {"xm", p.xm},
                                  {"rr", p.rr},   {"xr", p.xr}, {"h", p.h},
                                  {"a", p.a},     {"b", p.b},   {"c", p.c},
                                  {"t0", p.t0},   {"dt", spec.im_trajectory.dt},
                                  {"steps", spec.im_trajectory.steps}};
            break;
        }
    }
    j["do_replay"] = spec.do_replay;
    if (spec.replay_reference) {
        j["replay_reference"] = *spec.replay_reference;
    }
    return j;
}

}  // namespace

std::string experiment_to_json(const ExperimentSpec& spec) {
    return spec_to_json_impl(spec).dump(2);
}

ExperimentSpec experiment_from_json(const std::string& text) {
    const ordered_json j = ordered_json::parse(text);
    ExperimentSpec spec;
    spec.name = j.value("name", spec.name);
    spec.kind = experiment_kind_from_string(j.at("kind").get<std::string>());
    spec.seed = j.value("seed", spec.seed);
    spec.model = j.value("model", spec.model);
    if (j.contains("gibbs")) {
        const auto& g = j["gibbs"];
        spec.gibbs.n_iter = g.value("n_iter", spec.gibbs.n_iter);
        spec.gibbs.burn_in = g.value("burn_in", spec.gibbs.burn_in);
        spec.gibbs.thinning = g.value("thinning", spec.gibbs.thinning);
    }
    if (j.contains("mh")) {
        const auto& m = j["mh"];
        spec.mh.n_iter = m.value("n_iter", spec.mh.n_iter);
        spec.mh.burn_in = m.value("burn_in", spec.mh.burn_in);
        spec.mh.thinning = m.value("thinning", spec.mh.thinning);
        if (m.value("proposal", "random-walk") == std::string("independent")) {
            spec.mh.proposal = MhProposalKind::independent;
        }
        spec.mh.proposal_mu = m.value("proposal_mu", spec.mh.proposal_mu);
        spec.mh.proposal_sigma = m.value("proposal_sigma", spec.mh.proposal_sigma);
        spec.mh.noise_sigma = m.value("noise_sigma", spec.mh.noise_sigma);
        spec.mh.init_from_prior = m.value("init_from_prior", spec.mh.init_from_prior);
        spec.mh.init_value = m.value("init_value", spec.mh.init_value);
    }
    if (j.contains("coeff_prior")) {
        spec.coeff_prior.mu = j["coeff_prior"].value("mu", spec.coeff_prior.mu);
        spec.coeff_prior.tau = j["coeff_prior"].value("tau", spec.coeff_prior.tau);
    }
    if (j.contains("precision_prior")) {
        spec.precision_prior.alpha =
            j["precision_prior"].value("alpha", spec.precision_prior.alpha);
        spec.precision_prior.beta =
            j["precision_prior"].value("beta", spec.precision_prior.beta);
    }
    spec.normalize = j.value("normalize", spec.normalize);
    if (j.contains("zip_regression")) {
        const auto& g = j["zip_regression"];
        spec.zip_regression.alpha1 = g.value("alpha1", spec.zip_regression.alpha1);
        spec.zip_regression.alpha2 = g.value("alpha2", spec.zip_regression.alpha2);
        spec.zip_regression.tau = g.value("tau", spec.zip_regression.tau);
        spec.zip_regression.n = g.value("n", spec.zip_regression.n);
        spec.zip_regression.x_lo = g.value("x_lo", spec.zip_regression.x_lo);
        spec.zip_regression.x_hi = g.value("x_hi", spec.zip_regression.x_hi);
    }
    if (j.contains("zip_feeder")) {
        const auto& g = j["zip_feeder"];
        spec.zip_feeder.feeder = g.value("feeder", spec.zip_feeder.feeder);
        ScenarioConfig& s = spec.zip_feeder.scenario;
        if (g.contains("law")) {
            s.law.kind = g["law"].value("kind", "normal") == std::string("uniform")
                             ? MultiplierLaw::Kind::uniform
                             : MultiplierLaw::Kind::normal;
            s.law.a = g["law"].value("a", s.law.a);
            s.law.b = g["law"].value("b", s.law.b);
        }
        s.n_runs = g.value("n_runs", s.n_runs);
        s.measured_bus = g.value("measured_bus", s.measured_bus);
        if (g.contains("zip")) {
            s.zip = zip_params_from_json(g["zip"]);
        }
        s.replace_native_load = g.value("replace_native_load", s.replace_native_load);
        s.flow.slack_v = g.value("slack_v", s.flow.slack_v);
        s.flow.tol = g.value("tol", s.flow.tol);
        s.flow.max_iter = g.value("max_iter", s.flow.max_iter);
        s.multiplier_floor = g.value("multiplier_floor", s.multiplier_floor);
        s.threads = g.value("threads", s.threads);
    }
    if (j.contains("im_regression")) {
        const auto& g = j["im_regression"];
        spec.im_regression.coeff.beta1 = g.value("beta1", spec.im_regression.coeff.beta1);
        spec.im_regression.coeff.beta2 = g.value("beta2", spec.im_regression.coeff.beta2);
        spec.im_regression.coeff.beta3 = g.value("beta3", spec.im_regression.coeff.beta3);
        spec.im_regression.coeff.alpha_b =
            g.value("alpha_b", spec.im_regression.coeff.alpha_b);
        spec.im_regression.coeff.alpha_c =
            g.value("alpha_c", spec.im_regression.coeff.alpha_c);
        spec.im_regression.t0 = g.value("t0", spec.im_regression.t0);
        spec.im_regression.noise_frac = g.value("noise_frac", spec.im_regression.noise_frac);
        spec.im_regression.n = g.value("n", spec.im_regression.n);
    }
    if (j.contains("im_trajectory")) {
        const auto& g = j["im_trajectory"];
        ImPhysicalParams& p = spec.im_trajectory.physical;
        p.rs = g.value("rs", p.rs);
        p.xs = g.value("xs", p.xs);
        p.xm = g.value("xm", p.xm);
        p.rr = g.value("rr", p.rr);
        p.xr = g.value("xr", p.xr);
        p.h = g.value("h", p.h);
        p.a = g.value("a", p.a);
        p.b = g.value("b", p.b);
        p.c = g.value("c", p.c);
        p.t0 = g.value("t0", p.t0);
        spec.im_trajectory.dt = g.value("dt", spec.im_trajectory.dt);
        spec.im_trajectory.steps = g.value("steps", spec.im_trajectory.steps);
    }
    spec.do_replay = j.value("do_replay", spec.do_replay);
    if (j.contains("replay_reference")) {
        spec.replay_reference = j["replay_reference"].get<std::array<double, 3>>();
    }
    return spec;
}

std::string fit_report_to_json(const FitReport& report, const ExperimentSpec& spec) {
    ordered_json j;
    j["schema_version"] = report.schema_version;
    j["name"] = report.name;
    j["kind"] = to_string(report.kind);
    j["seed"] = report.seed;
    j["model"] = report.model;
    ordered_json params = ordered_json::array();
    for (const ParameterSummary& p : report.summary.params) {
        params.push_back({{"name", p.name},
                          {"mean", p.mean},
                          {"std", p.std_dev},
                          {"median", p.median},
                          {"q05", p.q05},
                          {"q95", p.q95},
                          {"ess", p.ess}});
    }
    j["posterior"] = params;
    j["objective"] = report.objective;
    j["warnings"] = report.warnings;
    if (report.normalized_triple) {
        j["normalized_triple"] = *report.normalized_triple;
    }
    if (report.replay_estimated) {
        j["replay_estimated"] = {{"max_dv", report.replay_estimated->max_dv},
                                 {"mean_dv", report.replay_estimated->mean_dv},
                                 {"n_runs", report.replay_estimated->n_runs},
                                 {"n_excluded", report.replay_estimated->n_excluded}};
    }
    if (report.replay_reference) {
        j["replay_reference"] = {{"max_dv", report.replay_reference->max_dv},
                                 {"mean_dv", report.replay_reference->mean_dv},
                                 {"n_runs", report.replay_reference->n_runs},
                                 {"n_excluded", report.replay_reference->n_excluded}};
    }
    j["config"] = spec_to_json_impl(spec);
    return j.dump(2);
}

}  // namespace loadbayes
