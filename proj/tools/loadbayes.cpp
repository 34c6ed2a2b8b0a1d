// loadbayes: data generation, Bayesian fitting and voltage-replay comparison
// for composite load models on a radial test feeder.
//
// Exit codes: 0 success, 2 bad flags, 3 simulation divergence or unstable
// integration, 4 unreadable or malformed data, 5 non-identifiable data.

#include <cstdio>
#include <exception>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "loadbayes/csv.hpp"
#include "loadbayes/experiment.hpp"
#include "loadbayes/feeder.hpp"
#include "loadbayes/samplers.hpp"
#include "loadbayes/scenario.hpp"
#include "loadbayes/summary.hpp"

namespace {

using namespace loadbayes;
namespace fs = std::filesystem;

constexpr int kExitFlags = 2;
constexpr int kExitDiverged = 3;
constexpr int kExitData = 4;
constexpr int kExitNonIdentifiable = 5;

struct CliError : std::runtime_error {
    int code;
    CliError(int code_, const std::string& what_) : std::runtime_error(what_), code(code_) {}
};

std::vector<double> parse_number_list(const std::string& text, std::size_t expected,
                                      const std::string& flag) {
    std::vector<double> values;
    std::stringstream ss(text);
    std::string field;
    while (std::getline(ss, field, ',')) {
        try {
            std::size_t pos = 0;
            values.push_back(std::stod(field, &pos));
            if (pos != field.size()) {
                throw std::invalid_argument(field);
            }
        } catch (const std::exception&) {
            throw CliError(kExitFlags, flag + ": bad number '" + field + "'");
        }
    }
    if (values.size() != expected) {
        throw CliError(kExitFlags, flag + ": expected " + std::to_string(expected) +
                                       " comma-separated values");
    }
    return values;
}

MultiplierLaw parse_law(const std::string& text) {
    const std::size_t colon = text.find(':');
    if (colon == std::string::npos) {
        throw CliError(kExitFlags, "--law: expected normal:MEAN,STD or uniform:LO,HI");
    }
    const std::string kind = text.substr(0, colon);
    const std::vector<double> ab = parse_number_list(text.substr(colon + 1), 2, "--law");
    if (kind == "normal") {
        return MultiplierLaw::normal(ab[0], ab[1]);
    }
    if (kind == "uniform") {
        return MultiplierLaw::uniform(ab[0], ab[1]);
    }
    throw CliError(kExitFlags, "--law: unknown law '" + kind + "'");
}

FeederTopology open_feeder(const std::string& source) {
    if (source == "embedded") {
        return embedded_feeder33();
    }
    try {
        return load_feeder_table(source);
    } catch (const std::invalid_argument& e) {
        throw CliError(kExitData, e.what());
    } catch (const std::runtime_error& e) {
        throw CliError(kExitData, e.what());
    }
}

// Options shared by gen-zip and replay.
struct ScenarioFlags {
    std::string law = "normal:2,0.8";
    std::size_t runs = 1000;
    int bus = 18;
    std::string feeder = "embedded";
    std::string zip = "0.25,0.25,0.5";
    std::string zip_q = "0,0,1";
    double p0_kw = 100.0;
    double q0_kvar = 60.0;
    double v0 = 0.0;  // 0 = resolve from the base case
    double slack = 1.0;
    double tol = 1e-8;
    int max_iter = 100;
    bool replace_load = false;
    double max_fail_frac = 0.1;
    std::uint64_t seed = kDefaultSeed;
    std::size_t threads = 1;
    std::string out = ".";

    void attach(CLI::App* cmd) {
        cmd->add_option("--law", law, "Multiplier law: normal:MEAN,STD or uniform:LO,HI")
            ->capture_default_str();
        cmd->add_option("--runs", runs, "Number of randomized-load runs")
            ->capture_default_str();
        cmd->add_option("--bus", bus, "Measured bus id")->capture_default_str();
        cmd->add_option("--feeder", feeder, "'embedded' or a feeder CSV path")
            ->capture_default_str();
        cmd->add_option("--zip", zip, "Active-power coefficients a1,a2,a3")
            ->capture_default_str();
        cmd->add_option("--zip-q", zip_q, "Reactive-power coefficients a4,a5,a6")
            ->capture_default_str();
        cmd->add_option("--p0-kw", p0_kw, "Attachment active rating, kW")
            ->capture_default_str();
        cmd->add_option("--q0-kvar", q0_kvar, "Attachment reactive rating, kvar")
            ->capture_default_str();
        cmd->add_option("--v0", v0,
                        "Attachment reference voltage, p.u. (0 resolves it from the base case)")
            ->capture_default_str();
        cmd->add_option("--slack", slack, "Slack bus voltage, p.u.")->capture_default_str();
        cmd->add_option("--tol", tol, "Power flow tolerance, p.u.")->capture_default_str();
        cmd->add_option("--max-iter", max_iter, "Power flow iteration cap")
            ->capture_default_str();
        cmd->add_flag("--replace-load", replace_load,
                      "Attachment replaces the native bus load instead of adding to it");
        cmd->add_option("--max-fail-frac", max_fail_frac,
                        "Diverged-run budget as a fraction of --runs")
            ->capture_default_str();
        cmd->add_option("--seed", seed, "Random seed")
            ->envname("LOADBAYES_SEED")
            ->capture_default_str();
        cmd->add_option("--threads", threads, "Worker threads for scenario runs")
            ->capture_default_str();
        cmd->add_option("--out", out, "Output directory")->capture_default_str();
    }

    ScenarioConfig config() const {
        ScenarioConfig cfg;
        cfg.law = parse_law(law);
        cfg.n_runs = runs;
        cfg.measured_bus = bus;
        const std::vector<double> a = parse_number_list(zip, 3, "--zip");
        const std::vector<double> aq = parse_number_list(zip_q, 3, "--zip-q");
        cfg.zip.alpha1 = a[0];
        cfg.zip.alpha2 = a[1];
        cfg.zip.alpha3 = a[2];
        cfg.zip.alpha4 = aq[0];
        cfg.zip.alpha5 = aq[1];
        cfg.zip.alpha6 = aq[2];
        cfg.zip.p0 = p0_kw;
        cfg.zip.q0 = q0_kvar;
        cfg.zip.v0 = v0;
        cfg.replace_native_load = replace_load;
        cfg.seed = seed;
        cfg.flow.slack_v = slack;
        cfg.flow.tol = tol;
        cfg.flow.max_iter = max_iter;
        cfg.threads = threads;
        return cfg;
    }
};

void write_scenario_outputs(const fs::path& out_dir, const ScenarioResult& result) {
    fs::create_directories(out_dir);
    CsvTable log;
    std::vector<double> run, v, p, ok;
    for (const ScenarioRun& row : result.log) {
        run.push_back(static_cast<double>(row.run));
        v.push_back(row.v_pu);
        p.push_back(row.p_pu);
        ok.push_back(row.converged ? 1.0 : 0.0);
    }
    log.add("run", run).add("v_pu", v).add("p_pu", p).add("converged", ok);
    write_csv(out_dir / "scenario.csv", log);

    CsvTable series;
    series.add("x", result.series.x).add("y", result.series.y);
    write_csv(out_dir / "series.csv", series);
}

int cmd_gen_zip(const ScenarioFlags& flags) {
    const FeederTopology topo = open_feeder(flags.feeder);
    ScenarioConfig cfg = flags.config();
    const ScenarioResult result = run_zip_scenario(topo, cfg);
    write_scenario_outputs(flags.out, result);
    if (static_cast<double>(result.n_failed) >
        flags.max_fail_frac * static_cast<double>(cfg.n_runs)) {
        std::cerr << "gen-zip: " << result.n_failed << " of " << cfg.n_runs
                  << " runs diverged\n";
        return kExitDiverged;
    }
    std::printf("runs=%zu converged=%zu failed=%zu v0=%s p0_pu=%s v_min=%s v_max=%s range=%s\n",
                cfg.n_runs, result.series.size(), result.n_failed,
                format_double(result.v0).c_str(), format_double(result.p0).c_str(),
                format_double(result.v_min).c_str(), format_double(result.v_max).c_str(),
                format_double(result.v_range()).c_str());
    return 0;
}

// ---------------------------------------------------------------------------
// gen-im
// ---------------------------------------------------------------------------

struct GenImFlags {
    std::string mode = "regression";
    double noise = 0.01;
    std::size_t samples = 2000;
    std::string coeff = "0.0077,0.018,25,0.2,0.8";
    double t0 = 1.0;
    std::string physical;  // rs,xs,xm,rr,xr,h,a,b,c,t0
    double dt = 0.01;
    std::size_t steps = 2000;
    std::uint64_t seed = kDefaultSeed;
    std::string out = ".";
};

void write_regression_outputs(const fs::path& out_dir, const ImRegressionData& data) {
    fs::create_directories(out_dir);
    CsvTable table;
    table.add("ed", data.ed)
        .add("eq", data.eq)
        .add("id", data.id)
        .add("iq", data.iq)
        .add("ud", data.ud)
        .add("uq", data.uq)
        .add("omega", data.omega)
        .add("y_ed", data.y_ed)
        .add("y_eq", data.y_eq)
        .add("y_omega", data.y_omega)
        .add("y_id", data.y_id)
        .add("y_iq", data.y_iq)
        .add("t0", std::vector<double>(data.size(), data.t0));
    write_csv(out_dir / "regression.csv", table);
}

int cmd_gen_im(const GenImFlags& flags) {
    if (flags.mode == "regression") {
        ImRegressionGen gen;
        const std::vector<double> k = parse_number_list(flags.coeff, 5, "--coeff");
        gen.coeff = {k[0], k[1], k[2], k[3], k[4]};
        gen.t0 = flags.t0;
        gen.noise_frac = flags.noise;
        gen.n = flags.samples;
        const ImRegressionData data = generate_im_regression(gen, flags.seed);
        write_regression_outputs(flags.out, data);
        std::printf("mode=regression samples=%zu noise=%s t0=%s\n", data.size(),
                    format_double(flags.noise).c_str(), format_double(flags.t0).c_str());
        return 0;
    }
    if (flags.mode != "trajectory") {
        throw CliError(kExitFlags, "--mode: expected regression or trajectory");
    }

    ImTrajectoryGen gen;
    if (!flags.physical.empty()) {
        const std::vector<double> p = parse_number_list(flags.physical, 10, "--physical");
        gen.physical = {p[0], p[1], p[2], p[3], p[4], p[5], p[6], p[7], p[8], p[9]};
    }
    gen.dt = flags.dt;
    gen.steps = flags.steps;

    // Retry with internal substeps when the fixed step is unstable; recorded
    // samples keep the requested spacing.
    std::vector<ImSample> traj;
    bool ok = false;
    for (int substeps = 1; substeps <= 256; substeps *= 2) {
        try {
            ImTrajectoryGen attempt = gen;
            attempt.dt = gen.dt / substeps;
            attempt.steps = gen.steps * static_cast<std::size_t>(substeps);
            const std::vector<ImSample> fine = generate_im_trajectory(attempt);
            traj.clear();
            for (std::size_t i = 0; i < fine.size(); i += static_cast<std::size_t>(substeps)) {
                traj.push_back(fine[i]);
            }
            ok = true;
            break;
        } catch (const std::runtime_error&) {
            continue;
        }
    }
    if (!ok) {
        std::cerr << "gen-im: integration unstable, step halving exhausted\n";
        return kExitDiverged;
    }

    fs::create_directories(flags.out);
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
    table.add("t", t).add("ed", ed).add("eq", eq).add("omega", omega).add("ud", ud).add("uq",
                                                                                        uq);
    write_csv(fs::path(flags.out) / "trajectory.csv", table);

    const ImRegressionData data =
        build_im_regression(traj, gen.physical, gen.dt, DerivativeMode::finite_difference);
    write_regression_outputs(flags.out, data);
    std::printf("mode=trajectory samples=%zu dt=%s steps=%zu\n", data.size(),
                format_double(gen.dt).c_str(), gen.steps);
    return 0;
}

// ---------------------------------------------------------------------------
// fit
// ---------------------------------------------------------------------------

struct FitFlags {
    std::string model = "zip2";
    std::string data;
    std::size_t iters = 10000;
    std::size_t burn = 2000;
    std::size_t thin = 1;
    bool normalize = false;
    double prior_mu = 0.0;
    double prior_tau = 1e-4;
    double gamma_alpha = 0.01;
    double gamma_beta = 0.01;
    double mh_noise_sigma = 0.05;
    double mh_step = 0.5;
    double mh_mu = 1.0;
    bool mh_independent = false;
    double mh_init = 0.0;
    bool mh_init_set = false;
    std::uint64_t seed = kDefaultSeed;
    std::string out = ".";
};

ZipSeries read_series(const std::string& path) {
    const CsvTable table = read_csv(path);
    if (!table.has_column("x") || !table.has_column("y")) {
        throw std::runtime_error("fit: " + path + " must have columns x,y");
    }
    ZipSeries series;
    series.x = table.column("x");
    series.y = table.column("y");
    return series;
}

ImRegressionData read_regression(const std::string& path) {
    const CsvTable table = read_csv(path);
    ImRegressionData data;
    const auto need = [&](const char* name) -> const std::vector<double>& {
        if (!table.has_column(name)) {
            throw std::runtime_error("fit: " + path + " is missing column " +
                                     std::string(name));
        }
        return table.column(name);
    };
    data.ed = need("ed");
    data.eq = need("eq");
    data.id = need("id");
    data.iq = need("iq");
    data.ud = need("ud");
    data.uq = need("uq");
    data.omega = need("omega");
    data.y_ed = need("y_ed");
    data.y_eq = need("y_eq");
    data.y_omega = need("y_omega");
    data.y_id = need("y_id");
    data.y_iq = need("y_iq");
    data.t0 = table.has_column("t0") && !table.column("t0").empty() ? table.column("t0")[0]
                                                                    : 1.0;
    data.validate();
    return data;
}

int cmd_fit(const FitFlags& flags) {
    if (flags.data.empty()) {
        throw CliError(kExitFlags, "--data is required");
    }

    const NormalPrior coeff_prior{flags.prior_mu, flags.prior_tau};
    const GammaPrior precision_prior{flags.gamma_alpha, flags.gamma_beta};
    GibbsConfig gibbs{flags.iters, flags.burn, flags.thin, flags.seed};

    Chain chain;
    ZipSeries series;
    ImRegressionData im_data;
    try {
        if (flags.model == "im") {
            im_data = read_regression(flags.data);
        } else {
            series = read_series(flags.data);
        }
    } catch (const std::exception& e) {
        std::cerr << e.what() << "\n";
        return kExitData;
    }

    try {
        if (flags.model == "zip2") {
            chain = gibbs_zip2(series, {coeff_prior, coeff_prior, precision_prior}, gibbs);
        } else if (flags.model == "zip3") {
            chain = gibbs_zip3(series,
                               {coeff_prior, coeff_prior, coeff_prior, precision_prior}, gibbs);
        } else if (flags.model == "im") {
            chain = gibbs_im(im_data,
                             {coeff_prior, coeff_prior, coeff_prior, coeff_prior, coeff_prior,
                              precision_prior, precision_prior, precision_prior},
                             gibbs);
        } else if (flags.model == "zip1-mh") {
            MhConfig mh;
            mh.n_iter = flags.iters;
            mh.burn_in = flags.burn;
            mh.thinning = flags.thin;
            mh.seed = flags.seed;
            mh.proposal =
                flags.mh_independent ? MhProposalKind::independent : MhProposalKind::random_walk;
            mh.proposal_mu = flags.mh_mu;
            mh.proposal_sigma = flags.mh_step;
            mh.noise_sigma = flags.mh_noise_sigma;
            mh.prior = coeff_prior;
            if (flags.mh_init_set) {
                mh.init_from_prior = false;
                mh.init_value = flags.mh_init;
            }
            chain = mh_single_param(series, mh);
        } else {
            throw CliError(kExitFlags, "--model: expected zip1-mh, zip2, zip3 or im");
        }
    } catch (const CliError&) {
        throw;
    } catch (const std::invalid_argument& e) {
        std::cerr << "fit: " << e.what() << "\n";
        return kExitData;
    }

    const PosteriorSummary summary = summarize(chain);

    fs::create_directories(flags.out);
    write_chain_csv(fs::path(flags.out) / "samples.csv", chain);

    nlohmann::ordered_json report;
    report["schema_version"] = 1;
    report["model"] = flags.model;
    report["seed"] = flags.seed;
    report["data"] = flags.data;
    report["iters"] = flags.iters;
    report["burn_in"] = flags.burn;
    report["thinning"] = flags.thin;
    nlohmann::ordered_json params = nlohmann::ordered_json::array();
    for (const ParameterSummary& p : summary.params) {
        params.push_back({{"name", p.name},
                          {"mean", p.mean},
                          {"std", p.std_dev},
                          {"median", p.median},
                          {"q05", p.q05},
                          {"q95", p.q95},
                          {"ess", p.ess}});
    }
    report["posterior"] = params;
    if (chain.acceptance_rate >= 0.0) {
        report["acceptance_rate"] = chain.acceptance_rate;
    }
    report["warnings"] = chain.warnings;

    if (flags.model == "im") {
        report["objective"] = im_residual_mse(im_data, chain);
    } else if (flags.model == "zip1-mh") {
        ZipParams params_hat;
        params_hat.alpha1 = 0.0;
        params_hat.alpha2 = chain.mean("alpha2");
        params_hat.alpha3 = 0.0;
        report["objective"] = fit_objective(params_hat, {series.x, series.y, {}});
    } else {
        ZipParams params_hat;
        params_hat.alpha1 = chain.mean("alpha1");
        params_hat.alpha2 = chain.mean("alpha2");
        params_hat.alpha3 = chain.mean("alpha3");
        report["objective"] = fit_objective(params_hat, {series.x, series.y, {}});
    }
    if (flags.model == "zip3" && flags.normalize) {
        const double a1 = chain.mean("alpha1");
        const double a2 = chain.mean("alpha2");
        report["normalized_triple"] = {a1, a2, 1.0 - a1 - a2};
    }

    std::ofstream out_file(fs::path(flags.out) / "report.json", std::ios::binary);
    out_file << report.dump(2) << '\n';
    if (!out_file) {
        std::cerr << "fit: cannot write report.json\n";
        return kExitData;
    }

    std::string line = "model=" + flags.model;
    for (const ParameterSummary& p : summary.params) {
        line += " " + p.name + "=" + format_double(p.mean);
    }
    std::printf("%s\n", line.c_str());

    // Hard non-identifiability is an error exit; soft diagnostics only warn.
    for (const std::string& w : chain.warnings) {
        std::cerr << "fit: warning: " << w << "\n";
    }
    if (chain.has_warning("non_identifiable")) {
        return kExitNonIdentifiable;
    }
    return 0;
}

// ---------------------------------------------------------------------------
// replay
// ---------------------------------------------------------------------------

int cmd_replay(const ScenarioFlags& flags, const std::string& true_triple,
               const std::string& est_triple) {
    const FeederTopology topo = open_feeder(flags.feeder);
    ScenarioConfig cfg = flags.config();

    const std::vector<double> t = parse_number_list(true_triple, 3, "--true");
    const std::vector<double> e = parse_number_list(est_triple, 3, "--est");
    ZipParams params_a = cfg.zip;
    params_a.alpha1 = t[0];
    params_a.alpha2 = t[1];
    params_a.alpha3 = t[2];
    ZipParams params_b = cfg.zip;
    params_b.alpha1 = e[0];
    params_b.alpha2 = e[1];
    params_b.alpha3 = e[2];
    cfg.zip = params_a;

    const ReplayResult result = replay_compare(topo, cfg, params_a, params_b);

    fs::create_directories(flags.out);
    CsvTable table;
    std::vector<double> run, va, vb, dv;
    for (const ReplayRun& row : result.runs) {
        run.push_back(static_cast<double>(row.run));
        va.push_back(row.v_a);
        vb.push_back(row.v_b);
        dv.push_back(row.dv);
    }
    table.add("run", run).add("v_true", va).add("v_est", vb).add("dv", dv);
    write_csv(fs::path(flags.out) / "replay.csv", table);

    if (static_cast<double>(result.n_excluded) >
        flags.max_fail_frac * static_cast<double>(cfg.n_runs)) {
        std::cerr << "replay: " << result.n_excluded << " of " << cfg.n_runs
                  << " runs diverged\n";
        return kExitDiverged;
    }
    std::printf("runs=%zu excluded=%zu max_dv=%s mean_dv=%s\n", result.runs.size(),
                result.n_excluded, format_double(result.max_dv).c_str(),
                format_double(result.mean_dv).c_str());
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Composite load model identification: data generation, "
                 "MCMC fitting and voltage-replay comparison"};
    app.require_subcommand(1);
    app.set_config("--config", "", "Read defaults from an INI/TOML file");

    ScenarioFlags gen_zip_flags;
    CLI::App* gen_zip = app.add_subcommand(
        "gen-zip", "Generate a randomized-load voltage/power dataset from the feeder");
    gen_zip_flags.attach(gen_zip);

    GenImFlags gen_im_flags;
    CLI::App* gen_im =
        app.add_subcommand("gen-im", "Generate induction-motor regression or trajectory data");
    gen_im->add_option("--mode", gen_im_flags.mode, "regression or trajectory")
        ->capture_default_str();
    gen_im->add_option("--noise", gen_im_flags.noise,
                       "Noise std as a fraction of each target's std (regression mode)")
        ->capture_default_str();
    gen_im->add_option("--samples", gen_im_flags.samples, "Sample count (regression mode)")
        ->capture_default_str();
    gen_im->add_option("--coeff", gen_im_flags.coeff,
                       "Coefficients b1,b2,b3,ab,ac (regression mode)")
        ->capture_default_str();
    gen_im->add_option("--t0", gen_im_flags.t0, "Torque base (regression mode)")
        ->capture_default_str();
    gen_im->add_option("--physical", gen_im_flags.physical,
                       "rs,xs,xm,rr,xr,h,a,b,c,t0 (trajectory mode)");
    gen_im->add_option("--dt", gen_im_flags.dt, "Integration step, s (trajectory mode)")
        ->capture_default_str();
    gen_im->add_option("--steps", gen_im_flags.steps, "Step count (trajectory mode)")
        ->capture_default_str();
    gen_im->add_option("--seed", gen_im_flags.seed, "Random seed")
        ->envname("LOADBAYES_SEED")
        ->capture_default_str();
    gen_im->add_option("--out", gen_im_flags.out, "Output directory")->capture_default_str();

    FitFlags fit_flags;
    CLI::App* fit = app.add_subcommand("fit", "Fit a load model to a generated dataset");
    fit->add_option("--model", fit_flags.model, "zip1-mh, zip2, zip3 or im")
        ->capture_default_str();
    fit->add_option("--data", fit_flags.data, "series.csv (zip) or regression.csv (im)");
    fit->add_option("--iters", fit_flags.iters, "Sampler iterations")->capture_default_str();
    fit->add_option("--burn", fit_flags.burn, "Burn-in iterations")->capture_default_str();
    fit->add_option("--thin", fit_flags.thin, "Thinning interval")->capture_default_str();
    fit->add_flag("--normalize", fit_flags.normalize,
                  "zip3: also report the triple renormalized to sum to one");
    fit->add_option("--prior-mu", fit_flags.prior_mu, "Coefficient prior mean")
        ->capture_default_str();
    fit->add_option("--prior-tau", fit_flags.prior_tau, "Coefficient prior precision")
        ->capture_default_str();
    fit->add_option("--gamma-alpha", fit_flags.gamma_alpha, "Precision prior shape")
        ->capture_default_str();
    fit->add_option("--gamma-beta", fit_flags.gamma_beta, "Precision prior rate")
        ->capture_default_str();
    fit->add_option("--mh-noise-sigma", fit_flags.mh_noise_sigma,
                    "Known noise std of the one-term model (zip1-mh)")
        ->capture_default_str();
    fit->add_option("--mh-step", fit_flags.mh_step, "Proposal std (zip1-mh)")
        ->capture_default_str();
    fit->add_option("--mh-mu", fit_flags.mh_mu, "Independent proposal mean (zip1-mh)")
        ->capture_default_str();
    fit->add_flag("--mh-independent", fit_flags.mh_independent,
                  "Use the fixed independent proposal instead of a random walk");
    fit->add_option("--mh-init", fit_flags.mh_init,
                    "Fixed chain start (default: draw from the prior)")
        ->each([&fit_flags](const std::string&) { fit_flags.mh_init_set = true; });
    fit->add_option("--seed", fit_flags.seed, "Random seed")
        ->envname("LOADBAYES_SEED")
        ->capture_default_str();
    fit->add_option("--out", fit_flags.out, "Output directory")->capture_default_str();

    ScenarioFlags replay_flags;
    std::string true_triple = "0.25,0.25,0.5";
    std::string est_triple;
    CLI::App* replay = app.add_subcommand(
        "replay", "Re-solve the same scenarios under two coefficient sets and compare voltages");
    replay_flags.attach(replay);
    replay->add_option("--true", true_triple, "Reference coefficients a1,a2,a3")
        ->capture_default_str();
    replay->add_option("--est", est_triple, "Compared coefficients a1,a2,a3")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : kExitFlags;
    }

    try {
        if (gen_zip->parsed()) {
            return cmd_gen_zip(gen_zip_flags);
        }
        if (gen_im->parsed()) {
            return cmd_gen_im(gen_im_flags);
        }
        if (fit->parsed()) {
            return cmd_fit(fit_flags);
        }
        if (replay->parsed()) {
            return cmd_replay(replay_flags, true_triple, est_triple);
        }
    } catch (const CliError& e) {
        std::cerr << e.what() << "\n";
        return e.code;
    } catch (const DivergenceError& e) {
        std::cerr << e.what() << "\n";
        return kExitDiverged;
    } catch (const std::invalid_argument& e) {
        std::cerr << e.what() << "\n";
        return kExitFlags;
    } catch (const std::exception& e) {
        std::cerr << e.what() << "\n";
        return 1;
    }
    return 0;
}
