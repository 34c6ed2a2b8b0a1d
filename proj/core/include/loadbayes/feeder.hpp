#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

#include "loadbayes/zip.hpp"

namespace loadbayes {

struct FeederLine {
    int from = 0;
    int to = 0;
    double r_ohm = 0.0;
    double x_ohm = 0.0;
};

struct BusLoad {
    double p_kw = 0.0;
    double q_kvar = 0.0;
};

/// Radial network rooted at slack_bus. Loads sit on the receiving bus of
/// each line; line data is kept in ohms and kW/kvar exactly as tabulated,
/// conversion to per-unit happens in the solver.
struct FeederTopology {
    std::vector<FeederLine> lines;
    std::vector<BusLoad> loads;  // indexed by bus id, size = bus count
    int slack_bus = 0;
    double base_kv = 12.66;
    double base_mva = 10.0;

    std::size_t bus_count() const { return loads.size(); }
    double total_load_kw() const;
    double total_load_kvar() const;

    /// Throws std::invalid_argument unless the graph is a tree rooted at the
    /// slack bus with every bus reachable and nonnegative resistances.
    void validate() const;
};

/// The canonical 33-bus radial test feeder (12.66 kV), buses 0..32 with the
/// slack at bus 0.
FeederTopology embedded_feeder33();

/// Reads the CSV schema `line,from,to,r_ohm,x_ohm,p_kw,q_kvar`, one row per
/// line with the load columns attached to the receiving bus. The slack bus
/// is 0. Throws std::runtime_error on malformed input and
/// std::invalid_argument when the described network is not radial.
FeederTopology load_feeder_table(const std::string& csv_path);

/// Voltage-dependent load placed on a bus in addition to (or instead of) the
/// native constant-PQ load. params.p0/q0 are in kW/kvar, params.v0 in p.u.
struct ZipAttachment {
    int bus = 0;
    ZipParams params;
};

struct PowerFlowSolution {
    std::vector<double> v_mag;  // p.u.
    std::vector<double> v_ang;  // rad
    bool converged = false;
    int iterations = 0;
    double max_mismatch = 0.0;  // last successive voltage change, p.u.
    double p_slack_pu = 0.0;    // complex power injected at the slack bus
    double q_slack_pu = 0.0;
    double p_load_pu = 0.0;  // total consumed, including attachments
    double q_load_pu = 0.0;
};

/// Voltage collapse (non-finite or vanishing voltages) during a solve.
struct DivergenceError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct PowerFlowOptions {
    double slack_v = 1.0;
    double tol = 1e-8;
    int max_iter = 100;
    bool replace_native_load = false;  // attachments replace the bus load
};

/// Backward/forward sweep on the radial network. `load_multipliers` scales
/// the native constant-PQ load of each bus (size must equal bus_count, or be
/// empty for all ones); attachment injections are re-evaluated from the bus
/// voltage on every iteration. Non-convergence is reported through
/// `converged`; voltage collapse throws DivergenceError.
PowerFlowSolution solve_power_flow(const FeederTopology& topo,
                                   const std::vector<double>& load_multipliers,
                                   const std::vector<ZipAttachment>& attachments,
                                   const PowerFlowOptions& opts);

}  // namespace loadbayes
