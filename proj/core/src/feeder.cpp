#include "loadbayes/feeder.hpp"

#include <algorithm>
#include <cmath>
#include <complex>

#include "loadbayes/csv.hpp"

namespace loadbayes {

double FeederTopology::total_load_kw() const {
    double sum = 0.0;
    for (const auto& load : loads) {
        sum += load.p_kw;
    }
    return sum;
}

double FeederTopology::total_load_kvar() const {
    double sum = 0.0;
    for (const auto& load : loads) {
        sum += load.q_kvar;
    }
    return sum;
}

void FeederTopology::validate() const {
    const std::size_t n = bus_count();
    if (n == 0) {
        throw std::invalid_argument("FeederTopology: no buses");
    }
    if (slack_bus < 0 || static_cast<std::size_t>(slack_bus) >= n) {
        throw std::invalid_argument("FeederTopology: slack bus out of range");
    }
    if (lines.size() != n - 1) {
        throw std::invalid_argument("FeederTopology: a radial network needs exactly " +
                                    std::to_string(n - 1) + " lines");
    }
    std::vector<int> parent_count(n, 0);
    for (const FeederLine& line : lines) {
        if (line.from < 0 || static_cast<std::size_t>(line.from) >= n || line.to < 0 ||
            static_cast<std::size_t>(line.to) >= n) {
            throw std::invalid_argument("FeederTopology: line endpoint out of range");
        }
        if (line.r_ohm < 0.0) {
            throw std::invalid_argument("FeederTopology: negative line resistance");
        }
        if (line.to == slack_bus) {
            throw std::invalid_argument("FeederTopology: slack bus cannot receive a line");
        }
        if (++parent_count[static_cast<std::size_t>(line.to)] > 1) {
            throw std::invalid_argument("FeederTopology: bus " + std::to_string(line.to) +
                                        " has two feeding lines (network not radial)");
        }
    }
    // Every non-slack bus must reach the slack through parent links; a cycle
    // or disconnected group fails the walk.
    std::vector<int> parent(n, -1);
    for (const FeederLine& line : lines) {
        parent[static_cast<std::size_t>(line.to)] = line.from;
    }
    for (std::size_t bus = 0; bus < n; ++bus) {
        if (static_cast<int>(bus) == slack_bus) {
            continue;
        }
        std::size_t hops = 0;
        int cursor = static_cast<int>(bus);
        while (cursor != slack_bus) {
            if (cursor < 0 || hops++ > n) {
                throw std::invalid_argument("FeederTopology: bus " + std::to_string(bus) +
                                            " is not reachable from the slack bus");
            }
            cursor = parent[static_cast<std::size_t>(cursor)];
        }
    }
}

FeederTopology load_feeder_table(const std::string& csv_path) {
    const CsvTable table = read_csv(csv_path);
    const std::vector<std::string> expected = {"line",  "from", "to",    "r_ohm",
                                               "x_ohm", "p_kw", "q_kvar"};
    if (table.names != expected) {
        throw std::runtime_error("load_feeder_table: unexpected header in " + csv_path);
    }
    if (table.rows() == 0) {
        throw std::runtime_error("load_feeder_table: no lines in " + csv_path);
    }
    const auto& from = table.column("from");
    const auto& to = table.column("to");
    const auto& r = table.column("r_ohm");
    const auto& x = table.column("x_ohm");
    const auto& p = table.column("p_kw");
    const auto& q = table.column("q_kvar");

    int max_bus = 0;
    for (std::size_t i = 0; i < table.rows(); ++i) {
        max_bus = std::max({max_bus, static_cast<int>(from[i]), static_cast<int>(to[i])});
    }

    FeederTopology topo;
    topo.slack_bus = 0;
    topo.loads.resize(static_cast<std::size_t>(max_bus) + 1);
    for (std::size_t i = 0; i < table.rows(); ++i) {
        topo.lines.push_back({static_cast<int>(from[i]), static_cast<int>(to[i]), r[i], x[i]});
        auto& load = topo.loads[static_cast<std::size_t>(to[i])];
        load.p_kw += p[i];
        load.q_kvar += q[i];
    }
    topo.validate();
    return topo;
}

namespace {

// Root-outward line ordering via breadth-first walk from the slack bus.
std::vector<std::size_t> sweep_order(const FeederTopology& topo) {
    const std::size_t n = topo.bus_count();
    std::vector<std::vector<std::size_t>> lines_from(n);
    for (std::size_t k = 0; k < topo.lines.size(); ++k) {
        lines_from[static_cast<std::size_t>(topo.lines[k].from)].push_back(k);
    }
    std::vector<std::size_t> order;
    order.reserve(topo.lines.size());
    std::vector<int> frontier{topo.slack_bus};
    while (!frontier.empty()) {
        std::vector<int> next;
        for (const int bus : frontier) {
            for (const std::size_t k : lines_from[static_cast<std::size_t>(bus)]) {
                order.push_back(k);
                next.push_back(topo.lines[k].to);
            }
        }
        frontier = std::move(next);
    }
    return order;
}

}  // namespace

PowerFlowSolution solve_power_flow(const FeederTopology& topo,
                                   const std::vector<double>& load_multipliers,
                                   const std::vector<ZipAttachment>& attachments,
                                   const PowerFlowOptions& opts) {
    topo.validate();
    const std::size_t n = topo.bus_count();
    if (!load_multipliers.empty() && load_multipliers.size() != n) {
        throw std::invalid_argument("solve_power_flow: multiplier count must match buses");
    }
    if (!(opts.tol > 0.0) || opts.max_iter < 1 || !(opts.slack_v > 0.0)) {
        throw std::invalid_argument("solve_power_flow: bad options");
    }
    for (const ZipAttachment& att : attachments) {
        if (att.bus < 0 || static_cast<std::size_t>(att.bus) >= n) {
            throw std::invalid_argument("solve_power_flow: attachment bus out of range");
        }
    }

    using cplx = std::complex<double>;
    const double z_base = topo.base_kv * topo.base_kv / topo.base_mva;  // ohm
    const double s_base_kw = topo.base_mva * 1000.0;

    std::vector<cplx> z_pu(topo.lines.size());
    for (std::size_t k = 0; k < topo.lines.size(); ++k) {
        z_pu[k] = cplx(topo.lines[k].r_ohm, topo.lines[k].x_ohm) / z_base;
    }

    std::vector<bool> native_replaced(n, false);
    if (opts.replace_native_load) {
        for (const ZipAttachment& att : attachments) {
            native_replaced[static_cast<std::size_t>(att.bus)] = true;
        }
    }
    std::vector<cplx> base_load(n);
    for (std::size_t bus = 0; bus < n; ++bus) {
        if (!native_replaced[bus]) {
            const double mult = load_multipliers.empty() ? 1.0 : load_multipliers[bus];
            base_load[bus] =
                cplx(topo.loads[bus].p_kw, topo.loads[bus].q_kvar) * mult / s_base_kw;
        }
    }

    const std::vector<std::size_t> order = sweep_order(topo);
    const std::size_t slack = static_cast<std::size_t>(topo.slack_bus);

    std::vector<cplx> voltage(n, cplx(opts.slack_v, 0.0));
    std::vector<cplx> bus_power(n);
    std::vector<cplx> node_current(n);
    std::vector<cplx> branch_current(topo.lines.size());

    PowerFlowSolution sol;
    sol.v_mag.assign(n, opts.slack_v);
    sol.v_ang.assign(n, 0.0);

    for (int iter = 1; iter <= opts.max_iter; ++iter) {
        // Load injections at present voltages.
        for (std::size_t bus = 0; bus < n; ++bus) {
            bus_power[bus] = base_load[bus];
        }
        for (const ZipAttachment& att : attachments) {
            const std::size_t bus = static_cast<std::size_t>(att.bus);
            const double v = std::abs(voltage[bus]);
            const double p = zip_power(att.params, v, PowerKind::active);
            const double q = zip_power(att.params, v, PowerKind::reactive);
            bus_power[bus] += cplx(p, q) / s_base_kw;
        }

        // Backward sweep: load currents, then accumulate leaf-to-root.
        for (std::size_t bus = 0; bus < n; ++bus) {
            node_current[bus] = std::conj(bus_power[bus] / voltage[bus]);
        }
        for (auto it = order.rbegin(); it != order.rend(); ++it) {
            const std::size_t k = *it;
            branch_current[k] = node_current[static_cast<std::size_t>(topo.lines[k].to)];
            node_current[static_cast<std::size_t>(topo.lines[k].from)] += branch_current[k];
        }

        // Forward sweep: propagate voltage drops root-to-leaf.
        double mismatch = 0.0;
        voltage[slack] = cplx(opts.slack_v, 0.0);
        for (const std::size_t k : order) {
            const std::size_t from = static_cast<std::size_t>(topo.lines[k].from);
            const std::size_t to = static_cast<std::size_t>(topo.lines[k].to);
            const cplx updated = voltage[from] - z_pu[k] * branch_current[k];
            mismatch = std::max(mismatch, std::abs(updated - voltage[to]));
            voltage[to] = updated;
        }

        for (std::size_t bus = 0; bus < n; ++bus) {
            const double v = std::abs(voltage[bus]);
            if (!std::isfinite(v) || v < 0.01) {
                throw DivergenceError("solve_power_flow: voltage collapse at bus " +
                                      std::to_string(bus));
            }
        }

        sol.iterations = iter;
        sol.max_mismatch = mismatch;
        if (mismatch < opts.tol) {
            sol.converged = true;
            break;
        }
    }

    for (std::size_t bus = 0; bus < n; ++bus) {
        sol.v_mag[bus] = std::abs(voltage[bus]);
        sol.v_ang[bus] = std::arg(voltage[bus]);
    }
    const cplx s_slack = voltage[slack] * std::conj(node_current[slack]);
    sol.p_slack_pu = s_slack.real();
    sol.q_slack_pu = s_slack.imag();
    cplx total_load;
    for (const cplx& s : bus_power) {
        total_load += s;
    }
    sol.p_load_pu = total_load.real();
    sol.q_load_pu = total_load.imag();
    return sol;
}

}  // namespace loadbayes
