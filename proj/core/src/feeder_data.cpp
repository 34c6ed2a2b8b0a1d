#include "loadbayes/feeder.hpp"

namespace loadbayes {

namespace {

struct FeederRow {
    int from;
    int to;
    double r_ohm;
    double x_ohm;
    double p_kw;
    double q_kvar;
};

// 33-bus radial test feeder, 12.66 kV. Load columns belong to the receiving
// bus of each line.
constexpr FeederRow kFeeder33[] = {
    {0, 1, 0.0922, 0.0477, 100, 60},   {1, 2, 0.4930, 0.2511, 90, 40},
    {2, 3, 0.3660, 0.1864, 120, 80},   {3, 4, 0.3811, 0.1941, 60, 30},
    {4, 5, 0.8190, 0.7070, 60, 20},    {5, 6, 0.1872, 0.6188, 200, 100},
    {6, 7, 1.7114, 1.2531, 200, 100},  {7, 8, 1.0300, 0.7400, 60, 20},
    {8, 9, 1.0400, 0.7400, 60, 20},    {9, 10, 0.1966, 0.0650, 45, 30},
    {10, 11, 0.3744, 0.1238, 60, 35},  {11, 12, 1.4680, 1.1550, 60, 35},
    {12, 13, 0.5416, 0.7129, 120, 80}, {13, 14, 0.5910, 0.5260, 60, 10},
    {14, 15, 0.7463, 0.5450, 60, 20},  {15, 16, 1.2890, 1.7210, 60, 20},
    {16, 17, 0.7320, 0.5740, 90, 40},  {1, 18, 0.1640, 0.1565, 90, 40},
    {18, 19, 1.5042, 1.3554, 90, 40},  {19, 20, 0.4095, 0.4787, 90, 40},
    {20, 21, 0.7089, 0.9373, 90, 40},  {2, 22, 0.4512, 0.3083, 90, 50},
    {22, 23, 0.8980, 0.7091, 420, 200},{23, 24, 0.8960, 0.7011, 420, 200},
    {5, 25, 0.2030, 0.1034, 60, 25},   {25, 26, 0.2842, 0.1447, 60, 25},
    {26, 27, 1.0590, 0.9337, 60, 20},  {27, 28, 0.8042, 0.7006, 120, 70},
    {28, 29, 0.5075, 0.2585, 200, 600},{29, 30, 0.9744, 0.9630, 150, 70},
    {30, 31, 0.3105, 0.3619, 210, 100},{31, 32, 0.3410, 0.5302, 60, 40},
};

}  // namespace

FeederTopology embedded_feeder33() {
    FeederTopology topo;
    topo.slack_bus = 0;
    topo.base_kv = 12.66;
    topo.base_mva = 10.0;
    topo.loads.resize(33);
    topo.lines.reserve(32);
    for (const FeederRow& row : kFeeder33) {
        topo.lines.push_back({row.from, row.to, row.r_ohm, row.x_ohm});
        topo.loads[static_cast<std::size_t>(row.to)] = {row.p_kw, row.q_kvar};
    }
    return topo;
}

}  // namespace loadbayes
