#include "oracles.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <stdexcept>

namespace loadbayes::oracles {

GridMoments grid_moments(const std::function<double(double)>& log_density, double lo,
                         double hi, int points) {
    std::vector<double> logp(static_cast<std::size_t>(points));
    const double step = (hi - lo) / static_cast<double>(points - 1);
    double logp_max = -1e308;
    for (int i = 0; i < points; ++i) {
        logp[static_cast<std::size_t>(i)] = log_density(lo + step * i);
        logp_max = std::max(logp_max, logp[static_cast<std::size_t>(i)]);
    }
    double mass = 0.0, first = 0.0, second = 0.0;
    for (int i = 0; i < points; ++i) {
        const double x = lo + step * i;
        const double w = std::exp(logp[static_cast<std::size_t>(i)] - logp_max);
        mass += w;
        first += w * x;
        second += w * x * x;
    }
    GridMoments m;
    m.mean = first / mass;
    m.variance = second / mass - m.mean * m.mean;
    return m;
}

GridMoments grid_normal_posterior(const NormalPrior& prior, const CoefficientView& view,
                                  double lo, double hi, int points) {
    const auto log_density = [&](double c) {
        double lp = -0.5 * prior.tau * (c - prior.mu) * (c - prior.mu);
        for (std::size_t t = 0; t < view.features.size(); ++t) {
            const double r = view.targets[t] - c * view.features[t] - view.offsets[t];
            lp -= 0.5 * view.precision * r * r;
        }
        return lp;
    };
    return grid_moments(log_density, lo, hi, points);
}

GridMoments grid_gamma_posterior(const GammaPrior& prior, std::span<const double> residuals,
                                 double lo, double hi, int points) {
    const auto log_density = [&](double tau) {
        if (!(tau > 0.0)) {
            return -1e308;
        }
        double lp = (prior.alpha - 1.0) * std::log(tau) - prior.beta * tau;
        for (const double r : residuals) {
            lp += 0.5 * std::log(tau) - 0.5 * tau * r * r;
        }
        return lp;
    };
    return grid_moments(log_density, lo, hi, points);
}

std::vector<double> ybus_voltages(const FeederTopology& topo,
                                  const std::vector<double>& multipliers,
                                  const std::vector<ZipAttachment>& attachments,
                                  double slack_v, double tol, int max_iter) {
    using cplx = std::complex<double>;
    const std::size_t n = topo.bus_count();
    const double z_base = topo.base_kv * topo.base_kv / topo.base_mva;
    const double s_base_kw = topo.base_mva * 1000.0;

    std::vector<std::vector<cplx>> ybus(n, std::vector<cplx>(n));
    for (const FeederLine& line : topo.lines) {
        const cplx y = 1.0 / (cplx(line.r_ohm, line.x_ohm) / z_base);
        const auto f = static_cast<std::size_t>(line.from);
        const auto t = static_cast<std::size_t>(line.to);
        ybus[f][f] += y;
        ybus[t][t] += y;
        ybus[f][t] -= y;
        ybus[t][f] -= y;
    }

    std::vector<cplx> fixed_load(n);
    for (std::size_t bus = 0; bus < n; ++bus) {
        const double mult = multipliers.empty() ? 1.0 : multipliers[bus];
        fixed_load[bus] = cplx(topo.loads[bus].p_kw, topo.loads[bus].q_kvar) * mult / s_base_kw;
    }

    const std::size_t slack = static_cast<std::size_t>(topo.slack_bus);
    std::vector<cplx> v(n, cplx(slack_v, 0.0));
    for (int iter = 0; iter < max_iter; ++iter) {
        double max_dv = 0.0;
        for (std::size_t bus = 0; bus < n; ++bus) {
            if (bus == slack) {
                continue;
            }
            cplx s = fixed_load[bus];
            for (const ZipAttachment& att : attachments) {
                if (static_cast<std::size_t>(att.bus) == bus) {
                    const double vm = std::abs(v[bus]);
                    s += cplx(zip_power(att.params, vm, PowerKind::active),
                              zip_power(att.params, vm, PowerKind::reactive)) /
                         s_base_kw;
                }
            }
            const cplx injected = -std::conj(s / v[bus]);
            cplx coupled = 0.0;
            for (std::size_t other = 0; other < n; ++other) {
                if (other != bus) {
                    coupled += ybus[bus][other] * v[other];
                }
            }
            const cplx updated = (injected - coupled) / ybus[bus][bus];
            max_dv = std::max(max_dv, std::abs(updated - v[bus]));
            v[bus] = updated;
        }
        if (max_dv < tol) {
            std::vector<double> mags(n);
            for (std::size_t bus = 0; bus < n; ++bus) {
                mags[bus] = std::abs(v[bus]);
            }
            return mags;
        }
    }
    throw std::runtime_error("ybus_voltages: Gauss-Seidel did not converge");
}

std::vector<double> least_squares(const std::vector<std::vector<double>>& features,
                                  const std::vector<double>& targets) {
    if (features.size() != targets.size() || features.empty()) {
        throw std::invalid_argument("least_squares: bad shapes");
    }
    const std::size_t k = features.front().size();
    std::vector<std::vector<double>> ata(k, std::vector<double>(k + 1));
    for (std::size_t row = 0; row < features.size(); ++row) {
        for (std::size_t i = 0; i < k; ++i) {
            for (std::size_t j = 0; j < k; ++j) {
                ata[i][j] += features[row][i] * features[row][j];
            }
            ata[i][k] += features[row][i] * targets[row];
        }
    }
    // Gaussian elimination with partial pivoting on the augmented system.
    for (std::size_t col = 0; col < k; ++col) {
        std::size_t pivot = col;
        for (std::size_t row = col + 1; row < k; ++row) {
            if (std::abs(ata[row][col]) > std::abs(ata[pivot][col])) {
                pivot = row;
            }
        }
        if (std::abs(ata[pivot][col]) < 1e-12) {
            throw std::runtime_error("least_squares: singular system");
        }
        std::swap(ata[col], ata[pivot]);
        for (std::size_t row = col + 1; row < k; ++row) {
            const double factor = ata[row][col] / ata[col][col];
            for (std::size_t j = col; j <= k; ++j) {
                ata[row][j] -= factor * ata[col][j];
            }
        }
    }
    std::vector<double> solution(k);
    for (std::size_t row = k; row-- > 0;) {
        double rhs = ata[row][k];
        for (std::size_t j = row + 1; j < k; ++j) {
            rhs -= ata[row][j] * solution[j];
        }
        solution[row] = rhs / ata[row][row];
    }
    return solution;
}

}  // namespace loadbayes::oracles
