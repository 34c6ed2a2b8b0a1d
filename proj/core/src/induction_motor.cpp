#include "loadbayes/induction_motor.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace loadbayes {

void ImPhysicalParams::validate() const {
    if (!(rs > 0.0) || !(xs > 0.0) || !(xm > 0.0) || !(rr > 0.0) || !(xr > 0.0)) {
        throw std::invalid_argument("ImPhysicalParams: impedances must be positive");
    }
    if (!(h > 0.0)) {
        throw std::invalid_argument("ImPhysicalParams: inertia constant must be positive");
    }
    if (std::abs(a + b + c - 1.0) > 1e-9) {
        throw std::invalid_argument("ImPhysicalParams: torque coefficients must sum to 1");
    }
}

double im_tprime(const ImPhysicalParams& p) {
    return (p.xr + p.xm) / p.rr;
}

double im_x_open(const ImPhysicalParams& p) {
    return p.xs + p.xm;
}

double im_x_transient(const ImPhysicalParams& p) {
    return p.xs + p.xm * p.xr / (p.xm + p.xr);
}

std::pair<double, double> stator_current_coefficients(double rs, double xprime) {
    const double denom = rs * rs + xprime * xprime;
    if (denom == 0.0) {
        throw std::invalid_argument("stator_current_coefficients: rs and x' both zero");
    }
    return {rs / denom, xprime / denom};
}

ImCoefficients im_coefficients_from_physical(const ImPhysicalParams& p) {
    p.validate();
    const double tprime = im_tprime(p);
    const double x = im_x_open(p);
    const double xprime = im_x_transient(p);
    ImCoefficients coeff;
    coeff.beta1 = -1.0 / tprime;
    coeff.beta2 = -(x - xprime) / tprime;
    coeff.beta3 = -1.0 / (2.0 * p.h);
    auto [ab, ac] = stator_current_coefficients(p.rs, xprime);
    coeff.alpha_b = ab;
    coeff.alpha_c = ac;
    return coeff;
}

std::pair<double, double> im_stator_currents(const ImState& s,
                                             const ImInput& u,
                                             const ImPhysicalParams& p) {
    const double xprime = im_x_transient(p);
    const double denom = p.rs * p.rs + xprime * xprime;
    const double dd = u.ud - s.ed;
    const double dq = u.uq - s.eq;
    const double id = (p.rs * dd + xprime * dq) / denom;
    const double iq = (p.rs * dq - xprime * dd) / denom;
    return {id, iq};
}

ImDerivatives im_derivatives(const ImState& s,
                             const ImInput& u,
                             const ImPhysicalParams& p) {
    const double tprime = im_tprime(p);
    const double dx = im_x_open(p) - im_x_transient(p);
    auto [id, iq] = im_stator_currents(s, u, p);
    const double slip = s.omega - 1.0;
    ImDerivatives d;
    d.ded = -(s.ed + dx * iq) / tprime - slip * s.eq;
    d.deq = -(s.eq - dx * id) / tprime + slip * s.ed;
    const double torque_mech = (p.a * s.omega * s.omega + p.b * s.omega + p.c) * p.t0;
    const double torque_elec = s.ed * id + s.eq * iq;
    d.domega = -(torque_mech - torque_elec) / (2.0 * p.h);
    return d;
}

namespace {

ImState advance(const ImState& s, const ImDerivatives& d, double scale) {
    return {s.ed + scale * d.ded, s.eq + scale * d.deq, s.omega + scale * d.domega};
}

bool state_ok(const ImState& s) {
    return std::isfinite(s.ed) && std::isfinite(s.eq) && std::isfinite(s.omega) &&
           s.omega > 0.0;
}

}  // namespace

std::vector<ImSample> simulate_im(const ImState& initial,
                                  const std::function<ImInput(double)>& input_at,
                                  const ImPhysicalParams& p,
                                  double dt,
                                  std::size_t steps) {
    p.validate();
    if (!(dt > 0.0)) {
        throw std::invalid_argument("simulate_im: dt must be positive");
    }
    std::vector<ImSample> out;
    out.reserve(steps + 1);
    ImState state = initial;
    double t = 0.0;
    out.push_back({t, state, input_at(t)});
    for (std::size_t k = 0; k < steps; ++k) {
        const ImInput u0 = input_at(t);
        const ImInput uh = input_at(t + 0.5 * dt);
        const ImInput u1 = input_at(t + dt);
        const ImDerivatives k1 = im_derivatives(state, u0, p);
        const ImDerivatives k2 = im_derivatives(advance(state, k1, 0.5 * dt), uh, p);
        const ImDerivatives k3 = im_derivatives(advance(state, k2, 0.5 * dt), uh, p);
        const ImDerivatives k4 = im_derivatives(advance(state, k3, dt), u1, p);
        state.ed += dt / 6.0 * (k1.ded + 2.0 * k2.ded + 2.0 * k3.ded + k4.ded);
        state.eq += dt / 6.0 * (k1.deq + 2.0 * k2.deq + 2.0 * k3.deq + k4.deq);
        state.omega += dt / 6.0 * (k1.domega + 2.0 * k2.domega + 2.0 * k3.domega + k4.domega);
        t = dt * static_cast<double>(k + 1);
        if (!state_ok(state)) {
            throw std::runtime_error("simulate_im: trajectory left the valid region at t=" +
                                     std::to_string(t));
        }
        out.push_back({t, state, input_at(t)});
    }
    return out;
}

ImState im_equilibrium(const ImInput& u, const ImPhysicalParams& p, const ImState& guess) {
    p.validate();
    ImState x = guess;
    const double fd_eps = 1e-7;
    for (int iter = 0; iter < 200; ++iter) {
        const ImDerivatives f = im_derivatives(x, u, p);
        const double norm = std::abs(f.ded) + std::abs(f.deq) + std::abs(f.domega);
        if (norm < 1e-13) {
            return x;
        }
        // Numeric Jacobian, column per state variable.
        double jac[3][3];
        for (int j = 0; j < 3; ++j) {
            ImState xp = x;
            double* slot = j == 0 ? &xp.ed : (j == 1 ? &xp.eq : &xp.omega);
            const double step = fd_eps * (1.0 + std::abs(*slot));
            *slot += step;
            const ImDerivatives fp = im_derivatives(xp, u, p);
            jac[0][j] = (fp.ded - f.ded) / step;
            jac[1][j] = (fp.deq - f.deq) / step;
            jac[2][j] = (fp.domega - f.domega) / step;
        }
        // Solve jac * delta = -f by Gaussian elimination with partial pivoting.
        double aug[3][4] = {{jac[0][0], jac[0][1], jac[0][2], -f.ded},
                            {jac[1][0], jac[1][1], jac[1][2], -f.deq},
                            {jac[2][0], jac[2][1], jac[2][2], -f.domega}};
        for (int col = 0; col < 3; ++col) {
            int pivot = col;
            for (int row = col + 1; row < 3; ++row) {
                if (std::abs(aug[row][col]) > std::abs(aug[pivot][col])) {
                    pivot = row;
                }
            }
            if (std::abs(aug[pivot][col]) < 1e-14) {
                throw std::runtime_error("im_equilibrium: singular Jacobian");
            }
            if (pivot != col) {
                for (int k = 0; k < 4; ++k) {
                    std::swap(aug[col][k], aug[pivot][k]);
                }
            }
            for (int row = col + 1; row < 3; ++row) {
                const double factor = aug[row][col] / aug[col][col];
                for (int k = col; k < 4; ++k) {
                    aug[row][k] -= factor * aug[col][k];
                }
            }
        }
        double delta[3];
        for (int row = 2; row >= 0; --row) {
            double rhs = aug[row][3];
            for (int k = row + 1; k < 3; ++k) {
                rhs -= aug[row][k] * delta[k];
            }
            delta[row] = rhs / aug[row][row];
        }
        // Damped step; keep omega positive.
        double lambda = 1.0;
        for (int tries = 0; tries < 30; ++tries) {
            ImState cand{x.ed + lambda * delta[0], x.eq + lambda * delta[1],
                         x.omega + lambda * delta[2]};
            if (cand.omega > 0.0) {
                const ImDerivatives fc = im_derivatives(cand, u, p);
                const double cand_norm =
                    std::abs(fc.ded) + std::abs(fc.deq) + std::abs(fc.domega);
                if (cand_norm < norm || lambda < 1e-6) {
                    x = cand;
                    break;
                }
            }
            lambda *= 0.5;
        }
    }
    throw std::runtime_error("im_equilibrium: Newton iteration did not converge");
}

void ImRegressionData::validate() const {
    const std::size_t n = ed.size();
    if (n == 0) {
        throw std::invalid_argument("ImRegressionData: empty data");
    }
    const bool ragged = eq.size() != n || id.size() != n || iq.size() != n ||
                        ud.size() != n || uq.size() != n || omega.size() != n ||
                        y_ed.size() != n || y_eq.size() != n || y_omega.size() != n ||
                        y_id.size() != n || y_iq.size() != n;
    if (ragged) {
        throw std::invalid_argument("ImRegressionData: arrays must have equal length");
    }
}

ImRegressionData build_im_regression(const std::vector<ImSample>& trajectory,
                                     const ImPhysicalParams& p,
                                     double dt,
                                     DerivativeMode mode) {
    p.validate();
    if (!(dt > 0.0)) {
        throw std::invalid_argument("build_im_regression: dt must be positive");
    }
    const std::size_t n = trajectory.size();
    const std::size_t min_len = mode == DerivativeMode::finite_difference ? 3 : 1;
    if (n < min_len) {
        throw std::invalid_argument("build_im_regression: trajectory too short");
    }

    const std::size_t first = mode == DerivativeMode::finite_difference ? 1 : 0;
    const std::size_t last = mode == DerivativeMode::finite_difference ? n - 1 : n;

    ImRegressionData data;
    data.t0 = p.t0;
    const std::size_t rows = last - first;
    data.ed.reserve(rows);

    for (std::size_t i = first; i < last; ++i) {
        const ImSample& sample = trajectory[i];
        auto [id, iq] = im_stator_currents(sample.state, sample.input, p);
        data.ed.push_back(sample.state.ed);
        data.eq.push_back(sample.state.eq);
        data.id.push_back(id);
        data.iq.push_back(iq);
        data.ud.push_back(sample.input.ud);
        data.uq.push_back(sample.input.uq);
        data.omega.push_back(sample.state.omega);
        data.y_id.push_back(id);
        data.y_iq.push_back(iq);
        if (mode == DerivativeMode::recorded) {
            const ImDerivatives d = im_derivatives(sample.state, sample.input, p);
            data.y_ed.push_back(d.ded);
            data.y_eq.push_back(d.deq);
            data.y_omega.push_back(d.domega);
        } else {
            const ImState& prev = trajectory[i - 1].state;
            const ImState& next = trajectory[i + 1].state;
            data.y_ed.push_back((next.ed - prev.ed) / (2.0 * dt));
            data.y_eq.push_back((next.eq - prev.eq) / (2.0 * dt));
            data.y_omega.push_back((next.omega - prev.omega) / (2.0 * dt));
        }
    }
    return data;
}

}  // namespace loadbayes
