#pragma once

#include <cstddef>
#include <functional>
#include <utility>
#include <vector>

namespace loadbayes {

/// Third-order induction motor constants, per-unit except the inertia
/// constant h (seconds). The torque curve is (a*w^2 + b*w + c) * t0.
struct ImPhysicalParams {
    double rs = 0.0;  // stator resistance
    double xs = 0.0;  // stator leakage reactance
    double xm = 0.0;  // magnetizing reactance
    double rr = 0.0;  // rotor resistance
    double xr = 0.0;  // rotor leakage reactance
    double h = 0.0;   // rotor inertia constant, s
    double a = 1.0;
    double b = 0.0;
    double c = 0.0;
    double t0 = 0.2;  // mechanical torque base

    /// Throws std::invalid_argument when an impedance or h is not positive
    /// or the torque coefficients do not sum to one.
    void validate() const;
};

/// Regression-space coefficients of the motor equations.
struct ImCoefficients {
    double beta1 = 0.0;    // -1/T'
    double beta2 = 0.0;    // -(X - X')/T'
    double beta3 = 0.0;    // -1/(2H)
    double alpha_b = 0.0;  // Rs / (Rs^2 + X'^2)
    double alpha_c = 0.0;  // X' / (Rs^2 + X'^2)
};

struct ImState {
    double ed = 0.0;     // d-axis rotor flux linkage
    double eq = 0.0;     // q-axis rotor flux linkage
    double omega = 1.0;  // rotor speed
};

struct ImInput {
    double ud = 1.0;  // d-axis bus voltage
    double uq = 0.0;  // q-axis bus voltage
};

struct ImDerivatives {
    double ded = 0.0;
    double deq = 0.0;
    double domega = 0.0;
};

/// Rotor open-circuit time constant T' = (Xr + Xm) / Rr.
double im_tprime(const ImPhysicalParams& p);
/// Open-circuit reactance X = Xs + Xm.
double im_x_open(const ImPhysicalParams& p);
/// Transient reactance X' = Xs + Xm*Xr / (Xm + Xr).
double im_x_transient(const ImPhysicalParams& p);

/// Current coefficients for a given stator resistance and transient
/// reactance: alpha_b = rs/(rs^2 + x'^2), alpha_c = x'/(rs^2 + x'^2).
std::pair<double, double> stator_current_coefficients(double rs, double xprime);

ImCoefficients im_coefficients_from_physical(const ImPhysicalParams& p);

/// Algebraic stator currents (id, iq) from the flux linkages and terminal
/// voltage.
std::pair<double, double> im_stator_currents(const ImState& s,
                                             const ImInput& u,
                                             const ImPhysicalParams& p);

/// Right-hand side of the third-order model; currents are computed
/// internally from the state and input.
ImDerivatives im_derivatives(const ImState& s,
                             const ImInput& u,
                             const ImPhysicalParams& p);

struct ImSample {
    double t = 0.0;
    ImState state;
    ImInput input;
};

/// Fixed-step fourth-order Runge-Kutta integration, recording one sample per
/// step (steps + 1 samples including the initial state). Throws
/// std::runtime_error when the trajectory leaves the valid region
/// (non-finite state or omega <= 0).
std::vector<ImSample> simulate_im(const ImState& initial,
                                  const std::function<ImInput(double)>& input_at,
                                  const ImPhysicalParams& p,
                                  double dt,
                                  std::size_t steps);

/// Damped Newton solve of im_derivatives == 0 at a fixed terminal voltage.
/// Throws std::runtime_error when no equilibrium is found from the guess.
ImState im_equilibrium(const ImInput& u,
                       const ImPhysicalParams& p,
                       const ImState& guess = {1.0, 0.0, 1.0});

enum class DerivativeMode { recorded, finite_difference };

/// Per-sample arrays feeding the conditional-posterior updates. y_ed, y_eq
/// and y_omega are state derivatives, y_id and y_iq the measured currents.
struct ImRegressionData {
    std::vector<double> ed, eq, id, iq, ud, uq, omega;
    std::vector<double> y_ed, y_eq, y_omega, y_id, y_iq;
    double t0 = 1.0;  // torque base entering the speed equation

    std::size_t size() const { return ed.size(); }
    /// Throws std::invalid_argument on ragged arrays or empty data.
    void validate() const;
};

/// Maps a simulated trajectory onto regression targets. `recorded` evaluates
/// the model right-hand side exactly at each sample; `finite_difference`
/// uses central differences of the stored states (dropping both endpoints,
/// so the result has trajectory.size() - 2 rows).
ImRegressionData build_im_regression(const std::vector<ImSample>& trajectory,
                                     const ImPhysicalParams& p,
                                     double dt,
                                     DerivativeMode mode);

}  // namespace loadbayes
