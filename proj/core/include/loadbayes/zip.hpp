#pragma once

#include <cstddef>
#include <vector>

namespace loadbayes {

enum class PowerKind { active, reactive };

/// Static load as a quadratic polynomial in normalized voltage: constant
/// impedance, constant current and constant power fractions, anchored at the
/// reference operating point (p0, q0, v0). alpha1..3 describe active power,
/// alpha4..6 reactive power; a normalized parameter set has each triple
/// summing to one.
struct ZipParams {
    double alpha1 = 0.0;
    double alpha2 = 0.0;
    double alpha3 = 1.0;
    double alpha4 = 0.0;
    double alpha5 = 0.0;
    double alpha6 = 1.0;
    double p0 = 1.0;
    double q0 = 0.0;
    double v0 = 1.0;

    bool is_normalized(double tol = 1e-9) const;
};

/// Model power at voltage v: p0 * (a1*w^2 + a2*w + a3) with w = v / v0
/// (q0 and alpha4..6 for reactive). Throws std::domain_error if v or v0 is
/// not positive.
double zip_power(const ZipParams& params, double v, PowerKind which);

/// Voltage/power samples normalized by a reference point: x = v / v0,
/// y = p / p0.
struct ZipSeries {
    std::vector<double> x;
    std::vector<double> y;

    std::size_t size() const { return x.size(); }
};

ZipSeries build_zip_series(const std::vector<double>& v,
                           const std::vector<double>& p,
                           double v0,
                           double p0);

}  // namespace loadbayes
