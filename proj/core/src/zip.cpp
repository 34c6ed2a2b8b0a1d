#include "loadbayes/zip.hpp"

#include <cmath>
#include <stdexcept>

namespace loadbayes {

bool ZipParams::is_normalized(double tol) const {
    return std::abs(alpha1 + alpha2 + alpha3 - 1.0) <= tol &&
           std::abs(alpha4 + alpha5 + alpha6 - 1.0) <= tol;
}

double zip_power(const ZipParams& params, double v, PowerKind which) {
    if (!(v > 0.0)) {
        throw std::domain_error("zip_power: voltage must be positive");
    }
    if (!(params.v0 > 0.0)) {
        throw std::domain_error("zip_power: reference voltage must be positive");
    }
    const double w = v / params.v0;
    if (which == PowerKind::active) {
        return params.p0 * (params.alpha1 * w * w + params.alpha2 * w + params.alpha3);
    }
    return params.q0 * (params.alpha4 * w * w + params.alpha5 * w + params.alpha6);
}

ZipSeries build_zip_series(const std::vector<double>& v,
                           const std::vector<double>& p,
                           double v0,
                           double p0) {
    if (v.size() != p.size()) {
        throw std::invalid_argument("build_zip_series: voltage and power length mismatch");
    }
    if (v.empty()) {
        throw std::invalid_argument("build_zip_series: empty series");
    }
    if (!(v0 > 0.0)) {
        throw std::invalid_argument("build_zip_series: reference voltage must be positive");
    }
    if (p0 == 0.0) {
        throw std::invalid_argument("build_zip_series: reference power must be nonzero");
    }
    ZipSeries series;
    series.x.reserve(v.size());
    series.y.reserve(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (!(v[i] > 0.0)) {
            throw std::invalid_argument("build_zip_series: voltages must be positive");
        }
        series.x.push_back(v[i] / v0);
        series.y.push_back(p[i] / p0);
    }
    return series;
}

}  // namespace loadbayes
