#pragma once

#include <cmath>
#include <utility>
#include <vector>

#include "dsocs/errors.hpp"

namespace dsocs {

/// Least-squares slope of log(error) against log(h). This is the exponent p
/// of an error model error ~ C * h^p.
inline double loglog_slope(const std::vector<std::pair<double, double>>& pairs) {
    if (pairs.size() < 2)
        throw InsufficientDataError("loglog_slope: need at least two (h, error) pairs");
    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
    for (const auto& [h, err] : pairs) {
        if (!(h > 0.0) || !(err > 0.0))
            throw NonpositiveValueError("loglog_slope: h and error must be positive");
        const double x = std::log(h);
        const double y = std::log(err);
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    const double n = static_cast<double>(pairs.size());
    const double denom = n * sxx - sx * sx;
    if (denom == 0.0)
        throw InsufficientDataError("loglog_slope: all h values identical");
    return (n * sxy - sx * sy) / denom;
}

} // namespace dsocs
