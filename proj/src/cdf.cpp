#include "dupsim/cdf.hpp"

#include "dupsim/types.hpp"

#include <algorithm>

namespace dupsim {

std::vector<CdfPoint> compute_cdf(std::vector<double> values) {
    if (values.empty()) throw ConfigError("cannot build a CDF from no samples");
    std::sort(values.begin(), values.end());
    const double n = static_cast<double>(values.size());
    std::vector<CdfPoint> cdf;
    cdf.reserve(values.size());
    for (std::size_t i = 0; i < values.size(); ++i) {
        const double p = static_cast<double>(i + 1) / n;
        if (!cdf.empty() && cdf.back().value == values[i])
            cdf.back().cum_prob = p; // ties keep the highest rank
        else
            cdf.push_back(CdfPoint{values[i], p});
    }
    return cdf;
}

double cdf_quantile(const std::vector<CdfPoint>& cdf, double p) {
    if (cdf.empty()) throw ConfigError("empty CDF");
    if (p < 0.0 || p > 1.0) throw ConfigError("quantile probability outside [0, 1]");
    for (const CdfPoint& pt : cdf)
        if (pt.cum_prob >= p) return pt.value;
    return cdf.back().value;
}

double quantile(std::vector<double> values, double p) {
    return cdf_quantile(compute_cdf(std::move(values)), p);
}

double mean(const std::vector<double>& values) {
    if (values.empty()) throw ConfigError("mean of no samples");
    double s = 0.0;
    for (double v : values) s += v;
    return s / static_cast<double>(values.size());
}

} // namespace dupsim
