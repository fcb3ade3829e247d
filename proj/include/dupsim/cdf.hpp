#pragma once

#include <vector>

namespace dupsim {

struct CdfPoint {
    double value = 0.0;
    double cum_prob = 0.0;
};

// Empirical CDF. Values sort ascending and equal values collapse into one
// point carrying the highest cumulative rank, so the curve is a function.
std::vector<CdfPoint> compute_cdf(std::vector<double> values);

// Smallest value whose cumulative probability reaches p.
double cdf_quantile(const std::vector<CdfPoint>& cdf, double p);
double quantile(std::vector<double> values, double p);

double mean(const std::vector<double>& values);

} // namespace dupsim
