#pragma once

#include "convapprox/norms.hpp"

#include <istream>
#include <string>
#include <vector>

namespace convapprox::cli {

/// Samples (x_i, y_i) of a 2 pi-periodic function over one period.
struct Samples {
    std::vector<double> x;
    std::vector<double> y;
};

/// Two columns per line, separated by a comma or whitespace. Lines starting with
/// '#' and a non-numeric first line (a header) are skipped.
Samples read_samples(std::istream& in);
Samples read_samples_file(const std::string& path);

/// Periodic cubic spline through the samples; x values must be strictly
/// increasing and span less than 2 pi.
PeriodicFunction periodic_spline(const Samples& s);

} // namespace convapprox::cli
