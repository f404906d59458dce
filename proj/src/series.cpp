#include "hslra/series.hpp"

#include <cmath>

namespace hslra {

TimeSeries::TimeSeries(std::vector<double> values) : values_(std::move(values)) {
    if (values_.size() < 2) throw ArgumentError("time series needs at least two samples");
    for (double x : values_)
        if (!std::isfinite(x)) throw ArgumentError("time series samples must be finite");
}

double TimeSeries::l2_norm() const {
    double s = 0.0;
    for (double x : values_) s += x * x;
    return std::sqrt(s);
}

HankelStructure::HankelStructure(std::size_t n, std::size_t window_)
    : n_total(n), window(window_), cols(n - window_ + 1) {
    if (n < 2) throw ArgumentError("embedding needs a series of length at least two");
    if (window_ < 1 || window_ > n) throw ArgumentError("window must lie in [1, N]");
}

} // namespace hslra
