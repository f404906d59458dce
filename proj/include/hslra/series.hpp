#pragma once

#include <cstddef>
#include <vector>

#include "hslra/errors.hpp"

namespace hslra {

// Ordered real samples p_1..p_N. At least two samples, all finite. The
// default-constructed value is an empty placeholder for report structs; every
// operation that consumes a series revalidates its dimensions.
class TimeSeries {
public:
    TimeSeries() = default;
    explicit TimeSeries(std::vector<double> values);

    std::size_t length() const { return values_.size(); }
    double operator[](std::size_t i) const { return values_[i]; } // 0-based
    double& operator[](std::size_t i) { return values_[i]; }
    const std::vector<double>& values() const { return values_; }

    double l2_norm() const;

private:
    std::vector<double> values_;
};

// Embedding shape: a length-N series maps to a window x cols Hankel matrix
// with window + cols - 1 = N.
struct HankelStructure {
    HankelStructure(std::size_t n_total, std::size_t window);

    std::size_t n_total;
    std::size_t window;
    std::size_t cols;
};

} // namespace hslra
