#pragma once

#include <cstddef>
#include <vector>

#include "hslra/errors.hpp"

namespace hslra {

// Coefficients theta_0..theta_r of a linear recurrence
//   theta_0 p_k + theta_1 p_{k+1} + ... + theta_r p_{k+r} = 0.
// Stored normalized: unit Euclidean length, first nonzero entry positive.
class LrrCoefficients {
public:
    explicit LrrCoefficients(std::vector<double> theta);

    std::size_t order() const { return theta_.size() - 1; } // r
    const std::vector<double>& theta() const { return theta_; }
    double theta(std::size_t k) const { return theta_[k]; }

    // True when theta_r is nonzero at working precision, i.e. the recurrence
    // can be solved for p_{k+r} and run forward.
    bool continuable(double tol = 1e-12) const;

    // Monic forward coefficients a_k = -theta_k / theta_r, valid when
    // continuable(); p_{k+r} = a_{r-1} p_{k+r-1} + ... + a_0 p_k.
    std::vector<double> monic() const;

private:
    std::vector<double> theta_;
};

} // namespace hslra
