#include "hslra/lrr.hpp"

#include <cmath>

namespace hslra {

LrrCoefficients::LrrCoefficients(std::vector<double> theta) : theta_(std::move(theta)) {
    if (theta_.empty()) throw ArgumentError("recurrence coefficients must be nonempty");
    double norm = 0.0, peak = 0.0;
    for (double t : theta_) {
        if (!std::isfinite(t)) throw ArgumentError("recurrence coefficients must be finite");
        norm += t * t;
        peak = std::max(peak, std::abs(t));
    }
    if (peak == 0.0) throw ArgumentError("recurrence coefficients must not all vanish");
    norm = std::sqrt(norm);
    double lead = 0.0;
    for (double t : theta_) {
        if (std::abs(t) > 1e-14 * peak) {
            lead = t;
            break;
        }
    }
    const double scale = (lead < 0.0 ? -1.0 : 1.0) / norm;
    for (double& t : theta_) t *= scale;
}

bool LrrCoefficients::continuable(double tol) const {
    return std::abs(theta_.back()) > tol; // coefficients are unit-norm
}

std::vector<double> LrrCoefficients::monic() const {
    if (!continuable())
        throw NonContinuableError("trailing recurrence coefficient is zero; cannot solve forward");
    const double tr = theta_.back();
    std::vector<double> a(theta_.size() - 1);
    for (std::size_t k = 0; k + 1 < theta_.size(); ++k) a[k] = -theta_[k] / tr;
    return a;
}

} // namespace hslra
