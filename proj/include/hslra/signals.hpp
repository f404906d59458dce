#pragma once

#include <complex>
#include <cstdint>
#include <vector>

#include "hslra/lrr.hpp"
#include "hslra/series.hpp"

namespace hslra {

// One component of a polynomial-modulated damped sinusoid:
//   P(k) * exp(damping * k) * sin(2*pi*frequency*k + phase), k = 1..n.
// poly holds P's coefficients in increasing degree; frequency is in cycles
// per sample and must lie in [0, 0.5].
struct DampedTerm {
    std::vector<double> poly{1.0};
    double damping = 0.0;
    double frequency = 0.0;
    double phase = 0.0;
};

struct DampedSinusoidModel {
    std::vector<DampedTerm> terms;
};

// One exponential component P(k) * lambda^k of the canonical form. Complex
// lambda must be accompanied by its conjugate term so the series is real.
struct CanonicalTerm {
    std::complex<double> lambda{1.0, 0.0};
    std::vector<std::complex<double>> poly{{1.0, 0.0}};
};

// Head/tail transient deltas plus exponential terms:
//   p_k = a_k [k <= nu0] + b_{n+1-k} [k > n - nu_inf] + sum_j P_j(k) lambda_j^k.
// The structured rank of the embedding is nu0 + sum_j deg(P_j)+1 + nu_inf.
class CanonicalModel {
public:
    CanonicalModel(std::vector<double> head, std::vector<double> tail,
                   std::vector<CanonicalTerm> terms);

    const std::vector<double>& head() const { return head_; }
    const std::vector<double>& tail() const { return tail_; }
    const std::vector<CanonicalTerm>& terms() const { return terms_; }
    std::size_t rank() const;

private:
    std::vector<double> head_;
    std::vector<double> tail_;
    std::vector<CanonicalTerm> terms_;
};

enum class NoiseKind { white, alternating, red };

// white: i.i.d. Gaussian(0, sigma^2).
// alternating: deterministic c * (-1)^k, k = 1..n.
// red: AR(1), e_k = sigma * (alpha * e_{k-1} + eta_k), eta ~ N(0, 1 - alpha^2),
//      e_0 = 0, |alpha| < 1.
struct NoiseModel {
    NoiseKind kind = NoiseKind::white;
    double sigma = 1.0;
    double c = 0.0;
    double alpha = 0.0;
    std::uint64_t seed = 0;
};

// Extends the prefix by horizon samples with the forward form of the
// recurrence. Requires a continuable recurrence and a prefix of at least
// order() samples.
TimeSeries apply_lrr(const TimeSeries& prefix, const LrrCoefficients& lrr, std::size_t horizon);

TimeSeries generate_damped(const DampedSinusoidModel& model, std::size_t n);

TimeSeries generate_canonical(const CanonicalModel& model, std::size_t n);

TimeSeries generate_noise(const NoiseModel& model, std::size_t n);

} // namespace hslra
