#include "hslra/signals.hpp"

#include <algorithm>
#include <cmath>

#include "hslra/rng.hpp"

namespace hslra {

namespace {
constexpr double kTwoPi = 2.0 * 3.14159265358979323846;

std::complex<double> eval_poly(const std::vector<std::complex<double>>& c, double k) {
    std::complex<double> acc{0.0, 0.0};
    for (std::size_t t = c.size(); t-- > 0;) acc = acc * k + c[t];
    return acc;
}

double eval_poly(const std::vector<double>& c, double k) {
    double acc = 0.0;
    for (std::size_t t = c.size(); t-- > 0;) acc = acc * k + c[t];
    return acc;
}
} // namespace

CanonicalModel::CanonicalModel(std::vector<double> head, std::vector<double> tail,
                               std::vector<CanonicalTerm> terms)
    : head_(std::move(head)), tail_(std::move(tail)), terms_(std::move(terms)) {
    if (!head_.empty() && head_.back() == 0.0)
        throw ArgumentError("last head coefficient must be nonzero");
    if (!tail_.empty() && tail_.back() == 0.0)
        throw ArgumentError("last tail coefficient must be nonzero");
    for (const auto& t : terms_) {
        if (std::abs(t.lambda) == 0.0) throw ArgumentError("exponential base must be nonzero");
        if (t.poly.empty()) throw ArgumentError("exponential term needs a polynomial");
    }
    // every strictly complex term needs a conjugate partner so p is real
    std::vector<bool> used(terms_.size(), false);
    for (std::size_t i = 0; i < terms_.size(); ++i) {
        if (used[i] || std::abs(terms_[i].lambda.imag()) <= 1e-14 * std::abs(terms_[i].lambda))
            continue;
        const double scale = std::abs(terms_[i].lambda);
        bool matched = false;
        for (std::size_t j = i + 1; j < terms_.size() && !matched; ++j) {
            if (used[j] || terms_[j].poly.size() != terms_[i].poly.size()) continue;
            if (std::abs(terms_[j].lambda - std::conj(terms_[i].lambda)) > 1e-12 * scale) continue;
            bool conj_poly = true;
            for (std::size_t t = 0; t < terms_[i].poly.size(); ++t)
                if (std::abs(terms_[j].poly[t] - std::conj(terms_[i].poly[t])) >
                    1e-12 * (1.0 + std::abs(terms_[i].poly[t])))
                    conj_poly = false;
            if (conj_poly) {
                used[i] = used[j] = true;
                matched = true;
            }
        }
        if (!matched)
            throw ArgumentError("complex exponential bases must come in conjugate pairs "
                                "with conjugate polynomials");
    }
}

std::size_t CanonicalModel::rank() const {
    std::size_t d = head_.size() + tail_.size();
    for (const auto& t : terms_) d += t.poly.size();
    return d;
}

TimeSeries apply_lrr(const TimeSeries& prefix, const LrrCoefficients& lrr, std::size_t horizon) {
    const std::size_t r = lrr.order();
    if (prefix.length() < r) throw ArgumentError("prefix shorter than recurrence order");
    std::vector<double> a = lrr.monic(); // throws NonContinuableError when theta_r ~ 0
    std::vector<double> out = prefix.values();
    out.reserve(out.size() + horizon);
    for (std::size_t i = 0; i < horizon; ++i) {
        double next = 0.0;
        const std::size_t base = out.size() - r;
        for (std::size_t k = 0; k < r; ++k) next += a[k] * out[base + k];
        out.push_back(next);
    }
    return TimeSeries(std::move(out));
}

TimeSeries generate_damped(const DampedSinusoidModel& model, std::size_t n) {
    for (const auto& t : model.terms) {
        if (t.poly.empty()) throw ArgumentError("sinusoid term needs polynomial coefficients");
        if (t.frequency < 0.0 || t.frequency > 0.5)
            throw ArgumentError("frequency must lie in [0, 0.5] cycles per sample");
    }
    std::vector<double> out(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        const double k = static_cast<double>(i + 1);
        double v = 0.0;
        for (const auto& t : model.terms)
            v += eval_poly(t.poly, k) * std::exp(t.damping * k) *
                 std::sin(kTwoPi * t.frequency * k + t.phase);
        out[i] = v;
    }
    return TimeSeries(std::move(out));
}

TimeSeries generate_canonical(const CanonicalModel& model, std::size_t n) {
    std::vector<double> out(n, 0.0);
    for (std::size_t j = 0; j < model.head().size() && j < n; ++j) out[j] += model.head()[j];
    for (std::size_t l = 0; l < model.tail().size() && l < n; ++l)
        out[n - 1 - l] += model.tail()[l];
    for (const auto& term : model.terms()) {
        std::complex<double> pw{1.0, 0.0};
        for (std::size_t i = 0; i < n; ++i) {
            const double k = static_cast<double>(i + 1);
            pw *= term.lambda;
            out[i] += (eval_poly(term.poly, k) * pw).real();
        }
    }
    return TimeSeries(std::move(out));
}

TimeSeries generate_noise(const NoiseModel& model, std::size_t n) {
    if (model.sigma < 0.0 || model.c < 0.0) throw ArgumentError("noise scale must be nonnegative");
    if (std::abs(model.alpha) >= 1.0) throw ArgumentError("AR coefficient must satisfy |alpha| < 1");
    std::vector<double> out(n, 0.0);
    switch (model.kind) {
    case NoiseKind::alternating:
        for (std::size_t i = 0; i < n; ++i) out[i] = (i % 2 == 0 ? -model.c : model.c);
        break;
    case NoiseKind::white: {
        Rng rng(model.seed);
        for (std::size_t i = 0; i < n; ++i) out[i] = model.sigma * rng.gaussian();
        break;
    }
    case NoiseKind::red: {
        Rng rng(model.seed);
        const double eta_sd = std::sqrt(1.0 - model.alpha * model.alpha);
        double prev = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            prev = model.sigma * (model.alpha * prev + eta_sd * rng.gaussian());
            out[i] = prev;
        }
        break;
    }
    }
    return TimeSeries(std::move(out));
}

} // namespace hslra
