#include "mianfis/fuzzy_math.hpp"

#include "mianfis/error.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace mianfis {

namespace {

void check_sigma(double s) {
    if (!(s > 0.0) || !std::isfinite(s)) {
        throw DomainError("Gaussian MF width must be positive and finite, got " + std::to_string(s));
    }
}

void check_input(double x) {
    if (!std::isfinite(x)) throw DomainError("membership input must be finite");
}

void check_list(std::span<const double> xs) {
    if (xs.empty()) throw DomainError("softmax of an empty list");
    for (double x : xs) {
        if (!std::isfinite(x)) throw DomainError("softmax input must be finite");
    }
}

}  // namespace

GaussianMf::GaussianMf(double center, double sigma) : center_(center), sigma_(sigma) {
    if (!std::isfinite(center)) throw DomainError("Gaussian MF center must be finite");
    check_sigma(sigma);
}

void GaussianMf::set_center(double c) {
    if (!std::isfinite(c)) throw DomainError("Gaussian MF center must be finite");
    center_ = c;
}

void GaussianMf::set_sigma(double s) {
    check_sigma(s);
    sigma_ = s;
}

double mf_eval(const GaussianMf& mf, double x) {
    check_input(x);
    const double d = x - mf.center();
    return std::exp(-(d * d) / (2.0 * mf.sigma() * mf.sigma()));
}

MfGradient mf_grad(const GaussianMf& mf, double x) {
    const double mu = mf_eval(mf, x);
    const double d = x - mf.center();
    const double s2 = mf.sigma() * mf.sigma();
    return {mu * d / s2, mu * d * d / (s2 * mf.sigma())};
}

std::vector<double> softmax_weights(std::span<const double> xs, double alpha) {
    check_list(xs);
    double shift = alpha * xs[0];
    for (double x : xs) shift = std::max(shift, alpha * x);
    std::vector<double> e(xs.size());
    double total = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        e[i] = std::exp(alpha * xs[i] - shift);
        total += e[i];
    }
    for (double& v : e) v /= total;
    return e;
}

double softmax_agg(std::span<const double> xs, double alpha) {
    check_list(xs);
    double shift = alpha * xs[0];
    for (double x : xs) shift = std::max(shift, alpha * x);
    double num = 0.0;
    double den = 0.0;
    for (double x : xs) {
        const double e = std::exp(alpha * x - shift);
        num += x * e;
        den += e;
    }
    // Unnormalized sums keep alpha = 0 an exact mean; the clamp only removes
    // last-bit rounding past the extremes.
    const auto [lo, hi] = std::minmax_element(xs.begin(), xs.end());
    return std::clamp(num / den, *lo, *hi);
}

std::vector<double> softmax_grad(std::span<const double> xs, double alpha) {
    auto p = softmax_weights(xs, alpha);
    const double s = softmax_agg(xs, alpha);
    for (std::size_t i = 0; i < xs.size(); ++i) p[i] *= 1.0 + alpha * (xs[i] - s);
    return p;
}

}  // namespace mianfis
