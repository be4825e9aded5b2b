#pragma once

#include <span>
#include <vector>

namespace mianfis {

/// Gaussian membership function exp(-(x-c)^2 / (2 sigma^2)).
class GaussianMf {
public:
    GaussianMf(double center, double sigma);

    double center() const { return center_; }
    double sigma() const { return sigma_; }
    void set_center(double c);
    void set_sigma(double s);

    bool operator==(const GaussianMf&) const = default;

private:
    double center_;
    double sigma_;
};

struct MfGradient {
    double d_center;
    double d_sigma;
};

double mf_eval(const GaussianMf& mf, double x);

/// Partial derivatives of mf_eval with respect to (c, sigma).
MfGradient mf_grad(const GaussianMf& mf, double x);

/// Smooth maximum sum_i x_i e^{a x_i} / sum_j e^{a x_j}.
/// a = 0 gives the mean, a -> +inf the max, a -> -inf the min.
double softmax_agg(std::span<const double> xs, double alpha);

/// Normalized exponential weights e^{a x_i} / sum_j e^{a x_j} (max-shifted).
std::vector<double> softmax_weights(std::span<const double> xs, double alpha);

/// dS/dx_i = weight_i * (1 + a (x_i - S)).
std::vector<double> softmax_grad(std::span<const double> xs, double alpha);

}  // namespace mianfis
