#pragma once

#include "mianfis/bag.hpp"
#include "mianfis/model.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace mianfis {

using PointSet = std::vector<std::vector<double>>;

struct FcmOptions {
    double fuzzifier = 2.0;
    double tol = 1e-5;
    int max_iter = 100;
    std::uint64_t seed = 0;
};

struct FcmResult {
    PointSet centers;      // k x D
    PointSet memberships;  // n x k, rows sum to 1
    int iterations = 0;
    std::vector<double> objective;  // J_m after each iteration
};

/// Fuzzy c-means. Centers start at k distinct points drawn with the seed.
FcmResult fcm(const PointSet& points, std::size_t k, const FcmOptions& options = {});

/// J_m = sum_i sum_c u_ic^m ||x_i - v_c||^2.
double fcm_objective(const PointSet& points, const PointSet& centers, const PointSet& memberships, double m);

enum class InitStrategy { fcm, random };

std::string to_string(InitStrategy s);
InitStrategy parse_init_strategy(const std::string& text);

struct InitConfig {
    InitStrategy strategy = InitStrategy::fcm;
    double sigma_init = 1.0;
    double b_init = 1.0;
    double alpha_premise = 1.0;
    double alpha_consequent = 1.0;
    ConsequentOrder order = ConsequentOrder::zero;
    std::uint64_t seed = 0;
};

/// fcm: clusters instances of positive bags into R clusters and uses the
/// centers as MF centers. random: draws R centers uniformly in the per-dimension
/// range of all instances. Every sigma = sigma_init, b0 = b_init, b1..bD = 0.
MiAnfisModel init_model(const BagDataset& ds, std::size_t rules, const InitConfig& config);

struct PcaMap {
    std::vector<double> mean;                // D
    std::vector<std::vector<double>> basis;  // D rows x d columns, orthonormal columns
    std::vector<double> explained;           // d eigenvalues, descending

    std::size_t input_dim() const { return mean.size(); }
    std::size_t output_dim() const { return explained.size(); }
    std::vector<double> project(std::span<const double> x) const;
    bool operator==(const PcaMap&) const = default;
};

/// Mean-centers and eigendecomposes the sample covariance, keeping the top d directions.
PcaMap pca_fit(const PointSet& points, std::size_t d);

/// Projects every instance; bag ids, labels and instance counts are preserved.
BagDataset pca_apply(const PcaMap& map, const BagDataset& ds);

}  // namespace mianfis
