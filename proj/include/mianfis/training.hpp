#pragma once

#include "mianfis/bag.hpp"
#include "mianfis/model.hpp"

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace mianfis {

/// exact: full chain rule through the normalization layer.
/// paper: diagonal normalization derivative only (no cross-rule terms) and
///        the expanded closed form for the consequent gradient.
enum class GradientMode { exact, paper };
enum class UpdateMode { batch, online };
enum class StopReason { epsilon, max_epochs };

std::string to_string(GradientMode mode);
std::string to_string(UpdateMode mode);
std::string to_string(StopReason reason);
GradientMode parse_gradient_mode(const std::string& text);
UpdateMode parse_update_mode(const std::string& text);

/// Lower bound applied to every MF width after each update.
inline constexpr double kSigmaMin = 1e-4;

struct TrainConfig {
    double eta = 0.1;
    int epochs_max = 150;
    double epsilon = 1e-6;
    double dropout_p = 1.0;  // probability a rule is kept; 1 disables dropout
    GradientMode gradient_mode = GradientMode::exact;
    UpdateMode update_mode = UpdateMode::batch;
    std::uint64_t seed = 0;
};

/// Throws DomainError on any out-of-range field.
void validate(const TrainConfig& cfg);

/// dE/dtheta laid out rule-major: dc and dsigma are R x D, db is R x (D + 1).
struct GradientVector {
    std::size_t rules = 0;
    std::size_t dim = 0;
    std::vector<double> dc;
    std::vector<double> dsigma;
    std::vector<double> db;

    GradientVector() = default;
    GradientVector(std::size_t rules, std::size_t dim);

    double& c(std::size_t k, std::size_t j) { return dc[k * dim + j]; }
    double& sigma(std::size_t k, std::size_t j) { return dsigma[k * dim + j]; }
    double& b(std::size_t k, std::size_t j) { return db[k * (dim + 1) + j]; }
    double c(std::size_t k, std::size_t j) const { return dc[k * dim + j]; }
    double sigma(std::size_t k, std::size_t j) const { return dsigma[k * dim + j]; }
    double b(std::size_t k, std::size_t j) const { return db[k * (dim + 1) + j]; }

    GradientVector& operator+=(const GradientVector& other);
    double max_abs() const;
};

struct TrainReport {
    std::vector<double> rmse;  // one entry per epoch, evaluated without dropout masks
    int epochs = 0;
    StopReason stop_reason = StopReason::max_epochs;
    std::uint64_t seed = 0;
};

struct TrainResult {
    MiAnfisModel model;
    TrainReport report;
};

/// (t_p - O_p)^2.
double bag_loss(const MiAnfisModel& model, const Bag& bag);

/// Sum of squared errors over the dataset. When dropout_p < 1 the outputs are
/// scaled by dropout_p, matching how a dropout-trained model is evaluated.
double dataset_sse(const MiAnfisModel& model, const BagDataset& ds, double dropout_p = 1.0);
double dataset_rmse(const MiAnfisModel& model, const BagDataset& ds, double dropout_p = 1.0);

/// Gradient of bag_loss for the forward pass recorded in `trace` (which must
/// come from forward(model, bag, mask)). Rules with mask 0 get zero rows.
GradientVector bag_gradient(const MiAnfisModel& model, const Bag& bag, const ForwardTrace& trace,
                            GradientMode mode);

/// theta <- theta - eta * grad, with sigma clamped to kSigmaMin. Rules whose
/// gate is 0 are left untouched. Returns the largest absolute parameter change.
double apply_gradient(MiAnfisModel& model, const GradientVector& grad, double eta,
                      const std::vector<double>* gates = nullptr);

using EpochCallback = std::function<void(int epoch, const MiAnfisModel& model)>;

/// Gradient-descent training from bag labels. Stops when the largest parameter
/// change of an epoch drops below epsilon or after epochs_max epochs.
TrainResult train(MiAnfisModel model, const BagDataset& ds, const TrainConfig& cfg,
                  const EpochCallback& on_epoch = {});

/// Inference for a model trained with rule dropout: every layer-5 output is weighted by p.
double predict_with_dropout_scaling(const MiAnfisModel& model, const Bag& bag, double p);

}  // namespace mianfis
