#pragma once

#include "mianfis/bag.hpp"
#include "mianfis/init.hpp"
#include "mianfis/training.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace mianfis {

enum class BagClass { negative, positive };

/// positive iff score >= threshold.
BagClass classify(double score, double threshold = 0.5);

bool is_positive_label(double label);

/// Everything needed to go from raw bags to a trained model.
struct ExperimentConfig {
    std::size_t rules = 6;
    InitConfig init;
    TrainConfig train;
    std::optional<std::size_t> pca_dims;
    double threshold = 0.5;
};

void validate(const ExperimentConfig& cfg);

struct TrainedPipeline {
    MiAnfisModel model;
    std::optional<PcaMap> pca;
    TrainReport report;
};

/// Fits PCA (if configured) and the initial model on `train_set` only, then trains.
TrainedPipeline fit_pipeline(const BagDataset& train_set, const ExperimentConfig& cfg);

/// Bag score under the pipeline, applying the PCA projection and dropout scaling.
double pipeline_score(const TrainedPipeline& pipeline, const Bag& bag, double dropout_p);

struct FoldSummary {
    std::size_t test_bags = 0;
    double accuracy = 0.0;
    double final_train_rmse = 0.0;
    int epochs = 0;
    StopReason stop_reason = StopReason::max_epochs;
};

struct ScoredBag {
    std::string bag_id;
    double score = 0.0;
    double label = 0.0;
    std::size_t fold = 0;
};

struct CvResult {
    std::vector<double> fold_accuracy;
    double mean = 0.0;
    double stddev = 0.0;  // sample standard deviation over folds
    std::vector<FoldSummary> folds;
    std::vector<ScoredBag> scores;  // held-out scores in fold order
    std::uint64_t seed = 0;
};

/// Stratified fold index per bag. Each class is shuffled with the seed and
/// dealt round-robin, continuing the rotation across classes.
std::vector<std::size_t> assign_folds(const BagDataset& ds, std::size_t folds, std::uint64_t seed);

/// k-fold cross-validation of the multiple-instance pipeline. Folds may run on
/// up to `threads` workers; results are assembled in fold order.
CvResult cross_validate(const BagDataset& ds, const ExperimentConfig& cfg, std::size_t folds, std::uint64_t seed,
                        unsigned threads = 1);

/// Same protocol, but training folds are flattened to single-instance bags
/// first. Testing still scores intact bags.
CvResult naive_baseline_cv(const BagDataset& ds, const ExperimentConfig& cfg, std::size_t folds, std::uint64_t seed,
                           unsigned threads = 1);

struct RocPoint {
    double false_alarm_rate;
    double detection_rate;
};

struct RocCurve {
    std::vector<RocPoint> points;
    double auc = 0.0;
};

/// Threshold sweep over distinct scores (descending); tied scores form one step.
/// AUC by the trapezoid rule.
RocCurve roc(const std::vector<std::pair<double, bool>>& scores);

struct DropoutTraces {
    std::vector<double> train_sse_dropout;
    std::vector<double> test_sse_dropout;
    std::vector<double> train_sse_plain;
    std::vector<double> test_sse_plain;
    double p = 1.0;
    std::size_t train_bags = 0;
    std::size_t test_bags = 0;
    std::uint64_t seed = 0;
};

/// Random stratified split; returns (train indices, test indices). `train_ratio`
/// is the training fraction; each class keeps at least one bag on each side
/// when it has two or more.
std::pair<std::vector<std::size_t>, std::vector<std::size_t>> split_indices(const BagDataset& ds, double train_ratio,
                                                                            std::uint64_t seed);

/// Trains two networks from one initialization, with keep probability p and
/// without dropout, recording per-epoch train/test SSE. Evaluation never
/// samples masks; the dropout arm is scored with p-scaling.
DropoutTraces dropout_comparison(const BagDataset& ds, const ExperimentConfig& cfg, double p, double train_ratio,
                                 std::uint64_t seed);

}  // namespace mianfis
