#include "mianfis/eval.hpp"

#include "mianfis/error.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <numeric>
#include <random>
#include <thread>

namespace mianfis {

BagClass classify(double score, double threshold) {
    return score >= threshold ? BagClass::positive : BagClass::negative;
}

bool is_positive_label(double label) { return label >= 0.5; }

void validate(const ExperimentConfig& cfg) {
    if (cfg.rules < 1) throw DomainError("number of rules must be >= 1");
    if (!(cfg.init.sigma_init > 0.0)) throw DomainError("sigma_init must be > 0");
    if (!std::isfinite(cfg.init.b_init)) throw DomainError("b_init must be finite");
    if (!std::isfinite(cfg.init.alpha_premise) || !std::isfinite(cfg.init.alpha_consequent)) {
        throw DomainError("softmax alphas must be finite");
    }
    if (cfg.pca_dims && *cfg.pca_dims < 1) throw DomainError("pca_dims must be >= 1");
    if (!std::isfinite(cfg.threshold)) throw DomainError("threshold must be finite");
    validate(cfg.train);
}

TrainedPipeline fit_pipeline(const BagDataset& train_set, const ExperimentConfig& cfg) {
    validate(cfg);
    require_valid(train_set);
    TrainedPipeline out;
    const BagDataset* data = &train_set;
    BagDataset projected;
    if (cfg.pca_dims) {
        out.pca = pca_fit(collect_instances(train_set), *cfg.pca_dims);
        projected = pca_apply(*out.pca, train_set);
        data = &projected;
    }
    auto initial = init_model(*data, cfg.rules, cfg.init);
    auto result = train(std::move(initial), *data, cfg.train);
    out.model = std::move(result.model);
    out.report = std::move(result.report);
    return out;
}

double pipeline_score(const TrainedPipeline& pipeline, const Bag& bag, double dropout_p) {
    const Bag* input = &bag;
    Bag projected;
    if (pipeline.pca) {
        projected.id = bag.id;
        projected.label = bag.label;
        for (std::size_t i = 0; i < bag.size(); ++i) {
            projected.instances.append_row(pipeline.pca->project(bag.instances.row(i)));
        }
        input = &projected;
    }
    return dropout_p < 1.0 ? predict_with_dropout_scaling(pipeline.model, *input, dropout_p)
                           : predict(pipeline.model, *input);
}

std::vector<std::size_t> assign_folds(const BagDataset& ds, std::size_t folds, std::uint64_t seed) {
    if (folds < 2) throw DomainError("cross-validation needs at least 2 folds");
    std::vector<std::size_t> pos;
    std::vector<std::size_t> neg;
    for (std::size_t i = 0; i < ds.bags.size(); ++i) {
        (is_positive_label(ds.bags[i].label) ? pos : neg).push_back(i);
    }
    if (pos.size() < folds || neg.size() < folds) {
        throw DomainError("each class needs at least " + std::to_string(folds) + " bags for " + std::to_string(folds) +
                          "-fold cross-validation (positives: " + std::to_string(pos.size()) +
                          ", negatives: " + std::to_string(neg.size()) + ")");
    }
    std::mt19937_64 rng(seed);
    std::vector<std::size_t> fold_of(ds.bags.size(), 0);
    std::size_t next = 0;
    for (auto* group : {&pos, &neg}) {
        std::shuffle(group->begin(), group->end(), rng);
        for (std::size_t idx : *group) {
            fold_of[idx] = next;
            next = (next + 1) % folds;
        }
    }
    return fold_of;
}

namespace {

struct FoldOutput {
    FoldSummary summary;
    std::vector<ScoredBag> scores;
};

template <typename Fn>
void run_parallel(std::size_t jobs, unsigned threads, Fn&& fn) {
    const unsigned workers = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(jobs)));
    if (workers == 1) {
        for (std::size_t j = 0; j < jobs; ++j) fn(j);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::vector<std::exception_ptr> errors(jobs);
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < workers; ++w) {
        pool.emplace_back([&] {
            for (std::size_t j = next++; j < jobs; j = next++) {
                try {
                    fn(j);
                } catch (...) {
                    errors[j] = std::current_exception();
                }
            }
        });
    }
    for (auto& t : pool) t.join();
    for (auto& e : errors) {
        if (e) std::rethrow_exception(e);
    }
}

CvResult run_cv(const BagDataset& ds, const ExperimentConfig& cfg, std::size_t folds, std::uint64_t seed,
                unsigned threads, bool naive) {
    validate(cfg);
    require_valid(ds);
    const auto fold_of = assign_folds(ds, folds, seed);

    std::vector<FoldOutput> outputs(folds);
    run_parallel(folds, threads, [&](std::size_t f) {
        std::vector<std::size_t> train_idx;
        std::vector<std::size_t> test_idx;
        for (std::size_t i = 0; i < ds.bags.size(); ++i) (fold_of[i] == f ? test_idx : train_idx).push_back(i);

        ExperimentConfig fold_cfg = cfg;
        fold_cfg.init.seed = cfg.init.seed + f;
        fold_cfg.train.seed = cfg.train.seed + f;
        BagDataset train_set = subset(ds, train_idx);
        if (naive) train_set = naive_expand(train_set);
        const auto pipeline = fit_pipeline(train_set, fold_cfg);

        auto& out = outputs[f];
        std::size_t correct = 0;
        for (std::size_t i : test_idx) {
            const auto& bag = ds.bags[i];
            const double score = pipeline_score(pipeline, bag, cfg.train.dropout_p);
            const bool predicted = classify(score, cfg.threshold) == BagClass::positive;
            if (predicted == is_positive_label(bag.label)) ++correct;
            out.scores.push_back({bag.id, score, bag.label, f});
        }
        out.summary.test_bags = test_idx.size();
        out.summary.accuracy = static_cast<double>(correct) / static_cast<double>(test_idx.size());
        out.summary.final_train_rmse = pipeline.report.rmse.empty() ? 0.0 : pipeline.report.rmse.back();
        out.summary.epochs = pipeline.report.epochs;
        out.summary.stop_reason = pipeline.report.stop_reason;
    });

    CvResult res;
    res.seed = seed;
    for (auto& o : outputs) {
        res.fold_accuracy.push_back(o.summary.accuracy);
        res.folds.push_back(o.summary);
        res.scores.insert(res.scores.end(), o.scores.begin(), o.scores.end());
    }
    const double n = static_cast<double>(folds);
    res.mean = std::accumulate(res.fold_accuracy.begin(), res.fold_accuracy.end(), 0.0) / n;
    double ss = 0.0;
    for (double a : res.fold_accuracy) ss += (a - res.mean) * (a - res.mean);
    res.stddev = std::sqrt(ss / (n - 1.0));
    return res;
}

}  // namespace

CvResult cross_validate(const BagDataset& ds, const ExperimentConfig& cfg, std::size_t folds, std::uint64_t seed,
                        unsigned threads) {
    return run_cv(ds, cfg, folds, seed, threads, false);
}

CvResult naive_baseline_cv(const BagDataset& ds, const ExperimentConfig& cfg, std::size_t folds, std::uint64_t seed,
                           unsigned threads) {
    return run_cv(ds, cfg, folds, seed, threads, true);
}

RocCurve roc(const std::vector<std::pair<double, bool>>& scores) {
    std::size_t n_pos = 0;
    for (const auto& s : scores) {
        if (!std::isfinite(s.first)) throw DomainError("ROC scores must be finite");
        if (s.second) ++n_pos;
    }
    const std::size_t n_neg = scores.size() - n_pos;
    if (n_pos == 0 || n_neg == 0) throw DomainError("ROC needs both positive and negative examples");

    auto sorted = scores;
    std::stable_sort(sorted.begin(), sorted.end(), [](const auto& a, const auto& b) { return a.first > b.first; });

    RocCurve curve;
    curve.points.push_back({0.0, 0.0});
    std::size_t tp = 0;
    std::size_t fp = 0;
    for (std::size_t i = 0; i < sorted.size();) {
        const double threshold = sorted[i].first;
        for (; i < sorted.size() && sorted[i].first == threshold; ++i) (sorted[i].second ? tp : fp)++;
        const RocPoint p{static_cast<double>(fp) / static_cast<double>(n_neg),
                         static_cast<double>(tp) / static_cast<double>(n_pos)};
        const auto& prev = curve.points.back();
        curve.auc += (p.false_alarm_rate - prev.false_alarm_rate) * (p.detection_rate + prev.detection_rate) * 0.5;
        curve.points.push_back(p);
    }
    return curve;
}

std::pair<std::vector<std::size_t>, std::vector<std::size_t>> split_indices(const BagDataset& ds, double train_ratio,
                                                                            std::uint64_t seed) {
    if (!(train_ratio > 0.0 && train_ratio < 1.0)) throw DomainError("split ratio must lie in (0, 1)");
    std::vector<std::size_t> pos;
    std::vector<std::size_t> neg;
    for (std::size_t i = 0; i < ds.bags.size(); ++i) {
        (is_positive_label(ds.bags[i].label) ? pos : neg).push_back(i);
    }
    std::mt19937_64 rng(seed);
    std::vector<std::size_t> train_idx;
    std::vector<std::size_t> test_idx;
    for (auto* group : {&pos, &neg}) {
        std::shuffle(group->begin(), group->end(), rng);
        auto n_test = static_cast<std::size_t>(std::lround(static_cast<double>(group->size()) * (1.0 - train_ratio)));
        if (group->size() >= 2) n_test = std::clamp<std::size_t>(n_test, 1, group->size() - 1);
        test_idx.insert(test_idx.end(), group->begin(), group->begin() + static_cast<std::ptrdiff_t>(n_test));
        train_idx.insert(train_idx.end(), group->begin() + static_cast<std::ptrdiff_t>(n_test), group->end());
    }
    std::sort(train_idx.begin(), train_idx.end());
    std::sort(test_idx.begin(), test_idx.end());
    return {train_idx, test_idx};
}

DropoutTraces dropout_comparison(const BagDataset& ds, const ExperimentConfig& cfg, double p, double train_ratio,
                                 std::uint64_t seed) {
    validate(cfg);
    require_valid(ds);
    if (!(p > 0.0 && p <= 1.0)) throw DomainError("dropout keep probability must lie in (0, 1]");
    if (cfg.pca_dims) throw DomainError("dropout comparison expects pre-projected data (pca_dims unsupported)");

    const auto [train_idx, test_idx] = split_indices(ds, train_ratio, seed);
    const auto train_set = subset(ds, train_idx);
    const auto test_set = subset(ds, test_idx);
    const auto initial = init_model(train_set, cfg.rules, cfg.init);

    DropoutTraces out;
    out.p = p;
    out.seed = seed;
    out.train_bags = train_set.size();
    out.test_bags = test_set.size();

    auto run_arm = [&](double keep, std::vector<double>& train_sse, std::vector<double>& test_sse) {
        TrainConfig tc = cfg.train;
        tc.dropout_p = keep;
        train(initial, train_set, tc, [&](int, const MiAnfisModel& m) {
            train_sse.push_back(dataset_sse(m, train_set, keep));
            test_sse.push_back(dataset_sse(m, test_set, keep));
        });
    };
    run_arm(p, out.train_sse_dropout, out.test_sse_dropout);
    run_arm(1.0, out.train_sse_plain, out.test_sse_plain);
    return out;
}

}  // namespace mianfis
