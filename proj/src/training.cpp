#include "mianfis/training.hpp"

#include "mianfis/error.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

namespace mianfis {

std::string to_string(GradientMode mode) { return mode == GradientMode::exact ? "exact" : "paper"; }
std::string to_string(UpdateMode mode) { return mode == UpdateMode::batch ? "batch" : "online"; }
std::string to_string(StopReason reason) { return reason == StopReason::epsilon ? "epsilon" : "max_epochs"; }

GradientMode parse_gradient_mode(const std::string& text) {
    if (text == "exact") return GradientMode::exact;
    if (text == "paper") return GradientMode::paper;
    throw DomainError("unknown gradient mode '" + text + "' (expected exact or paper)");
}

UpdateMode parse_update_mode(const std::string& text) {
    if (text == "batch") return UpdateMode::batch;
    if (text == "online") return UpdateMode::online;
    throw DomainError("unknown update mode '" + text + "' (expected batch or online)");
}

void validate(const TrainConfig& cfg) {
    if (!(cfg.eta >= 0.0) || !std::isfinite(cfg.eta)) throw DomainError("learning rate must be finite and >= 0");
    if (cfg.epochs_max < 1) throw DomainError("epochs_max must be >= 1");
    if (!(cfg.epsilon > 0.0)) throw DomainError("epsilon must be > 0");
    if (!(cfg.dropout_p > 0.0 && cfg.dropout_p <= 1.0)) throw DomainError("dropout_p must lie in (0, 1]");
}

GradientVector::GradientVector(std::size_t rules, std::size_t dim)
    : rules(rules), dim(dim), dc(rules * dim, 0.0), dsigma(rules * dim, 0.0), db(rules * (dim + 1), 0.0) {}

GradientVector& GradientVector::operator+=(const GradientVector& other) {
    if (other.rules != rules || other.dim != dim) throw InternalError("gradient shape mismatch in accumulation");
    for (std::size_t i = 0; i < dc.size(); ++i) dc[i] += other.dc[i];
    for (std::size_t i = 0; i < dsigma.size(); ++i) dsigma[i] += other.dsigma[i];
    for (std::size_t i = 0; i < db.size(); ++i) db[i] += other.db[i];
    return *this;
}

double GradientVector::max_abs() const {
    double m = 0.0;
    for (double v : dc) m = std::max(m, std::abs(v));
    for (double v : dsigma) m = std::max(m, std::abs(v));
    for (double v : db) m = std::max(m, std::abs(v));
    return m;
}

double bag_loss(const MiAnfisModel& model, const Bag& bag) {
    const double e = bag.label - predict(model, bag);
    return e * e;
}

double dataset_sse(const MiAnfisModel& model, const BagDataset& ds, double dropout_p) {
    double sse = 0.0;
    for (const auto& bag : ds.bags) {
        const double out = dropout_p < 1.0 ? predict_with_dropout_scaling(model, bag, dropout_p) : predict(model, bag);
        const double e = bag.label - out;
        sse += e * e;
    }
    return sse;
}

double dataset_rmse(const MiAnfisModel& model, const BagDataset& ds, double dropout_p) {
    if (ds.bags.empty()) throw DomainError("RMSE of an empty dataset");
    return std::sqrt(dataset_sse(model, ds, dropout_p) / static_cast<double>(ds.bags.size()));
}

namespace {

// dS/db_j for S = softmax(x_1.b, ..., x_M.b), written out per instance the way
// the closed form expands it: terms are weighted by Z_m = sum_h exp(a (g_h - g_m)).
double consequent_partial_expanded(const Bag& bag, std::span<const double> g, std::size_t j, double alpha) {
    const std::size_t n = g.size();
    auto feature = [&](std::size_t m) { return j == 0 ? 1.0 : bag.instances(m, j - 1); };
    double total = 0.0;
    for (std::size_t m = 0; m < n; ++m) {
        double z = 0.0;
        double dz = 0.0;
        for (std::size_t h = 0; h < n; ++h) {
            const double e = std::exp(alpha * (g[h] - g[m]));
            z += e;
            dz += e * alpha * (feature(h) - feature(m));
        }
        total += (feature(m) * z - g[m] * dz) / (z * z);
    }
    return total;
}

}  // namespace

GradientVector bag_gradient(const MiAnfisModel& model, const Bag& bag, const ForwardTrace& trace,
                            GradientMode mode) {
    const std::size_t n_rules = model.rule_count();
    const std::size_t dim = model.dim();
    const std::size_t n_inst = bag.size();
    if (trace.rules != n_rules || trace.instances != n_inst || trace.mask.size() != n_rules ||
        trace.w.size() != n_rules || trace.r.size() != n_rules * n_inst) {
        throw InternalError("forward trace does not match model/bag shape");
    }

    GradientVector grad(n_rules, dim);
    const double delta = -2.0 * (bag.label - trace.output);
    if (delta == 0.0) return grad;

    const double wsum = trace.firing_sum;
    std::vector<double> mu(dim);
    std::vector<MfGradient> dmu(dim);

    for (std::size_t k = 0; k < n_rules; ++k) {
        const double h = trace.mask[k];
        if (h == 0.0) continue;
        const auto& rule = model.rules[k];

        // Premise: dO/dw_k, then through the layer-3 softmax and layer-2 product.
        if (!trace.guard_triggered) {
            double dout_dw = 0.0;
            if (mode == GradientMode::exact) {
                // sum_i h_i f_i dwbar_i/dw_k = (h_k f_k - sum_i h_i wbar_i f_i) / W
                dout_dw = (h * trace.f[k] - trace.output) / wsum;
            } else {
                dout_dw = h * trace.f[k] * (wsum - trace.w[k]) / (wsum * wsum);
            }
            const auto sg = softmax_grad(trace.truth_row(k), model.alpha_premise);
            for (std::size_t m = 0; m < n_inst; ++m) {
                const auto x = bag.instances.row(m);
                for (std::size_t j = 0; j < dim; ++j) {
                    mu[j] = mf_eval(rule.premise[j], x[j]);
                    dmu[j] = mf_grad(rule.premise[j], x[j]);
                }
                const double upstream = delta * dout_dw * sg[m];
                for (std::size_t j = 0; j < dim; ++j) {
                    double others = 1.0;
                    for (std::size_t d = 0; d < dim; ++d) {
                        if (d != j) others *= mu[d];
                    }
                    grad.c(k, j) += upstream * others * dmu[j].d_center;
                    grad.sigma(k, j) += upstream * others * dmu[j].d_sigma;
                }
            }
        }

        // Consequent: dO/df_k = h_k wbar_k, then through the layer-5 softmax.
        const double dout_df = h * trace.w_bar[k];
        const std::size_t n_coef = model.order == ConsequentOrder::zero ? 1 : dim + 1;
        if (mode == GradientMode::exact) {
            const auto sg = softmax_grad(trace.response_row(k), model.alpha_consequent);
            for (std::size_t m = 0; m < n_inst; ++m) {
                grad.b(k, 0) += delta * dout_df * sg[m];
                for (std::size_t j = 1; j < n_coef; ++j) {
                    grad.b(k, j) += delta * dout_df * sg[m] * bag.instances(m, j - 1);
                }
            }
        } else {
            for (std::size_t j = 0; j < n_coef; ++j) {
                grad.b(k, j) = delta * dout_df *
                               consequent_partial_expanded(bag, trace.response_row(k), j, model.alpha_consequent);
            }
        }
    }
    return grad;
}

double apply_gradient(MiAnfisModel& model, const GradientVector& grad, double eta, const std::vector<double>* gates) {
    const std::size_t dim = model.dim();
    if (grad.rules != model.rule_count() || grad.dim != dim) throw InternalError("gradient shape mismatch in update");
    double max_change = 0.0;
    auto track = [&](double before, double after) { max_change = std::max(max_change, std::abs(after - before)); };
    for (double v : grad.dc) if (!std::isfinite(v)) throw DomainError("training diverged: non-finite gradient (lower eta)");
    for (double v : grad.dsigma) if (!std::isfinite(v)) throw DomainError("training diverged: non-finite gradient (lower eta)");
    for (double v : grad.db) if (!std::isfinite(v)) throw DomainError("training diverged: non-finite gradient (lower eta)");

    for (std::size_t k = 0; k < model.rule_count(); ++k) {
        if (gates && (*gates)[k] == 0.0) continue;
        auto& rule = model.rules[k];
        for (std::size_t j = 0; j < dim; ++j) {
            auto& mf = rule.premise[j];
            const double c_old = mf.center();
            const double s_old = mf.sigma();
            mf.set_center(c_old - eta * grad.c(k, j));
            mf.set_sigma(std::max(s_old - eta * grad.sigma(k, j), kSigmaMin));
            track(c_old, mf.center());
            track(s_old, mf.sigma());
        }
        const std::size_t n_coef = model.order == ConsequentOrder::zero ? 1 : dim + 1;
        for (std::size_t j = 0; j < n_coef; ++j) {
            const double b_old = rule.consequent[j];
            rule.consequent[j] = b_old - eta * grad.b(k, j);
            track(b_old, rule.consequent[j]);
        }
    }
    return max_change;
}

namespace {

class MaskSampler {
public:
    MaskSampler(std::size_t rules, double keep_p, std::uint64_t seed)
        : mask_(rules, 1.0), keep_p_(keep_p), rng_(seed), coin_(keep_p) {}

    bool enabled() const { return keep_p_ < 1.0; }

    const std::vector<double>& next() {
        if (enabled()) {
            for (auto& h : mask_) h = coin_(rng_) ? 1.0 : 0.0;
        }
        return mask_;
    }

private:
    std::vector<double> mask_;
    double keep_p_;
    std::mt19937_64 rng_;
    std::bernoulli_distribution coin_;
};

bool any_kept(const std::vector<double>& mask) {
    return std::any_of(mask.begin(), mask.end(), [](double h) { return h != 0.0; });
}

}  // namespace

TrainResult train(MiAnfisModel model, const BagDataset& ds, const TrainConfig& cfg, const EpochCallback& on_epoch) {
    validate(cfg);
    validate_model(model);
    if (ds.bags.empty()) throw DomainError("cannot train on an empty dataset");
    require_valid(ds);
    if (ds.dim != model.dim()) {
        throw DomainError("dataset has " + std::to_string(ds.dim) + " features, model expects " +
                          std::to_string(model.dim()));
    }

    TrainReport report;
    report.seed = cfg.seed;
    MaskSampler sampler(model.rule_count(), cfg.dropout_p, cfg.seed);
    // Separate stream so the mask sequence does not depend on the update mode.
    std::mt19937_64 order_rng(cfg.seed ^ 0x9e3779b97f4a7c15ULL);
    std::vector<std::size_t> order(ds.bags.size());
    std::iota(order.begin(), order.end(), 0);

    for (int epoch = 1; epoch <= cfg.epochs_max; ++epoch) {
        const MiAnfisModel before = model;
        // An epoch in which every presentation dropped every rule carries no
        // information and must not trip the epsilon criterion.
        bool informative = false;

        if (cfg.update_mode == UpdateMode::batch) {
            const auto& mask = sampler.next();
            informative = any_kept(mask);
            GradientVector total(model.rule_count(), model.dim());
            for (const auto& bag : ds.bags) {
                ForwardOptions opts;
                if (sampler.enabled()) opts.mask = mask;
                const auto trace = forward(model, bag, opts);
                total += bag_gradient(model, bag, trace, cfg.gradient_mode);
            }
            apply_gradient(model, total, cfg.eta, sampler.enabled() ? &mask : nullptr);
        } else {
            // Datasets are commonly grouped by class; presenting them in file
            // order would end every epoch on a run of one label.
            std::shuffle(order.begin(), order.end(), order_rng);
            for (std::size_t idx : order) {
                const auto& bag = ds.bags[idx];
                const auto& mask = sampler.next();
                informative = informative || any_kept(mask);
                ForwardOptions opts;
                if (sampler.enabled()) opts.mask = mask;
                const auto trace = forward(model, bag, opts);
                apply_gradient(model, bag_gradient(model, bag, trace, cfg.gradient_mode), cfg.eta,
                               sampler.enabled() ? &mask : nullptr);
            }
        }

        double change = 0.0;
        for (std::size_t k = 0; k < model.rule_count(); ++k) {
            const auto& a = before.rules[k];
            const auto& b = model.rules[k];
            for (std::size_t j = 0; j < model.dim(); ++j) {
                change = std::max(change, std::abs(a.premise[j].center() - b.premise[j].center()));
                change = std::max(change, std::abs(a.premise[j].sigma() - b.premise[j].sigma()));
            }
            for (std::size_t j = 0; j < a.consequent.size(); ++j) {
                change = std::max(change, std::abs(a.consequent[j] - b.consequent[j]));
            }
        }

        report.rmse.push_back(dataset_rmse(model, ds, cfg.dropout_p));
        report.epochs = epoch;
        if (on_epoch) on_epoch(epoch, model);

        if (informative && change < cfg.epsilon) {
            report.stop_reason = StopReason::epsilon;
            break;
        }
        report.stop_reason = StopReason::max_epochs;
    }
    return {std::move(model), std::move(report)};
}

double predict_with_dropout_scaling(const MiAnfisModel& model, const Bag& bag, double p) {
    ForwardOptions opts;
    opts.test_scale = p;
    return forward(model, bag, opts).output;
}

}  // namespace mianfis
