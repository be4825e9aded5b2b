#include "mianfis/model.hpp"

#include "mianfis/error.hpp"

#include <cmath>

namespace mianfis {

std::string to_string(ConsequentOrder order) { return order == ConsequentOrder::zero ? "zero" : "first"; }

ConsequentOrder parse_order(const std::string& text) {
    if (text == "zero" || text == "0") return ConsequentOrder::zero;
    if (text == "first" || text == "1") return ConsequentOrder::first;
    throw DomainError("unknown consequent order '" + text + "' (expected zero or first)");
}

void validate_model(const MiAnfisModel& model) {
    if (model.rules.empty()) throw DomainError("model needs at least one rule");
    if (!std::isfinite(model.alpha_premise) || !std::isfinite(model.alpha_consequent)) {
        throw DomainError("softmax alphas must be finite");
    }
    const std::size_t d = model.dim();
    if (d == 0) throw DomainError("model rules have no premise dimensions");
    for (std::size_t i = 0; i < model.rules.size(); ++i) {
        const auto& rule = model.rules[i];
        if (rule.premise.size() != d) {
            throw DomainError("rule " + std::to_string(i) + " has " + std::to_string(rule.premise.size()) +
                              " premise MFs, expected " + std::to_string(d));
        }
        if (rule.consequent.size() != d + 1) {
            throw DomainError("rule " + std::to_string(i) + " has " + std::to_string(rule.consequent.size()) +
                              " consequent coefficients, expected " + std::to_string(d + 1));
        }
        for (double b : rule.consequent) {
            if (!std::isfinite(b)) throw DomainError("rule " + std::to_string(i) + " has a non-finite consequent");
        }
        if (model.order == ConsequentOrder::zero) {
            for (std::size_t k = 1; k <= d; ++k) {
                if (rule.consequent[k] != 0.0) {
                    throw DomainError("zero-order rule " + std::to_string(i) + " has nonzero coefficient b" +
                                      std::to_string(k));
                }
            }
        }
    }
}

double instance_response(const MiRule& rule, std::span<const double> x) {
    if (x.size() != rule.dim() || rule.consequent.size() != rule.dim() + 1) {
        throw DomainError("instance has " + std::to_string(x.size()) + " features, rule expects " +
                          std::to_string(rule.dim()));
    }
    double s = rule.consequent[0];
    for (std::size_t k = 0; k < x.size(); ++k) s += rule.consequent[k + 1] * x[k];
    return s;
}

double truth_instance(const MiRule& rule, std::span<const double> x) {
    if (x.size() != rule.dim()) {
        throw DomainError("instance has " + std::to_string(x.size()) + " features, rule expects " +
                          std::to_string(rule.dim()));
    }
    double prod = 1.0;
    for (std::size_t j = 0; j < x.size(); ++j) prod *= mf_eval(rule.premise[j], x[j]);
    return prod;
}

ForwardTrace forward(const MiAnfisModel& model, const Bag& bag, const ForwardOptions& options) {
    const std::size_t n_rules = model.rule_count();
    const std::size_t n_inst = bag.size();
    if (n_rules == 0) throw DomainError("model has no rules");
    if (n_inst == 0) throw DomainError("bag '" + bag.id + "' has no instances");
    if (options.mask && options.test_scale) {
        throw DomainError("dropout mask and test-time scaling are mutually exclusive");
    }
    if (options.mask && options.mask->size() != n_rules) {
        throw DomainError("dropout mask has " + std::to_string(options.mask->size()) + " entries, model has " +
                          std::to_string(n_rules) + " rules");
    }
    if (options.test_scale && !(*options.test_scale > 0.0 && *options.test_scale <= 1.0)) {
        throw DomainError("test-time scale must lie in (0, 1]");
    }

    ForwardTrace t;
    t.rules = n_rules;
    t.instances = n_inst;
    t.r.resize(n_rules * n_inst);
    t.g.resize(n_rules * n_inst);
    t.w.resize(n_rules);
    t.w_bar.resize(n_rules);
    t.f.resize(n_rules);
    t.rule_out.resize(n_rules);
    t.mask = options.mask ? *options.mask : std::vector<double>(n_rules, 1.0);

    for (std::size_t i = 0; i < n_rules; ++i) {
        const auto& rule = model.rules[i];
        for (std::size_t m = 0; m < n_inst; ++m) {
            const auto x = bag.instances.row(m);
            t.r[i * n_inst + m] = truth_instance(rule, x);
            t.g[i * n_inst + m] = instance_response(rule, x);
        }
        t.w[i] = softmax_agg(t.truth_row(i), model.alpha_premise);
        t.f[i] = softmax_agg(t.response_row(i), model.alpha_consequent);
        t.firing_sum += t.w[i];
    }

    if (t.firing_sum < kFiringGuard) {
        t.guard_triggered = true;
        for (auto& v : t.w_bar) v = 1.0 / static_cast<double>(n_rules);
    } else {
        for (std::size_t i = 0; i < n_rules; ++i) t.w_bar[i] = t.w[i] / t.firing_sum;
    }

    const double scale = options.test_scale.value_or(1.0);
    for (std::size_t i = 0; i < n_rules; ++i) {
        const double gate = options.test_scale ? scale : t.mask[i];
        t.rule_out[i] = gate * t.w_bar[i] * t.f[i];
        t.output += t.rule_out[i];
    }
    return t;
}

double predict(const MiAnfisModel& model, const Bag& bag) { return forward(model, bag).output; }

}  // namespace mianfis
