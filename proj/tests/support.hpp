#pragma once

// Shared helpers for the unit tests and the acceptance runner: random
// models/bags, a central-difference gradient, a straight-line forward
// transcription and a pair-counting AUC.

#include "mianfis/bag.hpp"
#include "mianfis/model.hpp"
#include "mianfis/training.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <utility>
#include <vector>

namespace mianfis::testing {

inline Bag random_bag(std::mt19937_64& rng, std::size_t dim, std::size_t m, double label) {
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    Bag bag;
    bag.id = "b";
    bag.label = label;
    for (std::size_t i = 0; i < m; ++i) {
        std::vector<double> x(dim);
        for (auto& v : x) v = u(rng);
        bag.instances.append_row(x);
    }
    return bag;
}

// Widths are kept moderate so the firing sum stays well above the guard.
inline MiAnfisModel random_model(std::mt19937_64& rng, std::size_t rules, std::size_t dim, double alpha,
                                 ConsequentOrder order = ConsequentOrder::first) {
    std::uniform_real_distribution<double> c(-1.0, 1.0);
    std::uniform_real_distribution<double> s(0.5, 1.5);
    std::uniform_real_distribution<double> b(-1.0, 1.0);
    MiAnfisModel model;
    model.alpha_premise = alpha;
    model.alpha_consequent = alpha;
    model.order = order;
    for (std::size_t r = 0; r < rules; ++r) {
        MiRule rule;
        for (std::size_t j = 0; j < dim; ++j) rule.premise.emplace_back(c(rng), s(rng));
        rule.consequent.assign(dim + 1, 0.0);
        rule.consequent[0] = b(rng);
        if (order == ConsequentOrder::first) {
            for (std::size_t j = 1; j <= dim; ++j) rule.consequent[j] = b(rng);
        }
        model.rules.push_back(std::move(rule));
    }
    return model;
}

// Central differences of bag_loss, same layout as GradientVector.
inline GradientVector numeric_gradient(const MiAnfisModel& model, const Bag& bag, double h = 1e-6) {
    GradientVector g(model.rule_count(), model.dim());
    auto diff = [&](auto&& set, double base) {
        MiAnfisModel plus = model;
        MiAnfisModel minus = model;
        set(plus, base + h);
        set(minus, base - h);
        return (bag_loss(plus, bag) - bag_loss(minus, bag)) / (2.0 * h);
    };
    for (std::size_t k = 0; k < model.rule_count(); ++k) {
        for (std::size_t j = 0; j < model.dim(); ++j) {
            const auto& mf = model.rules[k].premise[j];
            g.c(k, j) = diff([&](MiAnfisModel& m, double v) { m.rules[k].premise[j].set_center(v); }, mf.center());
            g.sigma(k, j) = diff([&](MiAnfisModel& m, double v) { m.rules[k].premise[j].set_sigma(v); }, mf.sigma());
        }
        const std::size_t n_coef = model.order == ConsequentOrder::zero ? 1 : model.dim() + 1;
        for (std::size_t j = 0; j < n_coef; ++j) {
            g.b(k, j) = diff([&](MiAnfisModel& m, double v) { m.rules[k].consequent[j] = v; },
                             model.rules[k].consequent[j]);
        }
    }
    return g;
}

inline bool close(double analytic, double numeric, double rel, double abs_floor) {
    const double err = std::abs(analytic - numeric);
    return err <= abs_floor || err <= rel * std::max(std::abs(analytic), std::abs(numeric));
}

inline bool gradients_close(const GradientVector& a, const GradientVector& b, double rel = 1e-5,
                            double abs_floor = 1e-8) {
    for (std::size_t i = 0; i < a.dc.size(); ++i) {
        if (!close(a.dc[i], b.dc[i], rel, abs_floor)) return false;
    }
    for (std::size_t i = 0; i < a.dsigma.size(); ++i) {
        if (!close(a.dsigma[i], b.dsigma[i], rel, abs_floor)) return false;
    }
    for (std::size_t i = 0; i < a.db.size(); ++i) {
        if (!close(a.db[i], b.db[i], rel, abs_floor)) return false;
    }
    return true;
}

// Layers 1-6 written out directly, with naive (unshifted) exponentials and no
// shared code with the library's forward pass.
inline double transcribed_output(const MiAnfisModel& model, const Bag& bag) {
    const std::size_t R = model.rules.size();
    const std::size_t M = bag.size();
    const std::size_t D = bag.instances.cols();
    std::vector<double> w(R), f(R);
    for (std::size_t i = 0; i < R; ++i) {
        const auto& rule = model.rules[i];
        double num_w = 0, den_w = 0, num_f = 0, den_f = 0;
        for (std::size_t m = 0; m < M; ++m) {
            double r = 1.0;
            double g = rule.consequent[0];
            for (std::size_t j = 0; j < D; ++j) {
                const double x = bag.instances(m, j);
                const double c = rule.premise[j].center();
                const double s = rule.premise[j].sigma();
                r *= std::exp(-((x - c) * (x - c)) / (2 * s * s));
                g += rule.consequent[j + 1] * x;
            }
            num_w += r * std::exp(model.alpha_premise * r);
            den_w += std::exp(model.alpha_premise * r);
            num_f += g * std::exp(model.alpha_consequent * g);
            den_f += std::exp(model.alpha_consequent * g);
        }
        w[i] = num_w / den_w;
        f[i] = num_f / den_f;
    }
    double total = 0;
    for (double v : w) total += v;
    double out = 0;
    for (std::size_t i = 0; i < R; ++i) out += (w[i] / total) * f[i];
    return out;
}

// Mann-Whitney statistic: fraction of (positive, negative) pairs ranked
// correctly, ties worth one half.
inline double pair_count_auc(const std::vector<std::pair<double, bool>>& scores) {
    double good = 0;
    double pairs = 0;
    for (const auto& p : scores) {
        if (!p.second) continue;
        for (const auto& n : scores) {
            if (n.second) continue;
            pairs += 1;
            if (p.first > n.first) good += 1;
            else if (p.first == n.first) good += 0.5;
        }
    }
    return good / pairs;
}

}  // namespace mianfis::testing
