#pragma once

#include "mianfis/bag.hpp"
#include "mianfis/fuzzy_math.hpp"

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace mianfis {

enum class ConsequentOrder { zero, first };

std::string to_string(ConsequentOrder order);
ConsequentOrder parse_order(const std::string& text);

/// One multiple-instance rule: a Gaussian premise per input dimension and a
/// linear consequent b0 + b1 x1 + ... + bD xD evaluated on every instance.
struct MiRule {
    std::vector<GaussianMf> premise;
    std::vector<double> consequent;  // D + 1 coefficients, bias first

    std::size_t dim() const { return premise.size(); }
    bool operator==(const MiRule&) const = default;
};

struct MiAnfisModel {
    std::vector<MiRule> rules;
    double alpha_premise = 1.0;
    double alpha_consequent = 1.0;
    ConsequentOrder order = ConsequentOrder::zero;

    std::size_t rule_count() const { return rules.size(); }
    std::size_t dim() const { return rules.empty() ? 0 : rules.front().dim(); }
    bool operator==(const MiAnfisModel&) const = default;
};

/// Throws DomainError if R < 1, dimensions disagree, or a zero-order rule has
/// nonzero slope coefficients.
void validate_model(const MiAnfisModel& model);

/// Sum of firing strengths below which normalization falls back to uniform weights.
inline constexpr double kFiringGuard = 1e-12;

/// Every intermediate quantity of one forward pass, kept for backprop.
/// Matrices are rule-major: index [i * M + m] for rule i, instance m.
struct ForwardTrace {
    std::size_t rules = 0;
    std::size_t instances = 0;
    std::vector<double> r;         // truth instances, R x M
    std::vector<double> w;         // firing strengths
    std::vector<double> w_bar;     // normalized firing strengths
    std::vector<double> g;         // per-instance consequent responses, R x M
    std::vector<double> f;         // combined consequent per rule
    std::vector<double> rule_out;  // layer-5 outputs
    std::vector<double> mask;      // dropout gates h_i (all 1 unless training)
    double output = 0.0;
    double firing_sum = 0.0;
    bool guard_triggered = false;

    double truth(std::size_t rule, std::size_t inst) const { return r[rule * instances + inst]; }
    double response(std::size_t rule, std::size_t inst) const { return g[rule * instances + inst]; }
    std::span<const double> truth_row(std::size_t rule) const { return {r.data() + rule * instances, instances}; }
    std::span<const double> response_row(std::size_t rule) const { return {g.data() + rule * instances, instances}; }
};

/// b0 + sum_k b_k x_k.
double instance_response(const MiRule& rule, std::span<const double> x);

/// Product of the premise memberships of one instance.
double truth_instance(const MiRule& rule, std::span<const double> x);

struct ForwardOptions {
    std::optional<std::vector<double>> mask;  // per-rule {0,1} gates (training)
    std::optional<double> test_scale;         // dropout probability p (inference)
};

ForwardTrace forward(const MiAnfisModel& model, const Bag& bag, const ForwardOptions& options = {});

double predict(const MiAnfisModel& model, const Bag& bag);

}  // namespace mianfis
