#include "mianfis/error.hpp"
#include "mianfis/model.hpp"
#include "support.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <random>

using namespace mianfis;
using mianfis::testing::random_bag;
using mianfis::testing::random_model;
using mianfis::testing::transcribed_output;

namespace {

MiRule rule_of(std::vector<GaussianMf> premise, std::vector<double> b) { return {std::move(premise), std::move(b)}; }

}  // namespace

TEST(InstanceResponse, Examples) {
    const auto constant = rule_of({{0, 1}, {0, 1}}, {1, 0, 0});
    const std::vector<double> x{5.0, -2.0};
    EXPECT_EQ(instance_response(constant, x), 1.0);
    const auto proj = rule_of({{0, 1}, {0, 1}}, {0, 1, 0});
    const std::vector<double> y{3.0, 7.0};
    EXPECT_EQ(instance_response(proj, y), 3.0);
    const std::vector<double> short_x{1.0};
    EXPECT_THROW(instance_response(proj, short_x), DomainError);
}

TEST(InstanceResponse, MatchesDotProduct) {
    std::mt19937_64 rng(1);
    std::uniform_real_distribution<double> u(-3, 3);
    for (int t = 0; t < 50; ++t) {
        std::vector<double> b(4), x(3);
        for (auto& v : b) v = u(rng);
        for (auto& v : x) v = u(rng);
        const auto r = rule_of({{0, 1}, {0, 1}, {0, 1}}, b);
        EXPECT_EQ(instance_response(r, x), b[0] + b[1] * x[0] + b[2] * x[1] + b[3] * x[2]);
    }
}

TEST(TruthInstance, Examples) {
    const auto r = rule_of({{0.2, 0.5}, {-1, 2}}, {1, 0, 0});
    const std::vector<double> at_centers{0.2, -1};
    EXPECT_EQ(truth_instance(r, at_centers), 1.0);
    const auto unit = rule_of({{0, 1}, {0, 1}}, {1, 0, 0});
    const std::vector<double> ones{1, 1};
    EXPECT_NEAR(truth_instance(unit, ones), 0.367879, 1e-6);
    const std::vector<double> x{0.3, 0.9};
    EXPECT_EQ(truth_instance(r, x), mf_eval(r.premise[0], 0.3) * mf_eval(r.premise[1], 0.9));
}

TEST(Forward, SingleRuleNormalizesToOne) {
    std::mt19937_64 rng(2);
    const auto model = random_model(rng, 1, 2, 1.0);
    const auto bag = random_bag(rng, 2, 4, 1.0);
    const auto t = forward(model, bag);
    EXPECT_EQ(t.w_bar[0], 1.0);
    EXPECT_EQ(t.output, t.f[0]);
}

TEST(Forward, SingleInstanceSoftmaxIsIdentity) {
    std::mt19937_64 rng(3);
    const auto model = random_model(rng, 3, 2, 2.5);
    const auto bag = random_bag(rng, 2, 1, 0.0);
    const auto t = forward(model, bag);
    for (std::size_t i = 0; i < 3; ++i) {
        EXPECT_DOUBLE_EQ(t.w[i], truth_instance(model.rules[i], bag.instances.row(0)));
        EXPECT_DOUBLE_EQ(t.f[i], instance_response(model.rules[i], bag.instances.row(0)));
    }
}

TEST(Forward, AllOnesMaskMatchesPlainForward) {
    std::mt19937_64 rng(4);
    const auto model = random_model(rng, 3, 2, 1.0);
    const auto bag = random_bag(rng, 2, 3, 1.0);
    ForwardOptions opts;
    opts.mask = std::vector<double>(3, 1.0);
    const auto a = forward(model, bag);
    const auto b = forward(model, bag, opts);
    EXPECT_EQ(a.rule_out, b.rule_out);
    EXPECT_EQ(a.output, b.output);
}

TEST(Forward, HandSetTwoRuleModelMatchesTranscription) {
    MiAnfisModel model;
    model.alpha_premise = 1.0;
    model.alpha_consequent = 2.0;
    model.order = ConsequentOrder::first;
    model.rules.push_back(rule_of({{0.5, 0.5}, {0.5, 0.5}}, {0.2, 0.3, -0.1}));
    model.rules.push_back(rule_of({{1.5, 0.4}, {1.4, 0.6}}, {0.9, -0.2, 0.4}));
    Bag bag{"h", 1.0, InstanceMatrix::from_rows({{0.4, 0.6}, {1.3, 1.6}})};
    const double expected = transcribed_output(model, bag);
    EXPECT_NEAR(predict(model, bag), expected, 1e-12 * std::abs(expected));
}

TEST(Forward, RandomModelsMatchTranscription) {
    std::mt19937_64 rng(5);
    for (int t = 0; t < 50; ++t) {
        const auto model = random_model(rng, 1 + t % 3, 1 + t % 4, double(t % 4));
        const auto bag = random_bag(rng, model.dim(), 1 + t % 5, 1.0);
        const double expected = transcribed_output(model, bag);
        EXPECT_NEAR(predict(model, bag), expected, 1e-12 * std::max(1.0, std::abs(expected)));
    }
}

TEST(Forward, GuardFallsBackToUniform) {
    MiAnfisModel model;
    model.rules.push_back(rule_of({{0, 1e-3}}, {1, 0}));
    model.rules.push_back(rule_of({{1, 1e-3}}, {3, 0}));
    model.alpha_premise = 0.0;
    Bag far{"far", 0.0, InstanceMatrix::from_rows({{100.0}})};
    const auto t = forward(model, far);
    EXPECT_TRUE(t.guard_triggered);
    EXPECT_EQ(t.w_bar[0], 0.5);
    EXPECT_DOUBLE_EQ(t.output, 2.0);
}

TEST(Forward, RejectsBadOptions) {
    std::mt19937_64 rng(6);
    const auto model = random_model(rng, 2, 2, 1.0);
    const auto bag = random_bag(rng, 2, 2, 1.0);
    ForwardOptions both;
    both.mask = std::vector<double>{1, 0};
    both.test_scale = 0.5;
    EXPECT_THROW(forward(model, bag, both), DomainError);
    ForwardOptions short_mask;
    short_mask.mask = std::vector<double>{1};
    EXPECT_THROW(forward(model, bag, short_mask), DomainError);
    const auto wrong_dim = random_bag(rng, 3, 2, 1.0);
    EXPECT_THROW(predict(model, wrong_dim), DomainError);
}

TEST(Forward, TestScaleIsLinear) {
    std::mt19937_64 rng(7);
    const auto model = random_model(rng, 4, 3, 1.0);
    const auto bag = random_bag(rng, 3, 4, 1.0);
    ForwardOptions opts;
    opts.test_scale = 0.5;
    EXPECT_NEAR(forward(model, bag, opts).output, predict(model, bag) / 2, 1e-15);
}

TEST(Forward, OutputIsSumOfRuleOutputs) {
    std::mt19937_64 rng(8);
    const auto model = random_model(rng, 3, 2, 1.0);
    const auto bag = random_bag(rng, 2, 3, 1.0);
    const auto t = forward(model, bag);
    double s = 0, wb = 0;
    for (std::size_t i = 0; i < 3; ++i) {
        s += t.rule_out[i];
        wb += t.w_bar[i];
    }
    EXPECT_DOUBLE_EQ(t.output, s);
    EXPECT_NEAR(wb, 1.0, 1e-15);
}

TEST(ModelProperties, RulePermutationInvariance) {
    std::mt19937_64 rng(9);
    for (int t = 0; t < 20; ++t) {
        auto model = random_model(rng, 4, 2, 1.0);
        const auto bag = random_bag(rng, 2, 3, 1.0);
        const double before = predict(model, bag);
        std::reverse(model.rules.begin(), model.rules.end());
        EXPECT_NEAR(predict(model, bag), before, 1e-14);
    }
}

TEST(ModelProperties, InstancePermutationInvariance) {
    std::mt19937_64 rng(10);
    for (int t = 0; t < 20; ++t) {
        const auto model = random_model(rng, 3, 2, 2.0);
        const auto bag = random_bag(rng, 2, 5, 1.0);
        Bag rev{bag.id, bag.label, {}};
        for (std::size_t m = bag.size(); m-- > 0;) rev.instances.append_row(bag.instances.row(m));
        EXPECT_NEAR(predict(model, rev), predict(model, bag), 1e-14);
    }
}

TEST(ModelProperties, DuplicatingMaxInstanceAtLargeAlpha) {
    // One instance at the rule center, the rest well outside it, so the
    // softmax at alpha = 50 is already saturated on the maximum.
    MiAnfisModel model;
    model.alpha_premise = 50.0;
    model.rules.push_back(rule_of({{0.0, 0.5}, {1.0, 0.5}}, {1, 0, 0}));
    model.rules.push_back(rule_of({{2.0, 0.5}, {-1.0, 0.5}}, {0, 0, 0}));
    Bag bag{"b", 1.0, InstanceMatrix::from_rows({{0.05, 1.0}, {1.2, 0.0}, {2.0, -0.9}, {-1.5, 2.0}})};
    const auto t = forward(model, bag);
    for (std::size_t i = 0; i < 2; ++i) {
        std::size_t best = 0;
        for (std::size_t m = 1; m < bag.size(); ++m) {
            if (t.truth(i, m) > t.truth(i, best)) best = m;
        }
        Bag ext = bag;
        ext.instances.append_row(bag.instances.row(best));
        EXPECT_NEAR(forward(model, ext).w[i], t.w[i], 1e-6);
    }
}

TEST(ModelProperties, ZeroOrderConsequentIsBias) {
    std::mt19937_64 rng(12);
    const auto model = random_model(rng, 3, 2, 1.0, ConsequentOrder::zero);
    const auto bag = random_bag(rng, 2, 4, 1.0);
    const auto t = forward(model, bag);
    for (std::size_t i = 0; i < 3; ++i) EXPECT_DOUBLE_EQ(t.f[i], model.rules[i].consequent[0]);
}

TEST(ModelProperties, OutputIsConvexCombination) {
    std::mt19937_64 rng(13);
    for (int t = 0; t < 50; ++t) {
        const auto model = random_model(rng, 3, 2, 1.0);
        const auto bag = random_bag(rng, 2, 3, 1.0);
        const auto tr = forward(model, bag);
        EXPECT_GE(tr.output, *std::min_element(tr.f.begin(), tr.f.end()) - 1e-12);
        EXPECT_LE(tr.output, *std::max_element(tr.f.begin(), tr.f.end()) + 1e-12);
    }
}

TEST(ValidateModel, RejectsBadShapes) {
    MiAnfisModel empty;
    EXPECT_THROW(validate_model(empty), DomainError);
    MiAnfisModel m;
    m.rules.push_back(rule_of({{0, 1}}, {1, 0}));
    m.rules.push_back(rule_of({{0, 1}, {0, 1}}, {1, 0, 0}));
    EXPECT_THROW(validate_model(m), DomainError);
    MiAnfisModel z;
    z.order = ConsequentOrder::zero;
    z.rules.push_back(rule_of({{0, 1}}, {1, 0.5}));
    EXPECT_THROW(validate_model(z), DomainError);
}

TEST(ConsequentOrder, ParseRoundTrip) {
    EXPECT_EQ(parse_order(to_string(ConsequentOrder::zero)), ConsequentOrder::zero);
    EXPECT_EQ(parse_order("first"), ConsequentOrder::first);
    EXPECT_THROW(parse_order("second"), DomainError);
}
