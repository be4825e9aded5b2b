#include "mianfis/datagen.hpp"
#include "mianfis/error.hpp"

#include <gtest/gtest.h>

#include <cmath>

using namespace mianfis;

namespace {

double dist(std::span<const double> x, const Point2& c) { return std::hypot(x[0] - c[0], x[1] - c[1]); }

}  // namespace

TEST(Generate, DefaultCounts) {
    const auto ds = generate({});
    EXPECT_EQ(ds.size(), 150u);
    EXPECT_EQ(ds.dim, 2u);
    int pos = 0;
    for (const auto& b : ds.bags) pos += b.label == 1.0;
    EXPECT_EQ(pos, 100);
    EXPECT_TRUE(validate_dataset(ds).empty());
}

TEST(Generate, Geometry) {
    SynthSpec spec;
    spec.seed = 5;
    const auto ds = generate(spec);
    const double excl = spec.exclusion_radius * spec.concept_sigma;
    for (const auto& bag : ds.bags) {
        EXPECT_GE(bag.size(), std::size_t(spec.instances_min));
        EXPECT_LE(bag.size(), std::size_t(spec.instances_max));
        std::size_t near = 0;
        for (std::size_t i = 0; i < bag.size(); ++i) {
            const auto x = bag.instances.row(i);
            EXPECT_GE(x[0], spec.box_min[0]);
            EXPECT_LE(x[0], spec.box_max[0]);
            EXPECT_GE(x[1], spec.box_min[1]);
            EXPECT_LE(x[1], spec.box_max[1]);
            bool outside_all = true;
            for (const auto& c : spec.concept_centers) outside_all = outside_all && dist(x, c) > excl;
            if (!outside_all) {
                ++near;
                EXPECT_EQ(bag.label, 1.0) << bag.id;
            }
        }
        if (bag.label == 1.0) {
            const auto& c = spec.concept_centers[bag.id[1] - '1'];
            bool close = false;
            for (std::size_t i = 0; i < bag.size(); ++i) close = close || dist(bag.instances.row(i), c) <= spec.concept_sigma;
            EXPECT_TRUE(close) << bag.id;
            EXPECT_EQ(near, 1u) << bag.id;
        }
    }
}

TEST(Generate, SeedDeterminism) {
    SynthSpec a;
    a.seed = 7;
    SynthSpec b = a;
    EXPECT_EQ(generate(a), generate(b));
    b.seed = 8;
    EXPECT_NE(generate(a), generate(b));
}

TEST(Generate, InvalidSpecs) {
    SynthSpec s;
    s.instances_min = 0;
    EXPECT_THROW(generate(s), DomainError);
    s = {};
    s.instances_max = 1;
    EXPECT_THROW(generate(s), DomainError);
    s = {};
    s.exclusion_radius = 0.5;
    EXPECT_THROW(generate(s), DomainError);
    s = {};
    s.concept_sigma = -1;
    EXPECT_THROW(generate(s), DomainError);
}

TEST(Generate, CoveredBoxFailsInsteadOfLooping) {
    SynthSpec s;
    s.concept_sigma = 2.0;
    s.bags_per_concept = 1;
    s.negative_bags = 1;
    EXPECT_THROW(generate(s), DomainError);
}
