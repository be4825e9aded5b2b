#pragma once

#include "mianfis/bag.hpp"

#include <array>
#include <cstdint>
#include <vector>

namespace mianfis {

using Point2 = std::array<double, 2>;

/// Two-concept synthetic multiple-instance problem in the plane.
struct SynthSpec {
    std::vector<Point2> concept_centers{{0.5, 0.5}, {1.5, 1.5}};
    double concept_sigma = 0.15;
    int bags_per_concept = 50;
    int negative_bags = 50;
    int instances_min = 2;
    int instances_max = 10;
    Point2 box_min{-0.5, -0.5};
    Point2 box_max{2.5, 2.5};
    double exclusion_radius = 2.0;  // multiples of concept_sigma
    std::uint64_t seed = 0;
};

void validate(const SynthSpec& spec);

/// Positive bags carry one instance within 1 sigma of their concept center
/// (at a random position in the bag); every other instance, and every instance
/// of a negative bag, is uniform in the box outside all exclusion disks.
/// Ids: "c<k>_<n>" for concept bags, "neg_<n>" for negatives.
BagDataset generate(const SynthSpec& spec);

}  // namespace mianfis
