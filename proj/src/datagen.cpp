#include "mianfis/datagen.hpp"

#include "mianfis/error.hpp"

#include <cmath>
#include <random>

namespace mianfis {

namespace {

constexpr int kMaxDraws = 1'000'000;

double dist(const Point2& a, const Point2& b) { return std::hypot(a[0] - b[0], a[1] - b[1]); }

class Sampler {
public:
    explicit Sampler(const SynthSpec& spec) : spec_(spec), rng_(spec.seed) {}

    int bag_size() {
        std::uniform_int_distribution<int> u(spec_.instances_min, spec_.instances_max);
        return u(rng_);
    }

    Point2 near_concept(const Point2& center) {
        std::normal_distribution<double> n(0.0, spec_.concept_sigma);
        for (int i = 0; i < kMaxDraws; ++i) {
            Point2 p{center[0] + n(rng_), center[1] + n(rng_)};
            if (dist(p, center) <= spec_.concept_sigma) return p;
        }
        throw DomainError("could not sample a point within one sigma of a concept");
    }

    Point2 background() {
        std::uniform_real_distribution<double> ux(spec_.box_min[0], spec_.box_max[0]);
        std::uniform_real_distribution<double> uy(spec_.box_min[1], spec_.box_max[1]);
        const double radius = spec_.exclusion_radius * spec_.concept_sigma;
        for (int i = 0; i < kMaxDraws; ++i) {
            Point2 p{ux(rng_), uy(rng_)};
            bool outside = true;
            for (const auto& c : spec_.concept_centers) outside = outside && dist(p, c) > radius;
            if (outside) return p;
        }
        throw DomainError("exclusion disks cover the sampling box; background rejection sampling did not terminate");
    }

    std::size_t pick(int n) {
        std::uniform_int_distribution<int> u(0, n - 1);
        return static_cast<std::size_t>(u(rng_));
    }

private:
    const SynthSpec& spec_;
    std::mt19937_64 rng_;
};

}  // namespace

void validate(const SynthSpec& spec) {
    if (spec.concept_centers.empty()) throw DomainError("synthetic spec needs at least one concept");
    if (!(spec.concept_sigma > 0.0)) throw DomainError("concept_sigma must be > 0");
    if (spec.bags_per_concept < 0 || spec.negative_bags < 0) throw DomainError("bag counts must be >= 0");
    if (spec.bags_per_concept == 0 && spec.negative_bags == 0) throw DomainError("synthetic spec produces no bags");
    if (spec.instances_min < 1) throw DomainError("instances_min must be >= 1");
    if (spec.instances_max < spec.instances_min) throw DomainError("instances_max must be >= instances_min");
    if (!(spec.box_min[0] < spec.box_max[0] && spec.box_min[1] < spec.box_max[1])) {
        throw DomainError("domain box must have positive extent");
    }
    if (!(spec.exclusion_radius >= 1.0)) throw DomainError("exclusion_radius must be >= 1");
}

BagDataset generate(const SynthSpec& spec) {
    validate(spec);
    Sampler s(spec);
    BagDataset ds;
    ds.dim = 2;

    auto add_row = [](Bag& bag, const Point2& p) { bag.instances.append_row(std::span<const double>(p)); };

    for (std::size_t k = 0; k < spec.concept_centers.size(); ++k) {
        for (int n = 0; n < spec.bags_per_concept; ++n) {
            Bag bag;
            bag.id = "c" + std::to_string(k + 1) + "_" + std::to_string(n);
            bag.label = 1.0;
            const int size = s.bag_size();
            const std::size_t slot = s.pick(size);
            for (int i = 0; i < size; ++i) {
                add_row(bag, static_cast<std::size_t>(i) == slot ? s.near_concept(spec.concept_centers[k]) : s.background());
            }
            ds.bags.push_back(std::move(bag));
        }
    }
    for (int n = 0; n < spec.negative_bags; ++n) {
        Bag bag;
        bag.id = "neg_" + std::to_string(n);
        bag.label = 0.0;
        const int size = s.bag_size();
        for (int i = 0; i < size; ++i) add_row(bag, s.background());
        ds.bags.push_back(std::move(bag));
    }
    return ds;
}

}  // namespace mianfis
