#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace mianfis {

/// Row-major M x D block of instance features.
class InstanceMatrix {
public:
    InstanceMatrix() = default;
    InstanceMatrix(std::size_t rows, std::size_t cols);
    InstanceMatrix(std::size_t rows, std::size_t cols, std::vector<double> values);
    /// Builds from nested rows; rows may have unequal lengths, which
    /// validate_dataset reports instead of rejecting here.
    static InstanceMatrix from_rows(const std::vector<std::vector<double>>& rows);

    std::size_t rows() const { return row_lengths_.size(); }
    /// Nominal width (length of the first row, or the constructor width).
    std::size_t cols() const { return cols_; }

    std::span<const double> row(std::size_t i) const;
    std::span<double> row(std::size_t i);
    double operator()(std::size_t i, std::size_t j) const { return row(i)[j]; }
    double& operator()(std::size_t i, std::size_t j) { return row(i)[j]; }

    void append_row(std::span<const double> values);
    /// True if every row has exactly cols() entries.
    bool is_rectangular() const;

    bool operator==(const InstanceMatrix&) const = default;

private:
    std::size_t cols_ = 0;
    std::vector<double> values_;
    std::vector<std::size_t> row_offsets_;
    std::vector<std::size_t> row_lengths_;
};

struct Bag {
    std::string id;
    double label = 0.0;
    InstanceMatrix instances;

    std::size_t size() const { return instances.rows(); }
    bool operator==(const Bag&) const = default;
};

struct BagDataset {
    std::vector<Bag> bags;
    std::size_t dim = 0;

    std::size_t size() const { return bags.size(); }
    std::size_t instance_count() const;
    bool operator==(const BagDataset&) const = default;
};

enum class ViolationKind { empty_bag, dimension_mismatch, non_finite_value, duplicate_id, empty_dataset };

struct Violation {
    std::string bag_id;
    ViolationKind kind;
    std::string message;
};

std::string to_string(ViolationKind kind);

/// Lists every broken Bag/BagDataset invariant; empty iff the dataset is valid.
std::vector<Violation> validate_dataset(const BagDataset& ds);

/// Throws DataError describing the first violation, if any.
void require_valid(const BagDataset& ds);

/// Every instance becomes its own single-instance bag carrying its parent's label.
/// Ids are "<parent>#<index>".
BagDataset naive_expand(const BagDataset& ds);

/// Stacks every instance of every bag, in dataset order.
std::vector<std::vector<double>> collect_instances(const BagDataset& ds);

/// Instances of bags whose label is >= 0.5.
std::vector<std::vector<double>> collect_positive_instances(const BagDataset& ds);

BagDataset subset(const BagDataset& ds, std::span<const std::size_t> indices);

}  // namespace mianfis
