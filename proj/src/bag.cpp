#include "mianfis/bag.hpp"

#include "mianfis/error.hpp"

#include <cmath>
#include <unordered_set>

namespace mianfis {

InstanceMatrix::InstanceMatrix(std::size_t rows, std::size_t cols)
    : InstanceMatrix(rows, cols, std::vector<double>(rows * cols, 0.0)) {}

InstanceMatrix::InstanceMatrix(std::size_t rows, std::size_t cols, std::vector<double> values)
    : cols_(cols), values_(std::move(values)) {
    if (values_.size() != rows * cols) {
        throw DomainError("InstanceMatrix: expected " + std::to_string(rows * cols) + " values, got " +
                          std::to_string(values_.size()));
    }
    row_offsets_.reserve(rows);
    row_lengths_.assign(rows, cols);
    for (std::size_t i = 0; i < rows; ++i) row_offsets_.push_back(i * cols);
}

InstanceMatrix InstanceMatrix::from_rows(const std::vector<std::vector<double>>& rows) {
    InstanceMatrix m;
    if (!rows.empty()) m.cols_ = rows.front().size();
    for (const auto& r : rows) m.append_row(r);
    return m;
}

std::span<const double> InstanceMatrix::row(std::size_t i) const {
    return {values_.data() + row_offsets_[i], row_lengths_[i]};
}

std::span<double> InstanceMatrix::row(std::size_t i) {
    return {values_.data() + row_offsets_[i], row_lengths_[i]};
}

void InstanceMatrix::append_row(std::span<const double> values) {
    if (row_lengths_.empty() && values_.empty() && cols_ == 0) cols_ = values.size();
    row_offsets_.push_back(values_.size());
    row_lengths_.push_back(values.size());
    values_.insert(values_.end(), values.begin(), values.end());
}

bool InstanceMatrix::is_rectangular() const {
    for (std::size_t len : row_lengths_) {
        if (len != cols_) return false;
    }
    return true;
}

std::size_t BagDataset::instance_count() const {
    std::size_t n = 0;
    for (const auto& b : bags) n += b.size();
    return n;
}

std::string to_string(ViolationKind kind) {
    switch (kind) {
        case ViolationKind::empty_bag: return "empty-bag";
        case ViolationKind::dimension_mismatch: return "dimension-mismatch";
        case ViolationKind::non_finite_value: return "non-finite-value";
        case ViolationKind::duplicate_id: return "duplicate-id";
        case ViolationKind::empty_dataset: return "empty-dataset";
    }
    return "unknown";
}

std::vector<Violation> validate_dataset(const BagDataset& ds) {
    std::vector<Violation> out;
    std::unordered_set<std::string> seen;
    for (const auto& bag : ds.bags) {
        if (!seen.insert(bag.id).second) {
            out.push_back({bag.id, ViolationKind::duplicate_id, "bag id '" + bag.id + "' appears more than once"});
        }
        if (!std::isfinite(bag.label)) {
            out.push_back({bag.id, ViolationKind::non_finite_value, "bag '" + bag.id + "' has a non-finite label"});
        }
        if (bag.size() == 0) {
            out.push_back({bag.id, ViolationKind::empty_bag, "bag '" + bag.id + "' has no instances"});
            continue;
        }
        bool finite = true;
        for (std::size_t i = 0; i < bag.size(); ++i) {
            auto row = bag.instances.row(i);
            if (row.size() != ds.dim) {
                out.push_back({bag.id, ViolationKind::dimension_mismatch,
                               "bag '" + bag.id + "' instance " + std::to_string(i) + " has " +
                                   std::to_string(row.size()) + " features, expected " + std::to_string(ds.dim)});
            }
            for (double v : row) finite = finite && std::isfinite(v);
        }
        if (!finite) {
            out.push_back({bag.id, ViolationKind::non_finite_value,
                           "bag '" + bag.id + "' contains a non-finite feature value"});
        }
    }
    return out;
}

void require_valid(const BagDataset& ds) {
    if (ds.bags.empty()) throw DomainError("dataset has no bags");
    auto violations = validate_dataset(ds);
    if (!violations.empty()) {
        std::string msg = "invalid dataset: " + violations.front().message;
        if (violations.size() > 1) msg += " (+" + std::to_string(violations.size() - 1) + " more)";
        throw DataError(msg);
    }
}

BagDataset naive_expand(const BagDataset& ds) {
    BagDataset out;
    out.dim = ds.dim;
    out.bags.reserve(ds.instance_count());
    for (const auto& bag : ds.bags) {
        for (std::size_t i = 0; i < bag.size(); ++i) {
            Bag single;
            single.id = bag.id + "#" + std::to_string(i);
            single.label = bag.label;
            single.instances.append_row(bag.instances.row(i));
            out.bags.push_back(std::move(single));
        }
    }
    return out;
}

namespace {

std::vector<std::vector<double>> stack(const BagDataset& ds, bool positives_only) {
    std::vector<std::vector<double>> pts;
    for (const auto& bag : ds.bags) {
        if (positives_only && bag.label < 0.5) continue;
        for (std::size_t i = 0; i < bag.size(); ++i) {
            auto r = bag.instances.row(i);
            pts.emplace_back(r.begin(), r.end());
        }
    }
    return pts;
}

}  // namespace

std::vector<std::vector<double>> collect_instances(const BagDataset& ds) { return stack(ds, false); }

std::vector<std::vector<double>> collect_positive_instances(const BagDataset& ds) { return stack(ds, true); }

BagDataset subset(const BagDataset& ds, std::span<const std::size_t> indices) {
    BagDataset out;
    out.dim = ds.dim;
    out.bags.reserve(indices.size());
    for (std::size_t i : indices) out.bags.push_back(ds.bags.at(i));
    return out;
}

}  // namespace mianfis
