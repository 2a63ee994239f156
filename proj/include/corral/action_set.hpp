#pragma once

#include <cstddef>
#include <memory>
#include <span>
#include <vector>

namespace corral {

// Arms available in one round. Feature-less (k-armed) sets have dim() == 0.
// Features are stored coordinate-major: columns[i * num_arms + j] is coordinate i of arm j,
// which is the layout the scoring kernels consume.
class ActionSet {
public:
    explicit ActionSet(std::size_t num_arms);
    ActionSet(std::size_t num_arms, std::size_t dim, std::vector<double> columns);

    // Builds from row-major arm vectors.
    static ActionSet from_rows(const std::vector<std::vector<double>>& arms);

    std::size_t num_arms() const { return num_arms_; }
    std::size_t dim() const { return dim_; }
    double feature(std::size_t arm, std::size_t coord) const { return columns_[coord * num_arms_ + arm]; }
    std::vector<double> arm_vector(std::size_t arm) const;
    std::span<const double> columns() const { return columns_; }

    bool contains(std::size_t arm) const { return arm < num_arms_; }

private:
    std::size_t num_arms_;
    std::size_t dim_;
    std::vector<double> columns_;
};

using ActionSetPtr = std::shared_ptr<const ActionSet>;

}  // namespace corral
