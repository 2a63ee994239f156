#include "corral/action_set.hpp"

#include "corral/errors.hpp"

namespace corral {

ActionSet::ActionSet(std::size_t num_arms) : num_arms_(num_arms), dim_(0) {
    if (num_arms == 0) throw ContractViolation("action set must contain at least one arm");
}

ActionSet::ActionSet(std::size_t num_arms, std::size_t dim, std::vector<double> columns)
    : num_arms_(num_arms), dim_(dim), columns_(std::move(columns)) {
    if (num_arms == 0) throw ContractViolation("action set must contain at least one arm");
    if (columns_.size() != num_arms * dim) throw ContractViolation("action set feature block has wrong size");
}

ActionSet ActionSet::from_rows(const std::vector<std::vector<double>>& arms) {
    if (arms.empty()) throw ContractViolation("action set must contain at least one arm");
    const std::size_t k = arms.size();
    const std::size_t d = arms.front().size();
    std::vector<double> columns(k * d);
    for (std::size_t j = 0; j < k; ++j) {
        if (arms[j].size() != d) throw ContractViolation("arm vectors must share one dimension");
        for (std::size_t i = 0; i < d; ++i) columns[i * k + j] = arms[j][i];
    }
    return ActionSet(k, d, std::move(columns));
}

std::vector<double> ActionSet::arm_vector(std::size_t arm) const {
    std::vector<double> out(dim_);
    for (std::size_t i = 0; i < dim_; ++i) out[i] = feature(arm, i);
    return out;
}

}  // namespace corral
