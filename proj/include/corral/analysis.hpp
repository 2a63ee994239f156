#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace corral {

// [lo, lo f, lo f^2, ...] up to and including the first value >= hi.
// Throws ContractViolation unless 0 < lo <= hi and factor > 1.
std::vector<double> make_geometric_grid(double lo, double hi, double factor);

struct RegretStep {
    double mean_reward;
    double step_optimum;
};

// Cumulative sum of (optimum - chosen mean). Uses means only, never realized rewards.
std::vector<double> pseudo_regret(std::span<const RegretStep> steps);

// Least-squares slope of log(value) against log(step) over steps beyond the first 10%.
// steps[i] is the abscissa of values[i]. Throws ContractViolation on a nonpositive value
// after the burn-in or when fewer than two points remain.
double sublinearity_slope(std::span<const double> steps, std::span<const double> values);
// Same with steps 1, 2, ..., n.
double sublinearity_slope(std::span<const double> values);

struct SeriesStats {
    std::string label;
    std::vector<std::size_t> steps;
    std::vector<double> mean;
    std::vector<double> std;  // population standard deviation across repetitions
    std::vector<double> finals;  // sorted final regrets

    double final_mean() const { return mean.empty() ? 0.0 : mean.back(); }
    double final_std() const { return std.empty() ? 0.0 : std.back(); }
    // Linear-interpolated quantile of the final regrets, q in [0, 1].
    double final_quantile(double q) const;
};

// per_rep[r][c] is repetition r's cumulative regret at checkpoint c. The result does not
// depend on the order of the repetitions.
SeriesStats aggregate_series(std::string label, std::vector<std::size_t> steps,
                             const std::vector<std::vector<double>>& per_rep);

// Spearman rank correlation (average ranks for ties).
double spearman(std::span<const double> x, std::span<const double> y);

}  // namespace corral
