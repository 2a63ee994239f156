#include "corral/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "corral/errors.hpp"

namespace corral {

std::vector<double> make_geometric_grid(double lo, double hi, double factor) {
    if (!(factor > 1.0)) throw ContractViolation("grid factor must exceed 1");
    if (!(lo > 0.0 && lo <= hi)) throw ContractViolation("grid needs 0 < lo <= hi");
    std::vector<double> grid{lo};
    // Relative slack so that hi = lo f^n is not overshot by rounding.
    const double stop = hi * (1.0 - 1e-12);
    for (std::size_t i = 1; grid.back() < stop; ++i) grid.push_back(lo * std::pow(factor, static_cast<double>(i)));
    return grid;
}

std::vector<double> pseudo_regret(std::span<const RegretStep> steps) {
    std::vector<double> series(steps.size());
    double total = 0.0;
    for (std::size_t i = 0; i < steps.size(); ++i) {
        const double gap = steps[i].step_optimum - steps[i].mean_reward;
        if (gap < -1e-12) throw InvariantViolation("negative per-step pseudo-regret");
        total += std::max(gap, 0.0);
        series[i] = total;
    }
    return series;
}

double sublinearity_slope(std::span<const double> steps, std::span<const double> values) {
    if (steps.size() != values.size()) throw ContractViolation("steps and values differ in length");
    const std::size_t n = values.size();
    const std::size_t burn_in = n / 10;
    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
    std::size_t count = 0;
    for (std::size_t i = burn_in; i < n; ++i) {
        if (!(values[i] > 0.0) || !(steps[i] > 0.0))
            throw ContractViolation("regret series must be positive after the burn-in");
        const double x = std::log(steps[i]);
        const double y = std::log(values[i]);
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
        ++count;
    }
    if (count < 2) throw ContractViolation("too few points for a slope");
    const double c = static_cast<double>(count);
    return (c * sxy - sx * sy) / (c * sxx - sx * sx);
}

double sublinearity_slope(std::span<const double> values) {
    std::vector<double> steps(values.size());
    std::iota(steps.begin(), steps.end(), 1.0);
    return sublinearity_slope(steps, values);
}

double SeriesStats::final_quantile(double q) const {
    if (finals.empty()) return 0.0;
    const double pos = std::clamp(q, 0.0, 1.0) * static_cast<double>(finals.size() - 1);
    const auto lo = static_cast<std::size_t>(std::floor(pos));
    const std::size_t hi = std::min(lo + 1, finals.size() - 1);
    const double frac = pos - static_cast<double>(lo);
    return finals[lo] + frac * (finals[hi] - finals[lo]);
}

SeriesStats aggregate_series(std::string label, std::vector<std::size_t> steps,
                             const std::vector<std::vector<double>>& per_rep) {
    if (per_rep.empty()) throw ContractViolation("nothing to aggregate");
    SeriesStats out;
    out.label = std::move(label);
    out.steps = std::move(steps);
    const std::size_t c = out.steps.size();
    out.mean.resize(c);
    out.std.resize(c);
    std::vector<double> column(per_rep.size());
    for (std::size_t k = 0; k < c; ++k) {
        for (std::size_t r = 0; r < per_rep.size(); ++r) {
            if (per_rep[r].size() != c) throw ContractViolation("repetitions disagree on checkpoints");
            column[r] = per_rep[r][k];
        }
        // Sorted summation makes the result independent of repetition order.
        std::sort(column.begin(), column.end());
        const double n = static_cast<double>(column.size());
        double sum = 0.0;
        for (double v : column) sum += v;
        const double mean = sum / n;
        double ss = 0.0;
        for (double v : column) ss += (v - mean) * (v - mean);
        out.mean[k] = mean;
        out.std[k] = std::sqrt(ss / n);
        if (k + 1 == c) out.finals = column;
    }
    return out;
}

namespace {

std::vector<double> average_ranks(std::span<const double> v) {
    std::vector<std::size_t> order(v.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return v[a] < v[b]; });
    std::vector<double> ranks(v.size());
    for (std::size_t i = 0; i < order.size();) {
        std::size_t j = i;
        while (j + 1 < order.size() && v[order[j + 1]] == v[order[i]]) ++j;
        const double rank = 0.5 * static_cast<double>(i + j) + 1.0;
        for (std::size_t t = i; t <= j; ++t) ranks[order[t]] = rank;
        i = j + 1;
    }
    return ranks;
}

}  // namespace

double spearman(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size() || x.size() < 2) throw ContractViolation("spearman needs two equal series of length >= 2");
    const auto rx = average_ranks(x);
    const auto ry = average_ranks(y);
    const double n = static_cast<double>(x.size());
    const double mx = std::accumulate(rx.begin(), rx.end(), 0.0) / n;
    const double my = std::accumulate(ry.begin(), ry.end(), 0.0) / n;
    double sxy = 0.0, sxx = 0.0, syy = 0.0;
    for (std::size_t i = 0; i < rx.size(); ++i) {
        sxy += (rx[i] - mx) * (ry[i] - my);
        sxx += (rx[i] - mx) * (rx[i] - mx);
        syy += (ry[i] - my) * (ry[i] - my);
    }
    if (sxx == 0.0 || syy == 0.0) return 0.0;
    return sxy / std::sqrt(sxx * syy);
}

}  // namespace corral
