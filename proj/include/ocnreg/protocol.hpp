#pragma once

#include <cmath>
#include <cstddef>
#include <limits>
#include <stdexcept>
#include <vector>

#include "ocnreg/constraints.hpp"
#include "ocnreg/matrix.hpp"
#include "ocnreg/weights.hpp"

namespace ocnreg {

/**
 * @brief Protocol constants shared by both engines.
 *
 * gamma is the level spread below which the network counts as agreed.
 * gain_bound is the worst-case row gain of (I - W) and ties the blend
 * factor to the rate limits; blend_floor is the smallest blend factor
 * the controller may choose. Both are design-time constants that every
 * channel is provisioned with.
 */
struct PlannerSettings {
    double gamma = 0.0;
    int k_max = 0;
    double blend_floor = 0.0;
    double gain_bound = 0.0;

    void validate() const {
        if (!(gamma > 0.0)) throw std::invalid_argument("gamma must be positive");
        if (k_max < 0) throw std::invalid_argument("step budget must be nonnegative");
        if (!(blend_floor > 0.0) || !(blend_floor < 1.0))
            throw std::invalid_argument("blend floor must lie in (0, 1)");
        if (!(gain_bound > 0.0) || !(gain_bound < 2.0))
            throw std::invalid_argument("gain bound must lie in (0, 2)");
    }
};

/**
 * Blend factor for one step. The factor is pushed as low as the rate
 * bound allows so the network averages as aggressively as the gates
 * permit: a change of x of size (1 - eta) * gain_bound * |x|_inf is the
 * worst any channel can see, and it must not exceed the tightest rate
 * bound in the network. With a flat state any factor is safe, so the
 * floor applies.
 *
 * Both engines call exactly this function with exactly the same inputs;
 * it is the single definition of the control law.
 */
inline double adaptive_blend(double rate_bound, double gain_bound, double x_inf,
                             double blend_floor) {
    if (x_inf > 0.0) return std::max(blend_floor, 1.0 - rate_bound / (gain_bound * x_inf));
    return blend_floor;
}

/**
 * Largest blend factor the adaptive law can ever return on a run that
 * starts at x0_inf, given the tightest rate bound over the whole step
 * budget. Used for the contraction-rate bounds.
 */
inline double blend_ceiling(const RateLimits& limits, double gain_bound, double x0_inf,
                            double blend_floor, int k_max) {
    if (!(x0_inf > 0.0)) return blend_floor;
    const double tightest = limits.network_min_over(0, k_max);
    return std::max(blend_floor, 1.0 - tightest / (gain_bound * x0_inf));
}

/**
 * One channel's blended averaging update. row_vals[t] must hold the
 * state of the channel row[t].col refers to; entries are accumulated in
 * row order (columns ascending, diagonal in place). Both engines feed
 * this same function, which is what makes their trajectories agree to
 * the last bit.
 */
inline double blended_update(const std::vector<AveragingWeights::Entry>& row, int self,
                             double eta, const double* row_vals) {
    double acc = 0.0;
    for (std::size_t t = 0; t < row.size(); ++t) {
        const auto& e = row[t];
        const double coef =
            (e.col == self) ? eta + (1.0 - eta) * e.value : (1.0 - eta) * e.value;
        acc += coef * row_vals[t];
    }
    return acc;
}

/**
 * Disagreement cost 1/2 * sum over touching pairs of w_ij (x_i - x_j)^2.
 * Its gradient is (I - W) x, so the blended update is a steepest-descent
 * step on this cost with step size (1 - eta).
 */
inline double disagreement_cost(const AveragingWeights& w, const Vec& x) {
    if (x.size() != w.size()) throw std::invalid_argument("state size mismatch");
    double cost = 0.0;
    for (std::size_t i = 0; i < w.size(); ++i)
        for (const auto& e : w.row(static_cast<int>(i))) {
            if (e.col <= static_cast<int>(i)) continue;
            const double d = x[i] - x[static_cast<std::size_t>(e.col)];
            cost += 0.5 * e.value * d * d;
        }
    return cost;
}

inline Vec disagreement_gradient(const AveragingWeights& w, const Vec& x) {
    if (x.size() != w.size()) throw std::invalid_argument("state size mismatch");
    Vec g(x.size());
    for (std::size_t i = 0; i < w.size(); ++i) {
        double avg = 0.0;
        for (const auto& e : w.row(static_cast<int>(i)))
            avg += e.value * x[static_cast<std::size_t>(e.col)];
        g[i] = x[i] - avg;
    }
    return g;
}

/**
 * @brief Everything a finished run leaves behind.
 *
 * states holds x(0)..x(K). etas and rate_bounds have one entry per
 * applied update, so their length is K. steps is the index of the state
 * that met the spread test when converged, otherwise the step budget.
 */
struct RunTrace {
    std::vector<Vec> states;
    std::vector<double> etas;
    std::vector<double> rate_bounds;
    bool converged = false;
    int steps = 0;
    long long messages = 0;  // stays 0 for the centralized engine

    const Vec& final_state() const { return states.back(); }
};

/**
 * Centralized reference engine. Runs the same control law as the
 * message-passing engine but reads the whole state directly. The spread
 * test comes before the update so an agreed state is never perturbed.
 */
inline RunTrace run_planner(const AveragingWeights& w, const RateLimits& limits, Vec x,
                            const PlannerSettings& s) {
    s.validate();
    limits.validate();
    if (x.size() != w.size() || limits.size() != w.size())
        throw std::invalid_argument("state, limits and weights must agree on channel count");

    RunTrace tr;
    tr.states.push_back(x);
    Vec next(x.size());
    Vec row_vals;
    for (int k = 0;; ++k) {
        const double x_min = min_element(x);
        const double x_max = max_element(x);
        if (x_max - x_min <= s.gamma) {
            tr.converged = true;
            tr.steps = k;
            break;
        }
        if (k == s.k_max) {
            tr.converged = false;
            tr.steps = k;
            break;
        }
        const double bound = limits.network_min(k);
        const double x_inf = std::max(-x_min, x_max);
        const double eta = adaptive_blend(bound, s.gain_bound, x_inf, s.blend_floor);
        for (std::size_t i = 0; i < w.size(); ++i) {
            const auto& row = w.row(static_cast<int>(i));
            row_vals.resize(row.size());
            for (std::size_t t = 0; t < row.size(); ++t)
                row_vals[t] = x[static_cast<std::size_t>(row[t].col)];
            next[i] = blended_update(row, static_cast<int>(i), eta, row_vals.data());
        }
        x.swap(next);
        tr.states.push_back(x);
        tr.etas.push_back(eta);
        tr.rate_bounds.push_back(bound);
    }
    return tr;
}

}  // namespace ocnreg
