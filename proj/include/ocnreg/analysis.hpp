#pragma once

#include <cmath>
#include <cstddef>
#include <limits>
#include <stdexcept>
#include <vector>

#include "ocnreg/constraints.hpp"
#include "ocnreg/matrix.hpp"
#include "ocnreg/protocol.hpp"
#include "ocnreg/weights.hpp"

namespace ocnreg {

// level spread across the network; the quantity the spread test watches
inline double spread(const Vec& x) { return max_element(x) - min_element(x); }

/**
 * @brief A-priori contraction numbers for a run.
 *
 * Over any window of radius steps the spread shrinks at least by
 * rate_upper and at most by rate_lower, where the entry bounds eps_low
 * and eps_high come from the weight rule and the largest blend factor
 * the run can use. rate_degree_only needs nothing but the degree range
 * and sits in [1/2, 1). settling_bound caps, in units of windows, how
 * long reaching any fixed spread ratio can take; it grows quickly in
 * the degree range, which is the price of knowing nothing else.
 */
struct ContractionBounds {
    double eps_low = 0.0;
    double eps_high = 0.0;
    double rate_upper = 0.0;
    double rate_lower = 0.0;
    double rate_degree_only = 0.0;
    double settling_bound = 0.0;
};

inline ContractionBounds contraction_bounds(int degree_min, int degree_max, int radius,
                                            int diameter, double weight_floor,
                                            double weight_ceiling, double blend_ceiling) {
    if (degree_min < 1 || degree_max < degree_min)
        throw std::invalid_argument("bad degree range");
    if (radius < 1 || diameter < radius) throw std::invalid_argument("bad radius or diameter");
    ContractionBounds b;
    b.eps_low = (1.0 - blend_ceiling) * weight_floor;
    b.eps_high = weight_ceiling + (1.0 - weight_ceiling) * blend_ceiling;
    b.rate_upper = 1.0 - std::pow(b.eps_low, radius);
    b.rate_lower = 1.0 - std::pow(b.eps_high, radius);
    b.rate_degree_only = 1.0 - std::pow(2.0 + degree_max - degree_min, -radius);
    b.settling_bound =
        diameter * std::pow(1.0 + 0.5 * (degree_max - degree_min), radius);
    return b;
}

/**
 * Extreme entries of the blended averaging matrix eta I + (1 - eta) W.
 * Every entry of that matrix is positive for eta in (0, 1), and the
 * extremes must stay inside [eps_low, eps_high] whenever eta stays
 * below the blend ceiling the bounds were computed from.
 */
struct EntryRange {
    double min_entry = 0.0;
    double max_entry = 0.0;
};

inline EntryRange blended_entry_range(const AveragingWeights& w, double eta) {
    EntryRange r;
    bool first = true;
    for (std::size_t i = 0; i < w.size(); ++i)
        for (const auto& e : w.row(static_cast<int>(i))) {
            const double q = (e.col == static_cast<int>(i)) ? eta + (1.0 - eta) * e.value
                                                            : (1.0 - eta) * e.value;
            if (first) {
                r.min_entry = r.max_entry = q;
                first = false;
            } else {
                r.min_entry = std::min(r.min_entry, q);
                r.max_entry = std::max(r.max_entry, q);
            }
        }
    return r;
}

/**
 * @brief Trace-against-bound comparison over sliding windows.
 *
 * For every k with k + radius inside the trace and a spread above
 * spread_floor, the spread at k + radius must not exceed rate * spread
 * at k beyond tol. worst_excess keeps the largest violation seen, which
 * is negative when the bound holds with margin.
 */
struct ContractionCheck {
    bool ok = true;
    double worst_excess = -std::numeric_limits<double>::infinity();
    int windows = 0;
};

inline ContractionCheck verify_contraction(const std::vector<Vec>& states, int radius,
                                           double rate, double spread_floor = 1e-14,
                                           double tol = 1e-12) {
    if (radius < 1) throw std::invalid_argument("radius must be positive");
    ContractionCheck c;
    for (std::size_t k = 0; k + static_cast<std::size_t>(radius) < states.size(); ++k) {
        const double w0 = spread(states[k]);
        if (w0 <= spread_floor) continue;
        const double w1 = spread(states[k + static_cast<std::size_t>(radius)]);
        const double excess = w1 - rate * w0;
        c.worst_excess = std::max(c.worst_excess, excess);
        ++c.windows;
        if (excess > tol) c.ok = false;
    }
    return c;
}

/**
 * @brief Post-run conformance summary.
 *
 * All quantities are worst cases over the whole trace. The two rate
 * excesses compare each channel's per-step move against the rate bounds
 * that actually applied (faults included); nonpositive means satisfied.
 * eta_above_nominal flags steps where the blend factor exceeded the
 * ceiling computed from the nominal profiles, which is expected when a
 * fault tightens a bound mid-run and is reported rather than failed.
 */
struct RunAudit {
    double mean_drift = 0.0;
    double infnorm_rise = -std::numeric_limits<double>::infinity();
    double rate_excess_down = -std::numeric_limits<double>::infinity();
    double rate_excess_up = -std::numeric_limits<double>::infinity();
    double eta_min_seen = std::numeric_limits<double>::infinity();
    double eta_max_seen = -std::numeric_limits<double>::infinity();
    bool eta_below_floor = false;
    bool eta_above_nominal = false;
    double eps_min_seen = std::numeric_limits<double>::infinity();
    double eps_max_seen = -std::numeric_limits<double>::infinity();
    int service_band_violations = 0;
    double final_consensus_gap = 0.0;
};

struct AuditInputs {
    const RunTrace* trace = nullptr;
    const RateLimits* active_limits = nullptr;
    const AveragingWeights* weights = nullptr;
    double blend_floor = 0.0;
    double blend_ceiling_nominal = 1.0;
    // per-channel closed interval the level offset must stay in; empty to skip
    std::vector<std::pair<double, double>> service_bands;
};

inline RunAudit audit_run(const AuditInputs& in) {
    if (!in.trace || !in.active_limits || !in.weights)
        throw std::invalid_argument("audit needs a trace, limits and weights");
    const RunTrace& tr = *in.trace;
    RunAudit a;

    const double mean0 = mean(tr.states.front());
    double inf_prev = infinity_norm(tr.states.front());
    for (std::size_t k = 0; k < tr.states.size(); ++k) {
        a.mean_drift = std::max(a.mean_drift, std::fabs(mean(tr.states[k]) - mean0));
        if (k > 0) {
            const double inf_k = infinity_norm(tr.states[k]);
            a.infnorm_rise = std::max(a.infnorm_rise, inf_k - inf_prev);
            inf_prev = inf_k;
        }
        if (!in.service_bands.empty()) {
            for (std::size_t i = 0; i < tr.states[k].size(); ++i) {
                const auto& band = in.service_bands[i];
                if (tr.states[k][i] < band.first - 1e-12 ||
                    tr.states[k][i] > band.second + 1e-12)
                    ++a.service_band_violations;
            }
        }
    }

    for (std::size_t k = 0; k + 1 < tr.states.size(); ++k) {
        const Vec& x0 = tr.states[k];
        const Vec& x1 = tr.states[k + 1];
        const int ki = static_cast<int>(k);
        for (std::size_t i = 0; i < x0.size(); ++i) {
            const double move = x1[i] - x0[i];
            a.rate_excess_down =
                std::max(a.rate_excess_down, -move - in.active_limits->down[i].at(ki));
            a.rate_excess_up =
                std::max(a.rate_excess_up, move - in.active_limits->up[i].at(ki));
        }
    }

    for (double eta : tr.etas) {
        a.eta_min_seen = std::min(a.eta_min_seen, eta);
        a.eta_max_seen = std::max(a.eta_max_seen, eta);
        if (eta < in.blend_floor - 1e-15) a.eta_below_floor = true;
        if (eta > in.blend_ceiling_nominal + 1e-12) a.eta_above_nominal = true;
        const EntryRange er = blended_entry_range(*in.weights, eta);
        a.eps_min_seen = std::min(a.eps_min_seen, er.min_entry);
        a.eps_max_seen = std::max(a.eps_max_seen, er.max_entry);
    }

    a.final_consensus_gap = 0.0;
    for (double v : tr.states.back()) a.final_consensus_gap =
        std::max(a.final_consensus_gap, std::fabs(v - mean0));
    return a;
}

}  // namespace ocnreg
