#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <vector>

#include "ocnreg/constraints.hpp"
#include "ocnreg/graph.hpp"
#include "ocnreg/protocol.hpp"
#include "ocnreg/weights.hpp"

namespace ocnreg {

/**
 * @brief Controller for a single channel, seeing only local data.
 *
 * Static configuration mirrors what a field deployment would flash at
 * commissioning time: the channel's averaging row, its own rate
 * profiles, and three network constants (gain bound, blend floor, sync
 * horizon) that the designer derives offline from the network plan.
 * Everything that changes at run time arrives through messages from
 * touching channels.
 *
 * Each step runs synchronized max-consensus sessions over the sync
 * horizon, which must be at least the graph diameter so every tracker
 * holds the true network extreme when the sessions close. Four trackers
 * are seeded: the channel's level, its negated level, and the negated
 * down and up bounds for this step. When every channel already carries
 * the full profile table (shared_profiles), the bound trackers are not
 * run and the network bound is evaluated locally instead; both paths
 * produce the same number to the last bit.
 */
class ChannelAgent {
public:
    struct Config {
        int id = -1;
        std::vector<AveragingWeights::Entry> row;  // ascending columns, diagonal included
        RateProfile down = RateProfile::constant(1.0);
        RateProfile up = RateProfile::constant(1.0);
        double gamma = 0.0;
        double gain_bound = 0.0;
        double blend_floor = 0.0;
        int sync_horizon = 0;
        bool shared_profiles = false;
        const RateLimits* profile_table = nullptr;  // read only when shared_profiles
    };

    struct StepResult {
        bool agreed = false;   // spread test passed, no update applied
        double eta = 0.0;      // blend used; meaningful when !agreed
        double bound = 0.0;    // network rate bound seen; meaningful when !agreed
    };

    ChannelAgent(Config cfg, double x0) : cfg_(std::move(cfg)), x_(x0) {
        if (cfg_.id < 0) throw std::invalid_argument("agent id must be nonnegative");
        if (cfg_.sync_horizon < 1) throw std::invalid_argument("sync horizon must be positive");
        if (cfg_.shared_profiles && cfg_.profile_table == nullptr)
            throw std::invalid_argument("shared profiles need a profile table");
        row_vals_.assign(cfg_.row.size(), 0.0);
        self_slot_ = cfg_.row.size();
        for (std::size_t t = 0; t < cfg_.row.size(); ++t)
            if (cfg_.row[t].col == cfg_.id) self_slot_ = t;
        if (self_slot_ == cfg_.row.size())
            throw std::invalid_argument("averaging row is missing the diagonal");
    }

    int id() const { return cfg_.id; }
    double level() const { return x_; }
    int sessions() const { return cfg_.shared_profiles ? 2 : 4; }

    // trackers seeded fresh each step; round 0 messages carry the seeds
    void begin_step(int k) {
        trk_[0] = x_;
        trk_[1] = -x_;
        if (!cfg_.shared_profiles) {
            trk_[2] = -cfg_.down.at(k);
            trk_[3] = -cfg_.up.at(k);
        }
        row_vals_[self_slot_] = x_;
    }

    // values this agent sends every neighbor in the current round
    void publish(double* out) const {
        for (int t = 0; t < sessions(); ++t) out[t] = trk_[static_cast<std::size_t>(t)];
    }

    /**
     * Merge one neighbor's message. Round 0 doubles as the state
     * exchange for the later update: the first tracker's seed is the
     * neighbor's level, so it is cached in the slot its column owns.
     */
    void absorb(int from, const double* msg, int round) {
        if (round == 0) {
            bool found = false;
            for (std::size_t t = 0; t < cfg_.row.size(); ++t)
                if (cfg_.row[t].col == from) {
                    row_vals_[t] = msg[0];
                    found = true;
                    break;
                }
            if (!found) throw std::logic_error("message from a channel that is not a neighbor");
        }
        for (int t = 0; t < sessions(); ++t)
            trk_[static_cast<std::size_t>(t)] =
                std::max(trk_[static_cast<std::size_t>(t)], msg[t]);
    }

    // after the sessions close: test agreement, otherwise blend
    StepResult finish_step(int k) {
        const double x_high = trk_[0];
        const double x_low = -trk_[1];
        StepResult r;
        if (x_high - x_low <= cfg_.gamma) {
            r.agreed = true;
            return r;
        }
        const double bound = cfg_.shared_profiles
                                 ? cfg_.profile_table->network_min(k)
                                 : std::min(-trk_[2], -trk_[3]);
        const double x_inf = std::max(-x_low, x_high);
        r.eta = adaptive_blend(bound, cfg_.gain_bound, x_inf, cfg_.blend_floor);
        r.bound = bound;
        x_ = blended_update(cfg_.row, cfg_.id, r.eta, row_vals_.data());
        r.agreed = false;
        return r;
    }

private:
    Config cfg_;
    double x_;
    double trk_[4] = {0.0, 0.0, 0.0, 0.0};
    Vec row_vals_;
    std::size_t self_slot_;
};

/**
 * @brief Synchronous message fabric for a network of channel agents.
 *
 * The fabric owns the adjacency and moves messages along it; it never
 * reads or writes agent state except to harvest levels for the trace,
 * which a deployment would get from telemetry. Delivery is double
 * buffered: all messages of a round are drawn from the pre-round
 * trackers, so the order agents are visited in cannot influence the
 * result.
 */
class SyncNetwork {
public:
    SyncNetwork(const ChannelGraph& g, const AveragingWeights& w, const RateLimits& limits,
                const PlannerSettings& s, bool shared_profiles)
        : graph_(g), limits_(limits), settings_(s), shared_profiles_(shared_profiles) {
        s.validate();
        limits.validate();
        if (g.size() != w.size() || limits.size() != g.size())
            throw std::invalid_argument("graph, weights and limits must agree on channel count");
        sync_horizon_ = g.diameter();
        if (sync_horizon_ < 1) sync_horizon_ = 1;
        weights_rows_.reserve(g.size());
        for (std::size_t i = 0; i < g.size(); ++i)
            weights_rows_.push_back(w.row(static_cast<int>(i)));
    }

    RunTrace run(const Vec& x0, const std::vector<int>* visit_order = nullptr) {
        const std::size_t n = graph_.size();
        if (x0.size() != n) throw std::invalid_argument("state size mismatch");

        std::vector<int> order(n);
        if (visit_order) {
            if (visit_order->size() != n) throw std::invalid_argument("bad visit order");
            order = *visit_order;
        } else {
            for (std::size_t i = 0; i < n; ++i) order[i] = static_cast<int>(i);
        }

        std::vector<ChannelAgent> agents;
        agents.reserve(n);
        for (std::size_t i = 0; i < n; ++i) {
            ChannelAgent::Config cfg;
            cfg.id = static_cast<int>(i);
            cfg.row = weights_rows_[i];
            cfg.down = limits_.down[i];
            cfg.up = limits_.up[i];
            cfg.gamma = settings_.gamma;
            cfg.gain_bound = settings_.gain_bound;
            cfg.blend_floor = settings_.blend_floor;
            cfg.sync_horizon = sync_horizon_;
            cfg.shared_profiles = shared_profiles_;
            cfg.profile_table = shared_profiles_ ? &limits_ : nullptr;
            agents.emplace_back(std::move(cfg), x0[i]);
        }

        RunTrace tr;
        tr.states.push_back(x0);

        const int sessions = agents[0].sessions();
        // one message per neighbor per session per round
        std::vector<double> outbox(n * 4, 0.0);

        for (int k = 0;; ++k) {
            for (int i : order) agents[static_cast<std::size_t>(i)].begin_step(k);
            for (int round = 0; round < sync_horizon_; ++round) {
                for (int i : order)
                    agents[static_cast<std::size_t>(i)].publish(
                        &outbox[static_cast<std::size_t>(i) * 4]);
                for (int i : order) {
                    auto& agent = agents[static_cast<std::size_t>(i)];
                    for (int j : graph_.neighbors(i)) {
                        agent.absorb(j, &outbox[static_cast<std::size_t>(j) * 4], round);
                        tr.messages += sessions;
                    }
                }
            }

            bool agreed = false;
            double eta = 0.0, bound = 0.0;
            bool first = true;
            for (int i : order) {
                auto r = agents[static_cast<std::size_t>(i)].finish_step(k);
                if (first) {
                    agreed = r.agreed;
                    eta = r.eta;
                    bound = r.bound;
                    first = false;
                } else if (r.agreed != agreed || (!agreed && (r.eta != eta || r.bound != bound))) {
                    // every agent saw the same extremes, so any split is a defect
                    throw std::logic_error("agents disagreed on a synchronized decision");
                }
            }
            if (agreed) {
                tr.converged = true;
                tr.steps = k;
                break;
            }
            if (k == settings_.k_max) {
                tr.converged = false;
                tr.steps = k;
                break;
            }
            Vec x(n);
            for (std::size_t i = 0; i < n; ++i) x[i] = agents[i].level();
            tr.states.push_back(std::move(x));
            tr.etas.push_back(eta);
            tr.rate_bounds.push_back(bound);
        }
        return tr;
    }

    int sync_horizon() const { return sync_horizon_; }

private:
    const ChannelGraph& graph_;
    const RateLimits& limits_;
    PlannerSettings settings_;
    bool shared_profiles_;
    int sync_horizon_ = 1;
    std::vector<std::vector<AveragingWeights::Entry>> weights_rows_;
};

}  // namespace ocnreg
