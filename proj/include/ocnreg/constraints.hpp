#pragma once

#include <algorithm>
#include <cmath>
#include <memory>
#include <stdexcept>
#include <vector>

namespace ocnreg {

/**
 * @brief Per-step bound on how far a channel level may move, as a
 * function of the step index.
 *
 * Three forms cover every scenario in use. A constant bound models a
 * fixed gate capacity. The waveform models a capacity that ramps up
 * from a cold start while oscillating,
 *     amp * (1 - decay^(k+1)) * (1 - decay^(k+1) * |cos(k/10)|),
 * clamped from below; with clamp 0 the raw waveform applies and its
 * first value is amp * (1 - decay)^2. A window override replaces the
 * bound on a closed step interval and is how capacity faults are
 * injected on top of a nominal profile.
 */
class RateProfile {
public:
    static RateProfile constant(double value) {
        if (!(value > 0.0)) throw std::invalid_argument("rate bound must be positive");
        RateProfile p;
        p.kind_ = Kind::Constant;
        p.value_ = value;
        return p;
    }

    static RateProfile waveform(double amplitude, double decay, double clamp) {
        if (!(amplitude > 0.0)) throw std::invalid_argument("waveform amplitude must be positive");
        if (!(decay > 0.0) || !(decay < 1.0))
            throw std::invalid_argument("waveform decay must lie in (0, 1)");
        if (!(clamp >= 0.0)) throw std::invalid_argument("waveform clamp must be nonnegative");
        RateProfile p;
        p.kind_ = Kind::Waveform;
        p.value_ = amplitude;
        p.decay_ = decay;
        p.clamp_ = clamp;
        return p;
    }

    RateProfile overridden(int from_step, int to_step, double value) const {
        if (from_step < 0 || to_step < from_step)
            throw std::invalid_argument("override window is empty or negative");
        if (!(value > 0.0)) throw std::invalid_argument("rate bound must be positive");
        RateProfile p;
        p.kind_ = Kind::Override;
        p.value_ = value;
        p.from_ = from_step;
        p.to_ = to_step;
        p.base_ = std::make_shared<RateProfile>(*this);
        return p;
    }

    double at(int k) const {
        if (k < 0) throw std::invalid_argument("step index must be nonnegative");
        switch (kind_) {
            case Kind::Constant:
                return value_;
            case Kind::Waveform: {
                const double fade = std::pow(decay_, k + 1);
                const double raw =
                    value_ * (1.0 - fade) * (1.0 - fade * std::fabs(std::cos(k / 10.0)));
                return std::max(clamp_, raw);
            }
            case Kind::Override:
                if (k >= from_ && k <= to_) return value_;
                return base_->at(k);
        }
        throw std::logic_error("unreachable");
    }

    double min_over(int k_first, int k_last) const {
        if (k_first > k_last) throw std::invalid_argument("empty step range");
        double m = at(k_first);
        for (int k = k_first + 1; k <= k_last; ++k) m = std::min(m, at(k));
        return m;
    }

    bool has_override() const { return kind_ == Kind::Override; }

private:
    enum class Kind { Constant, Waveform, Override };

    Kind kind_ = Kind::Constant;
    double value_ = 0.0;
    double decay_ = 0.0;
    double clamp_ = 0.0;
    int from_ = 0;
    int to_ = 0;
    std::shared_ptr<const RateProfile> base_;
};

/**
 * @brief Down and up rate bounds for every channel.
 *
 * down limits how far a level may fall in one step, up how far it may
 * rise. The network bound at step k is the smallest bound any channel
 * has in either direction at that step; it is what the adaptive blend
 * factor is computed from.
 */
struct RateLimits {
    std::vector<RateProfile> down;
    std::vector<RateProfile> up;

    std::size_t size() const { return down.size(); }

    void validate() const {
        if (down.empty() || down.size() != up.size())
            throw std::invalid_argument("rate limits must cover every channel");
    }

    double channel_min(int i, int k) const {
        return std::min(down[static_cast<std::size_t>(i)].at(k),
                        up[static_cast<std::size_t>(i)].at(k));
    }

    // scan channels in index order; min of doubles is exact, so any
    // evaluation order gives the same value as the distributed engine
    double network_min(int k) const {
        double m = channel_min(0, k);
        for (std::size_t i = 1; i < down.size(); ++i)
            m = std::min(m, channel_min(static_cast<int>(i), k));
        return m;
    }

    double network_min_over(int k_first, int k_last) const {
        double m = network_min(k_first);
        for (int k = k_first + 1; k <= k_last; ++k) m = std::min(m, network_min(k));
        return m;
    }

    bool any_override() const {
        for (const auto& p : down)
            if (p.has_override()) return true;
        for (const auto& p : up)
            if (p.has_override()) return true;
        return false;
    }
};

}  // namespace ocnreg
