#pragma once

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <utility>
#include <vector>

#include "ocnreg/eigensolve.hpp"
#include "ocnreg/graph.hpp"
#include "ocnreg/matrix.hpp"

namespace ocnreg {

/**
 * @brief Symmetric doubly stochastic averaging weights on a channel graph.
 *
 * Off-diagonal weight between touching channels i and j is
 * 1 / (1 + max(deg i, deg j)); the diagonal absorbs the remainder.
 * Each channel can build its own row knowing only its neighbors'
 * degrees, which is what makes the distributed engine possible.
 *
 * Rows are stored sparse with columns ascending and the diagonal
 * included, and every consumer must accumulate in exactly that order:
 * the centralized and distributed engines are required to produce
 * bit-identical trajectories, so they share this row layout.
 */
class AveragingWeights {
public:
    struct Entry {
        int col;
        double value;
    };

    explicit AveragingWeights(const ChannelGraph& g) {
        const std::size_t n = g.size();
        if (n == 0) throw std::invalid_argument("empty channel graph");
        if (!g.connected()) throw std::invalid_argument("channel graph must be connected");
        rows_.resize(n);
        self_.resize(n);
        min_degree_ = g.min_degree();
        max_degree_ = g.max_degree();
        for (std::size_t i = 0; i < n; ++i) {
            const int ii = static_cast<int>(i);
            double off_sum = 0.0;
            std::vector<Entry> row;
            row.reserve(g.neighbors(ii).size() + 1);
            bool self_placed = false;
            for (int j : g.neighbors(ii)) {
                if (!self_placed && j > ii) {
                    row.push_back({ii, 0.0});
                    self_placed = true;
                }
                const double w = 1.0 / (1.0 + std::max(g.degree(ii), g.degree(j)));
                row.push_back({j, w});
                off_sum += w;
            }
            if (!self_placed) row.push_back({ii, 0.0});
            const double self = 1.0 - off_sum;
            for (auto& entry : row)
                if (entry.col == ii) entry.value = self;
            self_[i] = self;
            rows_[i] = std::move(row);
        }
    }

    std::size_t size() const { return rows_.size(); }
    const std::vector<Entry>& row(int i) const { return rows_[static_cast<std::size_t>(i)]; }
    double self_weight(int i) const { return self_[static_cast<std::size_t>(i)]; }
    int min_degree() const { return min_degree_; }
    int max_degree() const { return max_degree_; }

    double entry(int i, int j) const {
        for (const auto& e : rows_[static_cast<std::size_t>(i)])
            if (e.col == j) return e.value;
        return 0.0;
    }

    Matrix dense() const {
        Matrix m(size(), size());
        for (std::size_t i = 0; i < size(); ++i)
            for (const auto& e : rows_[i]) m(i, static_cast<std::size_t>(e.col)) = e.value;
        return m;
    }

    // smallest nonzero weight the rule can produce anywhere in the graph
    double weight_floor() const { return 1.0 / (1.0 + max_degree_); }

    // upper bound on any diagonal entry
    double weight_ceiling() const {
        return 1.0 - static_cast<double>(min_degree_) / (1.0 + max_degree_);
    }

    // worst-case row gain of (I - W): max_i 2 (1 - w_ii)
    double shift_gain() const {
        double worst = 0.0;
        for (double s : self_) worst = std::max(worst, 2.0 * (1.0 - s));
        return worst;
    }

    // degree-only bound on shift_gain(); lies in [1, 2)
    double shift_gain_bound() const {
        return 2.0 * max_degree_ / (1.0 + max_degree_);
    }

    // largest distance of any row from being stochastic; diagnostic only
    double stochastic_residual() const {
        double worst = 0.0;
        for (const auto& row : rows_) {
            double s = 0.0;
            for (const auto& e : row) s += e.value;
            worst = std::max(worst, std::fabs(s - 1.0));
        }
        return worst;
    }

private:
    std::vector<std::vector<Entry>> rows_;
    std::vector<double> self_;
    int min_degree_ = 0;
    int max_degree_ = 0;
};

/**
 * @brief Eigenvalue summary of an averaging matrix.
 *
 * lambda_second is the largest eigenvalue below the stochastic
 * eigenvalue 1, lambda_min the smallest overall. Their midpoint decides
 * whether a strictly positive blend floor exists: when the midpoint
 * maps to a nonpositive value, callers fall back to a configured floor.
 */
struct SpectralSummary {
    double lambda_second = 0.0;
    double lambda_min = 0.0;
    double midpoint = 0.0;
    double blend_floor_raw = 0.0;  // midpoint / (midpoint - 1)
};

inline SpectralSummary spectral_summary(const AveragingWeights& w) {
    if (w.size() < 2) throw std::invalid_argument("spectral summary needs at least two channels");
    Vec ev = symmetric_eigenvalues(w.dense());
    SpectralSummary s;
    s.lambda_min = ev.front();
    s.lambda_second = ev[ev.size() - 2];
    s.midpoint = 0.5 * (s.lambda_second + s.lambda_min);
    s.blend_floor_raw = s.midpoint / (s.midpoint - 1.0);
    return s;
}

// blend floor actually used by the protocol: the spectral value when it
// is strictly positive, otherwise the configured fallback
inline double blend_floor_from_spectrum(const SpectralSummary& s, double fallback) {
    return s.blend_floor_raw > 0.0 ? s.blend_floor_raw : fallback;
}

}  // namespace ocnreg
