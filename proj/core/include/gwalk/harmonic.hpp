#pragma once

#include <cstdint>

#include "gwalk/rng.hpp"
#include "gwalk/tree.hpp"

namespace gwalk {

/// Running state of the harmonic-coordinate martingale M_t along a walk:
/// increments are +W(child) on down-moves and -W(current) on up-moves, the
/// quadratic-variation sum accumulates the conditional variances mu_v^2, and
/// z_value tracks the corrector M_t/eta - h(X_t).
struct martingale_tracker {
    double m_value = 0;
    double qv_sum = 0;
    std::int64_t t = 0;
    double eta = 1;
    double z_value = 0;

    explicit martingale_tracker(double eta_value = 1) : eta(eta_value) {}

    void advance(double increment, double mu2, int h_after) {
        // compensated sum: M_t is compared against S_{X_t} to 1e-9 over
        // long trajectories, so plain accumulation error would show
        const double y = increment - comp_;
        const double s = m_value + y;
        comp_ = (s - m_value) - y;
        m_value = s;
        qv_sum += mu2;
        ++t;
        z_value = m_value / eta - h_after;
    }

    double mean_qv() const { return t > 0 ? qv_sum / double(t) : 0.0; }

  private:
    double comp_ = 0;
};

/// Applies one walk step from -> to to the tracker and returns the
/// martingale increment. Throws NOT_NEIGHBORS if the nodes are not adjacent.
double martingale_step(martingale_tracker& tracker, tree& t, node_id from, node_id to);

/// Potential S_v: the sum of W along the geodesic from v to Ray (excluding
/// the meeting vertex), minus the W of the ray vertices strictly above the
/// meeting point. On rooted trees this is the sum along the path to the
/// root, root excluded. Satisfies M_t = S_{X_t}.
double s_value(tree& t, node_id id);

/// Conditional variance mu_v^2 of the martingale increment at v for the
/// critically biased walk, evaluated in both displayed forms (they must
/// agree to 1e-10 under the exact W recursion).
double quadratic_variation_step(tree& t, node_id id);

/// Corrector Z_t = M_t/eta - h(X_t).
double corrector(const martingale_tracker& tracker, const tree& t, node_id id);

struct sigma2_estimate {
    double sigma2 = 0;
    double stderr_ = 0;
    double eta = 0;
    double eta_stderr = 0;
    double mean_qv = 0;  // estimate of E_IGWR mu_0^2 = sigma^2 eta^2
};

/// Estimates sigma^2 from the time-average of mu^2 along critically biased
/// walks on fresh IGWR trees, normalized by eta^2 from the pool. The
/// standard error combines a bootstrap over per-walk means with the eta
/// uncertainty.
sigma2_estimate estimate_sigma2(const offspring_distribution& dist, const w_pool& pool,
                                int walks, std::int64_t steps, random_stream& rng,
                                int parallelism = 1);

}  // namespace gwalk
