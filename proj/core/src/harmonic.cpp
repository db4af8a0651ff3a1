#include "gwalk/harmonic.hpp"

#include <cmath>
#include <stdexcept>
#include <unordered_map>
#include <vector>

#include "gwalk/error.hpp"
#include "gwalk/parallel.hpp"
#include "gwalk/walk.hpp"

namespace gwalk {

double martingale_step(martingale_tracker& tracker, tree& t, node_id from, node_id to) {
    double increment;
    if (t.at(to).parent == from) {
        increment = t.assign_w(to);
    } else if (t.at(from).parent == to) {
        increment = -t.assign_w(from);
    } else {
        throw error(errc::not_neighbors, "martingale step between non-adjacent nodes");
    }
    const double mu2 = quadratic_variation_step(t, from);
    tracker.advance(increment, mu2, t.at(to).h);
    return increment;
}

double s_value(tree& t, node_id id) {
    double sum = 0;
    node_id cur = id;
    // climb to the meeting point with Ray (the root on rooted trees)
    while (true) {
        const auto& n = t.at(cur);
        const bool at_meeting = t.has_ray() ? n.on_spine() : n.parent == k_no_node;
        if (at_meeting) break;
        sum += t.assign_w(cur);
        cur = n.parent;
    }
    if (!t.has_ray() || cur == t.root()) return sum;
    // R_v != o: subtract the ray vertices strictly above R_v (0 >= h > h(R_v))
    const int depth = -t.at(cur).h;
    for (int k = 0; k < depth; ++k) sum -= t.assign_w(t.spine()[std::size_t(k)]);
    return sum;
}

double quadratic_variation_step(tree& t, node_id id) {
    const auto kids = t.materialize_children(id);
    const double m = t.dist().mean_m();
    const int d = t.degree(id);
    double s1 = 0, s2 = 0;
    for (node_id c : kids) {
        const double w = t.assign_w(c);
        s1 += w;
        s2 += w * w;
    }
    const double wv = t.assign_w(id);
    const double form1 = m / (m + d) * wv * wv + s2 / (m + d);
    const double form2 = s2 / (m + d) + s1 * s1 / (m * (m + d));
    if (std::abs(form1 - form2) > 1e-10 * std::max(1.0, std::abs(form1)))
        throw std::logic_error("mu^2 forms disagree: the W recursion is broken");
    return form1;
}

double corrector(const martingale_tracker& tracker, const tree& t, node_id id) {
    return tracker.m_value / tracker.eta - t.at(id).h;
}

sigma2_estimate estimate_sigma2(const offspring_distribution& dist, const w_pool& pool,
                                int walks, std::int64_t steps, random_stream& rng,
                                int parallelism) {
    const auto eta = estimate_eta(dist, pool);
    std::vector<double> per_walk(std::size_t(walks), 0.0);
    random_stream base = rng.split(0x51c3a2);

    parallel_replicas(walks, parallelism, [&](std::int64_t i) {
        random_stream rs = base.split(std::uint64_t(i));
        tree t(tree_kind::igwr, dist, pool, rs.split(1));
        random_stream walk_rng = rs.split(2);
        random_stream w_rng = rs.split(3);
        const double lambda = dist.mean_m();
        const double m = lambda;

        // mu^2 from cached one-level composites W|d =d= (sum of d pool
        // draws)/m: the true conditional law of W given the local degrees,
        // so the occupation average is unbiased for E_IGWR mu_0^2. The
        // globally consistent per-tree field is unsuitable here: forcing
        // children onto an already-committed ancestor compounds a
        // multiplicative bias along deep excursions.
        std::unordered_map<node_id, double> w_loc;
        auto local_w = [&](node_id v) {
            const auto it = w_loc.find(v);
            if (it != w_loc.end()) return it->second;
            double sum = 0;
            const int d = t.degree(v);
            for (int j = 0; j < d; ++j) sum += pool.draw(w_rng);
            const double value = sum / m;
            w_loc.emplace(v, value);
            return value;
        };
        std::unordered_map<node_id, double> mu2_cache;
        auto mu2_at = [&](node_id v) {
            const auto it = mu2_cache.find(v);
            if (it != mu2_cache.end()) return it->second;
            double s1 = 0, s2 = 0;
            for (node_id c : t.materialize_children(v)) {
                const double w = local_w(c);
                s1 += w;
                s2 += w * w;
            }
            const int d = t.degree(v);
            const double value = s2 / (m + d) + s1 * s1 / (m * (m + d));
            mu2_cache.emplace(v, value);
            return value;
        };

        node_id cur = t.root();
        double qv = 0;
        for (std::int64_t s = 0; s < steps; ++s) {
            qv += mu2_at(cur);
            cur = transition(t, cur, lambda, walk_rng);
        }
        per_walk[std::size_t(i)] = qv / double(steps);
    });

    double mean = 0;
    for (double v : per_walk) mean += v;
    mean /= double(walks);
    double var = 0;
    for (double v : per_walk) var += (v - mean) * (v - mean);
    var = walks > 1 ? var / double(walks - 1) : 0.0;
    const double se_mean = std::sqrt(var / double(walks));

    sigma2_estimate out;
    out.eta = eta.eta;
    out.eta_stderr = eta.stderr_;
    out.mean_qv = mean;
    out.sigma2 = mean / (eta.eta * eta.eta);
    const double d_mean = se_mean / (eta.eta * eta.eta);
    const double d_eta = 2.0 * mean * eta.stderr_ / (eta.eta * eta.eta * eta.eta);
    out.stderr_ = std::sqrt(d_mean * d_mean + d_eta * d_eta);
    return out;
}

}  // namespace gwalk
