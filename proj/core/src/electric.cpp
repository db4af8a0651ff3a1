#include "gwalk/electric.hpp"

#include <cmath>
#include <limits>

#include "gwalk/error.hpp"
#include "gwalk/walk.hpp"

namespace gwalk {

namespace {

// conductance of the network hanging below `id` (at `depth`) toward the
// short-circuited level set; infinity once the level itself is reached
double downstream(tree& t, node_id id, int depth, int level, double lambda) {
    if (depth == level) return std::numeric_limits<double>::infinity();
    const double edge = std::pow(lambda, -depth);
    double total = 0;
    for (node_id c : t.materialize_children(id)) {
        const double below = downstream(t, c, depth + 1, level, lambda);
        total += std::isinf(below) ? edge : edge * below / (edge + below);
    }
    return total;
}

}  // namespace

double effective_conductance(tree& t, int level, double lambda) {
    if (level < 1) throw error(errc::config_invalid, "conductance level must be >= 1");
    if (t.has_ray()) throw error(errc::kind_mismatch, "conductance is defined on rooted trees");
    try {
        return downstream(t, t.root(), 0, level, lambda);
    } catch (const error& e) {
        if (e.code() == errc::node_budget)
            throw error(errc::depth_budget, "conductance ball exceeded the node budget");
        throw;
    }
}

escape_report escape_stats(tree& t, int level, double lambda, std::int64_t mc_reps,
                           random_stream& rng) {
    escape_report rep;
    const double c = effective_conductance(t, level, lambda);
    const int d_o = t.degree(t.root());
    rep.analytic.level = level;
    rep.analytic.conductance = c;
    rep.analytic.escape_prob = c / d_o;
    rep.analytic.expected_root_visits = d_o / c;
    rep.mc_reps = mc_reps;
    if (mc_reps <= 0) return rep;

    std::int64_t escapes = 0;
    double visit_sum = 0, visit_sq = 0;
    for (std::int64_t r = 0; r < mc_reps; ++r) {
        node_id cur = t.root();
        std::int64_t root_visits = 1;
        while (t.at(cur).dist_to_ray < level) {
            cur = transition(t, cur, lambda, rng);
            if (cur == t.root()) ++root_visits;
        }
        if (root_visits == 1) ++escapes;
        visit_sum += double(root_visits);
        visit_sq += double(root_visits) * double(root_visits);
    }
    const double n = double(mc_reps);
    rep.mc_escape = double(escapes) / n;
    rep.mc_escape_stderr = std::sqrt(rep.mc_escape * (1 - rep.mc_escape) / n);
    rep.mc_root_visits = visit_sum / n;
    const double var = visit_sq / n - rep.mc_root_visits * rep.mc_root_visits;
    rep.mc_root_visits_stderr = std::sqrt(std::max(var, 0.0) / n);
    return rep;
}

double cv_bound(double u, double t) { return 4.0 * t * std::exp(-u * u / (2.0 * t)); }

visit_count_report excursion_visit_counts(tree_kind kind, const offspring_distribution& dist,
                                          const w_pool& pool, int n, std::int64_t reps,
                                          double lambda, random_stream& rng,
                                          std::int64_t max_steps) {
    visit_count_report rep;
    rep.reps = reps;
    double sum = 0, sq = 0;
    for (std::int64_t r = 0; r < reps; ++r) {
        tree t(kind, dist, pool, rng.split(0xe5c0 + std::uint64_t(r)));
        random_stream walk_rng = rng.split(0xa11 + std::uint64_t(r));
        node_id cur = t.root();
        std::int64_t count = 0;
        std::int64_t s = 0;
        for (; s < max_steps; ++s) {
            cur = transition(t, cur, lambda, walk_rng);
            if (cur == t.root()) break;
            if (n > 0 && t.at(cur).dist_to_ray == n) ++count;
        }
        if (s == max_steps) ++rep.truncated;
        sum += double(count);
        sq += double(count) * double(count);
    }
    rep.mean = sum / double(reps);
    const double var = sq / double(reps) - rep.mean * rep.mean;
    rep.stderr_ = std::sqrt(std::max(var, 0.0) / double(reps));
    return rep;
}

}  // namespace gwalk
