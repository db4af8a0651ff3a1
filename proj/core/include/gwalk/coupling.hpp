#pragma once

#include <cstdint>
#include <vector>

#include "gwalk/rng.hpp"
#include "gwalk/tree.hpp"
#include "gwalk/walk.hpp"

namespace gwalk {

/// One excursion of the rooted walk: it starts when the walk first steps on
/// a leaf of the explored region (a never-visited vertex) and ends on the
/// first return to the previously explored interior, which is necessarily
/// the leaf's parent. subtree_ids lists the vertices visited in [tau, eta)
/// together with all of their offspring (the glued tree T_i).
struct excursion_record {
    std::int64_t tau = 0;
    std::int64_t eta = 0;  // records end for an incomplete trailing excursion
    node_id start_node = k_no_node;
    std::vector<node_id> visited_ids;
    std::vector<node_id> subtree_ids;
    bool complete = true;
};

/// Maximal complete excursions of a recorded walk on its rooted GW tree.
/// Materializes boundary offspring while collecting subtree_ids.
std::vector<excursion_record> decompose_excursions(const walk_record& x_record, tree& t);

/// The shifted coupling: a walk X on a rooted GW tree, and a walk Y on a
/// ray tree built by gluing X's excursion trees at the leaves Y reaches,
/// with Y's off-excursion steps taken by the critically biased kernel.
struct coupled_run {
    walk_record x_record;
    walk_record y_record;
    tree igw_tree;
    std::vector<excursion_record> excursions;  // X side, consumed in order
    std::vector<std::int64_t> taus, etas;      // X side (incl. trailing partial tau)
    std::vector<std::int64_t> hat_taus, hat_etas;
    std::vector<std::int32_t> r_n;  // h(Y_n) - running min
    std::vector<std::int32_t> b_n;  // max backtrack along Ray up to n
};

/// Runs X for surplus_factor * steps steps on a fresh GW tree, then builds
/// the coupled ray tree and Y for `steps` steps. Throws
/// EXCURSIONS_EXHAUSTED when Y consumes more excursions than X produced
/// (the caller should lengthen the X run).
coupled_run build_coupled_pair(const offspring_distribution& dist, const w_pool& pool,
                               std::int64_t steps, random_stream& rng, int surplus_factor = 4);

/// build_coupled_pair with the surplus doubled on exhaustion, up to
/// max_surplus. Critical-excursion lengths are heavy-tailed, so short runs
/// occasionally need a longer X record.
coupled_run build_coupled_pair_retrying(const offspring_distribution& dist, const w_pool& pool,
                                        std::int64_t steps, random_stream& rng,
                                        int max_surplus = 64);

/// Height reflected at its running minimum, and the maximal backtrack
/// h(Y_t) - h(Y_s) over pairs of ray visits s < t <= n.
std::pair<std::vector<std::int32_t>, std::vector<std::int32_t>> reflected_and_backtrack(
    const walk_record& y_record);

struct gap_checkpoint {
    std::int64_t n = 0;
    std::int64_t abs_x = 0;
    std::int64_t r_best = 0;   // R_s at the minimizing s
    std::int64_t delta = 0;    // off-excursion steps on the X side
    std::int64_t delta_hat = 0;
    std::int64_t backtrack = 0;
    double bound = 0;          // 2 n^alpha + B_n
    double best_diff = 0;      // min_s ||X_n| - R_s|
    bool ok = false;
};

struct gap_report {
    std::vector<gap_checkpoint> checkpoints;
    double worst_slack = 0;  // min over checkpoints of bound - best_diff
    bool all_ok = true;
};

/// Evaluates min_{|s-n| <= Delta_n + hat Delta_n} ||X_n| - R_s| against
/// 2 n^alpha + B_n at the dyadic checkpoints n = 1, 2, 4, ... <= steps.
gap_report coupling_gap(const coupled_run& run, double alpha);

}  // namespace gwalk
