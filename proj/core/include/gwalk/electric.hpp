#pragma once

#include <cstdint>

#include "gwalk/rng.hpp"
#include "gwalk/tree.hpp"

namespace gwalk {

/// Effective conductance between the root and the (short-circuited) level
/// set D_level, with escape probability C/d_o and expected root visits
/// d_o/C before reaching the level. escape_prob * expected_root_visits == 1.
struct conductance_report {
    int level = 0;
    double conductance = 0;
    double escape_prob = 0;
    double expected_root_visits = 0;
};

struct escape_report {
    conductance_report analytic;
    std::int64_t mc_reps = 0;
    double mc_escape = 0;
    double mc_escape_stderr = 0;
    double mc_root_visits = 0;
    double mc_root_visits_stderr = 0;
};

/// Exact bottom-up series/parallel reduction of the tree truncated at
/// `level`; the edge from depth n-1 to depth n carries conductance
/// lambda^-(n-1). Throws DEPTH_BUDGET if the truncated ball does not fit
/// the node budget.
double effective_conductance(tree& t, int level, double lambda);

/// Analytic escape statistics plus, when mc_reps > 0, Monte Carlo estimates
/// of the escape probability and the expected number of root visits before
/// hitting the level.
escape_report escape_stats(tree& t, int level, double lambda, std::int64_t mc_reps,
                           random_stream& rng);

/// Carne-Varopoulos envelope 4 t exp(-u^2 / 2t) for the annealed probability
/// that the walk reaches distance u within t steps.
double cv_bound(double u, double t);

struct visit_count_report {
    double mean = 0;
    double stderr_ = 0;
    std::int64_t reps = 0;
    std::int64_t truncated = 0;  // excursions cut off at the step cap
};

/// Mean number of visits to depth n during one excursion from the root
/// (counted over (0, T_o]; n = 0 returns 0 by convention). Excursions
/// longer than max_steps are truncated and counted as observed.
visit_count_report excursion_visit_counts(tree_kind kind, const offspring_distribution& dist,
                                          const w_pool& pool, int n, std::int64_t reps,
                                          double lambda, random_stream& rng,
                                          std::int64_t max_steps = 1'000'000);

}  // namespace gwalk
