#pragma once

#include <cstdint>
#include <vector>

#include "gwalk/rng.hpp"
#include "gwalk/tree.hpp"

namespace gwalk {

/// Time-indexed trajectory summary. Entry t covers X_t for t = 0..steps.
/// depths hold |X_t| on rooted trees and d(X_t, Ray) on ray trees; a step is
/// fresh iff the vertex was never visited before.
struct walk_record {
    std::vector<std::int32_t> levels;
    std::vector<std::int32_t> depths;
    std::vector<node_id> node_ids;
    std::vector<std::uint8_t> fresh;
    std::uint64_t seed = 0;

    std::size_t steps() const noexcept { return levels.empty() ? 0 : levels.size() - 1; }
};

/// One lambda-biased step from node_id: to the ancestor with probability
/// lambda/(lambda+d_v), to each offspring with probability 1/(lambda+d_v).
/// A rooted tree's root moves to a uniform offspring. Materializes children
/// and extends the spine as needed.
node_id transition(tree& t, node_id id, double lambda, random_stream& rng);

/// Runs `steps` transitions from the root, recording levels, depths and
/// fresh flags. Deterministic given the tree realization and the stream.
walk_record run_walk(tree& t, double lambda, std::int64_t steps, random_stream& rng);

}  // namespace gwalk
