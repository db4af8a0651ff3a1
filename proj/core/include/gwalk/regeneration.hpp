#pragma once

#include <cstdint>
#include <vector>

namespace gwalk {

/// One inter-regeneration block of a transient walk: elapsed time and depth
/// gained. Always dt >= 1 and 1 <= dx <= dt.
struct regeneration_block {
    std::int64_t dt = 0;
    std::int64_t dx = 0;
};

/// Times t whose depth strictly exceeds every earlier depth and is never
/// undercut afterwards within the record. confirm_horizon = 0 confirms
/// against the full remaining record; a positive horizon additionally drops
/// candidates within that many steps of the record end.
std::vector<std::int64_t> detect_regenerations(const std::vector<std::int32_t>& depths,
                                               std::int64_t confirm_horizon = 0);

/// Blocks between consecutive regeneration times (the pre-tau_1 segment is
/// not a block).
std::vector<regeneration_block> make_blocks(const std::vector<std::int64_t>& times,
                                            const std::vector<std::int32_t>& depths);

struct block_estimates_result {
    double v = 0;
    double v_stderr = 0;
    double sigma2 = 0;
    double sigma2_stderr = 0;
    std::size_t blocks = 0;
};

/// Renewal estimators v = sum dx / sum dt and
/// sigma^2 = sum (dx - v dt)^2 / sum dt, with bootstrap standard errors
/// over blocks. Throws INSUFFICIENT_BLOCKS below 30 blocks.
block_estimates_result block_estimates(const std::vector<regeneration_block>& blocks);

/// Normalized samples (depth[n] - v n) / sqrt(sigma2 n) at the requested
/// times, for pooling across replicas into a KS test.
std::vector<double> clt_series(const std::vector<std::int32_t>& depths, double v, double sigma2,
                               const std::vector<std::int64_t>& n_grid);

}  // namespace gwalk
