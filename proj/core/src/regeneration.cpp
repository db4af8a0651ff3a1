#include "gwalk/regeneration.hpp"

#include <cmath>
#include <limits>

#include "gwalk/error.hpp"
#include "gwalk/rng.hpp"

namespace gwalk {

std::vector<std::int64_t> detect_regenerations(const std::vector<std::int32_t>& depths,
                                               std::int64_t confirm_horizon) {
    std::vector<std::int64_t> times;
    const std::int64_t len = std::int64_t(depths.size());
    if (len == 0) return times;

    // suffix_min[t] = min depths[t..end]
    std::vector<std::int32_t> suffix_min(depths.size());
    std::int32_t acc = std::numeric_limits<std::int32_t>::max();
    for (std::int64_t t = len - 1; t >= 0; --t) {
        acc = std::min(acc, depths[std::size_t(t)]);
        suffix_min[std::size_t(t)] = acc;
    }

    std::int32_t running_max = depths[0];
    for (std::int64_t t = 1; t < len; ++t) {
        const std::int32_t d = depths[std::size_t(t)];
        if (d > running_max && suffix_min[std::size_t(t)] >= d) {
            if (confirm_horizon <= 0 || t + confirm_horizon <= len - 1) times.push_back(t);
        }
        running_max = std::max(running_max, d);
    }
    return times;
}

std::vector<regeneration_block> make_blocks(const std::vector<std::int64_t>& times,
                                            const std::vector<std::int32_t>& depths) {
    std::vector<regeneration_block> blocks;
    if (times.size() < 2) return blocks;
    blocks.reserve(times.size() - 1);
    for (std::size_t i = 0; i + 1 < times.size(); ++i) {
        regeneration_block b;
        b.dt = times[i + 1] - times[i];
        b.dx = depths[std::size_t(times[i + 1])] - depths[std::size_t(times[i])];
        blocks.push_back(b);
    }
    return blocks;
}

block_estimates_result block_estimates(const std::vector<regeneration_block>& blocks) {
    if (blocks.size() < 30)
        throw error(errc::insufficient_blocks,
                    "need at least 30 regeneration blocks, got " + std::to_string(blocks.size()));

    auto evaluate = [](const std::vector<regeneration_block>& bs) {
        double sum_dt = 0, sum_dx = 0;
        for (const auto& b : bs) {
            sum_dt += double(b.dt);
            sum_dx += double(b.dx);
        }
        const double v = sum_dx / sum_dt;
        double resid = 0;
        for (const auto& b : bs) {
            const double r = double(b.dx) - v * double(b.dt);
            resid += r * r;
        }
        return std::pair<double, double>{v, resid / sum_dt};
    };

    block_estimates_result out;
    const auto [v, s2] = evaluate(blocks);
    out.v = v;
    out.sigma2 = s2;
    out.blocks = blocks.size();

    constexpr int kBoot = 500;
    random_stream rs(0x5b0075u);  // fixed seed: estimates stay reproducible
    std::vector<regeneration_block> sample(blocks.size());
    double v_sum = 0, v_sq = 0, s_sum = 0, s_sq = 0;
    for (int b = 0; b < kBoot; ++b) {
        for (auto& s : sample) s = blocks[rs.uniform_below(blocks.size())];
        const auto [bv, bs2] = evaluate(sample);
        v_sum += bv;
        v_sq += bv * bv;
        s_sum += bs2;
        s_sq += bs2 * bs2;
    }
    const double vb = v_sum / kBoot, sb = s_sum / kBoot;
    out.v_stderr = std::sqrt(std::max(v_sq / kBoot - vb * vb, 0.0));
    out.sigma2_stderr = std::sqrt(std::max(s_sq / kBoot - sb * sb, 0.0));
    return out;
}

std::vector<double> clt_series(const std::vector<std::int32_t>& depths, double v, double sigma2,
                               const std::vector<std::int64_t>& n_grid) {
    std::vector<double> out;
    out.reserve(n_grid.size());
    for (std::int64_t n : n_grid) {
        if (n <= 0 || n >= std::int64_t(depths.size())) continue;
        out.push_back((double(depths[std::size_t(n)]) - v * double(n)) /
                      std::sqrt(sigma2 * double(n)));
    }
    return out;
}

}  // namespace gwalk
