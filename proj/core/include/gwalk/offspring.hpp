#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "gwalk/rng.hpp"

namespace gwalk {

enum class degree_mode { plain, size_biased, igwr_root };

/// Validated finite-support offspring law {p_k}, k >= 1, mean m > 1.
/// Finite support keeps all three tilted samplers exact CDF tables and
/// guarantees exponential moments.
class offspring_distribution {
  public:
    const std::vector<int>& support() const noexcept { return ks_; }
    const std::vector<double>& probs() const noexcept { return ps_; }
    double mean_m() const noexcept { return mean_; }
    double variance() const noexcept { return variance_; }
    int max_k() const noexcept { return ks_.back(); }

    /// Probability of k under the requested tilt:
    /// plain p_k, size-biased k p_k / m, igwr-root (m+k) p_k / (2m).
    double prob(int k, degree_mode mode = degree_mode::plain) const;

    int sample(degree_mode mode, random_stream& rng) const;

    bool deterministic() const noexcept { return ks_.size() == 1; }

    /// Config-string form "k1:p1,k2:p2,...".
    std::string to_string() const;

    friend offspring_distribution make_distribution(const std::map<int, double>& probs);

  private:
    offspring_distribution() = default;

    std::vector<int> ks_;
    std::vector<double> ps_;
    std::vector<double> cdf_plain_;
    std::vector<double> cdf_size_biased_;
    std::vector<double> cdf_igwr_root_;
    double mean_ = 0;
    double variance_ = 0;
};

/// Validates and normalizes a law given as {k -> p_k}. Zero-probability
/// entries are dropped. Throws P0_POSITIVE, SUM_NOT_ONE (|sum-1| > 1e-9),
/// MEAN_NOT_SUPERCRITICAL (m <= 1) or BAD_SUPPORT.
offspring_distribution make_distribution(const std::map<int, double>& probs);

/// Parses "k1:p1,k2:p2,..." into a validated law.
offspring_distribution parse_distribution(const std::string& text);

int sample_degree(const offspring_distribution& dist, degree_mode mode, random_stream& rng);

/// Sample pool approximating the law of the martingale limit W (E W = 1).
/// Built by iterating the fixed point W =d sum_{j<=d} W_j / m from the
/// constant-1 pool; each round is one resampling sweep.
struct w_pool {
    std::vector<double> samples;
    int rounds = 0;

    std::size_t pool_size() const noexcept { return samples.size(); }

    double draw(random_stream& rng) const {
        return samples[rng.uniform_below(samples.size())];
    }

    double mean() const;
    double second_moment() const;
};

/// rounds = 0 yields the all-ones pool. Entries are floored at 1e-9 so
/// downstream rescaling never divides by zero (W > 0 a.s. when p_0 = 0).
w_pool build_w_pool(const offspring_distribution& dist, std::size_t pool_size, int rounds,
                    random_stream& rng);

/// Empirical eta = E W^2 from the pool, with its standard error.
struct eta_estimate {
    double eta = 0;
    double stderr_ = 0;
};
eta_estimate estimate_eta(const offspring_distribution& dist, const w_pool& pool);

}  // namespace gwalk
