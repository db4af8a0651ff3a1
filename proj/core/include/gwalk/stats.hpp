#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "gwalk/offspring.hpp"
#include "gwalk/rng.hpp"

namespace gwalk {

struct test_report {
    double statistic = 0;
    double p_value = 0;
    std::int64_t n_samples = 0;
    bool pass = false;
    std::string context;
};

/// Two-sided Kolmogorov-Smirnov statistic against a continuous cdf,
/// evaluated at both jump sides of the empirical cdf.
double ks_statistic(std::vector<double> samples, const std::function<double(double)>& cdf);

/// Pearson chi-square of observed counts against expected probabilities
/// (dof = categories - 1), p-value via the regularized upper incomplete
/// gamma. Throws CATEGORY_MISMATCH for mismatched or <2 categories.
test_report chi_square(const std::vector<std::int64_t>& observed,
                       const std::vector<double>& expected, double significance = 0.01);

/// Regularized incomplete gamma Q(a,x) = Gamma(a,x)/Gamma(a), accurate to
/// ~1e-12 (series for x < a+1, continued fraction otherwise).
double gamma_q(double a, double x);

/// Asymptotic Kolmogorov p-value for a two-sided KS statistic d over n
/// samples: P(sup > d) = 2 sum (-1)^{k-1} exp(-2 k^2 n d^2).
double kolmogorov_p(double d, std::int64_t n);

double normal_cdf(double x);

/// CDF of |N(0, sigma2)|.
double half_normal_cdf(double x, double sigma2 = 1.0);

/// Environment-from-the-particle stationarity: runs k steps of the
/// critically biased walk on fresh IGWR trees, re-roots at X_k and
/// chi-squares the new root's offspring count against (m+k) p_k / (2m).
test_report igwr_invariance_test(const offspring_distribution& dist, const w_pool& pool,
                                 int k_steps, std::int64_t reps, random_stream& rng,
                                 double significance = 0.01, int parallelism = 1);

/// Reversibility at the root: frequencies of (root degree j, up-step, new
/// root degree k) against the mirrored (root degree k, down-step, child
/// degree j), all support pairs within 3 pooled standard errors.
test_report detailed_balance_test(const offspring_distribution& dist, const w_pool& pool,
                                  std::int64_t reps, random_stream& rng, int parallelism = 1);

struct occupation_report {
    double mean = 0;
    double stderr_ = 0;
    double ratio = 0;  // mean / t^(1/2 + alpha + 0.05)
    std::int64_t reps = 0;
};

/// Mean time spent within distance t^alpha of Ray during t steps of the
/// critically biased walk on fresh IGW trees.
occupation_report occupation_near_ray(const offspring_distribution& dist, const w_pool& pool,
                                      double alpha, std::int64_t t, std::int64_t reps,
                                      random_stream& rng, int parallelism = 1);

/// Meta-run protocol for exact-null statistical tests: repeats a flaky test
/// and passes when at least min_pass_fraction of the runs pass.
test_report meta_run(int runs, double min_pass_fraction,
                     const std::function<test_report(int)>& fn);

}  // namespace gwalk
