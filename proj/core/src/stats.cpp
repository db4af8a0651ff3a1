#include "gwalk/stats.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "gwalk/error.hpp"
#include "gwalk/parallel.hpp"
#include "gwalk/tree.hpp"
#include "gwalk/walk.hpp"

namespace gwalk {

double ks_statistic(std::vector<double> samples, const std::function<double(double)>& cdf) {
    if (samples.empty()) throw error(errc::empty_samples, "ks_statistic needs samples");
    std::sort(samples.begin(), samples.end());
    const double n = double(samples.size());
    double d = 0;
    for (std::size_t i = 0; i < samples.size(); ++i) {
        const double f = cdf(samples[i]);
        d = std::max(d, f - double(i) / n);
        d = std::max(d, double(i + 1) / n - f);
    }
    return d;
}

namespace {

double gamma_p_series(double a, double x) {
    double term = 1.0 / a, sum = term;
    for (int k = 1; k < 1000; ++k) {
        term *= x / (a + k);
        sum += term;
        if (std::abs(term) < std::abs(sum) * 1e-15) break;
    }
    return sum * std::exp(-x + a * std::log(x) - std::lgamma(a));
}

double gamma_q_cf(double a, double x) {
    // Lentz's continued fraction for Q(a,x)
    const double tiny = 1e-300;
    double b = x + 1 - a, c = 1 / tiny, d = 1 / b, h = d;
    for (int i = 1; i < 1000; ++i) {
        const double an = -double(i) * (double(i) - a);
        b += 2;
        d = an * d + b;
        if (std::abs(d) < tiny) d = tiny;
        c = b + an / c;
        if (std::abs(c) < tiny) c = tiny;
        d = 1 / d;
        const double delta = d * c;
        h *= delta;
        if (std::abs(delta - 1.0) < 1e-15) break;
    }
    return h * std::exp(-x + a * std::log(x) - std::lgamma(a));
}

}  // namespace

double gamma_q(double a, double x) {
    if (x < 0 || a <= 0) return 1.0;
    if (x == 0) return 1.0;
    return x < a + 1 ? 1.0 - gamma_p_series(a, x) : gamma_q_cf(a, x);
}

double kolmogorov_p(double d, std::int64_t n) {
    const double x = (std::sqrt(double(n)) + 0.12 + 0.11 / std::sqrt(double(n))) * d;
    double sum = 0;
    for (int k = 1; k <= 100; ++k) {
        const double term = 2.0 * ((k % 2) ? 1.0 : -1.0) * std::exp(-2.0 * k * k * x * x);
        sum += term;
        if (std::abs(term) < 1e-12) break;
    }
    return std::clamp(sum, 0.0, 1.0);
}

double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }

double half_normal_cdf(double x, double sigma2) {
    if (x <= 0) return 0.0;
    return std::erf(x / std::sqrt(2.0 * sigma2));
}

test_report chi_square(const std::vector<std::int64_t>& observed,
                       const std::vector<double>& expected, double significance) {
    if (observed.size() != expected.size() || observed.size() < 2)
        throw error(errc::category_mismatch,
                    "chi-square needs >= 2 matching categories, got " +
                        std::to_string(observed.size()) + " observed vs " +
                        std::to_string(expected.size()) + " expected");
    std::int64_t total = 0;
    for (auto o : observed) total += o;
    double stat = 0;
    for (std::size_t i = 0; i < observed.size(); ++i) {
        const double e = double(total) * expected[i];
        const double diff = double(observed[i]) - e;
        stat += diff * diff / e;
    }
    test_report rep;
    rep.statistic = stat;
    rep.p_value = gamma_q(0.5 * double(observed.size() - 1), 0.5 * stat);
    rep.n_samples = total;
    rep.pass = rep.p_value > significance;
    return rep;
}

test_report igwr_invariance_test(const offspring_distribution& dist, const w_pool& pool,
                                 int k_steps, std::int64_t reps, random_stream& rng,
                                 double significance, int parallelism) {
    const auto& support = dist.support();
    random_stream base = rng.split(0x16a7);
    const int shards = std::max(parallelism, 1);
    std::vector<std::vector<std::int64_t>> counts(std::size_t(shards),
                                                  std::vector<std::int64_t>(support.size(), 0));
    const double lambda = dist.mean_m();

    parallel_replicas(shards, parallelism, [&](std::int64_t shard) {
        const std::int64_t lo = reps * shard / shards, hi = reps * (shard + 1) / shards;
        auto& local = counts[std::size_t(shard)];
        for (std::int64_t r = lo; r < hi; ++r) {
            random_stream rs = base.split(std::uint64_t(r));
            tree t(tree_kind::igwr, dist, pool, rs.split(1));
            random_stream walk_rng = rs.split(2);
            node_id cur = t.root();
            for (int s = 0; s < k_steps; ++s) cur = transition(t, cur, lambda, walk_rng);
            // re-rooting at X_k turns its ray-ward neighbor into the ancestor,
            // so the shifted root's offspring count is just d_{X_k}
            const int d = t.degree(cur);
            for (std::size_t i = 0; i < support.size(); ++i)
                if (support[i] == d) ++local[i];
        }
    });

    std::vector<std::int64_t> observed(support.size(), 0);
    for (const auto& local : counts)
        for (std::size_t i = 0; i < support.size(); ++i) observed[i] += local[i];
    std::vector<double> expected(support.size());
    for (std::size_t i = 0; i < support.size(); ++i)
        expected[i] = dist.prob(support[i], degree_mode::igwr_root);

    if (dist.deterministic()) {
        // single category: the law is degenerate and trivially stationary
        test_report rep;
        rep.statistic = 0;
        rep.p_value = 1.0;
        rep.n_samples = reps;
        rep.pass = observed[0] == reps;
        rep.context = "igwr_invariance degenerate law";
        return rep;
    }
    test_report rep = chi_square(observed, expected, significance);
    char buf[64];
    std::snprintf(buf, sizeof buf, "igwr_invariance k=%d", k_steps);
    rep.context = buf;
    return rep;
}

test_report detailed_balance_test(const offspring_distribution& dist, const w_pool& pool,
                                  std::int64_t reps, random_stream& rng, int parallelism) {
    const auto& support = dist.support();
    const std::size_t s = support.size();
    random_stream base = rng.split(0xdba1);
    const int shards = std::max(parallelism, 1);
    // E[j][k]: root degree j, up-step, new root degree k
    // F[k][j]: root degree k, down-step, child degree j
    std::vector<std::vector<std::int64_t>> e_counts(std::size_t(shards),
                                                    std::vector<std::int64_t>(s * s, 0));
    std::vector<std::vector<std::int64_t>> f_counts(std::size_t(shards),
                                                    std::vector<std::int64_t>(s * s, 0));
    const double lambda = dist.mean_m();

    auto index_of = [&](int degree) {
        for (std::size_t i = 0; i < s; ++i)
            if (support[i] == degree) return i;
        return s;
    };

    parallel_replicas(shards, parallelism, [&](std::int64_t shard) {
        const std::int64_t lo = reps * shard / shards, hi = reps * (shard + 1) / shards;
        auto& e_local = e_counts[std::size_t(shard)];
        auto& f_local = f_counts[std::size_t(shard)];
        for (std::int64_t r = lo; r < hi; ++r) {
            random_stream rs = base.split(std::uint64_t(r));
            tree t(tree_kind::igwr, dist, pool, rs.split(1));
            random_stream walk_rng = rs.split(2);
            const node_id root = t.root();
            const std::size_t j = index_of(t.degree(root));
            const node_id nxt = transition(t, root, lambda, walk_rng);
            const std::size_t k = index_of(t.degree(nxt));
            if (t.at(root).parent == nxt)
                ++e_local[j * s + k];
            else
                ++f_local[j * s + k];
        }
    });

    std::vector<double> e_freq(s * s, 0), f_freq(s * s, 0);
    for (int shard = 0; shard < shards; ++shard)
        for (std::size_t i = 0; i < s * s; ++i) {
            e_freq[i] += double(e_counts[std::size_t(shard)][i]);
            f_freq[i] += double(f_counts[std::size_t(shard)][i]);
        }

    double worst_z = 0;
    const double n = double(reps);
    for (std::size_t j = 0; j < s; ++j) {
        for (std::size_t k = 0; k < s; ++k) {
            const double pe = e_freq[j * s + k] / n;
            const double pf = f_freq[k * s + j] / n;
            const double se = std::sqrt((pe * (1 - pe) + pf * (1 - pf)) / n);
            if (se == 0) continue;  // pair outside the support on both sides
            worst_z = std::max(worst_z, std::abs(pe - pf) / se);
        }
    }
    test_report rep;
    rep.statistic = worst_z;
    rep.p_value = std::erfc(worst_z / std::sqrt(2.0));
    rep.n_samples = reps;
    rep.pass = worst_z <= 3.0;
    rep.context = "detailed_balance";
    return rep;
}

occupation_report occupation_near_ray(const offspring_distribution& dist, const w_pool& pool,
                                      double alpha, std::int64_t t_steps, std::int64_t reps,
                                      random_stream& rng, int parallelism) {
    const double radius = std::pow(double(t_steps), alpha);
    random_stream base = rng.split(0x0cc);
    std::vector<double> per_rep(std::size_t(reps), 0);
    const double lambda = dist.mean_m();

    parallel_replicas(reps, parallelism, [&](std::int64_t r) {
        random_stream rs = base.split(std::uint64_t(r));
        tree t(tree_kind::igw, dist, pool, rs.split(1));
        random_stream walk_rng = rs.split(2);
        node_id cur = t.root();
        std::int64_t count = 0;
        for (std::int64_t i = 1; i <= t_steps; ++i) {
            cur = transition(t, cur, lambda, walk_rng);
            if (double(t.at(cur).dist_to_ray) <= radius) ++count;
        }
        per_rep[std::size_t(r)] = double(count);
    });

    occupation_report rep;
    rep.reps = reps;
    double sum = 0, sq = 0;
    for (double v : per_rep) {
        sum += v;
        sq += v * v;
    }
    rep.mean = sum / double(reps);
    const double var = sq / double(reps) - rep.mean * rep.mean;
    rep.stderr_ = std::sqrt(std::max(var, 0.0) / double(reps));
    rep.ratio = rep.mean / std::pow(double(t_steps), 0.5 + alpha + 0.05);
    return rep;
}

test_report meta_run(int runs, double min_pass_fraction,
                     const std::function<test_report(int)>& fn) {
    int passed = 0;
    for (int i = 0; i < runs; ++i)
        if (fn(i).pass) ++passed;
    test_report rep;
    rep.statistic = double(passed) / double(runs);
    rep.p_value = rep.statistic;
    rep.n_samples = runs;
    rep.pass = rep.statistic >= min_pass_fraction;
    char buf[64];
    std::snprintf(buf, sizeof buf, "meta_run %d/%d passed", passed, runs);
    rep.context = buf;
    return rep;
}

}  // namespace gwalk
