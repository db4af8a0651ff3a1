#include "gwalk/offspring.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

#include "gwalk/error.hpp"

namespace gwalk {

namespace {

std::vector<double> cumulative(const std::vector<double>& weights) {
    std::vector<double> cdf(weights.size());
    double acc = 0;
    for (std::size_t i = 0; i < weights.size(); ++i) {
        acc += weights[i];
        cdf[i] = acc;
    }
    cdf.back() = 1.0;  // clamp rounding so the last bin always catches
    return cdf;
}

int sample_cdf(const std::vector<int>& ks, const std::vector<double>& cdf, random_stream& rng) {
    const double u = rng.uniform01();
    for (std::size_t i = 0; i + 1 < cdf.size(); ++i) {
        if (u < cdf[i]) return ks[i];
    }
    return ks.back();
}

}  // namespace

offspring_distribution make_distribution(const std::map<int, double>& probs) {
    double sum = 0;
    for (const auto& [k, p] : probs) {
        if (k < 0) throw error(errc::bad_support, "offspring count k=" + std::to_string(k) + " is negative");
        if (p < 0) throw error(errc::bad_support, "probability for k=" + std::to_string(k) + " is negative");
        if (k == 0 && p > 0) throw error(errc::p0_positive, "law must have p_0 = 0");
        sum += p;
    }
    if (std::abs(sum - 1.0) > 1e-9)
        throw error(errc::sum_not_one, "probabilities sum to " + std::to_string(sum));

    offspring_distribution d;
    for (const auto& [k, p] : probs) {
        if (k == 0 || p == 0) continue;
        d.ks_.push_back(k);
        d.ps_.push_back(p / sum);
    }
    if (d.ks_.empty()) throw error(errc::bad_support, "law has empty support");

    double m = 0, m2 = 0;
    for (std::size_t i = 0; i < d.ks_.size(); ++i) {
        m += d.ks_[i] * d.ps_[i];
        m2 += double(d.ks_[i]) * d.ks_[i] * d.ps_[i];
    }
    if (m <= 1.0)
        throw error(errc::mean_not_supercritical, "mean m=" + std::to_string(m) + " must exceed 1");
    d.mean_ = m;
    d.variance_ = m2 - m * m;

    std::vector<double> plain = d.ps_, biased(d.ks_.size()), igwr(d.ks_.size());
    for (std::size_t i = 0; i < d.ks_.size(); ++i) {
        biased[i] = d.ks_[i] * d.ps_[i] / m;
        igwr[i] = (m + d.ks_[i]) * d.ps_[i] / (2.0 * m);
    }
    d.cdf_plain_ = cumulative(plain);
    d.cdf_size_biased_ = cumulative(biased);
    d.cdf_igwr_root_ = cumulative(igwr);
    return d;
}

offspring_distribution parse_distribution(const std::string& text) {
    std::map<int, double> probs;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        const auto colon = item.find(':');
        if (colon == std::string::npos)
            throw error(errc::config_invalid, "offspring entry '" + item + "' is not k:p");
        try {
            const int k = std::stoi(item.substr(0, colon));
            const double p = std::stod(item.substr(colon + 1));
            probs[k] += p;
        } catch (const std::exception&) {
            throw error(errc::config_invalid, "offspring entry '" + item + "' is not k:p");
        }
    }
    if (probs.empty()) throw error(errc::config_invalid, "offspring law is empty");
    return make_distribution(probs);
}

double offspring_distribution::prob(int k, degree_mode mode) const {
    for (std::size_t i = 0; i < ks_.size(); ++i) {
        if (ks_[i] != k) continue;
        switch (mode) {
            case degree_mode::plain: return ps_[i];
            case degree_mode::size_biased: return ks_[i] * ps_[i] / mean_;
            case degree_mode::igwr_root: return (mean_ + ks_[i]) * ps_[i] / (2.0 * mean_);
        }
    }
    return 0.0;
}

int offspring_distribution::sample(degree_mode mode, random_stream& rng) const {
    switch (mode) {
        case degree_mode::plain: return sample_cdf(ks_, cdf_plain_, rng);
        case degree_mode::size_biased: return sample_cdf(ks_, cdf_size_biased_, rng);
        case degree_mode::igwr_root: return sample_cdf(ks_, cdf_igwr_root_, rng);
    }
    return ks_.back();
}

std::string offspring_distribution::to_string() const {
    std::string out;
    char buf[64];
    for (std::size_t i = 0; i < ks_.size(); ++i) {
        std::snprintf(buf, sizeof buf, "%s%d:%.17g", i ? "," : "", ks_[i], ps_[i]);
        out += buf;
    }
    return out;
}

int sample_degree(const offspring_distribution& dist, degree_mode mode, random_stream& rng) {
    return dist.sample(mode, rng);
}

double w_pool::mean() const {
    double s = 0;
    for (double x : samples) s += x;
    return samples.empty() ? 0 : s / double(samples.size());
}

double w_pool::second_moment() const {
    double s = 0;
    for (double x : samples) s += x * x;
    return samples.empty() ? 0 : s / double(samples.size());
}

w_pool build_w_pool(const offspring_distribution& dist, std::size_t pool_size, int rounds,
                    random_stream& rng) {
    constexpr double kFloor = 1e-9;
    w_pool pool;
    pool.samples.assign(pool_size, 1.0);
    pool.rounds = rounds;
    if (dist.deterministic()) return pool;  // W == 1 on the deterministic tree

    const double m = dist.mean_m();
    std::vector<double> next(pool_size);
    for (int r = 0; r < rounds; ++r) {
        double sum = 0;
        for (std::size_t i = 0; i < pool_size; ++i) {
            const int d = dist.sample(degree_mode::plain, rng);
            double s = 0;
            for (int j = 0; j < d; ++j) s += pool.samples[rng.uniform_below(pool_size)];
            next[i] = s / m;
            sum += next[i];
        }
        // resampling lets the empirical mean random-walk across rounds;
        // renormalizing pins E W = 1 exactly, as the constant-1 start intends
        const double scale = double(pool_size) / sum;
        for (std::size_t i = 0; i < pool_size; ++i)
            next[i] = std::max(next[i] * scale, kFloor);
        pool.samples.swap(next);
    }
    return pool;
}

eta_estimate estimate_eta(const offspring_distribution&, const w_pool& pool) {
    const std::size_t n = pool.samples.size();
    double s2 = 0, s4 = 0;
    for (double x : pool.samples) {
        const double x2 = x * x;
        s2 += x2;
        s4 += x2 * x2;
    }
    eta_estimate e;
    e.eta = s2 / double(n);
    const double var = s4 / double(n) - e.eta * e.eta;
    e.stderr_ = std::sqrt(std::max(var, 0.0) / double(n));
    return e;
}

}  // namespace gwalk
