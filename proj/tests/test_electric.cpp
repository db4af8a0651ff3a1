#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <limits>

#include "gwalk/electric.hpp"
#include "gwalk/error.hpp"
#include "gwalk/tree.hpp"

using namespace gwalk;

namespace {

struct fixture {
    offspring_distribution det = make_distribution({{2, 1.0}});
    offspring_distribution mixed = make_distribution({{1, 0.5}, {3, 0.5}});
    offspring_distribution path = make_distribution({{1, 1.0 - 1e-12}, {2, 1e-12}});
    w_pool det_pool, mixed_pool;

    fixture() {
        random_stream rs(1);
        det_pool = build_w_pool(det, 1000, 5, rs);
        mixed_pool = build_w_pool(mixed, 20000, 30, rs);
    }
};

fixture& fx() {
    static fixture f;
    return f;
}

}  // namespace

TEST_CASE("regular tree conductance is b / level") {
    // hand reduction: each level contributes b in parallel, levels in series
    tree t(tree_kind::gw, fx().det, fx().det_pool, random_stream(3));
    for (int level : {1, 2, 4, 8}) {
        CHECK(std::abs(effective_conductance(t, level, 2.0) - 2.0 / level) <= 1e-10);
    }
}

TEST_CASE("level one gives d_o parallel unit edges") {
    tree t(tree_kind::gw, fx().mixed, fx().mixed_pool, random_stream(5));
    CHECK(effective_conductance(t, 1, 2.0) == doctest::Approx(double(t.degree(t.root()))));
}

TEST_CASE("single path is a pure series sum") {
    // C^-1 = sum_{n=0}^{l-1} lambda^n
    w_pool pool;
    pool.samples.assign(100, 1.0);
    tree t(tree_kind::gw, fx().path, pool, random_stream(7));
    const double lambda = 1.7;
    for (int level : {1, 2, 5}) {
        double inv = 0;
        for (int n = 0; n < level; ++n) inv += std::pow(lambda, n);
        CHECK(effective_conductance(t, level, lambda) == doctest::Approx(1.0 / inv));
    }
}

TEST_CASE("rayleigh monotonicity and the escape/visits identity") {
    for (int i = 0; i < 10; ++i) {
        tree t(tree_kind::gw, fx().mixed, fx().mixed_pool, random_stream(100 + i));
        double prev = std::numeric_limits<double>::infinity();
        for (int level = 1; level <= 6; ++level) {
            const double c = effective_conductance(t, level, 2.0);
            CHECK(c <= prev + 1e-12);
            prev = c;
            random_stream rs(0);
            auto rep = escape_stats(t, level, 2.0, 0, rs);
            CHECK(std::abs(rep.analytic.escape_prob * rep.analytic.expected_root_visits - 1.0) <=
                  1e-12);
        }
    }
}

TEST_CASE("deterministic escape numbers at level 4") {
    tree t(tree_kind::gw, fx().det, fx().det_pool, random_stream(9));
    random_stream rs(11);
    auto rep = escape_stats(t, 4, 2.0, 20000, rs);
    CHECK(rep.analytic.conductance == doctest::Approx(0.5));
    CHECK(rep.analytic.escape_prob == doctest::Approx(0.25));
    CHECK(rep.analytic.expected_root_visits == doctest::Approx(4.0));
    CHECK(std::abs(rep.mc_escape - 0.25) <= 3 * rep.mc_escape_stderr);
    CHECK(std::abs(rep.mc_root_visits - 4.0) <= 3 * rep.mc_root_visits_stderr);
}

TEST_CASE("level one escape is certain") {
    tree t(tree_kind::gw, fx().mixed, fx().mixed_pool, random_stream(13));
    random_stream rs(17);
    auto rep = escape_stats(t, 1, 2.0, 500, rs);
    CHECK(rep.analytic.escape_prob == doctest::Approx(1.0));
    CHECK(rep.mc_escape == doctest::Approx(1.0));
}

TEST_CASE("monte carlo escape tracks the analytic value on random trees") {
    random_stream rs(19);
    for (int i = 0; i < 10; ++i) {
        tree t(tree_kind::gw, fx().mixed, fx().mixed_pool, random_stream(300 + i));
        auto rep = escape_stats(t, 8, 2.0, 4000, rs);
        CHECK(std::abs(rep.mc_escape - rep.analytic.escape_prob) <=
              3 * rep.mc_escape_stderr + 1e-9);
    }
}

TEST_CASE("cv_bound formula values") {
    CHECK(cv_bound(10, 10) == doctest::Approx(40.0 * std::exp(-5.0)));
    CHECK(cv_bound(10, 10) == doctest::Approx(0.2695).epsilon(1e-3));
    CHECK(cv_bound(1, 1) == doctest::Approx(4.0 * std::exp(-0.5)));
    CHECK(cv_bound(1, 1) > 1.0);  // vacuous regime
}

TEST_CASE("excursion visit counts: geometric mean at depth one") {
    // binary tree, lambda = m = 2: each visit to level 1 returns to the
    // root w.p. 1/2, so the count is geometric with mean 2
    random_stream rs(23);
    auto rep = excursion_visit_counts(tree_kind::gw, fx().det, fx().det_pool, 1, 4000, 2.0, rs);
    CHECK(rep.mean == doctest::Approx(2.0).epsilon(0.1));
    auto rep0 = excursion_visit_counts(tree_kind::gw, fx().det, fx().det_pool, 0, 200, 2.0, rs);
    CHECK(rep0.mean == 0.0);
}

TEST_CASE("excursion visit counts stay bounded in n") {
    random_stream rs(29);
    double first = 0, last = 0;
    for (int n : {1, 5, 10}) {
        auto rep =
            excursion_visit_counts(tree_kind::gw, fx().mixed, fx().mixed_pool, n, 3000, 2.0, rs);
        if (n == 1) first = rep.mean;
        last = rep.mean;
        CHECK(rep.mean < 20.0);
    }
    CHECK(last < first * 4 + 1.0);
}
