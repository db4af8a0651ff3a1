#include "gwalk/coupling.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_map>
#include <unordered_set>

#include "gwalk/error.hpp"

namespace gwalk {

namespace {

std::vector<excursion_record> decompose_impl(const walk_record& rec, tree& t, bool keep_partial) {
    std::vector<excursion_record> out;
    const std::size_t len = rec.node_ids.size();
    std::unordered_set<node_id> visited_now;  // visited inside the open excursion

    bool in_exc = false;
    excursion_record cur;
    node_id interior_parent = k_no_node;

    auto close = [&](std::int64_t eta, bool complete) {
        cur.eta = eta;
        cur.complete = complete;
        cur.visited_ids.assign(visited_now.begin(), visited_now.end());
        std::sort(cur.visited_ids.begin(), cur.visited_ids.end());
        std::unordered_set<node_id> bar(visited_now.begin(), visited_now.end());
        for (node_id v : cur.visited_ids)
            for (node_id c : t.materialize_children(v)) bar.insert(c);
        cur.subtree_ids.assign(bar.begin(), bar.end());
        std::sort(cur.subtree_ids.begin(), cur.subtree_ids.end());
        out.push_back(std::move(cur));
        cur = excursion_record{};
        visited_now.clear();
        in_exc = false;
    };

    for (std::size_t n = 1; n < len; ++n) {
        const node_id v = rec.node_ids[n];
        if (!in_exc) {
            if (rec.fresh[n]) {
                // stepping onto a leaf of the explored region starts an excursion
                in_exc = true;
                cur.tau = std::int64_t(n);
                cur.start_node = v;
                interior_parent = rec.node_ids[n - 1];
                visited_now.insert(v);
            }
        } else {
            if (v == interior_parent) {
                close(std::int64_t(n), true);
            } else {
                visited_now.insert(v);
            }
        }
    }
    if (in_exc && keep_partial) close(std::int64_t(len), false);
    return out;
}

}  // namespace

std::vector<excursion_record> decompose_excursions(const walk_record& x_record, tree& t) {
    return decompose_impl(x_record, t, false);
}

namespace {

struct y_builder {
    tree& yt;
    walk_record& rec;
    std::vector<std::uint8_t> visited;

    void mark_and_record(node_id v) {
        if (visited.size() <= v) visited.resize(std::max<std::size_t>(v + 1, yt.size()), 0);
        rec.node_ids.push_back(v);
        rec.levels.push_back(yt.at(v).h);
        rec.depths.push_back(yt.at(v).dist_to_ray);
        rec.fresh.push_back(visited[v] ? 0 : 1);
        visited[v] = 1;
    }
};

// copies the excursion's visited subtree (plus boundary offspring as
// deferred leaves) from the X arena under the glue point, and returns the
// X-id -> Y-id map for pasting the path
std::unordered_map<node_id, node_id> glue_excursion(tree& xt, tree& yt,
                                                    const excursion_record& exc,
                                                    node_id glue_point) {
    std::unordered_map<node_id, node_id> to_y;
    to_y.reserve(exc.visited_ids.size() * 2);
    auto visited_in_exc = [&](node_id x) {
        return std::binary_search(exc.visited_ids.begin(), exc.visited_ids.end(), x);
    };

    yt.set_degree(glue_point, xt.at(exc.start_node).degree);
    to_y.emplace(exc.start_node, glue_point);

    std::vector<std::pair<node_id, node_id>> queue{{exc.start_node, glue_point}};
    for (std::size_t q = 0; q < queue.size(); ++q) {
        const auto [x_id, y_id] = queue[q];
        for (node_id xc : xt.materialize_children(x_id)) {
            const bool inner = visited_in_exc(xc);
            const node_id yc = yt.graft_child(y_id, inner ? xt.at(xc).degree : -1);
            to_y.emplace(xc, yc);
            if (inner) queue.emplace_back(xc, yc);
        }
        yt.finish_graft(y_id);
    }
    return to_y;
}

}  // namespace

coupled_run build_coupled_pair(const offspring_distribution& dist, const w_pool& pool,
                               std::int64_t steps, random_stream& rng, int surplus_factor) {
    const double lambda = dist.mean_m();
    random_stream x_tree_rng = rng.split(1), x_walk_rng = rng.split(2);
    random_stream y_tree_rng = rng.split(3), y_walk_rng = rng.split(4);

    tree x_tree(tree_kind::gw, dist, pool, x_tree_rng);
    walk_record x_record = run_walk(x_tree, lambda, steps * surplus_factor, x_walk_rng);
    std::vector<excursion_record> excursions = decompose_impl(x_record, x_tree, true);

    tree y_tree = tree::coupled_shell(dist, pool, y_tree_rng);
    coupled_run run{std::move(x_record), walk_record{}, std::move(y_tree), {}, {}, {}, {}, {}, {}, {}};
    run.y_record.seed = y_walk_rng.seed();

    y_builder yb{run.igw_tree, run.y_record, {}};
    tree& yt = run.igw_tree;

    node_id cur = yt.root();
    yb.mark_and_record(cur);
    std::int64_t n = 0;
    std::size_t next_exc = 0;

    auto arrive = [&](node_id v) -> node_id {
        // stepping on a leaf starts the next pasted excursion
        if (next_exc >= excursions.size())
            throw error(errc::excursions_exhausted, "the X run produced too few excursions");
        const excursion_record& exc = excursions[next_exc];
        ++next_exc;
        const auto to_y = glue_excursion(x_tree, yt, exc, v);
        run.hat_taus.push_back(n);
        const std::int64_t pasted_len = exc.eta - exc.tau;
        for (std::int64_t j = 1; j < pasted_len && n < steps; ++j) {
            const node_id y = to_y.at(run.x_record.node_ids[std::size_t(exc.tau + j)]);
            ++n;
            yb.mark_and_record(y);
        }
        if (!exc.complete && n < steps)
            throw error(errc::excursions_exhausted,
                        "the trailing X excursion is shorter than the Y horizon");
        run.hat_etas.push_back(run.hat_taus.back() + pasted_len);
        if (n >= steps) return v;
        // forced step closing the excursion: Y_eta = ancestor of the glue point
        const node_id up = yt.at(v).parent;
        ++n;
        yb.mark_and_record(up);
        return up;
    };

    // the root is a leaf of the initial shell; its first move is forced up
    if (yt.deferred(cur) && n < steps) {
        cur = yt.parent_of(cur);
        ++n;
        yb.mark_and_record(cur);
        if (yt.deferred(cur)) cur = arrive(cur);
    }
    while (n < steps) {
        cur = transition(yt, cur, lambda, y_walk_rng);
        ++n;
        yb.mark_and_record(cur);
        if (yt.deferred(cur) && n < steps) cur = arrive(cur);
    }

    yt.complete();

    run.taus.reserve(excursions.size());
    run.etas.reserve(excursions.size());
    for (const auto& e : excursions) {
        run.taus.push_back(e.tau);
        if (e.complete) run.etas.push_back(e.eta);
    }
    if (!excursions.empty() && !excursions.back().complete) excursions.pop_back();
    run.excursions = std::move(excursions);

    auto rb = reflected_and_backtrack(run.y_record);
    run.r_n = std::move(rb.first);
    run.b_n = std::move(rb.second);
    return run;
}

coupled_run build_coupled_pair_retrying(const offspring_distribution& dist, const w_pool& pool,
                                        std::int64_t steps, random_stream& rng, int max_surplus) {
    for (int surplus = 4;; surplus *= 2) {
        random_stream attempt = rng.split(std::uint64_t(surplus));
        try {
            return build_coupled_pair(dist, pool, steps, attempt, surplus);
        } catch (const error& e) {
            if (e.code() != errc::excursions_exhausted || surplus >= max_surplus) throw;
        }
    }
}

std::pair<std::vector<std::int32_t>, std::vector<std::int32_t>> reflected_and_backtrack(
    const walk_record& y_record) {
    const std::size_t len = y_record.levels.size();
    std::vector<std::int32_t> r(len), b(len);
    std::int32_t run_min = 0;
    std::int32_t ray_min = 0;
    bool seen_ray = false;
    std::int32_t back = 0;
    for (std::size_t i = 0; i < len; ++i) {
        const std::int32_t h = y_record.levels[i];
        run_min = std::min(run_min, h);
        r[i] = h - run_min;
        if (y_record.depths[i] == 0) {
            if (seen_ray) back = std::max(back, h - ray_min);
            ray_min = seen_ray ? std::min(ray_min, h) : h;
            seen_ray = true;
        }
        b[i] = back;
    }
    return {std::move(r), std::move(b)};
}

gap_report coupling_gap(const coupled_run& run, double alpha) {
    gap_report rep;
    rep.worst_slack = std::numeric_limits<double>::infinity();
    const std::int64_t y_len = std::int64_t(run.y_record.steps());
    const std::int64_t x_len = std::int64_t(run.x_record.steps());

    auto off_excursion_steps = [](const std::vector<std::int64_t>& taus,
                                  const std::vector<std::int64_t>& etas, std::int64_t n) {
        std::int64_t total = 0;
        for (std::size_t i = 0; i < taus.size() && taus[i] <= n; ++i) {
            const std::int64_t prev_eta = i == 0 ? 0 : (i - 1 < etas.size() ? etas[i - 1] : taus[i]);
            total += taus[i] - prev_eta;
        }
        return total;
    };

    for (std::int64_t n = 1; n <= std::min(x_len, y_len); n *= 2) {
        gap_checkpoint cp;
        cp.n = n;
        cp.abs_x = run.x_record.depths[std::size_t(n)];
        cp.delta = off_excursion_steps(run.taus, run.etas, n);
        cp.delta_hat = off_excursion_steps(run.hat_taus, run.hat_etas, n);
        cp.backtrack = run.b_n[std::size_t(std::min(n, y_len))];
        cp.bound = 2.0 * std::pow(double(n), alpha) + double(cp.backtrack);

        const std::int64_t window = cp.delta + cp.delta_hat;
        const std::int64_t lo = std::max<std::int64_t>(0, n - window);
        const std::int64_t hi = std::min(y_len, n + window);
        double best = std::numeric_limits<double>::infinity();
        for (std::int64_t s = lo; s <= hi; ++s) {
            const double diff = std::abs(double(cp.abs_x) - double(run.r_n[std::size_t(s)]));
            if (diff < best) {
                best = diff;
                cp.r_best = run.r_n[std::size_t(s)];
            }
        }
        cp.best_diff = best;
        cp.ok = best <= cp.bound;
        rep.worst_slack = std::min(rep.worst_slack, cp.bound - best);
        rep.all_ok = rep.all_ok && cp.ok;
        rep.checkpoints.push_back(cp);
    }
    return rep;
}

}  // namespace gwalk
