#include "gwalk/walk.hpp"

#include <algorithm>

namespace gwalk {

node_id transition(tree& t, node_id id, double lambda, random_stream& rng) {
    const int d = t.degree(id);
    const bool rooted_root = !t.has_ray() && t.at(id).parent == k_no_node;
    if (rooted_root) {
        t.materialize_children(id);
        return t.child(id, int(rng.uniform_below(std::uint64_t(d))));
    }
    const double u = rng.uniform01() * (lambda + d);
    if (u < lambda) return t.parent_of(id);
    const int idx = std::min(d - 1, int(u - lambda));
    t.materialize_children(id);
    return t.child(id, idx);
}

walk_record run_walk(tree& t, double lambda, std::int64_t steps, random_stream& rng) {
    walk_record rec;
    rec.seed = rng.seed();
    rec.levels.reserve(std::size_t(steps) + 1);
    rec.depths.reserve(std::size_t(steps) + 1);
    rec.node_ids.reserve(std::size_t(steps) + 1);
    rec.fresh.reserve(std::size_t(steps) + 1);

    std::vector<std::uint8_t> visited;
    auto mark = [&](node_id v) {
        if (visited.size() <= v) visited.resize(std::max<std::size_t>(v + 1, t.size()), 0);
        const bool first = !visited[v];
        visited[v] = 1;
        return first;
    };

    node_id cur = t.root();
    rec.node_ids.push_back(cur);
    rec.levels.push_back(t.at(cur).h);
    rec.depths.push_back(t.at(cur).dist_to_ray);
    rec.fresh.push_back(1);
    mark(cur);

    for (std::int64_t i = 0; i < steps; ++i) {
        cur = transition(t, cur, lambda, rng);
        rec.node_ids.push_back(cur);
        rec.levels.push_back(t.at(cur).h);
        rec.depths.push_back(t.at(cur).dist_to_ray);
        rec.fresh.push_back(mark(cur) ? 1 : 0);
    }
    return rec;
}

}  // namespace gwalk
