#include "gwalk/tree.hpp"

#include <cmath>
#include <cstdio>
#include <stdexcept>
#include <string>

#include "gwalk/error.hpp"

namespace gwalk {

namespace {
constexpr double kWFloor = 1e-9;
}

tree::tree(tree_kind kind, const offspring_distribution& dist, const w_pool& pool,
           random_stream rng, std::size_t node_budget)
    : kind_(kind), dist_(&dist), pool_(&pool), rng_(rng), budget_(node_budget) {
    nodes_.reserve(64);
    switch (kind_) {
        case tree_kind::gw:
            root_ = new_node(k_no_node, dist_->sample(degree_mode::plain, rng_), 0, 0, 0);
            break;
        case tree_kind::size_biased_gw:
            root_ = new_node(k_no_node, dist_->sample(degree_mode::size_biased, rng_), 0, 0,
                             node::kSpine);
            spine_.push_back(root_);
            break;
        case tree_kind::igw:
        case tree_kind::igwr: {
            const degree_mode root_mode =
                kind_ == tree_kind::igw ? degree_mode::plain : degree_mode::igwr_root;
            root_ = new_node(k_no_node, dist_->sample(root_mode, rng_), 0, 0, node::kSpine);
            spine_.push_back(root_);
            extend_spine_once();
            break;
        }
    }
}

tree tree::coupled_shell(const offspring_distribution& dist, const w_pool& pool,
                         random_stream rng, std::size_t node_budget) {
    tree t(tree_kind::igw, dist, pool, rng, node_budget);
    t.nodes_.clear();
    t.spine_.clear();
    t.manual_ = true;
    // root is a leaf until an excursion tree is glued onto it
    t.root_ = t.new_node(k_no_node, -1, 0, 0, node::kSpine);
    t.spine_.push_back(t.root_);
    t.extend_spine_once();
    return t;
}

node_id tree::new_node(node_id parent, int degree, int h, int dist, std::uint8_t flags) {
    ensure_budget(1);
    node n;
    n.parent = parent;
    n.degree = degree;
    n.h = h;
    n.dist_to_ray = dist;
    n.flags = flags;
    nodes_.push_back(n);
    return node_id(nodes_.size() - 1);
}

void tree::ensure_budget(std::size_t extra) const {
    if (nodes_.size() + extra > budget_)
        throw error(errc::node_budget,
                    "materializing " + std::to_string(extra) + " nodes would exceed budget " +
                        std::to_string(budget_));
}

int tree::degree(node_id id) {
    node& n = nodes_[id];
    if (n.degree < 0) {
        if (manual_)
            throw std::logic_error("degree of a deferred node queried during coupling");
        // remaining leaves of a completed coupled tree grow fresh GW trees
        n.degree = dist_->sample(degree_mode::plain, rng_);
    }
    return n.degree;
}

std::vector<node_id> tree::children_if_built(node_id id) const {
    const node& n = nodes_[id];
    std::vector<node_id> out;
    if (!n.children_built()) return out;
    out.reserve(std::size_t(n.degree));
    if (n.spine_child != k_no_node) out.push_back(n.spine_child);
    const int fresh = n.degree - (n.spine_child != k_no_node ? 1 : 0);
    for (int i = 0; i < fresh; ++i) out.push_back(n.first_child + node_id(i));
    return out;
}

node_id tree::child(node_id id, int index) const {
    const node& n = nodes_[id];
    if (n.spine_child != k_no_node) {
        if (index == 0) return n.spine_child;
        return n.first_child + node_id(index - 1);
    }
    return n.first_child + node_id(index);
}

std::vector<node_id> tree::materialize_children(node_id id) {
    if (nodes_[id].children_built()) return children_if_built(id);
    const int d = degree(id);
    const bool has_spine_child = nodes_[id].spine_child != k_no_node;
    const int fresh = d - (has_spine_child ? 1 : 0);
    ensure_budget(std::size_t(fresh));

    // decide the trunk continuation before creating children
    int trunk_index = -1;
    if (kind_ == tree_kind::size_biased_gw && nodes_[id].on_spine())
        trunk_index = int(rng_.uniform_below(std::uint64_t(d)));

    const node_id first = node_id(nodes_.size());
    const int parent_h = nodes_[id].h;
    // on ray trees dist_to_ray restarts at 1 under a spine vertex; on rooted
    // trees it is plain depth from the root, trunk or not
    const int child_dist = (has_ray() && nodes_[id].on_spine()) ? 1 : nodes_[id].dist_to_ray + 1;
    for (int i = 0; i < fresh; ++i) {
        int child_degree;
        std::uint8_t flags = 0;
        if (manual_) {
            child_degree = -1;
        } else if (i == trunk_index) {
            child_degree = dist_->sample(degree_mode::size_biased, rng_);
            flags = node::kSpine;
        } else {
            child_degree = dist_->sample(degree_mode::plain, rng_);
        }
        new_node(id, child_degree, parent_h + 1, child_dist, flags);
        if (flags & node::kSpine) spine_.push_back(node_id(nodes_.size() - 1));
    }
    nodes_[id].first_child = first;
    nodes_[id].flags |= node::kBuilt;
    return children_if_built(id);
}

node_id tree::parent_of(node_id id) {
    if (nodes_[id].parent != k_no_node) return nodes_[id].parent;
    if (has_ray() && id == spine_.back()) {
        extend_spine_once();
        return nodes_[id].parent;
    }
    return k_no_node;
}

node_id tree::extend_spine_once() {
    if (!has_ray()) throw error(errc::kind_mismatch, "tree has no ray to extend");
    const node_id deepest = spine_.back();
    const int d = dist_->sample(degree_mode::size_biased, rng_);
    const node_id p = new_node(k_no_node, d, nodes_[deepest].h - 1, 0, node::kSpine);
    nodes_[p].spine_child = deepest;
    nodes_[deepest].parent = p;
    spine_.push_back(p);

    // keep the exact W recursion when the assigned region grows upward:
    // fresh siblings draw from the pool, the new spine vertex is computed
    // bottom-up from its children
    if (nodes_[deepest].w_set()) {
        materialize_children(p);
        double sum = nodes_[deepest].w;
        const int fresh = d - 1;
        for (int i = 0; i < fresh; ++i) {
            const node_id cid = nodes_[p].first_child + node_id(i);
            const double w = pool_draw(nodes_[cid].degree);
            nodes_[cid].w = w;
            nodes_[cid].flags |= node::kWSet;
            sum += w;
        }
        nodes_[p].w = sum / dist_->mean_m();
        nodes_[p].flags |= node::kWSet;
    }
    return p;
}

node_id tree::extend_ray(int target_depth) {
    if (!has_ray()) throw error(errc::kind_mismatch, "extend_ray requires an igw/igwr tree");
    while (spine_depth() < target_depth) extend_spine_once();
    return spine_[std::size_t(target_depth)];
}

std::int64_t tree::descendants_at(node_id id, int n) {
    if (n == 0) return 1;
    std::vector<node_id> frontier{id}, next;
    try {
        for (int depth = 1; depth <= n; ++depth) {
            next.clear();
            // offspring side includes the spine child: the ray neighbor toward
            // the root is an offspring, so its subtree belongs to D_n(v)
            for (node_id v : frontier) {
                for (node_id c : materialize_children(v)) next.push_back(c);
            }
            frontier.swap(next);
        }
    } catch (const error& e) {
        if (e.code() == errc::node_budget)
            throw error(errc::depth_budget, "descendant count exceeded the node budget");
        throw;
    }
    return std::int64_t(frontier.size());
}

double tree::pool_draw(int degree) {
    // one-level composite: the conditional law of W given the offspring
    // count is (1/m) * sum of degree independent W draws
    double sum = 0;
    for (int j = 0; j < degree; ++j) sum += pool_->draw(rng_);
    return std::max(sum / dist_->mean_m(), kWFloor);
}

void tree::group_assign_children(node_id parent) {
    materialize_children(parent);
    const auto kids = children_if_built(parent);
    bool any_set = false, all_set = true;
    for (node_id c : kids) {
        if (nodes_[c].w_set())
            any_set = true;
        else
            all_set = false;
    }
    if (all_set) return;
    if (any_set)
        throw std::logic_error("partially assigned sibling group");
    double sum = 0;
    std::vector<double> raw(kids.size());
    for (std::size_t i = 0; i < kids.size(); ++i) {
        raw[i] = pool_draw(nodes_[kids[i]].degree);
        sum += raw[i];
    }
    const double scale = dist_->mean_m() * nodes_[parent].w / sum;
    for (std::size_t i = 0; i < kids.size(); ++i) {
        nodes_[kids[i]].w = raw[i] * scale;
        nodes_[kids[i]].flags |= node::kWSet;
    }
}

double tree::assign_w(node_id id) {
    if (nodes_[id].w_set()) return nodes_[id].w;

    std::vector<node_id> chain;
    node_id cur = id;
    while (!nodes_[cur].w_set()) {
        chain.push_back(cur);
        const node_id p = nodes_[cur].parent;  // stop at the existing top, never extend here
        if (p == k_no_node) break;
        cur = p;
    }
    if (!nodes_[cur].w_set()) {
        // topmost materialized vertex is a frontier node: composite draw
        nodes_[cur].w = pool_draw(degree(cur));
        nodes_[cur].flags |= node::kWSet;
        chain.pop_back();
    }
    for (auto it = chain.rbegin(); it != chain.rend(); ++it) {
        if (nodes_[*it].w_set()) continue;  // covered by a sibling's group
        group_assign_children(nodes_[*it].parent);
    }
    return nodes_[id].w;
}

void tree::set_degree(node_id id, int d) {
    if (d < 1) throw std::logic_error("set_degree needs a positive offspring count");
    nodes_[id].degree = d;
}

node_id tree::graft_child(node_id parent, int deg) {
    node& p = nodes_[parent];
    if (p.children_built()) throw std::logic_error("graft under a built node");
    const int dist = p.on_spine() ? 1 : p.dist_to_ray + 1;
    const node_id c = new_node(parent, deg, p.h + 1, dist, 0);
    if (nodes_[parent].first_child == k_no_node) nodes_[parent].first_child = c;
    return c;
}

void tree::finish_graft(node_id id) { nodes_[id].flags |= node::kBuilt; }

void tree::complete() { manual_ = false; }

std::string tree::dump() const {
    std::string out;
    char line[128];
    for (std::size_t i = 0; i < nodes_.size(); ++i) {
        const node& n = nodes_[i];
        std::snprintf(line, sizeof line, "%zu,%lld,%d,%d,%.17g\n", i,
                      n.parent == k_no_node ? -1LL : (long long)n.parent, n.h, n.degree,
                      n.w_set() ? n.w : std::nan(""));
        out += line;
    }
    return out;
}

}  // namespace gwalk
