#pragma once

#include <cstdint>
#include <vector>

#include "gwalk/offspring.hpp"
#include "gwalk/rng.hpp"

namespace gwalk {

enum class tree_kind { gw, size_biased_gw, igw, igwr };

using node_id = std::uint32_t;
constexpr node_id k_no_node = 0xffffffffu;

/// Lazily materialized arena of tree nodes. Four measures are supported:
///   gw            rooted Galton-Watson tree, every degree plain
///   size_biased_gw  rooted tree with a size-biased trunk (root and trunk
///                 vertices size-biased, one trunk child per trunk vertex)
///   igw           tree with a marked ray; spine vertices below the root
///                 carry size-biased degrees, the root is plain
///   igwr          igw with root degree law (m+k) p_k / (2m)
///
/// Levels h follow the horocycle convention: the root sits at h = 0,
/// children at h+1, spine ancestors at h-1. dist_to_ray is 0 on the spine
/// and equals depth-from-root on rooted kinds.
///
/// Node ids are arena indices and stay valid for the tree's lifetime.
/// A tree is single-writer: one context materializes/extends/assigns at a
/// time; concurrent reads of already-built regions are fine.
class tree {
  public:
    struct node {
        node_id parent = k_no_node;
        node_id first_child = k_no_node;  // fresh children are contiguous
        node_id spine_child = k_no_node;  // pre-existing ray child, spine vertices only
        std::int32_t degree = -1;         // offspring count; -1 = not yet sampled
        std::int32_t h = 0;
        std::int32_t dist_to_ray = 0;
        double w = 0;
        std::uint8_t flags = 0;

        static constexpr std::uint8_t kBuilt = 1;
        static constexpr std::uint8_t kSpine = 2;
        static constexpr std::uint8_t kWSet = 4;

        bool children_built() const noexcept { return flags & kBuilt; }
        bool on_spine() const noexcept { return flags & kSpine; }
        bool w_set() const noexcept { return flags & kWSet; }
    };

    tree(tree_kind kind, const offspring_distribution& dist, const w_pool& pool,
         random_stream rng, std::size_t node_budget = 50'000'000);

    tree_kind kind() const noexcept { return kind_; }
    const offspring_distribution& dist() const noexcept { return *dist_; }
    const w_pool& wpool() const noexcept { return *pool_; }
    node_id root() const noexcept { return root_; }
    std::size_t size() const noexcept { return nodes_.size(); }
    std::size_t node_budget() const noexcept { return budget_; }
    bool has_ray() const noexcept { return kind_ == tree_kind::igw || kind_ == tree_kind::igwr; }

    const node& at(node_id id) const { return nodes_[id]; }

    /// Offspring count; samples lazily for deferred nodes (coupling grafts).
    int degree(node_id id);

    /// Builds the node's children if absent and returns them (spine child
    /// included). Idempotent. Throws NODE_BUDGET.
    std::vector<node_id> materialize_children(node_id id);

    /// Children without forcing: empty if not yet built.
    std::vector<node_id> children_if_built(node_id id) const;

    node_id child(node_id id, int index) const;

    /// Ancestor one step toward root (rooted kinds) or along the ray.
    /// For ray kinds the spine grows on demand; rooted roots return k_no_node.
    node_id parent_of(node_id id);

    /// Ensures spine vertices at levels 0,-1,...,-target_depth exist and
    /// returns the deepest one. Throws KIND_MISMATCH on rooted trees.
    node_id extend_ray(int target_depth);

    int spine_depth() const noexcept { return int(spine_.size()) - 1; }
    const std::vector<node_id>& spine() const noexcept { return spine_; }

    std::pair<int, int> node_coords(node_id id) const {
        const node& n = nodes_[id];
        return {n.h, n.dist_to_ray};
    }

    /// |D_n(v)|: descendants of v at distance n, materializing as needed.
    /// Throws DEPTH_BUDGET if the expansion would exceed the node budget.
    std::int64_t descendants_at(node_id id, int n);

    /// W value for the node, drawn/rescaled on demand so that the recursion
    /// w_v = sum_children w / m holds exactly everywhere it is defined.
    double assign_w(node_id id);

    /// Debug dump, one line per node: node_id,parent_id,h,degree,w.
    std::string dump() const;

    // --- low-level construction hooks used by the coupling ---------------

    /// Ray-tree shell for the excursion coupling: root with *deferred*
    /// degree (a leaf until a tree is glued there) and lazily grown spine
    /// whose fresh off-spine children are also deferred.
    static tree coupled_shell(const offspring_distribution& dist, const w_pool& pool,
                              random_stream rng, std::size_t node_budget = 50'000'000);

    bool deferred(node_id id) const { return nodes_[id].degree < 0; }

    /// Fixes a deferred node's offspring count (glue point of an excursion).
    void set_degree(node_id id, int degree);

    /// Appends one child with a prescribed degree (-1 = deferred) under a
    /// node whose children are being grafted; parent must not be built yet
    /// via materialize_children.
    node_id graft_child(node_id parent, int degree);

    /// Marks a grafted node's children complete.
    void finish_graft(node_id id);

    /// Leaves manual grafting mode: deferred degrees henceforth sample the
    /// plain law on demand, i.e. fresh GW trees hang off the remaining
    /// leaves.
    void complete();

  private:
    node_id new_node(node_id parent, int degree, int h, int dist, std::uint8_t flags);
    int sample_child_degree(bool parent_on_trunk, bool trunk_child);
    void ensure_budget(std::size_t extra) const;
    node_id extend_spine_once();
    void group_assign_children(node_id parent);
    double pool_draw(int degree);

    tree_kind kind_;
    const offspring_distribution* dist_;
    const w_pool* pool_;
    random_stream rng_;
    std::size_t budget_;
    std::vector<node> nodes_;
    node_id root_ = 0;
    std::vector<node_id> spine_;  // ray for igw/igwr (h=0,-1,...), trunk for size_biased_gw
    bool manual_ = false;         // coupled_shell until complete()
};

/// Spec names for tree construction.
inline tree new_tree(const offspring_distribution& dist, tree_kind kind, const w_pool& pool,
                     random_stream rng, std::size_t node_budget = 50'000'000) {
    return tree(kind, dist, pool, rng, node_budget);
}

}  // namespace gwalk
