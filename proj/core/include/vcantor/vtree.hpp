#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "vcantor/catalog.hpp"
#include "vcantor/random.hpp"

namespace vcantor {

inline constexpr std::uint32_t kNoIndex = 0xFFFFFFFFu;

/// Assignment for one type: the system it uses and the types of its children.
/// Types are 0-based internally (0..V-1); exports add one.
struct TypeRow {
  std::uint32_t system = 0;
  std::vector<std::uint32_t> child_types;

  bool operator==(const TypeRow&) const = default;
};

struct Environment {
  std::vector<TypeRow> rows;  // one per type
  bool is_neck = false;

  bool operator==(const Environment&) const = default;
};

/// True iff every child type of every row is the same.
bool all_child_types_equal(std::span<const TypeRow> rows) noexcept;

/// Draws one environment. Stream order: V categorical draws for the systems of
/// types 0..V-1, then the child types row by row with uniform_index(V).
Environment sample_environment(const Catalog& catalog, std::size_t V, Xoshiro256ss& rng);

struct TreeNode {
  std::uint32_t parent = kNoIndex;        // index in the previous generation
  std::uint32_t child_position = 0;       // 0-based slot under the parent
  std::uint32_t type = 0;
  std::uint32_t system = kNoIndex;        // system used to spawn children; kNoIndex at the last generation
  std::uint32_t first_child = kNoIndex;   // children are contiguous in the next generation
  double r = 1.0;                         // cumulative ratio product
  double m = 1.0;                         // cumulative weight product
  double left = 0.0;                      // S_ii(a)
  double right = 1.0;                     // S_ii(b)

  [[nodiscard]] double rm() const noexcept { return r * m; }
};

struct TreeOptions {
  std::size_t node_cap = 10'000'000;
};

/// Finite-depth V-variable tree. Generation g holds its nodes in left-to-right order.
class VTree {
 public:
  VTree(Catalog catalog, std::size_t V, std::uint32_t root_type, std::vector<Environment> environments,
        TreeOptions options = {});

  [[nodiscard]] const Catalog& catalog() const noexcept { return catalog_; }
  [[nodiscard]] std::size_t V() const noexcept { return V_; }
  [[nodiscard]] std::uint32_t root_type() const noexcept { return root_type_; }
  [[nodiscard]] std::size_t depth() const noexcept { return environments_.size(); }
  [[nodiscard]] const std::vector<Environment>& environments() const noexcept { return environments_; }
  [[nodiscard]] std::span<const TreeNode> generation(std::size_t g) const;
  [[nodiscard]] const TreeNode& node(std::size_t g, std::size_t i) const;
  [[nodiscard]] std::size_t node_count() const noexcept { return node_count_; }

  /// Generations 1..depth whose environment is a neck, ascending.
  [[nodiscard]] const std::vector<std::size_t>& neck_levels() const noexcept { return neck_levels_; }

  /// Half-open index range of the descendants of node (g, i) in generation `target` >= g.
  [[nodiscard]] std::pair<std::size_t, std::size_t> descendant_range(std::size_t g, std::size_t i,
                                                                     std::size_t target) const;

  /// Tree rooted at a node of generation g with the given type; depth shrinks by g.
  /// Every node of generation g with that type roots an identical copy.
  [[nodiscard]] VTree subtree(std::size_t g, std::uint32_t type) const;

 private:
  Catalog catalog_;
  std::size_t V_;
  std::uint32_t root_type_;
  std::vector<Environment> environments_;
  std::vector<std::vector<TreeNode>> generations_;
  std::vector<std::size_t> neck_levels_;
  std::size_t node_count_ = 0;
};

/// Samples the root type (unless pinned) and then environments E^1..E^depth from `rng`.
VTree build_tree(const Catalog& catalog, std::size_t V, std::size_t depth,
                 std::optional<std::uint32_t> root_type, Xoshiro256ss& rng, TreeOptions options = {});

struct CutMember {
  std::size_t generation = 0;     // neck level n(l)
  std::size_t index = 0;          // position within the generation
  std::size_t previous_neck = 0;  // n(l-1), 0 for the root
  double product = 1.0;           // r_ii * m_ii
  double previous_product = 1.0;  // product at the ancestor on level n(l-1)
};

struct CutSet {
  std::size_t k = 0;
  std::vector<CutMember> members;  // sorted left to right
  std::size_t M = 0;               // |Lambda_k|
  double T = 1.0;                  // M / sum of member products
  std::size_t y = 0;               // largest neck gap n(l) - n(l-1) among members
  double min_product = 1.0;
  double max_product = 1.0;
};

/// Lambda_k: nodes on neck levels where r*m first falls to e^{-k} or below.
/// Throws DepthExhausted if some path does not get there within the tree.
CutSet cut_set(const VTree& tree, std::size_t k);

/// True iff every node of the last generation has exactly one ancestor-or-self in the set.
bool covers_exactly_once(const VTree& tree, const CutSet& cut);

/// Per-type propagation of sum (m r)^x over one stretch of environments starting from
/// a single node of `start_type`. Returns the total over all types at the end.
double propagate_scale_sum(const Catalog& catalog, std::size_t V, std::uint32_t start_type,
                           std::span<const Environment> environments, double x);

struct NeckScaleSum {
  double x = 0.0;
  std::size_t blocks = 0;
  std::vector<double> block_log_sums;  // log of sum over block l, relative to its start
  double log_sum = 0.0;                // sum of block_log_sums
  double factorized_sum = 1.0;         // exp(log_sum)
  double direct_sum = 0.0;             // sum over generation n(k) of (m r)^x
};

/// Sum of (m r)^x over generation n(k), both directly and as a product of block sums.
NeckScaleSum scale_sum_at_neck(const VTree& tree, double x, std::size_t k);

}  // namespace vcantor
