#include "vcantor/vtree.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "vcantor/error.hpp"

namespace vcantor {

bool all_child_types_equal(std::span<const TypeRow> rows) noexcept {
  std::optional<std::uint32_t> seen;
  for (const auto& row : rows) {
    for (auto t : row.child_types) {
      if (!seen) seen = t;
      else if (*seen != t) return false;
    }
  }
  return true;
}

Environment sample_environment(const Catalog& catalog, std::size_t V, Xoshiro256ss& rng) {
  if (V == 0) throw Error(ErrorKind::ArgumentError, "V must be at least 1");
  Environment env;
  env.rows.resize(V);
  for (auto& row : env.rows) row.system = static_cast<std::uint32_t>(rng.categorical(catalog.probabilities));
  for (auto& row : env.rows) {
    const std::size_t n = catalog.systems[row.system].size();
    row.child_types.resize(n);
    for (auto& t : row.child_types) t = static_cast<std::uint32_t>(rng.uniform_index(V));
  }
  env.is_neck = all_child_types_equal(env.rows);
  return env;
}

VTree::VTree(Catalog catalog, std::size_t V, std::uint32_t root_type, std::vector<Environment> environments,
             TreeOptions options)
    : catalog_(std::move(catalog)), V_(V), root_type_(root_type), environments_(std::move(environments)) {
  if (V_ == 0) throw Error(ErrorKind::ArgumentError, "V must be at least 1");
  if (root_type_ >= V_) throw Error(ErrorKind::ArgumentError, "root type outside 0..V-1");
  for (std::size_t g = 0; g < environments_.size(); ++g) {
    auto& env = environments_[g];
    if (env.rows.size() != V_) {
      throw Error(ErrorKind::ArgumentError,
                  "environment " + std::to_string(g + 1) + " has " + std::to_string(env.rows.size()) +
                      " rows, expected V=" + std::to_string(V_));
    }
    for (const auto& row : env.rows) {
      if (row.system >= catalog_.systems.size()) {
        throw Error(ErrorKind::ArgumentError, "environment " + std::to_string(g + 1) + " uses unknown system");
      }
      if (row.child_types.size() != catalog_.systems[row.system].size()) {
        throw Error(ErrorKind::ArgumentError,
                    "environment " + std::to_string(g + 1) + " has a row with the wrong number of child types");
      }
      for (auto t : row.child_types) {
        if (t >= V_) throw Error(ErrorKind::ArgumentError, "child type outside 0..V-1");
      }
    }
    env.is_neck = all_child_types_equal(env.rows);
    if (env.is_neck) neck_levels_.push_back(g + 1);
  }

  const double a = catalog_.base.a;
  const double b = catalog_.base.b;
  generations_.reserve(environments_.size() + 1);
  TreeNode root;
  root.type = root_type_;
  root.left = a;
  root.right = b;
  generations_.push_back({root});
  node_count_ = 1;

  for (std::size_t g = 0; g < environments_.size(); ++g) {
    auto& parents = generations_[g];
    const auto& env = environments_[g];
    std::size_t next_size = 0;
    for (const auto& p : parents) next_size += catalog_.systems[env.rows[p.type].system].size();
    if (node_count_ + next_size > options.node_cap) {
      throw Error(ErrorKind::TreeTooLarge, "generation " + std::to_string(g + 1) + " would bring the tree to " +
                                               std::to_string(node_count_ + next_size) + " nodes (cap " +
                                               std::to_string(options.node_cap) + ")");
    }
    std::vector<TreeNode> children;
    children.reserve(next_size);
    for (std::size_t pi = 0; pi < parents.size(); ++pi) {
      auto& p = parents[pi];
      const auto& row = env.rows[p.type];
      const auto& sys = catalog_.systems[row.system];
      p.system = row.system;
      p.first_child = static_cast<std::uint32_t>(children.size());
      for (std::size_t i = 0; i < sys.size(); ++i) {
        const auto& map = sys.maps[i];
        TreeNode c;
        c.parent = static_cast<std::uint32_t>(pi);
        c.child_position = static_cast<std::uint32_t>(i);
        c.type = row.child_types[i];
        c.r = p.r * map.ratio;
        c.m = p.m * sys.weights[i];
        c.left = p.left + p.r * (map(a) - a);
        c.right = p.left + p.r * (map(b) - a);
        children.push_back(c);
      }
    }
    node_count_ += children.size();
    generations_.push_back(std::move(children));
  }
}

std::span<const TreeNode> VTree::generation(std::size_t g) const {
  if (g >= generations_.size()) {
    throw Error(ErrorKind::IndexError, "generation " + std::to_string(g) + " beyond depth " + std::to_string(depth()));
  }
  return generations_[g];
}

const TreeNode& VTree::node(std::size_t g, std::size_t i) const {
  const auto gen = generation(g);
  if (i >= gen.size()) throw Error(ErrorKind::IndexError, "node index out of range");
  return gen[i];
}

std::pair<std::size_t, std::size_t> VTree::descendant_range(std::size_t g, std::size_t i,
                                                            std::size_t target) const {
  if (target < g || target > depth()) throw Error(ErrorKind::IndexError, "descendant generation out of range");
  std::size_t lo = i;
  std::size_t hi = i;  // inclusive
  for (std::size_t level = g; level < target; ++level) {
    const auto& gen = generations_[level];
    const auto& last = gen[hi];
    lo = gen[lo].first_child;
    hi = last.first_child + catalog_.systems[last.system].size() - 1;
  }
  return {lo, hi + 1};
}

VTree VTree::subtree(std::size_t g, std::uint32_t type) const {
  if (g > depth()) throw Error(ErrorKind::IndexError, "subtree generation beyond depth");
  std::vector<Environment> rest(environments_.begin() + static_cast<std::ptrdiff_t>(g), environments_.end());
  return VTree(catalog_, V_, type, std::move(rest));
}

VTree build_tree(const Catalog& catalog, std::size_t V, std::size_t depth, std::optional<std::uint32_t> root_type,
                 Xoshiro256ss& rng, TreeOptions options) {
  if (V == 0) throw Error(ErrorKind::ArgumentError, "V must be at least 1");
  const std::uint32_t root = root_type ? *root_type : static_cast<std::uint32_t>(rng.uniform_index(V));
  std::vector<Environment> envs;
  envs.reserve(depth);
  for (std::size_t g = 0; g < depth; ++g) envs.push_back(sample_environment(catalog, V, rng));
  return VTree(catalog, V, root, std::move(envs), options);
}

CutSet cut_set(const VTree& tree, std::size_t k) {
  CutSet cut;
  cut.k = k;
  if (k == 0) {
    cut.members.push_back({0, 0, 0, 1.0, 1.0});
  } else {
    const double threshold = std::exp(-static_cast<double>(k));
    struct Pending {
      std::size_t index;
      double product;
    };
    std::vector<Pending> frontier{{0, 1.0}};
    std::size_t previous = 0;
    for (std::size_t level : tree.neck_levels()) {
      if (frontier.empty()) break;
      std::vector<Pending> next;
      const auto gen = tree.generation(level);
      for (const auto& f : frontier) {
        const auto [lo, hi] = tree.descendant_range(previous, f.index, level);
        for (std::size_t i = lo; i < hi; ++i) {
          const double p = gen[i].rm();
          if (p <= threshold) {
            cut.members.push_back({level, i, previous, p, f.product});
          } else {
            next.push_back({i, p});
          }
        }
      }
      frontier = std::move(next);
      previous = level;
    }
    if (!frontier.empty()) {
      double worst = 0.0;
      for (const auto& f : frontier) worst = std::max(worst, f.product);
      const auto ext = scale_extrema(tree.catalog());
      const double per_level = std::log(ext.r_sup * ext.m_sup);
      const auto levels = static_cast<std::size_t>(std::ceil(std::log(threshold / worst) / per_level));
      const std::size_t reach = previous + std::max<std::size_t>(levels, 1);
      const std::size_t hint = reach > tree.depth() ? reach - tree.depth() : 1;
      throw DepthExhausted("cut set Lambda_" + std::to_string(k) + " not reached within depth " +
                               std::to_string(tree.depth()),
                           hint);
    }
  }

  std::sort(cut.members.begin(), cut.members.end(), [&](const CutMember& x, const CutMember& y) {
    return tree.node(x.generation, x.index).left < tree.node(y.generation, y.index).left;
  });
  cut.M = cut.members.size();
  double sum = 0.0;
  cut.min_product = cut.members.front().product;
  cut.max_product = cut.members.front().product;
  for (const auto& mem : cut.members) {
    sum += mem.product;
    cut.min_product = std::min(cut.min_product, mem.product);
    cut.max_product = std::max(cut.max_product, mem.product);
    cut.y = std::max(cut.y, mem.generation - mem.previous_neck);
  }
  cut.T = static_cast<double>(cut.M) / sum;
  return cut;
}

bool covers_exactly_once(const VTree& tree, const CutSet& cut) {
  const std::size_t leaves = tree.generation(tree.depth()).size();
  std::vector<int> hits(leaves, 0);
  for (const auto& mem : cut.members) {
    const auto [lo, hi] = tree.descendant_range(mem.generation, mem.index, tree.depth());
    for (std::size_t i = lo; i < hi; ++i) ++hits[i];
  }
  return std::all_of(hits.begin(), hits.end(), [](int h) { return h == 1; });
}

double propagate_scale_sum(const Catalog& catalog, std::size_t V, std::uint32_t start_type,
                           std::span<const Environment> environments, double x) {
  std::vector<double> weight(V, 0.0);
  std::vector<double> next(V, 0.0);
  weight[start_type] = 1.0;
  for (const auto& env : environments) {
    std::fill(next.begin(), next.end(), 0.0);
    for (std::size_t v = 0; v < V; ++v) {
      if (weight[v] == 0.0) continue;
      const auto& row = env.rows[v];
      const auto& sys = catalog.systems[row.system];
      for (std::size_t i = 0; i < sys.size(); ++i) {
        next[row.child_types[i]] += weight[v] * std::pow(sys.maps[i].ratio * sys.weights[i], x);
      }
    }
    std::swap(weight, next);
  }
  double total = 0.0;
  for (double w : weight) total += w;
  return total;
}

NeckScaleSum scale_sum_at_neck(const VTree& tree, double x, std::size_t k) {
  const auto& necks = tree.neck_levels();
  if (k > necks.size()) {
    throw DepthExhausted("tree has " + std::to_string(necks.size()) + " neck level(s), " + std::to_string(k) +
                             " requested",
                         1);
  }
  NeckScaleSum out;
  out.x = x;
  out.blocks = k;
  std::span<const Environment> envs(tree.environments());
  std::size_t start = 0;
  std::uint32_t start_type = tree.root_type();
  for (std::size_t l = 0; l < k; ++l) {
    const std::size_t end = necks[l];
    const double s = propagate_scale_sum(tree.catalog(), tree.V(), start_type, envs.subspan(start, end - start), x);
    out.block_log_sums.push_back(std::log(s));
    out.log_sum += out.block_log_sums.back();
    start_type = tree.generation(end).front().type;
    start = end;
  }
  out.factorized_sum = std::exp(out.log_sum);
  const std::size_t level = k == 0 ? 0 : necks[k - 1];
  for (const auto& n : tree.generation(level)) out.direct_sum += std::pow(n.rm(), x);
  return out;
}

}  // namespace vcantor
