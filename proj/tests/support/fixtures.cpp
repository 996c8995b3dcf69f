#include "fixtures.hpp"

#include <cmath>

#include "vcantor/error.hpp"

namespace fixture {

vcantor::Catalog skewed_pair() {
  auto c = vcantor::catalogs::cantor();
  c.systems.push_back({{{0.7, 0.0}, {0.2, 0.8}}, {0.7, 0.3}});
  c.probabilities = {0.5, 0.5};
  return c;
}

namespace {

// True when every path through the environments has r m <= e^{-k} at some neck level.
bool cut_reached(const vcantor::Catalog& catalog, std::uint32_t root, const std::vector<vcantor::Environment>& envs,
                 std::size_t k) {
  const double threshold = std::exp(-static_cast<double>(k));
  struct Open {
    std::uint32_t type;
    double product;
  };
  // Paths not yet cut, expanded level by level and pruned at every neck.
  std::vector<Open> pending{{root, 1.0}};
  for (const auto& env : envs) {
    std::vector<Open> next;
    for (const auto& o : pending) {
      const auto& row = env.rows[o.type];
      const auto& sys = catalog.systems[row.system];
      for (std::size_t i = 0; i < sys.maps.size(); ++i) {
        next.push_back({row.child_types[i], o.product * sys.maps[i].ratio * sys.weights[i]});
      }
    }
    pending = std::move(next);
    if (env.is_neck) {
      std::vector<Open> still;
      for (const auto& o : pending) {
        if (o.product > threshold) still.push_back(o);
      }
      pending = std::move(still);
      if (pending.empty()) return true;
    }
  }
  return false;
}

}  // namespace

GrownTree tree_reaching_cut(const vcantor::Catalog& catalog, std::size_t V, std::size_t k, std::uint64_t seed,
                            std::size_t max_depth) {
  for (std::size_t attempt = 0;; ++attempt) {
    vcantor::Xoshiro256ss rng(vcantor::derive_stream_seed(seed, attempt));
    const auto root = static_cast<std::uint32_t>(rng.uniform_index(V));
    std::vector<vcantor::Environment> envs;
    while (envs.size() < max_depth) {
      envs.push_back(vcantor::sample_environment(catalog, V, rng));
      if (envs.back().is_neck && cut_reached(catalog, root, envs, k)) {
        return {vcantor::VTree(catalog, V, root, std::move(envs)), attempt};
      }
    }
  }
}

GrownTree tree_with_necks(const vcantor::Catalog& catalog, std::size_t V, std::size_t necks, std::uint64_t seed,
                          std::size_t max_depth) {
  for (std::size_t attempt = 0;; ++attempt) {
    vcantor::Xoshiro256ss rng(vcantor::derive_stream_seed(seed, attempt));
    const auto root = static_cast<std::uint32_t>(rng.uniform_index(V));
    std::vector<vcantor::Environment> envs;
    std::size_t seen = 0;
    while (envs.size() < max_depth && seen < necks) {
      envs.push_back(vcantor::sample_environment(catalog, V, rng));
      seen += envs.back().is_neck ? 1 : 0;
    }
    if (seen >= necks) return {vcantor::VTree(catalog, V, root, std::move(envs)), attempt};
  }
}

}  // namespace fixture
