#pragma once

#include <cstddef>
#include <cstdint>

#include "vcantor/catalog.hpp"
#include "vcantor/vtree.hpp"

namespace fixture {

/// Cantor system plus a lopsided two-map system (r = 0.7, 0.2; m = 0.7, 0.3), drawn with
/// probability 1/2 each. Every environment has the neck probability 1/8 at V = 2 and the
/// large first map makes consecutive cut sets differ.
vcantor::Catalog skewed_pair();

struct GrownTree {
  vcantor::VTree tree;
  std::size_t rejected = 0;  // streams that exceeded max_depth before reaching the cut set
};

/// Tree grown one environment at a time from derive_stream_seed(seed, attempt) until
/// Lambda_k exists, so its depth is the neck level of the deepest member. Streams that
/// would need more than max_depth generations are skipped and counted.
GrownTree tree_reaching_cut(const vcantor::Catalog& catalog, std::size_t V, std::size_t k, std::uint64_t seed,
                            std::size_t max_depth);

/// Same growth rule, stopping once the tree holds `necks` neck levels.
GrownTree tree_with_necks(const vcantor::Catalog& catalog, std::size_t V, std::size_t necks, std::uint64_t seed,
                          std::size_t max_depth);

}  // namespace fixture
