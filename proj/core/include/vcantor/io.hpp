#pragma once

#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "vcantor/assembly.hpp"
#include "vcantor/catalog.hpp"
#include "vcantor/eigensolve.hpp"
#include "vcantor/measure.hpp"
#include "vcantor/vtree.hpp"

namespace vcantor {

/// Parses a catalog document:
///
///   {"interval": [a, b],                      optional, defaults to [0, 1]
///    "systems": [{"maps": [{"r": .., "c": ..}, ...], "weights": [...]}, ...],
///    "probabilities": [...]}
///
/// Unknown keys are rejected. Throws Error(ConfigError) on malformed input; the
/// catalog is not validated here.
Catalog catalog_from_json(std::string_view text);
std::string catalog_to_json(const Catalog& catalog);

/// "%.17g": enough digits to read every double back exactly.
std::string format_real(double value);

/// left,right,mass,density,node
void write_cells_csv(std::ostream& out, const CellDecomposition& decomposition);
/// left,right,length
void write_gaps_csv(std::ostream& out, const CellDecomposition& decomposition);
/// Reads write_cells_csv output back, skipping leading '#' comment lines; gaps are
/// rebuilt from the cells.
CellDecomposition read_cells_csv(std::istream& in, const Interval& base, std::size_t level, std::size_t splits);

/// i,K_diag,K_off,M_diag,M_off (off-diagonal entry i couples rows i and i+1; 0 on the last row)
void write_pencil_csv(std::ostream& out, const Pencil& pencil);

/// x,N_D,N_N,level,splits
void write_counting_csv(std::ostream& out, const std::vector<CountingSample>& dirichlet,
                        const std::vector<CountingSample>& neumann);

/// One JSON object per node: {"index", "m", "path", "r", "type"} with 1-based path
/// entries and types; "index" is the 0-based system used by the node (null on the last
/// generation).
void write_tree_jsonl(std::ostream& out, const VTree& tree);

/// JSON array of {"level", "neck", "rows": [{"system", "child_types"}]} with 1-based types.
std::string environments_to_json(const std::vector<Environment>& environments);

}  // namespace vcantor
