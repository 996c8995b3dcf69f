#include "vcantor/io.hpp"

#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>

#include <json.hpp>

#include "vcantor/error.hpp"

namespace vcantor {

using nlohmann::json;

namespace {

void reject_unknown(const json& obj, std::initializer_list<std::string_view> allowed, std::string_view where) {
  for (const auto& [key, value] : obj.items()) {
    bool known = false;
    for (auto a : allowed) known = known || key == a;
    if (!known) throw Error(ErrorKind::ConfigError, "unknown field '" + key + "' in " + std::string(where));
  }
}

double as_real(const json& v, std::string_view what) {
  if (!v.is_number()) throw Error(ErrorKind::ConfigError, std::string(what) + " must be a number");
  return v.get<double>();
}

std::vector<double> as_reals(const json& v, std::string_view what) {
  if (!v.is_array()) throw Error(ErrorKind::ConfigError, std::string(what) + " must be an array");
  std::vector<double> out;
  for (const auto& e : v) out.push_back(as_real(e, what));
  return out;
}

}  // namespace

Catalog catalog_from_json(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw Error(ErrorKind::ConfigError, std::string("catalog is not valid JSON: ") + e.what());
  }
  if (!doc.is_object()) throw Error(ErrorKind::ConfigError, "catalog must be a JSON object");
  reject_unknown(doc, {"interval", "systems", "probabilities"}, "catalog");

  Catalog c;
  if (doc.contains("interval")) {
    const auto iv = as_reals(doc["interval"], "interval");
    if (iv.size() != 2) throw Error(ErrorKind::ConfigError, "interval must have two entries");
    c.base = {iv[0], iv[1]};
  }
  if (!doc.contains("systems") || !doc["systems"].is_array()) {
    throw Error(ErrorKind::ConfigError, "catalog needs a 'systems' array");
  }
  for (const auto& s : doc["systems"]) {
    if (!s.is_object()) throw Error(ErrorKind::ConfigError, "each system must be an object");
    reject_unknown(s, {"maps", "weights"}, "system");
    WeightedIFS sys;
    if (!s.contains("maps") || !s["maps"].is_array()) throw Error(ErrorKind::ConfigError, "system needs 'maps'");
    for (const auto& m : s["maps"]) {
      if (!m.is_object() || !m.contains("r") || !m.contains("c")) {
        throw Error(ErrorKind::ConfigError, "each map must be an object with 'r' and 'c'");
      }
      reject_unknown(m, {"r", "c"}, "map");
      sys.maps.push_back({as_real(m["r"], "r"), as_real(m["c"], "c")});
    }
    if (!s.contains("weights")) throw Error(ErrorKind::ConfigError, "system needs 'weights'");
    sys.weights = as_reals(s["weights"], "weights");
    c.systems.push_back(std::move(sys));
  }
  if (doc.contains("probabilities")) {
    c.probabilities = as_reals(doc["probabilities"], "probabilities");
  } else if (c.systems.size() == 1) {
    c.probabilities = {1.0};
  } else {
    throw Error(ErrorKind::ConfigError, "catalog with several systems needs 'probabilities'");
  }
  return c;
}

std::string catalog_to_json(const Catalog& catalog) {
  json doc;
  doc["interval"] = {catalog.base.a, catalog.base.b};
  doc["systems"] = json::array();
  for (const auto& s : catalog.systems) {
    json maps = json::array();
    for (const auto& m : s.maps) maps.push_back({{"r", m.ratio}, {"c", m.offset}});
    doc["systems"].push_back({{"maps", maps}, {"weights", s.weights}});
  }
  doc["probabilities"] = catalog.probabilities;
  return doc.dump();
}

std::string format_real(double value) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", value);
  return buf;
}

void write_cells_csv(std::ostream& out, const CellDecomposition& decomposition) {
  out << "left,right,mass,density,node\n";
  for (const auto& c : decomposition.cells) {
    out << format_real(c.left) << ',' << format_real(c.right) << ',' << format_real(c.mass) << ','
        << format_real(c.density()) << ',' << c.node << '\n';
  }
}

void write_gaps_csv(std::ostream& out, const CellDecomposition& decomposition) {
  out << "left,right,length\n";
  for (const auto& g : decomposition.gaps) {
    out << format_real(g.left) << ',' << format_real(g.right) << ',' << format_real(g.length()) << '\n';
  }
}

CellDecomposition read_cells_csv(std::istream& in, const Interval& base, std::size_t level, std::size_t splits) {
  CellDecomposition dec;
  dec.base = base;
  dec.level = level;
  dec.splits = splits;
  std::string line;
  while (std::getline(in, line) && !line.empty() && line.front() == '#') {
  }
  if (line.rfind("left,right,mass", 0) != 0) {
    throw Error(ErrorKind::ConfigError, "cells CSV must start with a left,right,mass,... header");
  }
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::istringstream row(line);
    std::string field;
    std::vector<std::string> fields;
    while (std::getline(row, field, ',')) fields.push_back(field);
    if (fields.size() < 3) throw Error(ErrorKind::ConfigError, "malformed cells CSV row: " + line);
    Cell c;
    try {
      c.left = std::stod(fields[0]);
      c.right = std::stod(fields[1]);
      c.mass = std::stod(fields[2]);
      if (fields.size() >= 5) c.node = static_cast<std::size_t>(std::stoull(fields[4]));
    } catch (const std::exception&) {
      throw Error(ErrorKind::ConfigError, "malformed number in cells CSV row: " + line);
    }
    dec.cells.push_back(c);
  }
  dec.gaps = gaps_between(base, dec.cells);
  return dec;
}

void write_pencil_csv(std::ostream& out, const Pencil& pencil) {
  out << "i,K_diag,K_off,M_diag,M_off\n";
  for (std::size_t i = 0; i < pencil.dimension(); ++i) {
    const bool has_off = i < pencil.k_off.size();
    out << i << ',' << format_real(pencil.k_diag[i]) << ',' << format_real(has_off ? pencil.k_off[i] : 0.0) << ','
        << format_real(pencil.m_diag[i]) << ',' << format_real(has_off ? pencil.m_off[i] : 0.0) << '\n';
  }
}

void write_counting_csv(std::ostream& out, const std::vector<CountingSample>& dirichlet,
                        const std::vector<CountingSample>& neumann) {
  if (dirichlet.size() != neumann.size()) throw Error(ErrorKind::ArgumentError, "mismatched counting grids");
  out << "x,N_D,N_N,level,splits\n";
  for (std::size_t i = 0; i < dirichlet.size(); ++i) {
    out << format_real(dirichlet[i].x) << ',' << dirichlet[i].count << ',' << neumann[i].count << ','
        << dirichlet[i].level << ',' << dirichlet[i].splits << '\n';
  }
}

void write_tree_jsonl(std::ostream& out, const VTree& tree) {
  for (std::size_t g = 0; g <= tree.depth(); ++g) {
    const auto gen = tree.generation(g);
    for (std::size_t i = 0; i < gen.size(); ++i) {
      std::vector<std::uint32_t> path(g);
      std::size_t idx = i;
      for (std::size_t level = g; level > 0; --level) {
        const auto& n = tree.node(level, idx);
        path[level - 1] = n.child_position + 1;
        idx = n.parent;
      }
      const auto& n = gen[i];
      json line;
      line["path"] = path;
      line["type"] = n.type + 1;
      line["index"] = n.system == kNoIndex ? json(nullptr) : json(n.system);
      line["r"] = n.r;
      line["m"] = n.m;
      out << line.dump() << '\n';
    }
  }
}

std::string environments_to_json(const std::vector<Environment>& environments) {
  json arr = json::array();
  for (std::size_t g = 0; g < environments.size(); ++g) {
    json rows = json::array();
    for (const auto& row : environments[g].rows) {
      std::vector<std::uint32_t> types;
      for (auto t : row.child_types) types.push_back(t + 1);
      rows.push_back({{"system", row.system}, {"child_types", types}});
    }
    arr.push_back({{"level", g + 1}, {"neck", environments[g].is_neck}, {"rows", rows}});
  }
  return arr.dump();
}

}  // namespace vcantor
