#include "vcantor_cli/run_config.hpp"

#include <cstdio>

#include <json.hpp>

#include "vcantor/error.hpp"
#include "vcantor/io.hpp"

namespace vcantor::cli {

using nlohmann::json;

namespace {

[[noreturn]] void fail(const std::string& what) { throw Error(ErrorKind::ConfigError, what); }

std::size_t positive_count(const json& v, std::string_view name, bool allow_zero = false) {
  if (!v.is_number_integer()) fail(std::string(name) + " must be an integer");
  const auto n = v.get<std::int64_t>();
  if (n < 0 || (!allow_zero && n == 0)) fail(std::string(name) + (allow_zero ? " must be >= 0" : " must be >= 1"));
  return static_cast<std::size_t>(n);
}

double positive_real(const json& v, std::string_view name) {
  if (!v.is_number()) fail(std::string(name) + " must be a number");
  const double x = v.get<double>();
  if (!(x > 0.0)) fail(std::string(name) + " must be positive");
  return x;
}

}  // namespace

RunConfig parse_run_config(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    fail(std::string("config is not valid JSON: ") + e.what());
  }
  if (!doc.is_object()) fail("config must be a JSON object");
  static const std::initializer_list<std::string_view> kKnown = {
      "schema", "catalog", "V",      "seed",     "root_type", "depth",    "level",
      "splits", "k_range", "grid",   "blocks",   "window",    "node_cap", "mc_tolerance"};
  for (const auto& [key, value] : doc.items()) {
    bool known = false;
    for (auto k : kKnown) known = known || key == k;
    if (!known) fail("unknown field '" + key + "' in config");
  }
  if (!doc.contains("schema") || doc["schema"] != std::string(kSchema)) {
    fail("config must declare \"schema\": \"" + std::string(kSchema) + "\"");
  }
  if (!doc.contains("catalog")) fail("config needs a 'catalog'");

  RunConfig c;
  c.catalog = catalog_from_json(doc["catalog"].dump());
  if (doc.contains("V")) c.V = positive_count(doc["V"], "V");
  if (doc.contains("seed")) {
    if (!doc["seed"].is_number_unsigned() && !(doc["seed"].is_number_integer() && doc["seed"].get<std::int64_t>() >= 0)) {
      fail("seed must be an unsigned integer");
    }
    c.seed = doc["seed"].get<std::uint64_t>();
  }
  if (doc.contains("root_type") && !doc["root_type"].is_null()) {
    const auto t = positive_count(doc["root_type"], "root_type");
    if (t > c.V) fail("root_type must lie in 1..V");
    c.root_type = static_cast<std::uint32_t>(t - 1);
  }
  if (doc.contains("depth")) c.depth = positive_count(doc["depth"], "depth", true);
  c.level = doc.contains("level") ? positive_count(doc["level"], "level", true) : c.depth;
  if (c.level > c.depth) fail("level must not exceed depth");
  if (doc.contains("splits")) c.splits = positive_count(doc["splits"], "splits");
  if (doc.contains("k_range")) {
    const auto& kr = doc["k_range"];
    if (!kr.is_array() || kr.size() != 2) fail("k_range must be [k_lo, k_hi]");
    c.k_lo = positive_count(kr[0], "k_range[0]", true);
    c.k_hi = positive_count(kr[1], "k_range[1]", true);
    if (c.k_lo > c.k_hi) fail("k_range must be ascending");
  }
  if (doc.contains("grid")) {
    const auto& g = doc["grid"];
    if (!g.is_object()) fail("grid must be an object");
    for (const auto& [key, value] : g.items()) {
      if (key != "x_lo" && key != "x_hi" && key != "count") fail("unknown field '" + key + "' in grid");
    }
    if (g.contains("x_lo")) c.grid.x_lo = positive_real(g["x_lo"], "grid.x_lo");
    if (g.contains("x_hi")) c.grid.x_hi = positive_real(g["x_hi"], "grid.x_hi");
    if (g.contains("count")) c.grid.count = positive_count(g["count"], "grid.count");
    if (c.grid.count < 2) fail("grid.count must be >= 2");
    if (c.grid.x_hi < c.grid.x_lo) fail("grid.x_hi must be >= grid.x_lo");
  }
  if (doc.contains("blocks")) {
    c.blocks = positive_count(doc["blocks"], "blocks");
    if (c.blocks < 2) fail("blocks must be >= 2");
  }
  if (doc.contains("window") && !doc["window"].is_null()) {
    const auto& w = doc["window"];
    if (!w.is_array() || w.size() != 2) fail("window must be [x_lo, x_hi]");
    c.window = std::pair{positive_real(w[0], "window[0]"), positive_real(w[1], "window[1]")};
    if (c.window->second <= c.window->first) fail("window must be ascending");
  }
  if (doc.contains("node_cap")) c.node_cap = positive_count(doc["node_cap"], "node_cap");
  if (doc.contains("mc_tolerance")) c.mc_tolerance = positive_real(doc["mc_tolerance"], "mc_tolerance");
  return c;
}

std::string canonical_json(const RunConfig& c) {
  json doc;
  doc["schema"] = kSchema;
  doc["catalog"] = json::parse(catalog_to_json(c.catalog));
  doc["V"] = c.V;
  doc["seed"] = c.seed;
  doc["root_type"] = c.root_type ? json(*c.root_type + 1) : json(nullptr);
  doc["depth"] = c.depth;
  doc["level"] = c.level;
  doc["splits"] = c.splits;
  doc["k_range"] = {c.k_lo, c.k_hi};
  doc["grid"] = {{"x_lo", c.grid.x_lo}, {"x_hi", c.grid.x_hi}, {"count", c.grid.count}};
  doc["blocks"] = c.blocks;
  doc["window"] = c.window ? json({c.window->first, c.window->second}) : json(nullptr);
  doc["node_cap"] = c.node_cap;
  doc["mc_tolerance"] = c.mc_tolerance;
  return doc.dump();
}

std::string config_hash(const RunConfig& config) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char ch : canonical_json(config)) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace vcantor::cli
