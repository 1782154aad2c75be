#pragma once

#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "skipfree/chain.hpp"
#include "skipfree/errors.hpp"

namespace skipfree {

/*
 * Chain-spec documents are JSON objects:
 *
 *   {"type": "discrete", "d": 2,
 *    "rows": [{"r": 0.2, "p": 0.8}, {"r": 0.3, "p": 0.4, "q": [0.3]}]}
 *
 *   {"type": "continuous", "d": 2,
 *    "rows": [{"alpha": 1}, {"alpha": 1, "beta": [1]}]}
 *
 * rows[i].q[j] (resp. beta[j]) is the jump i -> j for j < i, ascending j.
 * An absent q/beta means no downward jumps from that row.
 */
namespace detail {

using nlohmann::json;

inline void require_keys(const json& obj, const std::set<std::string>& required,
                         const std::set<std::string>& optional, const std::string& where) {
  if (!obj.is_object()) throw SchemaError(where + ": expected an object");
  for (const auto& key : required)
    if (!obj.contains(key)) throw SchemaError(where + ": missing field '" + key + "'");
  for (const auto& [key, _] : obj.items())
    if (!required.count(key) && !optional.count(key))
      throw SchemaError(where + ": unexpected field '" + key + "'");
}

inline double number_field(const json& obj, const std::string& key, const std::string& where) {
  const auto& v = obj.at(key);
  if (!v.is_number()) throw SchemaError(where + ": field '" + key + "' must be a number");
  return v.get<double>();
}

inline std::vector<double> down_list(const json& row, const std::string& key, std::size_t i,
                                     const std::string& where) {
  if (!row.contains(key)) return std::vector<double>(i, 0.0);
  const auto& arr = row.at(key);
  if (!arr.is_array()) throw SchemaError(where + ": field '" + key + "' must be an array");
  if (arr.size() != i)
    throw SchemaError(where + ": field '" + key + "' must have " + std::to_string(i) + " entries");
  std::vector<double> out;
  out.reserve(i);
  for (const auto& v : arr) {
    if (!v.is_number()) throw SchemaError(where + ": field '" + key + "' must hold numbers");
    out.push_back(v.get<double>());
  }
  return out;
}

inline bool all_zero(const std::vector<double>& v) {
  for (double x : v)
    if (x != 0.0) return false;
  return true;
}

}  // namespace detail

/// Parse and validate a chain-spec document.
inline Chain parse_chain(std::string_view text) {
  using detail::json;
  json doc;
  try {
    doc = json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    throw SchemaError(std::string("malformed JSON: ") + e.what());
  }
  detail::require_keys(doc, {"type", "d", "rows"}, {}, "document");
  if (!doc["type"].is_string()) throw SchemaError("document: field 'type' must be a string");
  const auto type = doc["type"].get<std::string>();
  if (!doc["d"].is_number_integer() || doc["d"].get<long long>() < 1)
    throw SchemaError("document: field 'd' must be an integer >= 1");
  const auto d = static_cast<std::size_t>(doc["d"].get<long long>());
  const auto& rows = doc["rows"];
  if (!rows.is_array()) throw SchemaError("document: field 'rows' must be an array");
  if (rows.size() != d) throw SchemaError("document: 'rows' must have exactly d entries");

  if (type == "discrete") {
    std::vector<double> hold, up;
    std::vector<std::vector<double>> down;
    for (std::size_t i = 0; i < d; ++i) {
      const std::string where = "rows[" + std::to_string(i) + "]";
      detail::require_keys(rows[i], {"r", "p"}, {"q"}, where);
      hold.push_back(detail::number_field(rows[i], "r", where));
      up.push_back(detail::number_field(rows[i], "p", where));
      down.push_back(detail::down_list(rows[i], "q", i, where));
    }
    return DiscreteChain(std::move(hold), std::move(up), std::move(down));
  }
  if (type == "continuous") {
    std::vector<double> up;
    std::vector<std::vector<double>> down;
    for (std::size_t i = 0; i < d; ++i) {
      const std::string where = "rows[" + std::to_string(i) + "]";
      detail::require_keys(rows[i], {"alpha"}, {"beta"}, where);
      up.push_back(detail::number_field(rows[i], "alpha", where));
      down.push_back(detail::down_list(rows[i], "beta", i, where));
    }
    return ContinuousChain(std::move(up), std::move(down));
  }
  throw SchemaError("document: field 'type' must be \"discrete\" or \"continuous\"");
}

inline nlohmann::json to_json(const DiscreteChain& c) {
  nlohmann::json rows = nlohmann::json::array();
  for (std::size_t i = 0; i < c.d(); ++i) {
    nlohmann::json row = {{"r", c.hold(i)}, {"p", c.up(i)}};
    if (!detail::all_zero(c.down_probs()[i])) row["q"] = c.down_probs()[i];
    rows.push_back(std::move(row));
  }
  return {{"type", "discrete"}, {"d", c.d()}, {"rows", std::move(rows)}};
}

inline nlohmann::json to_json(const ContinuousChain& c) {
  nlohmann::json rows = nlohmann::json::array();
  for (std::size_t i = 0; i < c.d(); ++i) {
    nlohmann::json row = {{"alpha", c.up(i)}};
    if (!detail::all_zero(c.down_rates()[i])) row["beta"] = c.down_rates()[i];
    rows.push_back(std::move(row));
  }
  return {{"type", "continuous"}, {"d", c.d()}, {"rows", std::move(rows)}};
}

inline std::string serialize_chain(const Chain& c) {
  return std::visit([](const auto& x) { return to_json(x).dump(2); }, c);
}

inline std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path.string() + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  if (in.bad()) throw IoError("failed reading '" + path.string() + "'");
  return buf.str();
}

inline Chain load_chain(const std::filesystem::path& path) { return parse_chain(read_text_file(path)); }

}  // namespace skipfree
