#pragma once

#include <melonica/error.hpp>
#include <melonica/graph.hpp>

#include <json.hpp>

#include <fstream>
#include <sstream>
#include <string>
#include <vector>

namespace melonica {

using Json = nlohmann::json;

/// Graph document, e.g.
///   {"num_colors": 3, "p": 3, "perms": [[1,3,2],[2,1,3],[3,2,1]]}
/// with 1-based vertex numbers. The layout is fixed byte for byte.
inline std::string encode(const ColoredGraph& g) {
  std::ostringstream out;
  out << "{\"num_colors\": " << g.num_colors() << ", \"p\": " << g.p() << ", \"perms\": [";
  for (Color c = 0; c < g.num_colors(); ++c) {
    out << (c ? ",[" : "[");
    for (int w = 0; w < g.p(); ++w) out << (w ? "," : "") << g.black_of(c, w) + 1;
    out << "]";
  }
  out << "]}";
  return out.str();
}

inline Json to_json(const ColoredGraph& g) { return Json::parse(encode(g)); }

/// Reads a graph from an already parsed document. Extra keys are ignored so
/// catalog entries carrying "aut_order"/"omega" decode as plain graphs.
inline ColoredGraph from_json(const Json& doc) {
  if (!doc.is_object()) throw Error(ErrorCode::ParseError, "graph document must be a JSON object");
  for (const char* key : {"num_colors", "p", "perms"})
    if (!doc.contains(key)) throw Error(ErrorCode::ParseError, std::string("missing field \"") + key + "\"");
  const auto& nc = doc["num_colors"];
  const auto& pp = doc["p"];
  const auto& perms = doc["perms"];
  if (!nc.is_number_integer()) throw Error(ErrorCode::ParseError, "field \"num_colors\" must be an integer");
  if (!pp.is_number_integer()) throw Error(ErrorCode::ParseError, "field \"p\" must be an integer");
  if (!perms.is_array()) throw Error(ErrorCode::ParseError, "field \"perms\" must be an array");
  const int num_colors = nc.get<int>();
  const int p = pp.get<int>();
  std::vector<std::vector<int>> images;
  for (std::size_t c = 0; c < perms.size(); ++c) {
    const auto& row = perms[c];
    if (!row.is_array())
      throw Error(ErrorCode::ParseError, "perms[" + std::to_string(c) + "] must be an array");
    std::vector<int> list;
    for (std::size_t k = 0; k < row.size(); ++k) {
      if (!row[k].is_number_integer())
        throw Error(ErrorCode::ParseError,
                    "perms[" + std::to_string(c) + "][" + std::to_string(k) + "] must be an integer");
      list.push_back(row[k].get<int>());
    }
    if (static_cast<int>(list.size()) != p)
      throw Error(ErrorCode::InconsistentSize, "perms[" + std::to_string(c) + "] has " +
                                                   std::to_string(list.size()) + " entries but p is " +
                                                   std::to_string(p));
    images.push_back(std::move(list));
  }
  return ColoredGraph::build(num_colors, images);
}

inline ColoredGraph decode(const std::string& text) {
  Json doc;
  try {
    doc = Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw Error(ErrorCode::ParseError, e.what());
  }
  return from_json(doc);
}

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::ParseError, "cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

inline Json read_json_file(const std::string& path) {
  try {
    return Json::parse(read_file(path));
  } catch (const Json::parse_error& e) {
    throw Error(ErrorCode::ParseError, path + ": " + e.what());
  }
}

inline ColoredGraph read_graph_file(const std::string& path) { return from_json(read_json_file(path)); }

}  // namespace melonica
