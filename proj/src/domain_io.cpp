#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "cdeform/domain.hpp"

namespace cdeform {

using Json = nlohmann::ordered_json;

namespace {

std::int64_t as_id(const Json& j, const char* what) {
  if (!j.is_number_integer()) throw InputError(std::string(what) + ": vertex id must be an integer");
  return j.get<std::int64_t>();
}

double as_number(const Json& j, const std::string& what) {
  if (!j.is_number()) throw InputError(what + " must be a number");
  return j.get<double>();
}

std::vector<std::int64_t> id_list(const Json& root, const char* key) {
  std::vector<std::int64_t> out;
  if (!root.contains(key)) return out;
  const auto& arr = root.at(key);
  if (!arr.is_array()) throw InputError(std::string("\"") + key + "\" must be an array");
  for (const auto& v : arr) out.push_back(as_id(v, key));
  return out;
}

}  // namespace

MetricDomain parse_domain(const std::string& text) {
  Json root;
  try {
    root = Json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw InputError(std::string("parse error: ") + e.what());
  }
  if (!root.is_object()) throw InputError("domain file must hold a JSON object");
  if (!root.contains("vertices") || !root["vertices"].is_array())
    throw InputError("domain file lacks a \"vertices\" array");
  if (!root.contains("edges") || !root["edges"].is_array())
    throw InputError("domain file lacks an \"edges\" array");

  MetricDomain::Input in;
  const auto& verts = root["vertices"];
  bool any_coords = false;
  for (std::size_t i = 0; i < verts.size(); ++i) {
    const auto& v = verts[i];
    if (!v.is_object() || !v.contains("id"))
      throw InputError("vertex entry " + std::to_string(i) + " lacks an id");
    in.ids.push_back(as_id(v["id"], "vertex"));
    const char* key = v.contains("xyz") ? "xyz" : (v.contains("xy") ? "xy" : nullptr);
    if (!key) {
      if (any_coords) throw InputError("vertex id " + std::to_string(in.ids.back()) + " lacks coordinates");
      continue;
    }
    const auto& c = v[key];
    const int dim = key[2] == 'z' ? 3 : 2;
    if (!c.is_array() || c.size() != static_cast<std::size_t>(dim))
      throw InputError("bad coordinates for vertex id " + std::to_string(in.ids.back()));
    if (i == 0) {
      any_coords = true;
      in.coord_dim = dim;
    } else if (!any_coords || in.coord_dim != dim) {
      throw InputError("inconsistent coordinates at vertex id " + std::to_string(in.ids.back()));
    }
    std::array<double, 3> p{0.0, 0.0, 0.0};
    for (int k = 0; k < dim; ++k) p[k] = as_number(c[k], "coordinate");
    in.coords.push_back(p);
  }

  const auto& edges = root["edges"];
  for (std::size_t e = 0; e < edges.size(); ++e) {
    const auto& ed = edges[e];
    if (!ed.is_array() || ed.size() != 3)
      throw InputError("edge " + std::to_string(e) + " must be [id, id, length]");
    in.edges.push_back({as_id(ed[0], "edge"), as_id(ed[1], "edge")});
    in.lengths.push_back(as_number(ed[2], "length of edge " + std::to_string(e)));
  }
  in.boundary = id_list(root, "boundary");
  in.frontier = id_list(root, "frontier");

  if (root.contains("meta")) {
    const auto& meta = root["meta"];
    if (!meta.is_object()) throw InputError("\"meta\" must be an object");
    for (const auto& [key, val] : meta.items()) {
      if (key == "generator" && val.is_string()) {
        in.meta.generator = val.get<std::string>();
      } else if (val.is_number()) {
        in.meta.params[key] = val.get<double>();
      }
    }
  }
  return MetricDomain::build(std::move(in));
}

MetricDomain load_domain(const std::filesystem::path& file) {
  std::ifstream is(file);
  if (!is) throw InputError("cannot open domain file " + file.string());
  std::stringstream buf;
  buf << is.rdbuf();
  return parse_domain(buf.str());
}

std::string serialize_domain(const MetricDomain& domain) {
  Json root = Json::object();
  Json verts = Json::array();
  for (VertexIndex v = 0; v < domain.num_vertices(); ++v) {
    Json entry = {{"id", domain.id(v)}};
    if (domain.coord_dim() == 2) {
      entry["xy"] = {domain.coords(v)[0], domain.coords(v)[1]};
    } else if (domain.coord_dim() == 3) {
      entry["xyz"] = {domain.coords(v)[0], domain.coords(v)[1], domain.coords(v)[2]};
    }
    verts.push_back(std::move(entry));
  }
  root["vertices"] = std::move(verts);
  Json edges = Json::array();
  for (const auto& e : domain.edges()) edges.push_back({domain.id(e.u), domain.id(e.v), e.length});
  root["edges"] = std::move(edges);
  Json boundary = Json::array();
  for (auto v : domain.boundary()) boundary.push_back(domain.id(v));
  root["boundary"] = std::move(boundary);
  Json frontier = Json::array();
  for (auto v : domain.frontier()) frontier.push_back(domain.id(v));
  root["frontier"] = std::move(frontier);
  Json meta = Json::object();
  if (!domain.meta().generator.empty()) meta["generator"] = domain.meta().generator;
  for (const auto& [k, v] : domain.meta().params) meta[k] = v;
  root["meta"] = std::move(meta);
  return root.dump() + "\n";
}

void save_domain(const MetricDomain& domain, const std::filesystem::path& file) {
  std::ofstream os(file, std::ios::binary);
  if (!os) throw InputError("cannot write domain file " + file.string());
  os << serialize_domain(domain);
  if (!os) throw InputError("write failed for " + file.string());
}

MetricDomain resolve_domain(const std::string& spec_or_path) {
  std::error_code ec;
  if (std::filesystem::is_regular_file(spec_or_path, ec)) return load_domain(spec_or_path);
  if (spec_or_path.find(':') == std::string::npos && spec_or_path.find('.') != std::string::npos)
    throw InputError("domain file not found: " + spec_or_path);
  return generate_domain(GeneratorSpec::parse(spec_or_path));
}

}  // namespace cdeform
