#include "procpolar/instance.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include "json.hpp"
#include "procpolar/errors.hpp"

namespace procpolar {

namespace {

using nlohmann::json;

const json& field(const json& j, const char* key, const std::string& where) {
  if (!j.is_object() || !j.contains(key)) throw InputError(where + ": missing '" + key + "'");
  return j.at(key);
}

void only_keys(const json& j, std::initializer_list<const char*> keys, const std::string& where) {
  if (!j.is_object()) throw InputError(where + " must be an object");
  for (const auto& [k, v] : j.items()) {
    bool known = false;
    for (const char* key : keys) known = known || k == key;
    if (!known) throw InputError(where + ": unknown key '" + k + "'");
  }
}

Rational read_rational(const json& j, const std::string& where) {
  if (j.is_number_integer()) {
    return j.is_number_unsigned() ? Rational(j.get<std::uint64_t>()) : Rational(j.get<std::int64_t>());
  }
  if (j.is_string()) {
    try {
      return parse_rational(j.get<std::string>());
    } catch (const InputError& e) {
      throw InputError(where + ": " + e.what());
    }
  }
  throw InputError(where + ": exact rationals required, got " + j.dump());
}

Values read_values(const json& j, const std::string& where) {
  if (!j.is_array()) throw InputError(where + " must be an array");
  Values out;
  for (std::size_t i = 0; i < j.size(); ++i) out.push_back(read_rational(j[i], where + "[" + std::to_string(i) + "]"));
  return out;
}

std::vector<Values> read_value_list(const json& j, const std::string& where) {
  if (!j.is_array()) throw InputError(where + " must be an array");
  std::vector<Values> out;
  for (std::size_t i = 0; i < j.size(); ++i) out.push_back(read_values(j[i], where + "[" + std::to_string(i) + "]"));
  return out;
}

std::size_t read_index(const json& j, const std::string& where) {
  if (!j.is_number_unsigned()) throw InputError(where + " must be a nonnegative integer");
  return j.get<std::size_t>();
}

std::vector<ProbeSpec> read_probes(const json& j, const std::string& where) {
  if (!j.is_array()) throw InputError(where + " must be an array");
  std::vector<ProbeSpec> out;
  for (std::size_t i = 0; i < j.size(); ++i) {
    const std::string at = where + "[" + std::to_string(i) + "]";
    ProbeSpec p;
    if (j[i].is_array()) {
      p.values = read_values(j[i], at);
    } else {
      only_keys(j[i], {"values", "expect"}, at);
      p.values = read_values(field(j[i], "values", at), at + ".values");
      if (j[i].contains("expect")) {
        const auto& e = j[i]["expect"];
        if (e == "in") {
          p.expect = true;
        } else if (e == "out") {
          p.expect = false;
        } else {
          throw InputError(at + ".expect must be \"in\" or \"out\"");
        }
      }
    }
    out.push_back(std::move(p));
  }
  return out;
}

json write_values(const Values& v) {
  json out = json::array();
  for (const auto& x : v) out.push_back(to_string(x));
  return out;
}

json write_value_list(const std::vector<Values>& list) {
  json out = json::array();
  for (const auto& v : list) out.push_back(write_values(v));
  return out;
}

json write_probes(const std::vector<ProbeSpec>& probes) {
  json out = json::array();
  for (const auto& p : probes) {
    json e{{"values", write_values(p.values)}};
    if (p.expect) e["expect"] = *p.expect ? "in" : "out";
    out.push_back(std::move(e));
  }
  return out;
}

}  // namespace

Instance parse_instance(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw InputError(std::string("instance is not valid JSON: ") + e.what());
  }
  only_keys(doc, {"version", "tree", "processes", "rv", "market", "claim", "consumption", "budget"}, "instance");
  Instance in;
  if (doc.contains("version")) {
    if (doc["version"] != 1) throw InputError("unsupported instance version " + doc["version"].dump());
  }

  const auto& tree = field(doc, "tree", "instance");
  only_keys(tree, {"parents", "probs"}, "tree");
  const auto& parents = field(tree, "parents", "tree");
  if (!parents.is_array()) throw InputError("tree.parents must be an array");
  for (std::size_t i = 0; i < parents.size(); ++i) {
    if (parents[i].is_null()) {
      in.tree.parent.push_back(std::nullopt);
    } else {
      in.tree.parent.push_back(read_index(parents[i], "tree.parents[" + std::to_string(i) + "]"));
    }
  }
  in.tree.one_step_prob = read_values(field(tree, "probs", "tree"), "tree.probs");
  if (in.tree.one_step_prob.size() != in.tree.parent.size()) {
    throw InputError("tree.probs needs one entry per node");
  }

  if (doc.contains("processes")) {
    const auto& p = doc["processes"];
    only_keys(p, {"generators", "probes"}, "processes");
    ProcessSection s;
    s.generators = read_value_list(field(p, "generators", "processes"), "processes.generators");
    if (p.contains("probes")) s.probes = read_probes(p["probes"], "processes.probes");
    in.processes = std::move(s);
  }
  if (doc.contains("rv")) {
    const auto& r = doc["rv"];
    only_keys(r, {"probabilities", "partition", "generators", "probes"}, "rv");
    RvSection s;
    if (r.contains("probabilities")) s.probabilities = read_values(r["probabilities"], "rv.probabilities");
    const auto& part = field(r, "partition", "rv");
    if (!part.is_array()) throw InputError("rv.partition must be an array of blocks");
    for (std::size_t b = 0; b < part.size(); ++b) {
      const std::string at = "rv.partition[" + std::to_string(b) + "]";
      if (!part[b].is_array()) throw InputError(at + " must be an array");
      std::vector<std::size_t> block;
      for (const auto& w : part[b]) block.push_back(read_index(w, at));
      s.partition.push_back(std::move(block));
    }
    s.generators = read_value_list(field(r, "generators", "rv"), "rv.generators");
    if (r.contains("probes")) s.probes = read_probes(r["probes"], "rv.probes");
    in.rv = std::move(s);
  }
  if (doc.contains("market")) {
    only_keys(doc["market"], {"prices"}, "market");
    in.market = MarketSection{read_value_list(field(doc["market"], "prices", "market"), "market.prices")};
  }
  if (doc.contains("claim")) in.claim = read_values(doc["claim"], "claim");
  if (doc.contains("consumption")) {
    const auto& c = doc["consumption"];
    only_keys(c, {"density", "mu"}, "consumption");
    in.consumption = ConsumptionSection{read_values(field(c, "density", "consumption"), "consumption.density"),
                                        read_values(field(c, "mu", "consumption"), "consumption.mu")};
  }
  if (doc.contains("budget")) in.budget = read_rational(doc["budget"], "budget");
  return in;
}

Instance load_instance(const std::string& path) {
  std::ifstream file(path);
  if (!file) throw InputError("cannot open instance file " + path);
  std::stringstream buffer;
  buffer << file.rdbuf();
  return parse_instance(buffer.str());
}

std::string serialize_instance(const Instance& in) {
  json doc;
  doc["version"] = in.version;
  json parents = json::array();
  for (const auto& p : in.tree.parent) parents.push_back(p ? json(*p) : json(nullptr));
  doc["tree"] = {{"parents", parents}, {"probs", write_values(in.tree.one_step_prob)}};
  if (in.processes) {
    doc["processes"] = {{"generators", write_value_list(in.processes->generators)},
                        {"probes", write_probes(in.processes->probes)}};
  }
  if (in.rv) {
    json r{{"partition", in.rv->partition},
           {"generators", write_value_list(in.rv->generators)},
           {"probes", write_probes(in.rv->probes)}};
    if (in.rv->probabilities) r["probabilities"] = write_values(*in.rv->probabilities);
    doc["rv"] = std::move(r);
  }
  if (in.market) doc["market"] = {{"prices", write_value_list(in.market->prices)}};
  if (in.claim) doc["claim"] = write_values(*in.claim);
  if (in.consumption) {
    doc["consumption"] = {{"density", write_values(in.consumption->density)},
                          {"mu", write_values(in.consumption->mu)}};
  }
  if (in.budget) doc["budget"] = to_string(*in.budget);
  return doc.dump(2) + "\n";
}

std::string fnv1a_hex(const std::string& bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

std::string instance_digest(const Instance& instance) { return fnv1a_hex(serialize_instance(instance)); }

}  // namespace procpolar
