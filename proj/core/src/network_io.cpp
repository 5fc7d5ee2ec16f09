#include <fstream>
#include <istream>
#include <ostream>

#include <json.hpp>

#include "dsbn/errors.hpp"
#include "dsbn/network.hpp"
#include "dsbn/population.hpp"

namespace dsbn {

namespace {

constexpr const char* kFormat = "dsbn-network/1";

std::pair<std::string, std::string> split_edge(const std::string& text) {
  const auto arrow = text.find("->");
  if (arrow == std::string::npos) throw ValidationError("edge '" + text + "' is not of the form parent->child");
  return {text.substr(0, arrow), text.substr(arrow + 2)};
}

}  // namespace

void write_network(std::ostream& out, const BeliefNetwork& net, const std::map<std::string, std::string>& summary) {
  using nlohmann::ordered_json;
  const Frame& frame = *net.frame();
  ordered_json doc;
  doc["format"] = kFormat;
  ordered_json vars = ordered_json::array();
  for (const auto& v : frame.variables()) vars.push_back({{"name", v.name}, {"domain", v.labels}});
  doc["frame"] = vars;
  ordered_json edges = ordered_json::array();
  for (const auto& [p, c] : net.dag().edges())
    edges.push_back(frame.variable(p).name + "->" + frame.variable(c).name);
  doc["edges"] = edges;
  ordered_json vals = ordered_json::array();
  for (std::size_t v = 0; v < frame.size(); ++v) {
    const MassFunction& m = net.valuation(v);
    ordered_json focal = ordered_json::array();
    for (const auto& [set, mass] : m.focal()) focal.push_back({format_config_list(m.set(set)), mass});
    vals.push_back({{"node", frame.variable(v).name}, {"scope", m.scope().names()}, {"focal", focal}});
  }
  doc["valuations"] = vals;
  if (!summary.empty()) {
    ordered_json s = ordered_json::object();
    for (const auto& [k, v] : summary) s[k] = v;
    doc["summary"] = s;
  }
  out << doc.dump(1) << '\n';
}

BeliefNetwork read_network(std::istream& in) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(std::string("network file is not valid JSON: ") + e.what());
  }
  try {
    if (doc.value("format", std::string{}) != kFormat) throw ValidationError("unsupported network format");
    std::vector<Variable> vars;
    for (const auto& v : doc.at("frame"))
      vars.push_back({v.at("name").get<std::string>(), v.at("domain").get<std::vector<std::string>>()});
    FramePtr frame = Frame::make(std::move(vars));

    Dag dag(frame->size());
    for (const auto& e : doc.at("edges")) {
      const auto [p, c] = split_edge(e.get<std::string>());
      dag.add_edge(frame->index_of(p), frame->index_of(c));
    }

    std::vector<MassFunction> valuations(frame->size());
    std::vector<bool> seen(frame->size(), false);
    for (const auto& val : doc.at("valuations")) {
      const auto node = frame->index_of(val.at("node").get<std::string>());
      if (seen[node]) throw ValidationError("duplicate valuation for '" + frame->variable(node).name + "'");
      seen[node] = true;
      const Scope scope = frame->scope_of(val.at("scope").get<std::vector<std::string>>());
      FocalMap focal;
      for (const auto& entry : val.at("focal")) {
        const ConfigSet set = parse_config_list(scope, entry.at(0).get<std::string>());
        focal[set.bits()] += entry.at(1).get<double>();
      }
      valuations[node] = MassFunction::from_focal(scope, std::move(focal));
    }
    for (std::size_t v = 0; v < seen.size(); ++v)
      if (!seen[v]) throw ValidationError("missing valuation for '" + frame->variable(v).name + "'");
    return BeliefNetwork(frame, std::move(dag), std::move(valuations));
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(std::string("malformed network document: ") + e.what());
  }
}

BeliefNetwork read_network_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open network file '" + path + "'");
  return read_network(in);
}

}  // namespace dsbn
