#include <algorithm>
#include <cmath>
#include <map>
#include <memory>

#include <json.hpp>

#include "patentmap/error.hpp"
#include "patentmap/format.hpp"
#include "patentmap/pipeline.hpp"

namespace patentmap {

namespace {

using nlohmann::json;

class Evaluator {
 public:
  Evaluator(const Corpus& corpus, const PipelineConfig& config) : corpus_(corpus), config_(config) {}

  CheckOutcome evaluate(const json& check) {
    CheckOutcome o;
    o.id = check.value("id", std::string());
    o.informational = check.value("informational", false);
    o.note = check.value("note", std::string());
    const std::string kind = check.at("kind").get<std::string>();
    if (o.id.empty()) o.id = kind;
    try {
      run(kind, check, o);
    } catch (const std::exception& e) {
      o.passed = false;
      o.actual = "error";
      o.note = o.note.empty() ? e.what() : o.note + "; " + e.what();
    }
    return o;
  }

 private:
  static void compare_int(const json& check, std::size_t actual, CheckOutcome& o) {
    const auto expected = check.at("expected").get<std::int64_t>();
    o.expected = std::to_string(expected);
    o.actual = std::to_string(actual);
    o.passed = expected >= 0 && static_cast<std::size_t>(expected) == actual;
  }

  const NetworkAnalysis& analysis(const json& check) {
    const IpcLevel level = parse_ipc_level(check.at("level").get<std::string>());
    auto& slot = cache_[level];
    if (!slot) slot = std::make_unique<NetworkAnalysis>(analyze_network(corpus_, level, config_));
    return *slot;
  }

  static bool is_mst(const json& check) {
    const auto network = check.value("network", std::string("modularity"));
    if (network != "modularity" && network != "mst") throw Error("unknown network '" + network + "'");
    return network == "mst";
  }

  static NodeId node(const CooccurrenceGraph& graph, const json& check, const char* key = "code") {
    const auto label = format_ipc_code(parse_ipc_code(check.at(key).get<std::string>()), graph.level());
    const auto id = graph.find(label);
    if (!id) throw UnknownNode(label + " is not a node of the network");
    return *id;
  }

  void run(const std::string& kind, const json& check, CheckOutcome& o) {
    if (kind == "corpus_total") {
      compare_int(check, corpus_.size(), o);
    } else if (kind == "office_count") {
      const auto office = check.at("office").get<std::string>();
      std::size_t count = 0;
      for (const auto& [label, n] : count_by_office(corpus_)) {
        if (label == office) count = n;
      }
      compare_int(check, count, o);
    } else if (kind == "applicant_count") {
      const auto label = check.at("label").get<std::string>();
      const auto counts = count_by_applicant(corpus_, config_.applicant_rules);
      const auto it = std::find_if(counts.begin(), counts.end(), [&](const auto& c) { return c.first == label; });
      if (it == counts.end()) throw Error("no applicant rule labelled '" + label + "'");
      compare_int(check, it->second, o);
    } else if (kind == "annual_count") {
      const auto counts = annual_counts(corpus_);
      const auto it = counts.find(check.at("year").get<int>());
      compare_int(check, it == counts.end() ? 0 : it->second, o);
    } else if (kind == "network_count") {
      const auto& a = analysis(check);
      const bool mst = is_mst(check);
      const auto& summary = mst ? a.mst_summary : a.modularity_summary;
      const auto metric = check.at("metric").get<std::string>();
      std::size_t actual = 0;
      if (metric == "nodes") {
        actual = summary.node_count;
      } else if (metric == "edges") {
        actual = summary.edge_count;
      } else if (metric == "components") {
        actual = summary.component_count;
      } else if (metric == "communities") {
        if (mst) throw Error("communities are only defined for the modularity network");
        actual = *summary.community_count;
      } else if (metric == "perfect_jaccard_edges") {
        const auto& graph = mst ? a.mst : a.modularity;
        for (const auto& e : graph.edges()) actual += e.cooccurrence == e.union_count ? 1 : 0;
      } else {
        throw Error("unknown metric '" + metric + "'");
      }
      compare_int(check, actual, o);
    } else if (kind == "component_sizes") {
      const auto& a = analysis(check);
      const auto& sizes = is_mst(check) ? a.mst_summary.component_sizes : a.modularity_summary.component_sizes;
      const auto expected = check.at("expected").get<std::vector<std::size_t>>();
      o.expected = json(expected).dump();
      o.actual = json(sizes).dump();
      o.passed = expected == sizes;
    } else if (kind == "node_occurrence") {
      const auto& a = analysis(check);
      compare_int(check, a.full.occurrence()[node(a.full, check)], o);
    } else if (kind == "node_degree") {
      const auto& a = analysis(check);
      const bool mst = is_mst(check);
      const auto& table = mst ? a.mst_metrics : a.modularity_metrics;
      compare_int(check, table.rows[node(a.full, check)].degree, o);
    } else if (kind == "node_betweenness") {
      const auto& a = analysis(check);
      const auto& table = is_mst(check) ? a.mst_metrics : a.modularity_metrics;
      const double actual = table.rows[node(a.full, check)].betweenness;
      const double expected = check.at("expected").get<double>();
      const double tolerance = check.value("tolerance", 0.0005);
      o.expected = format_fixed(expected, 3);
      o.actual = format_fixed(actual, 6);
      o.passed = std::fabs(actual - expected) <= tolerance + 1e-12;
    } else if (kind == "edge") {
      const auto& a = analysis(check);
      const auto& graph = is_mst(check) ? a.mst : a.modularity;
      const NodeId s = node(graph, check, "source");
      const NodeId t = node(graph, check, "target");
      const auto expected_n = check.at("n_ij").get<std::uint32_t>();
      const auto expected_r = check.at("jaccard").get<std::string>();
      o.expected = "n_ij=" + std::to_string(expected_n) + " jaccard=" + expected_r;
      const auto* edge = graph.find_edge(s, t);
      if (!edge) {
        o.actual = "absent";
        o.passed = false;
        return;
      }
      const auto actual_r = format_ratio_half_up(edge->cooccurrence, edge->union_count, 3);
      o.actual = "n_ij=" + std::to_string(edge->cooccurrence) + " jaccard=" + actual_r;
      o.passed = edge->cooccurrence == expected_n && actual_r == expected_r;
    } else {
      throw Error("unknown check kind '" + kind + "'");
    }
  }

  const Corpus& corpus_;
  const PipelineConfig& config_;
  std::map<IpcLevel, std::unique_ptr<NetworkAnalysis>> cache_;
};

}  // namespace

std::vector<CheckOutcome> evaluate_manifest(const std::string& manifest_json, const Corpus& corpus,
                                            const PipelineConfig& config) {
  json doc;
  try {
    doc = json::parse(manifest_json);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("invalid manifest: ") + e.what());
  }
  if (!doc.contains("checks") || !doc["checks"].is_array()) throw ConfigError("manifest has no 'checks' array");
  Evaluator evaluator(corpus, config);
  std::vector<CheckOutcome> out;
  for (const auto& check : doc["checks"]) out.push_back(evaluator.evaluate(check));
  return out;
}

}  // namespace patentmap
