#include "patentmap/pipeline.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include <openssl/evp.h>

#include <json.hpp>

#include "csv.hpp"
#include "patentmap/error.hpp"
#include "patentmap/format.hpp"

namespace patentmap {

std::vector<std::string> default_applicant_patterns() {
  return {"activision blizzard", "activision publishing", "blizzard entertainment", "king.com",
          "activision shanghai", "beenox",  "blizzard albany",  "demonware",  "digital legends entertainment",
          "high moon studios",   "infinity ward", "neversoft entertainment", "raven software", "redoctane",
          "sledgehammer games",  "solid state studios", "toys for bob", "treyarch", "vicarious visions"};
}

std::vector<ApplicantRule> default_applicant_rules() {
  return {{"Activision Publishing", {"activision publishing"}},
          {"King.com", {"king.com"}},
          {"Blizzard Entertainment", {"blizzard entertainment"}}};
}

void PipelineConfig::validate() const {
  if (input.empty()) throw ConfigError("no input file given");
  if (filter_applicants && applicant_patterns.empty()) throw ConfigError("applicant filter has no patterns");
  if (from_year > to_year) throw ConfigError("from_year must not exceed to_year");
  if (min_occurrence < 1) throw ConfigError("min_occurrence must be >= 1");
  if (!(jaccard_threshold >= 0.0 && jaccard_threshold <= 1.0)) {
    throw ConfigError("jaccard_threshold must lie in [0, 1]");
  }
  if (!(resolution > 0.0) || !std::isfinite(resolution)) throw ConfigError("resolution must be > 0");
  try {
    layout.validate();
  } catch (const Error& e) {
    throw ConfigError(e.what());
  }
  if (prolific_threshold < 1) throw ConfigError("prolific_threshold must be >= 1");
  if (formats.empty()) throw ConfigError("no output formats selected");
  for (const auto& rule : applicant_rules) {
    if (rule.label.empty() || rule.patterns.empty()) throw ConfigError("applicant rules need a label and patterns");
  }
  if (output_dir.empty()) throw ConfigError("no output directory given");
}

int PipelineConfig::effective_label_min_occurrence(IpcLevel lvl) const {
  if (label_min_occurrence >= 0) return label_min_occurrence;
  return lvl == IpcLevel::Group ? prolific_threshold : 0;
}

PreparedCorpus prepare_corpus(const PipelineConfig& config) {
  LoadResult loaded = load_corpus(config.input, config.input_format, config.columns);
  Corpus corpus = std::move(loaded.corpus);
  if (config.filter_applicants) corpus = filter_by_applicant(corpus, config.applicant_patterns);
  corpus = filter_by_publication_year(corpus, config.from_year, config.to_year);
  return {std::move(corpus), std::move(loaded.report)};
}

NetworkAnalysis analyze_network(const Corpus& corpus, IpcLevel level, const PipelineConfig& config) {
  NetworkAnalysis a;
  a.full = build_graph(corpus, level, config.min_occurrence);
  if (a.full.empty()) {
    throw EmptyGraph("no " + std::string(to_string(level)) + " code occurs in at least " +
                     std::to_string(config.min_occurrence) + " patents");
  }
  const MetricsOptions options{config.weighted_betweenness, Execution::Parallel};

  a.modularity = threshold_edges(a.full, config.jaccard_threshold);
  const Graph similarity = a.modularity.similarity_graph();
  a.communities = louvain_communities(similarity, config.resolution, config.louvain_seed);
  a.modularity_components = connected_components(similarity);
  a.modularity_metrics = compute_metrics(a.modularity, &a.communities.partition.label, options);

  a.forest = minimum_spanning_forest(to_distance_graph(a.full));
  a.mst = a.full.with_edges(a.forest.edges);
  a.mst_components = connected_components(a.mst.similarity_graph());
  a.mst_metrics = compute_metrics(a.mst, &a.communities.partition.label, options);

  a.modularity_summary = network_summary(a.modularity, &a.communities.partition, a.modularity_components, config.top_k);
  a.mst_summary = network_summary(a.mst, nullptr, a.mst_components, config.top_k);
  return a;
}

std::string sha256_hex(std::string_view data) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int length = 0;
  if (EVP_Digest(data.data(), data.size(), digest, &length, EVP_sha256(), nullptr) != 1) {
    throw Error("SHA-256 computation failed");
  }
  static constexpr char kHex[] = "0123456789abcdef";
  std::string out;
  for (unsigned int i = 0; i < length; ++i) {
    out += kHex[digest[i] >> 4];
    out += kHex[digest[i] & 0xf];
  }
  return out;
}

OutputTree::OutputTree(std::filesystem::path root) : root_(std::move(root)) {
  std::error_code ec;
  std::filesystem::create_directories(root_, ec);
  if (ec) throw UnreadableFile("cannot create output directory " + root_.string() + ": " + ec.message());
}

void OutputTree::write(const std::string& relative_path, const std::string& content) {
  const auto path = root_ / relative_path;
  std::error_code ec;
  std::filesystem::create_directories(path.parent_path(), ec);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw UnreadableFile("cannot write " + path.string());
  out << content;
  out.close();
  if (!out) throw UnreadableFile("error while writing " + path.string());
  files_[relative_path] = {relative_path, content.size(), sha256_hex(content)};
}

std::vector<OutputFile> OutputTree::finish() {
  nlohmann::json doc;
  doc["files"] = nlohmann::json::array();
  std::vector<OutputFile> out;
  for (const auto& [path, file] : files_) {
    doc["files"].push_back({{"path", file.path}, {"bytes", file.bytes}, {"sha256", file.sha256}});
    out.push_back(file);
  }
  write("manifest.json", doc.dump(2) + "\n");
  return out;
}

namespace {

std::string prefix(const PipelineConfig& config) { return std::string(to_string(config.level)) + "_"; }

std::string summary_text(const PipelineConfig& config, const Corpus& corpus, const NetworkAnalysis& a,
                         bool include_modularity, bool include_mst) {
  std::ostringstream out;
  out << "patents: " << corpus.size() << "\n";
  out << "min_occurrence: " << config.min_occurrence << "\n";
  out << "jaccard_threshold: " << format_fixed(config.jaccard_threshold, 3) << "\n";
  if (include_modularity) {
    out << "\n" << format_summary("modularity network", config.level, a.modularity_summary);
    out << "modularity: " << format_fixed(a.communities.modularity, 6) << "\n";
  }
  if (include_mst) {
    out << "\n" << format_summary("mst network", config.level, a.mst_summary);
    out << "forest_distance: " << format_fixed(a.forest.total_weight, 6) << "\n";
  }
  return out.str();
}

struct LayoutPair {
  LayoutPositions modularity;
  LayoutPositions mst;
};

LayoutPair layouts(const PipelineConfig& config, const NetworkAnalysis& a) {
  return {force_atlas2(a.modularity.similarity_graph(), config.layout),
          force_atlas2(a.mst.similarity_graph(), config.layout)};
}

void write_svgs(OutputTree& tree, const PipelineConfig& config, const NetworkAnalysis& a, const LayoutPair& layout) {
  RenderStyle modularity_style;
  modularity_style.color_by = ColorBy::ModularityClass;
  modularity_style.label_min_occurrence = config.effective_label_min_occurrence(config.level);
  modularity_style.prolific_threshold = config.prolific_threshold;
  RenderStyle mst_style = modularity_style;
  mst_style.color_by = ColorBy::ProlificFlag;
  tree.write(prefix(config) + "modularity.svg",
             render_svg(a.modularity, layout.modularity, a.modularity_metrics, modularity_style));
  tree.write(prefix(config) + "mst.svg", render_svg(a.mst, layout.mst, a.mst_metrics, mst_style));
}

void write_graph_files(OutputTree& tree, const PipelineConfig& config, const NetworkAnalysis& a,
                       const LayoutPair* layout, bool modularity, bool mst) {
  for (const auto format : config.formats) {
    const auto ext = std::string(file_extension(format));
    if (modularity) {
      ExportOptions options{layout ? &layout->modularity : nullptr, &a.modularity_metrics, false};
      tree.write(prefix(config) + "modularity" + ext, export_graph(a.modularity, format, options));
    }
    if (mst) {
      ExportOptions options{layout ? &layout->mst : nullptr, &a.mst_metrics, true};
      tree.write(prefix(config) + "mst" + ext, export_graph(a.mst, format, options));
    }
  }
}

std::string label_counts_csv(const char* header, const LabelCounts& counts) {
  std::string out = std::string(header) + "\n";
  for (const auto& [label, count] : counts) {
    if (count == 0) continue;
    out += csv::join_row({label, std::to_string(count)}) + "\n";
  }
  return out;
}

}  // namespace

CommandResult run_stats(const PipelineConfig& config) {
  config.validate();
  const auto prepared = prepare_corpus(config);
  OutputTree tree(config.output_dir);
  tree.write("ingest-report.json", prepared.report.to_json());

  const auto& corpus = prepared.corpus;
  std::string annual = "year,count\n";
  for (const auto& [year, count] : annual_counts(corpus)) {
    annual += std::to_string(year) + "," + std::to_string(count) + "\n";
  }
  tree.write("annual_counts.csv", annual);
  const auto applicants = count_by_applicant(corpus, config.applicant_rules);
  tree.write("applicant_counts.csv", label_counts_csv("label,count", applicants));
  const auto offices = count_by_office(corpus);
  tree.write("office_counts.csv", label_counts_csv("office,count", offices));

  std::ostringstream summary;
  summary << "records loaded: " << prepared.report.records_loaded << "\n";
  summary << "records after filters: " << corpus.size() << "\n";
  summary << "duplicate ids dropped: " << prepared.report.duplicate_ids.size() << "\n";
  summary << "malformed codes skipped: " << prepared.report.skipped_codes.size() << "\n";
  summary << "bad rows: " << prepared.report.bad_rows.size() << "\n";
  summary << "\nby applicant:\n";
  for (const auto& [label, count] : applicants) summary << "  " << label << ": " << count << "\n";
  summary << "\nby office:\n";
  for (const auto& [office, count] : offices) summary << "  " << office << ": " << count << "\n";
  summary << "\nby publication year:\n";
  for (const auto& [year, count] : annual_counts(corpus)) summary << "  " << year << ": " << count << "\n";
  tree.write("stats_summary.txt", summary.str());

  CommandResult result;
  result.files = tree.finish();
  result.message = std::to_string(corpus.size()) + " patents after filters";
  return result;
}

CommandResult run_network(const PipelineConfig& config) {
  config.validate();
  const auto prepared = prepare_corpus(config);
  const auto a = analyze_network(prepared.corpus, config.level, config);
  OutputTree tree(config.output_dir);
  tree.write("ingest-report.json", prepared.report.to_json());
  const auto p = prefix(config);
  tree.write(p + "nodes.csv", nodes_csv(a.full));
  tree.write(p + "modularity_edges.csv", edges_csv(a.modularity));
  tree.write(p + "mst_edges.csv", edges_csv(a.mst, true));
  tree.write(p + "metrics.csv", metrics_csv(a.modularity_metrics, a.mst_metrics));
  tree.write(p + "summary.txt", summary_text(config, prepared.corpus, a, true, true));
  write_graph_files(tree, config, a, nullptr, true, true);
  const auto layout = layouts(config, a);
  tree.write(p + "modularity_positions.csv", positions_csv(a.modularity, layout.modularity));
  tree.write(p + "mst_positions.csv", positions_csv(a.mst, layout.mst));
  write_svgs(tree, config, a, layout);

  CommandResult result;
  result.files = tree.finish();
  result.message = std::to_string(a.modularity.node_count()) + " nodes, " + std::to_string(a.modularity.edge_count()) +
                   " modularity edges, " + std::to_string(a.mst.edge_count()) + " forest edges";
  return result;
}

CommandResult run_mst(const PipelineConfig& config) {
  config.validate();
  const auto prepared = prepare_corpus(config);
  const auto a = analyze_network(prepared.corpus, config.level, config);
  OutputTree tree(config.output_dir);
  tree.write("ingest-report.json", prepared.report.to_json());
  const auto p = prefix(config);
  tree.write(p + "nodes.csv", nodes_csv(a.full));
  tree.write(p + "mst_edges.csv", edges_csv(a.mst, true));
  tree.write(p + "metrics.csv", metrics_csv(a.modularity_metrics, a.mst_metrics));
  tree.write(p + "mst_summary.txt", summary_text(config, prepared.corpus, a, false, true));
  write_graph_files(tree, config, a, nullptr, false, true);

  CommandResult result;
  result.files = tree.finish();
  result.message = std::to_string(a.mst.edge_count()) + " forest edges in " +
                   std::to_string(a.mst_components.count()) + " components";
  return result;
}

CommandResult run_layout(const PipelineConfig& config) {
  config.validate();
  const auto prepared = prepare_corpus(config);
  const auto a = analyze_network(prepared.corpus, config.level, config);
  const auto layout = layouts(config, a);
  OutputTree tree(config.output_dir);
  const auto p = prefix(config);
  tree.write(p + "modularity_positions.csv", positions_csv(a.modularity, layout.modularity));
  tree.write(p + "mst_positions.csv", positions_csv(a.mst, layout.mst));
  write_svgs(tree, config, a, layout);

  CommandResult result;
  result.files = tree.finish();
  result.message = "laid out " + std::to_string(a.full.node_count()) + " nodes";
  return result;
}

CommandResult run_export(const PipelineConfig& config) {
  config.validate();
  const auto prepared = prepare_corpus(config);
  const auto a = analyze_network(prepared.corpus, config.level, config);
  const auto layout = layouts(config, a);
  OutputTree tree(config.output_dir);
  write_graph_files(tree, config, a, &layout, true, true);

  CommandResult result;
  result.files = tree.finish();
  result.message = "exported " + std::to_string(config.formats.size()) + " format(s)";
  return result;
}

CommandResult run_replicate(const PipelineConfig& config) {
  config.validate();
  std::string manifest = published_manifest_json();
  if (config.manifest) {
    std::ifstream in(*config.manifest, std::ios::binary);
    if (!in) throw UnreadableFile("cannot read manifest " + config.manifest->string());
    std::ostringstream buffer;
    buffer << in.rdbuf();
    manifest = buffer.str();
  }
  const auto prepared = prepare_corpus(config);
  const auto outcomes = evaluate_manifest(manifest, prepared.corpus, config);

  OutputTree tree(config.output_dir);
  tree.write("ingest-report.json", prepared.report.to_json());
  tree.write("expected_manifest.json", manifest);
  std::string report_csv = "id,status,expected,actual,note\n";
  std::ostringstream report_txt;
  std::size_t passed = 0;
  std::size_t failed = 0;
  std::size_t warned = 0;
  for (const auto& o : outcomes) {
    const char* status = o.passed ? "PASS" : (o.informational ? "WARN" : "FAIL");
    if (o.passed) {
      ++passed;
    } else if (o.informational) {
      ++warned;
    } else {
      ++failed;
    }
    report_csv += csv::join_row({o.id, status, o.expected, o.actual, o.note}) + "\n";
    report_txt << status << " " << o.id << " expected=" << o.expected << " actual=" << o.actual;
    if (!o.note.empty()) report_txt << " (" << o.note << ")";
    report_txt << "\n";
  }
  report_txt << "\n" << passed << " passed, " << failed << " failed, " << warned << " informational mismatches\n";
  tree.write("replication_report.csv", report_csv);
  tree.write("replication_report.txt", report_txt.str());

  CommandResult result;
  result.files = tree.finish();
  result.all_passed = failed == 0;
  result.message = std::to_string(passed) + " passed, " + std::to_string(failed) + " failed, " +
                   std::to_string(warned) + " informational mismatches";
  return result;
}

}  // namespace patentmap
