#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "patentmap/community.hpp"
#include "patentmap/cooccurrence.hpp"
#include "patentmap/corpus.hpp"
#include "patentmap/export.hpp"
#include "patentmap/layout.hpp"
#include "patentmap/metrics.hpp"

namespace patentmap {

/// Applicant names from the Patentscope query the defaults reproduce.
std::vector<std::string> default_applicant_patterns();
/// Reporting buckets for the three filing subsidiaries.
std::vector<ApplicantRule> default_applicant_rules();

/// Every default equals the published setting, so a bare run on the
/// replication dataset repeats the original experiment.
struct PipelineConfig {
  std::filesystem::path input;
  CorpusFormat input_format = CorpusFormat::CanonicalCsv;
  PatentscopeColumns columns;
  bool filter_applicants = true;
  std::vector<std::string> applicant_patterns = default_applicant_patterns();
  std::vector<ApplicantRule> applicant_rules = default_applicant_rules();
  int from_year = 2008;
  int to_year = 2023;
  IpcLevel level = IpcLevel::Subclass;
  int min_occurrence = 2;
  double jaccard_threshold = 0.05;
  double resolution = 1.0;
  std::uint64_t louvain_seed = 1;
  bool weighted_betweenness = false;
  LayoutParams layout;
  std::filesystem::path output_dir = "patentmap-out";
  std::vector<GraphFormat> formats{GraphFormat::GraphMl};
  /// Negative means automatic: every label at subclass level, 50+ patents at
  /// group level.
  int label_min_occurrence = -1;
  int prolific_threshold = 50;
  std::size_t top_k = 10;
  std::optional<std::filesystem::path> manifest;  // replicate only

  /// Throws ConfigError.
  void validate() const;
  int effective_label_min_occurrence(IpcLevel level) const;
};

/// Loaded and filtered corpus.
struct PreparedCorpus {
  Corpus corpus;
  IngestReport report;
};

PreparedCorpus prepare_corpus(const PipelineConfig& config);

/// The two networks built from one graph: the thresholded modularity network
/// and the minimum spanning forest of the unthresholded inverse-Jaccard graph.
struct NetworkAnalysis {
  CooccurrenceGraph full;
  CooccurrenceGraph modularity;
  LouvainResult communities;
  Components modularity_components;
  MetricsTable modularity_metrics;
  SpanningForest forest;
  CooccurrenceGraph mst;
  Components mst_components;
  MetricsTable mst_metrics;
  NetworkSummary modularity_summary;
  NetworkSummary mst_summary;
};

/// Throws EmptyGraph when no code reaches min_occurrence.
NetworkAnalysis analyze_network(const Corpus& corpus, IpcLevel level, const PipelineConfig& config);

struct OutputFile {
  std::string path;  // relative to the output directory
  std::uintmax_t bytes = 0;
  std::string sha256;
};

/// Writes files under one directory and records their hashes; finish()
/// adds manifest.json.
class OutputTree {
 public:
  explicit OutputTree(std::filesystem::path root);
  void write(const std::string& relative_path, const std::string& content);
  /// Writes manifest.json and returns the recorded files.
  std::vector<OutputFile> finish();
  const std::filesystem::path& root() const noexcept { return root_; }

 private:
  std::filesystem::path root_;
  std::map<std::string, OutputFile> files_;
};

std::string sha256_hex(std::string_view data);

struct CommandResult {
  std::vector<OutputFile> files;
  std::string message;  // short human-readable summary
  bool all_passed = true;  // replicate only
};

CommandResult run_stats(const PipelineConfig& config);
CommandResult run_network(const PipelineConfig& config);
CommandResult run_mst(const PipelineConfig& config);
CommandResult run_layout(const PipelineConfig& config);
CommandResult run_export(const PipelineConfig& config);
CommandResult run_replicate(const PipelineConfig& config);

/// Expected values published with the original study, as a manifest document.
std::string published_manifest_json();

struct CheckOutcome {
  std::string id;
  std::string expected;
  std::string actual;
  bool passed = false;
  bool informational = false;
  std::string note;
};

/// Evaluates a manifest against a corpus. Used by run_replicate.
std::vector<CheckOutcome> evaluate_manifest(const std::string& manifest_json, const Corpus& corpus,
                                            const PipelineConfig& config);

}  // namespace patentmap
