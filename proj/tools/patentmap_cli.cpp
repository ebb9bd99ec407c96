// Command-line front end: stats, network, mst, layout, export, replicate.
#include <cstdio>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "patentmap/error.hpp"
#include "patentmap/pipeline.hpp"

namespace {

using namespace patentmap;

enum ExitCode : int {
  kOk = 0,
  kUnexpected = 1,
  kConfig = 2,
  kIo = 3,
  kEmpty = 4,
  kReplicationMismatch = 5,
};

std::string trim(std::string s) {
  const auto first = s.find_first_not_of(" \t");
  if (first == std::string::npos) return {};
  const auto last = s.find_last_not_of(" \t");
  return s.substr(first, last - first + 1);
}

std::pair<std::string, std::string> split_assignment(const std::string& text, const char* what) {
  const auto eq = text.find('=');
  if (eq == std::string::npos) throw ConfigError(std::string(what) + " must look like NAME=VALUE: '" + text + "'");
  return {trim(text.substr(0, eq)), trim(text.substr(eq + 1))};
}

void apply_column(PatentscopeColumns& columns, const std::string& text) {
  auto [field, header] = split_assignment(text, "--column");
  if (header.empty()) throw ConfigError("empty header name for column '" + field + "'");
  if (field == "patent_id") {
    columns.patent_id = header;
  } else if (field == "office") {
    columns.office = header;
  } else if (field == "publication_date") {
    columns.publication_date = header;
  } else if (field == "applicants") {
    columns.applicants = header;
  } else if (field == "ipc_codes") {
    columns.ipc_codes = header;
  } else {
    throw ConfigError("unknown column field '" + field + "'");
  }
}

ApplicantRule parse_rule(const std::string& text) {
  auto [label, rest] = split_assignment(text, "--applicant-rule");
  ApplicantRule rule{label, {}};
  std::size_t start = 0;
  while (start <= rest.size()) {
    const auto bar = rest.find('|', start);
    const auto piece = trim(rest.substr(start, bar == std::string::npos ? std::string::npos : bar - start));
    if (!piece.empty()) rule.patterns.push_back(piece);
    if (bar == std::string::npos) break;
    start = bar + 1;
  }
  return rule;
}

struct RawOptions {
  std::string format = "canonical-csv";
  std::vector<std::string> columns;
  std::vector<std::string> applicants;
  bool no_applicant_filter = false;
  std::vector<std::string> rules;
  std::string level = "subclass";
  std::vector<std::string> formats{"graphml"};
  std::string manifest;
};

PipelineConfig finish_config(PipelineConfig config, const RawOptions& raw) {
  try {
    config.input_format = parse_corpus_format(raw.format);
    config.level = parse_ipc_level(raw.level);
    config.formats.clear();
    for (const auto& f : raw.formats) config.formats.push_back(parse_graph_format(f));
  } catch (const Error& e) {
    throw ConfigError(e.what());
  }
  for (const auto& c : raw.columns) apply_column(config.columns, c);
  if (!raw.applicants.empty()) config.applicant_patterns = raw.applicants;
  config.filter_applicants = !raw.no_applicant_filter;
  if (!raw.rules.empty()) {
    config.applicant_rules.clear();
    for (const auto& r : raw.rules) config.applicant_rules.push_back(parse_rule(r));
  }
  if (!raw.manifest.empty()) config.manifest = raw.manifest;
  config.validate();
  return config;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Patent IPC co-occurrence network analysis"};
  app.set_config("--config", "", "INI or TOML file holding any of the long options below");
  app.require_subcommand(1);
  app.fallthrough();

  PipelineConfig config;
  RawOptions raw;
  std::string input;

  app.add_option("-i,--input", input, "Corpus file");
  app.add_option("--format", raw.format, "canonical-csv, canonical-jsonl or patentscope-csv")->capture_default_str();
  app.add_option("--column", raw.columns, "Patentscope header override, FIELD=Header")->take_all();
  app.add_option("--applicant", raw.applicants, "Applicant substring for the corpus filter (repeatable)");
  app.add_flag("--no-applicant-filter", raw.no_applicant_filter, "Keep every applicant");
  app.add_option("--applicant-rule", raw.rules, "Reporting bucket, Label=pattern1|pattern2 (repeatable)");
  app.add_option("--from-year", config.from_year)->capture_default_str();
  app.add_option("--to-year", config.to_year)->capture_default_str();
  app.add_option("--level", raw.level, "section, class, subclass or group")->capture_default_str();
  app.add_option("--min-occurrence", config.min_occurrence)->capture_default_str();
  app.add_option("--jaccard-threshold", config.jaccard_threshold, "Minimum Jaccard for the modularity network")
      ->capture_default_str();
  app.add_option("--resolution", config.resolution, "Louvain resolution")->capture_default_str();
  app.add_option("--seed", config.louvain_seed, "Louvain sweep-order seed")->capture_default_str();
  app.add_flag("--weighted-betweenness", config.weighted_betweenness, "Shortest paths over 1/Jaccard distances");
  app.add_option("--iterations", config.layout.iterations)->capture_default_str();
  app.add_option("--scaling", config.layout.scaling)->capture_default_str();
  app.add_option("--gravity", config.layout.gravity)->capture_default_str();
  app.add_flag("--linlog", config.layout.linlog_mode);
  app.add_flag("--strong-gravity", config.layout.strong_gravity);
  app.add_option("--prevent-overlap", config.layout.prevent_overlap)->capture_default_str();
  app.add_option("--edge-weight-influence", config.layout.edge_weight_influence)->capture_default_str();
  app.add_option("--jitter-tolerance", config.layout.jitter_tolerance)->capture_default_str();
  app.add_option("--layout-seed", config.layout.seed)->capture_default_str();
  app.add_option("-o,--output", config.output_dir, "Output directory")->capture_default_str();
  app.add_option("--formats", raw.formats, "graphml, gexf, dot, csv-edgelist")->delimiter(',')->capture_default_str();
  app.add_option("--label-min-occurrence", config.label_min_occurrence,
                 "Label nodes with at least this many patents (-1: automatic)")
      ->capture_default_str();
  app.add_option("--prolific-threshold", config.prolific_threshold)->capture_default_str();
  app.add_option("--top-k", config.top_k, "Edges listed in the summaries")->capture_default_str();
  app.add_option("--manifest", raw.manifest, "Replication manifest (defaults to the built-in one)");

  struct Command {
    const char* name;
    const char* help;
    CommandResult (*run)(const PipelineConfig&);
  };
  const Command commands[] = {
      {"stats", "Corpus counts by year, applicant and office", run_stats},
      {"network", "Both networks with metrics, summaries and drawings", run_network},
      {"mst", "Minimum spanning forest only", run_mst},
      {"layout", "ForceAtlas2 positions and SVG drawings", run_layout},
      {"export", "Graph files with layout positions", run_export},
      {"replicate", "Compare a run against published values", run_replicate},
  };
  for (const auto& c : commands) app.add_subcommand(c.name, c.help);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kOk : kConfig;
  }

  try {
    config.input = input;
    const PipelineConfig final_config = finish_config(config, raw);
    for (const auto& c : commands) {
      if (!app.got_subcommand(c.name)) continue;
      const CommandResult result = c.run(final_config);
      std::cout << result.message << "\n";
      for (const auto& f : result.files) std::cout << "  " << (final_config.output_dir / f.path).string() << "\n";
      return result.all_passed ? kOk : kReplicationMismatch;
    }
    return kUnexpected;
  } catch (const ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kConfig;
  } catch (const UnknownFormat& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kConfig;
  } catch (const UnreadableFile& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kIo;
  } catch (const EmptyCorpus& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kEmpty;
  } catch (const EmptyGraph& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kEmpty;
  } catch (const std::filesystem::filesystem_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kIo;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUnexpected;
  }
}
