#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "patentmap/community.hpp"
#include "patentmap/cooccurrence.hpp"
#include "patentmap/layout.hpp"
#include "patentmap/metrics.hpp"

namespace patentmap {

enum class GraphFormat { GraphMl, Gexf, Dot, CsvEdgeList };

/// "graphml", "gexf", "dot" or "csv-edgelist". Throws UnsupportedFormat.
GraphFormat parse_graph_format(std::string_view name);
std::string_view to_string(GraphFormat format);
std::string_view file_extension(GraphFormat format);

struct ExportOptions {
  const LayoutPositions* positions = nullptr;
  const MetricsTable* metrics = nullptr;
  bool include_distance = false;
};

/// Serialises the graph. Nodes appear in canonical code order and edges in
/// canonical pair order, so equal inputs give byte-identical documents.
/// Jaccard and distance values are exact decimals with 6 places; the
/// edge-list CSV uses the 3-place half-up rendering.
std::string export_graph(const CooccurrenceGraph& graph, GraphFormat format, const ExportOptions& options = {});

/// `code,occurrence`
std::string nodes_csv(const CooccurrenceGraph& graph);
/// `source,target,n_ij,jaccard` (+ `distance` when requested)
std::string edges_csv(const CooccurrenceGraph& graph, bool include_distance = false);
/// `code,patents,modularity_class,degree,betweenness,mst_degree,mst_betweenness`,
/// rows by descending patents then code.
std::string metrics_csv(const MetricsTable& modularity_network, const MetricsTable& mst_network);
/// `code,x,y`
std::string positions_csv(const CooccurrenceGraph& graph, const LayoutPositions& layout);

enum class ColorBy { ModularityClass, Fixed, ProlificFlag };
enum class EdgeThicknessBy { Jaccard, Fixed };

struct RenderStyle {
  // Node area always follows the occurrence count.
  ColorBy color_by = ColorBy::ModularityClass;
  int label_min_occurrence = 0;
  int prolific_threshold = 50;
  EdgeThicknessBy edge_thickness_by = EdgeThicknessBy::Jaccard;

  void validate() const;
};

/// Community colours, cycled past 16 classes.
extern const std::array<std::string_view, 16> kCommunityPalette;
inline constexpr std::string_view kProlificColor = "#d62728";
inline constexpr std::string_view kPlainColor = "#9e9e9e";

/// SVG 1.1 map: edges under nodes, circle radius on a square-root scale of
/// occurrence, labels for nodes at or above label_min_occurrence.
/// Throws MissingPositions when the layout does not cover every node.
std::string render_svg(const CooccurrenceGraph& graph, const LayoutPositions& layout, const MetricsTable& metrics,
                       const RenderStyle& style);

struct EdgeSummary {
  std::string source;
  std::string target;
  std::uint32_t cooccurrence = 0;
  std::string jaccard;  // 3 decimals, half-up
};

struct NetworkSummary {
  std::size_t node_count = 0;
  std::size_t edge_count = 0;
  std::size_t component_count = 0;
  std::optional<std::size_t> community_count;
  std::vector<std::size_t> component_sizes;
  std::vector<EdgeSummary> top_by_cooccurrence;
  std::vector<EdgeSummary> top_by_jaccard;
};

/// Counts plus the top-k edges by N_ij and by R_ij (exact comparisons, ties
/// by the other measure, then canonical pair).
NetworkSummary network_summary(const CooccurrenceGraph& graph, const Partition* partition,
                               const Components& components, std::size_t top_k = 10);

/// Plain-text block used in summary.txt.
std::string format_summary(std::string_view title, IpcLevel level, const NetworkSummary& summary);

}  // namespace patentmap
