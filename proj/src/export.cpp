#include "patentmap/export.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "csv.hpp"
#include "patentmap/error.hpp"
#include "patentmap/format.hpp"

namespace patentmap {

namespace {

std::string xml_escape(std::string_view text) {
  std::string out;
  out.reserve(text.size());
  for (char c : text) {
    switch (c) {
      case '&':
        out += "&amp;";
        break;
      case '<':
        out += "&lt;";
        break;
      case '>':
        out += "&gt;";
        break;
      case '"':
        out += "&quot;";
        break;
      case '\'':
        out += "&apos;";
        break;
      default:
        out += c;
    }
  }
  return out;
}

std::string dot_quote(std::string_view text) {
  std::string out = "\"";
  for (char c : text) {
    if (c == '"' || c == '\\') out += '\\';
    out += c;
  }
  out += '"';
  return out;
}

std::string jaccard6(const CooccurrenceEdge& e) { return format_ratio_half_up(e.cooccurrence, e.union_count, 6); }
std::string jaccard3(const CooccurrenceEdge& e) { return format_ratio_half_up(e.cooccurrence, e.union_count, 3); }
std::string distance6(const CooccurrenceEdge& e) { return format_ratio_half_up(e.union_count, e.cooccurrence, 6); }

void check_coverage(const CooccurrenceGraph& graph, const ExportOptions& options) {
  if (options.positions && options.positions->positions.size() != graph.node_count()) {
    throw MissingPositions("layout does not cover every node");
  }
  if (options.metrics && options.metrics->rows.size() != graph.node_count()) {
    throw Error("metrics table does not cover every node");
  }
}

// Attribute columns shared by the XML formats.
struct NodeAttribute {
  const char* name;
  const char* graphml_type;
  const char* gexf_type;
};

std::vector<NodeAttribute> node_attributes(const ExportOptions& options) {
  std::vector<NodeAttribute> out{{"occurrence", "int", "integer"}};
  if (options.metrics) {
    out.push_back({"degree", "int", "integer"});
    out.push_back({"betweenness", "double", "double"});
    out.push_back({"modularity_class", "int", "integer"});
    out.push_back({"component", "int", "integer"});
  }
  return out;
}

std::vector<std::string> node_values(const CooccurrenceGraph& graph, NodeId v, const ExportOptions& options) {
  std::vector<std::string> out{std::to_string(graph.occurrence()[v])};
  if (options.metrics) {
    const auto& row = options.metrics->rows[v];
    out.push_back(std::to_string(row.degree));
    out.push_back(format_fixed(row.betweenness, 6));
    out.push_back(std::to_string(row.modularity_class));
    out.push_back(std::to_string(row.component_id));
  }
  return out;
}

std::vector<std::string> edge_names(const ExportOptions& options) {
  std::vector<std::string> out{"n_ij", "jaccard"};
  if (options.include_distance) out.emplace_back("distance");
  return out;
}

std::vector<std::string> edge_values(const CooccurrenceEdge& e, const ExportOptions& options) {
  std::vector<std::string> out{std::to_string(e.cooccurrence), jaccard6(e)};
  if (options.include_distance) out.push_back(distance6(e));
  return out;
}

std::string to_graphml(const CooccurrenceGraph& graph, const ExportOptions& options) {
  std::ostringstream out;
  out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
      << "<graphml xmlns=\"http://graphml.graphdrawing.org/xmlns\" "
         "xmlns:xsi=\"http://www.w3.org/2001/XMLSchema-instance\" "
         "xsi:schemaLocation=\"http://graphml.graphdrawing.org/xmlns "
         "http://graphml.graphdrawing.org/xmlns/1.0/graphml.xsd\">\n";
  const auto attributes = node_attributes(options);
  int key = 0;
  for (const auto& a : attributes) {
    out << "  <key id=\"d" << key++ << "\" for=\"node\" attr.name=\"" << a.name << "\" attr.type=\""
        << a.graphml_type << "\"/>\n";
  }
  if (options.positions) {
    out << "  <key id=\"d" << key++ << "\" for=\"node\" attr.name=\"x\" attr.type=\"double\"/>\n";
    out << "  <key id=\"d" << key++ << "\" for=\"node\" attr.name=\"y\" attr.type=\"double\"/>\n";
  }
  const int first_edge_key = key;
  const auto edge_keys = edge_names(options);
  for (std::size_t i = 0; i < edge_keys.size(); ++i) {
    out << "  <key id=\"d" << key++ << "\" for=\"edge\" attr.name=\"" << edge_keys[i] << "\" attr.type=\""
        << (i == 0 ? "int" : "double") << "\"/>\n";
  }
  out << "  <graph id=\"G\" edgedefault=\"undirected\">\n";
  for (NodeId v = 0; v < graph.node_count(); ++v) {
    out << "    <node id=\"" << xml_escape(graph.labels()[v]) << "\">\n";
    const auto values = node_values(graph, v, options);
    int k = 0;
    for (const auto& value : values) out << "      <data key=\"d" << k++ << "\">" << value << "</data>\n";
    if (options.positions) {
      const auto& p = options.positions->positions[v];
      out << "      <data key=\"d" << k++ << "\">" << format_fixed(p.x, 6) << "</data>\n";
      out << "      <data key=\"d" << k++ << "\">" << format_fixed(p.y, 6) << "</data>\n";
    }
    out << "    </node>\n";
  }
  std::size_t index = 0;
  for (const auto& e : graph.edges()) {
    out << "    <edge id=\"e" << index++ << "\" source=\"" << xml_escape(graph.labels()[e.source]) << "\" target=\""
        << xml_escape(graph.labels()[e.target]) << "\">\n";
    int k = first_edge_key;
    for (const auto& value : edge_values(e, options)) {
      out << "      <data key=\"d" << k++ << "\">" << value << "</data>\n";
    }
    out << "    </edge>\n";
  }
  out << "  </graph>\n</graphml>\n";
  return out.str();
}

std::string to_gexf(const CooccurrenceGraph& graph, const ExportOptions& options) {
  std::ostringstream out;
  out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
      << "<gexf xmlns=\"http://www.gexf.net/1.2draft\" xmlns:viz=\"http://www.gexf.net/1.2draft/viz\" "
         "version=\"1.2\">\n"
      << "  <meta>\n    <creator>patentmap</creator>\n  </meta>\n"
      << "  <graph defaultedgetype=\"undirected\" mode=\"static\">\n";
  const auto attributes = node_attributes(options);
  out << "    <attributes class=\"node\">\n";
  for (std::size_t i = 0; i < attributes.size(); ++i) {
    out << "      <attribute id=\"" << i << "\" title=\"" << attributes[i].name << "\" type=\""
        << attributes[i].gexf_type << "\"/>\n";
  }
  out << "    </attributes>\n    <attributes class=\"edge\">\n";
  const auto edge_keys = edge_names(options);
  for (std::size_t i = 0; i < edge_keys.size(); ++i) {
    out << "      <attribute id=\"" << i << "\" title=\"" << edge_keys[i] << "\" type=\""
        << (i == 0 ? "integer" : "double") << "\"/>\n";
  }
  out << "    </attributes>\n    <nodes>\n";
  for (NodeId v = 0; v < graph.node_count(); ++v) {
    const auto label = xml_escape(graph.labels()[v]);
    out << "      <node id=\"" << label << "\" label=\"" << label << "\">\n        <attvalues>\n";
    const auto values = node_values(graph, v, options);
    for (std::size_t i = 0; i < values.size(); ++i) {
      out << "          <attvalue for=\"" << i << "\" value=\"" << values[i] << "\"/>\n";
    }
    out << "        </attvalues>\n";
    if (options.positions) {
      const auto& p = options.positions->positions[v];
      out << "        <viz:position x=\"" << format_fixed(p.x, 6) << "\" y=\"" << format_fixed(p.y, 6)
          << "\" z=\"0.0\"/>\n";
    }
    out << "      </node>\n";
  }
  out << "    </nodes>\n    <edges>\n";
  std::size_t index = 0;
  for (const auto& e : graph.edges()) {
    out << "      <edge id=\"" << index++ << "\" source=\"" << xml_escape(graph.labels()[e.source])
        << "\" target=\"" << xml_escape(graph.labels()[e.target]) << "\" weight=\"" << jaccard6(e)
        << "\">\n        <attvalues>\n";
    const auto values = edge_values(e, options);
    for (std::size_t i = 0; i < values.size(); ++i) {
      out << "          <attvalue for=\"" << i << "\" value=\"" << values[i] << "\"/>\n";
    }
    out << "        </attvalues>\n      </edge>\n";
  }
  out << "    </edges>\n  </graph>\n</gexf>\n";
  return out.str();
}

std::string to_dot(const CooccurrenceGraph& graph, const ExportOptions& options) {
  std::ostringstream out;
  out << "graph cooccurrence {\n";
  const auto attributes = node_attributes(options);
  for (NodeId v = 0; v < graph.node_count(); ++v) {
    out << "  " << dot_quote(graph.labels()[v]) << " [";
    const auto values = node_values(graph, v, options);
    for (std::size_t i = 0; i < values.size(); ++i) {
      out << (i ? ", " : "") << attributes[i].name << "=" << values[i];
    }
    if (options.positions) {
      const auto& p = options.positions->positions[v];
      out << ", pos=\"" << format_fixed(p.x, 6) << "," << format_fixed(p.y, 6) << "\"";
    }
    out << "];\n";
  }
  const auto edge_keys = edge_names(options);
  for (const auto& e : graph.edges()) {
    out << "  " << dot_quote(graph.labels()[e.source]) << " -- " << dot_quote(graph.labels()[e.target]) << " [";
    const auto values = edge_values(e, options);
    for (std::size_t i = 0; i < values.size(); ++i) out << (i ? ", " : "") << edge_keys[i] << "=" << values[i];
    out << "];\n";
  }
  out << "}\n";
  return out.str();
}

// Exact R_a > R_b on the stored rationals.
bool jaccard_greater(const CooccurrenceEdge& a, const CooccurrenceEdge& b) {
  return static_cast<std::uint64_t>(a.cooccurrence) * b.union_count >
         static_cast<std::uint64_t>(b.cooccurrence) * a.union_count;
}

EdgeSummary summarize_edge(const CooccurrenceGraph& graph, const CooccurrenceEdge& e) {
  return {graph.labels()[e.source], graph.labels()[e.target], e.cooccurrence, jaccard3(e)};
}

}  // namespace

GraphFormat parse_graph_format(std::string_view name) {
  if (name == "graphml") return GraphFormat::GraphMl;
  if (name == "gexf") return GraphFormat::Gexf;
  if (name == "dot") return GraphFormat::Dot;
  if (name == "csv-edgelist" || name == "csv") return GraphFormat::CsvEdgeList;
  throw UnsupportedFormat("unsupported graph format '" + std::string(name) + "'");
}

std::string_view to_string(GraphFormat format) {
  switch (format) {
    case GraphFormat::GraphMl:
      return "graphml";
    case GraphFormat::Gexf:
      return "gexf";
    case GraphFormat::Dot:
      return "dot";
    case GraphFormat::CsvEdgeList:
      return "csv-edgelist";
  }
  return "unknown";
}

std::string_view file_extension(GraphFormat format) {
  switch (format) {
    case GraphFormat::GraphMl:
      return ".graphml";
    case GraphFormat::Gexf:
      return ".gexf";
    case GraphFormat::Dot:
      return ".dot";
    case GraphFormat::CsvEdgeList:
      return ".edges.csv";
  }
  return "";
}

std::string export_graph(const CooccurrenceGraph& graph, GraphFormat format, const ExportOptions& options) {
  check_coverage(graph, options);
  switch (format) {
    case GraphFormat::GraphMl:
      return to_graphml(graph, options);
    case GraphFormat::Gexf:
      return to_gexf(graph, options);
    case GraphFormat::Dot:
      return to_dot(graph, options);
    case GraphFormat::CsvEdgeList:
      return edges_csv(graph, options.include_distance);
  }
  throw UnsupportedFormat("unsupported graph format");
}

std::string nodes_csv(const CooccurrenceGraph& graph) {
  std::string out = "code,occurrence\n";
  for (NodeId v = 0; v < graph.node_count(); ++v) {
    out += csv::join_row({graph.labels()[v], std::to_string(graph.occurrence()[v])}) + "\n";
  }
  return out;
}

std::string edges_csv(const CooccurrenceGraph& graph, bool include_distance) {
  std::string out = include_distance ? "source,target,n_ij,jaccard,distance\n" : "source,target,n_ij,jaccard\n";
  for (const auto& e : graph.edges()) {
    std::vector<std::string> row{graph.labels()[e.source], graph.labels()[e.target], std::to_string(e.cooccurrence),
                                 jaccard3(e)};
    if (include_distance) row.push_back(distance6(e));
    out += csv::join_row(row) + "\n";
  }
  return out;
}

std::string metrics_csv(const MetricsTable& modularity_network, const MetricsTable& mst_network) {
  const auto& a = modularity_network.rows;
  const auto& b = mst_network.rows;
  if (a.size() != b.size()) throw Error("metrics tables cover different node sets");
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i].code != b[i].code) throw Error("metrics tables cover different node sets");
  }
  std::vector<std::size_t> order(a.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t x, std::size_t y) { return a[x].occurrence > a[y].occurrence; });
  std::string out = "code,patents,modularity_class,degree,betweenness,mst_degree,mst_betweenness\n";
  for (std::size_t i : order) {
    out += csv::join_row({a[i].code, std::to_string(a[i].occurrence), std::to_string(a[i].modularity_class),
                          std::to_string(a[i].degree), format_fixed(a[i].betweenness, 6), std::to_string(b[i].degree),
                          format_fixed(b[i].betweenness, 6)}) +
           "\n";
  }
  return out;
}

std::string positions_csv(const CooccurrenceGraph& graph, const LayoutPositions& layout) {
  if (layout.positions.size() != graph.node_count()) throw MissingPositions("layout does not cover every node");
  std::string out = "code,x,y\n";
  for (NodeId v = 0; v < graph.node_count(); ++v) {
    const auto& p = layout.positions[v];
    out += csv::join_row({graph.labels()[v], format_fixed(p.x, 6), format_fixed(p.y, 6)}) + "\n";
  }
  return out;
}

const std::array<std::string_view, 16> kCommunityPalette = {
    "#ff7f0e", "#1f77b4", "#2ca02c", "#e377c2", "#9467bd", "#8c564b", "#17becf", "#bcbd22",
    "#d62728", "#7f7f7f", "#aec7e8", "#ffbb78", "#98df8a", "#ff9896", "#c5b0d5", "#c49c94"};

void RenderStyle::validate() const {
  if (label_min_occurrence < 0) throw Error("label_min_occurrence must be >= 0");
  if (prolific_threshold < 1) throw Error("prolific_threshold must be >= 1");
}

std::string render_svg(const CooccurrenceGraph& graph, const LayoutPositions& layout, const MetricsTable& metrics,
                       const RenderStyle& style) {
  style.validate();
  const std::size_t n = graph.node_count();
  if (layout.positions.size() != n) throw MissingPositions("layout does not cover every node");
  if (metrics.rows.size() != n) throw Error("metrics table does not cover every node");

  constexpr double kCanvas = 1000.0;
  constexpr double kMargin = 60.0;
  constexpr double kMinRadius = 3.0;
  constexpr double kRadiusRange = 17.0;

  double min_x = 0.0, max_x = 0.0, min_y = 0.0, max_y = 0.0;
  std::uint32_t max_occurrence = 1;
  for (std::size_t v = 0; v < n; ++v) {
    const auto& p = layout.positions[v];
    if (v == 0) {
      min_x = max_x = p.x;
      min_y = max_y = p.y;
    }
    min_x = std::min(min_x, p.x);
    max_x = std::max(max_x, p.x);
    min_y = std::min(min_y, p.y);
    max_y = std::max(max_y, p.y);
    max_occurrence = std::max(max_occurrence, graph.occurrence()[v]);
  }
  const double span = std::max(max_x - min_x, max_y - min_y);
  const double scale = span > 0.0 ? (kCanvas - 2.0 * kMargin) / span : 0.0;
  const double offset_x = kCanvas / 2.0 - (min_x + max_x) / 2.0 * scale;
  const double offset_y = kCanvas / 2.0 + (min_y + max_y) / 2.0 * scale;
  const auto screen = [&](NodeId v) {
    const auto& p = layout.positions[v];
    return Point{offset_x + p.x * scale, offset_y - p.y * scale};
  };
  const auto radius = [&](NodeId v) {
    return kMinRadius + kRadiusRange * std::sqrt(static_cast<double>(graph.occurrence()[v]) / max_occurrence);
  };
  const auto fill = [&](NodeId v) -> std::string_view {
    switch (style.color_by) {
      case ColorBy::ModularityClass: {
        const int c = metrics.rows[v].modularity_class;
        return c < 0 ? kPlainColor : kCommunityPalette[static_cast<std::size_t>(c) % kCommunityPalette.size()];
      }
      case ColorBy::ProlificFlag:
        return graph.occurrence()[v] >= static_cast<std::uint32_t>(style.prolific_threshold) ? kProlificColor
                                                                                             : kPlainColor;
      case ColorBy::Fixed:
        return kPlainColor;
    }
    return kPlainColor;
  };

  std::ostringstream out;
  out << "<?xml version=\"1.0\" encoding=\"UTF-8\" standalone=\"no\"?>\n"
      << "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"1000\" height=\"1000\" "
         "viewBox=\"0 0 1000 1000\">\n"
      << "  <rect x=\"0\" y=\"0\" width=\"1000\" height=\"1000\" fill=\"#ffffff\"/>\n"
      << "  <g id=\"edges\" stroke=\"#b0b0b0\" stroke-opacity=\"0.7\">\n";
  for (const auto& e : graph.edges()) {
    const Point a = screen(e.source);
    const Point b = screen(e.target);
    const double width = style.edge_thickness_by == EdgeThicknessBy::Jaccard ? 0.5 + 3.5 * e.jaccard : 1.0;
    out << "    <line x1=\"" << format_fixed(a.x, 2) << "\" y1=\"" << format_fixed(a.y, 2) << "\" x2=\""
        << format_fixed(b.x, 2) << "\" y2=\"" << format_fixed(b.y, 2) << "\" stroke-width=\""
        << format_fixed(width, 2) << "\"/>\n";
  }
  out << "  </g>\n  <g id=\"nodes\" stroke=\"#ffffff\" stroke-width=\"0.8\">\n";
  for (NodeId v = 0; v < n; ++v) {
    const Point p = screen(v);
    out << "    <circle cx=\"" << format_fixed(p.x, 2) << "\" cy=\"" << format_fixed(p.y, 2) << "\" r=\""
        << format_fixed(radius(v), 2) << "\" fill=\"" << fill(v) << "\"><title>"
        << xml_escape(graph.labels()[v]) << " (" << graph.occurrence()[v] << ")</title></circle>\n";
  }
  out << "  </g>\n  <g id=\"labels\" font-family=\"sans-serif\" font-size=\"12\" fill=\"#222222\">\n";
  for (NodeId v = 0; v < n; ++v) {
    if (graph.occurrence()[v] < static_cast<std::uint32_t>(style.label_min_occurrence)) continue;
    const Point p = screen(v);
    out << "    <text x=\"" << format_fixed(p.x + radius(v) + 2.0, 2) << "\" y=\"" << format_fixed(p.y + 4.0, 2)
        << "\">" << xml_escape(graph.labels()[v]) << "</text>\n";
  }
  out << "  </g>\n</svg>\n";
  return out.str();
}

NetworkSummary network_summary(const CooccurrenceGraph& graph, const Partition* partition,
                               const Components& components, std::size_t top_k) {
  if (components.label.size() != graph.node_count()) throw Error("components computed on another graph");
  if (partition && partition->label.size() != graph.node_count()) {
    throw PartitionMismatch("partition computed on another graph");
  }
  NetworkSummary summary;
  summary.node_count = graph.node_count();
  summary.edge_count = graph.edge_count();
  summary.component_count = components.count();
  summary.component_sizes = components.sizes;
  if (partition) summary.community_count = partition->community_count();

  std::vector<const CooccurrenceEdge*> edges;
  for (const auto& e : graph.edges()) edges.push_back(&e);
  const auto pair_less = [](const CooccurrenceEdge* a, const CooccurrenceEdge* b) {
    return std::pair{a->source, a->target} < std::pair{b->source, b->target};
  };
  auto by_count = edges;
  std::sort(by_count.begin(), by_count.end(), [&](const auto* a, const auto* b) {
    if (a->cooccurrence != b->cooccurrence) return a->cooccurrence > b->cooccurrence;
    if (jaccard_greater(*a, *b) || jaccard_greater(*b, *a)) return jaccard_greater(*a, *b);
    return pair_less(a, b);
  });
  auto by_jaccard = edges;
  std::sort(by_jaccard.begin(), by_jaccard.end(), [&](const auto* a, const auto* b) {
    if (jaccard_greater(*a, *b) || jaccard_greater(*b, *a)) return jaccard_greater(*a, *b);
    if (a->cooccurrence != b->cooccurrence) return a->cooccurrence > b->cooccurrence;
    return pair_less(a, b);
  });
  for (std::size_t i = 0; i < std::min(top_k, edges.size()); ++i) {
    summary.top_by_cooccurrence.push_back(summarize_edge(graph, *by_count[i]));
    summary.top_by_jaccard.push_back(summarize_edge(graph, *by_jaccard[i]));
  }
  return summary;
}

std::string format_summary(std::string_view title, IpcLevel level, const NetworkSummary& summary) {
  std::ostringstream out;
  out << "[" << title << "]\n";
  out << "level: " << to_string(level) << "\n";
  out << "nodes: " << summary.node_count << "\n";
  out << "edges: " << summary.edge_count << "\n";
  out << "components: " << summary.component_count << "\n";
  out << "component_sizes:";
  for (auto s : summary.component_sizes) out << " " << s;
  out << "\n";
  if (summary.community_count) out << "communities: " << *summary.community_count << "\n";
  const auto edges = [&](const char* heading, const std::vector<EdgeSummary>& list) {
    out << heading << ":\n";
    for (const auto& e : list) {
      out << "  " << e.source << " -- " << e.target << " n_ij=" << e.cooccurrence << " jaccard=" << e.jaccard << "\n";
    }
  };
  edges("top_edges_by_cooccurrence", summary.top_by_cooccurrence);
  edges("top_edges_by_jaccard", summary.top_by_jaccard);
  return out.str();
}

}  // namespace patentmap
