#pragma once

#include <cstddef>
#include <set>
#include <string>
#include <string_view>
#include <tuple>
#include <vector>

#include "chronoclust/corpus.hpp"

namespace chronoclust {

/// A presence at (lane, axis position).
struct GridNode {
  std::size_t lane = 0;
  std::size_t axis = 0;

  auto operator<=>(const GridNode&) const = default;
};

/// Trace edge joining consecutive presences of one lane entity.
struct GridEdge {
  std::size_t lane = 0;
  std::size_t from_axis = 0;
  std::size_t to_axis = 0;

  auto operator<=>(const GridEdge&) const = default;
};

/// Presence lattice: documents along the axis, entities as lanes. Nodes are
/// sorted by (lane, axis); each lane's edges form one path through its
/// presences in axis order, skipping absences.
struct GridNetwork {
  std::vector<std::string> axis_order;
  std::vector<std::string> lane_order;
  std::vector<GridNode> nodes;
  std::vector<GridEdge> edges;
  std::vector<std::string> notes;

  /// Nodes as (entity, document) pairs.
  std::set<std::pair<std::string, std::string>> node_pairs() const;
  /// Edges as (entity, document, document) with the documents sorted.
  std::set<std::tuple<std::string, std::string, std::string>> edge_triples() const;

  bool operator==(const GridNetwork&) const = default;
};

/// Builds the grid from a binary matrix. Lanes without any presence along
/// the axis are left out and noted.
/// Throws Error(NonBinaryMatrix) or Error(UnknownAxisId) (also used for
/// lane ids missing from the matrix).
GridNetwork build_grid(const MentionMatrix& presence, const std::vector<std::string>& axis_order,
                       const std::vector<std::string>& lane_order);

struct TraceSummary {
  std::string entity;
  std::string first_doc;
  std::string last_doc;
  std::size_t presence_count = 0;
  std::size_t gap_count = 0;  // absent axis documents strictly between first and last
  bool continuous = true;

  bool operator==(const TraceSummary&) const = default;
};

/// One summary per lane, in lane order.
std::vector<TraceSummary> traces(const GridNetwork& grid);

/// DOT with one rank=same subgraph per axis column and node ids
/// "entity@document".
std::string export_dot(const GridNetwork& grid);

/// GraphML with entity, document, axis_index and lane_index node data.
std::string export_graphml(const GridNetwork& grid);

struct StyleOptions {
  double cell_width = 80.0;
  double cell_height = 36.0;
  double margin = 24.0;
  double label_width = 120.0;   // room for lane labels
  double header_height = 32.0;  // room for axis labels
  double node_radius = 9.0;
  double font_size = 11.0;
  double stroke_width = 2.0;
  std::string node_fill = "#f2c14e";
  std::string node_stroke = "#5b3a29";
  std::string edge_stroke = "#7a8b99";
  std::string text_color = "#222222";
  std::string background = "#ffffff";
  bool node_labels = false;      // entity name inside each circle
  bool lanes_as_columns = false; // draw lanes left to right, axis top to bottom

  /// Reads overrides from a JSON object; unknown keys are rejected.
  /// Throws Error(BadConfig).
  static StyleOptions from_json(std::string_view json);
};

/// Static lattice drawing: axis positions equally spaced, lanes in lane
/// order, circles for presences and one polyline per trace.
std::string export_svg(const GridNetwork& grid, const StyleOptions& style = {});

}  // namespace chronoclust
