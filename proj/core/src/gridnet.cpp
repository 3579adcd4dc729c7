#include "chronoclust/gridnet.hpp"

#include <algorithm>
#include <charconv>
#include <map>

#include <json.hpp>

#include "chronoclust/error.hpp"

namespace chronoclust {

namespace {

std::string dot_quote(std::string_view s) {
  std::string out = "\"";
  for (char c : s) {
    if (c == '"' || c == '\\') out += '\\';
    out += c;
  }
  return out + "\"";
}

std::string xml_escape(std::string_view s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      case '\'': out += "&apos;"; break;
      default: out += c;
    }
  }
  return out;
}

std::string num(double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, ptr);
}

std::string node_id(const GridNetwork& g, const GridNode& n) {
  return g.lane_order[n.lane] + "@" + g.axis_order[n.axis];
}

}  // namespace

std::set<std::pair<std::string, std::string>> GridNetwork::node_pairs() const {
  std::set<std::pair<std::string, std::string>> out;
  for (const auto& n : nodes) out.emplace(lane_order[n.lane], axis_order[n.axis]);
  return out;
}

std::set<std::tuple<std::string, std::string, std::string>> GridNetwork::edge_triples() const {
  std::set<std::tuple<std::string, std::string, std::string>> out;
  for (const auto& e : edges) {
    auto [a, b] = std::minmax(axis_order[e.from_axis], axis_order[e.to_axis]);
    out.emplace(lane_order[e.lane], a, b);
  }
  return out;
}

GridNetwork build_grid(const MentionMatrix& presence, const std::vector<std::string>& axis_order,
                       const std::vector<std::string>& lane_order) {
  if (!presence.is_binary()) {
    throw Error(ErrorKind::NonBinaryMatrix, "grid input must be a presence (0/1) matrix");
  }
  std::vector<std::size_t> columns;
  for (const auto& id : axis_order) {
    auto d = presence.document_index(id);
    if (!d) throw Error(ErrorKind::UnknownAxisId, "axis document `" + id + "` not in matrix");
    columns.push_back(*d);
  }
  std::set<std::string> unique_axis(axis_order.begin(), axis_order.end());
  if (unique_axis.size() != axis_order.size()) {
    throw Error(ErrorKind::UnknownAxisId, "axis order repeats a document");
  }
  std::set<std::string> unique_lanes(lane_order.begin(), lane_order.end());
  if (unique_lanes.size() != lane_order.size()) {
    throw Error(ErrorKind::UnknownAxisId, "lane order repeats an entity");
  }

  GridNetwork grid;
  grid.axis_order = axis_order;
  for (const auto& id : lane_order) {
    auto e = presence.entity_index(id);
    if (!e) throw Error(ErrorKind::UnknownAxisId, "lane entity `" + id + "` not in matrix");
    std::vector<std::size_t> present;
    for (std::size_t a = 0; a < columns.size(); ++a) {
      if (presence.at(*e, columns[a]) == 1) present.push_back(a);
    }
    if (present.empty()) {
      grid.notes.push_back("entity `" + id + "` has no presence on this axis; lane omitted");
      continue;
    }
    const std::size_t lane = grid.lane_order.size();
    grid.lane_order.push_back(id);
    for (std::size_t i = 0; i < present.size(); ++i) {
      grid.nodes.push_back({lane, present[i]});
      if (i > 0) grid.edges.push_back({lane, present[i - 1], present[i]});
    }
  }
  return grid;
}

std::vector<TraceSummary> traces(const GridNetwork& grid) {
  std::vector<TraceSummary> out;
  for (std::size_t lane = 0; lane < grid.lane_order.size(); ++lane) {
    std::vector<std::size_t> present;
    for (const auto& n : grid.nodes) {
      if (n.lane == lane) present.push_back(n.axis);
    }
    if (present.empty()) continue;
    std::sort(present.begin(), present.end());
    TraceSummary t;
    t.entity = grid.lane_order[lane];
    t.first_doc = grid.axis_order[present.front()];
    t.last_doc = grid.axis_order[present.back()];
    t.presence_count = present.size();
    t.gap_count = present.back() - present.front() + 1 - present.size();
    t.continuous = t.gap_count == 0;
    out.push_back(std::move(t));
  }
  return out;
}

std::string export_dot(const GridNetwork& grid) {
  std::string out = "graph grid {\n";
  out += "  node [shape=circle];\n";
  // Columns in axis order, nodes inside a column in lane order.
  std::vector<std::vector<const GridNode*>> columns(grid.axis_order.size());
  for (const auto& n : grid.nodes) columns[n.axis].push_back(&n);
  for (auto& col : columns) {
    std::sort(col.begin(), col.end(), [](auto* a, auto* b) { return a->lane < b->lane; });
  }
  for (std::size_t a = 0; a < columns.size(); ++a) {
    out += "  subgraph " + dot_quote("axis_" + grid.axis_order[a]) + " {\n";
    out += "    rank=same;\n";
    for (const auto* n : columns[a]) {
      out += "    " + dot_quote(node_id(grid, *n)) + " [label=" +
             dot_quote(grid.lane_order[n->lane]) + "];\n";
    }
    out += "  }\n";
  }
  for (const auto& e : grid.edges) {
    out += "  " + dot_quote(grid.lane_order[e.lane] + "@" + grid.axis_order[e.from_axis]) + " -- " +
           dot_quote(grid.lane_order[e.lane] + "@" + grid.axis_order[e.to_axis]) + ";\n";
  }
  out += "}\n";
  return out;
}

std::string export_graphml(const GridNetwork& grid) {
  std::string out =
      "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
      "<graphml xmlns=\"http://graphml.graphdrawing.org/xmlns\" "
      "xmlns:xsi=\"http://www.w3.org/2001/XMLSchema-instance\" "
      "xsi:schemaLocation=\"http://graphml.graphdrawing.org/xmlns "
      "http://graphml.graphdrawing.org/xmlns/1.0/graphml.xsd\">\n"
      "  <key id=\"entity\" for=\"node\" attr.name=\"entity\" attr.type=\"string\"/>\n"
      "  <key id=\"document\" for=\"node\" attr.name=\"document\" attr.type=\"string\"/>\n"
      "  <key id=\"axis_index\" for=\"node\" attr.name=\"axis_index\" attr.type=\"int\"/>\n"
      "  <key id=\"lane_index\" for=\"node\" attr.name=\"lane_index\" attr.type=\"int\"/>\n"
      "  <key id=\"trace\" for=\"edge\" attr.name=\"entity\" attr.type=\"string\"/>\n"
      "  <graph id=\"grid\" edgedefault=\"undirected\">\n";
  std::vector<GridNode> ordered = grid.nodes;
  std::sort(ordered.begin(), ordered.end(), [](const auto& a, const auto& b) {
    return std::tie(a.axis, a.lane) < std::tie(b.axis, b.lane);
  });
  for (const auto& n : ordered) {
    out += "    <node id=\"" + xml_escape(node_id(grid, n)) + "\">\n";
    out += "      <data key=\"entity\">" + xml_escape(grid.lane_order[n.lane]) + "</data>\n";
    out += "      <data key=\"document\">" + xml_escape(grid.axis_order[n.axis]) + "</data>\n";
    out += "      <data key=\"axis_index\">" + std::to_string(n.axis) + "</data>\n";
    out += "      <data key=\"lane_index\">" + std::to_string(n.lane) + "</data>\n";
    out += "    </node>\n";
  }
  for (std::size_t i = 0; i < grid.edges.size(); ++i) {
    const auto& e = grid.edges[i];
    const auto& lane = grid.lane_order[e.lane];
    out += "    <edge id=\"e" + std::to_string(i) + "\" source=\"" +
           xml_escape(lane + "@" + grid.axis_order[e.from_axis]) + "\" target=\"" +
           xml_escape(lane + "@" + grid.axis_order[e.to_axis]) + "\">\n";
    out += "      <data key=\"trace\">" + xml_escape(lane) + "</data>\n";
    out += "    </edge>\n";
  }
  out += "  </graph>\n</graphml>\n";
  return out;
}

StyleOptions StyleOptions::from_json(std::string_view text) {
  StyleOptions style;
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::BadConfig, std::string("style JSON: ") + e.what());
  }
  if (!j.is_object()) throw Error(ErrorKind::BadConfig, "style JSON must be an object");

  std::map<std::string, double*> numbers = {
      {"cell_width", &style.cell_width},     {"cell_height", &style.cell_height},
      {"margin", &style.margin},             {"label_width", &style.label_width},
      {"header_height", &style.header_height}, {"node_radius", &style.node_radius},
      {"font_size", &style.font_size},       {"stroke_width", &style.stroke_width},
  };
  std::map<std::string, std::string*> strings = {
      {"node_fill", &style.node_fill},   {"node_stroke", &style.node_stroke},
      {"edge_stroke", &style.edge_stroke}, {"text_color", &style.text_color},
      {"background", &style.background},
  };
  std::map<std::string, bool*> flags = {
      {"node_labels", &style.node_labels},
      {"lanes_as_columns", &style.lanes_as_columns},
  };
  for (const auto& [key, value] : j.items()) {
    if (auto it = numbers.find(key); it != numbers.end()) {
      if (!value.is_number() || value.get<double>() < 0) {
        throw Error(ErrorKind::BadConfig, "style `" + key + "` must be a nonnegative number");
      }
      *it->second = value.get<double>();
    } else if (auto st = strings.find(key); st != strings.end()) {
      if (!value.is_string()) throw Error(ErrorKind::BadConfig, "style `" + key + "` must be a string");
      *st->second = value.get<std::string>();
    } else if (auto fl = flags.find(key); fl != flags.end()) {
      if (!value.is_boolean()) throw Error(ErrorKind::BadConfig, "style `" + key + "` must be a boolean");
      *fl->second = value.get<bool>();
    } else {
      throw Error(ErrorKind::BadConfig, "unknown style key `" + key + "`");
    }
  }
  return style;
}

std::string export_svg(const GridNetwork& grid, const StyleOptions& style) {
  const std::size_t axis_n = grid.axis_order.size();
  const std::size_t lane_n = grid.lane_order.size();

  // Lattice coordinates; `along` runs over axis positions, `across` over lanes.
  const bool flip = style.lanes_as_columns;
  const double along_step = flip ? style.cell_height : style.cell_width;
  const double across_step = flip ? style.cell_width : style.cell_height;
  const double origin_x = style.margin + style.label_width;
  const double origin_y = style.margin + style.header_height;
  auto position = [&](std::size_t lane, std::size_t axis) {
    double along = static_cast<double>(axis) * along_step;
    double across = static_cast<double>(lane) * across_step;
    return flip ? std::make_pair(origin_x + across, origin_y + along)
                : std::make_pair(origin_x + along, origin_y + across);
  };
  const std::size_t cols = flip ? lane_n : axis_n;
  const std::size_t rows = flip ? axis_n : lane_n;
  const double width = origin_x + static_cast<double>(cols) * style.cell_width + style.margin;
  const double height = origin_y + static_cast<double>(rows) * style.cell_height + style.margin;

  std::string out = "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  out += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + num(width) + "\" height=\"" +
         num(height) + "\" viewBox=\"0 0 " + num(width) + " " + num(height) + "\">\n";
  out += "  <rect x=\"0\" y=\"0\" width=\"" + num(width) + "\" height=\"" + num(height) +
         "\" fill=\"" + xml_escape(style.background) + "\"/>\n";
  const std::string text_attrs = " font-family=\"sans-serif\" font-size=\"" + num(style.font_size) +
                                 "\" fill=\"" + xml_escape(style.text_color) + "\"";

  // Axis and lane labels sit above / left of the lattice.
  out += "  <g class=\"labels\">\n";
  for (std::size_t a = 0; a < axis_n; ++a) {
    auto [x, y] = position(0, a);
    if (flip) {
      out += "    <text x=\"" + num(style.margin) + "\" y=\"" + num(y + style.font_size / 3) + "\"" +
             text_attrs + ">" + xml_escape(grid.axis_order[a]) + "</text>\n";
    } else {
      out += "    <text x=\"" + num(x) + "\" y=\"" + num(style.margin + style.font_size) +
             "\" text-anchor=\"middle\"" + text_attrs + ">" + xml_escape(grid.axis_order[a]) +
             "</text>\n";
    }
  }
  for (std::size_t l = 0; l < lane_n; ++l) {
    auto [x, y] = position(l, 0);
    if (flip) {
      out += "    <text x=\"" + num(x) + "\" y=\"" + num(style.margin + style.font_size) +
             "\" text-anchor=\"middle\"" + text_attrs + ">" + xml_escape(grid.lane_order[l]) +
             "</text>\n";
    } else {
      out += "    <text x=\"" + num(style.margin) + "\" y=\"" + num(y + style.font_size / 3) + "\"" +
             text_attrs + ">" + xml_escape(grid.lane_order[l]) + "</text>\n";
    }
  }
  out += "  </g>\n";

  // One polyline per trace with at least one edge.
  out += "  <g class=\"traces\" fill=\"none\" stroke=\"" + xml_escape(style.edge_stroke) +
         "\" stroke-width=\"" + num(style.stroke_width) + "\">\n";
  for (std::size_t l = 0; l < lane_n; ++l) {
    std::string points;
    std::size_t count = 0;
    for (const auto& n : grid.nodes) {
      if (n.lane != l) continue;
      auto [x, y] = position(n.lane, n.axis);
      points += (points.empty() ? "" : " ") + num(x) + "," + num(y);
      ++count;
    }
    if (count < 2) continue;
    out += "    <polyline data-entity=\"" + xml_escape(grid.lane_order[l]) + "\" points=\"" +
           points + "\"/>\n";
  }
  out += "  </g>\n";

  out += "  <g class=\"nodes\" fill=\"" + xml_escape(style.node_fill) + "\" stroke=\"" +
         xml_escape(style.node_stroke) + "\">\n";
  for (const auto& n : grid.nodes) {
    auto [x, y] = position(n.lane, n.axis);
    out += "    <circle cx=\"" + num(x) + "\" cy=\"" + num(y) + "\" r=\"" + num(style.node_radius) +
           "\"><title>" + xml_escape(node_id(grid, n)) + "</title></circle>\n";
    if (style.node_labels) {
      out += "    <text x=\"" + num(x) + "\" y=\"" + num(y + style.font_size / 3) +
             "\" text-anchor=\"middle\" stroke=\"none\"" + text_attrs + ">" +
             xml_escape(grid.lane_order[n.lane]) + "</text>\n";
    }
  }
  out += "  </g>\n</svg>\n";
  return out;
}

}  // namespace chronoclust
