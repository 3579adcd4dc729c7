#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <map>
#include <memory>

#include "chronoclust/clustering.hpp"
#include "chronoclust/error.hpp"

namespace chronoclust {

namespace {

std::string format_length(double value) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), value);
  return std::string(buf, ptr);
}

bool needs_quotes(std::string_view name) {
  return name.find_first_of(" ()[]':;,\t\n") != std::string_view::npos;
}

std::string quote_label(std::string_view name) {
  if (!needs_quotes(name)) return std::string(name);
  std::string out = "'";
  for (char c : name) {
    if (c == '\'') out += '\'';
    out += c;
  }
  return out + "'";
}

void emit(const Dendrogram& d, std::size_t node, std::string& out) {
  if (d.is_leaf(node)) {
    out += quote_label(d.leaves()[node]);
    return;
  }
  const auto& m = d.merges()[node - d.leaf_count()];
  out += '(';
  emit(d, m.left, out);
  out += ':' + format_length(m.height - d.height(m.left));
  out += ',';
  emit(d, m.right, out);
  out += ':' + format_length(m.height - d.height(m.right));
  out += ')';
}

struct ParsedNode {
  std::string label;
  double length = 0.0;
  std::vector<std::unique_ptr<ParsedNode>> children;
};

class NewickParser {
 public:
  explicit NewickParser(std::string_view text) : text_(text) {}

  std::unique_ptr<ParsedNode> parse() {
    auto root = node();
    skip_space();
    expect(';');
    skip_space();
    if (pos_ != text_.size()) fail("trailing text after ';'");
    return root;
  }

 private:
  [[noreturn]] void fail(const std::string& what) const {
    throw Error(ErrorKind::MalformedNewick, what + " at offset " + std::to_string(pos_));
  }

  void skip_space() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  void expect(char c) {
    if (pos_ >= text_.size() || text_[pos_] != c) fail(std::string("expected '") + c + "'");
    ++pos_;
  }

  std::string label() {
    skip_space();
    std::string out;
    if (pos_ < text_.size() && text_[pos_] == '\'') {
      ++pos_;
      while (true) {
        if (pos_ >= text_.size()) fail("unterminated quoted label");
        char c = text_[pos_++];
        if (c == '\'') {
          if (pos_ < text_.size() && text_[pos_] == '\'') {
            out += '\'';
            ++pos_;
            continue;
          }
          break;
        }
        out += c;
      }
      return out;
    }
    while (pos_ < text_.size() && std::string_view("(),:;").find(text_[pos_]) == std::string_view::npos &&
           !std::isspace(static_cast<unsigned char>(text_[pos_]))) {
      out += text_[pos_++];
    }
    return out;
  }

  double length() {
    skip_space();
    std::size_t end = pos_;
    while (end < text_.size() && std::string_view("(),:;").find(text_[end]) == std::string_view::npos &&
           !std::isspace(static_cast<unsigned char>(text_[end]))) {
      ++end;
    }
    double value = 0.0;
    auto [ptr, ec] = std::from_chars(text_.data() + pos_, text_.data() + end, value);
    if (ec != std::errc() || ptr != text_.data() + end) fail("bad branch length");
    if (!(value >= 0.0)) fail("negative branch length");
    pos_ = end;
    return value;
  }

  std::unique_ptr<ParsedNode> node() {
    auto n = std::make_unique<ParsedNode>();
    skip_space();
    if (pos_ < text_.size() && text_[pos_] == '(') {
      ++pos_;
      while (true) {
        n->children.push_back(node());
        skip_space();
        if (pos_ < text_.size() && text_[pos_] == ',') {
          ++pos_;
          continue;
        }
        expect(')');
        break;
      }
      if (n->children.size() != 2) fail("only binary trees are supported");
    }
    n->label = label();
    if (n->children.empty() && n->label.empty()) fail("leaf without a label");
    skip_space();
    if (pos_ < text_.size() && text_[pos_] == ':') {
      ++pos_;
      n->length = length();
    }
    return n;
  }

  std::string_view text_;
  std::size_t pos_ = 0;
};

struct Internal {
  double height;
  std::size_t postorder;
  const ParsedNode* node;
};

// Returns the node height: leaf 0, internal max(child height + child length).
double collect(const ParsedNode& n, std::vector<std::string>& leaves,
               std::vector<Internal>& internals, std::map<const ParsedNode*, std::size_t>& ids) {
  if (n.children.empty()) {
    ids.emplace(&n, leaves.size());
    leaves.push_back(n.label);
    return 0.0;
  }
  double h = 0.0;
  for (const auto& c : n.children) {
    h = std::max(h, collect(*c, leaves, internals, ids) + c->length);
  }
  internals.push_back({h, internals.size(), &n});
  return h;
}

}  // namespace

std::string newick(const Dendrogram& dendrogram) {
  std::string out;
  emit(dendrogram, dendrogram.root(), out);
  return out + ";";
}

Dendrogram parse_newick(std::string_view text) {
  auto root = NewickParser(text).parse();
  std::vector<std::string> leaves;
  std::vector<Internal> internals;
  std::map<const ParsedNode*, std::size_t> ids;
  collect(*root, leaves, internals, ids);

  // Post-order already places children before parents; a stable sort by
  // height keeps that for equal heights.
  std::stable_sort(internals.begin(), internals.end(),
                   [](const Internal& a, const Internal& b) { return a.height < b.height; });

  const std::size_t n = leaves.size();
  auto node_id = [&](const ParsedNode* p) { return ids.at(p); };
  std::vector<std::size_t> sizes(2 * n - 1, 1);
  std::vector<std::size_t> min_leaf(2 * n - 1);
  for (std::size_t i = 0; i < n; ++i) min_leaf[i] = i;
  std::vector<Merge> merges;
  for (std::size_t i = 0; i < internals.size(); ++i) {
    auto a = node_id(internals[i].node->children[0].get());
    auto b = node_id(internals[i].node->children[1].get());
    if (min_leaf[b] < min_leaf[a]) std::swap(a, b);
    sizes[n + i] = sizes[a] + sizes[b];
    min_leaf[n + i] = min_leaf[a];
    merges.push_back(Merge{a, b, internals[i].height, sizes[n + i]});
    ids.emplace(internals[i].node, n + i);
  }
  return Dendrogram(std::move(leaves), std::move(merges));
}

}  // namespace chronoclust
