#include "chronoclust/clustering.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>

#include "chronoclust/error.hpp"

namespace chronoclust {

std::string_view to_string(Linkage linkage) noexcept {
  switch (linkage) {
    case Linkage::Single: return "single";
    case Linkage::Complete: return "complete";
    case Linkage::Average: return "average";
  }
  return "average";
}

std::optional<Linkage> parse_linkage(std::string_view text) noexcept {
  if (text == "single") return Linkage::Single;
  if (text == "complete") return Linkage::Complete;
  if (text == "average") return Linkage::Average;
  return std::nullopt;
}

std::string_view to_string(ClusterOrigin origin) noexcept {
  switch (origin) {
    case ClusterOrigin::Cut: return "cut";
    case ClusterOrigin::KMeans: return "kmeans";
    case ClusterOrigin::Oracle: return "oracle";
  }
  return "cut";
}

std::string_view to_string(PointMetric metric) noexcept {
  return metric == PointMetric::Presence ? "presence" : "counts";
}

std::optional<PointMetric> parse_point_metric(std::string_view text) noexcept {
  if (text == "counts") return PointMetric::Counts;
  if (text == "presence") return PointMetric::Presence;
  return std::nullopt;
}

std::string_view to_string(Normalization normalization) noexcept {
  switch (normalization) {
    case Normalization::None: return "none";
    case Normalization::L1: return "l1";
    case Normalization::L2: return "l2";
  }
  return "none";
}

std::optional<Normalization> parse_normalization(std::string_view text) noexcept {
  if (text == "none") return Normalization::None;
  if (text == "l1") return Normalization::L1;
  if (text == "l2") return Normalization::L2;
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// Dendrogram

Dendrogram::Dendrogram(std::vector<std::string> leaves, std::vector<Merge> merges)
    : leaves_(std::move(leaves)), merges_(std::move(merges)) {
  const std::size_t n = leaves_.size();
  if (n == 0) throw Error(ErrorKind::TooFewDocuments, "dendrogram without leaves");
  if (merges_.size() != n - 1) {
    throw Error(ErrorKind::MalformedNewick, "dendrogram with " + std::to_string(n) +
                                                " leaves needs " + std::to_string(n - 1) +
                                                " merges, got " + std::to_string(merges_.size()));
  }
  std::vector<bool> used(2 * n - 1, false);
  std::vector<std::size_t> sizes(2 * n - 1, 1);
  double last = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < merges_.size(); ++i) {
    const auto& m = merges_[i];
    for (auto child : {m.left, m.right}) {
      if (child >= n + i || used[child]) {
        throw Error(ErrorKind::MalformedNewick,
                    "merge " + std::to_string(i) + " reuses or forward-references node " +
                        std::to_string(child));
      }
      used[child] = true;
    }
    if (m.left == m.right) throw Error(ErrorKind::MalformedNewick, "merge of a node with itself");
    if (m.height < last) {
      throw Error(ErrorKind::MalformedNewick,
                  "merge heights must be nondecreasing (merge " + std::to_string(i) + ")");
    }
    last = m.height;
    sizes[n + i] = sizes[m.left] + sizes[m.right];
    if (m.size != sizes[n + i]) {
      throw Error(ErrorKind::MalformedNewick, "merge " + std::to_string(i) + " has wrong size");
    }
  }
}

std::size_t Dendrogram::root() const noexcept {
  return leaves_.empty() ? 0 : 2 * leaves_.size() - 2;
}

double Dendrogram::height(std::size_t node) const {
  return is_leaf(node) ? 0.0 : merges_.at(node - leaves_.size()).height;
}

std::vector<std::size_t> Dendrogram::members(std::size_t node) const {
  std::vector<std::size_t> out;
  std::vector<std::size_t> stack{node};
  while (!stack.empty()) {
    auto top = stack.back();
    stack.pop_back();
    if (is_leaf(top)) {
      out.push_back(top);
      continue;
    }
    const auto& m = merges_.at(top - leaves_.size());
    stack.push_back(m.right);
    stack.push_back(m.left);
  }
  return out;
}

std::vector<std::size_t> Dendrogram::leaf_order() const {
  if (leaves_.empty()) return {};
  return members(root());
}

std::map<std::set<std::string>, double> clades(const Dendrogram& dendrogram) {
  std::map<std::set<std::string>, double> out;
  const std::size_t n = dendrogram.leaf_count();
  for (std::size_t i = 0; i < dendrogram.merges().size(); ++i) {
    std::set<std::string> ids;
    for (auto leaf : dendrogram.members(n + i)) ids.insert(dendrogram.leaves()[leaf]);
    out.emplace(std::move(ids), dendrogram.merges()[i].height);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Agglomeration (Lance-Williams updates on a working distance matrix)

Dendrogram agglomerate(const DistanceMatrix& distances, Linkage linkage) {
  const std::size_t n = distances.size();
  if (n < 2) {
    throw Error(ErrorKind::TooFewDocuments,
                "agglomeration needs at least 2 documents, got " + std::to_string(n));
  }

  std::vector<double> work(distances.values());
  auto d = [&](std::size_t i, std::size_t j) -> double& { return work[i * n + j]; };

  struct Slot {
    std::size_t node;
    std::size_t size;
    std::size_t min_leaf;
  };
  std::vector<Slot> slots(n);
  for (std::size_t i = 0; i < n; ++i) slots[i] = {i, 1, i};
  std::vector<bool> active(n, true);

  std::vector<Merge> merges;
  merges.reserve(n - 1);
  double floor = 0.0;
  for (std::size_t step = 0; step + 1 < n; ++step) {
    std::size_t best_a = n;
    std::size_t best_b = n;
    double best = std::numeric_limits<double>::infinity();
    std::pair<std::size_t, std::size_t> best_key{n, n};
    for (std::size_t a = 0; a < n; ++a) {
      if (!active[a]) continue;
      for (std::size_t b = a + 1; b < n; ++b) {
        if (!active[b]) continue;
        double v = d(a, b);
        std::pair<std::size_t, std::size_t> key = std::minmax(slots[a].min_leaf, slots[b].min_leaf);
        if (best_a == n || v < best || (v == best && key < best_key)) {
          best = v;
          best_a = a;
          best_b = b;
          best_key = key;
        }
      }
    }
    if (slots[best_b].min_leaf < slots[best_a].min_leaf) std::swap(best_a, best_b);
    const auto& left = slots[best_a];
    const auto& right = slots[best_b];

    // Guards against a last-ulp inversion from the averaging update.
    floor = std::max(floor, best);
    merges.push_back(Merge{left.node, right.node, floor, left.size + right.size});

    const double na = static_cast<double>(left.size);
    const double nb = static_cast<double>(right.size);
    for (std::size_t k = 0; k < n; ++k) {
      if (!active[k] || k == best_a || k == best_b) continue;
      double da = d(best_a, k);
      double db = d(best_b, k);
      double merged = 0.0;
      switch (linkage) {
        case Linkage::Single: merged = std::min(da, db); break;
        case Linkage::Complete: merged = std::max(da, db); break;
        case Linkage::Average: merged = (na * da + nb * db) / (na + nb); break;
      }
      d(best_a, k) = merged;
      d(k, best_a) = merged;
    }
    slots[best_a] = Slot{n + step, left.size + right.size, left.min_leaf};
    active[best_b] = false;
  }
  return Dendrogram(distances.ids(), std::move(merges));
}

// ---------------------------------------------------------------------------
// Flat clusterings

std::optional<std::size_t> FlatClustering::cluster_of(std::string_view document_id) const noexcept {
  for (std::size_t c = 0; c < clusters.size(); ++c) {
    if (std::find(clusters[c].begin(), clusters[c].end(), document_id) != clusters[c].end()) {
      return c;
    }
  }
  return std::nullopt;
}

std::size_t FlatClustering::document_count() const noexcept {
  std::size_t total = 0;
  for (const auto& c : clusters) total += c.size();
  return total;
}

FlatClustering cut(const Dendrogram& dendrogram, std::size_t k) {
  const std::size_t n = dendrogram.leaf_count();
  if (k < 1 || k > n) {
    throw Error(ErrorKind::BadK, "k must be in [1, " + std::to_string(n) + "], got " +
                                     std::to_string(k));
  }
  // Union-find over leaves, applying the first n-k merges.
  std::vector<std::size_t> parent(n);
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](std::size_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  std::vector<std::size_t> representative(2 * n - 1);
  std::iota(representative.begin(), representative.begin() + n, 0);
  for (std::size_t i = 0; i + k < n; ++i) {
    const auto& m = dendrogram.merges()[i];
    auto a = find(representative[m.left]);
    auto b = find(representative[m.right]);
    parent[b] = a;
    representative[n + i] = a;
  }

  FlatClustering flat;
  flat.origin = ClusterOrigin::Cut;
  std::map<std::size_t, std::size_t> position;
  for (auto leaf : dendrogram.leaf_order()) {
    auto root = find(leaf);
    auto [it, inserted] = position.emplace(root, flat.clusters.size());
    if (inserted) flat.clusters.emplace_back();
    flat.clusters[it->second].push_back(dendrogram.leaves()[leaf]);
  }
  return flat;
}

std::size_t removal_distance(const FlatClustering& flat, std::string_view a, std::string_view b) {
  auto ca = flat.cluster_of(a);
  if (!ca) throw Error(ErrorKind::UnknownDocument, "`" + std::string(a) + "` is not clustered");
  auto cb = flat.cluster_of(b);
  if (!cb) throw Error(ErrorKind::UnknownDocument, "`" + std::string(b) + "` is not clustered");
  return *ca > *cb ? *ca - *cb : *cb - *ca;
}

// ---------------------------------------------------------------------------
// Points and WCSS

PointSet document_points(const MentionMatrix& matrix, PointMetric metric,
                         Normalization normalization) {
  PointSet points;
  points.ids = matrix.document_ids();
  points.coords.resize(matrix.document_count());
  for (std::size_t d = 0; d < matrix.document_count(); ++d) {
    auto& p = points.coords[d];
    p.resize(matrix.entity_count());
    for (std::size_t e = 0; e < matrix.entity_count(); ++e) {
      auto c = matrix.at(e, d);
      p[e] = metric == PointMetric::Presence ? (c >= 1 ? 1.0 : 0.0) : static_cast<double>(c);
    }
    double scale = 0.0;
    if (normalization == Normalization::L1) {
      for (double x : p) scale += x;
    } else if (normalization == Normalization::L2) {
      for (double x : p) scale += x * x;
      scale = std::sqrt(scale);
    }
    if (scale > 0.0) {
      for (double& x : p) x /= scale;
    }
  }
  return points;
}

namespace {

double squared_distance(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    double diff = a[i] - b[i];
    s += diff * diff;
  }
  return s;
}

// WCSS of a labeling; labels[i] in [0, k). Empty labels contribute 0.
double labeled_wcss(const PointSet& points, const std::vector<std::size_t>& labels, std::size_t k) {
  const std::size_t dim = points.size() ? points.coords[0].size() : 0;
  std::vector<std::vector<double>> sums(k, std::vector<double>(dim, 0.0));
  std::vector<std::size_t> counts(k, 0);
  for (std::size_t i = 0; i < points.size(); ++i) {
    ++counts[labels[i]];
    for (std::size_t j = 0; j < dim; ++j) sums[labels[i]][j] += points.coords[i][j];
  }
  for (std::size_t c = 0; c < k; ++c) {
    if (counts[c] == 0) continue;
    for (auto& x : sums[c]) x /= static_cast<double>(counts[c]);
  }
  double total = 0.0;
  for (std::size_t i = 0; i < points.size(); ++i) {
    total += squared_distance(points.coords[i], sums[labels[i]]);
  }
  return total;
}

std::vector<std::size_t> labels_for(const PointSet& points, const FlatClustering& flat) {
  std::vector<std::size_t> labels(points.size(), flat.clusters.size());
  std::size_t seen = 0;
  for (std::size_t c = 0; c < flat.clusters.size(); ++c) {
    for (const auto& id : flat.clusters[c]) {
      auto it = std::find(points.ids.begin(), points.ids.end(), id);
      if (it == points.ids.end()) {
        throw Error(ErrorKind::PartitionMismatch, "`" + id + "` is not a document of the matrix");
      }
      auto i = static_cast<std::size_t>(it - points.ids.begin());
      if (labels[i] != flat.clusters.size()) {
        throw Error(ErrorKind::PartitionMismatch, "`" + id + "` appears in two clusters");
      }
      labels[i] = c;
      ++seen;
    }
  }
  if (seen != points.size()) {
    throw Error(ErrorKind::PartitionMismatch,
                "clusters cover " + std::to_string(seen) + " of " +
                    std::to_string(points.size()) + " documents");
  }
  return labels;
}

FlatClustering from_labels(const PointSet& points, const std::vector<std::size_t>& labels,
                           std::size_t k, ClusterOrigin origin) {
  FlatClustering flat;
  flat.origin = origin;
  flat.clusters.resize(k);
  for (std::size_t i = 0; i < points.size(); ++i) flat.clusters[labels[i]].push_back(points.ids[i]);
  flat.clusters.erase(std::remove_if(flat.clusters.begin(), flat.clusters.end(),
                                     [](const auto& c) { return c.empty(); }),
                      flat.clusters.end());
  return flat;
}

void check_k(std::size_t k, std::size_t n) {
  if (k < 1 || k > n) {
    throw Error(ErrorKind::BadK, "k must be in [1, " + std::to_string(n) + "], got " +
                                     std::to_string(k));
  }
}

}  // namespace

double wcss(const PointSet& points, const FlatClustering& flat) {
  auto labels = labels_for(points, flat);
  return labeled_wcss(points, labels, flat.clusters.size());
}

double wcss(const MentionMatrix& matrix, const FlatClustering& flat) {
  return wcss(document_points(matrix), flat);
}

// ---------------------------------------------------------------------------
// k-means

namespace {

struct LloydRun {
  std::vector<std::size_t> labels;
  KMeansRestart info;
};

// `order` is a permutation of point indices sorted by coordinates; every
// tie in the procedure is broken by position in it, so relabeling the
// documents relabels the result and nothing else.
LloydRun lloyd(const PointSet& points, const std::vector<std::size_t>& order,
               const KMeansOptions& options, std::uint64_t seed) {
  const std::size_t n = points.size();
  const std::size_t k = options.k;
  LloydRun run;
  run.info.seed = seed;

  std::mt19937_64 rng(seed);
  std::size_t start = order[rng() % n];
  run.info.start_document = points.ids[start];

  // Farthest-first traversal.
  std::vector<std::vector<double>> centroids{points.coords[start]};
  std::vector<bool> chosen(n, false);
  chosen[start] = true;
  std::vector<double> nearest(n);
  for (std::size_t i = 0; i < n; ++i) nearest[i] = squared_distance(points.coords[i], centroids[0]);
  while (centroids.size() < k) {
    std::size_t pick = n;
    for (auto i : order) {
      if (chosen[i]) continue;
      if (pick == n || nearest[i] > nearest[pick]) pick = i;
    }
    chosen[pick] = true;
    centroids.push_back(points.coords[pick]);
    for (std::size_t i = 0; i < n; ++i) {
      nearest[i] = std::min(nearest[i], squared_distance(points.coords[i], centroids.back()));
    }
  }

  auto assign = [&]() {
    std::vector<std::size_t> labels(n);
    for (std::size_t i = 0; i < n; ++i) {
      std::size_t best = 0;
      double best_d = squared_distance(points.coords[i], centroids[0]);
      for (std::size_t c = 1; c < k; ++c) {
        double dc = squared_distance(points.coords[i], centroids[c]);
        if (dc < best_d) {
          best_d = dc;
          best = c;
        }
      }
      labels[i] = best;
    }
    return labels;
  };

  // Moves the point farthest from its centroid, taken from a cluster with
  // at least two members, into each empty cluster.
  auto repair = [&](std::vector<std::size_t>& labels) {
    std::size_t attempts = 0;
    while (true) {
      std::vector<std::size_t> sizes(k, 0);
      for (auto l : labels) ++sizes[l];
      auto empty = std::find(sizes.begin(), sizes.end(), 0u);
      if (empty == sizes.end()) return;
      if (++attempts > k) {
        throw Error(ErrorKind::EmptyClusterUnrecoverable,
                    "empty cluster persisted after " + std::to_string(k) + " repairs");
      }
      std::size_t donor = n;
      double far = -1.0;
      for (auto i : order) {
        if (sizes[labels[i]] < 2) continue;
        double di = squared_distance(points.coords[i], centroids[labels[i]]);
        if (di > far) {
          far = di;
          donor = i;
        }
      }
      if (donor == n) {
        throw Error(ErrorKind::EmptyClusterUnrecoverable, "no cluster can donate a point");
      }
      auto target = static_cast<std::size_t>(empty - sizes.begin());
      labels[donor] = target;
      centroids[target] = points.coords[donor];
    }
  };

  auto update_centroids = [&](const std::vector<std::size_t>& labels) {
    const std::size_t dim = points.coords[0].size();
    std::vector<std::vector<double>> sums(k, std::vector<double>(dim, 0.0));
    std::vector<std::size_t> counts(k, 0);
    for (std::size_t i = 0; i < n; ++i) {
      ++counts[labels[i]];
      for (std::size_t j = 0; j < dim; ++j) sums[labels[i]][j] += points.coords[i][j];
    }
    for (std::size_t c = 0; c < k; ++c) {
      if (counts[c] == 0) continue;
      for (auto& x : sums[c]) x /= static_cast<double>(counts[c]);
      centroids[c] = std::move(sums[c]);
    }
  };

  run.labels = assign();
  repair(run.labels);
  run.info.wcss_trace.push_back(labeled_wcss(points, run.labels, k));
  for (std::size_t iter = 0; iter < options.max_iters; ++iter) {
    update_centroids(run.labels);
    auto next = assign();
    repair(next);
    ++run.info.iterations;
    bool stable = next == run.labels;
    run.labels = std::move(next);
    run.info.wcss_trace.push_back(labeled_wcss(points, run.labels, k));
    if (stable) {
      run.info.converged = true;
      break;
    }
  }
  run.info.wcss = run.info.wcss_trace.back();
  return run;
}

}  // namespace

KMeansResult kmeans_detailed(const PointSet& points, const KMeansOptions& options) {
  const std::size_t n = points.size();
  check_k(options.k, n);
  if (options.restarts < 1) throw Error(ErrorKind::BadK, "restarts must be at least 1");

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](auto a, auto b) {
    return points.coords[a] < points.coords[b];
  });

  KMeansResult result;
  std::vector<std::size_t> best_labels;
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t r = 0; r < options.restarts; ++r) {
    auto run = lloyd(points, order, options, options.seed + r);
    if (run.info.wcss < best) {
      best = run.info.wcss;
      best_labels = run.labels;
      result.best_restart = r;
    }
    result.restarts.push_back(std::move(run.info));
  }
  result.clustering = from_labels(points, best_labels, options.k, ClusterOrigin::KMeans);
  result.clustering.wcss = best;
  return result;
}

FlatClustering kmeans(const MentionMatrix& matrix, const KMeansOptions& options) {
  return kmeans_detailed(document_points(matrix, options.metric, options.normalization), options)
      .clustering;
}

// ---------------------------------------------------------------------------
// Exhaustive oracle

FlatClustering exhaustive_optimum(const PointSet& points, std::size_t k) {
  const std::size_t n = points.size();
  if (n > kExhaustiveLimit) {
    throw Error(ErrorKind::TooLarge, std::to_string(n) + " documents exceed the limit of " +
                                         std::to_string(kExhaustiveLimit));
  }
  check_k(k, n);

  // Restricted growth strings in lexicographic order: rgs[0] = 0 and
  // rgs[i] <= max(rgs[0..i)) + 1, capped at k - 1.
  std::vector<std::size_t> rgs(n, 0);
  std::vector<std::size_t> prefix_max(n, 0);
  std::vector<std::size_t> best_rgs = rgs;
  double best = labeled_wcss(points, rgs, k);
  while (n > 1) {
    std::size_t i = n - 1;
    while (i >= 1 && rgs[i] >= std::min(prefix_max[i - 1] + 1, k - 1)) --i;
    if (i == 0) break;
    ++rgs[i];
    prefix_max[i] = std::max(prefix_max[i - 1], rgs[i]);
    for (std::size_t j = i + 1; j < n; ++j) {
      rgs[j] = 0;
      prefix_max[j] = prefix_max[j - 1];
    }
    double w = labeled_wcss(points, rgs, k);
    if (w < best) {
      best = w;
      best_rgs = rgs;
    }
  }
  auto flat = from_labels(points, best_rgs, k, ClusterOrigin::Oracle);
  flat.wcss = best;
  return flat;
}

FlatClustering exhaustive_optimum(const MentionMatrix& matrix, std::size_t k) {
  return exhaustive_optimum(document_points(matrix), k);
}

}  // namespace chronoclust
