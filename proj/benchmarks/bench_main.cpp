#include <benchmark/benchmark.h>

#include <random>
#include <string>
#include <vector>

#include "chronoclust/clustering.hpp"
#include "chronoclust/gridnet.hpp"
#include "chronoclust/similarity.hpp"

using namespace chronoclust;

namespace {

std::vector<std::string> names(std::size_t n, const char* prefix) {
  std::vector<std::string> out;
  for (std::size_t i = 0; i < n; ++i) out.push_back(prefix + std::to_string(i));
  return out;
}

MentionMatrix random_counts(std::size_t entities, std::size_t documents, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<std::int64_t> u(0, 20);
  std::vector<std::int64_t> c(entities * documents);
  for (auto& x : c) x = u(rng);
  for (std::size_t d = 0; d < documents; ++d) c[d] += 1;  // no zero columns
  return MentionMatrix(names(entities, "e"), names(documents, "d"), std::move(c));
}

void BM_SimilarityMatrix(benchmark::State& state) {
  auto m = random_counts(200, static_cast<std::size_t>(state.range(0)), 1);
  for (auto _ : state) benchmark::DoNotOptimize(similarity_matrix(m));
}
BENCHMARK(BM_SimilarityMatrix)->Arg(10)->Arg(50)->Arg(200);

void BM_Agglomerate(benchmark::State& state) {
  auto d = to_distance(similarity_matrix(random_counts(100, static_cast<std::size_t>(state.range(0)), 2)));
  for (auto _ : state) benchmark::DoNotOptimize(agglomerate(d, Linkage::Average));
}
BENCHMARK(BM_Agglomerate)->Arg(10)->Arg(50)->Arg(200);

void BM_KMeans(benchmark::State& state) {
  auto points = document_points(random_counts(100, static_cast<std::size_t>(state.range(0)), 3));
  KMeansOptions o;
  o.k = 3;
  for (auto _ : state) benchmark::DoNotOptimize(kmeans_detailed(points, o));
}
BENCHMARK(BM_KMeans)->Arg(10)->Arg(50)->Arg(200);

void BM_ExhaustiveOptimum(benchmark::State& state) {
  auto points = document_points(random_counts(20, static_cast<std::size_t>(state.range(0)), 4));
  for (auto _ : state) benchmark::DoNotOptimize(exhaustive_optimum(points, 3));
}
BENCHMARK(BM_ExhaustiveOptimum)->Arg(6)->Arg(8)->Arg(10);

void BM_BuildGrid(benchmark::State& state) {
  auto m = to_presence(random_counts(100, static_cast<std::size_t>(state.range(0)), 5));
  for (auto _ : state) benchmark::DoNotOptimize(export_svg(build_grid(m, m.document_ids(), m.entity_ids())));
}
BENCHMARK(BM_BuildGrid)->Arg(10)->Arg(50);

}  // namespace

BENCHMARK_MAIN();
