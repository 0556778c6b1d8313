#include <random>

#include "doctest.h"
#include "dpar/certificates.hpp"
#include "dpar/rounding.hpp"
#include "dpar_tools/generators.hpp"

using namespace dpar;

namespace {

RoundingInstance random_instance(std::mt19937_64& rng, std::size_t n, std::size_t m, double eps) {
  RoundingInstance inst;
  inst.n = n;
  inst.eps = eps;
  std::uniform_real_distribution<double> ud(-1.0, 2.0), cd(0.0, 1.5);
  for (std::size_t v = 0; v < n; ++v) inst.util.push_back(ud(rng));
  for (std::size_t i = 0; i < m; ++i) {
    node_id u = rng() % n, v = rng() % n;
    if (u != v) inst.edges.push_back({u, v, cd(rng)});
  }
  return inst;
}

long double lemma_bound(const RoundingInstance& inst) {
  long double u = 0, c = 0;
  for (double x : inst.util) u += x;
  for (const auto& e : inst.edges) c += e.cost;
  return u / 2 - c / 4 - inst.eps * c;
}

}  // namespace

TEST_CASE("local_round keeps positive utilities without costs") {
  RoundingInstance inst;
  inst.n = 2;
  inst.util = {1, 1};
  RoundingResult r = local_round(inst);
  CHECK(r.selected == std::vector<std::uint8_t>{1, 1});
  CHECK(r.objective == doctest::Approx(2.0));
}

TEST_CASE("local_round on a single costly edge") {
  RoundingInstance inst;
  inst.n = 2;
  inst.util = {0, 0};
  inst.edges = {{0, 1, 1.0}};
  inst.eps = 0.1;
  RoundingResult r = local_round(inst);
  CHECK(r.objective >= -0.35);
  CHECK(r.objective >= -0.25);
}

TEST_CASE("local_round meets the lemma bound on small random instances") {
  std::mt19937_64 rng(99);
  for (int t = 0; t < 50; ++t) {
    const std::size_t n = 2 + rng() % 11;
    RoundingInstance inst = random_instance(rng, n, 3 * n, 0.1 + 0.05 * (t % 5));
    RoundingResult r = local_round(inst);
    const long double obj = rounding_objective(inst, r.selected);
    REQUIRE(obj == doctest::Approx(double(r.objective)));
    REQUIRE(obj >= lemma_bound(inst) - 1e-9);
  }
}

TEST_CASE("local_round is locally optimal against single flips in the last class") {
  std::mt19937_64 rng(7);
  for (int t = 0; t < 30; ++t) {
    RoundingInstance inst = random_instance(rng, 10, 20, 0.2);
    RoundingResult r = local_round(inst);
    std::uint32_t last = 0;
    for (auto c : r.color) last = std::max(last, c);
    // nodes of the final class are decided with every neighbour fixed, so flipping one cannot help
    for (node_id v = 0; v < inst.n; ++v) {
      if (r.color[v] != last) continue;
      bool alone = true;  // skip nodes sharing a monochromatic edge, whose neighbours move with them
      for (const auto& e : inst.edges)
        if ((e.u == v || e.v == v) && r.color[e.u] == r.color[e.v]) alone = false;
      if (!alone) continue;
      auto flipped = r.selected;
      flipped[v] ^= 1;
      REQUIRE(rounding_objective(inst, flipped) <= rounding_objective(inst, r.selected) + 1e-9);
    }
  }
}

TEST_CASE("Monte-Carlo mean of a random half matches the analytic value") {
  std::mt19937_64 rng(1234);
  RoundingInstance inst = random_instance(rng, 30, 80, 0.1);
  long double util = 0, cost = 0;
  for (double x : inst.util) util += x;
  for (const auto& e : inst.edges) cost += e.cost;
  const double expect = double(util / 2 - cost / 4);
  const int samples = 20000;
  double mean = 0, m2 = 0;
  std::vector<std::uint8_t> s(inst.n);
  for (int i = 1; i <= samples; ++i) {
    for (auto& x : s) x = rng() & 1;
    const double v = double(rounding_objective(inst, s));
    const double d = v - mean;
    mean += d / i;
    m2 += d * (v - mean);
  }
  const double se = std::sqrt(m2 / (samples - 1) / samples);
  CHECK(std::abs(mean - expect) <= 3 * se);
}

TEST_CASE("max_cut_half small graphs") {
  Graph empty = sort_edges_to_csr(std::vector<Edge>{}, 3);
  CHECK(max_cut_half(empty, 0.1).cut_weight == 0);

  Graph one = sort_edges_to_csr(std::vector<Edge>{{0, 1, 1.0}}, 2);
  CHECK(max_cut_half(one, 0.1).cut_weight == 1.0);

  tools::GraphSpec k4{"complete", 4, 0, 1};
  Graph g = tools::generate_graph(k4);
  CutResult c = max_cut_half(g, 0.1);
  CHECK(c.cut_weight >= 3);
  int brute = 0;
  for (int mask = 0; mask < 16; ++mask) {
    int cut = 0;
    for (node_id u = 0; u < 4; ++u)
      for (node_id v = u + 1; v < 4; ++v) cut += ((mask >> u) & 1) != ((mask >> v) & 1);
    brute = std::max(brute, cut);
  }
  CHECK(brute == 4);
}

TEST_CASE("max_cut_half meets its bound on weighted random graphs") {
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    tools::GraphSpec s{"gnm", 300, 1500, seed};
    s.max_weight = 5;
    Graph g = tools::generate_graph(s);
    for (double eps : {0.25, 0.1, 0.05}) {
      CutResult c = max_cut_half(g, eps);
      REQUIRE(c.cut_weight >= (0.5 - eps) * g.total_weight());
    }
  }
}
