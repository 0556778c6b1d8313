#include <algorithm>
#include <random>
#include <set>
#include <sstream>

#include "doctest.h"
#include "dpar/errors.hpp"
#include "dpar/graph.hpp"
#include "dpar/loss.hpp"
#include "dpar/number_theory.hpp"
#include "dpar/primitives.hpp"
#include "dpar/work.hpp"

using namespace dpar;

namespace {

std::set<std::pair<node_id, node_id>> edge_set(const Graph& g) {
  std::set<std::pair<node_id, node_id>> out;
  for (const auto& e : edge_list(g)) out.insert({std::min(e.u, e.v), std::max(e.u, e.v)});
  return out;
}

}  // namespace

TEST_CASE("prefix_sum hand cases") {
  CHECK(prefix_sum(std::vector<std::int64_t>{}).empty());
  CHECK(prefix_sum(std::vector<std::int64_t>{1, 0, 1}) == std::vector<std::int64_t>{1, 1, 2});
}

TEST_CASE("prefix_sum matches a left fold") {
  std::mt19937_64 rng(3);
  std::vector<std::int64_t> xs(1000);
  for (auto& x : xs) x = static_cast<std::int64_t>(rng() % 2001) - 1000;
  const auto ps = prefix_sum(xs);
  std::int64_t acc = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    acc += xs[i];
    REQUIRE(ps[i] == acc);
  }
}

TEST_CASE("prefix_sum overflow is reported") {
  const std::int64_t big = std::numeric_limits<std::int64_t>::max();
  CHECK_THROWS_AS(prefix_sum(std::vector<std::int64_t>{big, 1}), InstanceTooLarge);
}

TEST_CASE("radix_sort_small_keys hand cases") {
  const std::vector<std::uint32_t> sorted{1, 2, 3}, reversed{3, 2, 1};
  const std::vector<int> pay{10, 20, 30};
  auto a = radix_sort_small_keys<int>(sorted, pay, 1 << 10);
  CHECK(a.keys == sorted);
  CHECK(a.payloads == pay);
  auto b = radix_sort_small_keys<int>(reversed, pay, 1 << 10);
  CHECK(b.keys == sorted);
  CHECK(b.payloads == std::vector<int>{30, 20, 10});
}

TEST_CASE("radix_sort_small_keys is a stable sort") {
  std::mt19937_64 rng(5);
  const std::uint64_t N = 1ull << 20;
  std::vector<std::uint32_t> keys(10000);
  std::vector<std::uint32_t> pay(keys.size());
  for (std::size_t i = 0; i < keys.size(); ++i) {
    keys[i] = 1 + static_cast<std::uint32_t>(rng() % 20);
    pay[i] = static_cast<std::uint32_t>(i);
  }
  auto got = radix_sort_small_keys<std::uint32_t>(keys, pay, N);
  std::vector<std::pair<std::uint32_t, std::uint32_t>> ref;
  for (std::size_t i = 0; i < keys.size(); ++i) ref.push_back({keys[i], pay[i]});
  std::stable_sort(ref.begin(), ref.end(), [](auto x, auto y) { return x.first < y.first; });
  for (std::size_t i = 0; i < ref.size(); ++i) {
    REQUIRE(got.keys[i] == ref[i].first);
    REQUIRE(got.payloads[i] == ref[i].second);
  }
}

TEST_CASE("radix_sort_small_keys rejects keys out of range") {
  const std::vector<std::uint32_t> keys{0};
  const std::vector<int> pay{1};
  CHECK_THROWS_AS(radix_sort_small_keys<int>(keys, pay, 16), ContractViolation);
  const std::vector<std::uint32_t> high{5};
  CHECK_THROWS_AS(radix_sort_small_keys<int>(high, pay, 16), ContractViolation);
}

TEST_CASE("sort_edges_to_csr single edge") {
  const std::vector<Edge> e{{0, 1, 1.0}};
  Graph g = sort_edges_to_csr(e, 2);
  CHECK(g.offsets() == std::vector<edge_index>{0, 1, 2});
  CHECK(g.neighbor_array() == std::vector<node_id>{1, 0});
}

TEST_CASE("sort_edges_to_csr is permutation invariant") {
  std::vector<Edge> tri{{0, 1, 1.0}, {1, 2, 1.0}, {0, 2, 1.0}};
  Graph a = sort_edges_to_csr(tri, 3);
  std::vector<Edge> perm{{2, 1, 1.0}, {2, 0, 1.0}, {1, 0, 1.0}};
  Graph b = sort_edges_to_csr(perm, 3);
  CHECK(a.offsets() == b.offsets());
  CHECK(a.neighbor_array() == b.neighbor_array());
}

TEST_CASE("sort_edges_to_csr round-trips a random edge set") {
  std::mt19937_64 rng(11);
  const node_id n = 5000;
  std::vector<Edge> edges;
  std::set<std::pair<node_id, node_id>> want;
  while (edges.size() < 100000) {
    node_id u = rng() % n, v = rng() % n;
    if (u == v) continue;
    edges.push_back({u, v, 1.0});
    want.insert({std::min(u, v), std::max(u, v)});
  }
  Graph g = sort_edges_to_csr(edges, n);
  g.validate();
  CHECK(edge_set(g) == want);
  CHECK(g.num_edges() == want.size());
}

TEST_CASE("sort_edges_to_csr input errors") {
  const std::vector<Edge> loop{{1, 1, 1.0}};
  const std::vector<Edge> range{{0, 7, 1.0}};
  CHECK_THROWS_AS(sort_edges_to_csr(range, 3), MalformedInput);
  CHECK_THROWS_AS(sort_edges_to_csr(loop, 2), MalformedInput);
  std::istringstream in("0 0\n");
  CHECK_THROWS_AS(read_edge_list(in), MalformedInput);
}

TEST_CASE("compact_subgraph identity and path cases") {
  const std::vector<Edge> path{{0, 1, 1.0}, {1, 2, 1.0}};
  Graph g = sort_edges_to_csr(path, 3);
  std::vector<std::uint8_t> all(3, 1);
  Subgraph id = compact_subgraph(g, all);
  CHECK(id.graph.offsets() == g.offsets());
  CHECK(id.graph.neighbor_array() == g.neighbor_array());
  CHECK(id.new_to_old == std::vector<node_id>{0, 1, 2});

  std::vector<std::uint8_t> keep{1, 1, 0};
  Subgraph s = compact_subgraph(g, keep);
  CHECK(s.graph.num_nodes() == 2);
  CHECK(s.graph.num_edges() == 1);
  CHECK(s.old_to_new[0] == 0);
  CHECK(s.old_to_new[1] == 1);
  CHECK(s.old_to_new[2] == no_node);
}

TEST_CASE("compact_subgraph matches a filtered edge set") {
  std::mt19937_64 rng(17);
  const node_id n = 300;
  std::vector<Edge> edges;
  for (int i = 0; i < 2000; ++i) {
    node_id u = rng() % n, v = rng() % n;
    if (u != v) edges.push_back({u, v, 1.0});
  }
  Graph g = sort_edges_to_csr(edges, n);
  std::vector<std::uint8_t> keep(n);
  for (auto& k : keep) k = rng() % 3 != 0;
  // symmetric slot mask: drop edges whose endpoint sum is divisible by 5
  std::vector<std::uint8_t> slot(g.num_slots());
  for (node_id u = 0; u < n; ++u)
    for (edge_index e = g.begin(u); e < g.end(u); ++e) slot[e] = (u + g.neighbor_at(e)) % 5 != 0;
  Subgraph s = compact_subgraph(g, keep, slot);
  s.graph.validate();
  std::set<std::pair<node_id, node_id>> want;
  for (const auto& [u, v] : edge_set(g))
    if (keep[u] && keep[v] && (u + v) % 5 != 0) want.insert({s.old_to_new[u], s.old_to_new[v]});
  CHECK(edge_set(s.graph) == want);
  for (node_id x = 0; x < s.new_to_old.size(); ++x) CHECK(s.old_to_new[s.new_to_old[x]] == x);
}

TEST_CASE("compact_subgraph rejects inconsistent masks") {
  const std::vector<Edge> path{{0, 1, 1.0}};
  Graph g = sort_edges_to_csr(path, 2);
  std::vector<std::uint8_t> keep{1, 1};
  std::vector<std::uint8_t> asym{1, 0};
  CHECK_THROWS(compact_subgraph(g, keep, asym));
}

TEST_CASE("precompute_tables primes and roots") {
  auto t = precompute_tables(10);
  CHECK(t->primes() == std::vector<std::uint32_t>{2, 3, 5, 7});
  const RootTable& r7 = t->roots(7);
  std::set<std::uint32_t> residues;
  for (std::uint32_t a = 0; a < 7; ++a)
    if (r7.sqrt[a] >= 0) residues.insert(a);
  CHECK(residues == std::set<std::uint32_t>{0, 1, 2, 4});
  CHECK(r7.sqrt[2] == 3);
  CHECK(precompute_tables(10000)->primes().size() == 1229);
}

TEST_CASE("stored roots square back to their residue") {
  auto t = precompute_tables(2000);
  for (std::uint32_t p : t->primes()) {
    const RootTable& r = t->roots(p);
    for (std::uint32_t a = 0; a < p; ++a)
      if (r.sqrt[a] >= 0) REQUIRE(static_cast<std::uint64_t>(r.sqrt[a]) * r.sqrt[a] % p == a);
  }
}

TEST_CASE("prime_in_range picks the smallest prime") {
  auto t = precompute_tables(100);
  CHECK(prime_in_range(*t, 2) == 2);
  CHECK(prime_in_range(*t, 10) == 11);
  CHECK(prime_in_range(*t, 24) == 29);
  CHECK_THROWS_AS(prime_in_range(*t, 60), ParameterError);
}

TEST_CASE("iterative_loss_bound hand cases") {
  const std::vector<double> none{0, 0, 0};
  LossBounds z = iterative_loss_bound(none, 2.0);
  CHECK(z.f == doctest::Approx(2.0));
  CHECK(z.g == doctest::Approx(2.0));
  CHECK(z.f_prime == doctest::Approx(2.0));
  CHECK(z.g_prime == doctest::Approx(2.0));
  const std::vector<double> one{0.1};
  LossBounds b = iterative_loss_bound(one, 1.0);
  CHECK(b.f == doctest::Approx(1.2));
  CHECK(b.g == doctest::Approx(1.4));
  CHECK(b.f_prime == doctest::Approx(0.8));
  CHECK(b.g_prime == doctest::Approx(0.6));
  const std::vector<double> heavy{0.3, 0.3};
  CHECK_THROWS_AS(iterative_loss_bound(heavy, 1.0), ParameterError);
}

TEST_CASE("work counter totals equal the phase sum") {
  WorkCounter wc;
  {
    WorkScope s(wc);
    charge("a", 3);
    charge("b", 4);
    charge("a", 1);
  }
  charge("a", 100);  // no active scope
  CHECK(wc.total() == 8);
  CHECK(wc.phase("a") == 4);
  CHECK(wc.phase("b") == 4);
}

TEST_CASE("edge-list and CSR files round-trip") {
  const std::vector<Edge> e{{0, 1, 2.5}, {1, 2, 1.0}, {0, 3, 4.0}};
  Graph g = sort_edges_to_csr(e, 4, true);
  std::stringstream ss;
  write_edge_list(ss, g);
  Graph h = read_edge_list(ss);
  CHECK(h.neighbor_array() == g.neighbor_array());
  CHECK(h.weight_array() == g.weight_array());
  const std::string path = "graphcore_roundtrip.bin";
  write_csr_binary_file(path, g);
  Graph c = read_csr_binary_file(path);
  CHECK(c.offsets() == g.offsets());
  CHECK(c.weight_array() == g.weight_array());
  std::remove(path.c_str());
}

TEST_CASE("malformed edge lists carry a line number") {
  std::istringstream in("0 1\nfoo bar\n");
  try {
    read_edge_list(in, "x.txt");
    FAIL("expected MalformedInput");
  } catch (const MalformedInput& e) {
    CHECK(std::string(e.what()).find("x.txt:2") != std::string::npos);
  }
  std::istringstream neg("0 1 2\n1 2 -1\n");
  try {
    read_edge_list(neg, "w.txt");
    FAIL("expected MalformedInput");
  } catch (const MalformedInput& e) {
    CHECK(std::string(e.what()).find("w.txt:2") != std::string::npos);
  }
  std::vector<Edge> bad{{0, 1, -0.5}};
  CHECK_THROWS_AS(sort_edges_to_csr(bad, 2, true).validate(), MalformedInput);
}
