#include <cmath>
#include <random>
#include <sstream>

#include "doctest.h"
#include "dpar/certificates.hpp"
#include "dpar/errors.hpp"
#include "dpar/hitting.hpp"
#include "dpar_tools/generators.hpp"

using namespace dpar;

namespace {

constexpr std::uint64_t kN = 1ull << 16;

// num_u nodes each adjacent to `deg` consecutive V nodes (wrapping), all V at `level`.
BipartiteInstance regular(std::size_t num_u, std::size_t num_v, std::size_t deg, std::int32_t level,
                          std::uint64_t N = kN) {
  std::vector<BipartiteEdge> e;
  for (node_id u = 0; u < num_u; ++u)
    for (std::size_t i = 0; i < deg; ++i) e.push_back({u, static_cast<node_id>((u * deg + i) % num_v)});
  return make_bipartite(num_u, num_v, std::move(e), std::vector<double>(num_u, 1.0),
                        std::vector<std::int32_t>(num_v, level), N);
}

double sel_sum(const BipartiteInstance& h, node_id u, const std::vector<std::uint8_t>& s,
               const std::vector<std::uint8_t>* kept = nullptr, int shift = 0) {
  double x = 0;
  for (edge_index e = h.offsets[u]; e < h.offsets[u + 1]; ++e)
    if (s[h.adj[e]] && (kept == nullptr || (*kept)[e])) x += std::ldexp(1.0, -(h.level[h.adj[e]] - shift));
  return x;
}

std::uint64_t hits(const BipartiteInstance& h, node_id u, const std::vector<std::uint8_t>& s) {
  std::uint64_t c = 0;
  for (edge_index e = h.offsets[u]; e < h.offsets[u + 1]; ++e) c += s[h.adj[e]];
  return c;
}

// Sample mean and standard error of the system's terms over uniform halves.
void monte_carlo(const PotentialSystem& sys, int samples, std::uint64_t seed, std::vector<double>& mean,
                 std::vector<double>& se) {
  std::mt19937_64 rng(seed);
  const std::size_t t = sys.term_names().size();
  mean.assign(t, 0);
  std::vector<double> m2(t, 0);
  std::vector<std::uint8_t> s(sys.n);
  for (int i = 1; i <= samples; ++i) {
    for (auto& x : s) x = rng() & 1;
    const auto v = sys.evaluate_terms(s);
    for (std::size_t j = 0; j < t; ++j) {
      const double d = v[j] - mean[j];
      mean[j] += d / i;
      m2[j] += d * (v[j] - mean[j]);
    }
  }
  se.assign(t, 0);
  for (std::size_t j = 0; j < t; ++j) se[j] = std::sqrt(m2[j] / (samples - 1) / samples);
}

}  // namespace

TEST_CASE("low_prob_half with empty U only shrinks V") {
  const std::uint32_t K = threshold_k(ParamSet::desk(), kN);
  BipartiteInstance h = make_bipartite(0, 900, {}, {}, std::vector<std::int32_t>(900, K + 1), kN);
  HalfSampleResult r = low_prob_half(h, 0.05);
  std::uint64_t s = 0;
  for (auto x : r.in_s) s += x;
  CHECK(double(s) <= 2.0 / 3.0 * 900 + additive_cap(h.params, kN));
  CHECK(r.shrink_value <= r.shrink_bound);
}

TEST_CASE("low_prob_half keeps a single node's mass near half") {
  const ParamSet p = ParamSet::desk();
  const std::uint32_t K = threshold_k(p, kN);
  const double gamma = 0.05;
  const std::uint64_t b = low_bucket_size(p, gamma, K, kN);
  BipartiteInstance h = regular(1, 2 * b, 2 * b, static_cast<std::int32_t>(K + 1));
  HalfSampleResult r = low_prob_half(h, gamma);
  CHECK(r.b == b);
  const double before = sel_sum(h, 0, std::vector<std::uint8_t>(h.num_v, 1));
  const double after = sel_sum(h, 0, r.in_s, &r.kept);
  CHECK(r.u_good[0] == 1);
  // two buckets of size b each keep exactly b/2 when the potential is minimal
  CHECK(std::abs(after - before / 2) <= gamma * before / 2 + gamma / 2);
}

TEST_CASE("low_prob_half potentials calibrate to one") {
  tools::HittingSpec spec;
  spec.num_u = 40;
  spec.num_v = 30000;
  spec.N = kN;
  spec.min_level = static_cast<std::int32_t>(threshold_k(ParamSet::desk(), kN) + 1);
  spec.max_level = spec.min_level + 1;
  spec.sum_lo = 0.05;
  spec.sum_hi = 1.05;
  BipartiteInstance h = tools::generate_hitting_instance(spec);
  HalfSystem hs = build_low_half_system(h, 0.05);
  std::vector<double> mean, se;
  monte_carlo(hs.sys, 10000, 5, mean, se);
  const auto expect = hs.sys.term_expectations();
  for (std::size_t j = 0; j < mean.size(); ++j) {
    INFO(hs.sys.term_names()[j]);
    CHECK(std::abs(mean[j] - expect[j]) <= 3 * se[j] + 1e-12);
  }
  CHECK(hs.sys.bound == doctest::Approx(3.1));
}

TEST_CASE("low_prob_half rejects levels at or below K") {
  const std::uint32_t K = threshold_k(ParamSet::desk(), kN);
  BipartiteInstance h = regular(1, 8, 8, static_cast<std::int32_t>(K));
  CHECK_THROWS_AS(low_prob_half(h, 0.05), ContractViolation);
}

TEST_CASE("high_prob_half with one bucket per node") {
  const double gamma = 0.25;
  const std::uint64_t b = high_bucket_size(ParamSet::desk(), gamma);
  BipartiteInstance h = regular(10, 10 * b, b, 3);
  HalfSampleResult r = high_prob_half(h, gamma);
  CHECK(r.potential.total <= r.potential.bound);
  double good = 0;
  for (node_id u = 0; u < 10; ++u) {
    const double d = double(hits(h, u, r.in_s));
    if (r.u_good[u]) {
      good += 1;
      CHECK(std::abs(d - b / 2.0) <= gamma * b / 2.0 + std::pow(1 / gamma, h.params.beta + 1));
    }
  }
  CHECK(good >= (1 - gamma) * 10);
}

TEST_CASE("high_prob_half with zero importances") {
  BipartiteInstance h = regular(5, 80, 16, 2);
  std::fill(h.imp.begin(), h.imp.end(), 0.0);
  HalfSampleResult r = high_prob_half(h, 0.25);
  CHECK(r.potential.total == 0);
  for (auto g : r.u_good) CHECK(g == 1);
}

TEST_CASE("high_prob_half potential calibrates to a quarter of the importance") {
  tools::HittingSpec spec;
  spec.num_u = 30;
  spec.num_v = 600;
  spec.sum_lo = 5;
  spec.sum_hi = 12;
  spec.min_level = 2;  // every node gets at least 20 neighbours, so no neighbourhood trims to empty
  spec.max_level = 3;
  BipartiteInstance h = tools::generate_hitting_instance(spec);
  HalfSystem hs = build_high_half_system(h, 0.25);
  std::vector<double> mean, se;
  monte_carlo(hs.sys, 10000, 9, mean, se);
  double total_expect = 0;
  const auto expect = hs.sys.term_expectations();
  for (std::size_t j = 0; j < mean.size(); ++j) {
    CHECK(std::abs(mean[j] - expect[j]) <= 3 * se[j] + 1e-12);
    total_expect += expect[j];
  }
  double imp = 0;
  for (double x : h.imp) imp += x;
  CHECK(total_expect == doctest::Approx(imp / 4));
  CHECK(hs.sys.bound == doctest::Approx(imp / 2));
}

TEST_CASE("low_prob_regime on empty V") {
  BipartiteInstance h = make_bipartite(3, 0, {}, {1, 1, 1}, {}, kN);
  RegimeResult r = low_prob_regime(h);
  CHECK(r.in_s.empty());
  CHECK(r.u_good == std::vector<std::uint8_t>{1, 1, 1});
}

TEST_CASE("low_prob_regime with one level above K") {
  const std::uint32_t K = threshold_k(ParamSet::desk(), kN);
  // per-u mass 2^-(K+1) * 2^(K+1) = 1
  const std::size_t deg = std::size_t{1} << (K + 1);
  BipartiteInstance h = regular(4, 4 * deg, deg, static_cast<std::int32_t>(K + 1));
  RegimeResult r = low_prob_regime(h);
  for (node_id u = 0; u < 4; ++u) {
    if (!r.u_good[u]) continue;
    const double got = double(hits(h, u, r.in_s)) * std::ldexp(1.0, -static_cast<int>(K));
    CHECK(got >= 0.5);
    CHECK(got <= 1.5);
  }
}

TEST_CASE("low_prob_regime with unit mass stays inside the measured window") {
  const std::uint32_t K = threshold_k(ParamSet::desk(), kN);
  const std::size_t deg = std::size_t{1} << (K + 3);
  BipartiteInstance h = regular(6, 6 * deg, deg, static_cast<std::int32_t>(K + 3));
  CertificateLog::global().reset();
  RegimeResult r = low_prob_regime(h);
  CHECK(r.rounds.size() >= 3);
  CHECK(r.rounds.size() <= log_n(kN));
  const auto st = CertificateLog::global().get("low_regime.window");
  CHECK(st.calls >= 1);
  for (node_id u = 0; u < 6; ++u) {
    if (!r.u_good[u]) continue;
    const double got = double(hits(h, u, r.in_s)) * std::ldexp(1.0, -static_cast<int>(K));
    CHECK(got >= 0.5);
    CHECK(got <= 1.5);
  }
}

TEST_CASE("high_prob_regime leaves levels below the floor untouched") {
  const ParamSet p = ParamSet::desk();
  BipartiteInstance h = regular(5, 50, 10, p.high_floor);
  RegimeResult r = high_prob_regime(h);
  for (auto x : r.in_s) CHECK(x == 1);
}

TEST_CASE("high_prob_regime on a single node at level K") {
  const std::uint32_t K = threshold_k(ParamSet::desk(), kN);
  const std::size_t deg = std::size_t{1} << K;
  BipartiteInstance h = regular(1, deg, deg, static_cast<std::int32_t>(K));
  RegimeResult r = high_prob_regime(h);
  REQUIRE(r.u_good[0] == 1);
  const double target = 1.0;  // deg * 2^-K
  const double got = double(hits(h, 0, r.in_s));
  CHECK(got >= 0.5 * target - 0.5);
  CHECK(got <= 1e3 * (target + 1));
}

TEST_CASE("high_prob_regime contract on mixed random instances") {
  for (std::uint64_t seed = 1; seed <= 100; ++seed) {
    tools::HittingSpec spec;
    spec.num_u = 10 + seed % 40;
    spec.num_v = 150;
    spec.max_level = 5;
    spec.seed = seed;
    BipartiteInstance h = tools::generate_hitting_instance(spec);
    RegimeResult r = high_prob_regime(h);
    HittingVerdict v = verify_hitting(h, r.in_s, r.u_good, 0.75, 1e3);
    REQUIRE(v.importance_fraction >= 0.75);
    REQUIRE(v.lower_violations == 0);
    REQUIRE(v.measured_c <= 1e3);
  }
}

TEST_CASE("hitting_set with every level at most K skips the low phase") {
  tools::HittingSpec spec;
  spec.max_level = 4;
  BipartiteInstance h = tools::generate_hitting_instance(spec);
  HittingResult r = hitting_set(h);
  CHECK(r.low_v == 0);
  CHECK(r.low_rounds.empty());
}

TEST_CASE("hitting_set gives a node with mass six a hit") {
  // 12 neighbours at level 1
  BipartiteInstance h = regular(1, 12, 12, 1, 1 << 10);
  HittingResult r = hitting_set(h);
  REQUIRE(r.u_good[0] == 1);
  const double got = double(hits(h, 0, r.in_s));
  CHECK(got >= 2.5);
  CHECK(got <= 7e3);
}

TEST_CASE("hitting_set keeps the dominant-importance node good") {
  tools::HittingSpec spec;
  spec.num_u = 40;
  spec.seed = 77;
  BipartiteInstance h = tools::generate_hitting_instance(spec);
  double rest = 0;
  for (std::size_t u = 1; u < h.num_u; ++u) rest += h.imp[u];
  h.imp[0] = 99 * rest;
  HittingResult r = hitting_set(h);
  CHECK(r.u_good[0] == 1);
  HittingVerdict v = verify_hitting(h, r.in_s, r.u_good, 0.75, 1e3);
  CHECK(v.importance_fraction == doctest::Approx(r.importance_good / r.importance_total));
}

TEST_CASE("HSET1 text round-trip and errors") {
  tools::HittingSpec spec;
  spec.num_u = 7;
  spec.num_v = 40;
  BipartiteInstance h = tools::generate_hitting_instance(spec);
  std::stringstream ss;
  write_hset(ss, h);
  BipartiteInstance back = read_hset(ss);
  CHECK(back.adj == h.adj);
  CHECK(back.offsets == h.offsets);
  CHECK(back.level == h.level);
  CHECK(back.N == h.N);
  for (std::size_t u = 0; u < h.num_u; ++u) CHECK(back.imp[u] == doctest::Approx(h.imp[u]));

  std::istringstream bad_magic("HSET2\n1 1\n");
  CHECK_THROWS_AS(read_hset(bad_magic), MalformedInput);
  std::istringstream bad_edge("HSET1\n1 1\n0 1\n0 0\n0 5\n");
  CHECK_THROWS_AS(read_hset(bad_edge), MalformedInput);
}
