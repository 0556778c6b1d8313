#include "dpar/coloring.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "dpar/certificates.hpp"
#include "dpar/errors.hpp"
#include "dpar/number_theory.hpp"
#include "dpar/parallel.hpp"
#include "dpar/primitives.hpp"
#include "dpar/work.hpp"

namespace dpar {

namespace {

std::uint64_t ceil_cbrt(std::uint64_t k) {
  auto r = static_cast<std::uint64_t>(std::llround(std::cbrt(static_cast<double>(k))));
  while (r * r * r < k) ++r;
  while (r > 0 && (r - 1) * (r - 1) * (r - 1) >= k) --r;
  return r;
}

struct Poly {
  std::uint64_t a, b, c;
};

Poly digits(std::uint64_t q, std::uint64_t p) {
  const std::uint64_t c = q % p;
  const std::uint64_t b = (q / p) % p;
  const std::uint64_t a = (q / p / p) % p;
  return {a, b, c};
}

std::uint64_t eval(const Poly& f, std::uint64_t x, std::uint64_t p) { return ((f.a * x % p) * x + f.b * x + f.c) % p; }

// Roots of (g - f) over F_p (p odd), written to out; returns the count.
int difference_roots(const Poly& f, const Poly& g, std::uint64_t p, const RootTable& t, std::uint64_t out[2]) {
  const std::uint64_t A = (g.a + p - f.a) % p;
  const std::uint64_t B = (g.b + p - f.b) % p;
  const std::uint64_t C = (g.c + p - f.c) % p;
  if (A == 0) {
    if (B == 0) return 0;
    out[0] = (p - C) % p * t.inverse[B] % p;
    return 1;
  }
  const std::uint64_t disc = (B * B % p + p - 4 * A % p * C % p) % p;
  const std::int32_t r = t.sqrt[disc];
  if (r < 0) return 0;
  const std::uint64_t inv2a = t.inverse[2 * A % p];
  out[0] = ((p - B) % p + static_cast<std::uint64_t>(r)) % p * inv2a % p;
  if (r == 0) return 1;
  out[1] = ((p - B) % p + p - static_cast<std::uint64_t>(r)) % p * inv2a % p;
  return 2;
}

std::uint64_t max_out(const Graph& g) { return g.oriented() ? g.max_out_degree() : g.max_degree(); }

}  // namespace

Coloring identity_coloring(std::size_t n) {
  Coloring c;
  c.color.resize(n);
  for (std::size_t i = 0; i < n; ++i) c.color[i] = static_cast<std::uint32_t>(i);
  c.num_colors = n;
  return c;
}

std::uint64_t proper_palette_bound(std::uint64_t delta) {
  const std::uint64_t d = std::max<std::uint64_t>(delta, 1);
  return 5 * d * d * 4;
}

bool is_proper_coloring(const Graph& g, const std::vector<std::uint32_t>& color) {
  for (std::size_t v = 0; v < g.num_nodes(); ++v)
    for (edge_index s = g.begin(static_cast<node_id>(v)); s < g.end(static_cast<node_id>(v)); ++s)
      if (g.is_out(s) && color[v] == color[g.neighbor_at(s)]) return false;
  return true;
}

namespace {

std::uint64_t k_prime_for(std::uint64_t k, std::uint64_t delta, ReduceMode mode) {
  if (mode == ReduceMode::standard) return std::max(3 * ceil_cbrt(k), 3 * delta);
  return std::max({ceil_cbrt(k), 3 * delta, std::uint64_t{3}});
}

}  // namespace

Coloring reduce_colors_once(const Graph& g, const Coloring& in, ReduceMode mode) {
  const std::size_t n = g.num_nodes();
  if (in.color.size() != n) throw ContractViolation("reduce_colors_once: coloring size differs from n");
  for (std::uint32_t c : in.color)
    if (c >= in.num_colors) throw ContractViolation("reduce_colors_once: color outside palette");
  if (!is_proper_coloring(g, in.color)) throw ContractViolation("reduce_colors_once: input coloring not proper");
  charge("coloring", g.num_slots());

  const std::uint64_t delta = max_out(g);
  const std::uint64_t k = std::max<std::uint64_t>(in.num_colors, 1);
  const std::uint64_t kp = k_prime_for(k, delta, mode);
  const NumberTheoryTables& tables = shared_tables(2 * kp);
  const std::uint64_t p = prime_in_range(tables, kp);
  if (p * p * p < k) throw CertificateViolation("reduce_colors_once: p^3 below palette");
  const RootTable& roots = tables.roots(static_cast<std::uint32_t>(p));

  Coloring out;
  out.color.resize(n);
  out.num_colors = p * p;
  out.rounds = in.rounds + 1;
  out.delta = delta;
  parallel_for(0, n, [&](std::size_t vi) {
    thread_local std::vector<std::uint8_t> lost;
    const auto v = static_cast<node_id>(vi);
    const Poly f = digits(in.color[v], p);
    const std::uint64_t outdeg = g.out_degree(v);
    const std::uint64_t points = std::min<std::uint64_t>(p, std::max<std::uint64_t>(1, 3 * outdeg));
    lost.assign(points, 0);
    for (edge_index s = g.begin(v); s < g.end(v); ++s) {
      if (!g.is_out(s)) continue;
      const Poly h = digits(in.color[g.neighbor_at(s)], p);
      std::uint64_t r[2];
      const int cnt = difference_roots(f, h, p, roots, r);
      for (int i = 0; i < cnt; ++i)
        if (r[i] < points) lost[r[i]] = 1;
    }
    std::uint64_t x = 0;
    while (x < points && lost[x]) ++x;
    if (x == points) throw CertificateViolation("reduce_colors_once: every evaluation point lost");
    out.color[v] = static_cast<std::uint32_t>(x * p + eval(f, x, p));
  });
  charge("coloring", n + g.num_slots());
  return out;
}

Coloring color_delta_squared(const Graph& g) {
  const std::size_t n = g.num_nodes();
  const std::uint64_t delta = max_out(g);
  if (delta == 0) {
    Coloring c;
    c.color.assign(n, 0);
    c.num_colors = n == 0 ? 0 : 1;
    return c;
  }
  Coloring cur = identity_coloring(n);
  cur.delta = delta;
  for (ReduceMode mode : {ReduceMode::standard, ReduceMode::tight}) {
    for (;;) {
      const std::uint64_t kp = k_prime_for(cur.num_colors, delta, mode);
      if (kp * kp >= cur.num_colors) break;
      const std::uint64_t p = prime_in_range(shared_tables(2 * kp), kp);
      if (p * p >= cur.num_colors) break;
      cur = reduce_colors_once(g, cur, mode);
    }
  }
  if (!is_proper_coloring(g, cur.color)) throw CertificateViolation("color_delta_squared: output not proper");
  charge("coloring", g.num_slots());
  return cur;
}

std::uint64_t ceil_inverse(double eps) {
  const double x = 1.0 / eps;
  const double r = std::round(x);
  if (std::fabs(x - r) <= 1e-9 * std::max(1.0, x)) return static_cast<std::uint64_t>(std::max(1.0, r));
  return static_cast<std::uint64_t>(std::ceil(x));
}

DefectiveColoring defective_coloring(const Graph& g, double eps) {
  if (!(eps > 0 && eps <= 1)) throw ParameterError("defective_coloring: eps must lie in (0, 1]");
  const std::size_t n = g.num_nodes();
  const std::size_t slots = g.num_slots();
  DefectiveColoring out;
  out.eps = eps;
  out.total_weight = g.total_weight();
  const std::uint64_t palette = 3 * ceil_inverse(eps);
  out.num_colors = palette;
  if (n == 0) return out;

  const double log_n = std::log2(static_cast<double>(std::max<std::size_t>(n, 2)));
  const auto iters = static_cast<std::uint32_t>(
      std::max(1.0, std::ceil(std::log(std::max(log_n, 1.0)) / std::log(1.5) - 1e-12)));
  const double eps1 = eps / (2.0 * iters);
  const std::uint64_t inv1 = ceil_inverse(eps1);

  std::vector<std::uint8_t> alive(slots, 1);
  std::vector<std::uint32_t> color(n);
  for (std::size_t i = 0; i < n; ++i) color[i] = static_cast<std::uint32_t>(i);
  std::uint64_t k = n;

  // Phase 1: polynomial rounds that tolerate a small hit weight per node.
  while (out.phase1_rounds < iters) {
    const std::uint64_t kp = std::max(3 * ceil_cbrt(k), 3 * inv1);
    if (kp * kp >= k) break;
    const NumberTheoryTables& tables = shared_tables(2 * kp);
    const std::uint64_t p = prime_in_range(tables, kp);
    if (p * p >= k) break;
    const RootTable& roots = tables.roots(static_cast<std::uint32_t>(p));
    std::vector<std::uint32_t> next(n);
    parallel_for(0, n, [&](std::size_t vi) {
      thread_local std::vector<double> hit;
      thread_local std::vector<std::uint32_t> hits;
      const auto v = static_cast<node_id>(vi);
      const Poly f = digits(color[v], p);
      std::uint64_t deg = 0;
      long double wv = 0;
      for (edge_index s = g.begin(v); s < g.end(v); ++s)
        if (alive[s]) {
          ++deg;
          wv += g.weight_at(s);
        }
      const bool low = deg <= inv1;
      const std::uint64_t points = low ? 3 * deg + 1 : 3 * inv1;
      hit.assign(points, 0.0);
      hits.assign(points, 0);
      for (edge_index s = g.begin(v); s < g.end(v); ++s) {
        if (!alive[s]) continue;
        const Poly h = digits(color[g.neighbor_at(s)], p);
        std::uint64_t r[2];
        const int cnt = difference_roots(f, h, p, roots, r);
        for (int i = 0; i < cnt; ++i)
          if (r[i] < points) {
            hit[r[i]] += g.weight_at(s);
            ++hits[r[i]];
          }
      }
      std::uint64_t x = points;
      if (low || wv == 0) {
        for (std::uint64_t t = 0; t < points && x == points; ++t)
          if (hits[t] == 0) x = t;
        if (x == points && !low) x = 0;
      } else {
        const double cap = static_cast<double>(eps1 * wv);
        for (std::uint64_t t = 0; t < points && x == points; ++t)
          if (hit[t] < cap) x = t;
      }
      if (x == points) throw CertificateViolation("defective_coloring: no admissible evaluation point");
      next[v] = static_cast<std::uint32_t>(x * p + eval(f, x, p));
    });
    parallel_for(0, n, [&](std::size_t vi) {
      const auto v = static_cast<node_id>(vi);
      for (edge_index s = g.begin(v); s < g.end(v); ++s)
        if (alive[s] && next[v] == next[g.neighbor_at(s)]) alive[s] = 0;
    });
    charge("defective", n + 3 * slots);
    color.swap(next);
    k = p * p;
    ++out.phase1_rounds;
  }

  // Phase 2: color classes in order; edges point from higher to lower class.
  const std::vector<std::uint32_t> order = stable_order_by_key(color);
  std::vector<std::uint32_t> fresh(n, 0);
  const double half_eps = eps / 2;
  std::size_t start = 0;
  while (start < n) {
    std::size_t stop = start;
    while (stop < n && color[order[stop]] == color[order[start]]) ++stop;
    parallel_for(start, stop, [&](std::size_t idx) {
      thread_local std::vector<std::pair<std::uint32_t, double>> seen;
      const node_id v = order[idx];
      seen.clear();
      long double wout = 0;
      for (edge_index s = g.begin(v); s < g.end(v); ++s) {
        const node_id u = g.neighbor_at(s);
        if (!alive[s] || color[u] >= color[v]) continue;
        seen.emplace_back(fresh[u], g.weight_at(s));
        wout += g.weight_at(s);
      }
      std::sort(seen.begin(), seen.end());
      std::uint32_t pick = 0;
      if (seen.size() < palette || wout == 0) {
        // first color absent from the out-neighbourhood (falls back to 0)
        std::uint32_t c = 0;
        for (const auto& [col, w] : seen) {
          if (col == c) ++c;
          else if (col > c) break;
        }
        pick = c < palette ? c : 0;
      } else {
        const double cap = static_cast<double>(half_eps * wout);
        std::size_t i = 0;
        bool found = false;
        for (std::uint32_t c = 0; c < palette && !found; ++c) {
          long double wc = 0;
          while (i < seen.size() && seen[i].first == c) wc += seen[i++].second;
          if (wc < cap) {
            pick = c;
            found = true;
          }
        }
        if (!found) throw CertificateViolation("defective_coloring: no admissible phase-2 color");
      }
      fresh[v] = pick;
    });
    start = stop;
  }
  charge("defective", n + 2 * slots);

  long double mono = 0;
  for (std::size_t v = 0; v < n; ++v)
    for (edge_index s = g.begin(static_cast<node_id>(v)); s < g.end(static_cast<node_id>(v)); ++s) {
      const node_id u = g.neighbor_at(s);
      if (u > v && fresh[u] == fresh[v]) mono += g.weight_at(s);
    }
  charge("defective", slots);
  out.color = std::move(fresh);
  out.mono_weight = static_cast<double>(mono);
  require_certificate("defective.mono_weight", mono, static_cast<long double>(eps) * out.total_weight);
  return out;
}

}  // namespace dpar
