#include <algorithm>
#include <fstream>
#include <iomanip>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>

#include "dpar/errors.hpp"
#include "dpar/hitting.hpp"

namespace dpar {

namespace {

// Next non-blank, non-comment line; false at end of input.
bool next_line(std::istream& in, std::string& line, std::uint64_t& lineno) {
  while (std::getline(in, line)) {
    ++lineno;
    const auto pos = line.find_first_not_of(" \t\r");
    if (pos == std::string::npos || line[pos] == '#') continue;
    return true;
  }
  return false;
}

[[noreturn]] void bad(const std::string& source, std::uint64_t lineno, const std::string& what) {
  throw MalformedInput(source + ":" + std::to_string(lineno) + ": " + what);
}

}  // namespace

BipartiteInstance read_hset(std::istream& in, const std::string& source) {
  std::string line;
  std::uint64_t lineno = 0;
  if (!next_line(in, line, lineno)) bad(source, lineno, "empty input, expected HSET1 header");
  {
    std::istringstream ss(line);
    std::string magic;
    ss >> magic;
    if (magic != "HSET1") bad(source, lineno, "missing HSET1 header");
  }
  if (!next_line(in, line, lineno)) bad(source, lineno, "missing size line");
  std::uint64_t nu = 0, nv = 0, N = 0;
  {
    std::istringstream ss(line);
    if (!(ss >> nu >> nv)) bad(source, lineno, "expected 'nu nv [N]'");
    if (!(ss >> N)) N = 0;
  }
  if (nu > std::numeric_limits<node_id>::max() - 1 || nv > std::numeric_limits<node_id>::max() - 1)
    throw InstanceTooLarge(source + ": node count exceeds the 32-bit id space");
  std::vector<double> imp(nu, 0.0);
  std::vector<std::int32_t> level(nv, 0);
  std::vector<std::uint8_t> seen_u(nu, 0), seen_v(nv, 0);
  for (std::uint64_t i = 0; i < nu; ++i) {
    if (!next_line(in, line, lineno)) bad(source, lineno, "truncated importance block");
    std::istringstream ss(line);
    std::uint64_t u;
    double w;
    if (!(ss >> u >> w)) bad(source, lineno, "expected 'u imp'");
    if (u >= nu) bad(source, lineno, "u id out of range");
    if (seen_u[u]++) bad(source, lineno, "duplicate importance for u" + std::to_string(u));
    if (!(w >= 0)) bad(source, lineno, "importance must be nonnegative");
    imp[u] = w;
  }
  for (std::uint64_t i = 0; i < nv; ++i) {
    if (!next_line(in, line, lineno)) bad(source, lineno, "truncated level block");
    std::istringstream ss(line);
    std::uint64_t v;
    std::int64_t k;
    if (!(ss >> v >> k)) bad(source, lineno, "expected 'v k'");
    if (v >= nv) bad(source, lineno, "v id out of range");
    if (seen_v[v]++) bad(source, lineno, "duplicate level for v" + std::to_string(v));
    if (k < 0 || k > 64) bad(source, lineno, "level out of range");
    level[v] = static_cast<std::int32_t>(k);
  }
  std::vector<BipartiteEdge> edges;
  while (next_line(in, line, lineno)) {
    std::istringstream ss(line);
    std::uint64_t u, v;
    if (!(ss >> u >> v)) bad(source, lineno, "expected 'u v'");
    if (u >= nu || v >= nv) bad(source, lineno, "edge endpoint out of range");
    edges.push_back({static_cast<node_id>(u), static_cast<node_id>(v)});
  }
  if (N == 0) N = std::max<std::uint64_t>(2, nu + nv);
  return make_bipartite(nu, nv, std::move(edges), std::move(imp), std::move(level), N);
}

BipartiteInstance read_hset_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw MalformedInput("cannot open " + path);
  return read_hset(in, path);
}

void write_hset(std::ostream& out, const BipartiteInstance& h) {
  out << "HSET1\n" << h.num_u << ' ' << h.num_v << ' ' << h.N << '\n';
  out << std::setprecision(17);
  for (std::size_t u = 0; u < h.num_u; ++u) out << u << ' ' << h.imp[u] << '\n';
  for (std::size_t v = 0; v < h.num_v; ++v) out << v << ' ' << h.level[v] << '\n';
  for (std::size_t u = 0; u < h.num_u; ++u)
    for (edge_index e = h.offsets[u]; e < h.offsets[u + 1]; ++e) out << u << ' ' << h.adj[e] << '\n';
}

}  // namespace dpar
