#include <algorithm>
#include <cmath>
#include <cstring>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "dpar/errors.hpp"
#include "dpar/graph.hpp"

namespace dpar {

Graph read_edge_list(std::istream& in, const std::string& source) {
  std::vector<Edge> edges;
  bool weighted = false;
  std::uint64_t declared_n = 0;
  std::uint64_t max_id = 0;
  bool any = false;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos) continue;
    if (line[first] == '#') {
      std::istringstream hs(line.substr(first + 1));
      std::string key;
      std::uint64_t value = 0;
      if (hs >> key >> value && key == "nodes") declared_n = value;
      continue;
    }
    std::istringstream ls(line);
    long long u = -1, v = -1;
    if (!(ls >> u >> v) || u < 0 || v < 0 || u > static_cast<long long>(no_node) - 1 ||
        v > static_cast<long long>(no_node) - 1)
      throw MalformedInput(source + ":" + std::to_string(lineno) + ": expected 'u v [w]'");
    Edge e{static_cast<node_id>(u), static_cast<node_id>(v), 1.0};
    double w = 0;
    if (ls >> w) {
      if (!(w >= 0 && std::isfinite(w)))
        throw MalformedInput(source + ":" + std::to_string(lineno) + ": weight must be a nonnegative finite number");
      e.w = w;
      weighted = true;
    }
    std::string rest;
    if (ls >> rest) throw MalformedInput(source + ":" + std::to_string(lineno) + ": trailing tokens");
    max_id = std::max<std::uint64_t>(max_id, std::max(e.u, e.v));
    any = true;
    edges.push_back(e);
  }
  const std::uint64_t n = std::max<std::uint64_t>(declared_n, any ? max_id + 1 : 0);
  return sort_edges_to_csr(edges, n, weighted);
}

Graph read_edge_list_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw MalformedInput("cannot open " + path);
  return read_edge_list(in, path);
}

void write_edge_list(std::ostream& out, const Graph& g) {
  out << "# nodes " << g.num_nodes() << "\n";
  out.precision(17);
  for (const Edge& e : edge_list(g)) {
    out << e.u << ' ' << e.v;
    if (g.weighted()) out << ' ' << e.w;
    out << '\n';
  }
}

namespace {

constexpr char kMagic[5] = {'D', 'P', 'A', 'R', '1'};

void put_u64(std::ostream& out, std::uint64_t x) {
  unsigned char b[8];
  for (int i = 0; i < 8; ++i) b[i] = static_cast<unsigned char>(x >> (8 * i));
  out.write(reinterpret_cast<const char*>(b), 8);
}

bool get_u64(std::istream& in, std::uint64_t& x) {
  unsigned char b[8];
  if (!in.read(reinterpret_cast<char*>(b), 8)) return false;
  x = 0;
  for (int i = 0; i < 8; ++i) x |= static_cast<std::uint64_t>(b[i]) << (8 * i);
  return true;
}

}  // namespace

Graph read_csr_binary_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw MalformedInput("cannot open " + path);
  char magic[5];
  if (!in.read(magic, 5) || std::memcmp(magic, kMagic, 5) != 0)
    throw MalformedInput(path + ": bad magic, expected DPAR1");
  std::uint64_t n = 0, slots = 0;
  if (!get_u64(in, n) || !get_u64(in, slots)) throw MalformedInput(path + ": truncated header");
  if (n >= no_node) throw InstanceTooLarge(path + ": node count exceeds 32-bit ids");
  std::vector<edge_index> offsets(n + 1);
  for (auto& o : offsets)
    if (!get_u64(in, o)) throw MalformedInput(path + ": truncated offsets");
  std::vector<node_id> nbrs(slots);
  for (auto& x : nbrs) {
    std::uint64_t v = 0;
    if (!get_u64(in, v)) throw MalformedInput(path + ": truncated neighbors");
    if (v >= n) throw MalformedInput(path + ": neighbor id out of range");
    x = static_cast<node_id>(v);
  }
  std::vector<double> weights;
  std::uint64_t bits = 0;
  if (slots > 0 && get_u64(in, bits)) {
    weights.resize(slots);
    std::memcpy(&weights[0], &bits, 8);
    for (std::size_t i = 1; i < slots; ++i) {
      if (!get_u64(in, bits)) throw MalformedInput(path + ": truncated weight block");
      std::memcpy(&weights[i], &bits, 8);
    }
  }
  Graph g(n, std::move(offsets), std::move(nbrs), std::move(weights));
  g.validate();
  return g;
}

void write_csr_binary_file(const std::string& path, const Graph& g) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw MalformedInput("cannot write " + path);
  out.write(kMagic, 5);
  put_u64(out, g.num_nodes());
  put_u64(out, g.num_slots());
  for (edge_index o : g.offsets()) put_u64(out, o);
  for (node_id v : g.neighbor_array()) put_u64(out, v);
  for (double w : g.weight_array()) {
    std::uint64_t bits = 0;
    std::memcpy(&bits, &w, 8);
    put_u64(out, bits);
  }
  if (!out) throw MalformedInput("write failed for " + path);
}

}  // namespace dpar
