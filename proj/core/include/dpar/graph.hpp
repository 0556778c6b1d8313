#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "dpar/types.hpp"

namespace dpar {

struct Edge {
  node_id u = 0;
  node_id v = 0;
  double w = 1.0;
};

// Symmetric CSR adjacency with sorted neighbor lists. Optional per-slot edge
// weights (equal on both directions) and an optional orientation given as a
// per-slot "points away from owner" flag.
class Graph {
 public:
  Graph() : offsets_(1, 0) {}
  Graph(std::size_t n, std::vector<edge_index> offsets, std::vector<node_id> neighbors,
        std::vector<double> weights = {});

  std::size_t num_nodes() const { return offsets_.size() - 1; }
  std::size_t num_slots() const { return neighbors_.size(); }
  std::size_t num_edges() const { return neighbors_.size() / 2; }

  edge_index begin(node_id v) const { return offsets_[v]; }
  edge_index end(node_id v) const { return offsets_[v + 1]; }
  std::uint64_t degree(node_id v) const { return offsets_[v + 1] - offsets_[v]; }
  std::span<const node_id> neighbors(node_id v) const {
    return {neighbors_.data() + offsets_[v], static_cast<std::size_t>(degree(v))};
  }
  node_id neighbor_at(edge_index slot) const { return neighbors_[slot]; }

  bool weighted() const { return !weights_.empty(); }
  double weight_at(edge_index slot) const { return weights_.empty() ? 1.0 : weights_[slot]; }
  double total_weight() const;
  std::uint64_t max_degree() const;

  bool oriented() const { return !out_.empty(); }
  bool is_out(edge_index slot) const { return out_.empty() || out_[slot] != 0; }
  std::uint64_t out_degree(node_id v) const;
  std::uint64_t max_out_degree() const;
  void set_orientation(std::vector<std::uint8_t> out_flags);
  void clear_orientation() { out_.clear(); }

  // Slot of v inside u's list, or num_slots() if absent.
  edge_index find_slot(node_id u, node_id v) const;

  const std::vector<edge_index>& offsets() const { return offsets_; }
  const std::vector<node_id>& neighbor_array() const { return neighbors_; }
  const std::vector<double>& weight_array() const { return weights_; }
  const std::vector<std::uint8_t>& orientation_array() const { return out_; }

  // Full invariant scan; throws MalformedInput describing the first problem.
  void validate() const;

 private:
  std::vector<edge_index> offsets_;
  std::vector<node_id> neighbors_;
  std::vector<double> weights_;
  std::vector<std::uint8_t> out_;
};

enum class DuplicatePolicy { keep_first, sum_weights };

// Builds a simple undirected CSR graph with duplicates merged. Self-loops and
// out-of-range endpoints throw MalformedInput.
Graph sort_edges_to_csr(std::span<const Edge> edges, std::size_t n, bool weighted = false,
                        DuplicatePolicy policy = DuplicatePolicy::keep_first);

struct Subgraph {
  Graph graph;
  std::vector<node_id> old_to_new;  // no_node for dropped nodes
  std::vector<node_id> new_to_old;
};

// Keeps the masked nodes and (optionally) masked slots between kept nodes.
// The slot mask must be symmetric.
Subgraph compact_subgraph(const Graph& g, std::span<const std::uint8_t> keep_node,
                          std::span<const std::uint8_t> keep_slot = {});

// Orientation by (degree, id): u -> v iff (deg v, v) > (deg u, u).
std::vector<std::uint8_t> orientation_by_degree(const Graph& g);

std::vector<Edge> edge_list(const Graph& g);

// Text "u v [w]" lines; '#' comments and blank lines allowed.
Graph read_edge_list(std::istream& in, const std::string& source = "<stream>");
Graph read_edge_list_file(const std::string& path);
void write_edge_list(std::ostream& out, const Graph& g);

// Binary: "DPAR1", LE u64 n, u64 slots, u64 offsets[n+1], u64 neighbors[slots], optional f64 weights[slots].
Graph read_csr_binary_file(const std::string& path);
void write_csr_binary_file(const std::string& path, const Graph& g);

}  // namespace dpar
