#pragma once

#include <cstdint>
#include <map>
#include <string>

namespace dpar {

enum class Mode { paper, desk };

// Every constant the hitting-set and MIS machinery uses. paper() mirrors the
// proofs; desk() keeps the same structure with constants that produce
// non-degenerate behaviour at n <= 2^20.
struct ParamSet {
  Mode mode = Mode::desk;
  double k_factor = 3;             // K = ceil(k_factor * log2 log2 N)
  double beta = 2;                 // b ~ (1/gamma)^beta
  double low_gamma0 = 0.05;        // low regime: gamma_i = max(g0 * decay^i, g0 / log N)
  double low_gamma_decay = 0.99;
  double high_gamma_scale = 1;     // high regime: gamma_i = 1 / (scale (K-i)^2) ...
  double high_gamma_min = 0.25;    // ... clamped from below (0 disables the clamp)
  int high_floor = 2;              // high regime runs I = K - floor rounds
  int mis_high_floor = 2;
  double degree_floor_coeff = 8;   // ceil(coeff * (log2 N)^exp)
  double degree_floor_exp = 0;
  double bad_bucket_exp = 0.8;
  double bad_node_exp_hitting = 0.3;
  double bad_node_exp_mis = 0.2;
  double additive_cap_coeff = 16;  // cap * ceil(log2 N)^2 in the shrinkage bound
  double importance_target = 0.75;
  double mis_outdegree_c = 1;      // independentish post-filter: |OUT(v) cap S| >= 2500 C
  double mis_degree_fraction = 0.1;

  static ParamSet paper();
  static ParamSet desk();
  static ParamSet for_mode(Mode m) { return m == Mode::paper ? paper() : desk(); }

  void set(const std::string& key, double value);  // ParameterError on unknown key
  std::map<std::string, double> to_map() const;
  std::string mode_name() const { return mode == Mode::paper ? "paper" : "desk"; }
};

Mode parse_mode(const std::string& s);

// Derived quantities, all with log base 2.
std::uint32_t log_n(std::uint64_t N);                       // ceil(log2 N), at least 1
std::uint32_t threshold_k(const ParamSet& p, std::uint64_t N);  // K
double degree_floor(const ParamSet& p, std::uint64_t N);
double low_gamma(const ParamSet& p, std::uint32_t round, std::uint64_t N);
double high_gamma(const ParamSet& p, std::uint32_t round, std::uint32_t K);
std::uint64_t low_bucket_size(const ParamSet& p, double gamma, std::uint32_t K, std::uint64_t N);
std::uint64_t high_bucket_size(const ParamSet& p, double gamma);
double additive_cap(const ParamSet& p, std::uint64_t N);

}  // namespace dpar
