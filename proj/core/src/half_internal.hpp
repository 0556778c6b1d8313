#pragma once

#include <string>
#include <vector>

#include "dpar/certificates.hpp"
#include "dpar/hitting.hpp"
#include "dpar/potential.hpp"

namespace dpar::detail {

// Buckets over U-neighbourhoods. Buckets of u occupy [u_first[u], u_first[u+1]).
struct NeighborhoodBuckets {
  BucketSet set;
  std::vector<std::size_t> u_first;
  std::vector<std::uint8_t> kept;        // per adjacency slot of the instance
  std::vector<std::uint64_t> dropped;    // per u
  std::vector<double> mass;              // per u: sum over buckets of b * scale
};

// by_level: group each neighbourhood by level first (scale 2^-level);
// otherwise one group per u (scale 1).
NeighborhoodBuckets bucket_neighborhoods(const BipartiteInstance& h, std::uint64_t b, bool by_level);

// Consecutive id runs of size b over [0, n); the last partial run is left out.
BucketSet partition_range(std::size_t n, std::uint64_t b);

// U nodes whose bad-bucket mass stays within mass / b^node_exp.
std::vector<std::uint8_t> good_u_nodes(const NeighborhoodBuckets& nb, std::size_t num_u,
                                       const std::vector<std::uint8_t>& s, double bucket_exp, double node_exp);

// Low-probability potentials Phi_1..Phi_3 (appended to sys; sets 0 and 1 are created).
void add_low_potentials(PotentialSystem& sys, const BipartiteInstance& h, const NeighborhoodBuckets& nb,
                        std::uint64_t b);

PotentialReport make_report(const PotentialSystem& sys, const PotentialOutcome& out);

// Low-half guarantee measurements (I)-(IV), shared with the MIS variant.
void measure_low_guarantees(const BipartiteInstance& h, const NeighborhoodBuckets& nb, HalfSampleResult& r,
                            const std::string& prefix);

// Paper mode asserts, desk mode logs.
inline void guarantee(const ParamSet& p, const std::string& name, long double value, long double bound) {
  if (p.mode == Mode::paper) require_certificate(name, value, bound);
  else measure_certificate(name, value, bound);
}

}  // namespace dpar::detail
