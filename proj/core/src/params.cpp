#include "dpar/params.hpp"

#include <algorithm>
#include <cmath>

#include "dpar/errors.hpp"

namespace dpar {

namespace {
constexpr double kSaturated = 1e18;  // bucket sizes beyond any instance
}

ParamSet ParamSet::paper() {
  ParamSet p;
  p.mode = Mode::paper;
  p.k_factor = 100;
  p.beta = 6;
  p.low_gamma0 = 1e-7;
  p.low_gamma_decay = 0.99;
  p.high_gamma_scale = 100;
  p.high_gamma_min = 0;
  p.high_floor = 50;
  p.mis_high_floor = 20;
  p.degree_floor_coeff = 10;
  p.degree_floor_exp = 25;
  p.importance_target = 0.9;
  p.mis_degree_fraction = 0.25;
  return p;
}

ParamSet ParamSet::desk() { return ParamSet{}; }

Mode parse_mode(const std::string& s) {
  if (s == "paper") return Mode::paper;
  if (s == "desk") return Mode::desk;
  throw ParameterError("unknown mode '" + s + "' (expected paper or desk)");
}

namespace {

template <class F>
void for_each_field(ParamSet& p, F&& f) {
  f("k_factor", p.k_factor);
  f("beta", p.beta);
  f("low_gamma0", p.low_gamma0);
  f("low_gamma_decay", p.low_gamma_decay);
  f("high_gamma_scale", p.high_gamma_scale);
  f("high_gamma_min", p.high_gamma_min);
  f("degree_floor_coeff", p.degree_floor_coeff);
  f("degree_floor_exp", p.degree_floor_exp);
  f("bad_bucket_exp", p.bad_bucket_exp);
  f("bad_node_exp_hitting", p.bad_node_exp_hitting);
  f("bad_node_exp_mis", p.bad_node_exp_mis);
  f("additive_cap_coeff", p.additive_cap_coeff);
  f("importance_target", p.importance_target);
  f("mis_outdegree_c", p.mis_outdegree_c);
  f("mis_degree_fraction", p.mis_degree_fraction);
}

}  // namespace

void ParamSet::set(const std::string& key, double value) {
  if (key == "high_floor") {
    high_floor = static_cast<int>(value);
    return;
  }
  if (key == "mis_high_floor") {
    mis_high_floor = static_cast<int>(value);
    return;
  }
  bool found = false;
  for_each_field(*this, [&](const char* name, double& field) {
    if (key == name) {
      field = value;
      found = true;
    }
  });
  if (!found) throw ParameterError("unknown parameter '" + key + "'");
}

std::map<std::string, double> ParamSet::to_map() const {
  std::map<std::string, double> out;
  ParamSet copy = *this;
  for_each_field(copy, [&](const char* name, double& field) { out[name] = field; });
  out["high_floor"] = high_floor;
  out["mis_high_floor"] = mis_high_floor;
  return out;
}

std::uint32_t log_n(std::uint64_t N) {
  std::uint32_t l = 0;
  while (l < 64 && (std::uint64_t{1} << l) < N) ++l;
  return std::max<std::uint32_t>(l, 1);
}

std::uint32_t threshold_k(const ParamSet& p, std::uint64_t N) {
  const double ll = std::log2(std::max(2.0, std::log2(std::max<double>(static_cast<double>(N), 4.0))));
  return static_cast<std::uint32_t>(std::ceil(p.k_factor * ll - 1e-12));
}

double degree_floor(const ParamSet& p, std::uint64_t N) {
  const double v = std::ceil(p.degree_floor_coeff * std::pow(static_cast<double>(log_n(N)), p.degree_floor_exp));
  return std::min(v, kSaturated);
}

double low_gamma(const ParamSet& p, std::uint32_t round, std::uint64_t N) {
  return std::max(p.low_gamma0 * std::pow(p.low_gamma_decay, round), p.low_gamma0 / log_n(N));
}

double high_gamma(const ParamSet& p, std::uint32_t round, std::uint32_t K) {
  const double gap = static_cast<double>(K) - static_cast<double>(round);
  const double g = 1.0 / (p.high_gamma_scale * gap * gap);
  return std::max(g, p.high_gamma_min);
}

std::uint64_t low_bucket_size(const ParamSet& p, double gamma, std::uint32_t K, std::uint64_t N) {
  const double a = std::pow(1.0 / gamma, p.beta);
  const double b = gamma * std::pow(2.0, static_cast<double>(K) - 1.0) / log_n(N);
  const double v = std::floor(std::min({a, b, kSaturated}));
  if (v < 2) {
    if (p.mode == Mode::paper)
      throw ParameterError("low-probability bucket size below 2; N too small for paper-mode constants");
    return 2;
  }
  return static_cast<std::uint64_t>(v);
}

std::uint64_t high_bucket_size(const ParamSet& p, double gamma) {
  const double v = std::ceil(std::min(std::pow(1.0 / gamma, p.beta), kSaturated));
  if (v < 2) throw ParameterError("high-probability bucket size below 2; gamma too large");
  return static_cast<std::uint64_t>(v);
}

double additive_cap(const ParamSet& p, std::uint64_t N) {
  const double l = log_n(N);
  return p.additive_cap_coeff * l * l;
}

}  // namespace dpar
