#pragma once

#include <span>

namespace dpar {

struct LossBounds {
  double f = 0, g = 0;              // upper recursion and its closed form
  double f_prime = 0, g_prime = 0;  // lower recursion and its closed form
};

// f(Z,i) = (1+g_i) f(Z,i-1) + g_i against Z prod(1+2g) + sum 2g, and the
// mirrored lower pair. Requires every g_i >= 0 and sum g_i <= 1/2.
LossBounds iterative_loss_bound(std::span<const double> gammas, double z);

}  // namespace dpar
