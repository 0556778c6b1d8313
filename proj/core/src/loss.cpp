#include "dpar/loss.hpp"

#include "dpar/errors.hpp"

namespace dpar {

LossBounds iterative_loss_bound(std::span<const double> gammas, double z) {
  long double total = 0;
  for (double gi : gammas) {
    if (!(gi >= 0)) throw ParameterError("iterative_loss_bound: negative gamma");
    total += gi;
  }
  if (total > 0.5L) throw ParameterError("iterative_loss_bound: gammas sum above 1/2");

  long double f = z, fp = z, up = z, down = z, add = 0;
  for (double gi : gammas) {
    const long double g = gi;
    f = (1 + g) * f + g;
    fp = (1 - g) * fp - g;
    up *= 1 + 2 * g;
    down *= 1 - 2 * g;
    add += 2 * g;
  }
  LossBounds out;
  out.f = static_cast<double>(f);
  out.f_prime = static_cast<double>(fp);
  out.g = static_cast<double>(up + add);
  out.g_prime = static_cast<double>(down - add);
  return out;
}

}  // namespace dpar
