#include <cmath>
#include <limits>
#include <stdexcept>

#include "efg/homotopy.hpp"

namespace efg {

bool jacobian(const ResidualFn& f, std::span<const double> x,
              std::span<const double> fx, Eigen::MatrixXd& out) {
  const std::size_t n = x.size();
  const std::size_t rows = fx.size();
  static const double kRootEps =
      std::sqrt(std::numeric_limits<double>::epsilon());
  out.resize(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(n));
  std::vector<double> xs(x.begin(), x.end());
  std::vector<double> fs(rows);
  for (std::size_t k = 0; k < n; ++k) {
    const double orig = xs[k];
    xs[k] = orig + kRootEps * (1.0 + std::abs(orig));
    const double h = xs[k] - orig;  // the step actually representable
    if (!f(xs, fs)) return false;
    for (std::size_t r = 0; r < rows; ++r) {
      out(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(k)) =
          (fs[r] - fx[r]) / h;
    }
    xs[k] = orig;
  }
  return true;
}

Eigen::MatrixXd jacobian(const ResidualFn& f, std::span<const double> x,
                         std::size_t rows) {
  std::vector<double> fx(rows);
  if (!f(x, fx)) throw std::domain_error("residual undefined at the state");
  Eigen::MatrixXd out;
  if (!jacobian(f, x, fx, out)) {
    throw std::domain_error("residual undefined near the state");
  }
  return out;
}

}  // namespace efg
