#include <cmath>
#include <random>
#include <stdexcept>

#include "efg/homotopy.hpp"

namespace efg {

const char* to_string(Method m) {
  return m == Method::kLogm ? "logm" : "cqpm";
}

const char* to_string(Refinement r) {
  return r == Refinement::kNash ? "nash" : "sgpe";
}

SolverConfig default_config(const Game& game) {
  SolverConfig c;
  c.beta0 = uniform_profile(game);
  c.beta_tilde0 = c.beta0;
  c.eta0 = c.beta0;
  for (double& x : c.eta0.flat()) x *= 0.5;
  return c;
}

void validate_config(const Game& game, const SolverConfig& c,
                     std::size_t dim) {
  auto interior = [&](const BehaviorProfile& b, const char* name) {
    if (b.size() != game.total_actions()) {
      throw std::invalid_argument(std::string(name) + " has the wrong size");
    }
    for (double x : b.flat()) {
      if (!(x > 0.0)) {
        throw std::invalid_argument(std::string(name) + " must be interior");
      }
    }
    if (simplex_defect(b) > 1e-10) {
      throw std::invalid_argument(std::string(name) + " is not a profile");
    }
  };
  interior(c.beta0, "beta0");
  interior(c.beta_tilde0, "beta_tilde0");
  if (c.eta0.size() != game.total_actions()) {
    throw std::invalid_argument("eta0 has the wrong size");
  }
  for (InfosetId i = 0; i < static_cast<InfosetId>(game.num_infosets()); ++i) {
    double tau = 0.0;
    for (double x : c.eta0[i]) {
      if (!(x > 0.0)) throw std::invalid_argument("eta0 must be positive");
      tau += x;
    }
    if (!(tau < 1.0)) throw std::invalid_argument("eta0 sums must be below 1");
  }
  if (!c.alpha.empty() && c.alpha.size() != dim) {
    throw std::invalid_argument("alpha has the wrong size");
  }
  if (!(c.t_min > 0.0 && c.t_min < 1.0)) {
    throw std::invalid_argument("t_min must lie in (0, 1)");
  }
  if (c.max_iters < 1 || c.newton_max < 1) {
    throw std::invalid_argument("iteration limits must be positive");
  }
}

std::vector<double> random_alpha(std::size_t dim, double norm,
                                 std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::vector<double> a(dim);
  double s = 0.0;
  for (double& x : a) {
    // Top 53 bits to a uniform double in [-1, 1).
    x = static_cast<double>(rng() >> 11) * 0x1.0p-52 - 1.0;
    s += x * x;
  }
  s = std::sqrt(s);
  if (s > 0.0) {
    for (double& x : a) x *= norm / s;
  }
  return a;
}

double max_step(const SolverConfig& c, double t) {
  return c.step_c * std::pow(10.0, c.step_p * std::log(t));
}

double corrector_tolerance(const SolverConfig& c, double t) {
  return c.step_c * std::pow(10.0, c.corr_p * std::log(t));
}

BehaviorProfile perturb(const BehaviorProfile& beta, double t,
                        const BehaviorProfile& eta0) {
  BehaviorProfile out = beta;
  const double w = t * t * (1.0 - t * t);
  for (std::size_t i = 0; i < beta.num_infosets(); ++i) {
    const auto id = static_cast<InfosetId>(i);
    auto eta = eta0[id];
    double tau = 0.0;
    for (double e : eta) tau += e;
    auto b = beta[id];
    auto o = out[id];
    for (std::size_t a = 0; a < b.size(); ++a) {
      o[a] = (1.0 - w * tau) * b[a] + w * eta[a];
    }
  }
  return out;
}

}  // namespace efg
