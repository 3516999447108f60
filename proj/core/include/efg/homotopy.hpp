// Log-barrier (LOGM) and convex-quadratic-penalty (CQPM) homotopy systems.
#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "efg/belief.hpp"
#include "efg/game.hpp"
#include "efg/profile.hpp"

namespace efg {

enum class Method { kLogm, kCqpm };

const char* to_string(Method m);
const char* to_string(Refinement r);

struct SolverConfig {
  BehaviorProfile beta0;
  BehaviorProfile beta_tilde0;
  BehaviorProfile eta0;
  std::vector<double> alpha;  // empty means zero
  double step_c = 0.1;
  double step_p = 0.2;
  double corr_p = 0.5;
  double t_min = 1e-5;
  std::int64_t max_iters = 100000;
  int newton_max = 20;
  int max_halvings = 12;
  int max_damping = 8;
  double max_seconds = 0.0;  // 0 disables the wall-clock limit
  bool polish = false;
};

// Uniform β⁰ and β̃⁰; η⁰(a) = 0.5/|A(I)| so that τ(η⁰) = 0.5.
SolverConfig default_config(const Game& game);

// Throws std::invalid_argument when the config breaks its invariants.
void validate_config(const Game& game, const SolverConfig& config,
                     std::size_t dim);

// Random perturbation vector of Euclidean norm `norm`.
std::vector<double> random_alpha(std::size_t dim, double norm,
                                 std::uint64_t seed);

// Predictor step cap and corrector accuracy at parameter t.
double max_step(const SolverConfig& config, double t);
double corrector_tolerance(const SolverConfig& config, double t);

inline double phi1(double v) {
  const double p = (v + std::abs(v)) / 2.0;
  return p * p;
}
inline double phi2(double v) {
  const double n = (v - std::abs(v)) / 2.0;
  return n * n;
}

// ϖ(β, t).
BehaviorProfile perturb(const BehaviorProfile& beta, double t,
                        const BehaviorProfile& eta0);

struct HomotopyState {
  Method method = Method::kLogm;
  Refinement refinement = Refinement::kNash;
  double t = 1.0;
  // LOGM: [β | β̃ | μ | ξ]. CQPM: [z | z̃ | μ | w].
  std::vector<double> x;
};

class EquilibriumSystem {
 public:
  EquilibriumSystem(const Game& game, const SolverConfig& config,
                    Method method, Refinement refinement);

  std::size_t dim() const { return 2 * m_ + 2 * p_; }
  std::size_t num_actions() const { return m_; }
  std::size_t num_members() const { return p_; }
  Method method() const { return method_; }
  Refinement refinement() const { return refinement_; }
  const Game& game() const { return *game_; }
  const SolverConfig& config() const { return *config_; }

  // Writes the residual at (x, t). Returns false if a LOGM coordinate in
  // β, β̃ or ξ is not strictly positive.
  bool residual(std::span<const double> x, double t,
                std::span<double> out) const;

  HomotopyState start_point() const;

  // Decoded (β, β̃, μ); CQPM coordinates pass through φ₁.
  Assessment assessment(std::span<const double> x) const;
  // ξ per member, flat.
  std::vector<double> xi(std::span<const double> x) const;

  // Columns written to path traces after the fixed leading fields.
  std::vector<std::string> coordinate_names() const;
  void coordinates(std::span<const double> x, std::vector<double>& out) const;

 private:
  const Game* game_;
  const SolverConfig* config_;
  Method method_;
  Refinement refinement_;
  std::size_t m_;
  std::size_t p_;
  std::vector<double> xi0_;
};

// Residuals of a full state; the LOGM form throws std::domain_error on a
// non-positive coordinate.
std::vector<double> residual_logm(const Game& game, const HomotopyState& s,
                                  const SolverConfig& config);
std::vector<double> residual_cqpm(const Game& game, const HomotopyState& s,
                                  const SolverConfig& config);
HomotopyState start_point(const Game& game, const SolverConfig& config,
                          Method method, Refinement refinement);

using ResidualFn =
    std::function<bool(std::span<const double>, std::span<double>)>;

// Forward differences with step √ε·(1 + |x_k|). `fx` is f(x). Returns false
// if the residual fails at a shifted point.
bool jacobian(const ResidualFn& f, std::span<const double> x,
              std::span<const double> fx, Eigen::MatrixXd& out);
Eigen::MatrixXd jacobian(const ResidualFn& f, std::span<const double> x,
                         std::size_t rows);

}  // namespace efg
