#include <algorithm>
#include <array>
#include <cmath>

#include <Eigen/QR>

#include "efg/payoff.hpp"
#include "efg/reach.hpp"
#include "efg/tracer.hpp"
#include "efg/verify.hpp"

namespace efg {

namespace {

VerifyReport run_check(const Game& game, const Assessment& a, Refinement r,
                       double tol) {
  return r == Refinement::kNash ? check_nash(game, a, tol)
                                : check_sgpe(game, a, tol);
}

double score(const Game& game, const Assessment& a, Refinement r) {
  const VerifyReport rep = run_check(game, a, r, 0.0);
  return std::max(rep.max_residual, rep.simplex_defect);
}

// Support-restricted first-block equalities. Unknowns are β on each support.
class SupportSystem {
 public:
  SupportSystem(const Game& game, const Assessment& base, Refinement r,
                std::vector<std::vector<int>> support)
      : game_(game), base_(base), support_(std::move(support)) {
    outer_ = r == Refinement::kNash ? Weighting::kReach : Weighting::kSubgame;
    for (const auto& s : support_) size_ += s.size();
  }

  std::size_t size() const { return size_; }

  BehaviorProfile profile(std::span<const double> x) const {
    BehaviorProfile b = base_.beta;
    for (double& v : b.flat()) v = 0.0;
    std::size_t k = 0;
    for (std::size_t i = 0; i < support_.size(); ++i) {
      auto row = b[static_cast<InfosetId>(i)];
      for (int a : support_[i]) row[a] = x[k++];
    }
    return b;
  }

  bool operator()(std::span<const double> x, std::span<double> out) const {
    const BehaviorProfile b = profile(x);
    std::size_t r = 0;
    for (std::size_t i = 0; i < support_.size(); ++i) {
      const auto id = static_cast<InfosetId>(i);
      const auto& s = support_[i];
      const ProfileView view = splice_view(game_, b, base_.beta_tilde, id);
      const auto u =
          action_payoffs(game_, view, game_.infoset(id).player, id, outer_);
      double sum = 0.0;
      for (int a : s) sum += b[id][a];
      for (std::size_t k = 1; k < s.size(); ++k) out[r++] = u[s[k]] - u[s[0]];
      out[r++] = sum - 1.0;
    }
    return true;
  }

 private:
  const Game& game_;
  const Assessment& base_;
  std::vector<std::vector<int>> support_;
  Weighting outer_;
  std::size_t size_ = 0;
};

std::optional<BehaviorProfile> newton_on_support(const Game& game,
                                                 const Assessment& base,
                                                 Refinement r,
                                                 double threshold) {
  std::vector<std::vector<int>> support(game.num_infosets());
  std::vector<double> x;
  for (std::size_t i = 0; i < support.size(); ++i) {
    const auto row = base.beta[static_cast<InfosetId>(i)];
    for (std::size_t a = 0; a < row.size(); ++a) {
      if (row[a] > threshold) support[i].push_back(static_cast<int>(a));
    }
    if (support[i].empty()) {
      support[i].push_back(static_cast<int>(
          std::max_element(row.begin(), row.end()) - row.begin()));
    }
    for (int a : support[i]) x.push_back(row[a]);
  }
  const SupportSystem sys(game, base, r, support);
  const ResidualFn f = [&sys](std::span<const double> xx,
                              std::span<double> out) { return sys(xx, out); };
  const auto n = static_cast<Eigen::Index>(x.size());
  const double tol = 1e-14 * (1.0 + game.max_abs_payoff());
  std::vector<double> fx(x.size());
  f(x, fx);
  for (int it = 0; it < 30; ++it) {
    const Eigen::Map<Eigen::VectorXd> fv(fx.data(), n);
    if (fv.norm() <= tol) break;
    Eigen::MatrixXd j;
    if (!jacobian(f, x, fx, j)) return std::nullopt;
    // Minimum-norm step: rows vanish at unreached infosets, so the support
    // system is rank deficient on equilibrium continua.
    const Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXd> cod(j);
    const Eigen::VectorXd step = cod.solve(-fv);
    if (!step.allFinite()) return std::nullopt;
    for (Eigen::Index k = 0; k < n; ++k) x[k] += step[k];
    f(x, fx);
    if (step.norm() <= 1e-15) break;
  }
  for (double v : x) {
    if (v < -1e-12) return std::nullopt;
  }
  BehaviorProfile b = sys.profile(x);
  for (double& v : b.flat()) v = std::max(v, 0.0);
  normalize(b);
  return b;
}

}  // namespace

std::optional<Assessment> polish_endpoint(const Game& game,
                                          const Assessment& endpoint,
                                          Refinement refinement) {
  double best = score(game, endpoint, refinement);
  std::optional<Assessment> out;
  for (double threshold : {1e-3, 1e-4, 1e-2}) {
    auto beta = newton_on_support(game, endpoint, refinement, threshold);
    if (!beta) continue;
    Assessment kept;
    kept.beta = *beta;
    kept.beta_tilde = endpoint.beta_tilde;
    kept.mu = solve_beliefs(game, kept.beta, refinement, &endpoint.mu);
    std::array<Assessment, 2> cands{
        std::move(kept), complete_assessment(game, *beta, refinement)};
    for (Assessment& cand : cands) {
      const double s = score(game, cand, refinement);
      if (s < best) {
        best = s;
        out = std::move(cand);
      }
    }
  }
  return out;
}

EndpointCheck check_endpoint(const Game& game, const Assessment& endpoint,
                             Refinement refinement, double t_min) {
  EndpointCheck out;
  out.tol = std::max(1e-5, 10.0 * t_min * (1.0 + game.max_abs_payoff()));
  const VerifyReport own = run_check(game, endpoint, refinement, out.tol);
  out.pass = own.pass;
  out.max_residual = own.max_residual;
  if (own.pass) return out;
  const Assessment comp = complete_assessment(game, endpoint.beta, refinement);
  const VerifyReport rep = run_check(game, comp, refinement, out.tol);
  if (rep.pass || rep.max_residual < out.max_residual) {
    out.pass = rep.pass;
    out.max_residual = rep.max_residual;
    out.used_companion = true;
  }
  return out;
}

}  // namespace efg
