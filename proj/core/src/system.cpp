#include <cmath>
#include <stdexcept>

#include "efg/homotopy.hpp"
#include "efg/payoff.hpp"

namespace efg {

EquilibriumSystem::EquilibriumSystem(const Game& game,
                                     const SolverConfig& config, Method method,
                                     Refinement refinement)
    : game_(&game),
      config_(&config),
      method_(method),
      refinement_(refinement),
      m_(game.total_actions()),
      p_(game.total_members()) {
  validate_config(game, config, dim());
  // ξ⁰(h) = kernel(h|β⁰) / kernel(I|β⁰).
  const BeliefSystem start = solve_beliefs(game, config.beta0, refinement);
  xi0_.assign(start.flat().begin(), start.flat().end());
}

HomotopyState EquilibriumSystem::start_point() const {
  HomotopyState s;
  s.method = method_;
  s.refinement = refinement_;
  s.t = 1.0;
  s.x.resize(dim());
  auto b0 = config_->beta0.flat();
  auto bt0 = config_->beta_tilde0.flat();
  const bool logm = method_ == Method::kLogm;
  for (std::size_t k = 0; k < m_; ++k) {
    s.x[k] = logm ? b0[k] : std::sqrt(b0[k]);
    s.x[m_ + k] = logm ? bt0[k] : std::sqrt(bt0[k]);
  }
  for (std::size_t k = 0; k < p_; ++k) {
    s.x[2 * m_ + k] = xi0_[k];
    s.x[2 * m_ + p_ + k] = logm ? xi0_[k] : std::sqrt(xi0_[k]);
  }
  return s;
}

Assessment EquilibriumSystem::assessment(std::span<const double> x) const {
  const Game& g = *game_;
  std::vector<double> beta(x.begin(), x.begin() + m_);
  std::vector<double> tilde(x.begin() + m_, x.begin() + 2 * m_);
  std::vector<double> mu(x.begin() + 2 * m_, x.begin() + 2 * m_ + p_);
  if (method_ == Method::kCqpm) {
    for (double& v : beta) v = phi1(v);
    for (double& v : tilde) v = phi1(v);
  }
  return Assessment{make_profile(g, std::move(beta)),
                    make_profile(g, std::move(tilde)),
                    make_beliefs(g, std::move(mu))};
}

std::vector<double> EquilibriumSystem::xi(std::span<const double> x) const {
  std::vector<double> out(x.begin() + 2 * m_ + p_, x.begin() + 2 * m_ + 2 * p_);
  if (method_ == Method::kCqpm) {
    for (double& v : out) v = phi1(v);
  }
  return out;
}

std::vector<std::string> EquilibriumSystem::coordinate_names() const {
  const Game& g = *game_;
  std::vector<std::string> actions, members;
  for (const Infoset& is : g.infosets()) {
    for (const auto& l : is.labels) actions.push_back(is.id + ":" + l);
    for (NodeId m : is.members) members.push_back(is.id + ":" + g.node(m).id);
  }
  std::vector<std::string> out;
  auto add = [&](const char* prefix, const std::vector<std::string>& names) {
    for (const auto& n : names) out.push_back(std::string(prefix) + "[" + n + "]");
  };
  add("beta", actions);
  add("beta_tilde", actions);
  if (method_ == Method::kLogm) {
    add("mu", members);
    add("xi", members);
  } else {
    add("z", actions);
    add("z_tilde", actions);
    add("mu", members);
    add("w", members);
  }
  return out;
}

void EquilibriumSystem::coordinates(std::span<const double> x,
                                    std::vector<double>& out) const {
  out.clear();
  if (method_ == Method::kLogm) {
    out.assign(x.begin(), x.begin() + dim());
    return;
  }
  for (std::size_t k = 0; k < 2 * m_; ++k) out.push_back(phi1(x[k]));
  out.insert(out.end(), x.begin(), x.begin() + dim());
}

bool EquilibriumSystem::residual(std::span<const double> x, double t,
                                 std::span<double> out) const {
  const Game& g = *game_;
  const SolverConfig& c = *config_;
  const bool logm = method_ == Method::kLogm;
  const auto& aoff = *g.action_offsets();
  const auto& moff = *g.member_offsets();
  const std::size_t k_sets = g.num_infosets();

  std::vector<double> beta(x.begin(), x.begin() + m_);
  std::vector<double> tilde(x.begin() + m_, x.begin() + 2 * m_);
  std::vector<double> xi(x.begin() + 2 * m_ + p_, x.begin() + 2 * m_ + 2 * p_);
  std::vector<double> lam, lam_t, rho;
  if (logm) {
    for (double v : beta) if (!(v > 0.0)) return false;
    for (double v : tilde) if (!(v > 0.0)) return false;
    for (double v : xi) if (!(v > 0.0)) return false;
  } else {
    lam.resize(m_);
    lam_t.resize(m_);
    rho.resize(p_);
    for (std::size_t k = 0; k < m_; ++k) {
      lam[k] = phi2(beta[k]);
      beta[k] = phi1(beta[k]);
      lam_t[k] = phi2(tilde[k]);
      tilde[k] = phi1(tilde[k]);
    }
    for (std::size_t k = 0; k < p_; ++k) {
      rho[k] = phi2(xi[k]);
      xi[k] = phi1(xi[k]);
    }
  }
  const double* mu = x.data() + 2 * m_;
  const BehaviorProfile b = make_profile(g, std::move(beta));
  const BehaviorProfile bt = make_profile(g, std::move(tilde));
  const BeliefSystem mus = make_beliefs(
      g, std::vector<double>(mu, mu + p_));
  const BehaviorProfile pb = perturb(b, t, c.eta0);
  const auto b0 = c.beta0.flat();
  const auto bt0 = c.beta_tilde0.flat();

  const Weighting outer =
      refinement_ == Refinement::kNash ? Weighting::kReach : Weighting::kSubgame;
  std::size_t r1 = 0;
  std::size_t r2 = m_ - k_sets;
  std::size_t r3 = 2 * (m_ - k_sets);
  std::size_t r4 = r3 + (p_ - k_sets);
  std::size_t rn = r4 + p_;

  for (InfosetId i = 0; i < static_cast<InfosetId>(k_sets); ++i) {
    const Infoset& is = g.infoset(i);
    const PlayerId owner = is.player;
    const ProfileView view(pb, bt, g.later_mask(i));
    const auto u1 = action_payoffs(g, view, owner, i, outer);
    const auto u2 = action_payoffs(g, view, owner, i, Weighting::kBelief, &mus);
    const std::size_t a0 = aoff[i];
    const std::size_t na = aoff[i + 1] - a0;
    const auto bi = b[i];
    const auto bti = bt[i];

    if (logm) {
      double sb = 0.0, ub = 0.0, sbt = 0.0, ubt = 0.0;
      for (std::size_t a = 0; a < na; ++a) {
        sb += bi[a];
        ub += bi[a] * u1[a];
        sbt += bti[a];
        ubt += bti[a] * u2[a];
      }
      for (std::size_t a = 1; a < na; ++a) {
        out[r1++] = (1.0 - t) * bi[a] * (u1[a] * sb - ub) +
                    t * (b0[a0 + a] * sb - bi[a]);
        out[r2++] = (1.0 - t) * bti[a] * (u2[a] * sbt - ubt) +
                    t * (bt0[a0 + a] * sbt - bti[a]);
      }
    } else {
      for (std::size_t a = 1; a < na; ++a) {
        out[r1++] = (1.0 - t) * (u1[a] - u1[0]) + lam[a0 + a] - lam[a0] -
                    t * (bi[a] - bi[0] - (b0[a0 + a] - b0[a0]));
        out[r2++] = (1.0 - t) * (u2[a] - u2[0]) + lam_t[a0 + a] - lam_t[a0] -
                    t * (bti[a] - bti[0] - (bt0[a0 + a] - bt0[a0]));
      }
    }

    const std::size_t h0 = moff[i];
    const std::size_t nh = moff[i + 1] - h0;
    if (logm) {
      double sx = 0.0, sx0 = 0.0;
      for (std::size_t h = 0; h < nh; ++h) {
        sx += xi[h0 + h];
        sx0 += xi0_[h0 + h];
      }
      for (std::size_t h = 1; h < nh; ++h) {
        out[r3++] = xi0_[h0 + h] * sx - xi[h0 + h] * sx0;
      }
    } else {
      for (std::size_t h = 1; h < nh; ++h) {
        out[r3++] = rho[h0 + h] - rho[h0] -
                    t * (xi[h0 + h] - xi[h0] - (xi0_[h0 + h] - xi0_[h0]));
      }
    }

    std::vector<double> kern(nh);
    double ktot = 0.0;
    for (std::size_t h = 0; h < nh; ++h) {
      kern[h] = belief_kernel(g, pb, refinement_, i, is.members[h]);
      ktot += kern[h];
    }
    double smu = 0.0;
    for (std::size_t h = 0; h < nh; ++h) {
      out[r4++] = ((1.0 - t) * ktot + t) * mu[h0 + h] - xi[h0 + h] -
                  (1.0 - t) * kern[h];
      smu += mu[h0 + h];
    }

    double sb = 0.0, sbt = 0.0;
    for (std::size_t a = 0; a < na; ++a) {
      sb += bi[a];
      sbt += bti[a];
    }
    out[rn + i] = sb - 1.0;
    out[rn + k_sets + i] = sbt - 1.0;
    out[rn + 2 * k_sets + i] = smu - 1.0;
  }

  if (!c.alpha.empty()) {
    const double w = t * (1.0 - t);
    for (std::size_t k = 0; k < dim(); ++k) out[k] -= w * c.alpha[k];
  }
  return true;
}

std::vector<double> residual_logm(const Game& game, const HomotopyState& s,
                                  const SolverConfig& config) {
  EquilibriumSystem sys(game, config, Method::kLogm, s.refinement);
  if (s.x.size() != sys.dim()) throw std::invalid_argument("state size");
  std::vector<double> out(sys.dim());
  if (!sys.residual(s.x, s.t, out)) {
    throw std::domain_error("non-positive barrier coordinate");
  }
  return out;
}

std::vector<double> residual_cqpm(const Game& game, const HomotopyState& s,
                                  const SolverConfig& config) {
  EquilibriumSystem sys(game, config, Method::kCqpm, s.refinement);
  if (s.x.size() != sys.dim()) throw std::invalid_argument("state size");
  std::vector<double> out(sys.dim());
  sys.residual(s.x, s.t, out);
  return out;
}

HomotopyState start_point(const Game& game, const SolverConfig& config,
                          Method method, Refinement refinement) {
  return EquilibriumSystem(game, config, method, refinement).start_point();
}

}  // namespace efg
