#include "efg/verify.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

#include "efg/payoff.hpp"
#include "efg/reach.hpp"
#include "json.hpp"

namespace efg {

namespace {

void require_shapes(const Game& game, const Assessment& a) {
  if (a.beta.size() != game.total_actions() ||
      a.beta_tilde.size() != game.total_actions() ||
      a.mu.size() != game.total_members()) {
    throw std::invalid_argument("assessment dimensions do not match the game");
  }
}

// λ = max − value; returns the max.
double slacks(const std::vector<double>& values, std::vector<double>& lambda) {
  const double zeta = *std::max_element(values.begin(), values.end());
  lambda.resize(values.size());
  for (std::size_t a = 0; a < values.size(); ++a) lambda[a] = zeta - values[a];
  return zeta;
}

double max_abs(const std::vector<double>& v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

VerifyReport check_two_block(const Game& game, const Assessment& a, double tol,
                             Refinement mode) {
  require_shapes(game, a);
  VerifyReport r;
  r.check = mode == Refinement::kNash ? "nash" : "sgpe";
  r.tol = tol;
  const auto beliefs = belief_residual(game, a.beta, a.mu, mode);
  const Weighting outer =
      mode == Refinement::kNash ? Weighting::kReach : Weighting::kSubgame;
  for (InfosetId i = 0; i < static_cast<InfosetId>(game.num_infosets()); ++i) {
    const PlayerId p = game.infoset(i).player;
    const ProfileView view = splice_view(game, a.beta, a.beta_tilde, i);
    InfosetCheck c;
    c.infoset = i;
    c.payoff = action_payoffs(game, view, p, i, outer);
    c.zeta = slacks(c.payoff, c.lambda);
    c.payoff_tilde = action_payoffs(game, view, p, i, Weighting::kBelief, &a.mu);
    c.zeta_tilde = slacks(c.payoff_tilde, c.lambda_tilde);
    for (std::size_t k = 0; k < c.lambda.size(); ++k) {
      c.complementarity.push_back(a.beta[i][k] * c.lambda[k]);
      c.complementarity_tilde.push_back(a.beta_tilde[i][k] * c.lambda_tilde[k]);
    }
    c.belief_residual = beliefs[i];
    c.worst = std::max({max_abs(c.complementarity),
                        max_abs(c.complementarity_tilde),
                        max_abs(c.belief_residual)});
    r.max_residual = std::max(r.max_residual, c.worst);
    r.infosets.push_back(std::move(c));
  }
  r.simplex_defect = std::max({simplex_defect(a.beta),
                               simplex_defect(a.beta_tilde),
                               simplex_defect(a.mu)});
  r.pass = r.max_residual <= tol && r.simplex_defect <= tol;
  return r;
}

}  // namespace

double default_tolerance(const Game& game) {
  return 1e-6 * (1.0 + game.max_abs_payoff());
}

std::pair<BehaviorProfile, BeliefSystem> construct_companion(
    const Game& game, const BehaviorProfile& beta, Refinement mode,
    double reach_tol) {
  BeliefSystem mu = solve_beliefs(game, beta, mode);
  BehaviorProfile tilde = beta;
  std::vector<InfosetId> unreached;
  for (InfosetId i = 0; i < static_cast<InfosetId>(game.num_infosets()); ++i) {
    const double reach = mode == Refinement::kNash
                             ? omega_infoset(game, beta, i)
                             : subgame_c_infoset(game, beta, i);
    if (reach <= reach_tol) unreached.push_back(i);
  }
  // Deepest first, so every later own infoset is settled before its
  // predecessors read it through the splice.
  std::stable_sort(unreached.begin(), unreached.end(),
                   [&](InfosetId x, InfosetId y) {
                     return game.min_depth(x) > game.min_depth(y);
                   });
  for (InfosetId i : unreached) {
    const PlayerId p = game.infoset(i).player;
    const auto values = action_payoffs(
        game, splice_view(game, beta, tilde, i), p, i, Weighting::kBelief, &mu);
    const double best = *std::max_element(values.begin(), values.end());
    const double slack = 1e-12 * (1.0 + std::abs(best));
    auto out = tilde[i];
    std::fill(out.begin(), out.end(), 0.0);
    for (std::size_t k = 0; k < values.size(); ++k) {
      if (values[k] >= best - slack) {
        out[k] = 1.0;
        break;
      }
    }
  }
  return {std::move(tilde), std::move(mu)};
}

Assessment complete_assessment(const Game& game, const BehaviorProfile& beta,
                               Refinement mode, double reach_tol) {
  auto [tilde, mu] = construct_companion(game, beta, mode, reach_tol);
  return Assessment{beta, std::move(tilde), std::move(mu)};
}

VerifyReport check_nash(const Game& game, const Assessment& a, double tol) {
  return check_two_block(game, a, tol, Refinement::kNash);
}

VerifyReport check_sgpe(const Game& game, const Assessment& a, double tol) {
  return check_two_block(game, a, tol, Refinement::kSgpe);
}

VerifyReport check_semi_sequential(const Game& game,
                                   const BehaviorProfile& beta,
                                   const BeliefSystem& mu, double tol,
                                   Refinement mode) {
  if (beta.size() != game.total_actions() || mu.size() != game.total_members()) {
    throw std::invalid_argument("assessment dimensions do not match the game");
  }
  VerifyReport r;
  r.check = mode == Refinement::kNash ? "semiseq" : "sgpe-semiseq";
  r.tol = tol;
  const auto beliefs = belief_residual(game, beta, mu, mode);
  for (InfosetId i = 0; i < static_cast<InfosetId>(game.num_infosets()); ++i) {
    InfosetCheck c;
    c.infoset = i;
    c.payoff = action_payoffs(game, beta, game.infoset(i).player, i,
                              Weighting::kBelief, &mu);
    c.zeta = slacks(c.payoff, c.lambda);
    for (std::size_t k = 0; k < c.lambda.size(); ++k) {
      c.complementarity.push_back(c.lambda[k] > tol ? beta[i][k] : 0.0);
    }
    c.belief_residual = beliefs[i];
    c.worst = std::max(max_abs(c.complementarity), max_abs(c.belief_residual));
    r.max_residual = std::max(r.max_residual, c.worst);
    r.infosets.push_back(std::move(c));
  }
  r.simplex_defect = std::max(simplex_defect(beta), simplex_defect(mu));
  r.pass = r.max_residual <= tol && r.simplex_defect <= tol;
  return r;
}

BruteForceResult brute_force_nash_check(const Game& game,
                                        const BehaviorProfile& beta, double tol,
                                        std::uint64_t cap) {
  BruteForceResult result;
  result.worst.gain = -std::numeric_limits<double>::infinity();
  for (PlayerId p = 0; p < game.num_players(); ++p) {
    const auto& own = game.player_infosets(p);
    std::uint64_t count = 1;
    for (InfosetId i : own) {
      count *= game.num_actions(i);
      if (count > cap) {
        throw std::length_error("player " + std::to_string(p + 1) +
                                " has more than " + std::to_string(cap) +
                                " pure strategies");
      }
    }
    const double base = expected_payoff(game, beta, p);
    BehaviorProfile trial = beta;
    std::vector<int> choice(own.size(), 0);
    for (std::uint64_t s = 0; s < count; ++s) {
      for (std::size_t k = 0; k < own.size(); ++k) {
        auto v = trial[own[k]];
        std::fill(v.begin(), v.end(), 0.0);
        v[choice[k]] = 1.0;
      }
      const double gain = expected_payoff(game, trial, p) - base;
      if (gain > result.worst.gain) {
        result.worst = Deviation{p, gain, choice};
      }
      for (std::size_t k = 0; k < own.size(); ++k) {
        if (++choice[k] < static_cast<int>(game.num_actions(own[k]))) break;
        choice[k] = 0;
      }
    }
  }
  result.ok = result.worst.gain <= tol;
  return result;
}

std::string report_to_json(const Game& game, const VerifyReport& report) {
  using nlohmann::json;
  json doc;
  doc["check"] = report.check;
  doc["verdict"] = report.pass ? "pass" : "fail";
  doc["tolerance"] = report.tol;
  doc["max_residual"] = report.max_residual;
  doc["simplex_defect"] = report.simplex_defect;
  json infosets = json::object();
  const InfosetCheck* worst = nullptr;
  for (const auto& c : report.infosets) {
    json e;
    e["player"] = game.infoset(c.infoset).player + 1;
    e["payoff"] = c.payoff;
    e["lambda"] = c.lambda;
    e["zeta"] = c.zeta;
    e["complementarity"] = c.complementarity;
    if (!c.payoff_tilde.empty()) {
      e["payoff_tilde"] = c.payoff_tilde;
      e["lambda_tilde"] = c.lambda_tilde;
      e["zeta_tilde"] = c.zeta_tilde;
      e["complementarity_tilde"] = c.complementarity_tilde;
    }
    e["belief_residual"] = c.belief_residual;
    e["worst"] = c.worst;
    infosets[game.infoset(c.infoset).id] = std::move(e);
    if (!worst || c.worst > worst->worst) worst = &c;
  }
  doc["infosets"] = std::move(infosets);
  if (worst) doc["worst_infoset"] = game.infoset(worst->infoset).id;
  return doc.dump(1) + "\n";
}

}  // namespace efg
