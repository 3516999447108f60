// Equilibrium certificates and refutations.
#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "efg/belief.hpp"
#include "efg/game.hpp"
#include "efg/profile.hpp"

namespace efg {

struct InfosetCheck {
  InfosetId infoset = -1;
  std::vector<double> payoff;  // first block (or the single semi-sequential block)
  std::vector<double> lambda;
  double zeta = 0.0;
  std::vector<double> payoff_tilde;  // second block, conditional payoffs
  std::vector<double> lambda_tilde;
  double zeta_tilde = 0.0;
  std::vector<double> complementarity;
  std::vector<double> complementarity_tilde;
  std::vector<double> belief_residual;  // members, then simplex defect
  double worst = 0.0;
};

struct VerifyReport {
  std::string check;
  double tol = 0.0;
  bool pass = false;
  double max_residual = 0.0;
  double simplex_defect = 0.0;
  std::vector<InfosetCheck> infosets;
};

// 1e-6 scaled by (1 + max |u|).
double default_tolerance(const Game& game);

// Companion (β̃, μ) for β. Infosets whose reach (ω for Nash, subgame-rooted
// C for SGPE) is at most `reach_tol` count as unreached and get β̃ by
// backward induction over conditional payoffs, lowest-index argmax on ties.
std::pair<BehaviorProfile, BeliefSystem> construct_companion(
    const Game& game, const BehaviorProfile& beta, Refinement mode,
    double reach_tol = 0.0);

Assessment complete_assessment(const Game& game, const BehaviorProfile& beta,
                               Refinement mode, double reach_tol = 0.0);

VerifyReport check_nash(const Game& game, const Assessment& a, double tol);
VerifyReport check_sgpe(const Game& game, const Assessment& a, double tol);
VerifyReport check_semi_sequential(const Game& game,
                                   const BehaviorProfile& beta,
                                   const BeliefSystem& mu, double tol,
                                   Refinement mode);

struct Deviation {
  PlayerId player = -1;
  double gain = 0.0;
  std::vector<int> actions;  // one per infoset of the player, in index order
};

struct BruteForceResult {
  bool ok = true;
  Deviation worst;
};

// Tries every pure behavioral strategy of every player against β.
// Throws std::length_error when a player has more than `cap` of them.
BruteForceResult brute_force_nash_check(const Game& game,
                                        const BehaviorProfile& beta,
                                        double tol,
                                        std::uint64_t cap = 1'000'000);

std::string report_to_json(const Game& game, const VerifyReport& report);

}  // namespace efg
