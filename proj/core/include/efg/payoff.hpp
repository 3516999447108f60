// Expected, infoset-restricted and belief-conditional payoffs.
#pragma once

#include <optional>
#include <vector>

#include "efg/game.hpp"
#include "efg/profile.hpp"

namespace efg {

// ϱ^i_I(β, β̃): the owner's infosets lying after `infoset` take β̃.
BehaviorProfile splice(const Game& game, const BehaviorProfile& beta,
                       const BehaviorProfile& beta_tilde, InfosetId infoset);

// Same splice without copying.
inline ProfileView splice_view(const Game& game, const BehaviorProfile& beta,
                               const BehaviorProfile& beta_tilde,
                               InfosetId infoset) {
  return ProfileView(beta, beta_tilde, game.later_mask(infoset));
}

double expected_payoff(const Game& game, const ProfileView& profile,
                       PlayerId player);

// Expected payoff of `player` over the subtree below `node`, with reach
// measured from `node`.
double subtree_value(const Game& game, const ProfileView& profile,
                     PlayerId player, NodeId node);

// How member histories of an infoset are weighted when action values are
// aggregated.
enum class Weighting {
  kReach,    // ω(h|β): payoffs u((a,β^{-I})∧I)
  kBelief,   // μ(h): conditional payoffs u(a,β^{-I},μ|I)
  kSubgame,  // C(h|β) from the subgame root: payoffs u((a,β^{-I})◊I)
};

// Value of every action of `infoset` for `player`, the infoset's own factor
// skipped. `mu` is required for kBelief.
std::vector<double> action_payoffs(const Game& game, const ProfileView& profile,
                                   PlayerId player, InfosetId infoset,
                                   Weighting weighting,
                                   const BeliefSystem* mu = nullptr);

// u(β∧I) without an action, u((a,β^{-I})∧I) with one.
double payoff_through(const Game& game, const ProfileView& profile,
                      PlayerId player, InfosetId infoset,
                      std::optional<int> action = std::nullopt);

// ν_I(h|β,μ) for a terminal node; 0 when no member of `infoset` precedes it
// or, with an action, when the path leaves the infoset by another action.
double conditional_weight(const Game& game, const ProfileView& profile,
                          const BeliefSystem& mu, InfosetId infoset,
                          NodeId terminal,
                          std::optional<int> action = std::nullopt);

double conditional_payoff(const Game& game, const ProfileView& profile,
                          const BeliefSystem& mu, PlayerId player,
                          InfosetId infoset,
                          std::optional<int> action = std::nullopt);

// u(β◊I) / u((a,β^{-I})◊I): as payoff_through with subgame-rooted reach.
double subgame_conditional_payoff(const Game& game, const ProfileView& profile,
                                  PlayerId player, InfosetId infoset,
                                  std::optional<int> action = std::nullopt);

}  // namespace efg
