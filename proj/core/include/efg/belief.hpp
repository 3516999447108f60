// Self-independent belief systems.
#pragma once

#include <vector>

#include "efg/game.hpp"
#include "efg/profile.hpp"

namespace efg {

enum class Refinement { kNash, kSgpe };

// Kernel weight of a member history: S^i(h|β) for Nash, Y^i(h|β) measured
// from the infoset's subgame root for SGPE.
double belief_kernel(const Game& game, const ProfileView& profile,
                     Refinement mode, InfosetId infoset, NodeId member);

// μ(h) = kernel(h) / kernel(I) wherever kernel(I) > 0; elsewhere the fill
// vector (uniform when `fill` is null).
BeliefSystem solve_beliefs(const Game& game, const ProfileView& profile,
                           Refinement mode,
                           const BeliefSystem* fill = nullptr);

// Per infoset: kernel(I)·μ(h) − kernel(h) for every member, followed by the
// simplex defect Σμ − 1.
std::vector<std::vector<double>> belief_residual(const Game& game,
                                                 const ProfileView& profile,
                                                 const BeliefSystem& mu,
                                                 Refinement mode);

}  // namespace efg
