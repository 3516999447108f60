// Reach-probability kernels over histories and infosets.
#pragma once

#include <vector>

#include "efg/game.hpp"
#include "efg/profile.hpp"

namespace efg {

// Probability of the action taken at `node` towards its `action`-th child.
inline double move_prob(const Game& game, const ProfileView& profile,
                        NodeId node, int action) {
  const Node& n = game.node(node);
  return n.kind == NodeKind::kChance ? n.chance_probs[action]
                                     : profile[n.infoset][action];
}

// Product of move probabilities on the path from `from` (inclusive) down to
// `node` (exclusive); `from` must be an ancestor-or-self of `node`.
template <class Skip>
double path_product(const Game& game, const ProfileView& profile, NodeId from,
                    NodeId node, Skip&& skip) {
  double p = 1.0;
  for (NodeId v = node; v != from;) {
    const Node& c = game.node(v);
    const NodeId u = c.parent;
    if (!skip(game.node(u))) p *= move_prob(game, profile, u, c.parent_action);
    v = u;
  }
  return p;
}

// ω(h|β).
double omega(const Game& game, const ProfileView& profile, NodeId node);

// ω(h|a,β^{-I}): factors at ancestors lying in `infoset` are skipped. The
// action is not checked against the path; callers restrict the domain.
double omega_excluding(const Game& game, const ProfileView& profile,
                       InfosetId infoset, int action, NodeId node);

double omega_infoset(const Game& game, const ProfileView& profile,
                     InfosetId infoset);

// S^i(h|β): the reach product without the factors of `player`.
double s_excluded(const Game& game, const ProfileView& profile,
                  PlayerId player, NodeId node);

// S^i(I|β) with i the owner of the infoset.
double s_excluded_infoset(const Game& game, const ProfileView& profile,
                          InfosetId infoset);

// M(a, I).
std::vector<InfosetId> successor_infosets(const Game& game, InfosetId infoset,
                                          int action);
// M(I), the union over actions.
std::vector<InfosetId> successor_infosets(const Game& game, InfosetId infoset);

struct SubgameKernels {
  double c = 0.0;            // C^i_I(h|β), from the infoset's subgame root
  double c_excluding = 0.0;  // same with the infoset's own factors skipped
  double y = 0.0;            // Y^i(h|β), player's own factors skipped
};

// Kernels along `node`, measured from the root of the smallest subgame
// containing `infoset`. That root must be an ancestor-or-self of `node`.
SubgameKernels subgame_kernels(const Game& game, const ProfileView& profile,
                               PlayerId player, InfosetId infoset, NodeId node);

// Σ over members of C and of Y, with Y taken for the infoset's owner.
double subgame_c_infoset(const Game& game, const ProfileView& profile,
                         InfosetId infoset);
double subgame_y_infoset(const Game& game, const ProfileView& profile,
                         InfosetId infoset);

// Reach and own-move-excluded reach of every node under one profile,
// computed in a single preorder sweep.
class ReachTable {
 public:
  ReachTable(const Game& game, const ProfileView& profile);
  double omega(NodeId v) const { return omega_[v]; }
  double s_excluded(PlayerId p, NodeId v) const {
    return s_[static_cast<std::size_t>(p) * stride_ + v];
  }

 private:
  std::size_t stride_;
  std::vector<double> omega_;
  std::vector<double> s_;
};

}  // namespace efg
