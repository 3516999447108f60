#include "efg/reach.hpp"

#include <algorithm>

namespace efg {

namespace {

constexpr auto kKeepAll = [](const Node&) { return false; };

}  // namespace

double omega(const Game& game, const ProfileView& profile, NodeId node) {
  return path_product(game, profile, game.root(), node, kKeepAll);
}

double omega_excluding(const Game& game, const ProfileView& profile,
                       InfosetId infoset, int /*action*/, NodeId node) {
  return path_product(game, profile, game.root(), node, [&](const Node& n) {
    return n.kind == NodeKind::kDecision && n.infoset == infoset;
  });
}

double omega_infoset(const Game& game, const ProfileView& profile,
                     InfosetId infoset) {
  double s = 0.0;
  for (NodeId h : game.infoset(infoset).members) s += omega(game, profile, h);
  return s;
}

double s_excluded(const Game& game, const ProfileView& profile,
                  PlayerId player, NodeId node) {
  return path_product(game, profile, game.root(), node, [&](const Node& n) {
    return n.kind == NodeKind::kDecision && n.owner == player;
  });
}

double s_excluded_infoset(const Game& game, const ProfileView& profile,
                          InfosetId infoset) {
  const PlayerId p = game.infoset(infoset).player;
  double s = 0.0;
  for (NodeId h : game.infoset(infoset).members) {
    s += s_excluded(game, profile, p, h);
  }
  return s;
}

std::vector<InfosetId> successor_infosets(const Game& game, InfosetId infoset,
                                          int action) {
  const PlayerId p = game.infoset(infoset).player;
  std::vector<InfosetId> out;
  for (InfosetId q : game.later_infosets(infoset)) {
    bool all = true;
    for (NodeId m : game.infoset(q).members) {
      // Walk up to the nearest own decision node; it must be in `infoset`
      // and the path must leave it through `action`.
      NodeId child = m;
      NodeId u = game.node(m).parent;
      while (u >= 0 && !(game.node(u).kind == NodeKind::kDecision &&
                         game.node(u).owner == p)) {
        child = u;
        u = game.node(u).parent;
      }
      if (u < 0 || game.node(u).infoset != infoset ||
          game.node(child).parent_action != action) {
        all = false;
        break;
      }
    }
    if (all) out.push_back(q);
  }
  return out;
}

std::vector<InfosetId> successor_infosets(const Game& game,
                                          InfosetId infoset) {
  std::vector<InfosetId> out;
  for (int a = 0; a < static_cast<int>(game.num_actions(infoset)); ++a) {
    for (InfosetId q : successor_infosets(game, infoset, a)) out.push_back(q);
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

SubgameKernels subgame_kernels(const Game& game, const ProfileView& profile,
                               PlayerId player, InfosetId infoset,
                               NodeId node) {
  const NodeId from = game.subgames().infoset_root[infoset];
  SubgameKernels k;
  k.c = path_product(game, profile, from, node, kKeepAll);
  k.c_excluding = path_product(game, profile, from, node, [&](const Node& n) {
    return n.kind == NodeKind::kDecision && n.infoset == infoset;
  });
  k.y = path_product(game, profile, from, node, [&](const Node& n) {
    return n.kind == NodeKind::kDecision && n.owner == player;
  });
  return k;
}

double subgame_c_infoset(const Game& game, const ProfileView& profile,
                         InfosetId infoset) {
  const PlayerId p = game.infoset(infoset).player;
  double s = 0.0;
  for (NodeId h : game.infoset(infoset).members) {
    s += subgame_kernels(game, profile, p, infoset, h).c;
  }
  return s;
}

double subgame_y_infoset(const Game& game, const ProfileView& profile,
                         InfosetId infoset) {
  const PlayerId p = game.infoset(infoset).player;
  double s = 0.0;
  for (NodeId h : game.infoset(infoset).members) {
    s += subgame_kernels(game, profile, p, infoset, h).y;
  }
  return s;
}

ReachTable::ReachTable(const Game& game, const ProfileView& profile)
    : stride_(game.num_nodes()),
      omega_(game.num_nodes(), 1.0),
      s_(game.num_nodes() * static_cast<std::size_t>(game.num_players()), 1.0) {
  const auto players = static_cast<std::size_t>(game.num_players());
  for (NodeId v = 1; v < static_cast<NodeId>(stride_); ++v) {
    const Node& c = game.node(v);
    const Node& parent = game.node(c.parent);
    const double f = move_prob(game, profile, c.parent, c.parent_action);
    omega_[v] = omega_[c.parent] * f;
    for (std::size_t p = 0; p < players; ++p) {
      const bool own = parent.kind == NodeKind::kDecision &&
                       parent.owner == static_cast<PlayerId>(p);
      s_[p * stride_ + v] = s_[p * stride_ + c.parent] * (own ? 1.0 : f);
    }
  }
}

}  // namespace efg
