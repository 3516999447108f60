#include "efg/payoff.hpp"

#include <algorithm>
#include <stdexcept>

#include "efg/reach.hpp"

namespace efg {

BehaviorProfile splice(const Game& game, const BehaviorProfile& beta,
                       const BehaviorProfile& beta_tilde, InfosetId infoset) {
  BehaviorProfile out = beta;
  for (InfosetId q : game.later_infosets(infoset)) {
    auto src = beta_tilde[q];
    std::copy(src.begin(), src.end(), out[q].begin());
  }
  return out;
}

double subtree_value(const Game& game, const ProfileView& profile,
                     PlayerId player, NodeId node) {
  const Node& n = game.node(node);
  if (n.kind == NodeKind::kTerminal) return n.payoffs[player];
  double s = 0.0;
  for (std::size_t k = 0; k < n.children.size(); ++k) {
    const double p = move_prob(game, profile, node, static_cast<int>(k));
    if (p != 0.0) s += p * subtree_value(game, profile, player, n.children[k]);
  }
  return s;
}

double expected_payoff(const Game& game, const ProfileView& profile,
                       PlayerId player) {
  return subtree_value(game, profile, player, game.root());
}

std::vector<double> action_payoffs(const Game& game, const ProfileView& profile,
                                   PlayerId player, InfosetId infoset,
                                   Weighting weighting,
                                   const BeliefSystem* mu) {
  const Infoset& is = game.infoset(infoset);
  if (weighting == Weighting::kBelief && !mu) {
    throw std::invalid_argument("belief weighting needs a belief system");
  }
  const NodeId sub_root = game.subgames().infoset_root[infoset];
  std::vector<double> out(is.labels.size(), 0.0);
  for (std::size_t m = 0; m < is.members.size(); ++m) {
    const NodeId h = is.members[m];
    double w = 0.0;
    switch (weighting) {
      case Weighting::kReach:
        w = omega(game, profile, h);
        break;
      case Weighting::kBelief:
        w = (*mu)[infoset][m];
        break;
      case Weighting::kSubgame:
        w = path_product(game, profile, sub_root, h,
                         [](const Node&) { return false; });
        break;
    }
    if (w == 0.0) continue;
    const Node& node = game.node(h);
    for (std::size_t a = 0; a < out.size(); ++a) {
      out[a] += w * subtree_value(game, profile, player, node.children[a]);
    }
  }
  return out;
}

namespace {

double aggregate(const ProfileView& profile, InfosetId infoset, const std::vector<double>& values,
                 std::optional<int> action) {
  if (action) return values.at(*action);
  auto beta = profile[infoset];
  double s = 0.0;
  for (std::size_t a = 0; a < values.size(); ++a) s += beta[a] * values[a];
  return s;
}

}  // namespace

double payoff_through(const Game& game, const ProfileView& profile,
                      PlayerId player, InfosetId infoset,
                      std::optional<int> action) {
  return aggregate(profile, infoset,
                   action_payoffs(game, profile, player, infoset,
                                  Weighting::kReach),
                   action);
}

double conditional_weight(const Game& game, const ProfileView& profile,
                          const BeliefSystem& mu, InfosetId infoset,
                          NodeId terminal, std::optional<int> action) {
  NodeId child = terminal;
  for (NodeId u = game.node(terminal).parent; u >= 0;
       child = u, u = game.node(u).parent) {
    const Node& n = game.node(u);
    if (n.kind != NodeKind::kDecision || n.infoset != infoset) continue;
    const int taken = game.node(child).parent_action;
    if (action && taken != *action) return 0.0;
    double w = mu[infoset][game.member_index(u)];
    w *= path_product(game, profile, child, terminal,
                      [](const Node&) { return false; });
    if (!action) w *= profile[infoset][taken];
    return w;
  }
  return 0.0;
}

double conditional_payoff(const Game& game, const ProfileView& profile,
                          const BeliefSystem& mu, PlayerId player,
                          InfosetId infoset, std::optional<int> action) {
  return aggregate(profile, infoset,
                   action_payoffs(game, profile, player, infoset,
                                  Weighting::kBelief, &mu),
                   action);
}

double subgame_conditional_payoff(const Game& game, const ProfileView& profile,
                                  PlayerId player, InfosetId infoset,
                                  std::optional<int> action) {
  return aggregate(profile, infoset,
                   action_payoffs(game, profile, player, infoset,
                                  Weighting::kSubgame),
                   action);
}

}  // namespace efg
