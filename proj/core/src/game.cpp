#include "efg/game.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>

namespace efg {

namespace {

[[noreturn]] void semantic(const std::string& msg) {
  throw GameError(GameError::Kind::kSemantic, msg);
}

}  // namespace

Game Game::from_description(const GameDescription& desc,
                            bool require_perfect_recall) {
  if (desc.num_players < 1) semantic("num_players must be positive");
  if (!desc.nodes.count(desc.root)) {
    semantic("root '" + desc.root + "' is not a node");
  }

  Game g;
  g.num_players_ = desc.num_players;

  // Infosets are indexed in id order.
  for (const auto& [id, raw] : desc.infosets) {
    if (raw.player < 1 || raw.player > desc.num_players) {
      semantic("infoset '" + id + "' has invalid player " +
               std::to_string(raw.player));
    }
    if (raw.members.empty()) semantic("infoset '" + id + "' has no members");
    if (raw.actions.empty()) semantic("infoset '" + id + "' has no actions");
    std::set<std::string> seen(raw.actions.begin(), raw.actions.end());
    if (seen.size() != raw.actions.size()) {
      semantic("infoset '" + id + "' has duplicate action labels");
    }
    g.infoset_ids_.emplace(id, static_cast<InfosetId>(g.infosets_.size()));
    Infoset info;
    info.id = id;
    info.player = raw.player - 1;
    info.labels = raw.actions;
    g.infosets_.push_back(std::move(info));
  }

  // Nodes are laid out in preorder from the root, children in action order.
  std::vector<std::pair<std::string, NodeId>> stack{{desc.root, -1}};
  std::vector<int> stack_action{-1};
  std::set<std::string> visited;
  while (!stack.empty()) {
    auto [id, parent] = stack.back();
    int parent_action = stack_action.back();
    stack.pop_back();
    stack_action.pop_back();
    if (!visited.insert(id).second) {
      semantic("node '" + id + "' is reachable along more than one path");
    }
    auto it = desc.nodes.find(id);
    if (it == desc.nodes.end()) semantic("dangling child id '" + id + "'");
    const RawNode& raw = it->second;

    Node n;
    n.id = id;
    n.kind = raw.kind;
    n.parent = parent;
    n.parent_action = parent_action;
    n.depth = parent < 0 ? 0 : g.nodes_[parent].depth + 1;
    const NodeId self = static_cast<NodeId>(g.nodes_.size());

    if (raw.kind == NodeKind::kTerminal) {
      if (!raw.actions.empty()) semantic("terminal node '" + id + "' has actions");
      if (static_cast<int>(raw.payoffs.size()) != desc.num_players) {
        semantic("terminal node '" + id + "' has " +
                 std::to_string(raw.payoffs.size()) + " payoffs, expected " +
                 std::to_string(desc.num_players));
      }
      for (double u : raw.payoffs) {
        if (!std::isfinite(u)) semantic("non-finite payoff at '" + id + "'");
      }
      n.payoffs = raw.payoffs;
    } else {
      if (raw.actions.empty()) semantic("node '" + id + "' has no actions");
      if (!raw.payoffs.empty()) {
        semantic("non-terminal node '" + id + "' carries payoffs");
      }
      std::set<std::string> labels;
      for (const auto& a : raw.actions) {
        if (!labels.insert(a.label).second) {
          semantic("node '" + id + "' repeats action label '" + a.label + "'");
        }
        n.labels.push_back(a.label);
      }
      if (raw.kind == NodeKind::kChance) {
        double total = 0.0;
        for (const auto& a : raw.actions) {
          if (!(a.prob > 0.0) || !std::isfinite(a.prob)) {
            semantic("chance node '" + id + "' has a non-positive probability");
          }
          n.chance_probs.push_back(a.prob);
          total += a.prob;
        }
        if (std::abs(total - 1.0) > 1e-12) {
          std::ostringstream os;
          os.precision(17);
          os << "chance probabilities at '" << id << "' sum to " << total;
          semantic(os.str());
        }
      } else {
        if (raw.owner < 1 || raw.owner > desc.num_players) {
          semantic("decision node '" + id + "' has invalid owner");
        }
        auto info = g.infoset_ids_.find(raw.infoset);
        if (info == g.infoset_ids_.end()) {
          semantic("decision node '" + id + "' names unknown infoset '" +
                   raw.infoset + "'");
        }
        n.owner = raw.owner - 1;
        n.infoset = info->second;
        const Infoset& is = g.infosets_[n.infoset];
        if (is.player != n.owner) {
          semantic("infoset '" + is.id + "' mixes owners");
        }
        if (n.labels != is.labels) {
          semantic("infoset '" + is.id + "' action mismatch at node '" + id +
                   "'");
        }
      }
    }
    g.nodes_.push_back(std::move(n));
    // Push children in reverse so the first action is visited first.
    for (int k = static_cast<int>(raw.actions.size()) - 1; k >= 0; --k) {
      stack.emplace_back(raw.actions[k].child, self);
      stack_action.push_back(k);
    }
  }
  if (visited.size() != desc.nodes.size()) {
    for (const auto& [id, raw] : desc.nodes) {
      if (!visited.count(id)) semantic("node '" + id + "' is unreachable");
    }
  }
  for (NodeId v = 0; v < static_cast<NodeId>(g.nodes_.size()); ++v) {
    g.node_ids_.emplace(g.nodes_[v].id, v);
    if (g.nodes_[v].parent >= 0) {
      g.nodes_[g.nodes_[v].parent].children.push_back(v);
    }
  }

  // Members in the order the description lists them.
  std::vector<int> listed(g.nodes_.size(), 0);
  for (auto& is : g.infosets_) {
    const RawInfoset& raw = desc.infosets.at(is.id);
    for (const auto& m : raw.members) {
      auto v = g.node_ids_.find(m);
      if (v == g.node_ids_.end()) {
        semantic("infoset '" + is.id + "' lists unknown member '" + m + "'");
      }
      const Node& n = g.nodes_[v->second];
      if (n.kind != NodeKind::kDecision ||
          g.infosets_[n.infoset].id != is.id) {
        semantic("infoset '" + is.id + "' lists member '" + m +
                 "' that does not belong to it");
      }
      if (listed[v->second]++) {
        semantic("infoset '" + is.id + "' lists member '" + m + "' twice");
      }
      is.members.push_back(v->second);
    }
  }
  for (NodeId v = 0; v < static_cast<NodeId>(g.nodes_.size()); ++v) {
    if (g.nodes_[v].kind == NodeKind::kDecision && !listed[v]) {
      semantic("decision node '" + g.nodes_[v].id +
               "' is missing from the member list of infoset '" +
               g.infosets_[g.nodes_[v].infoset].id + "'");
    }
  }

  g.index();

  if (require_perfect_recall) {
    auto violations = validate_perfect_recall(g);
    if (!violations.empty()) {
      const auto& v = violations.front();
      throw GameError(GameError::Kind::kPerfectRecall,
                      "perfect recall fails at infoset '" +
                          g.infosets_[v.infoset].id + "' between '" +
                          g.nodes_[v.first].id + "' and '" +
                          g.nodes_[v.second].id + "'");
    }
  }
  return g;
}

void Game::index() {
  const auto n = static_cast<NodeId>(nodes_.size());
  subtree_end_.assign(n, 0);
  for (NodeId v = n - 1; v >= 0; --v) {
    subtree_end_[v] = nodes_[v].children.empty()
                          ? v + 1
                          : subtree_end_[nodes_[v].children.back()];
  }
  terminals_.clear();
  max_abs_payoff_ = 0.0;
  for (NodeId v = 0; v < n; ++v) {
    if (nodes_[v].kind == NodeKind::kTerminal) {
      terminals_.push_back(v);
      for (double u : nodes_[v].payoffs) {
        max_abs_payoff_ = std::max(max_abs_payoff_, std::abs(u));
      }
    }
  }

  const auto k = infosets_.size();
  auto actions = std::make_shared<std::vector<std::size_t>>(k + 1, 0);
  auto members = std::make_shared<std::vector<std::size_t>>(k + 1, 0);
  player_infosets_.assign(num_players_, {});
  member_index_.assign(n, -1);
  min_depth_.assign(k, 0);
  for (std::size_t i = 0; i < k; ++i) {
    const Infoset& is = infosets_[i];
    (*actions)[i + 1] = (*actions)[i] + is.labels.size();
    (*members)[i + 1] = (*members)[i] + is.members.size();
    player_infosets_[is.player].push_back(static_cast<InfosetId>(i));
    int depth = nodes_[is.members.front()].depth;
    for (std::size_t m = 0; m < is.members.size(); ++m) {
      member_index_[is.members[m]] = static_cast<int>(m);
      depth = std::min(depth, nodes_[is.members[m]].depth);
    }
    min_depth_[i] = depth;
  }
  action_offsets_ = std::move(actions);
  member_offsets_ = std::move(members);

  later_mask_.assign(k, std::vector<char>(k, 0));
  for (NodeId v = 0; v < n; ++v) {
    const Node& node = nodes_[v];
    if (node.kind != NodeKind::kDecision) continue;
    for (NodeId u = node.parent; u >= 0; u = nodes_[u].parent) {
      const Node& anc = nodes_[u];
      if (anc.kind == NodeKind::kDecision && anc.owner == node.owner) {
        later_mask_[anc.infoset][node.infoset] = 1;
      }
    }
  }
  later_.assign(k, {});
  for (std::size_t i = 0; i < k; ++i) {
    for (std::size_t q = 0; q < k; ++q) {
      if (later_mask_[i][q]) later_[i].push_back(static_cast<InfosetId>(q));
    }
  }

  infoset_ids_.clear();
  for (std::size_t i = 0; i < k; ++i) {
    infoset_ids_.emplace(infosets_[i].id, static_cast<InfosetId>(i));
  }
  subgames_ = std::make_shared<const SubgameIndex>(subgame_decomposition(*this));
}

GameDescription Game::to_description() const {
  GameDescription d;
  d.num_players = num_players_;
  d.root = nodes_[0].id;
  for (const Node& n : nodes_) {
    RawNode raw;
    raw.kind = n.kind;
    if (n.kind == NodeKind::kDecision) {
      raw.owner = n.owner + 1;
      raw.infoset = infosets_[n.infoset].id;
    }
    for (std::size_t a = 0; a < n.children.size(); ++a) {
      RawAction act;
      act.label = n.labels[a];
      act.child = nodes_[n.children[a]].id;
      if (n.kind == NodeKind::kChance) act.prob = n.chance_probs[a];
      raw.actions.push_back(std::move(act));
    }
    raw.payoffs = n.payoffs;
    d.nodes.emplace(n.id, std::move(raw));
  }
  for (const Infoset& is : infosets_) {
    RawInfoset raw;
    raw.player = is.player + 1;
    raw.actions = is.labels;
    for (NodeId m : is.members) raw.members.push_back(nodes_[m].id);
    d.infosets.emplace(is.id, std::move(raw));
  }
  return d;
}

std::optional<NodeId> Game::find_node(std::string_view id) const {
  auto it = node_ids_.find(id);
  if (it == node_ids_.end()) return std::nullopt;
  return it->second;
}

std::optional<InfosetId> Game::find_infoset(std::string_view id) const {
  auto it = infoset_ids_.find(id);
  if (it == infoset_ids_.end()) return std::nullopt;
  return it->second;
}

std::optional<int> Game::action_index(InfosetId i,
                                      std::string_view label) const {
  const auto& labels = infosets_[i].labels;
  for (std::size_t a = 0; a < labels.size(); ++a) {
    if (labels[a] == label) return static_cast<int>(a);
  }
  return std::nullopt;
}

std::vector<ExperienceItem> experience_sequence(const Game& game,
                                                PlayerId player,
                                                NodeId node) {
  std::vector<ExperienceItem> out;
  NodeId child = node;
  for (NodeId u = game.node(node).parent; u >= 0; u = game.node(u).parent) {
    const Node& anc = game.node(u);
    if (anc.kind == NodeKind::kDecision && anc.owner == player) {
      out.push_back({anc.infoset, game.node(child).parent_action});
    }
    child = u;
  }
  std::reverse(out.begin(), out.end());
  const Node& self = game.node(node);
  if (self.kind == NodeKind::kDecision && self.owner == player) {
    out.push_back({self.infoset, -1});
  }
  return out;
}

std::vector<RecallViolation> validate_perfect_recall(const Game& game) {
  std::vector<RecallViolation> out;
  for (InfosetId i = 0; i < static_cast<InfosetId>(game.num_infosets()); ++i) {
    const Infoset& is = game.infoset(i);
    const auto ref = experience_sequence(game, is.player, is.members.front());
    for (std::size_t m = 1; m < is.members.size(); ++m) {
      if (experience_sequence(game, is.player, is.members[m]) != ref) {
        out.push_back({i, is.members.front(), is.members[m]});
      }
    }
  }
  return out;
}

SubgameIndex subgame_decomposition(const Game& game) {
  const auto n = static_cast<NodeId>(game.num_nodes());
  SubgameIndex idx;
  idx.is_root.assign(n, 0);
  for (NodeId v = 0; v < n; ++v) {
    const Node& node = game.node(v);
    bool candidate = v == game.root() || node.kind == NodeKind::kChance ||
                     (node.kind == NodeKind::kDecision &&
                      game.num_members(node.infoset) == 1);
    if (v != game.root() &&
        (!candidate || node.kind == NodeKind::kTerminal)) {
      continue;
    }
    bool closed = true;
    for (NodeId u = v; u < game.subtree_end(v) && closed; ++u) {
      const Node& inner = game.node(u);
      if (inner.kind != NodeKind::kDecision) continue;
      for (NodeId m : game.infoset(inner.infoset).members) {
        if (!game.is_ancestor_or_self(v, m)) {
          closed = false;
          break;
        }
      }
    }
    if (closed || v == game.root()) {
      idx.is_root[v] = 1;
      idx.roots.push_back(v);
    }
  }
  idx.node_to_root.assign(n, game.root());
  for (NodeId v = 0; v < n; ++v) {
    NodeId p = game.node(v).parent;
    idx.node_to_root[v] = idx.is_root[v] ? v : idx.node_to_root[p];
  }
  idx.infoset_root.assign(game.num_infosets(), game.root());
  for (InfosetId i = 0; i < static_cast<InfosetId>(game.num_infosets()); ++i) {
    idx.infoset_root[i] = idx.node_to_root[game.infoset(i).members.front()];
  }
  return idx;
}

}  // namespace efg
