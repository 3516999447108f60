// Finite extensive-form games with perfect recall.
#pragma once

#include <cstddef>
#include <map>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace efg {

// Players are 0-based inside the library; game files number them from 1.
using PlayerId = int;
using NodeId = int;
using InfosetId = int;

enum class NodeKind { kDecision, kChance, kTerminal };

// Raw, unvalidated description of a game. This is what the parser and the
// generators produce and what the serializer consumes.
struct RawAction {
  std::string label;
  std::string child;
  double prob = 0.0;  // chance nodes only
  bool operator==(const RawAction&) const = default;
};

struct RawNode {
  NodeKind kind = NodeKind::kTerminal;
  int owner = 0;  // 1-based, decision nodes only
  std::string infoset;
  std::vector<RawAction> actions;
  std::vector<double> payoffs;
  bool operator==(const RawNode&) const = default;
};

struct RawInfoset {
  int player = 0;  // 1-based
  std::vector<std::string> members;
  std::vector<std::string> actions;
  bool operator==(const RawInfoset&) const = default;
};

struct GameDescription {
  int num_players = 0;
  std::string root;
  std::map<std::string, RawNode> nodes;
  std::map<std::string, RawInfoset> infosets;
  bool operator==(const GameDescription&) const = default;
};

class GameError : public std::runtime_error {
 public:
  enum class Kind { kSyntax, kSemantic, kPerfectRecall };
  GameError(Kind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}
  Kind kind() const { return kind_; }

 private:
  Kind kind_;
};

struct Node {
  std::string id;
  NodeKind kind = NodeKind::kTerminal;
  PlayerId owner = -1;
  InfosetId infoset = -1;
  std::vector<std::string> labels;
  std::vector<NodeId> children;
  std::vector<double> chance_probs;
  std::vector<double> payoffs;
  NodeId parent = -1;
  int parent_action = -1;
  int depth = 0;
  bool operator==(const Node&) const = default;
};

struct Infoset {
  std::string id;
  PlayerId player = 0;
  std::vector<NodeId> members;
  std::vector<std::string> labels;
  bool operator==(const Infoset&) const = default;
};

// One entry of X_i(h). `action` is -1 for the trailing entry that names the
// infoset containing h itself.
struct ExperienceItem {
  InfosetId infoset;
  int action;
  bool operator==(const ExperienceItem&) const = default;
};

struct RecallViolation {
  InfosetId infoset;
  NodeId first;
  NodeId second;
};

struct SubgameIndex {
  std::vector<NodeId> roots;         // sorted
  std::vector<char> is_root;         // per node
  std::vector<NodeId> node_to_root;  // nearest ancestor-or-self subgame root
  std::vector<NodeId> infoset_root;  // root of the smallest subgame holding I
};

class Game {
 public:
  // Validates the description. Throws GameError on any structural problem,
  // and on a perfect recall violation when `require_perfect_recall` is set.
  static Game from_description(const GameDescription& desc,
                               bool require_perfect_recall = true);

  GameDescription to_description() const;

  int num_players() const { return num_players_; }
  NodeId root() const { return 0; }
  std::size_t num_nodes() const { return nodes_.size(); }
  std::size_t num_infosets() const { return infosets_.size(); }
  const Node& node(NodeId v) const { return nodes_[v]; }
  const Infoset& infoset(InfosetId i) const { return infosets_[i]; }
  const std::vector<Node>& nodes() const { return nodes_; }
  const std::vector<Infoset>& infosets() const { return infosets_; }
  const std::vector<NodeId>& terminals() const { return terminals_; }
  const std::vector<InfosetId>& player_infosets(PlayerId p) const {
    return player_infosets_[p];
  }

  std::size_t num_actions(InfosetId i) const {
    return infosets_[i].labels.size();
  }
  std::size_t num_members(InfosetId i) const {
    return infosets_[i].members.size();
  }
  // Prefix offsets into the flat action / member coordinate vectors.
  const std::shared_ptr<const std::vector<std::size_t>>& action_offsets()
      const {
    return action_offsets_;
  }
  const std::shared_ptr<const std::vector<std::size_t>>& member_offsets()
      const {
    return member_offsets_;
  }
  std::size_t total_actions() const { return action_offsets_->back(); }
  std::size_t total_members() const { return member_offsets_->back(); }

  // Position of `v` inside its infoset's member list.
  int member_index(NodeId v) const { return member_index_[v]; }
  // One past the last node of the subtree rooted at `v` (preorder layout).
  NodeId subtree_end(NodeId v) const { return subtree_end_[v]; }
  bool is_ancestor_or_self(NodeId a, NodeId v) const {
    return a <= v && v < subtree_end_[a];
  }

  // Same-owner infosets with a member lying below some member of `i`.
  const std::vector<InfosetId>& later_infosets(InfosetId i) const {
    return later_[i];
  }
  const std::vector<char>& later_mask(InfosetId i) const {
    return later_mask_[i];
  }
  // Smallest member depth; later infosets are strictly deeper.
  int min_depth(InfosetId i) const { return min_depth_[i]; }

  const SubgameIndex& subgames() const { return *subgames_; }

  std::optional<NodeId> find_node(std::string_view id) const;
  std::optional<InfosetId> find_infoset(std::string_view id) const;
  std::optional<int> action_index(InfosetId i, std::string_view label) const;

  double max_abs_payoff() const { return max_abs_payoff_; }

  bool operator==(const Game& other) const {
    return num_players_ == other.num_players_ && nodes_ == other.nodes_ &&
           infosets_ == other.infosets_;
  }

 private:
  Game() = default;
  void index();

  int num_players_ = 0;
  std::vector<Node> nodes_;
  std::vector<Infoset> infosets_;
  std::vector<NodeId> terminals_;
  std::vector<std::vector<InfosetId>> player_infosets_;
  std::shared_ptr<const std::vector<std::size_t>> action_offsets_;
  std::shared_ptr<const std::vector<std::size_t>> member_offsets_;
  std::vector<int> member_index_;
  std::vector<NodeId> subtree_end_;
  std::vector<std::vector<InfosetId>> later_;
  std::vector<std::vector<char>> later_mask_;
  std::vector<int> min_depth_;
  std::shared_ptr<const SubgameIndex> subgames_;
  std::map<std::string, NodeId, std::less<>> node_ids_;
  std::map<std::string, InfosetId, std::less<>> infoset_ids_;
  double max_abs_payoff_ = 0.0;
};

std::vector<ExperienceItem> experience_sequence(const Game& game,
                                                PlayerId player, NodeId node);

// Empty iff every infoset's members share the owner's experience sequence.
std::vector<RecallViolation> validate_perfect_recall(const Game& game);

SubgameIndex subgame_decomposition(const Game& game);

}  // namespace efg
