// JSON game, profile and report documents.
#pragma once

#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

#include "efg/game.hpp"
#include "efg/profile.hpp"

namespace efg {

// Parses a game document. Syntax problems throw GameError(kSyntax).
GameDescription parse_description(std::string_view document);
Game parse_game(std::string_view document, bool require_perfect_recall = true);
Game load_game(const std::filesystem::path& path,
               bool require_perfect_recall = true);

std::string serialize(const GameDescription& desc);
std::string serialize(const Game& game);

class ProfileError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct ProfileDocument {
  BehaviorProfile beta;
  std::optional<BehaviorProfile> beta_tilde;
  std::optional<BeliefSystem> mu;
};

// Accepts either a bare map infoset id -> action probabilities, or an object
// with "beta" and optional "beta_tilde" and "mu" maps (mu in member order).
ProfileDocument parse_profile(const Game& game, std::string_view document);
std::string serialize_profile(const Game& game, const BehaviorProfile& beta);
std::string serialize_assessment(const Game& game, const Assessment& a);

// Reads a probability written as a JSON number, a decimal string or "p/q".
double parse_probability(std::string_view text);

std::string read_file(const std::filesystem::path& path);

}  // namespace efg
