// Shared helpers for the test binaries.
#pragma once

#include <filesystem>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "efg/game.hpp"
#include "efg/io.hpp"
#include "efg/profile.hpp"

namespace efg::testing {

inline std::filesystem::path data_path(const std::string& rel) {
  return std::filesystem::path(EFG_DATA_DIR) / rel;
}

inline Game fixture(const std::string& name) {
  return load_game(data_path("games/" + name + ".json"));
}

using ProfileSpec = std::map<std::string, std::vector<double>>;

// Uniform everywhere except the listed infosets.
inline BehaviorProfile profile(const Game& game, const ProfileSpec& spec) {
  BehaviorProfile b = uniform_profile(game);
  for (const auto& [id, probs] : spec) {
    const auto i = game.find_infoset(id);
    if (!i) throw std::invalid_argument("no infoset " + id);
    auto row = b[*i];
    if (row.size() != probs.size()) throw std::invalid_argument("arity " + id);
    for (std::size_t a = 0; a < probs.size(); ++a) row[a] = probs[a];
  }
  return b;
}

inline InfosetId infoset(const Game& game, const std::string& id) {
  const auto i = game.find_infoset(id);
  if (!i) throw std::invalid_argument("no infoset " + id);
  return *i;
}

inline NodeId node(const Game& game, const std::string& id) {
  const auto v = game.find_node(id);
  if (!v) throw std::invalid_argument("no node " + id);
  return *v;
}

}  // namespace efg::testing
