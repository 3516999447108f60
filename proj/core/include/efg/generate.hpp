// Random game families with sparsified integer payoffs.
#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "efg/game.hpp"

namespace efg {

// A: one stage of n movers, each observing every earlier action except the
//    one made immediately before it.
// B: one stage; every mover after the first observes only its predecessor.
// C: the A stage repeated `layers` times.
enum class Family { kA, kB, kC };

const char* to_string(Family f);
Family parse_family(const std::string& s);  // "A", "B", "C"; case-insensitive

struct GenSpec {
  Family family = Family::kA;
  int n = 2;
  std::vector<int> branching;  // actions per player, one entry per player
  int layers = 1;              // Type C only
  std::uint64_t seed = 0;
  int payoff_lo = -10;
  int payoff_hi = 10;
  double zero_prob_max = 0.5;
  std::optional<std::vector<int>> expected_m;  // checked when present
};

// Closed-form infoset count per player. Throws std::invalid_argument on a
// malformed spec.
std::vector<int> infoset_counts(const GenSpec& spec);

struct Generated {
  GameDescription description;
  double zero_prob = 0.0;  // the per-game sparsity draw
};

// Throws std::invalid_argument on a malformed spec or when `expected_m`
// differs from the counts the family produces.
Generated generate_description(const GenSpec& spec);
Game generate(const GenSpec& spec);

}  // namespace efg
