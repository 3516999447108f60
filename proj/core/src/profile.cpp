#include "efg/profile.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace efg {

namespace {

template <class Tag>
InfosetVectors<Tag> uniform(
    const std::shared_ptr<const std::vector<std::size_t>>& off) {
  std::vector<double> values(off->back());
  for (std::size_t i = 0; i + 1 < off->size(); ++i) {
    const std::size_t n = (*off)[i + 1] - (*off)[i];
    std::fill(values.begin() + (*off)[i], values.begin() + (*off)[i + 1],
              1.0 / static_cast<double>(n));
  }
  return InfosetVectors<Tag>(off, std::move(values));
}

}  // namespace

BehaviorProfile uniform_profile(const Game& game) {
  return uniform<ActionTag>(game.action_offsets());
}

BeliefSystem uniform_beliefs(const Game& game) {
  return uniform<MemberTag>(game.member_offsets());
}

BehaviorProfile make_profile(const Game& game, std::vector<double> flat) {
  if (flat.size() != game.total_actions()) {
    throw std::invalid_argument("profile has " + std::to_string(flat.size()) +
                                " coordinates, game has " +
                                std::to_string(game.total_actions()));
  }
  return BehaviorProfile(game.action_offsets(), std::move(flat));
}

BeliefSystem make_beliefs(const Game& game, std::vector<double> flat) {
  if (flat.size() != game.total_members()) {
    throw std::invalid_argument("belief system has " +
                                std::to_string(flat.size()) +
                                " coordinates, game has " +
                                std::to_string(game.total_members()));
  }
  return BeliefSystem(game.member_offsets(), std::move(flat));
}

template <class Tag>
double simplex_defect(const InfosetVectors<Tag>& v) {
  double worst = 0.0;
  for (std::size_t i = 0; i < v.num_infosets(); ++i) {
    double sum = 0.0;
    for (double x : v[static_cast<InfosetId>(i)]) {
      worst = std::max(worst, -x);
      sum += x;
    }
    worst = std::max(worst, std::abs(sum - 1.0));
  }
  return worst;
}

template <class Tag>
void normalize(InfosetVectors<Tag>& v) {
  for (std::size_t i = 0; i < v.num_infosets(); ++i) {
    auto s = v[static_cast<InfosetId>(i)];
    double sum = 0.0;
    for (double& x : s) {
      x = std::max(x, 0.0);
      sum += x;
    }
    if (sum > 0.0) {
      for (double& x : s) x /= sum;
    } else {
      for (double& x : s) x = 1.0 / static_cast<double>(s.size());
    }
  }
}

template double simplex_defect(const BehaviorProfile&);
template double simplex_defect(const BeliefSystem&);
template void normalize(BehaviorProfile&);
template void normalize(BeliefSystem&);

}  // namespace efg
