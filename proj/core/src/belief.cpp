#include "efg/belief.hpp"

#include "efg/reach.hpp"

namespace efg {

double belief_kernel(const Game& game, const ProfileView& profile,
                     Refinement mode, InfosetId infoset, NodeId member) {
  const PlayerId p = game.infoset(infoset).player;
  if (mode == Refinement::kNash) return s_excluded(game, profile, p, member);
  return subgame_kernels(game, profile, p, infoset, member).y;
}

BeliefSystem solve_beliefs(const Game& game, const ProfileView& profile,
                           Refinement mode, const BeliefSystem* fill) {
  BeliefSystem mu = fill ? *fill : uniform_beliefs(game);
  for (InfosetId i = 0; i < static_cast<InfosetId>(game.num_infosets()); ++i) {
    const auto& members = game.infoset(i).members;
    std::vector<double> k(members.size());
    double total = 0.0;
    for (std::size_t m = 0; m < members.size(); ++m) {
      k[m] = belief_kernel(game, profile, mode, i, members[m]);
      total += k[m];
    }
    if (total > 0.0) {
      for (std::size_t m = 0; m < members.size(); ++m) mu[i][m] = k[m] / total;
    }
  }
  return mu;
}

std::vector<std::vector<double>> belief_residual(const Game& game,
                                                 const ProfileView& profile,
                                                 const BeliefSystem& mu,
                                                 Refinement mode) {
  std::vector<std::vector<double>> out(game.num_infosets());
  for (InfosetId i = 0; i < static_cast<InfosetId>(game.num_infosets()); ++i) {
    const auto& members = game.infoset(i).members;
    std::vector<double> k(members.size());
    double total = 0.0;
    for (std::size_t m = 0; m < members.size(); ++m) {
      k[m] = belief_kernel(game, profile, mode, i, members[m]);
      total += k[m];
    }
    double sum = 0.0;
    for (std::size_t m = 0; m < members.size(); ++m) {
      out[i].push_back(total * mu[i][m] - k[m]);
      sum += mu[i][m];
    }
    out[i].push_back(sum - 1.0);
  }
  return out;
}

}  // namespace efg
