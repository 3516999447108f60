#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <random>
#include <string>
#include <vector>

#include <boost/rational.hpp>
#include <gtest/gtest.h>
#include <json.hpp>

#include "efg/belief.hpp"
#include "efg/payoff.hpp"
#include "efg/reach.hpp"
#include "fixtures.hpp"

namespace efg {
namespace {

using testing::fixture;
using testing::infoset;
using testing::node;
using testing::profile;
using Q = boost::rational<long long>;

// Exact reach and payoff sums read straight from the game document.
class RationalOracle {
 public:
  explicit RationalOracle(const std::string& name)
      : doc_(nlohmann::json::parse(
            read_file(testing::data_path("games/" + name + ".json")))) {}

  using Strategy = std::map<std::string, std::vector<Q>>;

  Strategy random_strategy(std::mt19937& rng) const {
    Strategy s;
    std::uniform_int_distribution<int> pick(0, 6);
    for (const auto& [id, set] : doc_["infosets"].items()) {
      std::vector<long long> w;
      long long total = 0;
      for (std::size_t a = 0; a < set["actions"].size(); ++a) {
        w.push_back(pick(rng));
        total += w.back();
      }
      if (total == 0) {
        w[0] = 1;
        total = 1;
      }
      for (long long x : w) s[id].push_back(Q(x, total));
    }
    return s;
  }

  BehaviorProfile to_profile(const Game& g, const Strategy& s) const {
    testing::ProfileSpec spec;
    for (const auto& [id, probs] : s) {
      for (const Q& q : probs) spec[id].push_back(boost::rational_cast<double>(q));
    }
    return profile(g, spec);
  }

  // Σ u_player(z)·weight(z), with each move factor passed through `keep`.
  using Keep = std::function<bool(const nlohmann::json& node, const std::string& label)>;
  Q sum(const Strategy& s, int player, const Keep& keep,
        const std::function<bool(const std::vector<std::string>&)>& on_path) const {
    Q total = 0;
    std::vector<std::string> path;
    walk(doc_["root"].get<std::string>(), Q(1), s, player, keep, on_path, path, total);
    return total;
  }

  Q expected(const Strategy& s, int player) const {
    return sum(s, player, all(), any());
  }

  // Reach with the factors of `player` (0-based) removed.
  Q s_excluded(const Strategy& s, int player, const std::string& target) const {
    Q out = 0;
    reach_of(doc_["root"].get<std::string>(), Q(1), s, target, player, out);
    return out;
  }

  // u((a, β^{-I}) ∧ I): terminals below a member of `set` that leave it by
  // `label`, the set's own factor skipped.
  Q through(const Strategy& s, int player, const std::string& set,
            const std::string& label) const {
    const auto keep = [set](const nlohmann::json& n, const std::string&) {
      return n.value("infoset", std::string()) != set;
    };
    const auto on_path = [this, set, label](const std::vector<std::string>& p) {
      for (std::size_t k = 0; k + 1 < p.size(); k += 2) {
        const auto& n = doc_["nodes"][p[k]];
        if (n.value("infoset", std::string()) == set) return p[k + 1] == label;
      }
      return false;
    };
    return sum(s, player, keep, on_path);
  }

 private:
  static Keep all() {
    return [](const nlohmann::json&, const std::string&) { return true; };
  }
  static std::function<bool(const std::vector<std::string>&)> any() {
    return [](const std::vector<std::string>&) { return true; };
  }

  static Q prob(const nlohmann::json& act) {
    if (act["prob"].is_number()) {
      throw std::runtime_error("oracle expects exact chance probabilities");
    }
    const std::string t = act["prob"].get<std::string>();
    const auto slash = t.find('/');
    return Q(std::stoll(t.substr(0, slash)), std::stoll(t.substr(slash + 1)));
  }

  Q factor(const nlohmann::json& n, std::size_t k, const Strategy& s) const {
    const auto& act = n["actions"][k];
    if (n["kind"] == "chance") return prob(act);
    const std::string set = n["infoset"].get<std::string>();
    const auto& labels = doc_["infosets"][set]["actions"];
    for (std::size_t a = 0; a < labels.size(); ++a) {
      if (labels[a] == act["label"]) return s.at(set)[a];
    }
    throw std::runtime_error("label");
  }

  void walk(const std::string& id, Q w, const Strategy& s, int player,
            const Keep& keep,
            const std::function<bool(const std::vector<std::string>&)>& on_path,
            std::vector<std::string>& path, Q& total) const {
    const auto& n = doc_["nodes"][id];
    if (n["kind"] == "terminal") {
      if (on_path(path)) {
        total += w * Q(n["payoffs"][player].get<long long>());
      }
      return;
    }
    for (std::size_t k = 0; k < n["actions"].size(); ++k) {
      const auto& act = n["actions"][k];
      const std::string label = act["label"].get<std::string>();
      const Q f = keep(n, label) ? factor(n, k, s) : Q(1);
      path.push_back(id);
      path.push_back(label);
      walk(act["child"].get<std::string>(), w * f, s, player, keep, on_path,
           path, total);
      path.resize(path.size() - 2);
    }
  }

  bool reach_of(const std::string& id, Q w, const Strategy& s,
                const std::string& target, int player, Q& out) const {
    if (id == target) {
      out = w;
      return true;
    }
    const auto& n = doc_["nodes"][id];
    if (n["kind"] == "terminal") return false;
    const bool own = n["kind"] == "decision" && n["owner"].get<int>() == player + 1;
    for (std::size_t k = 0; k < n["actions"].size(); ++k) {
      const Q f = own ? Q(1) : factor(n, k, s);
      if (reach_of(n["actions"][k]["child"].get<std::string>(), w * f, s,
                   target, player, out)) {
        return true;
      }
    }
    return false;
  }

  nlohmann::json doc_;
};

double d(Q q) { return boost::rational_cast<double>(q); }

BehaviorProfile random_profile(const Game& g, std::mt19937& rng,
                               double zero_prob = 0.0) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  BehaviorProfile b = uniform_profile(g);
  for (InfosetId i = 0; i < static_cast<InfosetId>(g.num_infosets()); ++i) {
    auto row = b[i];
    double total = 0.0;
    for (double& v : row) {
      v = u(rng) < zero_prob ? 0.0 : u(rng);
      total += v;
    }
    if (total == 0.0) {
      row[0] = total = 1.0;
    }
    for (double& v : row) v /= total;
  }
  return b;
}

const char* const kFixtures[] = {"two_visits", "in_out", "chance_root"};

// --- reach -----------------------------------------------------------------

TEST(Omega, ChanceRootPathProbability) {
  const Game g = fixture("chance_root");
  const auto b = profile(g, {{"p1_guess", {0, 1}}, {"p2_first", {0, 1}},
                             {"p3_left", {1, 0}}});
  EXPECT_DOUBLE_EQ(omega(g, b, node(g, "b.y.e.F")), 2.0 / 7.0);
  EXPECT_DOUBLE_EQ(omega(g, b, g.root()), 1.0);
}

TEST(Omega, ExcludingSkipsTheInfosetFactor) {
  const Game g = fixture("chance_root");
  const auto b = profile(g, {{"p1_guess", {0.7, 0.3}}, {"p2_first", {0.4, 0.6}},
                             {"p3_left", {0.2, 0.8}}});
  const InfosetId guess = infoset(g, "p1_guess");
  const NodeId h = node(g, "b.y.e.F");
  EXPECT_NEAR(omega_excluding(g, b, guess, 1, h), 2.0 / 7.0 * 0.6 * 0.2, 1e-15);
  // An infoset off the path changes nothing.
  EXPECT_DOUBLE_EQ(omega_excluding(g, b, infoset(g, "p3_right"), 0, h),
                   omega(g, b, h));
  EXPECT_NEAR(omega(g, b, h), 0.3 * omega_excluding(g, b, guess, 1, h), 1e-15);
}

TEST(Omega, TerminalMassSumsToOne) {
  std::mt19937 rng(11);
  for (const char* name : kFixtures) {
    const Game g = fixture(name);
    for (int k = 0; k < 100; ++k) {
      const auto b = random_profile(g, rng, k % 2 ? 0.3 : 0.0);
      double total = 0.0;
      for (NodeId z : g.terminals()) total += omega(g, b, z);
      ASSERT_NEAR(total, 1.0, 1e-10) << name;
    }
  }
}

TEST(Omega, InfosetReachOnEntryGame) {
  const Game g = fixture("in_out");
  const auto b = profile(g, {{"p1_enter", {0.35, 0.65}}});
  EXPECT_DOUBLE_EQ(omega_infoset(g, b, infoset(g, "p2_in_out")), 0.65);
  EXPECT_DOUBLE_EQ(omega_infoset(g, b, infoset(g, "p1_enter")), 1.0);
}

TEST(Omega, TotallyMixedReachesEverything) {
  std::mt19937 rng(3);
  for (const char* name : kFixtures) {
    const Game g = fixture(name);
    const auto b = random_profile(g, rng);
    for (InfosetId i = 0; i < static_cast<InfosetId>(g.num_infosets()); ++i) {
      EXPECT_GT(omega_infoset(g, b, i), 0.0);
    }
  }
}

TEST(SExcluded, ChanceRootPlayerTwo) {
  const Game g = fixture("chance_root");
  const auto b = profile(g, {{"p1_guess", {0.7, 0.3}}, {"p2_first", {0.4, 0.6}},
                             {"p3_left", {0.2, 0.8}}});
  EXPECT_NEAR(s_excluded(g, b, 1, node(g, "b.y.e.F")), 2.0 / 7.0 * 0.3 * 0.2,
              1e-15);
  // Player 3 is not on the path to b.y.
  EXPECT_DOUBLE_EQ(s_excluded(g, b, 2, node(g, "b.y")), omega(g, b, node(g, "b.y")));
}

TEST(SExcluded, EntryGameMatchInfoset) {
  const Game g = fixture("in_out");
  const auto b = profile(g, {{"p1_enter", {0.9, 0.1}}, {"p2_in_out", {0.3, 0.7}},
                             {"p1_match", {0.8, 0.2}}});
  EXPECT_NEAR(s_excluded_infoset(g, b, infoset(g, "p1_match")), 0.3, 1e-15);
  EXPECT_DOUBLE_EQ(s_excluded_infoset(g, b, infoset(g, "p1_enter")), 1.0);
}

TEST(SExcluded, FactorizationBounds) {
  std::mt19937 rng(5);
  for (const char* name : kFixtures) {
    const Game g = fixture(name);
    const auto b = random_profile(g, rng, 0.2);
    const ReachTable table(g, b);
    for (NodeId v = 0; v < static_cast<NodeId>(g.num_nodes()); ++v) {
      for (PlayerId p = 0; p < g.num_players(); ++p) {
        const double s = s_excluded(g, b, p, v);
        EXPECT_LE(omega(g, b, v), s + 1e-15);
        EXPECT_LE(s, 1.0 + 1e-15);
        EXPECT_NEAR(table.s_excluded(p, v), s, 1e-15);
      }
      EXPECT_NEAR(table.omega(v), omega(g, b, v), 1e-15);
    }
  }
}

TEST(SExcluded, MatchesRationalOracle) {
  std::mt19937 rng(17);
  for (const char* name : kFixtures) {
    const Game g = fixture(name);
    const RationalOracle oracle(name);
    for (int k = 0; k < 20; ++k) {
      const auto s = oracle.random_strategy(rng);
      const auto b = oracle.to_profile(g, s);
      for (const Node& n : g.nodes()) {
        for (PlayerId p = 0; p < g.num_players(); ++p) {
          ASSERT_NEAR(s_excluded(g, b, p, node(g, n.id)),
                      d(oracle.s_excluded(s, p, n.id)), 1e-14);
        }
      }
    }
  }
}

TEST(Successors, ChanceRootPlayerTwo) {
  const Game g = fixture("chance_root");
  const InfosetId first = infoset(g, "p2_first");
  const int e = *g.action_index(first, "e");
  EXPECT_EQ(successor_infosets(g, first, e),
            std::vector<InfosetId>{infoset(g, "p2_second")});
  auto all = successor_infosets(g, first);
  std::sort(all.begin(), all.end());
  std::vector<InfosetId> want{infoset(g, "p2_second"), infoset(g, "p2_late")};
  std::sort(want.begin(), want.end());
  EXPECT_EQ(all, want);
  EXPECT_TRUE(successor_infosets(g, infoset(g, "p2_second")).empty());
}

TEST(Successors, DisjointAcrossActions) {
  for (const char* name : kFixtures) {
    const Game g = fixture(name);
    for (InfosetId i = 0; i < static_cast<InfosetId>(g.num_infosets()); ++i) {
      std::vector<InfosetId> seen;
      for (int a = 0; a < static_cast<int>(g.num_actions(i)); ++a) {
        for (InfosetId q : successor_infosets(g, i, a)) {
          EXPECT_EQ(std::count(seen.begin(), seen.end(), q), 0) << name;
          seen.push_back(q);
        }
      }
    }
  }
}

TEST(Successors, ReachImplication) {
  // S(I) > 0 whenever S(q) > 0 for a successor q of I.
  std::mt19937 rng(23);
  for (const char* name : kFixtures) {
    const Game g = fixture(name);
    for (int k = 0; k < 200; ++k) {
      const auto b = random_profile(g, rng, 0.4);
      for (InfosetId i = 0; i < static_cast<InfosetId>(g.num_infosets()); ++i) {
        for (InfosetId q : successor_infosets(g, i)) {
          if (s_excluded_infoset(g, b, q) > 0.0) {
            ASSERT_GT(s_excluded_infoset(g, b, i), 0.0) << name;
          }
        }
      }
    }
  }
}

TEST(SubgameKernels, WithoutProperSubgamesYEqualsS) {
  const Game g = fixture("two_visits");
  std::mt19937 rng(29);
  const auto b = random_profile(g, rng);
  for (InfosetId i = 0; i < static_cast<InfosetId>(g.num_infosets()); ++i) {
    const PlayerId p = g.infoset(i).player;
    for (NodeId h : g.infoset(i).members) {
      const auto k = subgame_kernels(g, b, p, i, h);
      EXPECT_NEAR(k.y, s_excluded(g, b, p, h), 1e-15);
      EXPECT_NEAR(k.c, omega(g, b, h), 1e-15);
    }
  }
}

TEST(SubgameKernels, SubgameRootIsEmptyProduct) {
  const Game g = fixture("in_out");
  const auto b = profile(g, {{"p1_enter", {0.9, 0.1}}, {"p2_in_out", {0.3, 0.7}}});
  const InfosetId set = infoset(g, "p2_in_out");
  const auto k = subgame_kernels(g, b, 1, set, node(g, "Y"));
  EXPECT_DOUBLE_EQ(k.c, 1.0);
  EXPECT_DOUBLE_EQ(k.y, 1.0);
  // p1_match sits in the subgame at Y.I, so β(I) drops out of C and Y.
  const InfosetId match = infoset(g, "p1_match");
  const auto b2 = profile(g, {{"p3_pick", {0.25, 0.75}}, {"p2_in_out", {0.1, 0.9}}});
  EXPECT_NEAR(subgame_c_infoset(g, b2, match), 1.0, 1e-15);
  EXPECT_NEAR(subgame_kernels(g, b2, 0, match, node(g, "Y.I.A")).y, 0.25, 1e-15);
}

// --- payoff ----------------------------------------------------------------

TEST(Splice, LaterOwnInfosetsTakeCompanion) {
  const Game g = fixture("chance_root");
  std::mt19937 rng(31);
  const auto b = random_profile(g, rng);
  const auto bt = random_profile(g, rng);
  const auto s = splice(g, b, bt, infoset(g, "p2_first"));
  for (const char* id : {"p2_first", "p1_guess", "p3_left", "p3_right"}) {
    const InfosetId i = infoset(g, id);
    EXPECT_TRUE(std::equal(s[i].begin(), s[i].end(), b[i].begin())) << id;
  }
  for (const char* id : {"p2_second", "p2_late"}) {
    const InfosetId i = infoset(g, id);
    EXPECT_TRUE(std::equal(s[i].begin(), s[i].end(), bt[i].begin())) << id;
  }
  EXPECT_EQ(splice(g, b, b, infoset(g, "p2_first")), b);
  EXPECT_EQ(splice(g, b, bt, infoset(g, "p2_second")), b);
}

TEST(ExpectedPayoff, SingleTerminal) {
  const Game g = fixture("single_terminal");
  const auto b = uniform_profile(g);
  const auto& u = g.node(g.terminals()[0]).payoffs;
  for (PlayerId p = 0; p < g.num_players(); ++p) {
    EXPECT_DOUBLE_EQ(expected_payoff(g, b, p), u[p]);
  }
}

TEST(ExpectedPayoff, MixedPointOfTwoVisitsGameIsExact) {
  const Game g = fixture("two_visits");
  const RationalOracle oracle("two_visits");
  const RationalOracle::Strategy s{{"p1_start", {Q(24, 49), Q(25, 49)}},
                                   {"p2_after_A", {Q(3, 8), Q(5, 8)}},
                                   {"p1_after_AR", {Q(0), Q(1)}},
                                   {"p3_shared", {Q(1, 4), Q(3, 4)}}};
  const auto b = oracle.to_profile(g, s);
  EXPECT_EQ(oracle.expected(s, 0), Q(9, 4));
  EXPECT_NEAR(expected_payoff(g, b, 0), 2.25, 1e-14);
  // Player 1 is indifferent at the root: both actions are worth 9/4.
  const InfosetId root = infoset(g, "p1_start");
  EXPECT_EQ(oracle.through(s, 0, "p1_start", "A"), Q(9, 4));
  EXPECT_EQ(oracle.through(s, 0, "p1_start", "B"), Q(9, 4));
  EXPECT_NEAR(payoff_through(g, b, 0, root, 0), 2.25, 1e-14);
  EXPECT_NEAR(payoff_through(g, b, 0, root, 1), 2.25, 1e-14);
}

TEST(ExpectedPayoff, MatchesRationalOracle) {
  std::mt19937 rng(37);
  for (const char* name : kFixtures) {
    const Game g = fixture(name);
    const RationalOracle oracle(name);
    for (int k = 0; k < 30; ++k) {
      const auto s = oracle.random_strategy(rng);
      const auto b = oracle.to_profile(g, s);
      for (PlayerId p = 0; p < g.num_players(); ++p) {
        ASSERT_NEAR(expected_payoff(g, b, p), d(oracle.expected(s, p)), 1e-12);
        for (InfosetId i = 0; i < static_cast<InfosetId>(g.num_infosets()); ++i) {
          const Infoset& set = g.infoset(i);
          for (int a = 0; a < static_cast<int>(set.labels.size()); ++a) {
            ASSERT_NEAR(payoff_through(g, b, p, i, a),
                        d(oracle.through(s, p, set.id, set.labels[a])), 1e-12)
                << name << ' ' << set.id << ' ' << set.labels[a];
          }
        }
      }
    }
  }
}

TEST(ExpectedPayoff, AffineInOneInfoset) {
  std::mt19937 rng(41);
  const Game g = fixture("chance_root");
  auto b = random_profile(g, rng);
  const InfosetId i = infoset(g, "p2_first");
  for (PlayerId p = 0; p < g.num_players(); ++p) {
    std::vector<double> values;
    for (double x : {0.0, 0.25, 0.5, 0.75, 1.0}) {
      b[i][0] = x;
      b[i][1] = 1.0 - x;
      values.push_back(expected_payoff(g, b, p));
    }
    const double slope = values[1] - values[0];
    for (std::size_t k = 2; k < values.size(); ++k) {
      EXPECT_NEAR(values[k] - values[k - 1], slope, 1e-12);
    }
  }
}

TEST(PayoffThrough, TwoVisitsRootActionB) {
  const Game g = fixture("two_visits");
  std::mt19937 rng(43);
  for (int k = 0; k < 5; ++k) {
    const auto b = random_profile(g, rng);
    const auto bt = random_profile(g, rng);
    const InfosetId root = infoset(g, "p1_start");
    const double y = b[infoset(g, "p3_shared")][1];
    EXPECT_NEAR(payoff_through(g, splice_view(g, b, bt, root), 0, root, 1),
                3.0 * y, 1e-14);
  }
}

TEST(PayoffThrough, ActionMixtureIdentity) {
  std::mt19937 rng(47);
  for (const char* name : kFixtures) {
    const Game g = fixture(name);
    const auto b = random_profile(g, rng);
    for (InfosetId i = 0; i < static_cast<InfosetId>(g.num_infosets()); ++i) {
      for (PlayerId p = 0; p < g.num_players(); ++p) {
        double mix = 0.0;
        for (int a = 0; a < static_cast<int>(g.num_actions(i)); ++a) {
          mix += b[i][a] * payoff_through(g, b, p, i, a);
        }
        EXPECT_NEAR(mix, payoff_through(g, b, p, i), 1e-12);
      }
    }
  }
}

TEST(PayoffThrough, UnreachedInfosetIsZero) {
  const Game g = fixture("in_out");
  const auto b = profile(g, {{"p1_enter", {1, 0}}});
  const InfosetId match = infoset(g, "p1_match");
  EXPECT_EQ(payoff_through(g, b, 0, match), 0.0);
  EXPECT_EQ(payoff_through(g, b, 0, match, 1), 0.0);
}

TEST(ConditionalPayoff, TwoVisitsLateInfoset) {
  const Game g = fixture("two_visits");
  std::mt19937 rng(53);
  const auto b = random_profile(g, rng);
  const auto bt = random_profile(g, rng);
  const InfosetId late = infoset(g, "p1_after_AR");
  const BeliefSystem mu = uniform_beliefs(g);
  EXPECT_NEAR(conditional_payoff(g, splice_view(g, b, bt, late), mu, 0, late, 0),
              2.0, 1e-14);
}

TEST(ConditionalPayoff, EntryGamePickInfoset) {
  const Game g = fixture("in_out");
  std::mt19937 rng(59);
  const auto b = random_profile(g, rng);
  const InfosetId pick = infoset(g, "p3_pick");
  const double dd = b[infoset(g, "p1_match")][1];
  const BeliefSystem mu = solve_beliefs(g, b, Refinement::kNash);
  EXPECT_NEAR(conditional_payoff(g, b, mu, 2, pick, 0), 6.0 * dd, 1e-14);
}

TEST(ConditionalWeight, PrefixRules) {
  const Game g = fixture("in_out");
  std::mt19937 rng(61);
  const auto b = random_profile(g, rng);
  BeliefSystem mu = uniform_beliefs(g);
  const InfosetId match = infoset(g, "p1_match");
  EXPECT_EQ(conditional_weight(g, b, mu, match, node(g, "Y.O")), 0.0);
  EXPECT_EQ(conditional_weight(g, b, mu, match, node(g, "N")), 0.0);
  mu[match][0] = 1.0;
  mu[match][1] = 0.0;
  EXPECT_DOUBLE_EQ(conditional_weight(g, b, mu, match, node(g, "Y.I.A.D"), 1), 1.0);
  EXPECT_EQ(conditional_weight(g, b, mu, match, node(g, "Y.I.A.C"), 1), 0.0);
}

TEST(ConditionalPayoff, BayesLink) {
  std::mt19937 rng(67);
  for (const char* name : kFixtures) {
    const Game g = fixture(name);
    for (int k = 0; k < 10; ++k) {
      const auto b = random_profile(g, rng, 0.15);
      std::vector<double> flat;
      for (InfosetId i = 0; i < static_cast<InfosetId>(g.num_infosets()); ++i) {
        const double w = omega_infoset(g, b, i);
        for (NodeId h : g.infoset(i).members) {
          flat.push_back(w > 0.0 ? omega(g, b, h) / w : 0.0);
        }
      }
      const BeliefSystem mu = make_beliefs(g, flat);
      for (InfosetId i = 0; i < static_cast<InfosetId>(g.num_infosets()); ++i) {
        const double w = omega_infoset(g, b, i);
        if (w <= 1e-12) continue;
        for (NodeId z : g.terminals()) {
          if (conditional_weight(g, b, mu, i, z) == 0.0) continue;
          EXPECT_NEAR(conditional_weight(g, b, mu, i, z) * w, omega(g, b, z), 1e-12);
        }
        for (PlayerId p = 0; p < g.num_players(); ++p) {
          for (int a = 0; a < static_cast<int>(g.num_actions(i)); ++a) {
            EXPECT_NEAR(payoff_through(g, b, p, i, a),
                        w * conditional_payoff(g, b, mu, p, i, a),
                        1e-9 * (1.0 + g.max_abs_payoff()))
                << name;
          }
        }
      }
    }
  }
}

TEST(SubgamePayoff, EntryGameValues) {
  const Game g = fixture("in_out");
  std::mt19937 rng(71);
  const auto b = random_profile(g, rng);
  const auto bt = random_profile(g, rng);
  const InfosetId in_out = infoset(g, "p2_in_out");
  const InfosetId match = infoset(g, "p1_match");
  const double a3 = b[infoset(g, "p3_pick")][0];
  const double b3 = b[infoset(g, "p3_pick")][1];
  const double c1 = b[match][0];
  const double d1 = b[match][1];
  const auto v2 = splice_view(g, b, bt, in_out);
  EXPECT_NEAR(subgame_conditional_payoff(g, v2, 1, in_out, 0),
              9.0 * (a3 * d1 + b3 * c1), 1e-13);
  EXPECT_NEAR(subgame_conditional_payoff(g, v2, 1, in_out, 1), 5.0, 1e-14);
  const auto v1 = splice_view(g, b, bt, match);
  EXPECT_NEAR(subgame_conditional_payoff(g, v1, 0, match, 0), 6.0 * b3, 1e-13);
}

TEST(SubgamePayoff, NoProperSubgameMatchesThrough) {
  const Game g = fixture("two_visits");
  std::mt19937 rng(73);
  const auto b = random_profile(g, rng);
  for (InfosetId i = 0; i < static_cast<InfosetId>(g.num_infosets()); ++i) {
    for (PlayerId p = 0; p < g.num_players(); ++p) {
      EXPECT_NEAR(subgame_conditional_payoff(g, b, p, i), payoff_through(g, b, p, i),
                  1e-13);
    }
  }
}

}  // namespace
}  // namespace efg
