#include "efg/generate.hpp"

#include <algorithm>
#include <cctype>
#include <random>
#include <stdexcept>

namespace efg {

namespace {

// Payoff draws come from a stream split off the seed by this tag.
constexpr std::uint64_t kPayoffStream = 0x7061796f6666ULL;

// Hand-rolled distributions: the standard ones are not portable across
// library implementations.
class Draws {
 public:
  Draws(std::uint64_t seed, std::uint64_t stream) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed),
                      static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(stream),
                      static_cast<std::uint32_t>(stream >> 32)};
    rng_.seed(seq);
  }

  double real() { return static_cast<double>(rng_() >> 11) * 0x1.0p-53; }

  // Uniform on [lo, hi] by rejection.
  std::int64_t integer(std::int64_t lo, std::int64_t hi) {
    const std::uint64_t span = static_cast<std::uint64_t>(hi - lo) + 1;
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % span;
    std::uint64_t r;
    do {
      r = rng_();
    } while (r >= limit);
    return lo + static_cast<std::int64_t>(r % span);
  }

 private:
  std::mt19937_64 rng_;
};

struct Layout {
  int movers = 0;
  std::vector<std::vector<int>> observed;  // per mover, earlier movers seen
};

void check_spec(const GenSpec& s) {
  if (s.n < 2) throw std::invalid_argument("n must be at least 2");
  if (static_cast<int>(s.branching.size()) != s.n) {
    throw std::invalid_argument("branching needs one entry per player");
  }
  for (int b : s.branching) {
    if (b < 2) throw std::invalid_argument("branching entries must be >= 2");
  }
  if (s.layers < 1) throw std::invalid_argument("layers must be >= 1");
  if (s.family != Family::kC && s.layers != 1) {
    throw std::invalid_argument("layers apply to family C only");
  }
  if (s.payoff_lo > s.payoff_hi) {
    throw std::invalid_argument("empty payoff range");
  }
  if (!(s.zero_prob_max >= 0.0 && s.zero_prob_max <= 1.0)) {
    throw std::invalid_argument("zero_prob_max must lie in [0, 1]");
  }
}

Layout layout(const GenSpec& s) {
  Layout l;
  l.movers = s.family == Family::kC ? s.n * s.layers : s.n;
  l.observed.resize(l.movers);
  for (int k = 1; k < l.movers; ++k) {
    if (s.family == Family::kB) {
      l.observed[k] = {k - 1};
    } else {
      for (int j = 0; j + 1 < k; ++j) l.observed[k].push_back(j);
    }
  }
  return l;
}

std::string counts_text(const std::vector<int>& m) {
  std::string out = "(";
  for (std::size_t i = 0; i < m.size(); ++i) {
    if (i) out += ',';
    out += std::to_string(m[i]);
  }
  return out + ")";
}

std::string padded(std::uint64_t v, std::size_t width) {
  std::string s = std::to_string(v);
  if (s.size() < width) s.insert(0, width - s.size(), '0');
  return s;
}

}  // namespace

const char* to_string(Family f) {
  switch (f) {
    case Family::kA:
      return "A";
    case Family::kB:
      return "B";
    case Family::kC:
      break;
  }
  return "C";
}

Family parse_family(const std::string& s) {
  if (s.size() == 1) {
    switch (std::toupper(static_cast<unsigned char>(s[0]))) {
      case 'A':
        return Family::kA;
      case 'B':
        return Family::kB;
      case 'C':
        return Family::kC;
    }
  }
  throw std::invalid_argument("unknown family '" + s + "'");
}

std::vector<int> infoset_counts(const GenSpec& spec) {
  check_spec(spec);
  const Layout l = layout(spec);
  std::vector<int> m(spec.n, 0);
  for (int k = 0; k < l.movers; ++k) {
    long long c = 1;
    for (int j : l.observed[k]) c *= spec.branching[j % spec.n];
    m[k % spec.n] += static_cast<int>(c);
  }
  return m;
}

Generated generate_description(const GenSpec& spec) {
  const std::vector<int> m = infoset_counts(spec);
  if (spec.expected_m && *spec.expected_m != m) {
    throw std::invalid_argument(
        std::string("family ") + to_string(spec.family) + " yields m = " +
        counts_text(m) + ", not " + counts_text(*spec.expected_m));
  }
  const Layout l = layout(spec);
  double leaves = 1.0;
  for (int k = 0; k < l.movers; ++k) leaves *= spec.branching[k % spec.n];
  if (leaves > 2e6) throw std::invalid_argument("game tree too large");

  Generated out;
  Draws draws(spec.seed, kPayoffStream);
  out.zero_prob = draws.real() * spec.zero_prob_max;
  GameDescription& d = out.description;
  d.num_players = spec.n;
  d.root = "r";

  std::vector<std::size_t> width(l.movers);
  for (int k = 0; k < l.movers; ++k) {
    std::uint64_t c = 1;
    for (int j : l.observed[k]) c *= spec.branching[j % spec.n];
    width[k] = std::to_string(c - 1).size();
  }
  const std::size_t stage_width = std::to_string(l.movers - 1).size();

  std::vector<int> hist;
  auto build = [&](auto&& self, const std::string& id) -> void {
    const int k = static_cast<int>(hist.size());
    RawNode node;
    if (k == l.movers) {
      node.kind = NodeKind::kTerminal;
      for (int i = 0; i < spec.n; ++i) {
        const bool zero = draws.real() < out.zero_prob;
        node.payoffs.push_back(
            zero ? 0.0
                 : static_cast<double>(
                       draws.integer(spec.payoff_lo, spec.payoff_hi)));
      }
      d.nodes.emplace(id, std::move(node));
      return;
    }
    const int player = k % spec.n;
    const int b = spec.branching[player];
    std::uint64_t index = 0;
    for (int j : l.observed[k]) {
      index = index * spec.branching[j % spec.n] + hist[j];
    }
    const std::string set_id =
        "s" + padded(k, stage_width) + "." + padded(index, width[k]);
    RawInfoset& is = d.infosets[set_id];
    if (is.members.empty()) {
      is.player = player + 1;
      for (int a = 0; a < b; ++a) is.actions.push_back("a" + std::to_string(a));
    }
    is.members.push_back(id);
    node.kind = NodeKind::kDecision;
    node.owner = player + 1;
    node.infoset = set_id;
    for (int a = 0; a < b; ++a) {
      node.actions.push_back(
          {"a" + std::to_string(a), id + "." + std::to_string(a), 0.0});
    }
    std::vector<std::string> kids;
    for (const auto& act : node.actions) kids.push_back(act.child);
    d.nodes.emplace(id, std::move(node));
    for (int a = 0; a < b; ++a) {
      hist.push_back(a);
      self(self, kids[a]);
      hist.pop_back();
    }
  };
  build(build, "r");
  return out;
}

Game generate(const GenSpec& spec) {
  return Game::from_description(generate_description(spec).description);
}

}  // namespace efg
