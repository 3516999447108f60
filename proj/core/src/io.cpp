#include "efg/io.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

#include "json.hpp"

namespace efg {

namespace {

using nlohmann::json;

[[noreturn]] void syntax(const std::string& msg) {
  throw GameError(GameError::Kind::kSyntax, msg);
}

const json& field(const json& obj, const char* name, const std::string& where) {
  auto it = obj.find(name);
  if (it == obj.end()) syntax(where + ": missing field '" + name + "'");
  return *it;
}

double to_probability(const json& v, const std::string& where) {
  if (v.is_number()) return v.get<double>();
  if (v.is_string()) {
    try {
      return parse_probability(v.get<std::string>());
    } catch (const std::invalid_argument&) {
      syntax(where + ": unreadable probability '" + v.get<std::string>() + "'");
    }
  }
  syntax(where + ": probability must be a number or string");
}

NodeKind to_kind(const std::string& s, const std::string& where) {
  if (s == "decision") return NodeKind::kDecision;
  if (s == "chance") return NodeKind::kChance;
  if (s == "terminal") return NodeKind::kTerminal;
  syntax(where + ": unknown node kind '" + s + "'");
}

const char* kind_name(NodeKind k) {
  switch (k) {
    case NodeKind::kDecision:
      return "decision";
    case NodeKind::kChance:
      return "chance";
    case NodeKind::kTerminal:
      break;
  }
  return "terminal";
}

std::vector<double> read_vector(const json& v, std::size_t expected,
                                const std::string& where) {
  if (!v.is_array()) throw ProfileError(where + ": expected an array");
  if (v.size() != expected) {
    throw ProfileError(where + ": expected " + std::to_string(expected) +
                       " entries, got " + std::to_string(v.size()));
  }
  std::vector<double> out;
  for (const auto& x : v) {
    try {
      out.push_back(to_probability(x, where));
    } catch (const GameError& e) {
      throw ProfileError(e.what());
    }
  }
  return out;
}

template <class Tag>
InfosetVectors<Tag> read_map(const Game& game, const json& obj, bool members,
                             const char* what) {
  if (!obj.is_object()) {
    throw ProfileError(std::string(what) + ": expected an object");
  }
  const auto& offsets = members ? game.member_offsets() : game.action_offsets();
  std::vector<double> flat(offsets->back(), 0.0);
  std::vector<char> seen(game.num_infosets(), 0);
  for (const auto& [id, arr] : obj.items()) {
    auto i = game.find_infoset(id);
    if (!i) throw ProfileError(std::string(what) + ": unknown infoset '" + id + "'");
    const std::size_t n = members ? game.num_members(*i) : game.num_actions(*i);
    auto v = read_vector(arr, n, std::string(what) + "." + id);
    std::copy(v.begin(), v.end(), flat.begin() + (*offsets)[*i]);
    seen[*i] = 1;
  }
  for (std::size_t i = 0; i < seen.size(); ++i) {
    if (!seen[i]) {
      throw ProfileError(std::string(what) + ": missing infoset '" +
                         game.infoset(static_cast<InfosetId>(i)).id + "'");
    }
  }
  return InfosetVectors<Tag>(offsets, std::move(flat));
}

template <class Tag>
json write_map(const Game& game, const InfosetVectors<Tag>& v) {
  json obj = json::object();
  for (std::size_t i = 0; i < v.num_infosets(); ++i) {
    auto s = v[static_cast<InfosetId>(i)];
    obj[game.infoset(static_cast<InfosetId>(i)).id] =
        std::vector<double>(s.begin(), s.end());
  }
  return obj;
}

}  // namespace

double parse_probability(std::string_view text) {
  auto parse = [](std::string_view s) {
    double v = 0.0;
    while (!s.empty() && s.front() == ' ') s.remove_prefix(1);
    while (!s.empty() && s.back() == ' ') s.remove_suffix(1);
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size() || s.empty()) {
      throw std::invalid_argument("not a number");
    }
    return v;
  };
  auto slash = text.find('/');
  if (slash == std::string_view::npos) return parse(text);
  const double den = parse(text.substr(slash + 1));
  if (den == 0.0) throw std::invalid_argument("zero denominator");
  return parse(text.substr(0, slash)) / den;
}

GameDescription parse_description(std::string_view document) {
  json doc;
  try {
    doc = json::parse(document);
  } catch (const json::parse_error& e) {
    syntax(std::string("malformed JSON: ") + e.what());
  }
  if (!doc.is_object()) syntax("game document must be a JSON object");

  GameDescription d;
  try {
    d.num_players = field(doc, "num_players", "game").get<int>();
    d.root = field(doc, "root", "game").get<std::string>();
    const json& nodes = field(doc, "nodes", "game");
    if (!nodes.is_object()) syntax("game: 'nodes' must be an object");
    for (const auto& [id, n] : nodes.items()) {
      const std::string where = "node '" + id + "'";
      if (!n.is_object()) syntax(where + ": expected an object");
      RawNode raw;
      raw.kind = to_kind(field(n, "kind", where).get<std::string>(), where);
      if (raw.kind == NodeKind::kDecision) {
        raw.owner = field(n, "owner", where).get<int>();
        raw.infoset = field(n, "infoset", where).get<std::string>();
      }
      if (auto a = n.find("actions"); a != n.end()) {
        if (!a->is_array()) syntax(where + ": 'actions' must be an array");
        for (const auto& act : *a) {
          RawAction ra;
          ra.label = field(act, "label", where).get<std::string>();
          ra.child = field(act, "child", where).get<std::string>();
          if (raw.kind == NodeKind::kChance) {
            ra.prob = to_probability(field(act, "prob", where), where);
          }
          raw.actions.push_back(std::move(ra));
        }
      }
      if (auto p = n.find("payoffs"); p != n.end()) {
        raw.payoffs = p->get<std::vector<double>>();
      }
      d.nodes.emplace(id, std::move(raw));
    }
    if (auto infosets = doc.find("infosets"); infosets != doc.end()) {
      if (!infosets->is_object()) syntax("game: 'infosets' must be an object");
      for (const auto& [id, is] : infosets->items()) {
        const std::string where = "infoset '" + id + "'";
        RawInfoset raw;
        raw.player = field(is, "player", where).get<int>();
        raw.members =
            field(is, "members", where).get<std::vector<std::string>>();
        raw.actions =
            field(is, "actions", where).get<std::vector<std::string>>();
        d.infosets.emplace(id, std::move(raw));
      }
    }
  } catch (const json::exception& e) {
    syntax(std::string("bad field type: ") + e.what());
  }
  return d;
}

Game parse_game(std::string_view document, bool require_perfect_recall) {
  return Game::from_description(parse_description(document),
                                require_perfect_recall);
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open '" + path.string() + "'");
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

Game load_game(const std::filesystem::path& path, bool require_perfect_recall) {
  return parse_game(read_file(path), require_perfect_recall);
}

std::string serialize(const GameDescription& d) {
  json doc;
  doc["num_players"] = d.num_players;
  doc["root"] = d.root;
  json nodes = json::object();
  for (const auto& [id, n] : d.nodes) {
    json obj;
    obj["kind"] = kind_name(n.kind);
    if (n.kind == NodeKind::kDecision) {
      obj["owner"] = n.owner;
      obj["infoset"] = n.infoset;
    }
    if (!n.actions.empty()) {
      json acts = json::array();
      for (const auto& a : n.actions) {
        json act{{"label", a.label}, {"child", a.child}};
        if (n.kind == NodeKind::kChance) act["prob"] = a.prob;
        acts.push_back(std::move(act));
      }
      obj["actions"] = std::move(acts);
    }
    if (n.kind == NodeKind::kTerminal) obj["payoffs"] = n.payoffs;
    nodes[id] = std::move(obj);
  }
  doc["nodes"] = std::move(nodes);
  json infosets = json::object();
  for (const auto& [id, is] : d.infosets) {
    infosets[id] = {{"player", is.player},
                    {"members", is.members},
                    {"actions", is.actions}};
  }
  doc["infosets"] = std::move(infosets);
  return doc.dump(1) + "\n";
}

std::string serialize(const Game& game) {
  return serialize(game.to_description());
}

ProfileDocument parse_profile(const Game& game, std::string_view document) {
  json doc;
  try {
    doc = json::parse(document);
  } catch (const json::parse_error& e) {
    throw ProfileError(std::string("malformed JSON: ") + e.what());
  }
  if (!doc.is_object()) throw ProfileError("profile must be a JSON object");
  ProfileDocument out;
  if (doc.contains("beta")) {
    out.beta = read_map<ActionTag>(game, doc["beta"], false, "beta");
    if (doc.contains("beta_tilde")) {
      out.beta_tilde =
          read_map<ActionTag>(game, doc["beta_tilde"], false, "beta_tilde");
    }
    if (doc.contains("mu")) {
      out.mu = read_map<MemberTag>(game, doc["mu"], true, "mu");
    }
  } else {
    out.beta = read_map<ActionTag>(game, doc, false, "profile");
  }
  return out;
}

std::string serialize_profile(const Game& game, const BehaviorProfile& beta) {
  return write_map(game, beta).dump(1) + "\n";
}

std::string serialize_assessment(const Game& game, const Assessment& a) {
  json doc;
  doc["beta"] = write_map(game, a.beta);
  doc["beta_tilde"] = write_map(game, a.beta_tilde);
  doc["mu"] = write_map(game, a.mu);
  return doc.dump(1) + "\n";
}

}  // namespace efg
