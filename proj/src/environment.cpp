#include "pag/environment.hpp"

#include <algorithm>
#include <sstream>
#include <utility>

#include "pag/error.hpp"
#include "pag/json_util.hpp"

namespace pag {

const char* to_string(RelationSign sign) {
  return sign == RelationSign::Friend ? "friend" : "adversary";
}

Environment Environment::create(std::vector<Country> countries,
                                const std::vector<RelationSpec>& relations) {
  Environment env;
  if (countries.empty()) throw ParseError("environment needs at least one country");
  env.countries_ = std::move(countries);
  const int n = env.size();

  for (int i = 0; i < n; ++i) {
    const Country& c = env.countries_[i];
    if (c.label.empty()) throw ParseError("country " + std::to_string(i) + ": empty label");
    if (c.power < 0) throw ParseError("country '" + c.label + "': negative power");
    env.by_label_.emplace_back(c.label, i);
  }
  std::sort(env.by_label_.begin(), env.by_label_.end());
  for (std::size_t k = 1; k < env.by_label_.size(); ++k) {
    if (env.by_label_[k].first == env.by_label_[k - 1].first) {
      throw ParseError("duplicate country label '" + env.by_label_[k].first + "'");
    }
  }

  env.rel_.assign(n, std::vector<std::int8_t>(n, 0));
  for (const auto& [a, b, sign] : relations) {
    CountryId i = env.id_of(a);
    CountryId j = env.id_of(b);
    if (i == j) throw ParseError("relation ('" + a + "', '" + b + "'): self-relation forbidden");
    if (env.rel_[i][j] != 0) {
      throw ParseError("duplicate relation for pair ('" + a + "', '" + b + "')");
    }
    std::int8_t value = sign == RelationSign::Friend ? 1 : -1;
    env.rel_[i][j] = value;
    env.rel_[j][i] = value;
    ++env.relation_count_;
  }

  env.proper_friends_.resize(n);
  env.adversaries_.resize(n);
  env.allowed_columns_.resize(n);
  for (int i = 0; i < n; ++i) {
    env.allowed_columns_[i].push_back(i);
    for (int j = 0; j < n; ++j) {
      if (env.rel_[i][j] == 1) {
        env.proper_friends_[i].push_back(j);
        env.allowed_columns_[i].push_back(j);
      } else if (env.rel_[i][j] == -1) {
        env.adversaries_[i].push_back(j);
        env.allowed_columns_[i].push_back(j);
      }
    }
    std::sort(env.allowed_columns_[i].begin(), env.allowed_columns_[i].end());
  }

  std::ostringstream canon;
  for (const auto& [label, id] : env.by_label_) {
    canon << label.size() << ':' << label << '=' << fraction_string(env.countries_[id].power)
          << ';';
  }
  std::vector<std::tuple<std::string, std::string, char>> edges;
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      if (env.rel_[i][j] == 0) continue;
      std::string a = env.countries_[i].label;
      std::string b = env.countries_[j].label;
      if (b < a) std::swap(a, b);
      edges.emplace_back(a, b, env.rel_[i][j] == 1 ? '+' : '-');
    }
  }
  std::sort(edges.begin(), edges.end());
  for (const auto& [a, b, s] : edges) {
    canon << a.size() << ':' << a << ',' << b.size() << ':' << b << s << ';';
  }
  env.canonical_ = canon.str();
  return env;
}

void Environment::check_id(CountryId i) const {
  if (i < 0 || i >= size()) {
    throw DomainError("unknown country id " + std::to_string(i));
  }
}

const std::string& Environment::label(CountryId i) const {
  check_id(i);
  return countries_[i].label;
}

const Rational& Environment::power(CountryId i) const {
  check_id(i);
  return countries_[i].power;
}

bool Environment::has_label(const std::string& label) const {
  auto it = std::lower_bound(by_label_.begin(), by_label_.end(),
                             std::make_pair(label, CountryId{0}));
  return it != by_label_.end() && it->first == label;
}

CountryId Environment::id_of(const std::string& label) const {
  auto it = std::lower_bound(by_label_.begin(), by_label_.end(),
                             std::make_pair(label, CountryId{0}));
  if (it == by_label_.end() || it->first != label) {
    throw ParseError("unknown country label '" + label + "'");
  }
  return it->second;
}

std::optional<RelationSign> Environment::sign(CountryId i, CountryId j) const {
  check_id(i);
  check_id(j);
  if (rel_[i][j] == 1) return RelationSign::Friend;
  if (rel_[i][j] == -1) return RelationSign::Adversary;
  return std::nullopt;
}

bool Environment::are_friends(CountryId i, CountryId j) const {
  check_id(i);
  check_id(j);
  return rel_[i][j] == 1;
}

bool Environment::are_adversaries(CountryId i, CountryId j) const {
  check_id(i);
  check_id(j);
  return rel_[i][j] == -1;
}

const std::vector<CountryId>& Environment::proper_friends(CountryId i) const {
  check_id(i);
  return proper_friends_[i];
}

const std::vector<CountryId>& Environment::adversaries(CountryId i) const {
  check_id(i);
  return adversaries_[i];
}

std::vector<CountryId> Environment::friends_of(CountryId i) const {
  check_id(i);
  std::vector<CountryId> out = proper_friends_[i];
  out.insert(std::lower_bound(out.begin(), out.end(), i), i);
  return out;
}

const std::vector<CountryId>& Environment::allowed_columns(CountryId i) const {
  check_id(i);
  return allowed_columns_[i];
}

Environment add_friend(const Environment& env, CountryId i, CountryId j) {
  if (i == j) throw DomainError("add_friend: countries must be distinct");
  if (env.are_friends(i, j)) {
    throw DomainError("add_friend: '" + env.label(i) + "' and '" + env.label(j) +
                      "' are already friends");
  }
  std::vector<Environment::RelationSpec> relations;
  const int n = env.size();
  for (int a = 0; a < n; ++a) {
    for (int b = a + 1; b < n; ++b) {
      if ((a == i && b == j) || (a == j && b == i)) continue;
      if (auto s = env.sign(a, b)) {
        relations.emplace_back(env.label(a), env.label(b), *s);
      }
    }
  }
  relations.emplace_back(env.label(i), env.label(j), RelationSign::Friend);
  return Environment::create(env.countries(), relations);
}

EnvPtr parse_environment(const std::string& json_text) {
  Json doc = parse_json_document(json_text);
  require_keys(doc, "environment file", {"countries", "relations", "utilities"}, {"countries"});

  std::vector<Country> countries;
  for (const Json& entry : doc.at("countries")) {
    require_keys(entry, "countries entry", {"label", "power"}, {"label", "power"});
    if (!entry.at("label").is_string()) throw ParseError("country label must be a string");
    Country c;
    c.label = entry.at("label").get<std::string>();
    c.power = rational_field(entry.at("power"), "power of country '" + c.label + "'");
    countries.push_back(std::move(c));
  }

  std::vector<Environment::RelationSpec> relations;
  if (doc.contains("relations")) {
    if (!doc.at("relations").is_array()) throw ParseError("'relations' must be an array");
    for (const Json& entry : doc.at("relations")) {
      require_keys(entry, "relations entry", {"a", "b", "sign"}, {"a", "b", "sign"});
      if (!entry.at("a").is_string() || !entry.at("b").is_string() ||
          !entry.at("sign").is_string()) {
        throw ParseError("relation fields 'a', 'b', 'sign' must be strings");
      }
      std::string sign_text = entry.at("sign").get<std::string>();
      RelationSign sign;
      if (sign_text == "friend") {
        sign = RelationSign::Friend;
      } else if (sign_text == "adversary") {
        sign = RelationSign::Adversary;
      } else {
        throw ParseError("relation sign must be 'friend' or 'adversary', got '" + sign_text +
                         "'");
      }
      relations.emplace_back(entry.at("a").get<std::string>(), entry.at("b").get<std::string>(),
                             sign);
    }
  }

  return share(Environment::create(std::move(countries), relations));
}

std::string environment_json(const Environment& env) {
  return environment_to_json(env).dump(2) + "\n";
}

Json environment_to_json(const Environment& env) {
  Json doc = Json::object();
  Json countries = Json::array();
  std::vector<CountryId> order(env.size());
  for (int i = 0; i < env.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(),
            [&](CountryId a, CountryId b) { return env.label(a) < env.label(b); });
  for (CountryId i : order) {
    Json c = Json::object();
    c["label"] = env.label(i);
    c["power"] = fraction_string(env.power(i));
    countries.push_back(std::move(c));
  }
  doc["countries"] = std::move(countries);

  std::vector<std::tuple<std::string, std::string, RelationSign>> edges;
  for (int i = 0; i < env.size(); ++i) {
    for (int j = i + 1; j < env.size(); ++j) {
      if (auto s = env.sign(i, j)) {
        std::string a = env.label(i);
        std::string b = env.label(j);
        if (b < a) std::swap(a, b);
        edges.emplace_back(a, b, *s);
      }
    }
  }
  std::sort(edges.begin(), edges.end());
  Json relations = Json::array();
  for (const auto& [a, b, s] : edges) {
    Json r = Json::object();
    r["a"] = a;
    r["b"] = b;
    r["sign"] = to_string(s);
    relations.push_back(std::move(r));
  }
  doc["relations"] = std::move(relations);
  return doc;
}

}  // namespace pag
