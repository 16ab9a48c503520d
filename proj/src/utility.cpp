#include "pag/utility.hpp"

#include <algorithm>
#include <set>
#include <tuple>

#include "pag/error.hpp"
#include "pag/json_util.hpp"

namespace pag {

namespace {

const PairValues kDefaultPair{Rational(1), Rational(0)};

void check_bound(const UtilityModel& model, const StrategyMatrix& U) {
  if (!model.env().same_structure(U.env())) {
    throw DomainError("utility model and strategy matrix are bound to different environments");
  }
}

}  // namespace

const char* to_string(UtilityForm form) {
  switch (form) {
    case UtilityForm::Basic:
      return "basic";
    case UtilityForm::FriendsFirst:
      return "friends-first";
    case UtilityForm::Additive:
      return "additive";
  }
  return "?";
}

UtilityForm utility_form_from_string(const std::string& text) {
  if (text == "basic") return UtilityForm::Basic;
  if (text == "friends-first") return UtilityForm::FriendsFirst;
  if (text == "additive") return UtilityForm::Additive;
  throw ParseError("unknown utility form '" + text +
                   "' (expected basic, friends-first or additive)");
}

UtilityModel UtilityModel::defaults(EnvPtr env, UtilityForm form) {
  if (!env) throw DomainError("utility model needs an environment");
  UtilityModel m;
  const int n = env->size();
  m.env_ = std::move(env);
  m.form_ = form;
  m.friend_vals_.assign(n, std::vector<PairValues>(n, kDefaultPair));
  m.adv_vals_.assign(n, std::vector<PairValues>(n, kDefaultPair));
  m.self_vals_.assign(n, kDefaultPair);
  return m;
}

UtilityModel UtilityModel::with_form(UtilityForm form) const {
  UtilityModel copy = *this;
  copy.form_ = form;
  return copy;
}

const PairValues& UtilityModel::pair_values(CountryId i, CountryId j, RelationSign sign) const {
  if (i == j) throw DomainError("pair_values: use self_values for the diagonal");
  env().label(i);  // id checks
  env().label(j);
  return sign == RelationSign::Friend ? friend_vals_[i][j] : adv_vals_[i][j];
}

const PairValues& UtilityModel::self_values(CountryId i) const {
  env().label(i);
  return self_vals_[i];
}

void UtilityModel::set_pair_values(CountryId i, CountryId j, RelationSign sign,
                                   PairValues values) {
  if (i == j) throw DomainError("set_pair_values: use set_self_values for the diagonal");
  env().label(i);
  env().label(j);
  if (values.favorable < values.unfavorable) {
    throw ParseError("pairwise utility for ('" + env().label(i) + "', '" + env().label(j) +
                     "'): favorable value must be at least the unfavorable value");
  }
  (sign == RelationSign::Friend ? friend_vals_ : adv_vals_)[i][j] = std::move(values);
}

void UtilityModel::set_self_values(CountryId i, PairValues values) {
  env().label(i);
  if (values.favorable < values.unfavorable) {
    throw ParseError("self utility of '" + env().label(i) +
                     "': survive value must be at least the fail value");
  }
  self_vals_[i] = std::move(values);
}

Rational realized_pairwise(const UtilityModel& model, CountryId i, CountryId j, State x_j) {
  const Environment& env = model.env();
  if (i == j) throw DomainError("realized_pairwise needs two distinct countries");
  auto sign = env.sign(i, j);
  if (!sign) {
    throw DomainError("realized_pairwise: '" + env.label(i) + "' and '" + env.label(j) +
                      "' are unrelated");
  }
  const PairValues& v = model.pair_values(i, j, *sign);
  bool favorable = *sign == RelationSign::Friend ? survives(x_j) : x_j != State::Safe;
  return favorable ? v.favorable : v.unfavorable;
}

FavorableSets favorable_sets(const StrategyMatrix& U, CountryId i) {
  const Environment& env = U.env();
  Assessment a = assess(env, U.raw());
  FavorableSets out;
  for (CountryId j : env.friends_of(i)) {
    if (survives(a.states[j])) out.friends.push_back(j);
  }
  for (CountryId j : env.adversaries(i)) {
    if (a.states[j] != State::Safe) out.adversaries.push_back(j);
  }
  return out;
}

Rational utility_from_states(const UtilityModel& model, CountryId i,
                             const std::vector<State>& states) {
  const Environment& env = model.env();
  env.label(i);
  if (!survives(states[i])) return model.self_values(i).unfavorable;

  switch (model.form()) {
    case UtilityForm::Basic: {
      // Sum of favorable values over favorable neighbors including self;
      // unfavorable neighbors contribute nothing.
      Rational v = model.self_values(i).favorable;
      for (CountryId j : env.proper_friends(i)) {
        if (survives(states[j])) v += model.pair_values(i, j, RelationSign::Friend).favorable;
      }
      for (CountryId j : env.adversaries(i)) {
        if (states[j] != State::Safe) {
          v += model.pair_values(i, j, RelationSign::Adversary).favorable;
        }
      }
      return v;
    }
    case UtilityForm::FriendsFirst: {
      // Adversary gains count only once every friend is safe/precarious.
      Rational v = model.self_values(i).favorable;
      bool all_friends = true;
      for (CountryId j : env.proper_friends(i)) {
        if (survives(states[j])) {
          v += model.pair_values(i, j, RelationSign::Friend).favorable;
        } else {
          all_friends = false;
        }
      }
      if (all_friends) {
        for (CountryId j : env.adversaries(i)) {
          if (states[j] != State::Safe) {
            v += model.pair_values(i, j, RelationSign::Adversary).favorable;
          }
        }
      }
      return v;
    }
    case UtilityForm::Additive: {
      Rational v = model.self_values(i).favorable;
      for (CountryId j : env.proper_friends(i)) {
        const PairValues& p = model.pair_values(i, j, RelationSign::Friend);
        v += survives(states[j]) ? p.favorable : p.unfavorable;
      }
      for (CountryId j : env.adversaries(i)) {
        const PairValues& p = model.pair_values(i, j, RelationSign::Adversary);
        v += states[j] != State::Safe ? p.favorable : p.unfavorable;
      }
      return v;
    }
  }
  throw DomainError("unreachable utility form");
}

Rational total_utility(const UtilityModel& model, const StrategyMatrix& U, CountryId i) {
  check_bound(model, U);
  Assessment a = assess(U.env(), U.raw());
  return utility_from_states(model, i, a.states);
}

Rational welfare_from_states(const UtilityModel& model, const std::vector<State>& states) {
  Rational sum = 0;
  for (int i = 0; i < model.env().size(); ++i) sum += utility_from_states(model, i, states);
  return sum;
}

Rational total_welfare(const UtilityModel& model, const StrategyMatrix& U) {
  check_bound(model, U);
  Assessment a = assess(U.env(), U.raw());
  return welfare_from_states(model, a.states);
}

Scenario parse_scenario(const std::string& json_text) {
  EnvPtr env = parse_environment(json_text);
  Json doc = parse_json_document(json_text);

  UtilityModel model = UtilityModel::defaults(env);
  if (!doc.contains("utilities")) return Scenario{std::move(env), std::move(model)};

  const Json& u = doc.at("utilities");
  require_keys(u, "utilities section", {"form", "pairs", "self"}, {});

  if (u.contains("form")) {
    if (!u.at("form").is_string()) throw ParseError("utilities form must be a string");
    model = model.with_form(utility_form_from_string(u.at("form").get<std::string>()));
  }

  if (u.contains("pairs")) {
    if (!u.at("pairs").is_array()) throw ParseError("utilities pairs must be an array");
    std::set<std::tuple<CountryId, CountryId, RelationSign>> seen;
    for (const Json& entry : u.at("pairs")) {
      require_keys(entry, "utilities pair entry", {"i", "j", "sign", "favorable", "unfavorable"},
                   {"i", "j", "favorable", "unfavorable"});
      if (!entry.at("i").is_string() || !entry.at("j").is_string()) {
        throw ParseError("utilities pair labels must be strings");
      }
      std::string li = entry.at("i").get<std::string>();
      std::string lj = entry.at("j").get<std::string>();
      CountryId i = env->id_of(li);
      CountryId j = env->id_of(lj);
      if (i == j) {
        throw ParseError("utilities pair ('" + li + "', '" + lj +
                         "'): use the self section for diagonal values");
      }
      RelationSign sign;
      if (entry.contains("sign")) {
        if (!entry.at("sign").is_string()) throw ParseError("utilities pair sign must be a string");
        std::string sign_text = entry.at("sign").get<std::string>();
        if (sign_text == "friend") {
          sign = RelationSign::Friend;
        } else if (sign_text == "adversary") {
          sign = RelationSign::Adversary;
        } else {
          throw ParseError("utilities pair sign must be 'friend' or 'adversary'");
        }
      } else {
        auto rel = env->sign(i, j);
        if (!rel) {
          throw ParseError("utilities pair ('" + li + "', '" + lj +
                           "'): countries are unrelated, specify a sign");
        }
        sign = *rel;
      }
      if (!seen.insert({i, j, sign}).second) {
        throw ParseError("duplicate utilities pair ('" + li + "', '" + lj + "', " +
                         to_string(sign) + ")");
      }
      PairValues values{
          rational_field(entry.at("favorable"), "favorable value of ('" + li + "', '" + lj + "')"),
          rational_field(entry.at("unfavorable"),
                         "unfavorable value of ('" + li + "', '" + lj + "')")};
      model.set_pair_values(i, j, sign, std::move(values));
    }
  }

  if (u.contains("self")) {
    if (!u.at("self").is_array()) throw ParseError("utilities self must be an array");
    std::set<CountryId> seen;
    for (const Json& entry : u.at("self")) {
      require_keys(entry, "utilities self entry", {"i", "survive", "fail"},
                   {"i", "survive", "fail"});
      if (!entry.at("i").is_string()) throw ParseError("utilities self label must be a string");
      std::string li = entry.at("i").get<std::string>();
      CountryId i = env->id_of(li);
      if (!seen.insert(i).second) throw ParseError("duplicate utilities self entry '" + li + "'");
      PairValues values{rational_field(entry.at("survive"), "survive value of '" + li + "'"),
                        rational_field(entry.at("fail"), "fail value of '" + li + "'")};
      model.set_self_values(i, std::move(values));
    }
  }

  return Scenario{std::move(env), std::move(model)};
}

std::string scenario_json(const Scenario& scenario) {
  const Environment& env = *scenario.env;
  const UtilityModel& model = scenario.model;
  Json doc = environment_to_json(env);

  std::vector<CountryId> order(env.size());
  for (int i = 0; i < env.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(),
            [&](CountryId a, CountryId b) { return env.label(a) < env.label(b); });

  Json pairs = Json::array();
  for (CountryId i : order) {
    for (CountryId j : order) {
      if (i == j) continue;
      for (RelationSign sign : {RelationSign::Friend, RelationSign::Adversary}) {
        const PairValues& v = model.pair_values(i, j, sign);
        if (v.favorable == kDefaultPair.favorable && v.unfavorable == kDefaultPair.unfavorable) {
          continue;
        }
        Json entry = Json::object();
        entry["i"] = env.label(i);
        entry["j"] = env.label(j);
        entry["sign"] = to_string(sign);
        entry["favorable"] = fraction_string(v.favorable);
        entry["unfavorable"] = fraction_string(v.unfavorable);
        pairs.push_back(std::move(entry));
      }
    }
  }

  Json self = Json::array();
  for (CountryId i : order) {
    const PairValues& v = model.self_values(i);
    if (v.favorable == kDefaultPair.favorable && v.unfavorable == kDefaultPair.unfavorable) {
      continue;
    }
    Json entry = Json::object();
    entry["i"] = env.label(i);
    entry["survive"] = fraction_string(v.favorable);
    entry["fail"] = fraction_string(v.unfavorable);
    self.push_back(std::move(entry));
  }

  bool default_model =
      model.form() == UtilityForm::Additive && pairs.empty() && self.empty();
  if (!default_model) {
    Json utilities = Json::object();
    utilities["form"] = to_string(model.form());
    if (!pairs.empty()) utilities["pairs"] = std::move(pairs);
    if (!self.empty()) utilities["self"] = std::move(self);
    doc["utilities"] = std::move(utilities);
  }
  return doc.dump(2) + "\n";
}

}  // namespace pag
