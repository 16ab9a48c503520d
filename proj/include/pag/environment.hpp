#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <tuple>
#include <vector>

#include "pag/rational.hpp"

namespace pag {

using CountryId = int;

enum class RelationSign : std::int8_t { Friend, Adversary };

const char* to_string(RelationSign sign);

struct Country {
  std::string label;
  Rational power;
};

// The signed relationship graph with country powers. Immutable after
// construction and safe to share across threads; mutating operations return
// new values so two environments can be compared side by side.
class Environment {
 public:
  using RelationSpec = std::tuple<std::string, std::string, RelationSign>;

  static Environment create(std::vector<Country> countries,
                            const std::vector<RelationSpec>& relations);

  int size() const { return static_cast<int>(countries_.size()); }
  const std::string& label(CountryId i) const;
  const Rational& power(CountryId i) const;
  const std::vector<Country>& countries() const { return countries_; }

  bool has_label(const std::string& label) const;
  CountryId id_of(const std::string& label) const;

  // Sign of the {i, j} pair; empty when the countries are unrelated.
  std::optional<RelationSign> sign(CountryId i, CountryId j) const;
  bool are_friends(CountryId i, CountryId j) const;
  bool are_adversaries(CountryId i, CountryId j) const;

  // Friends excluding i itself, sorted by id.
  const std::vector<CountryId>& proper_friends(CountryId i) const;
  const std::vector<CountryId>& adversaries(CountryId i) const;
  // {i} together with i's proper friends: the paper's F_i always contains i.
  std::vector<CountryId> friends_of(CountryId i) const;
  // Columns country i may allocate to: {i} plus friends plus adversaries, sorted.
  const std::vector<CountryId>& allowed_columns(CountryId i) const;
  int relation_count() const { return relation_count_; }

  // Compact canonical text of countries and relations; equal strings mean the
  // same game structure. Used for binding checks between matrices, models and
  // environments.
  const std::string& canonical_form() const { return canonical_; }
  bool same_structure(const Environment& other) const {
    return canonical_ == other.canonical_;
  }

 private:
  Environment() = default;
  void check_id(CountryId i) const;

  std::vector<Country> countries_;
  std::vector<std::vector<std::int8_t>> rel_;  // 0 none, 1 friend, -1 adversary
  std::vector<std::vector<CountryId>> proper_friends_;
  std::vector<std::vector<CountryId>> adversaries_;
  std::vector<std::vector<CountryId>> allowed_columns_;
  std::vector<std::pair<std::string, CountryId>> by_label_;  // sorted by label
  std::string canonical_;
  int relation_count_ = 0;
};

using EnvPtr = std::shared_ptr<const Environment>;

inline EnvPtr share(Environment env) {
  return std::make_shared<const Environment>(std::move(env));
}

// Returns a copy of env where {i, j} is a friendship. The pair must currently
// be absent or adversarial; re-adding an existing friendship is an error so
// callers know the change is real.
Environment add_friend(const Environment& env, CountryId i, CountryId j);

// Parses the environment file (countries + relations). A "utilities" key is
// accepted and left for the utility module; any other unknown key is rejected.
EnvPtr parse_environment(const std::string& json_text);

// Canonical serialization: countries sorted by label, relation pairs sorted
// lexicographically, powers as "num/den". parse . serialize is the identity
// on canonicalized environments.
std::string environment_json(const Environment& env);

}  // namespace pag
