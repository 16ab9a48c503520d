#pragma once

#include <string>
#include <vector>

#include "pag/mechanics.hpp"

namespace pag {

enum class UtilityForm : std::int8_t { Basic, FriendsFirst, Additive };

const char* to_string(UtilityForm form);
UtilityForm utility_form_from_string(const std::string& text);

struct PairValues {
  Rational favorable;    // t_ij(1)
  Rational unfavorable;  // t_ij(0), never above favorable
};

// Two-valued pairwise utilities plus the functional-form selector. Values are
// kept for both signs of every directed pair so environments that differ in
// one relation can be compared against the same table; unspecified entries
// take the default fixture t(1)=1, t(0)=0.
class UtilityModel {
 public:
  static UtilityModel defaults(EnvPtr env, UtilityForm form = UtilityForm::Additive);

  const Environment& env() const { return *env_; }
  const EnvPtr& env_ptr() const { return env_; }
  UtilityForm form() const { return form_; }
  UtilityModel with_form(UtilityForm form) const;

  // i != j; sign selects the friend-type or adversary-type table.
  const PairValues& pair_values(CountryId i, CountryId j, RelationSign sign) const;
  // Self pairs are always friend-type: favorable = survives, unfavorable = fails.
  const PairValues& self_values(CountryId i) const;

  void set_pair_values(CountryId i, CountryId j, RelationSign sign, PairValues values);
  void set_self_values(CountryId i, PairValues values);

 private:
  UtilityModel() = default;

  EnvPtr env_;
  UtilityForm form_ = UtilityForm::Additive;
  std::vector<std::vector<PairValues>> friend_vals_;
  std::vector<std::vector<PairValues>> adv_vals_;
  std::vector<PairValues> self_vals_;
};

// Utility country i realizes from neighbor j in state x_j: the favorable
// value when a friend survives or an adversary is unsafe/precarious, the
// unfavorable value otherwise.
Rational realized_pairwise(const UtilityModel& model, CountryId i, CountryId j, State x_j);

struct FavorableSets {
  std::vector<CountryId> friends;      // F^1_i, includes i itself when i survives
  std::vector<CountryId> adversaries;  // A^1_i
};
FavorableSets favorable_sets(const StrategyMatrix& U, CountryId i);

Rational total_utility(const UtilityModel& model, const StrategyMatrix& U, CountryId i);
Rational total_welfare(const UtilityModel& model, const StrategyMatrix& U);

// State-vector variants used by the enumeration paths.
Rational utility_from_states(const UtilityModel& model, CountryId i,
                             const std::vector<State>& states);
Rational welfare_from_states(const UtilityModel& model, const std::vector<State>& states);

struct Scenario {
  EnvPtr env;
  UtilityModel model;
};

// Parses an environment file together with its optional "utilities" section.
Scenario parse_scenario(const std::string& json_text);

// Canonical file: canonical environment plus the non-default utility entries.
std::string scenario_json(const Scenario& scenario);

}  // namespace pag
