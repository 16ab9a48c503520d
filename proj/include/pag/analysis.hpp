#pragma once

#include <optional>
#include <string>
#include <vector>

#include "pag/equilibrium.hpp"

namespace pag {

// Optimal welfare is taken either over the equilibrium set or over the whole
// grid of strategy matrices; every report records which one was used.
enum class WelfareMode : std::int8_t { OverEquilibria, OverAllMatrices };

const char* to_string(WelfareMode mode);
WelfareMode welfare_mode_from_string(const std::string& text);

// Maximum utility country i can attain, over the d-grid (OverAllMatrices) or
// over the grid equilibria (OverEquilibria; an empty equilibrium set is an
// error, never a silent zero).
Rational optimal_welfare(const UtilityModel& model, CountryId i, WelfareMode mode,
                         unsigned long denominator, const ScanOptions& options = {});

// Checks that `large` equals `small` except that country i (given as an id of
// `small`) gained at least one friend: pairs {i,k} may flip from absent or
// adversary to friend, everything else must match. Returns i's id in `large`.
CountryId validate_environment_pair(const Environment& small, const Environment& large,
                                    CountryId i_small);

// Both models must carry identical tables (all four sign-keyed values per
// directed pair, self values, and form).
void validate_model_pair(const UtilityModel& small, const UtilityModel& large);

struct ParadoxReport {
  std::string country;
  WelfareMode mode = WelfareMode::OverEquilibria;
  unsigned long grid_denominator = 1;
  Rational welfare_small;  // optimal welfare where i has fewer friends
  Rational welfare_large;
  bool paradox = false;  // welfare_small > welfare_large
};

// A paradox: strictly higher optimal welfare in the environment where the
// country has strictly fewer friends, everything else equal.
ParadoxReport detect_paradox(const UtilityModel& model_small, const UtilityModel& model_large,
                             CountryId i_small, WelfareMode mode, unsigned long denominator,
                             const ScanOptions& options = {});

struct SurvivalMonotonicityReport {
  std::string country;
  unsigned long grid_denominator = 1;
  mpz_class equilibria_small, equilibria_large;
  bool survives_all_small = false;
  bool survives_all_large = false;
  bool implication_holds = false;  // survives_all_small implies survives_all_large
  // Large-environment equilibrium in which the country fails; present only
  // when the implication is violated.
  std::optional<StrategyMatrix> counterexample;
};

// If a country survives in every grid equilibrium, does it still do so after
// gaining friends? Checked by full enumeration of both games.
SurvivalMonotonicityReport check_survival_monotonicity(const UtilityModel& model_small,
                                                       const UtilityModel& model_large,
                                                       CountryId i_small,
                                                       unsigned long denominator,
                                                       const ScanOptions& options = {});

struct NecessaryConditionReport {
  bool holds = false;
  std::vector<CountryId> witnesses;  // every j with t_ij^F(0) < t_ij^A(1)
};

// The paradox requires some j whose unfavorable-friend value is below its
// favorable-adversary value.
NecessaryConditionReport check_necessary_condition(const UtilityModel& model, CountryId i);

struct EnvironmentPair {
  Environment more_friends;   // country i befriends the contested countries
  Environment fewer_friends;  // identical except those pairs are adversarial
};

// Builds the two environments around one contested country j: everyone except
// i is j's adversary, i befriends every country, and in the second
// environment i turns against j as well. Requires p_i + p_j <= sum of the
// remaining powers.
EnvironmentPair construct_contested_pair(const std::vector<Rational>& powers, CountryId i,
                                         CountryId j);

enum class GroupRelations : std::int8_t { MutuallyAdversarial, Unrelated };

// Group generalization: every member of `group` is an adversary of everything
// outside {i} (and of the other members under MutuallyAdversarial). Requires
// p_i + sum(group) <= sum of the rest.
EnvironmentPair construct_contested_group_pair(const std::vector<Rational>& powers, CountryId i,
                                               std::vector<CountryId> group,
                                               GroupRelations within =
                                                   GroupRelations::MutuallyAdversarial);

// Some country always survives under any valid allocation. Exists as a
// falsification probe for the test suites.
bool has_survivor(const StrategyMatrix& U);

struct PoaBounds {
  Rational lower;      // always 1
  Rational upper;      // A / B
  Rational bound_A;    // n * max_i (all-favorable sum)
  Rational bound_B;    // (n-1) * min_i t_ii(0) + min_i t_ii(1)
};

// Throws DomainError when B <= 0: the ratio bound is meaningless with a
// non-positive denominator.
PoaBounds poa_bounds(const UtilityModel& model);

struct PoAReport {
  Rational max_welfare;              // over the whole grid
  Rational min_equilibrium_welfare;  // over grid equilibria
  std::optional<Rational> poa;       // absent when the denominator is not positive
  std::optional<PoaBounds> bounds;   // absent when B <= 0
  bool within_bounds = false;        // 1 <= poa <= A/B, when both are defined
  unsigned long grid_denominator = 1;
  mpz_class equilibrium_count;
  mpz_class search_space;
};

PoAReport price_of_anarchy(const UtilityModel& model, unsigned long denominator,
                           const ScanOptions& options = {});

}  // namespace pag
