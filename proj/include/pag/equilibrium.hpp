#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "pag/utility.hpp"

namespace pag {

struct TargetChoice {
  bool survive = true;
  std::vector<CountryId> friends;      // contested friends pushed to survival
  std::vector<CountryId> adversaries;  // contested adversaries pushed under
};

// Exact optimum of country i's utility with the other rows held fixed,
// together with one canonical witness row per optimal target choice.
struct BestResponse {
  Rational value;
  std::vector<Row> witness_rows;           // sorted lexicographically
  std::vector<TargetChoice> target_sets;   // aligned with witness_rows
  bool survival_feasible = false;
  bool all_feasible_rows_optimal = false;  // every feasible row attains value
};

BestResponse best_response(const UtilityModel& model, const StrategyMatrix& U, CountryId i);

// Fast paths used by the grid scans; `a` must be assess(env, u).
Rational best_response_value(const UtilityModel& model, const RawMatrix& u, const Assessment& a,
                             CountryId i);
bool is_equilibrium_raw(const UtilityModel& model, const RawMatrix& u, const Assessment& a);

// No unilateral deviation over the full continuous strategy space strictly
// increases any country's utility. Exactness comes from the threshold
// structure of the best response, not from a grid.
bool is_equilibrium(const UtilityModel& model, const StrategyMatrix& U);

// A grid restricts entries to integer multiples of 1/denominator. Every
// p_i * denominator must be an integer.
struct GridPlan {
  unsigned long denominator = 1;
  // choices[r] lists row r's compositions over env.allowed_columns(r),
  // in units of 1/denominator.
  std::vector<std::vector<std::vector<std::uint64_t>>> choices;
  std::vector<Rational> unit_values;  // unit_values[u] == u / denominator
  mpz_class space;                    // product of per-row choice counts
};

mpz_class grid_space(const Environment& env, unsigned long denominator);
GridPlan plan_grid(const Environment& env, unsigned long denominator, const mpz_class& cap);

mpz_class default_space_cap();  // 10^7 matrices

// Largest denominator (a multiple of the powers' denominator lcm) whose grid
// stays within cap.
unsigned long largest_feasible_denominator(const Environment& env, const mpz_class& cap);

struct ScanOptions {
  int jobs = 1;
  mpz_class cap = default_space_cap();
};

// Visits every grid matrix exactly once. Workers partition the first row's
// choices; within a worker matrices arrive in odometer order, so worker-local
// results concatenated in worker order are independent of the job count.
// Return false from the visitor to cancel the scan.
using GridVisitor = std::function<bool(int worker, const RawMatrix&, const Assessment&)>;
void scan_grid(const Environment& env, const GridPlan& plan, int jobs, const GridVisitor& visit);

struct EquilibriumSet {
  unsigned long grid_denominator = 1;
  std::vector<StrategyMatrix> equilibria;
  bool exhaustive_over_grid = false;  // equilibria off the grid are not found
  mpz_class search_space;
};

EquilibriumSet enumerate_equilibria(const UtilityModel& model, unsigned long denominator,
                                    const ScanOptions& options = {});

enum class Schedule : std::int8_t { RoundRobin, Random };

struct DynamicsResult {
  std::vector<StrategyMatrix> trajectory;  // starting matrix, then one entry per swap
  std::vector<CountryId> movers;           // country whose row changed, per swap
  bool converged = false;
  unsigned rounds_used = 0;
};

// Repeatedly replaces one row with the canonical best-response witness
// (lexicographically smallest) whenever that strictly improves the mover's
// utility. Stops after a full pass without improvement or at max_rounds.
DynamicsResult best_response_dynamics(const UtilityModel& model, const StrategyMatrix& U0,
                                      Schedule schedule, std::uint64_t seed, unsigned max_rounds);

}  // namespace pag
