#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "pag/environment.hpp"

namespace pag {

enum class State : std::int8_t { Safe, Precarious, Unsafe };

const char* to_string(State s);

// "Survives" means safe or precarious throughout.
inline bool survives(State s) { return s != State::Unsafe; }

using Row = std::vector<Rational>;
using RawMatrix = std::vector<Row>;

// A joint allocation bound to the environment it was validated against.
// Row i sums exactly to p_i, entries are nonnegative and zero outside
// F_i ∪ A_i (the diagonal is always permitted).
class StrategyMatrix {
 public:
  static StrategyMatrix validate(EnvPtr env, RawMatrix raw);

  const Environment& env() const { return *env_; }
  const EnvPtr& env_ptr() const { return env_; }
  const Rational& at(CountryId i, CountryId j) const { return u_[i][j]; }
  const Row& row(CountryId i) const { return u_[i]; }
  const RawMatrix& raw() const { return u_; }

  // Value-semantics row replacement; the new row is validated.
  StrategyMatrix with_row(CountryId i, Row row) const;

 private:
  StrategyMatrix(EnvPtr env, RawMatrix u) : env_(std::move(env)), u_(std::move(u)) {}

  EnvPtr env_;
  RawMatrix u_;
};

// Per-country support, threat and state for one allocation.
struct Assessment {
  std::vector<Rational> sigma;
  std::vector<Rational> tau;
  std::vector<State> states;
};

Assessment assess(const Environment& env, const RawMatrix& u);

// sigma_i: incoming friendly allocations (including u_ii) plus i's own
// allocations against its adversaries.
Rational total_support(const StrategyMatrix& U, CountryId i);
// tau_i: incoming allocations from i's adversaries.
Rational total_threat(const StrategyMatrix& U, CountryId i);
State state_of(const StrategyMatrix& U, CountryId i);
std::vector<State> state_vector(const StrategyMatrix& U);

// Allocation file: {"rows": {"<label>": {"<label>": rational, ...}, ...}};
// omitted cells are zero.
StrategyMatrix parse_allocation(EnvPtr env, const std::string& json_text);
std::string allocation_json(const StrategyMatrix& U);

}  // namespace pag
