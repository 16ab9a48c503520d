#include "pag/mechanics.hpp"

#include <algorithm>

#include "pag/error.hpp"
#include "pag/json_util.hpp"

namespace pag {

const char* to_string(State s) {
  switch (s) {
    case State::Safe:
      return "safe";
    case State::Precarious:
      return "precarious";
    case State::Unsafe:
      return "unsafe";
  }
  return "?";
}

StrategyMatrix StrategyMatrix::validate(EnvPtr env, RawMatrix raw) {
  if (!env) throw DomainError("strategy matrix needs an environment");
  const int n = env->size();
  if (static_cast<int>(raw.size()) != n) {
    throw ParseError("strategy matrix must have " + std::to_string(n) + " rows, got " +
                     std::to_string(raw.size()));
  }
  for (int i = 0; i < n; ++i) {
    if (static_cast<int>(raw[i].size()) != n) {
      throw ParseError("row of '" + env->label(i) + "' must have " + std::to_string(n) +
                       " entries");
    }
    Rational sum = 0;
    for (int j = 0; j < n; ++j) {
      const Rational& v = raw[i][j];
      if (v < 0) {
        throw ParseError("allocation of '" + env->label(i) + "' toward '" + env->label(j) +
                         "' is negative");
      }
      if (v > 0 && i != j && !env->sign(i, j)) {
        throw ParseError("'" + env->label(i) + "' allocates to non-neighbor '" + env->label(j) +
                         "'");
      }
      sum += v;
    }
    if (sum != env->power(i)) {
      throw ParseError("row of '" + env->label(i) + "' sums to " + fraction_string(sum) +
                       ", expected power " + fraction_string(env->power(i)));
    }
  }
  return StrategyMatrix(std::move(env), std::move(raw));
}

StrategyMatrix StrategyMatrix::with_row(CountryId i, Row row) const {
  if (i < 0 || i >= env_->size()) throw DomainError("unknown country id " + std::to_string(i));
  RawMatrix copy = u_;
  copy[i] = std::move(row);
  return validate(env_, std::move(copy));
}

Assessment assess(const Environment& env, const RawMatrix& u) {
  const int n = env.size();
  Assessment a;
  a.sigma.assign(n, Rational(0));
  a.tau.assign(n, Rational(0));
  a.states.resize(n);
  for (int i = 0; i < n; ++i) {
    Rational& sigma = a.sigma[i];
    sigma += u[i][i];
    for (CountryId j : env.proper_friends(i)) sigma += u[j][i];
    for (CountryId j : env.adversaries(i)) {
      sigma += u[i][j];
      a.tau[i] += u[j][i];
    }
    int c = cmp(sigma, a.tau[i]);
    a.states[i] = c > 0 ? State::Safe : (c == 0 ? State::Precarious : State::Unsafe);
  }
  return a;
}

Rational total_support(const StrategyMatrix& U, CountryId i) {
  const Environment& env = U.env();
  Rational sigma = U.at(i, i);
  for (CountryId j : env.proper_friends(i)) sigma += U.at(j, i);
  for (CountryId j : env.adversaries(i)) sigma += U.at(i, j);
  return sigma;
}

Rational total_threat(const StrategyMatrix& U, CountryId i) {
  Rational tau = 0;
  for (CountryId j : U.env().adversaries(i)) tau += U.at(j, i);
  return tau;
}

State state_of(const StrategyMatrix& U, CountryId i) {
  Rational sigma = total_support(U, i);
  Rational tau = total_threat(U, i);
  if (sigma > tau) return State::Safe;
  if (sigma == tau) return State::Precarious;
  return State::Unsafe;
}

std::vector<State> state_vector(const StrategyMatrix& U) {
  return assess(U.env(), U.raw()).states;
}

StrategyMatrix parse_allocation(EnvPtr env, const std::string& json_text) {
  Json doc = parse_json_document(json_text);
  require_keys(doc, "allocation file", {"rows"}, {"rows"});
  const Json& rows = doc.at("rows");
  if (!rows.is_object()) throw ParseError("'rows' must be an object keyed by country label");

  const int n = env->size();
  RawMatrix raw(n, Row(n, Rational(0)));
  for (const auto& row_item : rows.items()) {
    CountryId i = env->id_of(row_item.key());
    if (!row_item.value().is_object()) {
      throw ParseError("row of '" + row_item.key() + "' must be an object");
    }
    for (const auto& cell : row_item.value().items()) {
      CountryId j = env->id_of(cell.key());
      raw[i][j] = rational_field(cell.value(), "allocation '" + row_item.key() + "' -> '" +
                                                   cell.key() + "'");
    }
  }
  return StrategyMatrix::validate(std::move(env), std::move(raw));
}

Json allocation_to_json(const StrategyMatrix& U) {
  const Environment& env = U.env();
  std::vector<CountryId> order(env.size());
  for (int i = 0; i < env.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(),
            [&](CountryId a, CountryId b) { return env.label(a) < env.label(b); });

  Json rows = Json::object();
  for (CountryId i : order) {
    Json cells = Json::object();
    for (CountryId j : order) {
      if (U.at(i, j) != 0) cells[env.label(j)] = fraction_string(U.at(i, j));
    }
    rows[env.label(i)] = std::move(cells);
  }
  Json doc = Json::object();
  doc["rows"] = std::move(rows);
  return doc;
}

std::string allocation_json(const StrategyMatrix& U) {
  return allocation_to_json(U).dump(2) + "\n";
}

}  // namespace pag
