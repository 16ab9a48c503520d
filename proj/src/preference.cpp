#include "pag/preference.hpp"

#include "pag/error.hpp"

namespace pag {

namespace {

void check_same_env(const StrategyMatrix& U, const StrategyMatrix& V) {
  if (!U.env().same_structure(V.env())) {
    throw DomainError("preference predicates need matrices over the same environment");
  }
}

}  // namespace

bool weakly_prefers(CountryId i, const StrategyMatrix& U, const StrategyMatrix& V) {
  check_same_env(U, V);
  const Environment& env = U.env();
  Assessment au = assess(env, U.raw());
  Assessment av = assess(env, V.raw());
  for (CountryId j : env.friends_of(i)) {
    if (!survives(av.states[j]) && au.states[j] != State::Unsafe) return false;
  }
  for (CountryId j : env.adversaries(i)) {
    bool v_ok = av.states[j] == State::Unsafe || av.states[j] == State::Precarious;
    if (!v_ok && au.states[j] != State::Safe) return false;
  }
  return true;
}

bool indifferent(CountryId i, const StrategyMatrix& U, const StrategyMatrix& V, bool literal) {
  check_same_env(U, V);
  const Environment& env = U.env();
  Assessment au = assess(env, U.raw());
  Assessment av = assess(env, V.raw());
  auto neighborhood = env.friends_of(i);
  neighborhood.insert(neighborhood.end(), env.adversaries(i).begin(), env.adversaries(i).end());
  for (CountryId j : neighborhood) {
    State left = literal ? au.states[i] : au.states[j];
    if (left != av.states[j]) return false;
  }
  return true;
}

bool strongly_prefers(CountryId i, const StrategyMatrix& U, const StrategyMatrix& V) {
  check_same_env(U, V);
  const Environment& env = U.env();
  State xu = assess(env, U.raw()).states[i];
  State xv = assess(env, V.raw()).states[i];
  return survives(xv) && xu == State::Unsafe;
}

}  // namespace pag
