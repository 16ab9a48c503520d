#include "pag/analysis.hpp"

#include <algorithm>
#include <set>
#include <sstream>

#include "pag/error.hpp"

namespace pag {

const char* to_string(WelfareMode mode) {
  return mode == WelfareMode::OverEquilibria ? "equilibria" : "all";
}

WelfareMode welfare_mode_from_string(const std::string& text) {
  if (text == "equilibria") return WelfareMode::OverEquilibria;
  if (text == "all") return WelfareMode::OverAllMatrices;
  throw ParseError("unknown welfare mode '" + text + "' (expected equilibria or all)");
}

Rational optimal_welfare(const UtilityModel& model, CountryId i, WelfareMode mode,
                         unsigned long denominator, const ScanOptions& options) {
  const Environment& env = model.env();
  env.label(i);
  GridPlan plan = plan_grid(env, denominator, options.cap);
  int jobs = std::max(1, options.jobs);

  std::vector<std::optional<Rational>> best(jobs);
  scan_grid(env, plan, jobs, [&](int w, const RawMatrix& u, const Assessment& a) {
    if (mode == WelfareMode::OverEquilibria && !is_equilibrium_raw(model, u, a)) return true;
    Rational v = utility_from_states(model, i, a.states);
    if (!best[w] || v > *best[w]) best[w] = std::move(v);
    return true;
  });

  std::optional<Rational> overall;
  for (auto& b : best) {
    if (b && (!overall || *b > *overall)) overall = std::move(b);
  }
  if (!overall) {
    throw DomainError("no grid equilibria at denominator " + std::to_string(denominator) +
                      " for country '" + env.label(i) + "'");
  }
  return *overall;
}

CountryId validate_environment_pair(const Environment& small, const Environment& large,
                                    CountryId i_small) {
  std::ostringstream diff;
  if (small.size() != large.size()) {
    throw DomainError("environment pair: different country counts (" +
                      std::to_string(small.size()) + " vs " + std::to_string(large.size()) + ")");
  }
  const int n = small.size();
  std::vector<CountryId> to_large(n);
  for (CountryId s = 0; s < n; ++s) {
    const std::string& label = small.label(s);
    if (!large.has_label(label)) {
      throw DomainError("environment pair: country '" + label + "' missing from the larger one");
    }
    to_large[s] = large.id_of(label);
    if (small.power(s) != large.power(to_large[s])) {
      diff << "power of '" << label << "' differs (" << fraction_string(small.power(s)) << " vs "
           << fraction_string(large.power(to_large[s])) << "); ";
    }
  }

  const std::string& country = small.label(i_small);
  int gained = 0;
  for (CountryId a = 0; a < n; ++a) {
    for (CountryId b = a + 1; b < n; ++b) {
      auto sign_s = small.sign(a, b);
      auto sign_l = large.sign(to_large[a], to_large[b]);
      if (sign_s == sign_l) continue;
      bool touches_i = a == i_small || b == i_small;
      bool allowed = touches_i && sign_l == RelationSign::Friend &&
                     (!sign_s || *sign_s == RelationSign::Adversary);
      if (allowed) {
        ++gained;
      } else {
        diff << "pair ('" << small.label(a) << "', '" << small.label(b) << "') is "
             << (sign_s ? to_string(*sign_s) : "unrelated") << " vs "
             << (sign_l ? to_string(*sign_l) : "unrelated") << "; ";
      }
    }
  }
  if (!diff.str().empty()) {
    throw DomainError("environment pair is not a single-country friend extension for '" +
                      country + "': " + diff.str());
  }
  if (gained == 0) {
    throw DomainError("environment pair: '" + country +
                      "' has identical friend sets in both environments");
  }
  return to_large[i_small];
}

void validate_model_pair(const UtilityModel& small, const UtilityModel& large) {
  const Environment& es = small.env();
  const Environment& el = large.env();
  if (small.form() != large.form()) {
    throw DomainError("model pair: utility forms differ (" + std::string(to_string(small.form())) +
                      " vs " + to_string(large.form()) + ")");
  }
  const int n = es.size();
  for (CountryId i = 0; i < n; ++i) {
    CountryId li = el.id_of(es.label(i));
    const PairValues& self_s = small.self_values(i);
    const PairValues& self_l = large.self_values(li);
    if (self_s.favorable != self_l.favorable || self_s.unfavorable != self_l.unfavorable) {
      throw DomainError("model pair: self values of '" + es.label(i) + "' differ");
    }
    for (CountryId j = 0; j < n; ++j) {
      if (i == j) continue;
      CountryId lj = el.id_of(es.label(j));
      for (RelationSign sign : {RelationSign::Friend, RelationSign::Adversary}) {
        const PairValues& vs = small.pair_values(i, j, sign);
        const PairValues& vl = large.pair_values(li, lj, sign);
        if (vs.favorable != vl.favorable || vs.unfavorable != vl.unfavorable) {
          throw DomainError("model pair: " + std::string(to_string(sign)) + " values of ('" +
                            es.label(i) + "', '" + es.label(j) + "') differ between the files");
        }
      }
    }
  }
}

ParadoxReport detect_paradox(const UtilityModel& model_small, const UtilityModel& model_large,
                             CountryId i_small, WelfareMode mode, unsigned long denominator,
                             const ScanOptions& options) {
  CountryId i_large =
      validate_environment_pair(model_small.env(), model_large.env(), i_small);
  validate_model_pair(model_small, model_large);

  ParadoxReport report;
  report.country = model_small.env().label(i_small);
  report.mode = mode;
  report.grid_denominator = denominator;
  report.welfare_small = optimal_welfare(model_small, i_small, mode, denominator, options);
  report.welfare_large = optimal_welfare(model_large, i_large, mode, denominator, options);
  report.paradox = report.welfare_small > report.welfare_large;
  return report;
}

namespace {

struct SurvivalSurvey {
  mpz_class equilibria;
  bool survives_all = true;
  std::optional<RawMatrix> failure;  // first equilibrium where the country dies
};

SurvivalSurvey survey_equilibria(const UtilityModel& model, CountryId i,
                                 unsigned long denominator, const ScanOptions& options,
                                 const char* which) {
  const Environment& env = model.env();
  GridPlan plan = plan_grid(env, denominator, options.cap);
  int jobs = std::max(1, options.jobs);

  std::vector<unsigned long> counts(jobs, 0);
  std::vector<char> all(jobs, 1);
  std::vector<std::optional<RawMatrix>> failures(jobs);
  scan_grid(env, plan, jobs, [&](int w, const RawMatrix& u, const Assessment& a) {
    if (!is_equilibrium_raw(model, u, a)) return true;
    ++counts[w];
    if (!survives(a.states[i]) && all[w]) {
      all[w] = 0;
      failures[w] = u;
    }
    return true;
  });

  SurvivalSurvey out;
  for (int w = 0; w < jobs; ++w) {
    out.equilibria += counts[w];
    if (!all[w] && out.survives_all) {
      out.survives_all = false;
      out.failure = std::move(failures[w]);
    }
  }
  if (out.equilibria == 0) {
    throw DomainError(std::string("no grid equilibria in the ") + which +
                      " environment at denominator " + std::to_string(denominator));
  }
  return out;
}

}  // namespace

SurvivalMonotonicityReport check_survival_monotonicity(const UtilityModel& model_small,
                                                       const UtilityModel& model_large,
                                                       CountryId i_small,
                                                       unsigned long denominator,
                                                       const ScanOptions& options) {
  CountryId i_large =
      validate_environment_pair(model_small.env(), model_large.env(), i_small);
  validate_model_pair(model_small, model_large);

  SurvivalSurvey small = survey_equilibria(model_small, i_small, denominator, options, "smaller");
  SurvivalSurvey large = survey_equilibria(model_large, i_large, denominator, options, "larger");

  SurvivalMonotonicityReport report;
  report.country = model_small.env().label(i_small);
  report.grid_denominator = denominator;
  report.equilibria_small = small.equilibria;
  report.equilibria_large = large.equilibria;
  report.survives_all_small = small.survives_all;
  report.survives_all_large = large.survives_all;
  report.implication_holds = !small.survives_all || large.survives_all;
  if (!report.implication_holds && large.failure) {
    report.counterexample =
        StrategyMatrix::validate(model_large.env_ptr(), std::move(*large.failure));
  }
  return report;
}

NecessaryConditionReport check_necessary_condition(const UtilityModel& model, CountryId i) {
  const Environment& env = model.env();
  env.label(i);
  NecessaryConditionReport report;
  for (CountryId j = 0; j < env.size(); ++j) {
    if (j == i) continue;
    const Rational& friend_unfavorable = model.pair_values(i, j, RelationSign::Friend).unfavorable;
    const Rational& adv_favorable = model.pair_values(i, j, RelationSign::Adversary).favorable;
    if (friend_unfavorable < adv_favorable) report.witnesses.push_back(j);
  }
  report.holds = !report.witnesses.empty();
  return report;
}

EnvironmentPair construct_contested_group_pair(const std::vector<Rational>& powers, CountryId i,
                                               std::vector<CountryId> group,
                                               GroupRelations within) {
  const int n = static_cast<int>(powers.size());
  if (n < 3) throw DomainError("contested construction needs at least three countries");
  auto check = [&](CountryId c) {
    if (c < 0 || c >= n) throw DomainError("unknown country id " + std::to_string(c));
  };
  check(i);
  if (group.empty()) throw DomainError("contested group must not be empty");
  std::sort(group.begin(), group.end());
  group.erase(std::unique(group.begin(), group.end()), group.end());
  for (CountryId j : group) {
    check(j);
    if (j == i) throw DomainError("contested group must not contain the focal country");
  }
  for (const Rational& p : powers) {
    if (p < 0) throw DomainError("powers must be nonnegative");
  }

  std::set<CountryId> in_group(group.begin(), group.end());
  Rational lhs = powers[i];
  Rational rhs = 0;
  for (CountryId j : group) lhs += powers[j];
  for (CountryId k = 0; k < n; ++k) {
    if (k != i && !in_group.count(k)) rhs += powers[k];
  }
  if (lhs > rhs) {
    throw DomainError("power inequality violated: focal and group powers sum to " +
                      fraction_string(lhs) + " > " + fraction_string(rhs) +
                      " for the remaining countries");
  }

  std::vector<Country> countries;
  for (int k = 0; k < n; ++k) countries.push_back({std::to_string(k + 1), powers[k]});

  auto build = [&](bool i_befriends_group) {
    std::vector<Environment::RelationSpec> relations;
    for (int k = 0; k < n; ++k) {
      if (k == i) continue;
      bool friendly = i_befriends_group || !in_group.count(k);
      relations.emplace_back(countries[i].label, countries[k].label,
                             friendly ? RelationSign::Friend : RelationSign::Adversary);
    }
    for (CountryId j : group) {
      for (int k = 0; k < n; ++k) {
        if (k == i || k == j) continue;
        if (in_group.count(k)) {
          if (within == GroupRelations::MutuallyAdversarial && j < k) {
            relations.emplace_back(countries[j].label, countries[k].label,
                                   RelationSign::Adversary);
          }
          continue;
        }
        relations.emplace_back(countries[j].label, countries[k].label, RelationSign::Adversary);
      }
    }
    return Environment::create(countries, relations);
  };

  return EnvironmentPair{build(true), build(false)};
}

EnvironmentPair construct_contested_pair(const std::vector<Rational>& powers, CountryId i,
                                         CountryId j) {
  if (i == j) throw DomainError("contested construction needs two distinct countries");
  return construct_contested_group_pair(powers, i, {j});
}

bool has_survivor(const StrategyMatrix& U) {
  Assessment a = assess(U.env(), U.raw());
  return std::any_of(a.states.begin(), a.states.end(), [](State s) { return survives(s); });
}

PoaBounds poa_bounds(const UtilityModel& model) {
  const Environment& env = model.env();
  const int n = env.size();

  std::optional<Rational> best_sum;
  std::optional<Rational> min_fail;
  std::optional<Rational> min_survive;
  for (CountryId i = 0; i < n; ++i) {
    Rational sum = model.self_values(i).favorable;
    for (CountryId j : env.proper_friends(i)) {
      sum += model.pair_values(i, j, RelationSign::Friend).favorable;
    }
    for (CountryId j : env.adversaries(i)) {
      sum += model.pair_values(i, j, RelationSign::Adversary).favorable;
    }
    if (!best_sum || sum > *best_sum) best_sum = std::move(sum);
    const PairValues& self = model.self_values(i);
    if (!min_fail || self.unfavorable < *min_fail) min_fail = self.unfavorable;
    if (!min_survive || self.favorable < *min_survive) min_survive = self.favorable;
  }

  PoaBounds bounds;
  bounds.bound_A = Rational(n) * *best_sum;
  bounds.bound_B = Rational(n - 1) * *min_fail + *min_survive;
  if (bounds.bound_B <= 0) {
    throw DomainError("price-of-anarchy bounds undefined: B = " +
                      fraction_string(bounds.bound_B) + " is not positive");
  }
  bounds.lower = 1;
  bounds.upper = bounds.bound_A / bounds.bound_B;
  return bounds;
}

PoAReport price_of_anarchy(const UtilityModel& model, unsigned long denominator,
                           const ScanOptions& options) {
  const Environment& env = model.env();
  GridPlan plan = plan_grid(env, denominator, options.cap);
  int jobs = std::max(1, options.jobs);

  std::vector<std::optional<Rational>> max_welfare(jobs);
  std::vector<std::optional<Rational>> min_eq(jobs);
  std::vector<unsigned long> counts(jobs, 0);
  scan_grid(env, plan, jobs, [&](int w, const RawMatrix& u, const Assessment& a) {
    Rational welfare = welfare_from_states(model, a.states);
    if (!max_welfare[w] || welfare > *max_welfare[w]) max_welfare[w] = welfare;
    if (is_equilibrium_raw(model, u, a)) {
      ++counts[w];
      if (!min_eq[w] || welfare < *min_eq[w]) min_eq[w] = std::move(welfare);
    }
    return true;
  });

  PoAReport report;
  report.grid_denominator = denominator;
  report.search_space = plan.space;
  std::optional<Rational> overall_max;
  std::optional<Rational> overall_min;
  for (int w = 0; w < jobs; ++w) {
    report.equilibrium_count += counts[w];
    if (max_welfare[w] && (!overall_max || *max_welfare[w] > *overall_max)) {
      overall_max = std::move(max_welfare[w]);
    }
    if (min_eq[w] && (!overall_min || *min_eq[w] < *overall_min)) {
      overall_min = std::move(min_eq[w]);
    }
  }
  if (report.equilibrium_count == 0) {
    throw DomainError("no grid equilibria at denominator " + std::to_string(denominator));
  }
  report.max_welfare = *overall_max;
  report.min_equilibrium_welfare = *overall_min;
  if (report.min_equilibrium_welfare > 0) {
    report.poa = report.max_welfare / report.min_equilibrium_welfare;
  }
  try {
    report.bounds = poa_bounds(model);
  } catch (const DomainError&) {
    report.bounds.reset();
  }
  report.within_bounds = report.poa && report.bounds && *report.poa >= report.bounds->lower &&
                         *report.poa <= report.bounds->upper;
  return report;
}

}  // namespace pag
