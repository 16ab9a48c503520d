#include "pag/equilibrium.hpp"

#include <algorithm>
#include <atomic>
#include <cassert>
#include <exception>
#include <thread>

#include "pag/error.hpp"

namespace pag {

namespace {

bool row_less(const Row& a, const Row& b) {
  return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end());
}

// One candidate configuration of country i's row: whether i survives and
// which contested neighbors get pushed over their thresholds.
struct Config {
  bool survive = true;
  std::uint32_t mask = 0;  // bit t set = choices[t] targeted
};

struct BrAnalysis {
  Rational best;
  std::vector<Config> optimal;
  bool survival_feasible = false;
  bool nonsurvival_achievable = false;
  bool all_rows_optimal = false;

  // geometry needed to materialize witness rows
  struct Choice {
    bool is_friend = false;
    std::size_t local = 0;  // index into proper_friends / adversaries
    CountryId id = 0;
    Rational cost;
  };
  std::vector<Choice> choices;
  Rational budget;           // p_i
  CountryId last_friend = -1;  // dump column for the non-survival witness
};

BrAnalysis analyze_best_response(const UtilityModel& model, const RawMatrix& u,
                                 const Assessment& a, CountryId i) {
  const Environment& env = model.env();
  const auto& friends = env.proper_friends(i);
  const auto& advs = env.adversaries(i);
  const Rational& p = env.power(i);

  BrAnalysis out;
  out.budget = p;
  if (!friends.empty()) out.last_friend = friends.back();

  Rational incoming = 0;  // support i receives from its friends
  for (CountryId j : friends) incoming += u[j][i];
  const Rational& threat = a.tau[i];

  out.survival_feasible = incoming + p >= threat;
  out.nonsurvival_achievable = !friends.empty() && incoming < threat;
  // Power spent on friends leaves i's own support; the rest (self or
  // adversary columns) stays in it.
  Rational friend_cap = incoming + p - threat;

  std::vector<char> forced_friend(friends.size(), 0);
  std::vector<char> forced_adv(advs.size(), 0);
  if (out.survival_feasible) {
    for (std::size_t t = 0; t < friends.size(); ++t) {
      CountryId j = friends[t];
      // support needed so that sigma_j reaches tau_j without i's current help
      Rational cost = a.tau[j] - a.sigma[j] + u[i][j];
      if (cost <= 0) {
        forced_friend[t] = 1;
      } else if (cost <= p && cost <= friend_cap) {
        out.choices.push_back({true, t, j, std::move(cost)});
      }
    }
    for (std::size_t t = 0; t < advs.size(); ++t) {
      CountryId j = advs[t];
      Rational cost = a.sigma[j] - a.tau[j] + u[i][j];
      if (cost <= 0) {
        forced_adv[t] = 1;
      } else if (cost <= p) {
        out.choices.push_back({false, t, j, std::move(cost)});
      }
    }
  }

  if (out.choices.size() > 24) {
    throw DomainError("best response for '" + env.label(i) + "' has " +
                      std::to_string(out.choices.size()) +
                      " contested neighbors; exceeds the subset enumeration guard");
  }

  std::vector<char> fav_friend(friends.size(), 0);
  std::vector<char> fav_adv(advs.size(), 0);
  auto survived_value = [&]() -> Rational {
    Rational v = model.self_values(i).favorable;
    switch (model.form()) {
      case UtilityForm::Basic: {
        for (std::size_t t = 0; t < friends.size(); ++t) {
          if (fav_friend[t]) v += model.pair_values(i, friends[t], RelationSign::Friend).favorable;
        }
        for (std::size_t t = 0; t < advs.size(); ++t) {
          if (fav_adv[t]) v += model.pair_values(i, advs[t], RelationSign::Adversary).favorable;
        }
        break;
      }
      case UtilityForm::FriendsFirst: {
        bool all_friends = true;
        for (std::size_t t = 0; t < friends.size(); ++t) {
          if (fav_friend[t]) {
            v += model.pair_values(i, friends[t], RelationSign::Friend).favorable;
          } else {
            all_friends = false;
          }
        }
        if (all_friends) {
          for (std::size_t t = 0; t < advs.size(); ++t) {
            if (fav_adv[t]) v += model.pair_values(i, advs[t], RelationSign::Adversary).favorable;
          }
        }
        break;
      }
      case UtilityForm::Additive: {
        for (std::size_t t = 0; t < friends.size(); ++t) {
          const PairValues& pv = model.pair_values(i, friends[t], RelationSign::Friend);
          v += fav_friend[t] ? pv.favorable : pv.unfavorable;
        }
        for (std::size_t t = 0; t < advs.size(); ++t) {
          const PairValues& pv = model.pair_values(i, advs[t], RelationSign::Adversary);
          v += fav_adv[t] ? pv.favorable : pv.unfavorable;
        }
        break;
      }
    }
    return v;
  };

  bool have_best = false;
  bool have_min = false;
  Rational min_value;
  auto consider = [&](const Rational& v, const Config& cfg) {
    if (!have_min || v < min_value) {
      min_value = v;
      have_min = true;
    }
    if (!have_best || v > out.best) {
      out.best = v;
      out.optimal.clear();
      out.optimal.push_back(cfg);
      have_best = true;
    } else if (v == out.best) {
      out.optimal.push_back(cfg);
    }
  };

  if (out.survival_feasible) {
    const std::uint32_t limit = 1u << out.choices.size();
    for (std::uint32_t mask = 0; mask < limit; ++mask) {
      Rational friend_cost = 0;
      Rational total_cost = 0;
      std::copy(forced_friend.begin(), forced_friend.end(), fav_friend.begin());
      std::copy(forced_adv.begin(), forced_adv.end(), fav_adv.begin());
      bool feasible = true;
      for (std::size_t t = 0; t < out.choices.size(); ++t) {
        if (!(mask & (1u << t))) continue;
        const auto& c = out.choices[t];
        total_cost += c.cost;
        if (c.is_friend) {
          friend_cost += c.cost;
          fav_friend[c.local] = 1;
        } else {
          fav_adv[c.local] = 1;
        }
        if (total_cost > p || friend_cost > friend_cap) {
          feasible = false;
          break;
        }
      }
      if (!feasible) continue;
      consider(survived_value(), Config{true, mask});
    }
  }

  if (!out.survival_feasible || out.nonsurvival_achievable) {
    consider(model.self_values(i).unfavorable, Config{false, 0});
  }

  assert(have_best);
  out.all_rows_optimal = have_min && min_value == out.best;
  return out;
}

Row witness_row(const BrAnalysis& an, const Environment& env, CountryId i, const Config& cfg) {
  Row row(env.size(), Rational(0));
  if (!cfg.survive) {
    if (!an.survival_feasible) {
      // Every feasible row fails survival; all power on the diagonal is the
      // canonical representative.
      row[i] = an.budget;
    } else {
      // Deliberate failure must overshoot the friend budget; dumping
      // everything on the last friend column is the canonical representative.
      row[an.last_friend] = an.budget;
    }
    return row;
  }
  Rational spent = 0;
  for (std::size_t t = 0; t < an.choices.size(); ++t) {
    if (!(cfg.mask & (1u << t))) continue;
    row[an.choices[t].id] = an.choices[t].cost;
    spent += an.choices[t].cost;
  }
  row[i] += an.budget - spent;  // residual power stays on the diagonal
  return row;
}

}  // namespace

Rational best_response_value(const UtilityModel& model, const RawMatrix& u, const Assessment& a,
                             CountryId i) {
  return analyze_best_response(model, u, a, i).best;
}

BestResponse best_response(const UtilityModel& model, const StrategyMatrix& U, CountryId i) {
  if (!model.env().same_structure(U.env())) {
    throw DomainError("best_response: model and matrix are bound to different environments");
  }
  const Environment& env = U.env();
  env.label(i);
  Assessment a = assess(env, U.raw());
  BrAnalysis an = analyze_best_response(model, U.raw(), a, i);

  BestResponse out;
  out.value = an.best;
  out.survival_feasible = an.survival_feasible;
  out.all_feasible_rows_optimal = an.all_rows_optimal;

  std::vector<std::pair<Row, TargetChoice>> witnesses;
  for (const Config& cfg : an.optimal) {
    TargetChoice choice;
    choice.survive = cfg.survive;
    if (cfg.survive) {
      for (std::size_t t = 0; t < an.choices.size(); ++t) {
        if (!(cfg.mask & (1u << t))) continue;
        (an.choices[t].is_friend ? choice.friends : choice.adversaries)
            .push_back(an.choices[t].id);
      }
      std::sort(choice.friends.begin(), choice.friends.end());
      std::sort(choice.adversaries.begin(), choice.adversaries.end());
    }
    witnesses.emplace_back(witness_row(an, env, i, cfg), std::move(choice));
  }
  std::sort(witnesses.begin(), witnesses.end(),
            [](const auto& a, const auto& b) { return row_less(a.first, b.first); });
  for (auto& [row, choice] : witnesses) {
    out.witness_rows.push_back(std::move(row));
    out.target_sets.push_back(std::move(choice));
  }
  return out;
}

bool is_equilibrium_raw(const UtilityModel& model, const RawMatrix& u, const Assessment& a) {
  const int n = model.env().size();
  for (int i = 0; i < n; ++i) {
    Rational current = utility_from_states(model, i, a.states);
    if (best_response_value(model, u, a, i) > current) return false;
  }
  return true;
}

bool is_equilibrium(const UtilityModel& model, const StrategyMatrix& U) {
  if (!model.env().same_structure(U.env())) {
    throw DomainError("is_equilibrium: model and matrix are bound to different environments");
  }
  Assessment a = assess(U.env(), U.raw());
  return is_equilibrium_raw(model, U.raw(), a);
}

namespace {

std::uint64_t integer_units(const Environment& env, CountryId i, unsigned long denominator) {
  if (denominator == 0) throw DomainError("grid denominator must be positive");
  Rational scaled = env.power(i) * Rational(static_cast<long>(denominator));
  if (scaled.get_den() != 1) {
    throw DomainError("grid denominator " + std::to_string(denominator) +
                      " makes the power of '" + env.label(i) + "' non-integral");
  }
  mpz_class num = scaled.get_num();
  if (!num.fits_ulong_p()) {
    throw DomainError("power of '" + env.label(i) + "' is too large for grid enumeration");
  }
  return num.get_ui();
}

mpz_class composition_count(std::uint64_t units, std::size_t parts) {
  mpz_class out;
  mpz_bin_uiui(out.get_mpz_t(), units + parts - 1, parts - 1);
  return out;
}

void generate_compositions(std::uint64_t units, std::size_t parts,
                           std::vector<std::vector<std::uint64_t>>& out) {
  std::vector<std::uint64_t> cur(parts, 0);
  // parts >= 1 always: the diagonal column is allowed for every country
  auto rec = [&](auto&& self, std::size_t part, std::uint64_t remaining) -> void {
    if (part + 1 == parts) {
      cur[part] = remaining;
      out.push_back(cur);
      return;
    }
    for (std::uint64_t v = 0; v <= remaining; ++v) {
      cur[part] = v;
      self(self, part + 1, remaining - v);
    }
  };
  rec(rec, 0, units);
}

}  // namespace

mpz_class grid_space(const Environment& env, unsigned long denominator) {
  mpz_class space = 1;
  for (int i = 0; i < env.size(); ++i) {
    space *= composition_count(integer_units(env, i, denominator),
                               env.allowed_columns(i).size());
  }
  return space;
}

GridPlan plan_grid(const Environment& env, unsigned long denominator, const mpz_class& cap) {
  GridPlan plan;
  plan.denominator = denominator;
  plan.space = grid_space(env, denominator);
  if (plan.space > cap) {
    throw DomainError("grid search space " + plan.space.get_str() + " exceeds the cap " +
                      cap.get_str() + " (set PAG_MAX_SPACE or lower --grid)");
  }

  std::uint64_t max_units = 0;
  std::vector<std::uint64_t> units(env.size());
  for (int i = 0; i < env.size(); ++i) {
    units[i] = integer_units(env, i, denominator);
    max_units = std::max(max_units, units[i]);
  }
  plan.unit_values.reserve(max_units + 1);
  for (std::uint64_t v = 0; v <= max_units; ++v) {
    Rational q(static_cast<unsigned long>(v), denominator);
    q.canonicalize();
    plan.unit_values.push_back(std::move(q));
  }

  plan.choices.resize(env.size());
  for (int i = 0; i < env.size(); ++i) {
    generate_compositions(units[i], env.allowed_columns(i).size(), plan.choices[i]);
  }
  return plan;
}

mpz_class default_space_cap() { return mpz_class(10000000); }

unsigned long largest_feasible_denominator(const Environment& env, const mpz_class& cap) {
  mpz_class lcm = 1;
  for (int i = 0; i < env.size(); ++i) {
    mpz_class den = env.power(i).get_den();
    mpz_lcm(lcm.get_mpz_t(), lcm.get_mpz_t(), den.get_mpz_t());
  }
  if (!lcm.fits_ulong_p()) throw DomainError("power denominators are too large for a grid");
  unsigned long base = lcm.get_ui();

  if (grid_space(env, base) > cap) {
    throw DomainError("even the smallest exact grid (denominator " + std::to_string(base) +
                      ") exceeds the cap " + cap.get_str());
  }
  // Constant spaces (all powers zero or single-column rows) stay at the base.
  if (grid_space(env, 2 * base) == grid_space(env, base)) return base;

  unsigned long m = 1;
  while (true) {
    unsigned long next = m + 1;
    if (grid_space(env, next * base) > cap) return m * base;
    m = next;
  }
}

void scan_grid(const Environment& env, const GridPlan& plan, int jobs, const GridVisitor& visit) {
  const int n = env.size();
  const std::size_t first_count = plan.choices[0].size();
  jobs = std::max(1, std::min<int>(jobs, static_cast<int>(first_count)));

  std::atomic<bool> stop{false};

  auto apply_choice = [&](RawMatrix& cur, int r, std::size_t idx) {
    const auto& cols = env.allowed_columns(r);
    const auto& units = plan.choices[r][idx];
    for (std::size_t t = 0; t < cols.size(); ++t) {
      cur[r][cols[t]] = plan.unit_values[units[t]];
    }
  };

  auto run_range = [&](int worker, std::size_t lo, std::size_t hi) {
    RawMatrix cur(n, Row(n, Rational(0)));
    std::vector<std::size_t> idx(n, 0);
    for (std::size_t f = lo; f < hi && !stop.load(std::memory_order_relaxed); ++f) {
      apply_choice(cur, 0, f);
      for (int r = 1; r < n; ++r) {
        idx[r] = 0;
        apply_choice(cur, r, 0);
      }
      while (true) {
        Assessment a = assess(env, cur);
        if (!visit(worker, cur, a)) {
          stop.store(true, std::memory_order_relaxed);
          return;
        }
        int r = n - 1;
        while (r >= 1) {
          if (++idx[r] < plan.choices[r].size()) {
            apply_choice(cur, r, idx[r]);
            break;
          }
          idx[r] = 0;
          apply_choice(cur, r, 0);
          --r;
        }
        if (r == 0) break;
        if (stop.load(std::memory_order_relaxed)) return;
      }
    }
  };

  if (jobs == 1) {
    run_range(0, 0, first_count);
    return;
  }

  std::vector<std::thread> threads;
  std::vector<std::exception_ptr> errors(jobs);
  for (int w = 0; w < jobs; ++w) {
    std::size_t lo = first_count * w / jobs;
    std::size_t hi = first_count * (w + 1) / jobs;
    threads.emplace_back([&, w, lo, hi]() {
      try {
        run_range(w, lo, hi);
      } catch (...) {
        errors[w] = std::current_exception();
        stop.store(true, std::memory_order_relaxed);
      }
    });
  }
  for (auto& t : threads) t.join();
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

EquilibriumSet enumerate_equilibria(const UtilityModel& model, unsigned long denominator,
                                    const ScanOptions& options) {
  const Environment& env = model.env();
  GridPlan plan = plan_grid(env, denominator, options.cap);

  int jobs = std::max(1, options.jobs);
  std::vector<std::vector<RawMatrix>> found(jobs);
  scan_grid(env, plan, jobs, [&](int worker, const RawMatrix& u, const Assessment& a) {
    if (is_equilibrium_raw(model, u, a)) found[worker].push_back(u);
    return true;
  });

  EquilibriumSet out;
  out.grid_denominator = denominator;
  out.exhaustive_over_grid = true;
  out.search_space = plan.space;
  for (auto& bucket : found) {
    for (auto& raw : bucket) {
      out.equilibria.push_back(StrategyMatrix::validate(model.env_ptr(), std::move(raw)));
    }
  }
  return out;
}

DynamicsResult best_response_dynamics(const UtilityModel& model, const StrategyMatrix& U0,
                                      Schedule schedule, std::uint64_t seed,
                                      unsigned max_rounds) {
  if (!model.env().same_structure(U0.env())) {
    throw DomainError("dynamics: model and matrix are bound to different environments");
  }
  const Environment& env = U0.env();
  const int n = env.size();

  DynamicsResult result;
  result.trajectory.push_back(U0);

  RawMatrix cur = U0.raw();
  std::uint64_t rng = seed ? seed : 0x9e3779b97f4a7c15ull;
  auto next_rand = [&rng]() {
    // xorshift64*, deterministic across platforms
    rng ^= rng >> 12;
    rng ^= rng << 25;
    rng ^= rng >> 27;
    return rng * 0x2545f4914f6cdd1dull;
  };

  std::vector<CountryId> order(n);
  for (int i = 0; i < n; ++i) order[i] = i;

  for (unsigned round = 0; round < max_rounds; ++round) {
    if (schedule == Schedule::Random) {
      for (int k = n - 1; k > 0; --k) {
        int pick = static_cast<int>(next_rand() % static_cast<std::uint64_t>(k + 1));
        std::swap(order[k], order[pick]);
      }
    }
    bool changed = false;
    for (CountryId i : order) {
      Assessment a = assess(env, cur);
      Rational current = utility_from_states(model, i, a.states);
      BrAnalysis an = analyze_best_response(model, cur, a, i);
      if (an.best <= current) continue;
      Row best_row;
      bool have = false;
      for (const Config& cfg : an.optimal) {
        Row row = witness_row(an, env, i, cfg);
        if (!have || row_less(row, best_row)) {
          best_row = std::move(row);
          have = true;
        }
      }
      cur[i] = std::move(best_row);
      changed = true;
      result.movers.push_back(i);
      result.trajectory.push_back(StrategyMatrix::validate(U0.env_ptr(), cur));
    }
    result.rounds_used = round + 1;
    if (!changed) {
      result.converged = true;
      break;
    }
  }
  return result;
}

}  // namespace pag
