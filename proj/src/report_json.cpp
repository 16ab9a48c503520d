#include "pag/report_json.hpp"

#include <algorithm>

namespace pag {

namespace {

std::vector<CountryId> label_order(const Environment& env) {
  std::vector<CountryId> order(env.size());
  for (int i = 0; i < env.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(),
            [&](CountryId a, CountryId b) { return env.label(a) < env.label(b); });
  return order;
}

Json states_object(const Environment& env, const std::vector<State>& states) {
  Json out = Json::object();
  for (CountryId i : label_order(env)) out[env.label(i)] = to_string(states[i]);
  return out;
}

Json row_object(const Environment& env, const Row& row) {
  Json out = Json::object();
  for (CountryId j : label_order(env)) {
    if (row[j] != 0) out[env.label(j)] = fraction_string(row[j]);
  }
  return out;
}

}  // namespace

Json states_json(const StrategyMatrix& U) {
  const Environment& env = U.env();
  Assessment a = assess(env, U.raw());
  Json countries = Json::array();
  for (CountryId i : label_order(env)) {
    Json entry = Json::object();
    entry["label"] = env.label(i);
    entry["sigma"] = fraction_string(a.sigma[i]);
    entry["tau"] = fraction_string(a.tau[i]);
    entry["state"] = to_string(a.states[i]);
    countries.push_back(std::move(entry));
  }
  Json doc = Json::object();
  doc["countries"] = std::move(countries);
  return doc;
}

Json best_response_json(const BestResponse& br, const Environment& env,
                        const std::string& country) {
  Json doc = Json::object();
  doc["country"] = country;
  doc["value"] = fraction_string(br.value);
  doc["survival_feasible"] = br.survival_feasible;
  doc["all_feasible_rows_optimal"] = br.all_feasible_rows_optimal;
  Json witnesses = Json::array();
  for (std::size_t k = 0; k < br.witness_rows.size(); ++k) {
    Json w = Json::object();
    w["row"] = row_object(env, br.witness_rows[k]);
    w["survive"] = br.target_sets[k].survive;
    Json tf = Json::array();
    for (CountryId j : br.target_sets[k].friends) tf.push_back(env.label(j));
    Json ta = Json::array();
    for (CountryId j : br.target_sets[k].adversaries) ta.push_back(env.label(j));
    w["target_friends"] = std::move(tf);
    w["target_adversaries"] = std::move(ta);
    witnesses.push_back(std::move(w));
  }
  doc["witnesses"] = std::move(witnesses);
  return doc;
}

Json equilibrium_set_json(const EquilibriumSet& set, const UtilityModel& model) {
  Json doc = Json::object();
  doc["grid_denominator"] = set.grid_denominator;
  doc["search_space"] = set.search_space.get_str();
  doc["exhaustive_over_grid"] = set.exhaustive_over_grid;
  doc["count"] = set.equilibria.size();
  Json list = Json::array();
  for (const StrategyMatrix& U : set.equilibria) {
    Assessment a = assess(U.env(), U.raw());
    Json entry = Json::object();
    entry["rows"] = allocation_to_json(U)["rows"];
    entry["states"] = states_object(U.env(), a.states);
    entry["welfare"] = fraction_string(welfare_from_states(model, a.states));
    list.push_back(std::move(entry));
  }
  doc["equilibria"] = std::move(list);
  return doc;
}

Json dynamics_json(const DynamicsResult& result, const UtilityModel& model) {
  const Environment& env = model.env();
  Json doc = Json::object();
  doc["converged"] = result.converged;
  doc["rounds_used"] = result.rounds_used;
  doc["initial"] = allocation_to_json(result.trajectory.front())["rows"];
  Json steps = Json::array();
  for (std::size_t k = 0; k < result.movers.size(); ++k) {
    Json step = Json::object();
    step["mover"] = env.label(result.movers[k]);
    step["rows"] = allocation_to_json(result.trajectory[k + 1])["rows"];
    steps.push_back(std::move(step));
  }
  doc["steps"] = std::move(steps);
  const StrategyMatrix& last = result.trajectory.back();
  Assessment a = assess(env, last.raw());
  Json final_state = Json::object();
  final_state["rows"] = allocation_to_json(last)["rows"];
  final_state["states"] = states_object(env, a.states);
  final_state["welfare"] = fraction_string(welfare_from_states(model, a.states));
  doc["final"] = std::move(final_state);
  return doc;
}

Json paradox_json(const ParadoxReport& report) {
  Json doc = Json::object();
  doc["country"] = report.country;
  doc["mode"] = to_string(report.mode);
  doc["grid_denominator"] = report.grid_denominator;
  doc["welfare_small"] = fraction_string(report.welfare_small);
  doc["welfare_large"] = fraction_string(report.welfare_large);
  doc["paradox"] = report.paradox;
  return doc;
}

Json poa_bounds_json(const PoaBounds& bounds) {
  Json doc = Json::object();
  doc["lower"] = fraction_string(bounds.lower);
  doc["upper"] = fraction_string(bounds.upper);
  doc["bound_A"] = fraction_string(bounds.bound_A);
  doc["bound_B"] = fraction_string(bounds.bound_B);
  return doc;
}

Json poa_json(const PoAReport& report) {
  Json doc = Json::object();
  doc["grid_denominator"] = report.grid_denominator;
  doc["search_space"] = report.search_space.get_str();
  doc["equilibrium_count"] = report.equilibrium_count.get_str();
  doc["max_welfare"] = fraction_string(report.max_welfare);
  doc["min_equilibrium_welfare"] = fraction_string(report.min_equilibrium_welfare);
  if (report.poa) {
    doc["poa"] = fraction_string(*report.poa);
  } else {
    doc["poa"] = nullptr;
  }
  doc["poa_valid"] = report.poa.has_value();
  if (report.bounds) {
    doc["bound_A"] = fraction_string(report.bounds->bound_A);
    doc["bound_B"] = fraction_string(report.bounds->bound_B);
    doc["bound_upper"] = fraction_string(report.bounds->upper);
  } else {
    doc["bound_A"] = nullptr;
    doc["bound_B"] = nullptr;
    doc["bound_upper"] = nullptr;
  }
  doc["within_bounds"] = report.within_bounds;
  return doc;
}

}  // namespace pag
