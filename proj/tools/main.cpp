#include <CLI11.hpp>
#include <openssl/evp.h>

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "pag/analysis.hpp"
#include "pag/error.hpp"
#include "pag/report_json.hpp"
#include "pag/version.hpp"

namespace {

using pag::Json;

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw pag::ParseError("cannot read input file '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw pag::ParseError("cannot write output file '" + path + "'");
  out << content;
}

std::string sha256_hex(const std::string& data) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  EVP_Digest(data.data(), data.size(), digest, &len, EVP_sha256(), nullptr);
  static const char* hex = "0123456789abcdef";
  std::string out;
  out.reserve(2 * len);
  for (unsigned int k = 0; k < len; ++k) {
    out.push_back(hex[digest[k] >> 4]);
    out.push_back(hex[digest[k] & 0xf]);
  }
  return out;
}

struct LoadedInput {
  std::string path;
  std::string content;
  std::string digest;
};

LoadedInput load_input(const std::string& path) {
  LoadedInput in;
  in.path = path;
  in.content = read_file(path);
  in.digest = sha256_hex(in.content);
  return in;
}

// The manifest is embedded verbatim in every JSON output. The job count is
// deliberately not recorded: results are independent of it.
Json make_manifest(const std::string& command, const std::vector<LoadedInput>& inputs,
                   Json parameters) {
  Json manifest = Json::object();
  manifest["tool"] = std::string(pag::kToolName) + " " + pag::kToolVersion;
  manifest["command"] = command;
  Json files = Json::array();
  for (const LoadedInput& in : inputs) {
    Json f = Json::object();
    f["path"] = in.path;
    f["sha256"] = in.digest;
    files.push_back(std::move(f));
  }
  manifest["inputs"] = std::move(files);
  manifest["parameters"] = std::move(parameters);
  return manifest;
}

void emit(const Json& doc, const std::string& out_path) {
  std::string text = doc.dump(2) + "\n";
  if (out_path.empty()) {
    std::cout << text;
  } else {
    write_file(out_path, text);
  }
}

Json with_manifest(Json manifest, const Json& body) {
  Json doc = Json::object();
  doc["manifest"] = std::move(manifest);
  for (const auto& item : body.items()) doc[item.key()] = item.value();
  return doc;
}

mpz_class space_cap_from_env() {
  const char* text = std::getenv("PAG_MAX_SPACE");
  if (!text || !*text) return pag::default_space_cap();
  std::string s(text);
  for (char c : s) {
    if (c < '0' || c > '9') {
      throw pag::ParseError("PAG_MAX_SPACE must be a positive integer, got '" + s + "'");
    }
  }
  mpz_class cap(s);
  if (cap <= 0) throw pag::ParseError("PAG_MAX_SPACE must be positive");
  return cap;
}

unsigned long resolve_grid(const pag::Environment& env, unsigned long requested,
                           const mpz_class& cap) {
  if (requested > 0) return requested;
  return pag::largest_feasible_denominator(env, cap);
}

pag::Scenario load_scenario_file(const LoadedInput& in, const std::string& form_flag) {
  pag::Scenario scenario = pag::parse_scenario(in.content);
  if (!form_flag.empty()) {
    scenario.model = scenario.model.with_form(pag::utility_form_from_string(form_flag));
  }
  return scenario;
}

std::vector<pag::Rational> parse_power_list(const std::string& text) {
  std::vector<pag::Rational> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(pag::parse_rational(item));
  if (out.empty()) throw pag::ParseError("--powers must list at least one power");
  return out;
}

struct CommonFlags {
  std::string out_path;
  std::string form;
  unsigned long grid = 0;  // 0 = largest denominator under the cap
  int jobs = 1;
};

int run(int argc, char** argv) {
  CLI::App app{"Power allocation game solver"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(pag::kToolName) + " " + pag::kToolVersion);

  // validate
  auto* validate = app.add_subcommand("validate", "Parse and validate an environment file");
  std::string validate_env;
  validate->add_option("environment", validate_env, "Environment JSON file")->required();

  // states
  auto* states = app.add_subcommand("states", "Support, threat and state for an allocation");
  std::string states_env, states_alloc, states_out;
  states->add_option("environment", states_env)->required();
  states->add_option("allocation", states_alloc)->required();
  states->add_option("--out", states_out, "Write the JSON report to a file");

  // best-response
  auto* br = app.add_subcommand("best-response", "Exact best response for one country");
  std::string br_env, br_alloc, br_country, br_form, br_out;
  br->add_option("environment", br_env)->required();
  br->add_option("allocation", br_alloc)->required();
  br->add_option("--country", br_country, "Country label")->required();
  br->add_option("--form", br_form, "Utility form override");
  br->add_option("--out", br_out);

  // equilibria
  auto* eq = app.add_subcommand("equilibria", "Enumerate all grid equilibria");
  std::string eq_env;
  CommonFlags eq_flags;
  eq->add_option("environment", eq_env)->required();
  eq->add_option("--grid", eq_flags.grid, "Grid denominator (default: largest under the cap)");
  eq->add_option("--form", eq_flags.form);
  eq->add_option("--jobs", eq_flags.jobs, "Worker threads (output independent of this)");
  eq->add_option("--out", eq_flags.out_path);

  // dynamics
  auto* dyn = app.add_subcommand("dynamics", "Best-response dynamics from an allocation");
  std::string dyn_env, dyn_alloc, dyn_form, dyn_out, dyn_schedule = "round-robin";
  std::uint64_t dyn_seed = 0;
  unsigned dyn_rounds = 100;
  dyn->add_option("environment", dyn_env)->required();
  dyn->add_option("allocation", dyn_alloc)->required();
  dyn->add_option("--schedule", dyn_schedule, "round-robin or random");
  dyn->add_option("--seed", dyn_seed, "Seed for the random schedule");
  dyn->add_option("--max-rounds", dyn_rounds);
  dyn->add_option("--form", dyn_form);
  dyn->add_option("--out", dyn_out);

  // paradox
  auto* paradox = app.add_subcommand("paradox", "Compare optimal welfare across two environments");
  std::string px_small, px_large, px_country, px_mode = "equilibria";
  CommonFlags px_flags;
  paradox->add_option("env-small", px_small, "Environment where the country has fewer friends")
      ->required();
  paradox->add_option("env-large", px_large, "Environment where the country has more friends")
      ->required();
  paradox->add_option("--country", px_country)->required();
  paradox->add_option("--mode", px_mode, "equilibria or all");
  paradox->add_option("--grid", px_flags.grid);
  paradox->add_option("--form", px_flags.form);
  paradox->add_option("--jobs", px_flags.jobs);
  paradox->add_option("--out", px_flags.out_path);

  // poa
  auto* poa = app.add_subcommand("poa", "Price of anarchy over the grid");
  std::string poa_env;
  CommonFlags poa_flags;
  poa->add_option("environment", poa_env)->required();
  poa->add_option("--grid", poa_flags.grid);
  poa->add_option("--form", poa_flags.form);
  poa->add_option("--jobs", poa_flags.jobs);
  poa->add_option("--out", poa_flags.out_path);

  // bounds
  auto* bounds = app.add_subcommand("bounds", "Analytic price-of-anarchy bounds");
  std::string bounds_env, bounds_form, bounds_out;
  bounds->add_option("environment", bounds_env)->required();
  bounds->add_option("--form", bounds_form);
  bounds->add_option("--out", bounds_out);

  // construct
  auto* construct = app.add_subcommand("construct", "Build a contested environment pair");
  std::string c_kind, c_powers, c_prefix = "pair", c_group_rel = "adversarial", c_out;
  int c_n = 0, c_i = 0, c_j = 0;
  std::string c_group;
  std::string c_t_friend = "1", c_t_adv = "2";
  construct->add_option("kind", c_kind, "thm3 or cor1")->required();
  construct->add_option("--n", c_n, "Number of countries")->required();
  construct->add_option("--powers", c_powers, "Comma-separated powers")->required();
  construct->add_option("--i", c_i, "Focal country (1-indexed)")->required();
  construct->add_option("--j", c_j, "Contested country (1-indexed, thm3)");
  construct->add_option("--s", c_group, "Comma-separated contested countries (cor1)");
  construct->add_option("--group-relations", c_group_rel,
                        "Relations inside the contested group: adversarial or unrelated");
  construct->add_option("--t-friend", c_t_friend, "Favorable friend value for contested pairs");
  construct->add_option("--t-adv", c_t_adv, "Favorable adversary value for contested pairs");
  construct->add_option("--out-prefix", c_prefix);
  construct->add_option("--out", c_out);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  mpz_class cap = space_cap_from_env();

  if (app.got_subcommand(validate)) {
    LoadedInput in = load_input(validate_env);
    pag::Scenario scenario = pag::parse_scenario(in.content);
    Json body = Json::object();
    body["valid"] = true;
    body["countries"] = scenario.env->size();
    body["relations"] = scenario.env->relation_count();
    body["form"] = pag::to_string(scenario.model.form());
    emit(with_manifest(make_manifest("validate", {in}, Json::object()), body), "");
    return 0;
  }

  if (app.got_subcommand(states)) {
    LoadedInput env_in = load_input(states_env);
    LoadedInput alloc_in = load_input(states_alloc);
    pag::Scenario scenario = pag::parse_scenario(env_in.content);
    pag::StrategyMatrix U = pag::parse_allocation(scenario.env, alloc_in.content);
    emit(with_manifest(make_manifest("states", {env_in, alloc_in}, Json::object()),
                       pag::states_json(U)),
         states_out);
    return 0;
  }

  if (app.got_subcommand(br)) {
    LoadedInput env_in = load_input(br_env);
    LoadedInput alloc_in = load_input(br_alloc);
    pag::Scenario scenario = load_scenario_file(env_in, br_form);
    pag::StrategyMatrix U = pag::parse_allocation(scenario.env, alloc_in.content);
    pag::CountryId i = scenario.env->id_of(br_country);
    pag::BestResponse response = pag::best_response(scenario.model, U, i);
    Json params = Json::object();
    params["country"] = br_country;
    params["form"] = pag::to_string(scenario.model.form());
    emit(with_manifest(make_manifest("best-response", {env_in, alloc_in}, std::move(params)),
                       pag::best_response_json(response, *scenario.env, br_country)),
         br_out);
    return 0;
  }

  if (app.got_subcommand(eq)) {
    LoadedInput env_in = load_input(eq_env);
    pag::Scenario scenario = load_scenario_file(env_in, eq_flags.form);
    unsigned long d = resolve_grid(*scenario.env, eq_flags.grid, cap);
    pag::ScanOptions options{eq_flags.jobs, cap};
    pag::EquilibriumSet set = pag::enumerate_equilibria(scenario.model, d, options);
    Json params = Json::object();
    params["grid"] = d;
    params["form"] = pag::to_string(scenario.model.form());
    params["cap"] = cap.get_str();
    emit(with_manifest(make_manifest("equilibria", {env_in}, std::move(params)),
                       pag::equilibrium_set_json(set, scenario.model)),
         eq_flags.out_path);
    return 0;
  }

  if (app.got_subcommand(dyn)) {
    LoadedInput env_in = load_input(dyn_env);
    LoadedInput alloc_in = load_input(dyn_alloc);
    pag::Scenario scenario = load_scenario_file(env_in, dyn_form);
    pag::StrategyMatrix U0 = pag::parse_allocation(scenario.env, alloc_in.content);
    pag::Schedule schedule;
    if (dyn_schedule == "round-robin") {
      schedule = pag::Schedule::RoundRobin;
    } else if (dyn_schedule == "random") {
      schedule = pag::Schedule::Random;
    } else {
      throw pag::ParseError("--schedule must be round-robin or random");
    }
    pag::DynamicsResult result =
        pag::best_response_dynamics(scenario.model, U0, schedule, dyn_seed, dyn_rounds);
    Json params = Json::object();
    params["schedule"] = dyn_schedule;
    params["seed"] = dyn_seed;
    params["max_rounds"] = dyn_rounds;
    params["form"] = pag::to_string(scenario.model.form());
    emit(with_manifest(make_manifest("dynamics", {env_in, alloc_in}, std::move(params)),
                       pag::dynamics_json(result, scenario.model)),
         dyn_out);
    return 0;
  }

  if (app.got_subcommand(paradox)) {
    LoadedInput small_in = load_input(px_small);
    LoadedInput large_in = load_input(px_large);
    pag::Scenario small = load_scenario_file(small_in, px_flags.form);
    pag::Scenario large = load_scenario_file(large_in, px_flags.form);
    pag::CountryId i = small.env->id_of(px_country);
    pag::WelfareMode mode = pag::welfare_mode_from_string(px_mode);
    unsigned long d = resolve_grid(*small.env, px_flags.grid, cap);
    pag::ScanOptions options{px_flags.jobs, cap};
    pag::ParadoxReport report =
        pag::detect_paradox(small.model, large.model, i, mode, d, options);
    Json params = Json::object();
    params["country"] = px_country;
    params["mode"] = px_mode;
    params["grid"] = d;
    params["form"] = pag::to_string(small.model.form());
    params["cap"] = cap.get_str();
    emit(with_manifest(make_manifest("paradox", {small_in, large_in}, std::move(params)),
                       pag::paradox_json(report)),
         px_flags.out_path);
    return 0;
  }

  if (app.got_subcommand(poa)) {
    LoadedInput env_in = load_input(poa_env);
    pag::Scenario scenario = load_scenario_file(env_in, poa_flags.form);
    unsigned long d = resolve_grid(*scenario.env, poa_flags.grid, cap);
    pag::ScanOptions options{poa_flags.jobs, cap};
    pag::PoAReport report = pag::price_of_anarchy(scenario.model, d, options);
    Json params = Json::object();
    params["grid"] = d;
    params["form"] = pag::to_string(scenario.model.form());
    params["cap"] = cap.get_str();
    emit(with_manifest(make_manifest("poa", {env_in}, std::move(params)),
                       pag::poa_json(report)),
         poa_flags.out_path);
    return 0;
  }

  if (app.got_subcommand(bounds)) {
    LoadedInput env_in = load_input(bounds_env);
    pag::Scenario scenario = load_scenario_file(env_in, bounds_form);
    pag::PoaBounds b = pag::poa_bounds(scenario.model);
    Json params = Json::object();
    params["form"] = pag::to_string(scenario.model.form());
    emit(with_manifest(make_manifest("bounds", {env_in}, std::move(params)),
                       pag::poa_bounds_json(b)),
         bounds_out);
    return 0;
  }

  if (app.got_subcommand(construct)) {
    if (c_kind != "thm3" && c_kind != "cor1") {
      throw pag::ParseError("construct kind must be thm3 or cor1");
    }
    std::vector<pag::Rational> powers = parse_power_list(c_powers);
    if (c_n != static_cast<int>(powers.size())) {
      throw pag::ParseError("--n does not match the number of powers");
    }
    auto to_id = [&](int one_based, const char* what) {
      if (one_based < 1 || one_based > c_n) {
        throw pag::ParseError(std::string(what) + " must be between 1 and " +
                              std::to_string(c_n));
      }
      return static_cast<pag::CountryId>(one_based - 1);
    };
    pag::CountryId i = to_id(c_i, "--i");

    std::vector<pag::CountryId> group;
    if (c_kind == "thm3") {
      group.push_back(to_id(c_j, "--j"));
    } else {
      std::stringstream ss(c_group);
      std::string item;
      while (std::getline(ss, item, ',')) group.push_back(to_id(std::stoi(item), "--s entry"));
      if (group.empty()) throw pag::ParseError("cor1 needs --s with at least one country");
    }
    pag::GroupRelations within;
    if (c_group_rel == "adversarial") {
      within = pag::GroupRelations::MutuallyAdversarial;
    } else if (c_group_rel == "unrelated") {
      within = pag::GroupRelations::Unrelated;
    } else {
      throw pag::ParseError("--group-relations must be adversarial or unrelated");
    }

    pag::EnvironmentPair pair = pag::construct_contested_group_pair(powers, i, group, within);
    pag::Rational t_friend = pag::parse_rational(c_t_friend);
    pag::Rational t_adv = pag::parse_rational(c_t_adv);

    auto scenario_for = [&](const pag::Environment& env) {
      pag::Scenario s;
      s.env = pag::share(env);
      s.model = pag::UtilityModel::defaults(s.env);
      pag::CountryId fi = s.env->id_of(std::to_string(c_i));
      for (pag::CountryId g : group) {
        pag::CountryId gj = s.env->id_of(std::to_string(g + 1));
        s.model.set_pair_values(fi, gj, pag::RelationSign::Friend,
                                {t_friend, pag::Rational(0)});
        s.model.set_pair_values(fi, gj, pag::RelationSign::Adversary,
                                {t_adv, pag::Rational(0)});
      }
      return s;
    };

    std::string small_path = c_prefix + "_small.json";
    std::string large_path = c_prefix + "_large.json";
    write_file(small_path, pag::scenario_json(scenario_for(pair.fewer_friends)));
    write_file(large_path, pag::scenario_json(scenario_for(pair.more_friends)));

    Json params = Json::object();
    params["kind"] = c_kind;
    params["n"] = c_n;
    Json power_list = Json::array();
    for (const pag::Rational& p : powers) power_list.push_back(pag::fraction_string(p));
    params["powers"] = std::move(power_list);
    params["i"] = c_i;
    if (c_kind == "thm3") {
      params["j"] = c_j;
    } else {
      Json s_list = Json::array();
      for (pag::CountryId g : group) s_list.push_back(g + 1);
      params["s"] = std::move(s_list);
      params["group_relations"] = c_group_rel;
    }
    params["t_friend"] = pag::fraction_string(t_friend);
    params["t_adv"] = pag::fraction_string(t_adv);
    params["out_prefix"] = c_prefix;
    Json body = Json::object();
    Json files = Json::array();
    files.push_back(small_path);
    files.push_back(large_path);
    body["files"] = std::move(files);
    emit(with_manifest(make_manifest("construct", {}, std::move(params)), body), c_out);
    return 0;
  }

  return 2;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const pag::ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const pag::DomainError& e) {
    Json err = Json::object();
    Json detail = Json::object();
    detail["type"] = "domain";
    detail["message"] = e.what();
    err["error"] = std::move(detail);
    std::cout << err.dump(2) << "\n";
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
}
