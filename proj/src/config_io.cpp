#include "iwf/config_io.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <initializer_list>
#include <string_view>

namespace iwf {

using nlohmann::json;

namespace {

void require_object(const json& j, const std::string& path) {
  if (!j.is_object()) throw ConfigError("'" + path + "' must be a JSON object");
}

void reject_unknown(const json& j, const std::string& path, std::initializer_list<std::string_view> known) {
  for (const auto& [key, _] : j.items()) {
    if (std::find(known.begin(), known.end(), key) == known.end()) {
      throw ConfigError("unknown key '" + (path.empty() ? key : path + "." + key) + "'");
    }
  }
}

std::string join(const std::string& path, const std::string& key) { return path.empty() ? key : path + "." + key; }

double as_number(const json& j, const std::string& path) {
  if (!j.is_number()) throw ConfigError("'" + path + "' must be a number");
  return j.get<double>();
}

long long as_integer(const json& j, const std::string& path) {
  if (!j.is_number_integer()) throw ConfigError("'" + path + "' must be an integer");
  return j.get<long long>();
}

std::size_t as_count(const json& j, const std::string& path) {
  const long long v = as_integer(j, path);
  if (v < 0) throw ConfigError("'" + path + "' must be non-negative");
  return static_cast<std::size_t>(v);
}

bool as_bool(const json& j, const std::string& path) {
  if (!j.is_boolean()) throw ConfigError("'" + path + "' must be true or false");
  return j.get<bool>();
}

std::string as_string(const json& j, const std::string& path) {
  if (!j.is_string()) throw ConfigError("'" + path + "' must be a string");
  return j.get<std::string>();
}

// A per-user field may be a single number applied to everyone or an array.
std::vector<double> per_user_numbers(const json& j, const std::string& path, std::size_t users) {
  if (j.is_number()) return std::vector<double>(users, j.get<double>());
  if (!j.is_array()) throw ConfigError("'" + path + "' must be a number or an array of numbers");
  std::vector<double> out;
  for (std::size_t i = 0; i < j.size(); ++i) out.push_back(as_number(j[i], path + "[" + std::to_string(i) + "]"));
  return out;
}

std::vector<int> per_user_counts(const json& j, const std::string& path, std::size_t users) {
  if (j.is_number_integer()) return std::vector<int>(users, static_cast<int>(j.get<long long>()));
  if (!j.is_array()) throw ConfigError("'" + path + "' must be an integer or an array of integers");
  std::vector<int> out;
  for (std::size_t i = 0; i < j.size(); ++i) {
    out.push_back(static_cast<int>(as_integer(j[i], path + "[" + std::to_string(i) + "]")));
  }
  return out;
}

std::vector<std::vector<double>> numeric_matrix(const json& j, const std::string& path) {
  if (!j.is_array()) throw ConfigError("'" + path + "' must be an array of rows");
  std::vector<std::vector<double>> rows;
  for (std::size_t i = 0; i < j.size(); ++i) {
    const std::string rp = path + "[" + std::to_string(i) + "]";
    if (!j[i].is_array()) throw ConfigError("'" + rp + "' must be an array");
    std::vector<double> row;
    for (std::size_t k = 0; k < j[i].size(); ++k) row.push_back(as_number(j[i][k], rp + "[" + std::to_string(k) + "]"));
    rows.push_back(std::move(row));
  }
  return rows;
}

NetworkConfig parse_network(const json& j, const std::string& path) {
  require_object(j, path);
  reject_unknown(j, path,
                 {"users", "tx_antennas", "rx_antennas", "power_budget", "noise_power", "direct_distance",
                  "cross_distance", "pathloss_exponent"});
  for (const char* key : {"users", "tx_antennas", "rx_antennas", "power_budget", "noise_power", "direct_distance",
                          "cross_distance", "pathloss_exponent"}) {
    if (!j.contains(key)) throw ConfigError("missing key '" + join(path, key) + "'");
  }
  NetworkConfig c;
  const long long users = as_integer(j["users"], join(path, "users"));
  if (users < 1) throw ConfigError("'" + join(path, "users") + "' must be at least 1");
  c.users = static_cast<std::size_t>(users);
  c.tx_antennas = per_user_counts(j["tx_antennas"], join(path, "tx_antennas"), c.users);
  c.rx_antennas = per_user_counts(j["rx_antennas"], join(path, "rx_antennas"), c.users);
  c.power_budget = per_user_numbers(j["power_budget"], join(path, "power_budget"), c.users);
  c.noise_power = per_user_numbers(j["noise_power"], join(path, "noise_power"), c.users);
  c.direct_distance = per_user_numbers(j["direct_distance"], join(path, "direct_distance"), c.users);
  const json& cross = j["cross_distance"];
  if (cross.is_number()) {
    c.cross_distance.assign(c.users, std::vector<double>(c.users, cross.get<double>()));
  } else {
    c.cross_distance = numeric_matrix(cross, join(path, "cross_distance"));
  }
  c.pathloss_exponent = as_number(j["pathloss_exponent"], join(path, "pathloss_exponent"));
  return validate_config(std::move(c));
}

ChannelRealization parse_channels(const json& j, const NetworkConfig& config) {
  if (!j.is_array()) throw ConfigError("'channels' must be an array of links");
  const std::size_t Q = config.users;
  std::vector<std::vector<CMatrix>> H(Q, std::vector<CMatrix>(Q));
  std::vector<std::vector<char>> seen(Q, std::vector<char>(Q, 0));
  for (std::size_t k = 0; k < j.size(); ++k) {
    const std::string path = "channels[" + std::to_string(k) + "]";
    const json& link = j[k];
    require_object(link, path);
    reject_unknown(link, path, {"from", "to", "re", "im"});
    for (const char* key : {"from", "to", "re"}) {
      if (!link.contains(key)) throw ConfigError("missing key '" + path + "." + key + "'");
    }
    const std::size_t r = as_count(link["from"], path + ".from");
    const std::size_t q = as_count(link["to"], path + ".to");
    if (r >= Q || q >= Q) throw ConfigError("'" + path + "' names a user outside 0.." + std::to_string(Q - 1));
    if (seen[r][q]) throw ConfigError("'" + path + "' repeats link " + std::to_string(r) + "->" + std::to_string(q));
    seen[r][q] = 1;

    const auto re = numeric_matrix(link["re"], path + ".re");
    const auto im = link.contains("im") ? numeric_matrix(link["im"], path + ".im") : decltype(re){};
    const std::size_t rows = re.size();
    const std::size_t cols = rows ? re[0].size() : 0;
    if (!im.empty() && im.size() != rows) throw ConfigError("'" + path + ".im' shape differs from '.re'");
    CMatrix m(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
    for (std::size_t a = 0; a < rows; ++a) {
      if (re[a].size() != cols) throw ConfigError("'" + path + ".re' rows have different lengths");
      if (!im.empty() && im[a].size() != cols) throw ConfigError("'" + path + ".im' shape differs from '.re'");
      for (std::size_t b = 0; b < cols; ++b) {
        m(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b)) = {re[a][b], im.empty() ? 0.0 : im[a][b]};
      }
    }
    H[r][q] = std::move(m);
  }
  for (std::size_t r = 0; r < Q; ++r) {
    for (std::size_t q = 0; q < Q; ++q) {
      if (!seen[r][q]) {
        throw ConfigError("'channels' is missing link " + std::to_string(r) + "->" + std::to_string(q));
      }
    }
  }
  return make_realization(config, std::move(H));
}

GameSettings parse_game(const json& j) {
  require_object(j, "game");
  reject_unknown(j, "game", {"schedule", "it_max", "epsilon", "delay_bound", "update_bound", "init"});
  GameSettings g;
  try {
    if (j.contains("schedule")) g.schedule = parse_schedule_kind(as_string(j["schedule"], "game.schedule"));
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("'game.schedule': ") + e.what());
  }
  if (j.contains("it_max")) g.it_max = as_count(j["it_max"], "game.it_max");
  if (j.contains("epsilon")) g.epsilon = as_number(j["epsilon"], "game.epsilon");
  if (j.contains("delay_bound")) g.delay_bound = as_count(j["delay_bound"], "game.delay_bound");
  if (j.contains("update_bound")) g.update_bound = as_count(j["update_bound"], "game.update_bound");
  if (j.contains("init")) g.init = as_string(j["init"], "game.init");
  if (g.it_max < 1) throw ConfigError("'game.it_max' must be at least 1");
  if (!(g.epsilon > 0.0)) throw ConfigError("'game.epsilon' must be positive");
  if (g.update_bound < 1) throw ConfigError("'game.update_bound' must be at least 1");
  if (g.init != "uniform" && g.init != "strongest" && g.init != "random") {
    throw ConfigError("'game.init' must be uniform, strongest or random");
  }
  return g;
}

}  // namespace

NetworkDocument parse_network_document(const json& doc) {
  require_object(doc, "document");
  reject_unknown(doc, "", {"network", "channels", "seed", "game"});
  if (!doc.contains("network")) throw ConfigError("missing key 'network'");
  NetworkDocument out;
  out.config = parse_network(doc["network"], "network");
  if (doc.contains("seed")) out.seed = as_count(doc["seed"], "seed");
  if (doc.contains("channels")) out.channels = parse_channels(doc["channels"], out.config);
  if (doc.contains("game")) out.game = parse_game(doc["game"]);
  return out;
}

SweepSpec parse_sweep_document(const json& doc) {
  require_object(doc, "document");
  reject_unknown(doc, "", {"sweep"});
  if (!doc.contains("sweep")) throw ConfigError("missing key 'sweep'");
  const json& j = doc["sweep"];
  require_object(j, "sweep");
  reject_unknown(j, "sweep",
                 {"users", "tx_antennas", "rx_antennas", "direct_distance", "pathloss_exponent", "noise_power",
                  "power_budget_db", "cross_distance", "normalized_pathloss_db", "literal_pathloss_ratio",
                  "sweep_variable", "sweep_values", "trials", "it_max", "schedule", "delay_bound", "update_bound",
                  "base_seed", "epsilon", "agreement_tol", "max_resamples"});
  SweepSpec s;
  if (j.contains("users")) s.users = as_count(j["users"], "sweep.users");
  if (j.contains("tx_antennas")) s.tx_antennas = static_cast<int>(as_integer(j["tx_antennas"], "sweep.tx_antennas"));
  if (j.contains("rx_antennas")) s.rx_antennas = static_cast<int>(as_integer(j["rx_antennas"], "sweep.rx_antennas"));
  if (j.contains("direct_distance")) s.direct_distance = as_number(j["direct_distance"], "sweep.direct_distance");
  if (j.contains("pathloss_exponent")) {
    s.pathloss_exponent = as_number(j["pathloss_exponent"], "sweep.pathloss_exponent");
  }
  if (j.contains("noise_power")) s.noise_power = as_number(j["noise_power"], "sweep.noise_power");
  if (j.contains("power_budget_db")) s.power_budget_db = as_number(j["power_budget_db"], "sweep.power_budget_db");
  if (j.contains("cross_distance")) s.cross_distance = as_number(j["cross_distance"], "sweep.cross_distance");
  if (j.contains("normalized_pathloss_db")) {
    s.normalized_pathloss_db = as_number(j["normalized_pathloss_db"], "sweep.normalized_pathloss_db");
  }
  if (j.contains("literal_pathloss_ratio")) {
    s.literal_pathloss_ratio = as_bool(j["literal_pathloss_ratio"], "sweep.literal_pathloss_ratio");
  }
  if (j.contains("sweep_variable")) s.variable = parse_sweep_variable(as_string(j["sweep_variable"], "sweep.sweep_variable"));
  if (j.contains("sweep_values")) {
    const json& v = j["sweep_values"];
    if (!v.is_array()) throw ConfigError("'sweep.sweep_values' must be an array of numbers");
    s.values.clear();
    for (std::size_t i = 0; i < v.size(); ++i) s.values.push_back(as_number(v[i], "sweep.sweep_values[" + std::to_string(i) + "]"));
  }
  if (j.contains("trials")) s.trials = as_count(j["trials"], "sweep.trials");
  if (j.contains("it_max")) s.it_max = as_count(j["it_max"], "sweep.it_max");
  if (j.contains("schedule")) {
    try {
      s.schedule = parse_schedule_kind(as_string(j["schedule"], "sweep.schedule"));
    } catch (const std::invalid_argument& e) {
      throw ConfigError(std::string("'sweep.schedule': ") + e.what());
    }
  }
  if (j.contains("delay_bound")) s.delay_bound = as_count(j["delay_bound"], "sweep.delay_bound");
  if (j.contains("update_bound")) s.update_bound = as_count(j["update_bound"], "sweep.update_bound");
  if (j.contains("base_seed")) s.base_seed = as_count(j["base_seed"], "sweep.base_seed");
  if (j.contains("epsilon")) s.epsilon = as_number(j["epsilon"], "sweep.epsilon");
  if (j.contains("agreement_tol")) s.agreement_tol = as_number(j["agreement_tol"], "sweep.agreement_tol");
  if (j.contains("max_resamples")) s.max_resamples = as_count(j["max_resamples"], "sweep.max_resamples");
  validate_sweep_spec(s);
  return s;
}

json to_json(const SweepSpec& s) {
  json j = {
      {"users", s.users},
      {"tx_antennas", s.tx_antennas},
      {"rx_antennas", s.rx_antennas},
      {"direct_distance", s.direct_distance},
      {"pathloss_exponent", s.pathloss_exponent},
      {"noise_power", s.noise_power},
      {"power_budget_db", s.power_budget_db},
      {"normalized_pathloss_db", s.normalized_pathloss_db},
      {"literal_pathloss_ratio", s.literal_pathloss_ratio},
      {"sweep_variable", std::string(to_string(s.variable))},
      {"sweep_values", s.values},
      {"trials", s.trials},
      {"it_max", s.it_max},
      {"schedule", std::string(to_string(s.schedule))},
      {"delay_bound", s.delay_bound},
      {"update_bound", s.update_bound},
      {"base_seed", s.base_seed},
      {"epsilon", s.epsilon},
      {"agreement_tol", s.agreement_tol},
      {"max_resamples", s.max_resamples},
  };
  if (s.cross_distance) j["cross_distance"] = *s.cross_distance;
  return {{"sweep", j}};
}

json load_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config '" + path.string() + "'");
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError("malformed JSON in '" + path.string() + "': " + e.what());
  }
}

ChannelRealization document_channels(const NetworkDocument& doc) {
  if (doc.channels) return *doc.channels;
  return sample_channels(doc.config, doc.seed);
}

PowerProfile initial_profile(const NetworkConfig& config, const std::string& init, std::uint64_t seed) {
  if (init == "uniform") return uniform_profile(config);
  if (init == "strongest") return strongest_mode_profile(config);
  if (init == "random") {
    Rng rng(mix_seed(seed, 0x5EED));
    return random_profile(config, rng);
  }
  throw ConfigError("unknown initialization '" + init + "'");
}

}  // namespace iwf
