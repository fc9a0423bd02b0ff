#pragma once

#include "iwf/engine.hpp"
#include "iwf/expharness.hpp"

#include <json.hpp>

#include <filesystem>
#include <optional>
#include <string>

namespace iwf {

/// How a single game is played from a network document.
struct GameSettings {
  ScheduleKind schedule = ScheduleKind::jacobi;
  std::size_t it_max = 100;
  double epsilon = 1e-6;
  std::size_t delay_bound = 0;
  std::size_t update_bound = 1;
  std::string init = "uniform";  // uniform | strongest | random
};

/// Parsed `play` / `certify` input.
struct NetworkDocument {
  NetworkConfig config;
  std::optional<ChannelRealization> channels;  // explicit matrices; sampled from seed otherwise
  std::uint64_t seed = 0;
  GameSettings game;
};

/// Every parser rejects unknown keys and reports errors as ConfigError with
/// the JSON path of the offending field.
NetworkDocument parse_network_document(const nlohmann::json& doc);
SweepSpec parse_sweep_document(const nlohmann::json& doc);

nlohmann::json to_json(const SweepSpec& spec);

/// Reads and parses a JSON file; ConfigError on I/O or syntax errors.
nlohmann::json load_json_file(const std::filesystem::path& path);

/// Channels of the document, sampling them when not given explicitly.
ChannelRealization document_channels(const NetworkDocument& doc);

PowerProfile initial_profile(const NetworkConfig& config, const std::string& init, std::uint64_t seed);

}  // namespace iwf
