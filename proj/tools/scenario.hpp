#pragma once

#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "perception/perception.hpp"

namespace perception::cli {

// A scenario file after validation. Every field has a default, so an empty
// object is a valid scenario.
struct Scenario {
  std::size_t grid_n = 2000;
  nlohmann::json prior = {{"kind", "uniform"}};
  std::vector<nlohmann::json> pgps;  // empty: subcommand default
  nlohmann::json cost = {{"kind", "quadratic"}};
  std::vector<double> kappa;         // empty: subcommand default
  std::optional<nlohmann::json> rule;
  std::string family = "monotone";   // efficiency only
  std::vector<double> h;             // hype only
  std::size_t h_steps = 400;
  bool emit_rules = false;
  std::string output = "out";
};

// Throws Error(kSchema) on anything malformed.
Scenario parse_scenario(const nlohmann::json& doc);
Scenario load_scenario(const std::string& path);

// Short tags: perfect, rho_U, rho_U:entropic, rho_C, hype:0.5,
// probweight:0.5, prelec:0.65:1, conservatism:0.5, binary, fictitious.
// Anything else is read as a path to a JSON pgp object.
nlohmann::json pgp_from_tag(const std::string& tag);

TypeDist build_prior(const nlohmann::json& spec, const Grid& grid);
Pgp build_pgp(const nlohmann::json& spec, const TypeDist& prior);
CostFunction build_cost(const nlohmann::json& spec);
AllocationRule build_rule(const nlohmann::json& spec, const Grid& grid);

// Comma separated numbers, or start:stop:count for an evenly spaced list.
std::vector<double> parse_number_list(const std::string& text);

}  // namespace perception::cli
