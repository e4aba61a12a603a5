#include "scenario.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

namespace perception::cli {

using nlohmann::json;

namespace {

[[noreturn]] void fail(const std::string& msg) { throw Error(ErrorKind::kSchema, msg); }

void only_keys(const json& obj, const std::set<std::string>& allowed, const std::string& where) {
  if (!obj.is_object()) fail(where + " must be an object");
  for (const auto& [key, _] : obj.items()) {
    if (!allowed.count(key)) fail("unknown key '" + key + "' in " + where);
  }
}

double number(const json& obj, const char* key, double fallback, const std::string& where) {
  if (!obj.contains(key)) return fallback;
  const json& v = obj.at(key);
  if (!v.is_number()) fail(where + "." + key + " must be a number");
  return v.get<double>();
}

double required_number(const json& obj, const char* key, const std::string& where) {
  if (!obj.contains(key)) fail(where + " needs '" + key + "'");
  return number(obj, key, 0.0, where);
}

std::vector<double> number_array(const json& v, const std::string& where) {
  if (!v.is_array()) fail(where + " must be an array of numbers");
  std::vector<double> out;
  for (const json& x : v) {
    if (!x.is_number()) fail(where + " must be an array of numbers");
    out.push_back(x.get<double>());
  }
  return out;
}

std::string kind_of(const json& obj, const std::string& where) {
  if (!obj.is_object() || !obj.contains("kind") || !obj.at("kind").is_string()) fail(where + " needs a string 'kind'");
  return obj.at("kind").get<std::string>();
}

double parse_double(const std::string& s, const std::string& what) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(s, &used);
  } catch (const std::exception&) {
    fail("cannot read '" + s + "' as a number in " + what);
  }
  if (used != s.size()) fail("cannot read '" + s + "' as a number in " + what);
  return v;
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::stringstream in(s);
  std::string item;
  while (std::getline(in, item, sep)) out.push_back(item);
  return out;
}

}  // namespace

std::vector<double> parse_number_list(const std::string& text) {
  if (text.find(':') != std::string::npos) {
    auto parts = split(text, ':');
    if (parts.size() != 3) fail("range must be start:stop:count, got '" + text + "'");
    const double a = parse_double(parts[0], "range"), b = parse_double(parts[1], "range");
    const double c = parse_double(parts[2], "range");
    if (!(c >= 1) || c != std::floor(c)) fail("range count must be a positive integer");
    const auto count = static_cast<std::size_t>(c);
    std::vector<double> out(count);
    for (std::size_t i = 0; i < count; ++i) out[i] = count == 1 ? a : a + (b - a) * i / (count - 1.0);
    return out;
  }
  std::vector<double> out;
  for (const std::string& p : split(text, ',')) {
    if (!p.empty()) out.push_back(parse_double(p, "number list"));
  }
  if (out.empty()) fail("empty number list");
  return out;
}

Scenario parse_scenario(const json& doc) {
  only_keys(doc, {"grid_n", "prior", "pgp", "pgps", "cost", "kappa", "rule", "family", "h", "h_steps", "emit_rules",
                  "output"},
            "scenario");
  Scenario s;
  if (doc.contains("grid_n")) {
    const json& g = doc.at("grid_n");
    if (!g.is_number_integer() || g.get<long long>() < 2) fail("grid_n must be an integer >= 2");
    s.grid_n = g.get<std::size_t>();
  }
  if (doc.contains("prior")) s.prior = doc.at("prior");
  kind_of(s.prior, "prior");
  if (doc.contains("pgp")) s.pgps.push_back(doc.at("pgp"));
  if (doc.contains("pgps")) {
    if (!doc.at("pgps").is_array()) fail("pgps must be an array");
    for (const json& p : doc.at("pgps")) s.pgps.push_back(p);
  }
  for (json& p : s.pgps) {
    if (p.is_string()) p = pgp_from_tag(p.get<std::string>());
    kind_of(p, "pgp");
  }
  if (doc.contains("cost")) s.cost = doc.at("cost");
  kind_of(s.cost, "cost");
  if (doc.contains("kappa")) {
    const json& k = doc.at("kappa");
    s.kappa = k.is_string() ? parse_number_list(k.get<std::string>()) : number_array(k, "kappa");
    for (double v : s.kappa)
      if (!(v >= 0.0)) fail("kappa values must be >= 0");
  }
  if (doc.contains("rule")) {
    s.rule = doc.at("rule");
    kind_of(*s.rule, "rule");
  }
  if (doc.contains("family")) {
    if (!doc.at("family").is_string()) fail("family must be a string");
    s.family = doc.at("family").get<std::string>();
    if (s.family != "monotone" && s.family != "threshold") fail("family must be 'monotone' or 'threshold'");
  }
  if (doc.contains("h")) {
    const json& h = doc.at("h");
    s.h = h.is_string() ? parse_number_list(h.get<std::string>()) : number_array(h, "h");
    for (double v : s.h)
      if (!(v >= 0.0 && v <= 1.0)) fail("h values must lie in [0,1]");
  }
  if (doc.contains("h_steps")) {
    const json& v = doc.at("h_steps");
    if (!v.is_number_integer() || v.get<long long>() < 1) fail("h_steps must be a positive integer");
    s.h_steps = v.get<std::size_t>();
  }
  if (doc.contains("emit_rules")) {
    if (!doc.at("emit_rules").is_boolean()) fail("emit_rules must be true or false");
    s.emit_rules = doc.at("emit_rules").get<bool>();
  }
  if (doc.contains("output")) {
    if (!doc.at("output").is_string()) fail("output must be a string");
    s.output = doc.at("output").get<std::string>();
  }
  return s;
}

Scenario load_scenario(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail("cannot open scenario file " + path);
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::exception& e) {
    fail("scenario " + path + " is not valid JSON: " + e.what());
  }
  return parse_scenario(doc);
}

json pgp_from_tag(const std::string& tag) {
  auto parts = split(tag, ':');
  const std::string head = parts.empty() ? "" : parts[0];
  auto arg = [&](std::size_t i) { return parse_double(parts.at(i), "pgp tag " + tag); };
  auto want = [&](std::size_t lo, std::size_t hi) {
    if (parts.size() < lo || parts.size() > hi) fail("wrong number of parameters in pgp tag " + tag);
  };
  if (head == "perfect" || head == "binary" || head == "fictitious" || head == "rho_C") {
    want(1, 1);
    return {{"kind", head}};
  }
  if (head == "rho_U") {
    want(1, 2);
    return {{"kind", "rho_U"}, {"construction", parts.size() == 2 ? parts[1] : "shift"}};
  }
  if (head == "hype") {
    want(2, 2);
    return {{"kind", "hype"}, {"h", arg(1)}};
  }
  if (head == "probweight" || head == "prob_weight") {
    want(2, 2);
    return {{"kind", "prob_weight"}, {"alpha", arg(1)}};
  }
  if (head == "conservatism") {
    want(2, 2);
    return {{"kind", "conservatism"}, {"alpha", arg(1)}};
  }
  if (head == "prelec") {
    want(1, 3);
    json j = {{"kind", "prelec"}};
    if (parts.size() > 1) j["alpha"] = arg(1);
    if (parts.size() > 2) j["beta"] = arg(2);
    return j;
  }
  std::ifstream in(tag);
  if (!in) fail("unknown pgp tag '" + tag + "' (and no such file)");
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    fail("pgp file " + tag + " is not valid JSON: " + e.what());
  }
}

TypeDist build_prior(const json& spec, const Grid& grid) {
  const std::string kind = kind_of(spec, "prior");
  if (kind == "uniform") {
    only_keys(spec, {"kind"}, "prior");
    return uniform_prior(grid);
  }
  if (kind == "power") {
    only_keys(spec, {"kind", "a"}, "prior");
    return power_prior(grid, required_number(spec, "a", "prior"));
  }
  if (kind == "point") {
    only_keys(spec, {"kind", "x"}, "prior");
    return point_prior(grid, required_number(spec, "x", "prior"));
  }
  if (kind == "pmf") {
    only_keys(spec, {"kind", "values"}, "prior");
    if (!spec.contains("values")) fail("prior pmf needs 'values'");
    auto v = number_array(spec.at("values"), "prior.values");
    if (v.size() != grid.n()) fail("prior.values has " + std::to_string(v.size()) + " entries for " +
                                   std::to_string(grid.n()) + " cells");
    return TypeDist(grid, std::move(v));
  }
  fail("unknown prior kind '" + kind + "'");
}

Pgp build_pgp(const json& spec, const TypeDist& prior) {
  const std::string kind = kind_of(spec, "pgp");
  const Grid& grid = prior.grid();
  MapDiscretization disc = MapDiscretization::kCellImage;
  if (spec.contains("discretization")) {
    const json& d = spec.at("discretization");
    if (d == "midpoint") disc = MapDiscretization::kMidpoint;
    else if (d != "cell_image") fail("pgp.discretization must be 'cell_image' or 'midpoint'");
  }
  auto keys = [&](std::set<std::string> k) {
    k.insert("kind");
    k.insert("discretization");
    only_keys(spec, k, "pgp");
  };
  if (kind == "perfect") {
    keys({});
    return builtin_pgp(PerfectSpec{}, prior, disc);
  }
  if (kind == "prob_weight") {
    keys({"alpha"});
    return builtin_pgp(ProbWeightSpec{required_number(spec, "alpha", "pgp")}, prior, disc);
  }
  if (kind == "prelec") {
    keys({"alpha", "beta"});
    return builtin_pgp(PrelecSpec{number(spec, "alpha", 0.65, "pgp"), number(spec, "beta", 1.0, "pgp")}, prior, disc);
  }
  if (kind == "conservatism") {
    keys({"alpha"});
    return builtin_pgp(ConservatismSpec{required_number(spec, "alpha", "pgp")}, prior, disc);
  }
  if (kind == "hype") {
    keys({"h"});
    return builtin_pgp(HypeSpec{required_number(spec, "h", "pgp")}, prior, disc);
  }
  if (kind == "fictitious") {
    keys({});
    return builtin_pgp(FictitiousSpec{}, prior, disc);
  }
  if (kind == "binary") {
    keys({});
    return binary_perception(prior);
  }
  if (kind == "garble") {
    keys({"kernel"});
    if (!spec.contains("kernel") || !spec.at("kernel").is_array()) fail("garble pgp needs a 'kernel' matrix");
    std::vector<std::vector<double>> rows;
    for (const json& r : spec.at("kernel")) rows.push_back(number_array(r, "pgp.kernel row"));
    if (rows.size() != grid.n()) fail("garble kernel must have grid_n rows");
    for (const auto& r : rows)
      if (r.size() != grid.n()) fail("garble kernel must have grid_n columns");
    return builtin_pgp(GarbleSpec{Matrix::from_rows(rows)}, prior, disc);
  }
  if (kind == "partition") {
    keys({"cuts"});
    if (!spec.contains("cuts")) fail("partition pgp needs 'cuts'");
    const auto cuts = number_array(spec.at("cuts"), "pgp.cuts");
    Pgp part = partition_garbling(prior, cuts);
    return Pgp(part.prior(), part.kernel(), "partition:" + json(cuts).dump());
  }
  if (kind == "martingale") {
    keys({"lo", "hi"});
    const double lo = required_number(spec, "lo", "pgp"), hi = required_number(spec, "hi", "pgp");
    if (!(lo >= 0.0 && lo < hi && hi <= 1.0)) fail("martingale pgp needs 0 <= lo < hi <= 1");
    Pgp m = martingale_coupling(prior, uniform_band(grid, lo, hi));
    return Pgp(m.prior(), m.kernel(), "martingale:" + json(lo).dump() + ":" + json(hi).dump());
  }
  if (kind == "rho_U" || kind == "rho_C") {
    keys({"construction"});
    for (std::size_t j = 0; j < grid.n(); ++j)
      if (std::abs(prior.pmf(j) - 1.0 / grid.n()) > 1e-15) fail(kind + " needs a uniform prior");
    if (kind == "rho_C") return screening_pgp(ScreeningPgp::kRhoC, grid.n());
    const std::string c = spec.value("construction", "shift");
    if (c != "shift" && c != "entropic") fail("rho_U construction must be 'shift' or 'entropic'");
    return screening_pgp(ScreeningPgp::kRhoU, grid.n(), c == "shift" ? RhoUKernel::kShift : RhoUKernel::kEntropic);
  }
  fail("unknown pgp kind '" + kind + "'");
}

CostFunction build_cost(const json& spec) {
  const std::string kind = kind_of(spec, "cost");
  if (kind == "quadratic") {
    only_keys(spec, {"kind"}, "cost");
    return CostFunction::quadratic();
  }
  if (kind == "linear") {
    only_keys(spec, {"kind", "c"}, "cost");
    return CostFunction::linear(required_number(spec, "c", "cost"));
  }
  if (kind == "tabulated") {
    only_keys(spec, {"kind", "values"}, "cost");
    if (!spec.contains("values")) fail("tabulated cost needs 'values'");
    return CostFunction::tabulated(number_array(spec.at("values"), "cost.values"));
  }
  fail("unknown cost kind '" + kind + "'");
}

AllocationRule build_rule(const json& spec, const Grid& grid) {
  const std::string kind = kind_of(spec, "rule");
  if (kind == "threshold") {
    only_keys(spec, {"kind", "cutoff"}, "rule");
    const double c = required_number(spec, "cutoff", "rule");
    if (!(c >= 0.0 && c <= 1.0)) fail("rule.cutoff must lie in [0,1]");
    return AllocationRule::threshold(grid, grid.nearest_boundary(c));
  }
  if (kind == "constant") {
    only_keys(spec, {"kind", "value"}, "rule");
    return AllocationRule::constant(grid, required_number(spec, "value", "rule"));
  }
  if (kind == "linear") {
    // q = clamp(slope * pi + intercept).
    only_keys(spec, {"kind", "slope", "intercept"}, "rule");
    const double a = number(spec, "slope", 1.0, "rule"), b = number(spec, "intercept", 0.0, "rule");
    if (a < 0.0) fail("rule.slope must be >= 0");
    return AllocationRule::from_function(grid, [a, b](double x) { return a * x + b; });
  }
  if (kind == "values") {
    only_keys(spec, {"kind", "q"}, "rule");
    if (!spec.contains("q")) fail("rule of kind values needs 'q'");
    auto q = number_array(spec.at("q"), "rule.q");
    if (q.size() != grid.n()) fail("rule.q must have grid_n entries");
    return AllocationRule(grid, std::move(q));
  }
  fail("unknown rule kind '" + kind + "'");
}

}  // namespace perception::cli
