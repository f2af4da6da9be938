#include <cfplace/config_io.hpp>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include <cfplace/format.hpp>

namespace cfplace {
namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& path, const std::string& what) {
  throw std::runtime_error("config: field '" + path + "' " + what);
}

const json& need(const json& obj, const char* key, const std::string& prefix) {
  if (!obj.is_object()) fail(prefix.empty() ? "(root)" : prefix, "must be an object");
  const auto it = obj.find(key);
  if (it == obj.end())
    fail(prefix.empty() ? std::string(key) : prefix + "." + key, "is missing");
  return *it;
}

std::string join(const std::string& prefix, const char* key) {
  return prefix.empty() ? std::string(key) : prefix + "." + key;
}

double num_at(const json& j, const std::string& path) {
  if (!j.is_number()) fail(path, "must be a number");
  return j.get<double>();
}

double num_field(const json& obj, const char* key, const std::string& prefix) {
  return num_at(need(obj, key, prefix), join(prefix, key));
}

double num_or(const json& obj, const char* key, const std::string& prefix, double fallback) {
  if (!obj.is_object() || obj.find(key) == obj.end()) return fallback;
  return num_at(obj.at(key), join(prefix, key));
}

int int_at(const json& j, const std::string& path) {
  if (!j.is_number_integer()) fail(path, "must be an integer");
  return j.get<int>();
}

int int_field(const json& obj, const char* key, const std::string& prefix) {
  return int_at(need(obj, key, prefix), join(prefix, key));
}

int int_or(const json& obj, const char* key, const std::string& prefix, int fallback) {
  if (!obj.is_object() || obj.find(key) == obj.end()) return fallback;
  return int_at(obj.at(key), join(prefix, key));
}

Point2 point_at(const json& j, const std::string& path) {
  if (!j.is_array() || j.size() != 2) fail(path, "must be an [x, y] pair");
  return {num_at(j[0], path + "[0]"), num_at(j[1], path + "[1]")};
}

Sym2 cov_at(const json& j, const std::string& path) {
  if (!j.is_array() || j.size() != 2 || !j[0].is_array() || !j[1].is_array() ||
      j[0].size() != 2 || j[1].size() != 2)
    fail(path, "must be a 2x2 matrix [[a,b],[b,c]]");
  const double a = num_at(j[0][0], path + "[0][0]");
  const double b01 = num_at(j[0][1], path + "[0][1]");
  const double b10 = num_at(j[1][0], path + "[1][0]");
  const double c = num_at(j[1][1], path + "[1][1]");
  const double scale = std::max({1.0, std::abs(b01), std::abs(b10)});
  if (std::abs(b01 - b10) > 1e-9 * scale) fail(path, "must be symmetric");
  return {a, b01, c};
}

json point_json(Point2 p) { return json::array({p.x, p.y}); }

json cov_json(const Sym2& s) {
  return json::array({json::array({s.a, s.b}), json::array({s.b, s.c})});
}

}  // namespace

ExperimentConfig parse_config_text(const std::string& text) {
  json root;
  try {
    root = json::parse(text);
  } catch (const json::parse_error& e) {
    throw std::runtime_error(std::string("config: not valid JSON: ") + e.what());
  }
  if (!root.is_object()) throw std::runtime_error("config: root must be an object");

  ExperimentConfig cfg;

  if (root.contains("region")) {
    const json& r = root.at("region");
    cfg.region.xmin = num_field(r, "xmin", "region");
    cfg.region.xmax = num_field(r, "xmax", "region");
    cfg.region.ymin = num_field(r, "ymin", "region");
    cfg.region.ymax = num_field(r, "ymax", "region");
  }

  const json& density = need(root, "density", "");
  const double means_scale = num_or(density, "means_scale", "density", 1.0);
  const json& comps = need(density, "components", "density");
  if (!comps.is_array() || comps.empty())
    fail("density.components", "must be a nonempty array");
  for (std::size_t l = 0; l < comps.size(); ++l) {
    const std::string prefix = "density.components[" + std::to_string(l) + "]";
    const json& c = comps[l];
    GmmComponent g;
    g.weight = num_field(c, "weight", prefix);
    g.mean = point_at(need(c, "mean", prefix), prefix + ".mean");
    g.mean = means_scale * g.mean;
    g.cov = cov_at(need(c, "cov", prefix), prefix + ".cov");
    cfg.gmm.push_back(g);
  }

  cfg.num_aps = int_field(root, "num_aps", "");
  cfg.num_users_eval = int_field(root, "num_users_eval", "");
  cfg.num_users_placement = int_or(root, "num_users_placement", "", cfg.num_users_placement);
  cfg.mc_iterations = int_or(root, "mc_iterations", "", cfg.mc_iterations);
  cfg.restarts = int_or(root, "restarts", "", cfg.restarts);
  cfg.fading_draws = int_or(root, "fading_draws", "", cfg.fading_draws);

  if (root.contains("convention")) {
    const json& c = root.at("convention");
    if (!c.is_string()) fail("convention", "must be a string");
    const std::string name = c.get<std::string>();
    if (name == "pooled")
      cfg.convention = TailConvention::kPooled;
    else if (name == "per_user_expected")
      cfg.convention = TailConvention::kPerUserExpected;
    else
      fail("convention", "must be \"pooled\" or \"per_user_expected\"");
  }

  if (root.contains("power_grid_db")) {
    const json& grid = root.at("power_grid_db");
    if (!grid.is_array() || grid.empty()) fail("power_grid_db", "must be a nonempty array");
    cfg.power_grid_db.clear();
    for (std::size_t i = 0; i < grid.size(); ++i)
      cfg.power_grid_db.push_back(
          num_at(grid[i], "power_grid_db[" + std::to_string(i) + "]"));
  }

  if (root.contains("seed")) {
    const json& s = root.at("seed");
    if (!s.is_number_integer() && !s.is_number_unsigned()) fail("seed", "must be an integer");
    cfg.seed = s.get<std::uint64_t>();
  }

  if (root.contains("method")) {
    const json& m = root.at("method");
    if (!m.is_string()) fail("method", "must be a string");
    try {
      cfg.method = parse_method(m.get<std::string>());
    } catch (const std::invalid_argument& e) {
      fail("method", e.what());
    }
  }

  if (root.contains("channel")) {
    const json& ch = root.at("channel");
    cfg.channel.constant_c = num_or(ch, "constant_c", "channel", cfg.channel.constant_c);
    cfg.channel.gamma = num_or(ch, "gamma", "channel", cfg.channel.gamma);
    cfg.channel.epsilon = num_or(ch, "epsilon", "channel", cfg.channel.epsilon);
    cfg.channel.shadowing_sigma_db =
        num_or(ch, "shadowing_sigma_db", "channel", cfg.channel.shadowing_sigma_db);
  }

  if (root.contains("ascent")) {
    const json& a = root.at("ascent");
    cfg.maxsum_delta = num_or(a, "maxsum_delta", "ascent", cfg.maxsum_delta);
    cfg.maxmin_delta = num_or(a, "maxmin_delta", "ascent", cfg.maxmin_delta);
    cfg.ascent_max_iters = int_or(a, "max_iters", "ascent", cfg.ascent_max_iters);
    cfg.ascent_stall_window = int_or(a, "stall_window", "ascent", cfg.ascent_stall_window);
    cfg.tail_fraction = num_or(a, "tail_fraction", "ascent", cfg.tail_fraction);
  }

  try {
    cfg.validate();
  } catch (const std::invalid_argument& e) {
    throw std::runtime_error(std::string("config: ") + e.what());
  }
  return cfg;
}

ExperimentConfig load_config_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read config file " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config_text(buf.str());
}

std::string config_to_json(const ExperimentConfig& cfg) {
  json root;
  root["region"] = {{"xmin", cfg.region.xmin},
                    {"xmax", cfg.region.xmax},
                    {"ymin", cfg.region.ymin},
                    {"ymax", cfg.region.ymax}};
  json comps = json::array();
  for (const GmmComponent& g : cfg.gmm)
    comps.push_back(
        {{"weight", g.weight}, {"mean", point_json(g.mean)}, {"cov", cov_json(g.cov)}});
  root["density"] = {{"components", comps}};
  root["num_aps"] = cfg.num_aps;
  root["num_users_placement"] = cfg.num_users_placement;
  root["num_users_eval"] = cfg.num_users_eval;
  root["power_grid_db"] = cfg.power_grid_db;
  root["mc_iterations"] = cfg.mc_iterations;
  root["seed"] = cfg.seed;
  root["method"] = method_name(cfg.method);
  root["restarts"] = cfg.restarts;
  root["convention"] =
      cfg.convention == TailConvention::kPooled ? "pooled" : "per_user_expected";
  root["fading_draws"] = cfg.fading_draws;
  root["channel"] = {{"constant_c", cfg.channel.constant_c},
                     {"gamma", cfg.channel.gamma},
                     {"epsilon", cfg.channel.epsilon},
                     {"shadowing_sigma_db", cfg.channel.shadowing_sigma_db}};
  root["ascent"] = {{"maxsum_delta", cfg.maxsum_delta},
                    {"maxmin_delta", cfg.maxmin_delta},
                    {"max_iters", cfg.ascent_max_iters},
                    {"stall_window", cfg.ascent_stall_window},
                    {"tail_fraction", cfg.tail_fraction}};
  return root.dump(2);
}

std::uint64_t fnv1a64(const std::string& text) {
  std::uint64_t h = 14695981039346656037ull;
  for (unsigned char c : text) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

std::string config_hash(const ExperimentConfig& config) {
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx",
                static_cast<unsigned long long>(fnv1a64(config_to_json(config))));
  return std::string(buf);
}

namespace {

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << text;
  if (!out.flush()) throw std::runtime_error("failed writing " + path.string());
}

json load_json(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read " + path.string());
  json j;
  try {
    in >> j;
  } catch (const json::parse_error& e) {
    throw std::runtime_error(path.string() + ": not valid JSON: " + e.what());
  }
  return j;
}

}  // namespace

void write_placement_json(const std::filesystem::path& path, const Placement& aps,
                          const std::string& method, std::uint64_t seed) {
  json root;
  json pts = json::array();
  for (const Point2& p : aps) pts.push_back(point_json(p));
  root["aps"] = pts;
  root["method"] = method;
  root["seed"] = seed;
  write_text(path, root.dump(2) + "\n");
}

Placement read_placement_json(const std::filesystem::path& path) {
  const json root = load_json(path);
  if (!root.is_object() || !root.contains("aps") || !root.at("aps").is_array())
    throw std::runtime_error(path.string() + ": missing \"aps\" array");
  Placement aps;
  for (const json& p : root.at("aps")) {
    if (!p.is_array() || p.size() != 2 || !p[0].is_number() || !p[1].is_number())
      throw std::runtime_error(path.string() + ": AP entries must be [x, y] pairs");
    aps.push_back({p[0].get<double>(), p[1].get<double>()});
  }
  if (aps.empty()) throw std::runtime_error(path.string() + ": no AP positions");
  return aps;
}

void write_rates_csv(const std::filesystem::path& path, const RateReport& report) {
  std::ostringstream out;
  out << "rho_r_db,sum_rate,likely95_rate,stderr_sum,stderr_95\n";
  for (const PowerMetrics& pm : report.per_power)
    out << fmt_g9(pm.rho_db) << ',' << fmt_g9(pm.sum_rate) << ',' << fmt_g9(pm.likely95)
        << ',' << fmt_g9(pm.stderr_sum) << ',' << fmt_g9(pm.stderr_95) << '\n';
  write_text(path, out.str());
}

void write_rates_json(const std::filesystem::path& path, const RateReport& report,
                      const std::string& method) {
  json root;
  root["method"] = method;
  root["mc_iterations"] = report.mc_iterations;
  root["num_users"] = report.num_users;
  root["seed"] = report.seed;
  root["convention"] =
      report.convention == TailConvention::kPooled ? "pooled" : "per_user_expected";
  root["fading_draws_per_trial"] = report.fading_draws_per_trial;
  json per_power = json::array();
  for (const PowerMetrics& pm : report.per_power) {
    json entry;
    entry["rho_db"] = pm.rho_db;
    entry["sum_rate"] = pm.sum_rate;
    entry["likely95"] = pm.likely95;
    entry["stderr_sum"] = pm.stderr_sum;
    entry["stderr_95"] = pm.stderr_95;
    entry["rate_samples"] = pm.rate_samples;
    per_power.push_back(entry);
  }
  root["per_power"] = per_power;
  write_text(path, root.dump() + "\n");
}

RateReport read_rates_json(const std::filesystem::path& path) {
  const json root = load_json(path);
  RateReport report;
  if (!root.is_object() || !root.contains("per_power") || !root.at("per_power").is_array())
    throw std::runtime_error(path.string() + ": missing \"per_power\" array");
  report.mc_iterations = root.value("mc_iterations", 0);
  report.num_users = root.value("num_users", 0);
  report.seed = root.value("seed", std::uint64_t{0});
  report.convention = root.value("convention", "pooled") == std::string("per_user_expected")
                          ? TailConvention::kPerUserExpected
                          : TailConvention::kPooled;
  report.fading_draws_per_trial = root.value("fading_draws_per_trial", 1);
  for (const json& entry : root.at("per_power")) {
    PowerMetrics pm;
    pm.rho_db = entry.value("rho_db", 0.0);
    pm.sum_rate = entry.value("sum_rate", 0.0);
    pm.likely95 = entry.value("likely95", 0.0);
    pm.stderr_sum = entry.value("stderr_sum", 0.0);
    pm.stderr_95 = entry.value("stderr_95", 0.0);
    if (entry.contains("rate_samples"))
      pm.rate_samples = entry.at("rate_samples").get<std::vector<double>>();
    report.per_power.push_back(std::move(pm));
  }
  return report;
}

void write_improvements_csv(const std::filesystem::path& path,
                            const std::vector<ImprovementRow>& rows) {
  std::ostringstream out;
  out << "baseline,candidate,metric,rho_r_db,base_value,new_value,improvement_pct\n";
  for (const ImprovementRow& r : rows)
    out << r.baseline << ',' << r.candidate << ',' << r.metric << ',' << fmt_g9(r.rho_db)
        << ',' << fmt_g9(r.base_value) << ',' << fmt_g9(r.new_value) << ','
        << fmt_g9(r.improvement_pct) << '\n';
  write_text(path, out.str());
}

void write_manifest(const std::filesystem::path& path, const RunManifest& manifest) {
  // Deterministic on purpose: reruns with the same config and seed must
  // produce byte-identical JSON. Timings are runtime chatter, so they go to
  // stdout, and outputs are stored as basenames so the directory name does
  // not leak in.
  json root;
  root["config_hash"] = manifest.config_hash;
  root["seed"] = manifest.seed;
  root["method"] = manifest.method;
  json outputs = json::array();
  for (const std::string& p : manifest.outputs)
    outputs.push_back(std::filesystem::path(p).filename().string());
  root["outputs"] = outputs;
  write_text(path, root.dump(2) + "\n");
}

}  // namespace cfplace
