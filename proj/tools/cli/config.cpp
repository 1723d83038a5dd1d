#include "config.hpp"

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

#include "hypolab/errors.hpp"
#include "hypolab/raw_io.hpp"

namespace hypolab::cli {

namespace {

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

std::string fmt_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

double to_double(const std::string& key, const std::string& v) {
  double out = 0.0;
  const auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc{} || p != v.data() + v.size()) {
    throw ConfigError(key + ": expected a number, got '" + v + "'");
  }
  return out;
}

template <class Int>
Int to_int(const std::string& key, const std::string& v) {
  Int out = 0;
  const auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc{} || p != v.data() + v.size()) {
    throw ConfigError(key + ": expected an integer, got '" + v + "'");
  }
  return out;
}

bool to_bool(const std::string& key, const std::string& v) {
  if (v == "true") return true;
  if (v == "false") return false;
  throw ConfigError(key + ": expected true or false, got '" + v + "'");
}

std::vector<std::string> split_list(const std::string& v) {
  std::vector<std::string> out;
  std::stringstream ss(v);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

std::string join(const std::vector<std::string>& items) {
  std::string out;
  for (const auto& s : items) out += (out.empty() ? "" : ", ") + s;
  return out;
}

const char* kind_name(InitialKind k) {
  switch (k) {
    case InitialKind::single_mode: return "single-mode";
    case InitialKind::bump: return "bump";
    default: return "random";
  }
}

template <class T>
std::string opt_text(const std::optional<T>& v) {
  if (!v) return "auto";
  if constexpr (std::is_floating_point_v<T>) return fmt_double(*v);
  else return std::to_string(*v);
}

struct Key {
  std::string_view name;
  std::function<void(RunConfig&, const std::string&, const std::string&)> set;
  std::function<std::string(const RunConfig&)> get;
};

#define HL_DOUBLE(NAME, FIELD)                                                               \
  Key {                                                                                       \
    NAME, [](RunConfig& c, const std::string& k, const std::string& v) { c.FIELD = to_double(k, v); }, \
        [](const RunConfig& c) { return fmt_double(c.FIELD); }                                \
  }
#define HL_INT(NAME, FIELD)                                                                      \
  Key {                                                                                           \
    NAME, [](RunConfig& c, const std::string& k, const std::string& v) { c.FIELD = to_int<int>(k, v); }, \
        [](const RunConfig& c) { return std::to_string(c.FIELD); }                                \
  }
#define HL_BOOL(NAME, FIELD)                                                                   \
  Key {                                                                                         \
    NAME, [](RunConfig& c, const std::string& k, const std::string& v) { c.FIELD = to_bool(k, v); }, \
        [](const RunConfig& c) { return std::string(c.FIELD ? "true" : "false"); }              \
  }
#define HL_AUTO(NAME, FIELD, PARSE)                                                   \
  Key {                                                                                \
    NAME,                                                                              \
        [](RunConfig& c, const std::string& k, const std::string& v) {                 \
          if (v == "auto") c.FIELD.reset();                                            \
          else c.FIELD = PARSE(k, v);                                                  \
        },                                                                             \
        [](const RunConfig& c) { return opt_text(c.FIELD); }                           \
  }

// Applied in this order, so a preset is in place before its parameters are
// overridden.
const std::vector<Key>& keys() {
  static const std::vector<Key> table{
      Key{"scenario.preset",
          [](RunConfig& c, const std::string&, const std::string& v) {
            c.scenario_preset_name = v;
            if (v != "custom") c.scenario = scenario_preset(v);
          },
          [](const RunConfig& c) { return c.scenario_preset_name; }},
      Key{"scenario.shapes",
          [](RunConfig& c, const std::string& k, const std::string& v) {
            std::optional<SupportRegion> region;
            try {
              region = SupportRegion::parse(v);
            } catch (const std::invalid_argument& e) {
              throw ConfigError(k + ": " + e.what());
            }
            if (c.scenario_preset_name != "custom") {
              // Echoed configs repeat the preset's own shapes.
              if (region->format() == c.scenario.region.format()) return;
              throw ConfigError(k + " requires scenario.preset = custom");
            }
            c.scenario.region = *region;
            c.scenario.name = "custom";
          },
          [](const RunConfig& c) { return c.scenario.region.format(); }},
      HL_DOUBLE("scenario.smoothing_width", scenario.smoothing_width),
      HL_DOUBLE("scenario.amplitude", scenario.amplitude),
      HL_DOUBLE("scenario.t_star", scenario.t_star),
      Key{"scenario.sigma_raw",
          [](RunConfig& c, const std::string&, const std::string& v) {
            if (v == "none") c.sigma_raw.reset();
            else c.sigma_raw = v;
          },
          [](const RunConfig& c) { return c.sigma_raw ? c.sigma_raw->string() : std::string("none"); }},
      HL_INT("grid.n_x", n_x),
      HL_INT("grid.n_theta", n_theta),
      HL_AUTO("solver.dt", dt, to_double),
      HL_DOUBLE("solver.t_end", t_end),
      HL_INT("solver.record_every", record_every),
      HL_BOOL("solver.zero_mass", zero_mass),
      Key{"initial.kind",
          [](RunConfig& c, const std::string& k, const std::string& v) {
            if (v == "single-mode") c.initial_kind = InitialKind::single_mode;
            else if (v == "bump") c.initial_kind = InitialKind::bump;
            else if (v == "random") c.initial_kind = InitialKind::random;
            else throw ConfigError(k + ": unknown initial data '" + v + "'");
          },
          [](const RunConfig& c) { return std::string(kind_name(c.initial_kind)); }},
      HL_DOUBLE("initial.epsilon", single_mode.epsilon),
      HL_INT("initial.k1", single_mode.k1),
      HL_INT("initial.k2", single_mode.k2),
      HL_DOUBLE("initial.x1", bump.x1),
      HL_DOUBLE("initial.x2", bump.x2),
      HL_DOUBLE("initial.theta", bump.theta),
      HL_DOUBLE("initial.width", bump.width),
      HL_DOUBLE("initial.angular_width", bump.angular_width),
      HL_DOUBLE("initial.amplitude", bump.amplitude),
      HL_INT("initial.max_k", random_max_k),
      HL_INT("initial.max_m", random_max_m),
      Key{"run.seed",
          [](RunConfig& c, const std::string& k, const std::string& v) {
            c.seed = to_int<std::uint64_t>(k, v);
          },
          [](const RunConfig& c) { return std::to_string(c.seed); }},
      HL_INT("run.threads", threads),
      Key{"verify.inequalities",
          [](RunConfig& c, const std::string& k, const std::string& v) {
            c.verifications = split_list(v);
            for (const auto& name : c.verifications) {
              const auto& known = verification_names();
              if (std::find(known.begin(), known.end(), name) == known.end()) {
                throw ConfigError(k + ": unknown inequality '" + name + "'");
              }
            }
          },
          [](const RunConfig& c) { return join(c.verifications); }},
      HL_AUTO("verify.lambda", verify_lambda, to_double),
      HL_DOUBLE("verify.delta", verify_delta),
      HL_AUTO("gcc.positions", gcc_positions, to_int<int>),
      HL_AUTO("gcc.angles", gcc_angles, to_int<int>),
      HL_AUTO("gcc.dt_quad", gcc_dt_quad, to_double),
      HL_INT("certificate.ensemble", certificate.ensemble_size),
      HL_INT("certificate.held_out", certificate.held_out),
      HL_INT("certificate.windows", certificate.windows),
      HL_INT("certificate.held_out_windows", certificate.held_out_windows),
      HL_INT("certificate.max_k", certificate.max_k),
      HL_INT("certificate.max_m", certificate.max_m),
      HL_BOOL("certificate.worst_ray_bump", certificate.worst_ray_bump),
      HL_DOUBLE("certificate.dt", certificate.dt),
      HL_INT("certificate.record_every", certificate.record_every),
      Key{"bogovskii.domain",
          [](RunConfig& c, const std::string& k, const std::string& v) {
            if (v != "disk" && v != "square" && v != "rectangle" && v != "l-shape") {
              throw ConfigError(k + ": unknown domain '" + v + "'");
            }
            c.bogovskii.domain = v;
          },
          [](const RunConfig& c) { return c.bogovskii.domain; }},
      HL_INT("bogovskii.cells", bogovskii.cells),
      HL_DOUBLE("bogovskii.radius", bogovskii.radius),
      HL_DOUBLE("bogovskii.width", bogovskii.width),
      HL_DOUBLE("bogovskii.height", bogovskii.height),
      Key{"bogovskii.datum",
          [](RunConfig& c, const std::string& k, const std::string& v) {
            if (v != "manufactured" && v != "zero" && v != "random") {
              throw ConfigError(k + ": unknown datum '" + v + "'");
            }
            c.bogovskii.datum = v;
          },
          [](const RunConfig& c) { return c.bogovskii.datum; }},
      HL_INT("bogovskii.members", bogovskii.members),
      Key{"output.dir",
          [](RunConfig& c, const std::string&, const std::string& v) { c.output_dir = v; },
          [](const RunConfig& c) { return c.output_dir.string(); }},
  };
  return table;
}

#undef HL_DOUBLE
#undef HL_INT
#undef HL_BOOL
#undef HL_AUTO

void validate(const RunConfig& c) {
  try {
    (void)c.grid();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("grid: ") + e.what());
  }
  if (c.dt && !(*c.dt > 0.0)) throw ConfigError("solver.dt must be positive");
  if (!(c.t_end > 0.0)) throw ConfigError("solver.t_end must be positive");
  if (c.record_every < 1) throw ConfigError("solver.record_every must be at least 1");
  if (!(c.scenario.t_star > 0.0)) throw ConfigError("scenario.t_star must be positive");
  if (!(c.scenario.smoothing_width > 0.0)) throw ConfigError("scenario.smoothing_width must be positive");
  if (!(c.scenario.amplitude > 0.0)) throw ConfigError("scenario.amplitude must be positive");
  if (c.threads < 1) throw ConfigError("run.threads must be at least 1");
  if (c.random_max_k < 0 || c.random_max_m < 0) throw ConfigError("initial.max_k/max_m must be >= 0");
  if (c.gcc_positions && *c.gcc_positions < 1) throw ConfigError("gcc.positions must be positive");
  if (c.gcc_angles && *c.gcc_angles < 1) throw ConfigError("gcc.angles must be positive");
  if (c.gcc_dt_quad && !(*c.gcc_dt_quad > 0.0)) throw ConfigError("gcc.dt_quad must be positive");
  if (c.certificate.ensemble_size < 1 || c.certificate.held_out < 0 || c.certificate.windows < 1 ||
      c.certificate.held_out_windows < 1 || !(c.certificate.dt > 0.0) ||
      c.certificate.record_every < 1) {
    throw ConfigError("certificate: sizes, windows and dt must be positive");
  }
  if (c.bogovskii.cells < 4) throw ConfigError("bogovskii.cells must be at least 4");
  if (c.bogovskii.members < 8) throw ConfigError("bogovskii.members must be at least 8");
  if (!(c.bogovskii.radius > 0.0) || !(c.bogovskii.width > 0.0) || !(c.bogovskii.height > 0.0)) {
    throw ConfigError("bogovskii: sizes must be positive");
  }
}

}  // namespace

const std::vector<std::string>& verification_names() {
  static const std::vector<std::string> names{"energy",    "mass",  "monotone", "sufficient",
                                              "following", "quant", "claim"};
  return names;
}

InitialData RunConfig::initial_data() const {
  switch (initial_kind) {
    case InitialKind::single_mode: return single_mode;
    case InitialKind::bump: return bump;
    default: return RandomBandLimitedData{seed, random_max_k, random_max_m, bump.amplitude};
  }
}

GccSampling RunConfig::gcc_sampling(const AbsorptionField& field) const {
  GccSampling s = default_gcc_sampling(field);
  if (gcc_positions) s.positions = *gcc_positions;
  if (gcc_angles) s.angles = *gcc_angles;
  if (gcc_dt_quad) s.dt_quad = *gcc_dt_quad;
  return s;
}

AbsorptionField RunConfig::build_field() const {
  const GridSpec g = grid();
  if (sigma_raw) {
    std::vector<double> values;
    try {
      values = read_matrix(*sigma_raw, static_cast<std::size_t>(n_x));
    } catch (const std::invalid_argument& e) {
      throw ConfigError("scenario.sigma_raw: " + std::string(e.what()));
    }
    try {
      return absorption_from_raw(g, std::move(values));
    } catch (const std::invalid_argument& e) {
      throw ConfigError("scenario.sigma_raw: " + std::string(e.what()));
    }
  }
  return build_scenario_field(g, scenario);
}

RunConfig parse_config(std::string_view text) {
  std::map<std::string, std::string, std::less<>> entries;
  std::istringstream in{std::string(text)};
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    const std::string body = trim(line);
    if (body.empty()) continue;
    const auto eq = body.find('=');
    if (eq == std::string::npos) {
      throw ConfigError("line " + std::to_string(lineno) + ": expected 'key = value'");
    }
    const std::string key = trim(std::string_view(body).substr(0, eq));
    const std::string value = trim(std::string_view(body).substr(eq + 1));
    const auto& table = keys();
    if (std::none_of(table.begin(), table.end(), [&](const Key& k) { return k.name == key; })) {
      throw ConfigError("line " + std::to_string(lineno) + ": unknown key '" + key + "'");
    }
    if (value.empty()) throw ConfigError("line " + std::to_string(lineno) + ": empty value for " + key);
    if (!entries.emplace(key, value).second) {
      throw ConfigError("line " + std::to_string(lineno) + ": duplicate key '" + key + "'");
    }
  }

  RunConfig config;
  for (const Key& k : keys()) {
    const auto it = entries.find(k.name);
    if (it == entries.end()) continue;
    k.set(config, it->first, it->second);
  }
  if (config.scenario_preset_name == "custom" && !entries.contains("scenario.shapes") &&
      !config.sigma_raw) {
    throw ConfigError("scenario.preset = custom needs scenario.shapes or scenario.sigma_raw");
  }
  validate(config);
  return config;
}

RunConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot read config " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

std::string echo(const RunConfig& config) {
  std::string out;
  for (const Key& k : keys()) {
    out += std::string(k.name) + " = " + k.get(config) + "\n";
  }
  return out;
}

}  // namespace hypolab::cli
