#include "cbai/config.hpp"

#include <cctype>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <string>

#include "cbai/errors.hpp"
#include "fmt_compat.hpp"

namespace cbai {
namespace {

std::string trim(const std::string& s) {
  std::size_t b = 0;
  std::size_t e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return s.substr(b, e - b);
}

struct RawConfig {
  // section -> key -> (value, line number)
  std::map<std::string, std::map<std::string, std::pair<std::string, int>>> sections;
  std::string origin;

  [[noreturn]] void fail(int line, const std::string& message) const {
    throw ConfigValueError(fmt_msg("%s:%d: %s", origin.c_str(), line, message.c_str()));
  }
};

RawConfig read_raw(std::istream& in, const std::string& origin) {
  static const std::set<std::string> known_sections = {
      "instance", "contamination", "policy", "experiment", "sweep"};
  RawConfig raw;
  raw.origin = origin;
  std::string line;
  std::string section;
  int lineno = 0;
  while (std::getline(in, line)) {
    lineno += 1;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    const auto comment = line.find('#');
    const std::string body = trim(comment == std::string::npos ? line : line.substr(0, comment));
    if (body.empty()) continue;
    if (body.front() == '[') {
      if (body.back() != ']') raw.fail(lineno, "unterminated section header");
      section = trim(body.substr(1, body.size() - 2));
      if (!known_sections.count(section)) {
        raw.fail(lineno, fmt_msg("unknown section [%s]", section.c_str()));
      }
      continue;
    }
    const auto eq = body.find('=');
    if (eq == std::string::npos) raw.fail(lineno, "expected key = value");
    if (section.empty()) raw.fail(lineno, "key outside any [section]");
    const std::string key = trim(body.substr(0, eq));
    const std::string value = trim(body.substr(eq + 1));
    if (key.empty()) raw.fail(lineno, "empty key");
    auto& sec = raw.sections[section];
    if (sec.count(key)) raw.fail(lineno, fmt_msg("duplicate key '%s'", key.c_str()));
    sec.emplace(key, std::make_pair(value, lineno));
  }
  return raw;
}

// Tracks which keys were consumed so leftovers can be reported as unknown.
class SectionReader {
 public:
  SectionReader(const RawConfig& raw, const std::string& name) : raw_(raw), name_(name) {
    auto it = raw.sections.find(name);
    if (it != raw.sections.end()) entries_ = &it->second;
  }

  bool present() const { return entries_ != nullptr; }

  std::optional<std::string> get(const std::string& key) {
    if (!entries_) return std::nullopt;
    auto it = entries_->find(key);
    if (it == entries_->end()) return std::nullopt;
    used_.insert(key);
    return it->second.first;
  }

  double real(const std::string& key, double fallback) {
    auto v = get(key);
    return v ? parse_real(key, *v) : fallback;
  }

  std::optional<double> real_opt(const std::string& key) {
    auto v = get(key);
    if (!v) return std::nullopt;
    return parse_real(key, *v);
  }

  std::vector<double> real_list(const std::string& key) {
    auto v = get(key);
    if (!v) return {};
    std::vector<double> out;
    std::stringstream ss(*v);
    std::string item;
    while (std::getline(ss, item, ',')) {
      out.push_back(parse_real(key, trim(item)));
    }
    if (out.empty()) fail(key, "empty list");
    return out;
  }

  std::int64_t integer(const std::string& key, std::int64_t fallback) {
    auto v = get(key);
    if (!v) return fallback;
    const double d = parse_real(key, *v);
    const auto i = static_cast<std::int64_t>(d);
    if (static_cast<double>(i) != d) fail(key, "expected an integer");
    return i;
  }

  void finish() const {
    if (!entries_) return;
    for (const auto& [key, value] : *entries_) {
      if (!used_.count(key)) {
        raw_.fail(value.second, fmt_msg("unknown key '%s' in [%s]", key.c_str(),
                                        name_.c_str()));
      }
    }
  }

  [[noreturn]] void fail(const std::string& key, const std::string& message) const {
    int line = 0;
    if (entries_) {
      auto it = entries_->find(key);
      if (it != entries_->end()) line = it->second.second;
    }
    raw_.fail(line, fmt_msg("key '%s': %s", key.c_str(), message.c_str()));
  }

 private:
  double parse_real(const std::string& key, const std::string& value) {
    if (value.empty()) fail(key, "empty value");
    char* end = nullptr;
    const double d = std::strtod(value.c_str(), &end);
    if (end != value.c_str() + value.size()) {
      fail(key, fmt_msg("cannot parse '%s' as a number", value.c_str()));
    }
    return d;
  }

  const RawConfig& raw_;
  std::string name_;
  const std::map<std::string, std::pair<std::string, int>>* entries_ = nullptr;
  std::set<std::string> used_;
};

DistKind parse_kind(SectionReader& sec, const std::string& value) {
  if (value == "gaussian") return DistKind::gaussian;
  if (value == "exponential") return DistKind::exponential;
  if (value == "lognormal") return DistKind::lognormal;
  if (value == "bernoulli") return DistKind::bernoulli;
  sec.fail("kind", fmt_msg("unknown instance kind '%s'", value.c_str()));
}

AdversaryKind parse_adversary(SectionReader& sec, const std::string& value) {
  if (value == "none") return AdversaryKind::none;
  if (value == "fixed_shift") return AdversaryKind::fixed_shift;
  if (value == "uniform_random_mean") return AdversaryKind::uniform_random_mean;
  sec.fail("adversary", fmt_msg("unknown adversary '%s'", value.c_str()));
}

PolicyKind parse_policy(SectionReader& sec, const std::string& key,
                        const std::string& value) {
  if (value == "gcbai") return PolicyKind::gcbai;
  if (value == "secbai") return PolicyKind::secbai;
  if (value == "median_se") return PolicyKind::median_se;
  if (value == "random_gap") return PolicyKind::random_gap;
  sec.fail(key, fmt_msg("unknown policy '%s'", value.c_str()));
}

RadiusMode parse_mode(SectionReader& sec, const std::string& value) {
  if (value == "theorem") return RadiusMode::theorem;
  if (value == "empirical") return RadiusMode::empirical;
  sec.fail("radius_mode", fmt_msg("unknown radius mode '%s'", value.c_str()));
}

std::string list_string(const std::vector<double>& values) {
  std::string out;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i) out += ", ";
    out += fmt_msg("%.17g", values[i]);
  }
  return out;
}

}  // namespace

LoadedConfig parse_config(std::istream& in, const std::string& origin) {
  const RawConfig raw = read_raw(in, origin);
  LoadedConfig loaded;
  auto& exp = loaded.experiment;

  SectionReader instance(raw, "instance");
  if (!instance.present()) {
    throw ConfigValueError(fmt_msg("%s: missing [instance] section", origin.c_str()));
  }
  const auto kind_value = instance.get("kind");
  if (!kind_value) instance.fail("kind", "required");
  exp.instance.kind = parse_kind(instance, *kind_value);
  exp.instance.means = instance.real_list("means");
  exp.instance.sigmas = instance.real_list("sigma");
  exp.instance.mu_log = instance.real_list("mu_log");
  exp.instance.sigma_log = instance.real_list("sigma_log");
  exp.instance.sigma_proxy = instance.real("sigma_proxy", 0.0);
  switch (exp.instance.kind) {
    case DistKind::gaussian:
      if (!exp.instance.mu_log.empty() || !exp.instance.sigma_log.empty()) {
        instance.fail("mu_log", "only valid for lognormal instances");
      }
      break;
    case DistKind::exponential:
    case DistKind::bernoulli:
      if (!exp.instance.sigmas.empty()) {
        instance.fail("sigma", "only valid for gaussian instances");
      }
      if (!exp.instance.mu_log.empty() || !exp.instance.sigma_log.empty()) {
        instance.fail("mu_log", "only valid for lognormal instances");
      }
      break;
    case DistKind::lognormal:
      if (!exp.instance.means.empty() || !exp.instance.sigmas.empty()) {
        instance.fail("means", "lognormal instances use mu_log/sigma_log");
      }
      break;
  }
  instance.finish();

  SectionReader contamination(raw, "contamination");
  {
    const double epsilon = contamination.real("epsilon", 0.0);
    const auto assumed = contamination.real_opt("epsilon_assumed");
    AdversaryKind adversary = AdversaryKind::none;
    if (auto v = contamination.get("adversary")) adversary = parse_adversary(contamination, *v);
    const auto shift = contamination.real_opt("shift");
    const auto half_width = contamination.real_opt("half_width");
    if (shift && adversary != AdversaryKind::fixed_shift) {
      contamination.fail("shift", "only valid with adversary = fixed_shift");
    }
    if (half_width && adversary != AdversaryKind::uniform_random_mean) {
      contamination.fail("half_width", "only valid with adversary = uniform_random_mean");
    }
    double parameter = 0.0;
    if (adversary == AdversaryKind::fixed_shift) {
      if (!shift) contamination.fail("shift", "required for fixed_shift");
      parameter = *shift;
    } else if (adversary == AdversaryKind::uniform_random_mean) {
      if (!half_width) contamination.fail("half_width", "required for uniform_random_mean");
      parameter = *half_width;
    }
    try {
      exp.contamination =
          ContaminationModel(epsilon, adversary, parameter, assumed.value_or(-1.0));
    } catch (const std::invalid_argument& e) {
      throw ConfigValueError(fmt_msg("%s: [contamination]: %s", origin.c_str(), e.what()));
    }
    contamination.finish();
  }

  SectionReader policy(raw, "policy");
  if (auto v = policy.get("kind")) exp.policy = parse_policy(policy, "kind", *v);
  if (auto v = policy.get("radius_mode")) exp.radius_mode = parse_mode(policy, *v);
  exp.alpha_override = policy.real_opt("alpha");
  exp.beta_exp = policy.real("beta", 2.0);
  exp.c1 = policy.real("c1", 1.0);
  policy.finish();

  SectionReader experiment(raw, "experiment");
  exp.delta = experiment.real("delta", 0.1);
  exp.n_trials = static_cast<int>(experiment.integer("trials", 1000));
  exp.master_seed = static_cast<std::uint64_t>(experiment.integer("seed", 1));
  exp.max_rounds = experiment.integer("max_rounds", 10'000'000);
  loaded.threads = static_cast<int>(experiment.integer("threads", 1));
  if (exp.n_trials < 1) experiment.fail("trials", "must be >= 1");
  if (exp.max_rounds < 1) experiment.fail("max_rounds", "must be >= 1");
  if (loaded.threads < 1) experiment.fail("threads", "must be >= 1");
  experiment.finish();

  SectionReader sweep_section(raw, "sweep");
  if (sweep_section.present()) {
    SweepSpec spec;
    const auto axis = sweep_section.get("axis");
    if (!axis) sweep_section.fail("axis", "required (delta or epsilon)");
    if (*axis == "delta") {
      spec.axis = ParamAxis::delta;
    } else if (*axis == "epsilon") {
      spec.axis = ParamAxis::epsilon;
    } else {
      sweep_section.fail("axis", fmt_msg("unknown axis '%s'", axis->c_str()));
    }
    spec.grid = sweep_section.real_list("grid");
    if (spec.grid.empty()) sweep_section.fail("grid", "required");
    loaded.sweep = std::move(spec);
    sweep_section.finish();
  }

  const double delta = exp.delta;
  if (!(delta > 0.0 && delta < 1.0)) {
    throw ConfigValueError(fmt_msg("%s: delta must lie in (0, 1)", origin.c_str()));
  }
  if (exp.beta_exp <= 1.0) {
    throw ConfigValueError(fmt_msg("%s: beta must be > 1", origin.c_str()));
  }
  if (exp.c1 < 0.0) {
    throw ConfigValueError(fmt_msg("%s: c1 must be >= 0", origin.c_str()));
  }
  const double alpha = resolved_alpha(exp);
  if (!(alpha >= 0.0 && alpha < 0.5)) {
    throw ConfigValueError(fmt_msg("%s: alpha must lie in [0, 0.5)", origin.c_str()));
  }
  return loaded;
}

LoadedConfig load_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw ConfigFileError(fmt_msg("cannot open config file '%s'", path.c_str()));
  }
  return parse_config(in, path);
}

std::vector<std::string> render_resolved(const ExperimentConfig& config) {
  std::vector<std::string> lines;
  auto add = [&lines](const std::string& key, const std::string& value) {
    lines.push_back(key + " = " + value);
  };
  const auto& inst = config.instance;
  add("instance.kind", to_string(inst.kind));
  if (!inst.means.empty()) add("instance.means", list_string(inst.means));
  if (!inst.sigmas.empty()) add("instance.sigma", list_string(inst.sigmas));
  if (!inst.mu_log.empty()) add("instance.mu_log", list_string(inst.mu_log));
  if (!inst.sigma_log.empty()) add("instance.sigma_log", list_string(inst.sigma_log));
  add("instance.sigma_proxy",
      fmt_msg("%.17g", build_instance(inst).sigma_proxy()));
  const auto& c = config.contamination;
  add("contamination.epsilon", fmt_msg("%.17g", c.epsilon));
  add("contamination.epsilon_assumed", fmt_msg("%.17g", c.epsilon_assumed));
  add("contamination.adversary", to_string(c.adversary));
  if (c.adversary == AdversaryKind::fixed_shift) {
    add("contamination.shift", fmt_msg("%.17g", c.shift));
  } else if (c.adversary == AdversaryKind::uniform_random_mean) {
    add("contamination.half_width", fmt_msg("%.17g", c.half_width));
  }
  add("policy.kind", to_string(config.policy));
  add("policy.radius_mode", to_string(config.radius_mode));
  add("policy.alpha", fmt_msg("%.17g", resolved_alpha(config)));
  add("policy.beta", fmt_msg("%.17g", config.beta_exp));
  add("policy.c1", fmt_msg("%.17g", config.c1));
  add("experiment.delta", fmt_msg("%.17g", config.delta));
  add("experiment.trials", fmt_msg("%d", config.n_trials));
  add("experiment.seed", fmt_msg("%llu", static_cast<unsigned long long>(config.master_seed)));
  add("experiment.max_rounds",
      fmt_msg("%lld", static_cast<long long>(config.max_rounds)));
  return lines;
}

}  // namespace cbai
