#include "linkfinger/registry.hpp"

#include <array>
#include <cmath>
#include <fstream>
#include <functional>
#include <set>
#include <sstream>
#include <utility>

#include <fmt/format.h>
#include <nlohmann/json.hpp>

#include "linkfinger/error.hpp"

namespace linkfinger::assist {

namespace {

using Json = nlohmann::ordered_json;

struct RuleSpec {
  const char* id;
  const char* description;
  std::function<RuleOutcome(const ReferenceRegistry&)> check;
};

RuleOutcome Outcome(const char* id, bool pass, std::string detail) {
  return RuleOutcome{id, pass, std::move(detail)};
}

bool NearlyEqual(double a, double b) {
  return std::abs(a - b) <= 1e-9 * std::max({1.0, std::abs(a), std::abs(b)});
}

const std::vector<RuleSpec>& RuleTable() {
  static const std::vector<RuleSpec> table = {
      {"unit_dimension", "every entry's unit matches the dimension implied by its key suffix",
       [](const ReferenceRegistry& reg) {
         std::vector<std::string> bad;
         for (const RegistryEntry& e : reg.entries()) {
           const std::string expected = ExpectedUnit(e.key);
           if (expected.empty() || expected != e.unit) {
             bad.push_back(fmt::format("{} [{}] expected [{}]", e.key, e.unit, expected));
           }
         }
         return Outcome("unit_dimension", bad.empty(), fmt::format("{}", fmt::join(bad, "; ")));
       }},
      {"pinch_force_ordering",
       "single-tendon pinch force is below the double-tendon pinch force; the comparison uses the "
       "table value (11.8 N) rather than the 11.1 N text value",
       [](const ReferenceRegistry& reg) {
         const double single = reg.value("pinch_force_single_tendon_n");
         const double dual = reg.value("pinch_force_double_tendon_n");
         return Outcome("pinch_force_ordering", single < dual,
                        fmt::format("pinch_force_single_tendon_n={} pinch_force_double_tendon_n={}",
                                    single, dual));
       }},
      {"success_rate_readback",
       "every outcome group's success rate equals 100 * successes / trials, with successes <= "
       "trials",
       [](const ReferenceRegistry& reg) {
         constexpr std::string_view kSuffix = "_trials_count";
         std::vector<std::string> bad;
         int groups = 0;
         for (const RegistryEntry& e : reg.entries()) {
           if (!e.key.ends_with(kSuffix)) continue;
           const std::string prefix = e.key.substr(0, e.key.size() - kSuffix.size());
           const std::string successes_key = prefix + "_successes_count";
           const std::string rate_key = prefix + "_success_rate_pct";
           if (!reg.contains(successes_key) || !reg.contains(rate_key)) {
             bad.push_back(fmt::format("{} lacks successes or rate", prefix));
             continue;
           }
           ++groups;
           const double trials = e.value;
           const double successes = reg.value(successes_key);
           const double rate = reg.value(rate_key);
           if (!(trials > 0.0) || successes < 0.0 || successes > trials ||
               !NearlyEqual(rate, 100.0 * successes / trials)) {
             bad.push_back(fmt::format("{}: {}/{} vs {}%", prefix, successes, trials, rate));
           }
         }
         if (groups == 0) bad.emplace_back("no outcome groups");
         return Outcome("success_rate_readback", bad.empty(),
                        fmt::format("{} groups; {}", groups, fmt::join(bad, "; ")));
       }},
      {"gripper_weight", "gripper weight including the servo is 235 g",
       [](const ReferenceRegistry& reg) {
         const double weight = reg.value("gripper_weight_g");
         return Outcome("gripper_weight", weight == 235.0,
                        fmt::format("gripper_weight_g={}", weight));
       }},
      {"grasp_interval_ordered",
       "cylinder diameter bounds form a non-empty closed interval (both ends graspable)",
       [](const ReferenceRegistry& reg) {
         const double lo = reg.value("cylinder_diameter_min_mm");
         const double hi = reg.value("cylinder_diameter_max_mm");
         return Outcome("grasp_interval_ordered", lo > 0.0 && lo <= hi,
                        fmt::format("cylinder_diameter_min_mm={} cylinder_diameter_max_mm={}", lo,
                                    hi));
       }},
      {"clearance_arithmetic",
       "per-side clearance equals (toilet width - shoulder width) / 2",
       [](const ReferenceRegistry& reg) {
         const double space = reg.value("toilet_width_mm");
         const double body = reg.value("shoulder_width_mm");
         const double side = reg.value("side_clearance_mm");
         return Outcome("clearance_arithmetic", NearlyEqual((space - body) / 2.0, side),
                        fmt::format("toilet_width_mm={} shoulder_width_mm={} side_clearance_mm={}",
                                    space, body, side));
       }},
      {"pinch_below_contact_limit",
       "every published pinch or fingertip force is at most the thigh/knee contact limit "
       "(inclusive: force <= limit)",
       [](const ReferenceRegistry& reg) {
         const double limit = reg.value("iso_thigh_knee_force_limit_n");
         std::vector<std::string> bad;
         for (const RegistryEntry& e : reg.entries()) {
           const bool is_grip_force = e.key.find("pinch_force") != std::string::npos ||
                                      e.key == "fingertip_force_n";
           if (is_grip_force && e.value > limit) {
             bad.push_back(fmt::format("{}={}", e.key, e.value));
           }
         }
         return Outcome("pinch_below_contact_limit", bad.empty(),
                        fmt::format("limit={} N; {}", limit, fmt::join(bad, "; ")));
       }},
  };
  return table;
}

const RuleSpec* FindRule(std::string_view id) {
  for (const RuleSpec& rule : RuleTable()) {
    if (id == rule.id) return &rule;
  }
  return nullptr;
}

void RequireKeys(const Json& object, std::initializer_list<const char*> keys, const char* what) {
  if (!object.is_object()) {
    throw Error(ErrorKind::kInvalidConfig, fmt::format("registry {} must be an object", what));
  }
  std::set<std::string> allowed(keys.begin(), keys.end());
  for (const auto& [key, _] : object.items()) {
    if (!allowed.contains(key)) {
      throw Error(ErrorKind::kInvalidConfig,
                  fmt::format("unknown key '{}' in registry {}", key, what));
    }
  }
  for (const char* key : keys) {
    if (!object.contains(key)) {
      throw Error(ErrorKind::kInvalidConfig,
                  fmt::format("registry {} lacks '{}'", what, key));
    }
  }
}

}  // namespace

ReferenceRegistry::ReferenceRegistry(std::vector<RegistryEntry> entries,
                                     std::vector<RegistryRule> rules)
    : entries_(std::move(entries)), rules_(std::move(rules)) {
  for (std::size_t i = 0; i < entries_.size(); ++i) {
    const RegistryEntry& e = entries_[i];
    if (e.key.empty()) throw Error(ErrorKind::kInvalidConfig, "registry entry without a key");
    if (e.source.empty()) {
      throw Error(ErrorKind::kInvalidConfig,
                  fmt::format("registry entry '{}' has no source", e.key));
    }
    if (!std::isfinite(e.value)) {
      throw Error(ErrorKind::kInvalidConfig,
                  fmt::format("registry entry '{}' is not finite", e.key));
    }
    if (!index_.emplace(e.key, i).second) {
      throw Error(ErrorKind::kInvalidConfig, fmt::format("duplicate registry key '{}'", e.key));
    }
  }
  std::set<std::string> seen;
  for (const RegistryRule& rule : rules_) {
    if (FindRule(rule.id) == nullptr) {
      throw Error(ErrorKind::kInvalidConfig, fmt::format("unknown registry rule '{}'", rule.id));
    }
    if (!seen.insert(rule.id).second) {
      throw Error(ErrorKind::kInvalidConfig, fmt::format("duplicate registry rule '{}'", rule.id));
    }
  }
}

ReferenceRegistry ReferenceRegistry::FromJson(std::string_view text) {
  Json doc;
  try {
    doc = Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw Error(ErrorKind::kInvalidConfig, fmt::format("registry is not valid JSON: {}", e.what()));
  }
  RequireKeys(doc, {"entries", "rules"}, "document");
  if (!doc["entries"].is_array() || !doc["rules"].is_array()) {
    throw Error(ErrorKind::kInvalidConfig, "registry entries and rules must be arrays");
  }
  std::vector<RegistryEntry> entries;
  for (const Json& item : doc["entries"]) {
    RequireKeys(item, {"key", "value", "unit", "source", "quote"}, "entry");
    try {
      entries.push_back(RegistryEntry{
          item["key"].get<std::string>(),
          item["value"].get<double>(),
          item["unit"].get<std::string>(),
          item["source"].get<std::string>(),
          item["quote"].get<std::string>(),
      });
    } catch (const Json::type_error& e) {
      throw Error(ErrorKind::kInvalidConfig, fmt::format("malformed registry entry: {}", e.what()));
    }
  }
  std::vector<RegistryRule> rules;
  for (const Json& item : doc["rules"]) {
    RequireKeys(item, {"id", "description"}, "rule");
    try {
      rules.push_back(
          RegistryRule{item["id"].get<std::string>(), item["description"].get<std::string>()});
    } catch (const Json::type_error& e) {
      throw Error(ErrorKind::kInvalidConfig, fmt::format("malformed registry rule: {}", e.what()));
    }
  }
  return ReferenceRegistry(std::move(entries), std::move(rules));
}

ReferenceRegistry ReferenceRegistry::Load(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw Error(ErrorKind::kIo, fmt::format("cannot read registry '{}'", path.string()));
  }
  std::ostringstream text;
  text << in.rdbuf();
  ReferenceRegistry registry = FromJson(text.str());
  EnforceRegistry(registry);
  return registry;
}

std::string ReferenceRegistry::ToJson() const {
  Json doc;
  doc["entries"] = Json::array();
  for (const RegistryEntry& e : entries_) {
    Json item;
    item["key"] = e.key;
    item["value"] = e.value;
    item["unit"] = e.unit;
    item["source"] = e.source;
    item["quote"] = e.quote;
    doc["entries"].push_back(std::move(item));
  }
  doc["rules"] = Json::array();
  for (const RegistryRule& rule : rules_) {
    Json item;
    item["id"] = rule.id;
    item["description"] = rule.description;
    doc["rules"].push_back(std::move(item));
  }
  return doc.dump(2) + "\n";
}

bool ReferenceRegistry::contains(std::string_view key) const { return index_.contains(key); }

const RegistryEntry& ReferenceRegistry::entry(std::string_view key) const {
  const auto it = index_.find(key);
  if (it == index_.end()) {
    throw Error(ErrorKind::kInvalidConfig, fmt::format("registry has no entry '{}'", key));
  }
  return entries_[it->second];
}

double ReferenceRegistry::value(std::string_view key) const { return entry(key).value; }

ReferenceRegistry ReferenceRegistry::WithValue(std::string_view key, double value) const {
  const auto it = index_.find(key);
  if (it == index_.end()) {
    throw Error(ErrorKind::kInvalidConfig, fmt::format("registry has no entry '{}'", key));
  }
  std::vector<RegistryEntry> entries = entries_;
  entries[it->second].value = value;
  return ReferenceRegistry(std::move(entries), rules_);
}

std::string ExpectedUnit(std::string_view key) {
  // Longest suffixes first so "_m_per_s" is not read as "_s".
  static constexpr std::array<std::pair<std::string_view, std::string_view>, 14> kSuffixes = {{
      {"_rad_per_s", "rad/s"},
      {"_mm_per_kg", "mm/kg"},
      {"_m_per_s", "m/s"},
      {"_count", "count"},
      {"_pct", "%"},
      {"_kgf", "kgf"},
      {"_nm", "N m"},
      {"_mm", "mm"},
      {"_kg", "kg"},
      {"_n", "N"},
      {"_m", "m"},
      {"_g", "g"},
      {"_s", "s"},
      {"_v", "V"},
  }};
  for (const auto& [suffix, unit] : kSuffixes) {
    if (key.ends_with(suffix)) return std::string(unit);
  }
  if (key.ends_with("_a")) return "A";
  return {};
}

bool RuleReport::all_passed() const {
  for (const RuleOutcome& outcome : outcomes) {
    if (!outcome.pass) return false;
  }
  return true;
}

RuleReport VerifyRegistry(const ReferenceRegistry& registry) {
  RuleReport report;
  for (const RegistryRule& rule : registry.rules()) {
    const RuleSpec* spec = FindRule(rule.id);
    try {
      report.outcomes.push_back(spec->check(registry));
    } catch (const Error& e) {
      report.outcomes.push_back(Outcome(spec->id, false, e.what()));
    }
  }
  return report;
}

void EnforceRegistry(const ReferenceRegistry& registry) {
  for (const RuleOutcome& outcome : VerifyRegistry(registry).outcomes) {
    if (!outcome.pass) {
      throw Error(ErrorKind::kRuleViolation,
                  fmt::format("registry rule '{}' failed: {}", outcome.id, outcome.detail));
    }
  }
}

ReferenceRegistry BuiltinRegistry() {
  std::vector<RegistryEntry> entries = {
      // Actuation comparison.
      {"pinch_force_single_tendon_n", 7.8, "N", "Table 2", "Pinch Force"},
      {"pinch_force_double_tendon_n", 11.8, "N", "Table 2", "Pinch Force"},
      {"pinch_force_double_tendon_text_n", 11.1, "N", "Pinch force evaluation (text)",
       "11.1 N for the double"},
      {"pinch_force_max_n", 11.8, "N", "Gripper grasping evaluation", "up to 11.8 N"},
      {"tip_force_increase_vs_conventional_pct", 48.0, "%", "Comparison with existing finger",
       "48% increase"},
      // Grasp envelope; both bounds are graspable.
      {"cylinder_diameter_min_mm", 30.0, "mm", "Gripper grasping evaluation (closed interval)",
       "30 mm to 145 mm"},
      {"cylinder_diameter_max_mm", 145.0, "mm", "Gripper grasping evaluation (closed interval)",
       "30 mm to 145 mm"},
      // Gripper specifications.
      {"gripper_weight_g", 235.0, "g", "Table 3", "Weight"},
      {"gripper_width_mm", 60.0, "mm", "Table 3", "Dimensions (W)"},
      {"gripper_length_mm", 71.0, "mm", "Table 3", "Dimensions (L)"},
      {"gripper_height_mm", 177.0, "mm", "Table 3", "Dimensions (H)"},
      {"gripper_dof_count", 2.0, "count", "Table 3", "DoF"},
      {"motor_torque_nm", 1.5, "N m", "Table 3", "Motor Torque"},
      {"motor_voltage_v", 12.0, "V", "Table 3", "Motor Torque (at 12 V)"},
      {"motor_current_a", 1.4, "A", "Table 3", "Motor Torque (1.4 A)"},
      {"max_no_load_velocity_rad_per_s", 12.78, "rad/s", "Table 3", "Max No-load Velocity"},
      {"fingertip_force_n", 7.8, "N", "Table 3", "Fingertip Force"},
      // Safety and confined space; the contact limit is inclusive.
      {"iso_thigh_knee_force_limit_n", 220.0, "N", "ISO/TS 15066 (inclusive: force <= limit)",
       "should not exceed 220 N"},
      {"toilet_width_mm", 800.0, "mm", "Confined toilet space", "around 800mm"},
      {"shoulder_width_mm", 460.0, "mm", "Confined toilet space", "about 460mm"},
      {"side_clearance_mm", 170.0, "mm", "Confined toilet space", "about 170mm"},
      // Manipulators.
      {"primary_length_mm", 844.0, "mm", "Primary manipulator", "844mm long"},
      {"primary_outer_diameter_mm", 175.0, "mm", "Primary manipulator", "175mm in outer diameter"},
      {"primary_dof_count", 10.0, "count", "Primary manipulator", "10 degrees of freedom"},
      {"secondary_length_mm", 334.0, "mm", "Secondary manipulator", "total length of 334mm"},
      {"secondary_outer_diameter_mm", 75.0, "mm", "Secondary manipulator",
       "outer diameter of 75mm"},
      {"secondary_dof_count", 9.0, "count", "Secondary manipulator", "9 degrees of freedom"},
      {"required_trouser_travel_mm", 160.0, "mm", "Secondary manipulator", "about 160 mm"},
      {"primary_weight_kg", 4.0, "kg", "Table 4", "Weight (with Gripper)"},
      {"secondary_weight_kg", 1.5, "kg", "Table 4", "Weight (with Gripper)"},
      {"primary_max_extension_mm", 171.0, "mm", "Table 4", "Max length extension and contraction"},
      {"secondary_max_extension_mm", 180.0, "mm", "Table 4",
       "Max length extension and contraction"},
      {"primary_max_speed_m_per_s", 0.038, "m/s", "Table 4", "Max speed extension and contraction"},
      {"secondary_max_speed_m_per_s", 0.09, "m/s", "Table 4",
       "Max speed extension and contraction"},
      {"secondary_grasp_speed_m_per_s", 0.06, "m/s", "Table 4", "Speed while grasping"},
      {"primary_tip_force_kgf", 3.0, "kgf", "Table 4", "Tip Force"},
      {"secondary_tip_force_kgf", 1.5, "kgf", "Table 4", "Tip Force"},
      {"primary_tip_rigidity_mm_per_kg", 6.67, "mm/kg", "Table 4", "Tip Rigidity"},
      {"secondary_tip_rigidity_mm_per_kg", 10.0, "mm/kg", "Table 4", "Tip Rigidity"},
      {"primary_tip_accuracy_mm", 20.0, "mm", "Table 4", "Accuracy of tip position"},
      // Trial environment and procedure.
      {"trial_toilet_room_width_m", 1.5, "m", "Verification environment", "1.5m in width"},
      {"trial_toilet_room_length_m", 1.85, "m", "Verification environment", "1.85m in length"},
      {"trial_wall_distance_entrance_m", 0.92, "m", "Verification environment",
       "0.92m at the entrance"},
      {"trial_wall_distance_right_m", 0.51, "m", "Verification environment",
       "0.51m on the right side"},
      {"trial_wall_distance_left_m", 0.61, "m", "Verification environment",
       "0.61m on the left side"},
      {"trouser_raise_travel_mm", 170.0, "mm", "Dressing-undressing procedure",
       "raising the trouser by 170mm"},
      {"waistband_pinch_force_n", 10.0, "N", "Dressing-undressing procedure",
       "pinch force of about 10N"},
      {"trial_participants_count", 4.0, "count", "Table 5", "four healthy young men"},
      // Outcomes.
      {"dressing_prior_trials_count", 10.0, "count", "Table 5", "Prior study, Dressing"},
      {"dressing_prior_successes_count", 9.0, "count", "Table 5", "Prior study, Dressing"},
      {"dressing_prior_success_rate_pct", 90.0, "%", "Table 5", "Prior study, Dressing"},
      {"undressing_prior_trials_count", 7.0, "count", "Table 5", "Prior study, Undressing"},
      {"undressing_prior_successes_count", 0.0, "count", "Table 5", "Prior study, Undressing"},
      {"undressing_prior_success_rate_pct", 0.0, "%", "Table 5", "Prior study, Undressing"},
      {"dressing_proposed_trials_count", 4.0, "count", "Table 5", "Proposed system, Dressing"},
      {"dressing_proposed_successes_count", 4.0, "count", "Table 5", "Proposed system, Dressing"},
      {"dressing_proposed_success_rate_pct", 100.0, "%", "Table 5", "Proposed system, Dressing"},
      {"dressing_proposed_time_s", 3.0, "s", "Table 5", "Proposed system, Dressing"},
      {"undressing_proposed_trials_count", 4.0, "count", "Table 5", "Proposed system, Undressing"},
      {"undressing_proposed_successes_count", 4.0, "count", "Table 5",
       "Proposed system, Undressing"},
      {"undressing_proposed_success_rate_pct", 100.0, "%", "Table 5",
       "Proposed system, Undressing"},
      {"undressing_proposed_time_s", 3.1, "s", "Table 5", "Proposed system, Undressing"},
      {"dressing_human_trials_count", 4.0, "count", "Table 5", "Human, Dressing"},
      {"dressing_human_successes_count", 4.0, "count", "Table 5", "Human, Dressing"},
      {"dressing_human_success_rate_pct", 100.0, "%", "Table 5", "Human, Dressing"},
      {"dressing_human_time_s", 2.0, "s", "Table 5", "Human, Dressing"},
      {"undressing_human_trials_count", 4.0, "count", "Table 5", "Human, Undressing"},
      {"undressing_human_successes_count", 4.0, "count", "Table 5", "Human, Undressing"},
      {"undressing_human_success_rate_pct", 100.0, "%", "Table 5", "Human, Undressing"},
      {"undressing_human_time_s", 2.0, "s", "Table 5", "Human, Undressing"},
  };
  std::vector<RegistryRule> rules;
  for (const RuleSpec& spec : RuleTable()) rules.push_back({spec.id, spec.description});
  return ReferenceRegistry(std::move(entries), std::move(rules));
}

}  // namespace linkfinger::assist
