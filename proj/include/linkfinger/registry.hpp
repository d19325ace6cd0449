#pragma once

#include <filesystem>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace linkfinger::assist {

struct RegistryEntry {
  std::string key;
  double value = 0.0;
  std::string unit;
  std::string source;  // table or section label
  std::string quote;   // short anchor text from the source
};

struct RegistryRule {
  std::string id;
  std::string description;
};

// Published gripper and assistance constants. Immutable once built; the
// only way to obtain a modified registry is WithValue, which copies.
class ReferenceRegistry {
 public:
  // Throws Error(kInvalidConfig) on duplicate keys, missing sources or
  // unknown rule ids.
  ReferenceRegistry(std::vector<RegistryEntry> entries, std::vector<RegistryRule> rules);

  // Parses without evaluating rules.
  static ReferenceRegistry FromJson(std::string_view text);
  // Reads, parses, and enforces every rule (throws Error(kRuleViolation)).
  static ReferenceRegistry Load(const std::filesystem::path& path);

  // Two-space indented JSON with a trailing newline; stable across runs.
  std::string ToJson() const;

  bool contains(std::string_view key) const;
  const RegistryEntry& entry(std::string_view key) const;
  double value(std::string_view key) const;

  std::span<const RegistryEntry> entries() const { return entries_; }
  std::span<const RegistryRule> rules() const { return rules_; }

  ReferenceRegistry WithValue(std::string_view key, double value) const;

 private:
  std::vector<RegistryEntry> entries_;
  std::vector<RegistryRule> rules_;
  std::map<std::string, std::size_t, std::less<>> index_;
};

// The registry shipped as data/reference_registry.json.
ReferenceRegistry BuiltinRegistry();

// Unit expected for a key, derived from its suffix (e.g. "_mm" -> "mm").
// Empty when the suffix is not recognised.
std::string ExpectedUnit(std::string_view key);

struct RuleOutcome {
  std::string id;
  bool pass = false;
  std::string detail;
};

struct RuleReport {
  std::vector<RuleOutcome> outcomes;

  bool all_passed() const;
};

RuleReport VerifyRegistry(const ReferenceRegistry& registry);

// Throws Error(kRuleViolation) naming the first failing rule and its entries.
void EnforceRegistry(const ReferenceRegistry& registry);

}  // namespace linkfinger::assist
