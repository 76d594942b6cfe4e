#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "blockprof/counting.hpp"
#include "blockprof/design_space.hpp"

namespace blockprof {

enum class RuleKind { RemoveBlock, CapDepth, ForceDepth, FixChannelRatio, RestrictResolution };

std::string_view to_string(RuleKind kind);
RuleKind parse_rule_kind(std::string_view text);

/// One constraint on a design space. `units` holds 1-based unit indices;
/// empty means every unit. Only the argument field matching `kind` is read.
struct ReductionRule {
  RuleKind kind = RuleKind::RemoveBlock;
  std::vector<int> units;
  std::string block;             // remove_block: code or name
  int depth = 0;                 // cap_depth; force_depth (0 = the unit's d_max)
  double ratio = 0.0;            // fix_channel_ratio
  std::vector<int> resolutions;  // restrict_resolution

  std::string describe() const;
  friend bool operator==(const ReductionRule&, const ReductionRule&) = default;
};

struct RuleSet {
  std::string name;
  std::string target;  // base space the rules were written for
  std::vector<ReductionRule> rules;
  std::vector<double> unit_weights;  // optional search hint: per-unit mutation weights
  std::string note;

  friend bool operator==(const RuleSet&, const RuleSet&) = default;
};

struct ReductionResult {
  DesignSpace space;
  std::vector<bool> rule_changed;  // per rule: did it change anything

  bool any_change() const;
};

/// Applies rules in order. Throws ConstraintError naming the first rule that
/// would empty a candidate list, invert depth bounds or target another space.
ReductionResult apply_rules(const DesignSpace& space, const RuleSet& rules);
DesignSpace apply(const DesignSpace& space, const RuleSet& rules);

BigCount reduced_count(const DesignSpace& space, const RuleSet& rules, bool include_resolutions = false);

std::vector<std::string> preset_rule_names();
RuleSet preset(std::string_view name);
RuleSet load_rules(std::string_view preset_or_path);
RuleSet parse_rules(std::string_view text);
std::string rules_to_text(const RuleSet& rules);

}  // namespace blockprof
