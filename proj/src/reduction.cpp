#include "blockprof/reduction.hpp"

#include <algorithm>
#include <filesystem>
#include <set>

#include "blockprof/embedded.hpp"
#include "blockprof/errors.hpp"
#include "blockprof/io.hpp"
#include "json_util.hpp"

namespace blockprof {

using namespace detail;

namespace {

constexpr std::string_view kRulePresets[] = {
    "ofa-npu",          "ofa-gpu",          "ofa-cpu",          "ofa-note10",          "proxylessnas-npu",
    "proxylessnas-gpu", "proxylessnas-cpu", "ofa-maxacc",       "proxylessnas-maxacc", "resnet50-maxacc",
};

std::string scope_text(const std::vector<int>& units) {
  if (units.empty()) return "all units";
  std::string out = "units {";
  for (std::size_t i = 0; i < units.size(); ++i) out += (i ? "," : "") + std::to_string(units[i]);
  return out + "}";
}

std::vector<std::size_t> scoped_units(const ReductionRule& rule, const DesignSpace& space, const std::string& label) {
  std::vector<std::size_t> out;
  if (rule.units.empty()) {
    for (std::size_t u = 0; u < space.units.size(); ++u) out.push_back(u);
    return out;
  }
  for (int u : rule.units) {
    if (u < 1 || u > static_cast<int>(space.units.size())) {
      throw ConstraintError(label + ": unit " + std::to_string(u) + " does not exist in '" + space.name + "'");
    }
    out.push_back(static_cast<std::size_t>(u - 1));
  }
  return out;
}

/// Applies one rule in place; returns whether anything changed.
bool apply_rule(DesignSpace& space, const ReductionRule& rule, const std::string& label) {
  bool changed = false;
  if (rule.kind == RuleKind::RestrictResolution) {
    std::vector<int> kept;
    for (int r : space.resolutions) {
      if (std::find(rule.resolutions.begin(), rule.resolutions.end(), r) != rule.resolutions.end()) kept.push_back(r);
    }
    if (kept.empty()) throw ConstraintError(label + ": would leave no resolution");
    changed = kept != space.resolutions;
    space.resolutions = std::move(kept);
    return changed;
  }
  for (std::size_t u : scoped_units(rule, space, label)) {
    auto& unit = space.units[u];
    const auto where = label + " at unit " + std::to_string(u + 1);
    switch (rule.kind) {
      case RuleKind::RemoveBlock: {
        auto id = find_block(space.family, rule.block);
        if (!id) throw ConstraintError(label + ": unknown block '" + rule.block + "'");
        auto it = std::remove_if(unit.blocks.begin(), unit.blocks.end(), [&](const BlockSpec& b) { return b.id == *id; });
        if (it == unit.blocks.end()) break;
        if (it == unit.blocks.begin()) throw ConstraintError(where + ": would empty the candidate block list");
        unit.blocks.erase(it, unit.blocks.end());
        changed = true;
        break;
      }
      case RuleKind::CapDepth: {
        if (rule.depth < unit.depth_min) {
          throw ConstraintError(where + ": cap " + std::to_string(rule.depth) + " is below depth_min " +
                                std::to_string(unit.depth_min));
        }
        if (rule.depth < unit.depth_max) {
          unit.depth_max = rule.depth;
          changed = true;
        }
        break;
      }
      case RuleKind::ForceDepth: {
        const int depth = rule.depth == 0 ? unit.depth_max : rule.depth;
        if (depth < unit.depth_min || depth > unit.depth_max) {
          throw ConstraintError(where + ": forced depth " + std::to_string(depth) + " is outside [" +
                                std::to_string(unit.depth_min) + ", " + std::to_string(unit.depth_max) + "]");
        }
        changed = unit.depth_min != depth || unit.depth_max != depth;
        unit.depth_min = unit.depth_max = depth;
        break;
      }
      case RuleKind::FixChannelRatio: {
        if (space.family != BlockFamily::ResNetBottleneck) {
          throw ConstraintError(label + ": channel ratios exist only in ResNet spaces");
        }
        if (!unit.has_channel_ratio(rule.ratio)) {
          throw ConstraintError(where + ": ratio " + format_number(rule.ratio) + " is not available");
        }
        changed = unit.channel_ratios.size() != 1;
        unit.channel_ratios = {rule.ratio};
        break;
      }
      case RuleKind::RestrictResolution: break;
    }
  }
  return changed;
}

}  // namespace

std::string_view to_string(RuleKind kind) {
  switch (kind) {
    case RuleKind::RemoveBlock: return "remove_block";
    case RuleKind::CapDepth: return "cap_depth";
    case RuleKind::ForceDepth: return "force_depth";
    case RuleKind::FixChannelRatio: return "fix_channel_ratio";
    case RuleKind::RestrictResolution: return "restrict_resolution";
  }
  return "?";
}

RuleKind parse_rule_kind(std::string_view text) {
  for (auto kind : {RuleKind::RemoveBlock, RuleKind::CapDepth, RuleKind::ForceDepth, RuleKind::FixChannelRatio,
                    RuleKind::RestrictResolution}) {
    if (to_string(kind) == text) return kind;
  }
  throw ParseError("unknown rule kind '" + std::string(text) + "'");
}

std::string ReductionRule::describe() const {
  std::string arg;
  switch (kind) {
    case RuleKind::RemoveBlock: arg = block; break;
    case RuleKind::CapDepth: arg = std::to_string(depth); break;
    case RuleKind::ForceDepth: arg = depth == 0 ? "max" : std::to_string(depth); break;
    case RuleKind::FixChannelRatio: arg = format_number(ratio); break;
    case RuleKind::RestrictResolution: {
      for (std::size_t i = 0; i < resolutions.size(); ++i) arg += (i ? "," : "") + std::to_string(resolutions[i]);
      return std::string(to_string(kind)) + " {" + arg + "}";
    }
  }
  return std::string(to_string(kind)) + " " + arg + " on " + scope_text(units);
}

bool ReductionResult::any_change() const {
  return std::any_of(rule_changed.begin(), rule_changed.end(), [](bool b) { return b; });
}

ReductionResult apply_rules(const DesignSpace& space, const RuleSet& rules) {
  if (!rules.target.empty() && rules.target != space.base) {
    throw ConstraintError("rule set '" + rules.name + "' targets space '" + rules.target + "', not '" + space.base + "'");
  }
  ReductionResult result{space, {}};
  for (std::size_t i = 0; i < rules.rules.size(); ++i) {
    const auto label = "rule " + std::to_string(i + 1) + " (" + rules.rules[i].describe() + ")";
    result.rule_changed.push_back(apply_rule(result.space, rules.rules[i], label));
  }
  return result;
}

DesignSpace apply(const DesignSpace& space, const RuleSet& rules) { return apply_rules(space, rules).space; }

BigCount reduced_count(const DesignSpace& space, const RuleSet& rules, bool include_resolutions) {
  return count_architectures(apply(space, rules), include_resolutions);
}

std::vector<std::string> preset_rule_names() { return {std::begin(kRulePresets), std::end(kRulePresets)}; }

RuleSet preset(std::string_view name) {
  for (auto p : kRulePresets) {
    if (p == name) {
      auto text = embedded_file("rules/" + std::string(p) + ".json");
      if (!text) throw NotFoundError("rule preset '" + std::string(p) + "' is not embedded");
      return parse_rules(*text);
    }
  }
  throw NotFoundError("unknown rule preset '" + std::string(name) + "'");
}

RuleSet load_rules(std::string_view preset_or_path) {
  for (auto p : kRulePresets) {
    if (p == preset_or_path) return preset(p);
  }
  return parse_rules(read_text_file(std::filesystem::path(preset_or_path)));
}

RuleSet parse_rules(std::string_view text) {
  const Json j = parse_json_text(text, "rule set");
  RuleSet rs;
  rs.name = get_string(j, "name", "");
  if (const Json* t = optional_field(j, "target")) rs.target = as_string(*t, "target");
  if (const Json* n = optional_field(j, "note")) rs.note = as_string(*n, "note");
  if (const Json* w = optional_field(j, "unit_weights")) rs.unit_weights = get_number_list(*w, "unit_weights");
  const Json& rules = as_array(require(j, "rules", ""), "rules");
  for (std::size_t i = 0; i < rules.size(); ++i) {
    const auto path = index_path("rules", i);
    const Json& r = rules[i];
    ReductionRule rule;
    rule.kind = parse_rule_kind(get_string(r, "kind", path));
    if (const Json* units = optional_field(r, "units")) {
      if (units->is_string()) {
        if (units->get<std::string>() != "all") throw ParseError(path + ".units: expected \"all\" or a list");
      } else {
        rule.units = get_int_list(r, "units", path);
      }
    }
    const auto apath = join_path(path, "arg");
    const Json& arg = require(r, "arg", path);
    switch (rule.kind) {
      case RuleKind::RemoveBlock: rule.block = as_string(arg, apath); break;
      case RuleKind::CapDepth: rule.depth = as_int(arg, apath); break;
      case RuleKind::ForceDepth:
        if (arg.is_string() && arg.get<std::string>() == "max") rule.depth = 0;
        else rule.depth = as_int(arg, apath);
        break;
      case RuleKind::FixChannelRatio: rule.ratio = as_number(arg, apath); break;
      case RuleKind::RestrictResolution: {
        as_array(arg, apath);
        for (std::size_t k = 0; k < arg.size(); ++k) rule.resolutions.push_back(as_int(arg[k], index_path(apath, k)));
        break;
      }
    }
    rs.rules.push_back(std::move(rule));
  }
  return rs;
}

std::string rules_to_text(const RuleSet& rs) {
  Json j;
  j["name"] = rs.name;
  j["target"] = rs.target;
  if (!rs.note.empty()) j["note"] = rs.note;
  if (!rs.unit_weights.empty()) j["unit_weights"] = rs.unit_weights;
  Json rules = Json::array();
  for (const auto& r : rs.rules) {
    Json o;
    o["kind"] = std::string(to_string(r.kind));
    if (r.units.empty()) o["units"] = "all";
    else o["units"] = r.units;
    switch (r.kind) {
      case RuleKind::RemoveBlock: o["arg"] = r.block; break;
      case RuleKind::CapDepth: o["arg"] = r.depth; break;
      case RuleKind::ForceDepth:
        if (r.depth == 0) o["arg"] = "max";
        else o["arg"] = r.depth;
        break;
      case RuleKind::FixChannelRatio: o["arg"] = r.ratio; break;
      case RuleKind::RestrictResolution: o["arg"] = r.resolutions; break;
    }
    rules.push_back(std::move(o));
  }
  j["rules"] = std::move(rules);
  return j.dump(2) + "\n";
}

}  // namespace blockprof
