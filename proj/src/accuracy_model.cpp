#include "blockprof/accuracy_model.hpp"

#include <algorithm>
#include <filesystem>

#include "blockprof/embedded.hpp"
#include "blockprof/errors.hpp"
#include "blockprof/io.hpp"
#include "json_util.hpp"

namespace blockprof {

using namespace detail;

namespace {

/// Code at grid cell (row, col): (expansion, kernel) for MobileNets,
/// (channel ratio, layer ratio) for ResNet.
std::string grid_code(BlockFamily family, std::size_t row, std::size_t col) {
  if (is_mobilenet(family)) return std::string(kMobileNetCatalog[row * 3 + col].code);
  return resnet_joint_code(kResNetChannelRatios[row], BlockId{static_cast<std::uint8_t>(col)});
}

void check_capacity_monotone(const AccuracyCoefficients& c, BlockFamily family, const std::string& who) {
  auto cap = [&](std::size_t r, std::size_t k) -> const double* {
    auto it = c.capacity.find(grid_code(family, r, k));
    return it == c.capacity.end() ? nullptr : &it->second;
  };
  for (std::size_t r = 0; r < 3; ++r) {
    for (std::size_t k = 0; k < 3; ++k) {
      const double* here = cap(r, k);
      if (!here) continue;
      if (const double* right = k + 1 < 3 ? cap(r, k + 1) : nullptr; right && !(*right > *here)) {
        throw DomainError(who + ": capacity must increase from " + grid_code(family, r, k) + " to " +
                          grid_code(family, r, k + 1));
      }
      if (const double* down = r + 1 < 3 ? cap(r + 1, k) : nullptr; down && !(*down > *here)) {
        throw DomainError(who + ": capacity must increase from " + grid_code(family, r, k) + " to " +
                          grid_code(family, r + 1, k));
      }
    }
  }
}

}  // namespace

double AccuracyCoefficients::weight(std::size_t unit_index, std::size_t layer_index) const {
  const auto& row = placement_weights.at(unit_index);
  if (row.empty()) return 0.0;
  return row[std::min(layer_index, row.size() - 1)];
}

AccuracyModel load_accuracy_model(std::string_view name_or_path) {
  if (name_or_path == "synthetic") {
    auto text = embedded_file("accuracy/synthetic.json");
    if (!text) throw NotFoundError("accuracy model 'synthetic' is not embedded");
    return parse_accuracy_model(*text);
  }
  if (!std::filesystem::exists(std::filesystem::path(name_or_path))) {
    throw NotFoundError("unknown accuracy model '" + std::string(name_or_path) + "'");
  }
  return parse_accuracy_model(read_text_file(std::filesystem::path(name_or_path)));
}

AccuracyModel parse_accuracy_model(std::string_view text) {
  const Json j = parse_json_text(text, "accuracy model");
  AccuracyModel model;
  model.name = get_string(j, "name", "");
  const Json& families = require(j, "families", "");
  if (!families.is_object() || families.empty()) throw ParseError("families: expected a non-empty object");
  for (const auto& [key, value] : families.items()) {
    const auto path = "families." + key;
    AccuracyCoefficients c;
    c.base = as_number(require(value, "base", path), path + ".base");
    const auto wpath = path + ".placement_weights";
    const Json& weights = as_array(require(value, "placement_weights", path), wpath);
    for (std::size_t u = 0; u < weights.size(); ++u) c.placement_weights.push_back(get_number_list(weights[u], index_path(wpath, u)));
    const Json& cap = require(value, "capacity", path);
    if (!cap.is_object()) throw ParseError(path + ".capacity: expected an object");
    for (const auto& [code, v] : cap.items()) c.capacity[code] = as_number(v, path + ".capacity." + code);
    c.depth_bonus = get_number_list(require(value, "depth_bonus", path), path + ".depth_bonus");
    if (const Json* rb = optional_field(value, "resolution_bonus")) {
      if (!rb->is_object()) throw ParseError(path + ".resolution_bonus: expected an object");
      for (const auto& [res, v] : rb->items()) {
        try {
          c.resolution_bonus[std::stoi(res)] = as_number(v, path + ".resolution_bonus." + res);
        } catch (const std::logic_error&) {
          throw ParseError(path + ".resolution_bonus: key '" + res + "' is not an integer");
        }
      }
    }
    model.families[parse_family(key)] = std::move(c);
  }
  return model;
}

void check_accuracy_model(const AccuracyModel& model, const DesignSpace& space) {
  const std::string who = "accuracy model '" + model.name + "'";
  auto it = model.families.find(space.family);
  if (it == model.families.end()) {
    throw DomainError(who + " does not declare family " + std::string(to_string(space.family)));
  }
  const auto& c = it->second;
  if (c.placement_weights.size() < space.units.size()) throw DomainError(who + ": placement_weights covers fewer units than the space");
  if (c.depth_bonus.size() < space.units.size()) throw DomainError(who + ": depth_bonus covers fewer units than the space");
  int max_depth = 0;
  for (const auto& u : space.units) max_depth = std::max(max_depth, u.depth_max);
  for (std::size_t u = 0; u + 1 < space.units.size(); ++u) {
    for (int l = 0; l < max_depth; ++l) {
      if (c.weight(u + 1, static_cast<std::size_t>(l)) < c.weight(u, static_cast<std::size_t>(l))) {
        throw DomainError(who + ": placement weights must be nondecreasing in the unit index");
      }
    }
  }
  for (const auto& code : profile_block_codes(space)) {
    if (!c.capacity.contains(code)) throw DomainError(who + ": no capacity for block " + code);
  }
  check_capacity_monotone(c, space.family, who);
}

double synthetic_accuracy(const Architecture& arch, const DesignSpace& space, const AccuracyModel& model) {
  auto it = model.families.find(space.family);
  if (it == model.families.end()) throw DomainError("accuracy model does not declare the space's family");
  const auto& c = it->second;
  double score = c.base;
  if (auto rb = c.resolution_bonus.find(arch.resolution); rb != c.resolution_bonus.end()) score += rb->second;
  for (std::size_t u = 0; u < arch.blocks.size(); ++u) {
    for (std::size_t l = 0; l < arch.blocks[u].size(); ++l) {
      Placement p{static_cast<int>(u + 1), static_cast<int>(l + 1), arch.blocks[u][l], std::nullopt};
      if (!arch.channel_ratios.empty()) p.channel_ratio = arch.channel_ratios[u];
      auto cap = c.capacity.find(placement_code(space, p));
      if (cap == c.capacity.end()) throw DomainError("accuracy model has no capacity for " + placement_code(space, p));
      score += c.weight(u, l) * cap->second;
    }
    if (arch.depth(u) == space.units[u].depth_max) score += c.depth_bonus.at(u);
  }
  return std::clamp(score, 0.0, 100.0);
}

SyntheticAccuracyEvaluator::SyntheticAccuracyEvaluator(DesignSpace space, AccuracyModel model, std::string name)
    : MetricEvaluator(std::move(name), Direction::Maximize, "top-1 %"), space_(std::move(space)), model_(std::move(model)) {
  check_accuracy_model(model_, space_);
  const auto& c = model_.families.at(space_.family);
  Json j;
  j["model"] = model_.name;
  j["base"] = c.base;
  j["placement_weights"] = c.placement_weights;
  j["capacity"] = c.capacity;
  j["depth_bonus"] = c.depth_bonus;
  Json rb = Json::object();
  for (const auto& [r, v] : c.resolution_bonus) rb[std::to_string(r)] = v;
  j["resolution_bonus"] = std::move(rb);
  text_ = j.dump();
}

double SyntheticAccuracyEvaluator::evaluate(const Architecture& arch) const {
  return synthetic_accuracy(arch, space_, model_);
}

std::string SyntheticAccuracyEvaluator::parameter_text() const { return text_; }

}  // namespace blockprof
