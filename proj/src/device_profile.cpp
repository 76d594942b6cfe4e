#include "blockprof/device_profile.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <filesystem>

#include "blockprof/cost_models.hpp"
#include "blockprof/embedded.hpp"
#include "blockprof/errors.hpp"
#include "blockprof/io.hpp"
#include "json_util.hpp"

namespace blockprof {

using namespace detail;

namespace {

constexpr std::string_view kProfilePresets[] = {"npu-like", "gpu-flat", "cpu-expansion-bound", "note10-linear"};

double parse_key_number(const std::string& key, const std::string& path) {
  double v = 0.0;
  auto [ptr, ec] = std::from_chars(key.data(), key.data() + key.size(), v);
  if (ec != std::errc() || ptr != key.data() + key.size()) throw ParseError(path + ": key '" + key + "' is not a number");
  return v;
}

template <typename Key>
std::map<Key, double> parse_factor_map(const Json& obj, const std::string& path) {
  if (!obj.is_object()) throw ParseError(path + ": expected an object");
  std::map<Key, double> out;
  for (const auto& [key, value] : obj.items()) {
    const auto field = path + "." + key;
    const double k = parse_key_number(key, field);
    const double v = as_number(value, field);
    if (!(v > 0.0)) throw ParseError(field + ": factors must be strictly positive");
    if constexpr (std::is_same_v<Key, int>) {
      out[static_cast<int>(std::lround(k))] = v;
    } else {
      out[k] = v;
    }
  }
  return out;
}

template <typename Key>
Json factor_map_to_json(const std::map<Key, double>& m) {
  Json j = Json::object();
  for (const auto& [k, v] : m) {
    if constexpr (std::is_same_v<Key, int>) j[std::to_string(k)] = v;
    else j[format_number(k)] = v;
  }
  return j;
}

double lookup_ratio(const std::map<double, double>& table, double key, double fallback, bool required,
                    const std::string& what) {
  for (const auto& [k, v] : table) {
    if (std::abs(k - key) < 1e-9) return v;
  }
  if (required) throw DomainError(what + " has no entry for " + format_number(key));
  return fallback;
}

FamilyCoefficients parse_family_coefficients(const Json& j, const std::string& path) {
  FamilyCoefficients c;
  c.kernel_factor = parse_factor_map<int>(require(j, "kernel_factor", path), path + ".kernel_factor");
  c.expansion_factor = parse_factor_map<double>(require(j, "expansion_factor", path), path + ".expansion_factor");
  if (const Json* overrides = optional_field(j, "expansion_overrides")) {
    const auto opath = path + ".expansion_overrides";
    as_array(*overrides, opath);
    for (std::size_t i = 0; i < overrides->size(); ++i) {
      const auto ipath = index_path(opath, i);
      ExpansionOverride o;
      o.max_resolution = get_int((*overrides)[i], "max_resolution", ipath);
      o.factors = parse_factor_map<double>(require((*overrides)[i], "factors", ipath), ipath + ".factors");
      c.expansion_overrides.push_back(std::move(o));
    }
    std::sort(c.expansion_overrides.begin(), c.expansion_overrides.end(),
              [](const auto& a, const auto& b) { return a.max_resolution < b.max_resolution; });
  }
  if (const Json* cf = optional_field(j, "channel_factor")) {
    c.channel_factor = parse_factor_map<double>(*cf, path + ".channel_factor");
  }
  c.unit_scale = get_number_list(require(j, "unit_scale", path), path + ".unit_scale");
  for (std::size_t i = 0; i < c.unit_scale.size(); ++i) {
    if (!(c.unit_scale[i] > 0.0)) throw ParseError(index_path(path + ".unit_scale", i) + ": must be strictly positive");
  }
  const auto dpath = path + ".depth_cost";
  const Json& depth = as_array(require(j, "depth_cost", path), dpath);
  for (std::size_t u = 0; u < depth.size(); ++u) {
    auto row = get_number_list(depth[u], index_path(dpath, u));
    for (std::size_t l = 0; l < row.size(); ++l) {
      if (!(row[l] > 0.0)) throw ParseError(index_path(index_path(dpath, u), l) + ": must be strictly positive");
    }
    c.depth_cost.push_back(std::move(row));
  }
  c.spatial_exponent = get_number_or(j, "spatial_exponent", path, 0.0);
  return c;
}

/// Square size of the tensor unit `unit_index` operates on, for an input of `resolution`.
int unit_operating_size(const DesignSpace& space, int resolution, std::size_t unit_index) {
  int size = conv_output_size(resolution, space.stem.kernel, space.stem.stride);
  if (space.stem.pool_stride > 1) size = conv_output_size(size, 3, space.stem.pool_stride);
  for (std::size_t u = 0; u <= unit_index; ++u) size = conv_output_size(size, 3, kFirstLayerStride);
  return size;
}

}  // namespace

std::vector<std::string> preset_profile_names() { return {std::begin(kProfilePresets), std::end(kProfilePresets)}; }

DeviceProfile load_device_profile(std::string_view name_or_path) {
  for (auto preset : kProfilePresets) {
    if (preset == name_or_path) {
      auto text = embedded_file("profiles/" + std::string(preset) + ".json");
      if (!text) throw NotFoundError("profile preset '" + std::string(preset) + "' is not embedded");
      return parse_device_profile(*text);
    }
  }
  if (!std::filesystem::exists(std::filesystem::path(name_or_path))) {
    throw NotFoundError("unknown device profile '" + std::string(name_or_path) + "'");
  }
  return parse_device_profile(read_text_file(std::filesystem::path(name_or_path)));
}

DeviceProfile parse_device_profile(std::string_view text) {
  const Json j = parse_json_text(text, "device profile");
  DeviceProfile p;
  p.name = get_string(j, "name", "");
  if (const Json* d = optional_field(j, "description")) p.description = as_string(*d, "description");
  if (optional_field(j, "resolution_templates")) p.resolution_templates = get_int_list(j, "resolution_templates", "");
  for (std::size_t i = 1; i < p.resolution_templates.size(); ++i) {
    if (p.resolution_templates[i] <= p.resolution_templates[i - 1]) {
      throw ParseError("resolution_templates: must be sorted ascending");
    }
  }
  p.fixed_overhead_ms = get_number_or(j, "fixed_overhead_ms", "", 0.0);
  p.padding_cost_ms = get_number_or(j, "padding_cost_ms", "", 0.0);
  if (p.fixed_overhead_ms < 0.0 || p.padding_cost_ms < 0.0) {
    throw ParseError("fixed_overhead_ms/padding_cost_ms: must be non-negative");
  }
  p.reference_resolution = get_int_or(j, "reference_resolution", "", 224);
  const Json& families = require(j, "families", "");
  if (!families.is_object() || families.empty()) throw ParseError("families: expected a non-empty object");
  for (const auto& [key, value] : families.items()) {
    p.families[parse_family(key)] = parse_family_coefficients(value, "families." + key);
  }
  return p;
}

std::string device_profile_to_text(const DeviceProfile& p) {
  Json j;
  j["name"] = p.name;
  j["description"] = p.description;
  j["resolution_templates"] = p.resolution_templates;
  j["fixed_overhead_ms"] = p.fixed_overhead_ms;
  j["padding_cost_ms"] = p.padding_cost_ms;
  j["reference_resolution"] = p.reference_resolution;
  Json fams = Json::object();
  for (const auto& [family, c] : p.families) {
    Json f;
    f["kernel_factor"] = factor_map_to_json(c.kernel_factor);
    f["expansion_factor"] = factor_map_to_json(c.expansion_factor);
    Json overrides = Json::array();
    for (const auto& o : c.expansion_overrides) {
      overrides.push_back({{"max_resolution", o.max_resolution}, {"factors", factor_map_to_json(o.factors)}});
    }
    f["expansion_overrides"] = std::move(overrides);
    f["channel_factor"] = factor_map_to_json(c.channel_factor);
    f["unit_scale"] = c.unit_scale;
    f["depth_cost"] = c.depth_cost;
    f["spatial_exponent"] = c.spatial_exponent;
    fams[std::string(to_string(family))] = std::move(f);
  }
  j["families"] = std::move(fams);
  return j.dump(2) + "\n";
}

int padded_resolution(const DeviceProfile& profile, int resolution) {
  if (profile.resolution_templates.empty()) return resolution;
  for (int t : profile.resolution_templates) {
    if (t >= resolution) return t;
  }
  throw DomainError("resolution " + std::to_string(resolution) + " exceeds the largest template (" +
                    std::to_string(profile.resolution_templates.back()) + ") of profile '" + profile.name + "'");
}

void check_profile_covers(const DeviceProfile& profile, const DesignSpace& space) {
  auto it = profile.families.find(space.family);
  if (it == profile.families.end()) {
    throw DomainError("profile '" + profile.name + "' does not declare family " + std::string(to_string(space.family)));
  }
  const auto& c = it->second;
  const std::string who = "profile '" + profile.name + "'";
  if (c.unit_scale.size() < space.units.size()) throw DomainError(who + " unit_scale covers fewer units than the space");
  if (c.depth_cost.size() < space.units.size()) throw DomainError(who + " depth_cost covers fewer units than the space");
  for (std::size_t u = 0; u < space.units.size(); ++u) {
    const auto& unit = space.units[u];
    if (static_cast<int>(c.depth_cost[u].size()) < unit.depth_max) {
      throw DomainError(who + " depth_cost for unit " + std::to_string(u + 1) + " covers fewer layers than depth_max");
    }
    for (const auto& b : unit.blocks) {
      if (!c.kernel_factor.contains(b.kernel_size)) {
        throw DomainError(who + " has no kernel_factor for kernel " + std::to_string(b.kernel_size));
      }
      lookup_ratio(c.expansion_factor, b.expansion_ratio, 1.0, true, who + " expansion_factor");
    }
  }
  for (int r : space.resolutions) padded_resolution(profile, r);
}

double profile_latency(const Architecture& arch, const DesignSpace& space, const DeviceProfile& profile) {
  auto it = profile.families.find(space.family);
  if (it == profile.families.end()) {
    throw DomainError("profile '" + profile.name + "' does not declare family " + std::string(to_string(space.family)));
  }
  if (arch.blocks.size() != space.units.size()) throw DomainError("architecture unit count does not match the space");
  const auto& c = it->second;
  const int padded = padded_resolution(profile, arch.resolution);

  const std::map<double, double>* override_factors = nullptr;
  for (const auto& o : c.expansion_overrides) {
    if (padded <= o.max_resolution) {
      override_factors = &o.factors;
      break;
    }
  }

  double latency = profile.fixed_overhead_ms;
  if (padded != arch.resolution) latency += profile.padding_cost_ms;
  for (std::size_t u = 0; u < arch.blocks.size(); ++u) {
    double spatial = 1.0;
    if (c.spatial_exponent != 0.0) {
      const double ratio = static_cast<double>(unit_operating_size(space, padded, u)) /
                           static_cast<double>(unit_operating_size(space, profile.reference_resolution, u));
      spatial = std::pow(ratio * ratio, c.spatial_exponent);
    }
    double channel = 1.0;
    if (!arch.channel_ratios.empty()) channel = lookup_ratio(c.channel_factor, arch.channel_ratios[u], 1.0, false, "");
    const double unit_scale = c.unit_scale.at(u);
    for (std::size_t l = 0; l < arch.blocks[u].size(); ++l) {
      const auto& entry = catalog_block(space.family, arch.blocks[u][l]);
      auto kf = c.kernel_factor.find(entry.kernel_size);
      if (kf == c.kernel_factor.end()) throw DomainError("profile has no kernel_factor for kernel " + std::to_string(entry.kernel_size));
      double ef = lookup_ratio(c.expansion_factor, entry.expansion_ratio, 1.0, true, "profile expansion_factor");
      if (override_factors) ef = lookup_ratio(*override_factors, entry.expansion_ratio, ef, false, "");
      latency += kf->second * ef * channel * unit_scale * c.depth_cost.at(u).at(l) * spatial;
    }
  }
  return latency;
}

DeviceProfileEvaluator::DeviceProfileEvaluator(DesignSpace space, DeviceProfile profile, std::string name)
    : MetricEvaluator(name.empty() ? profile.name : std::move(name), Direction::Minimize, "ms"),
      space_(std::move(space)),
      profile_(std::move(profile)) {
  check_profile_covers(profile_, space_);
}

double DeviceProfileEvaluator::evaluate(const Architecture& arch) const { return profile_latency(arch, space_, profile_); }

std::string DeviceProfileEvaluator::parameter_text() const { return device_profile_to_text(profile_); }

}  // namespace blockprof
