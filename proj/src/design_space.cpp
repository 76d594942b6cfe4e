#include "blockprof/design_space.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>

#include "blockprof/embedded.hpp"
#include "blockprof/errors.hpp"
#include "blockprof/io.hpp"
#include "json_util.hpp"

namespace blockprof {

using namespace detail;

namespace {

constexpr std::string_view kPresetNames[] = {"ofa", "proxylessnas", "resnet50"};

BlockSpec make_block_spec(BlockFamily family, BlockId id, Activation activation) {
  const auto& entry = catalog_block(family, id);
  BlockSpec spec;
  spec.family = family;
  spec.id = id;
  spec.expansion_ratio = entry.expansion_ratio;
  spec.kernel_size = entry.kernel_size;
  spec.uses_se = family == BlockFamily::MBConvV3;
  spec.activation = family == BlockFamily::MBConvV2 ? Activation::ReLU : activation;
  spec.code = std::string(entry.code);
  spec.name = std::string(entry.name);
  return spec;
}

bool same_ratio(double a, double b) { return std::abs(a - b) < 1e-9; }

}  // namespace

std::size_t Architecture::layer_count() const {
  std::size_t n = 0;
  for (const auto& unit : blocks) n += unit.size();
  return n;
}

bool UnitSpec::has_block(BlockId id) const {
  return std::any_of(blocks.begin(), blocks.end(), [&](const BlockSpec& b) { return b.id == id; });
}

bool UnitSpec::has_channel_ratio(double ratio) const {
  return std::any_of(channel_ratios.begin(), channel_ratios.end(),
                     [&](double r) { return same_ratio(r, ratio); });
}

std::size_t UnitSpec::ratio_choice_count() const {
  return channel_ratios.empty() ? 1 : channel_ratios.size();
}

// --- configuration -------------------------------------------------------

std::vector<std::string> preset_space_names() {
  return {std::begin(kPresetNames), std::end(kPresetNames)};
}

DesignSpace load_space(std::string_view name_or_path) {
  for (auto preset : kPresetNames) {
    if (preset == name_or_path) {
      auto text = embedded_file("spaces/" + std::string(preset) + ".json");
      if (!text) throw NotFoundError("preset '" + std::string(preset) + "' is not embedded");
      return parse_space_config(*text);
    }
  }
  const std::filesystem::path path(name_or_path);
  if (!std::filesystem::exists(path)) {
    throw NotFoundError("unknown design space '" + std::string(name_or_path) +
                        "' (not a preset: ofa, proxylessnas, resnet50; not a file)");
  }
  return parse_space_config(read_text_file(path));
}

DesignSpace parse_space_config(std::string_view text) {
  return space_from_json(parse_json_text(text, "design-space config"));
}

DesignSpace space_from_json(const Json& config) {
  DesignSpace space;
  space.name = get_string(config, "name", "");
  if (const Json* base = optional_field(config, "base")) space.base = as_string(*base, "base");
  else space.base = space.name;
  space.family = parse_family(get_string(config, "family", ""));
  space.resolutions = get_int_list(config, "resolutions", "");

  if (const Json* stem = optional_field(config, "stem")) {
    space.stem.kernel = get_int_or(*stem, "kernel", "stem", space.stem.kernel);
    space.stem.stride = get_int_or(*stem, "stride", "stem", space.stem.stride);
    space.stem.channels = get_int_or(*stem, "channels", "stem", space.stem.channels);
    space.stem.pool_stride = get_int_or(*stem, "pool_stride", "stem", space.stem.pool_stride);
  }
  if (const Json* head = optional_field(config, "head")) {
    space.head.conv_channels = get_int_or(*head, "conv_channels", "head", 0);
    if (optional_field(*head, "fc_channels")) space.head.fc_channels = get_int_list(*head, "fc_channels", "head");
    space.head.num_classes = get_int_or(*head, "num_classes", "head", space.head.num_classes);
  }

  const Json& units = as_array(require(config, "units", ""), "units");
  for (std::size_t i = 0; i < units.size(); ++i) {
    const auto path = index_path("units", i);
    const Json& u = units[i];
    UnitSpec unit;
    unit.depth_min = get_int(u, "depth_min", path);
    unit.depth_max = get_int(u, "depth_max", path);
    unit.base_channels = get_int(u, "base_channels", path);
    if (const Json* act = optional_field(u, "activation")) {
      unit.activation = parse_activation(as_string(*act, join_path(path, "activation")));
    }
    if (space.family == BlockFamily::MBConvV2 && unit.activation != Activation::ReLU) {
      throw ParseError(join_path(path, "activation") + ": MBConvV2 blocks use relu only");
    }
    const auto blocks_path = join_path(path, "blocks");
    const Json& blocks = as_array(require(u, "blocks", path), blocks_path);
    for (std::size_t j = 0; j < blocks.size(); ++j) {
      const auto bpath = index_path(blocks_path, j);
      const auto token = as_string(blocks[j], bpath);
      auto id = find_block(space.family, token);
      if (!id) throw ParseError(bpath + ": unknown block '" + token + "' for " + std::string(to_string(space.family)));
      unit.blocks.push_back(make_block_spec(space.family, *id, unit.activation));
    }
    if (const Json* ratios = optional_field(u, "channel_ratios")) {
      unit.channel_ratios = get_number_list(*ratios, join_path(path, "channel_ratios"));
    }
    space.units.push_back(std::move(unit));
  }
  check_space(space);
  return space;
}

void check_space(const DesignSpace& space) {
  if (space.name.empty()) throw ParseError("name: must be non-empty");
  if (space.resolutions.empty()) throw ParseError("resolutions: must be non-empty");
  for (std::size_t i = 0; i < space.resolutions.size(); ++i) {
    if (space.resolutions[i] <= 0) throw ParseError(index_path("resolutions", i) + ": must be positive");
    if (i > 0 && space.resolutions[i] <= space.resolutions[i - 1]) {
      throw ParseError("resolutions: must be strictly ascending");
    }
  }
  if (space.stem.kernel < 1 || space.stem.stride < 1 || space.stem.channels < 1 || space.stem.pool_stride < 1) {
    throw ParseError("stem: kernel, stride, channels and pool_stride must be positive");
  }
  if (space.head.conv_channels < 0 || space.head.num_classes < 1) {
    throw ParseError("head: conv_channels must be >= 0 and num_classes >= 1");
  }
  for (std::size_t i = 0; i < space.head.fc_channels.size(); ++i) {
    if (space.head.fc_channels[i] < 1) throw ParseError(index_path("head.fc_channels", i) + ": must be positive");
  }
  for (std::size_t i = 0; i < space.units.size(); ++i) {
    const auto path = index_path("units", i);
    const auto& unit = space.units[i];
    if (unit.depth_min < 1) throw ParseError(path + ".depth_min: must be >= 1");
    if (unit.depth_min > unit.depth_max) {
      throw ParseError(path + ".depth_max: depth_min (" + std::to_string(unit.depth_min) +
                       ") exceeds depth_max (" + std::to_string(unit.depth_max) + ")");
    }
    if (unit.base_channels < 1) throw ParseError(path + ".base_channels: must be positive");
    if (unit.blocks.empty()) throw ParseError(path + ".blocks: must be non-empty");
    for (std::size_t j = 0; j < unit.blocks.size(); ++j) {
      if (unit.blocks[j].family != space.family) throw ParseError(index_path(path + ".blocks", j) + ": family mismatch");
      if (j > 0 && unit.blocks[j].id <= unit.blocks[j - 1].id) {
        throw ParseError(path + ".blocks: must be distinct and listed in catalog order");
      }
    }
    if (space.family == BlockFamily::ResNetBottleneck) {
      if (unit.channel_ratios.empty()) throw ParseError(path + ".channel_ratios: required for ResNet units");
      for (std::size_t j = 0; j < unit.channel_ratios.size(); ++j) {
        if (!channel_ratio_index(unit.channel_ratios[j])) {
          throw ParseError(index_path(path + ".channel_ratios", j) + ": must be one of 0.65, 0.8, 1.0");
        }
        if (j > 0 && unit.channel_ratios[j] <= unit.channel_ratios[j - 1]) {
          throw ParseError(path + ".channel_ratios: must be strictly ascending");
        }
      }
    } else if (!unit.channel_ratios.empty()) {
      throw ParseError(path + ".channel_ratios: only ResNet units carry channel ratios");
    }
  }
}

Json space_to_json(const DesignSpace& space) {
  Json j;
  j["name"] = space.name;
  if (space.base != space.name) j["base"] = space.base;
  j["family"] = std::string(to_string(space.family));
  j["resolutions"] = space.resolutions;
  j["stem"] = {{"kernel", space.stem.kernel},
               {"stride", space.stem.stride},
               {"channels", space.stem.channels},
               {"pool_stride", space.stem.pool_stride}};
  j["head"] = {{"conv_channels", space.head.conv_channels},
               {"fc_channels", space.head.fc_channels},
               {"num_classes", space.head.num_classes}};
  Json units = Json::array();
  for (const auto& unit : space.units) {
    Json u;
    u["depth_min"] = unit.depth_min;
    u["depth_max"] = unit.depth_max;
    u["base_channels"] = unit.base_channels;
    u["activation"] = std::string(to_string(unit.activation));
    Json blocks = Json::array();
    for (const auto& b : unit.blocks) blocks.push_back(b.name);
    u["blocks"] = std::move(blocks);
    if (!unit.channel_ratios.empty()) u["channel_ratios"] = unit.channel_ratios;
    units.push_back(std::move(u));
  }
  j["units"] = std::move(units);
  return j;
}

// --- architectures -------------------------------------------------------

void validate(const Architecture& arch, const DesignSpace& space) {
  if (arch.space != space.base) {
    throw ValidationError("record belongs to space '" + arch.space + "', expected '" + space.base + "'");
  }
  if (std::find(space.resolutions.begin(), space.resolutions.end(), arch.resolution) == space.resolutions.end()) {
    throw ValidationError("resolution " + std::to_string(arch.resolution) + " is not in the space's resolution set");
  }
  if (arch.blocks.size() != space.units.size()) {
    throw ValidationError("record has " + std::to_string(arch.blocks.size()) + " units, space has " +
                          std::to_string(space.units.size()));
  }
  const bool resnet = space.family == BlockFamily::ResNetBottleneck;
  if (resnet ? arch.channel_ratios.size() != space.units.size() : !arch.channel_ratios.empty()) {
    throw ValidationError(resnet ? "record needs one channel ratio per unit"
                                 : "channel ratios are only valid for ResNet spaces");
  }
  for (std::size_t u = 0; u < space.units.size(); ++u) {
    const auto& unit = space.units[u];
    const int depth = arch.depth(u);
    if (depth < unit.depth_min || depth > unit.depth_max) {
      throw ValidationError("unit " + std::to_string(u + 1) + " depth " + std::to_string(depth) +
                            " outside [" + std::to_string(unit.depth_min) + ", " +
                            std::to_string(unit.depth_max) + "]");
    }
    for (std::size_t l = 0; l < arch.blocks[u].size(); ++l) {
      if (!unit.has_block(arch.blocks[u][l])) {
        const auto id = arch.blocks[u][l];
        const auto label = id.index < catalog(space.family).size()
                               ? std::string(catalog_block(space.family, id).code)
                               : "#" + std::to_string(id.index);
        throw ValidationError("block " + label + " at unit " + std::to_string(u + 1) + " layer " +
                              std::to_string(l + 1) + " is not a candidate of that unit");
      }
    }
    if (resnet && !unit.has_channel_ratio(arch.channel_ratios[u])) {
      throw ValidationError("channel ratio " + format_number(arch.channel_ratios[u]) + " not allowed in unit " +
                            std::to_string(u + 1));
    }
  }
}

bool is_valid(const Architecture& arch, const DesignSpace& space) {
  try {
    validate(arch, space);
    return true;
  } catch (const ValidationError&) {
    return false;
  }
}

Json to_record(const Architecture& arch, const DesignSpace& space) {
  Json j;
  j["space"] = arch.space;
  j["resolution"] = arch.resolution;
  Json depths = Json::array();
  Json blocks = Json::array();
  for (const auto& unit : arch.blocks) {
    depths.push_back(unit.size());
    Json codes = Json::array();
    for (auto id : unit) codes.push_back(std::string(catalog_block(space.family, id).code));
    blocks.push_back(std::move(codes));
  }
  j["depths"] = std::move(depths);
  j["blocks"] = std::move(blocks);
  if (!arch.channel_ratios.empty()) j["channel_ratios"] = arch.channel_ratios;
  return j;
}

Architecture from_record(const Json& record, const DesignSpace& space) {
  try {
    Architecture arch;
    arch.space = get_string(record, "space", "");
    arch.resolution = get_int(record, "resolution", "");
    const auto depths = get_int_list(record, "depths", "");
    const Json& blocks = as_array(require(record, "blocks", ""), "blocks");
    if (depths.size() != blocks.size()) throw ValidationError("depths and blocks list different unit counts");
    for (std::size_t u = 0; u < blocks.size(); ++u) {
      const auto path = index_path("blocks", u);
      const Json& unit = as_array(blocks[u], path);
      if (static_cast<int>(unit.size()) != depths[u]) {
        throw ValidationError("unit " + std::to_string(u + 1) + " declares depth " + std::to_string(depths[u]) +
                              " but lists " + std::to_string(unit.size()) + " blocks");
      }
      std::vector<BlockId> ids;
      for (std::size_t l = 0; l < unit.size(); ++l) ids.push_back(parse_block(space.family, as_string(unit[l], index_path(path, l))));
      arch.blocks.push_back(std::move(ids));
    }
    if (const Json* ratios = optional_field(record, "channel_ratios")) {
      arch.channel_ratios = get_number_list(*ratios, "channel_ratios");
    }
    validate(arch, space);
    return arch;
  } catch (const ParseError& e) {
    throw ValidationError(std::string("malformed architecture record: ") + e.what());
  }
}

std::string serialize(const Architecture& arch, const DesignSpace& space) { return to_record(arch, space).dump(); }

Architecture deserialize(std::string_view text, const DesignSpace& space) {
  Json record;
  try {
    record = Json::parse(text.begin(), text.end());
  } catch (const nlohmann::json::parse_error& e) {
    throw ValidationError(std::string("malformed architecture record: ") + e.what());
  }
  return from_record(record, space);
}

const BlockSpec& block_spec(const DesignSpace& space, std::size_t unit_index, BlockId id) {
  const auto& unit = space.units.at(unit_index);
  for (const auto& b : unit.blocks) {
    if (b.id == id) return b;
  }
  throw DomainError("block not in unit " + std::to_string(unit_index + 1));
}

// --- sampling ------------------------------------------------------------

namespace {

Architecture sample_impl(const DesignSpace& space, const Placement* fixed, Rng& rng, std::optional<int> resolution) {
  Architecture arch;
  arch.space = space.base;
  if (resolution) {
    if (std::find(space.resolutions.begin(), space.resolutions.end(), *resolution) == space.resolutions.end()) {
      throw DomainError("resolution " + std::to_string(*resolution) + " is not in the space");
    }
    arch.resolution = *resolution;
  } else {
    arch.resolution = space.resolutions[uniform_index(rng, space.resolutions.size())];
  }
  const bool resnet = space.family == BlockFamily::ResNetBottleneck;
  arch.blocks.resize(space.units.size());
  if (resnet) arch.channel_ratios.resize(space.units.size());
  for (std::size_t u = 0; u < space.units.size(); ++u) {
    const auto& unit = space.units[u];
    const bool here = fixed && static_cast<std::size_t>(fixed->unit - 1) == u;
    const int lo = here ? std::max(fixed->layer, unit.depth_min) : unit.depth_min;
    const int depth = uniform_int(rng, lo, unit.depth_max);
    if (resnet) {
      arch.channel_ratios[u] = here && fixed->channel_ratio
                                   ? *fixed->channel_ratio
                                   : unit.channel_ratios[uniform_index(rng, unit.channel_ratios.size())];
    }
    auto& layers = arch.blocks[u];
    layers.reserve(static_cast<std::size_t>(depth));
    for (int l = 1; l <= depth; ++l) {
      if (here && l == fixed->layer) layers.push_back(fixed->block);
      else layers.push_back(unit.blocks[uniform_index(rng, unit.blocks.size())].id);
    }
  }
  return arch;
}

}  // namespace

Architecture sample_uniform(const DesignSpace& space, Rng& rng, std::optional<int> resolution) {
  return sample_impl(space, nullptr, rng, resolution);
}

Architecture sample_fixed(const DesignSpace& space, const Placement& placement, Rng& rng,
                          std::optional<int> resolution) {
  check_placement(space, placement);
  return sample_impl(space, &placement, rng, resolution);
}

// --- placements ----------------------------------------------------------

void check_placement(const DesignSpace& space, const Placement& p) {
  if (p.unit < 1 || p.unit > static_cast<int>(space.units.size())) {
    throw DomainError("placement unit " + std::to_string(p.unit) + " out of range");
  }
  const auto& unit = space.unit(p.unit);
  if (p.layer < 1 || p.layer > unit.depth_max) {
    throw DomainError("placement layer " + std::to_string(p.layer) + " exceeds depth_max of unit " +
                      std::to_string(p.unit));
  }
  if (!unit.has_block(p.block)) {
    throw DomainError("placement block is not a candidate of unit " + std::to_string(p.unit));
  }
  if (space.family == BlockFamily::ResNetBottleneck) {
    if (!p.channel_ratio || !unit.has_channel_ratio(*p.channel_ratio)) {
      throw DomainError("ResNet placement needs a channel ratio allowed in unit " + std::to_string(p.unit));
    }
  } else if (p.channel_ratio) {
    throw DomainError("channel ratio given for a MobileNet placement");
  }
}

std::string placement_code(const DesignSpace& space, const Placement& p) {
  if (space.family == BlockFamily::ResNetBottleneck && p.channel_ratio) {
    return resnet_joint_code(*p.channel_ratio, p.block);
  }
  return std::string(catalog_block(space.family, p.block).code);
}

std::vector<Placement> unit_choices(const DesignSpace& space, int unit_number) {
  const auto& unit = space.unit(unit_number);
  std::vector<Placement> out;
  if (space.family == BlockFamily::ResNetBottleneck) {
    for (double ratio : unit.channel_ratios) {
      for (const auto& b : unit.blocks) out.push_back({unit_number, 1, b.id, ratio});
    }
  } else {
    for (const auto& b : unit.blocks) out.push_back({unit_number, 1, b.id, std::nullopt});
  }
  return out;
}

std::vector<Placement> enumerate_placements(const DesignSpace& space) {
  std::vector<Placement> out;
  for (int u = 1; u <= static_cast<int>(space.units.size()); ++u) {
    const auto choices = unit_choices(space, u);
    for (int l = 1; l <= space.unit(u).depth_max; ++l) {
      for (auto p : choices) {
        p.layer = l;
        out.push_back(p);
      }
    }
  }
  return out;
}

std::vector<std::string> profile_block_codes(const DesignSpace& space) {
  // Collect (ratio index, block index) keys so the output follows catalog order.
  std::vector<std::pair<std::size_t, BlockId>> keys;
  for (int u = 1; u <= static_cast<int>(space.units.size()); ++u) {
    for (const auto& p : unit_choices(space, u)) {
      const std::size_t r = p.channel_ratio ? *channel_ratio_index(*p.channel_ratio) : 0;
      keys.emplace_back(r, p.block);
    }
  }
  std::sort(keys.begin(), keys.end());
  keys.erase(std::unique(keys.begin(), keys.end()), keys.end());
  std::vector<std::string> out;
  for (const auto& [r, id] : keys) {
    if (space.family == BlockFamily::ResNetBottleneck) out.push_back(resnet_joint_code(kResNetChannelRatios[r], id));
    else out.emplace_back(catalog_block(space.family, id).code);
  }
  return out;
}

std::vector<Placement> placements_of(const DesignSpace& space, std::string_view code) {
  std::vector<Placement> out;
  for (const auto& p : enumerate_placements(space)) {
    if (placement_code(space, p) == code) out.push_back(p);
  }
  return out;
}

}  // namespace blockprof
