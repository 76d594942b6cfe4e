#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "blockprof/catalog.hpp"
#include "blockprof/random.hpp"

namespace blockprof {

using Json = nlohmann::ordered_json;

/// Every unit halves the spatial size in its first layer.
inline constexpr int kFirstLayerStride = 2;

/// One candidate block of a unit, resolved against the unit's activation.
struct BlockSpec {
  BlockFamily family = BlockFamily::MBConvV3;
  BlockId id;
  double expansion_ratio = 0.0;
  int kernel_size = 3;
  bool uses_se = false;
  Activation activation = Activation::ReLU;
  std::string code;
  std::string name;

  friend bool operator==(const BlockSpec&, const BlockSpec&) = default;
};

struct UnitSpec {
  int depth_min = 1;
  int depth_max = 1;
  int base_channels = 1;
  Activation activation = Activation::ReLU;
  std::vector<BlockSpec> blocks;       // catalog order
  std::vector<double> channel_ratios;  // ResNet only, ascending

  bool has_block(BlockId id) const;
  bool has_channel_ratio(double ratio) const;
  /// 1 for MobileNet units, |channel_ratios| for ResNet units.
  std::size_t ratio_choice_count() const;

  friend bool operator==(const UnitSpec&, const UnitSpec&) = default;
};

struct StemSpec {
  int kernel = 3;
  int stride = 2;
  int channels = 16;
  int pool_stride = 1;  // >1 adds a 3x3 max-pool after the convolution

  friend bool operator==(const StemSpec&, const StemSpec&) = default;
};

struct HeadSpec {
  int conv_channels = 0;         // 1x1 convolution before pooling; 0 = none
  std::vector<int> fc_channels;  // hidden fully connected layers after pooling
  int num_classes = 1000;

  friend bool operator==(const HeadSpec&, const HeadSpec&) = default;
};

/// The grammar of admissible architectures. Immutable once loaded.
///
/// `base` names the grammar an architecture record belongs to; reduced spaces
/// keep the base of the space they were derived from, so their samples remain
/// records of the original grammar.
struct DesignSpace {
  std::string name;
  std::string base;
  BlockFamily family = BlockFamily::MBConvV3;
  std::vector<UnitSpec> units;
  std::vector<int> resolutions;  // ascending
  StemSpec stem;
  HeadSpec head;

  std::size_t unit_count() const { return units.size(); }
  const UnitSpec& unit(int one_based) const { return units.at(static_cast<std::size_t>(one_based - 1)); }

  friend bool operator==(const DesignSpace&, const DesignSpace&) = default;
};

/// One concrete network body plus its input resolution.
struct Architecture {
  std::string space;
  int resolution = 0;
  std::vector<std::vector<BlockId>> blocks;  // per unit, one entry per layer
  std::vector<double> channel_ratios;        // ResNet only, one per unit

  int depth(std::size_t unit_index) const { return static_cast<int>(blocks[unit_index].size()); }
  std::size_t layer_count() const;

  friend bool operator==(const Architecture&, const Architecture&) = default;
};

/// Block `block` fixed at layer `layer` of unit `unit` (both 1-based). For
/// ResNet the condition also fixes the unit's channel ratio.
struct Placement {
  int unit = 1;
  int layer = 1;
  BlockId block;
  std::optional<double> channel_ratio;

  friend bool operator==(const Placement&, const Placement&) = default;
};

// --- configuration -------------------------------------------------------

std::vector<std::string> preset_space_names();

/// Loads a shipped preset by name, or a config file by path.
DesignSpace load_space(std::string_view name_or_path);
DesignSpace space_from_json(const Json& config);
DesignSpace parse_space_config(std::string_view text);
Json space_to_json(const DesignSpace& space);

/// Throws ParseError if the space breaks a structural invariant.
void check_space(const DesignSpace& space);

// --- architectures -------------------------------------------------------

void validate(const Architecture& arch, const DesignSpace& space);
bool is_valid(const Architecture& arch, const DesignSpace& space);

Json to_record(const Architecture& arch, const DesignSpace& space);
Architecture from_record(const Json& record, const DesignSpace& space);
/// Compact single-line record text; the canonical interchange form.
std::string serialize(const Architecture& arch, const DesignSpace& space);
Architecture deserialize(std::string_view text, const DesignSpace& space);

const BlockSpec& block_spec(const DesignSpace& space, std::size_t unit_index, BlockId id);

// --- sampling ------------------------------------------------------------

/// Uniform depth per unit, uniform block per layer, uniform resolution (unless
/// pinned), uniform channel ratio per ResNet unit.
Architecture sample_uniform(const DesignSpace& space, Rng& rng,
                            std::optional<int> resolution = std::nullopt);

/// Samples A_{u,l,b}: the placed block sits at (u,l) and unit u's depth is
/// uniform over [max(l, d_min), d_max]. Everything else as sample_uniform.
Architecture sample_fixed(const DesignSpace& space, const Placement& placement, Rng& rng,
                          std::optional<int> resolution = std::nullopt);

// --- placements ----------------------------------------------------------

void check_placement(const DesignSpace& space, const Placement& placement);
std::string placement_code(const DesignSpace& space, const Placement& placement);

/// The profiled choices at one unit: its candidate blocks, or for ResNet the
/// (channel ratio x layer block) pairs, in catalog order.
std::vector<Placement> unit_choices(const DesignSpace& space, int unit);

/// All placements ordered unit-major, layer-middle, block-minor.
std::vector<Placement> enumerate_placements(const DesignSpace& space);

/// Distinct profiled block codes across the space, catalog order.
std::vector<std::string> profile_block_codes(const DesignSpace& space);

/// Every placement (u,l) at which `code` is a valid choice.
std::vector<Placement> placements_of(const DesignSpace& space, std::string_view code);

}  // namespace blockprof
