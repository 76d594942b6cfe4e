#pragma once

#include <array>
#include <compare>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>

namespace blockprof {

enum class BlockFamily { MBConvV3, MBConvV2, ResNetBottleneck };
enum class Activation { ReLU, HSwish };

std::string_view to_string(BlockFamily family);
std::string_view to_string(Activation activation);
BlockFamily parse_family(std::string_view text);
Activation parse_activation(std::string_view text);

inline bool is_mobilenet(BlockFamily family) { return family != BlockFamily::ResNetBottleneck; }

/// Position of a candidate block in its family's catalog. The catalog order is
/// the enumeration order used by every report and export.
struct BlockId {
  std::uint8_t index = 0;
  friend auto operator<=>(BlockId, BlockId) = default;
};

struct CatalogBlock {
  std::string_view code;
  std::string_view name;
  double expansion_ratio;
  int kernel_size;
};

/// MBConv{e}-{k} for e in {3,4,6} (major) and k in {3,5,7} (minor), codes B1..B9.
inline constexpr std::array<CatalogBlock, 9> kMobileNetCatalog{{
    {"B1", "MBConv3-3", 3.0, 3},
    {"B2", "MBConv3-5", 3.0, 5},
    {"B3", "MBConv3-7", 3.0, 7},
    {"B4", "MBConv4-3", 4.0, 3},
    {"B5", "MBConv4-5", 4.0, 5},
    {"B6", "MBConv4-7", 4.0, 7},
    {"B7", "MBConv6-3", 6.0, 3},
    {"B8", "MBConv6-5", 6.0, 5},
    {"B9", "MBConv6-7", 6.0, 7},
}};

/// Bottleneck layer expansion ratios. The middle convolution is always 3x3.
inline constexpr std::array<CatalogBlock, 3> kResNetLayerCatalog{{
    {"B20", "B20", 0.20, 3},
    {"B25", "B25", 0.25, 3},
    {"B35", "B35", 0.35, 3},
}};

/// Unit-level channel multipliers for ResNet units.
inline constexpr std::array<double, 3> kResNetChannelRatios{0.65, 0.8, 1.0};

std::span<const CatalogBlock> catalog(BlockFamily family);
const CatalogBlock& catalog_block(BlockFamily family, BlockId id);

/// Accepts a block code ("B9") or name ("MBConv6-7"); for ResNet also a bare
/// ratio ("0.25").
std::optional<BlockId> find_block(BlockFamily family, std::string_view token);
BlockId parse_block(BlockFamily family, std::string_view token);

/// Index of a ResNet channel ratio in kResNetChannelRatios.
std::optional<std::size_t> channel_ratio_index(double ratio);

/// Joint code for a ResNet (unit ratio, layer ratio) pair, e.g. "C65-B20".
std::string resnet_joint_code(double channel_ratio, BlockId layer_block);

}  // namespace blockprof
