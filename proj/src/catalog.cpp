#include "blockprof/catalog.hpp"

#include <charconv>
#include <cmath>
#include <string>

#include "blockprof/errors.hpp"

namespace blockprof {

std::string_view to_string(BlockFamily family) {
  switch (family) {
    case BlockFamily::MBConvV3: return "MBConvV3";
    case BlockFamily::MBConvV2: return "MBConvV2";
    case BlockFamily::ResNetBottleneck: return "ResNetBottleneck";
  }
  return "?";
}

std::string_view to_string(Activation activation) {
  return activation == Activation::ReLU ? "relu" : "hswish";
}

BlockFamily parse_family(std::string_view text) {
  if (text == "MBConvV3") return BlockFamily::MBConvV3;
  if (text == "MBConvV2") return BlockFamily::MBConvV2;
  if (text == "ResNetBottleneck") return BlockFamily::ResNetBottleneck;
  throw ParseError("unknown block family '" + std::string(text) +
                   "' (expected MBConvV3, MBConvV2 or ResNetBottleneck)");
}

Activation parse_activation(std::string_view text) {
  if (text == "relu") return Activation::ReLU;
  if (text == "hswish") return Activation::HSwish;
  throw ParseError("unknown activation '" + std::string(text) + "' (expected relu or hswish)");
}

std::span<const CatalogBlock> catalog(BlockFamily family) {
  if (is_mobilenet(family)) return kMobileNetCatalog;
  return kResNetLayerCatalog;
}

const CatalogBlock& catalog_block(BlockFamily family, BlockId id) {
  auto blocks = catalog(family);
  if (id.index >= blocks.size()) throw DomainError("block index out of range for " + std::string(to_string(family)));
  return blocks[id.index];
}

std::optional<BlockId> find_block(BlockFamily family, std::string_view token) {
  auto blocks = catalog(family);
  for (std::size_t i = 0; i < blocks.size(); ++i) {
    if (blocks[i].code == token || blocks[i].name == token) return BlockId{static_cast<std::uint8_t>(i)};
  }
  if (!is_mobilenet(family)) {
    double ratio = 0.0;
    auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), ratio);
    if (ec == std::errc() && ptr == token.data() + token.size()) {
      for (std::size_t i = 0; i < blocks.size(); ++i) {
        if (std::abs(blocks[i].expansion_ratio - ratio) < 1e-9) return BlockId{static_cast<std::uint8_t>(i)};
      }
    }
  }
  return std::nullopt;
}

BlockId parse_block(BlockFamily family, std::string_view token) {
  if (auto id = find_block(family, token)) return *id;
  throw ValidationError("unknown block code '" + std::string(token) + "' for family " +
                        std::string(to_string(family)));
}

std::optional<std::size_t> channel_ratio_index(double ratio) {
  for (std::size_t i = 0; i < kResNetChannelRatios.size(); ++i) {
    if (std::abs(kResNetChannelRatios[i] - ratio) < 1e-9) return i;
  }
  return std::nullopt;
}

std::string resnet_joint_code(double channel_ratio, BlockId layer_block) {
  const auto percent = std::lround(channel_ratio * 100.0);
  return "C" + std::to_string(percent) + "-" + std::string(kResNetLayerCatalog.at(layer_block.index).code);
}

}  // namespace blockprof
