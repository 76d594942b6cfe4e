#include "blockprof/counting.hpp"

namespace blockprof {

BigCount count_architectures(const DesignSpace& space, bool include_resolutions) {
  BigCount total = 1;
  for (const auto& unit : space.units) {
    const BigCount blocks = unit.blocks.size();
    BigCount layer_power = boost::multiprecision::pow(blocks, static_cast<unsigned>(unit.depth_min));
    BigCount per_unit = 0;
    for (int d = unit.depth_min; d <= unit.depth_max; ++d) {
      per_unit += layer_power;
      layer_power *= blocks;
    }
    total *= per_unit * unit.ratio_choice_count();
  }
  if (include_resolutions) total *= space.resolutions.size();
  return total;
}

std::uint64_t count_placements(const DesignSpace& space) {
  std::uint64_t total = 0;
  for (const auto& unit : space.units) {
    total += static_cast<std::uint64_t>(unit.depth_max) * unit.blocks.size() * unit.ratio_choice_count();
  }
  return total;
}

std::string group_digits(const BigCount& value) {
  const std::string digits = value.str();
  std::string out;
  const std::size_t lead = digits.size() % 3 == 0 ? 3 : digits.size() % 3;
  for (std::size_t i = 0; i < digits.size(); ++i) {
    if (i > 0 && (i - lead) % 3 == 0 && i >= lead) out += ',';
    out += digits[i];
  }
  return out;
}

}  // namespace blockprof
