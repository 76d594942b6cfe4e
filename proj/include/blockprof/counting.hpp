#pragma once

#include <cstdint>

#include <boost/multiprecision/cpp_int.hpp>

#include "blockprof/design_space.hpp"

namespace blockprof {

using BigCount = boost::multiprecision::cpp_int;

/// Exact number of distinct bodies: prod_u ratios_u * sum_{d=dmin}^{dmax} |blocks_u|^d.
/// With `include_resolutions` the product is multiplied by |resolutions|.
BigCount count_architectures(const DesignSpace& space, bool include_resolutions = false);

/// sum_u d_max(u) * |choices_u|, where ResNet choices are (ratio, block) pairs.
std::uint64_t count_placements(const DesignSpace& space);

/// Decimal digits with thousands separators, e.g. "136,606,377,609".
std::string group_digits(const BigCount& value);

}  // namespace blockprof
