#pragma once

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "blockprof/design_space.hpp"
#include "blockprof/metric.hpp"

namespace blockprof {

/// Replaces expansion factors for inputs at or below a resolution.
struct ExpansionOverride {
  int max_resolution = 0;
  std::map<double, double> factors;
  friend bool operator==(const ExpansionOverride&, const ExpansionOverride&) = default;
};

/// Latency coefficients for one block family.
struct FamilyCoefficients {
  std::map<int, double> kernel_factor;
  std::map<double, double> expansion_factor;
  std::vector<ExpansionOverride> expansion_overrides;  // first match by ascending max_resolution wins
  std::map<double, double> channel_factor;             // ResNet unit ratio; missing ratios count 1
  std::vector<double> unit_scale;                      // per unit
  std::vector<std::vector<double>> depth_cost;         // ms, per unit per layer
  double spatial_exponent = 0.0;                       // cost ~ (area_u(padded) / area_u(reference))^exp

  friend bool operator==(const FamilyCoefficients&, const FamilyCoefficients&) = default;
};

/// A deterministic parametric latency model. Presets encode qualitative
/// device behaviours (kernel penalties, resolution templates, expansion
/// sensitivity); they are not measurements of real hardware.
struct DeviceProfile {
  std::string name;
  std::string description;
  std::vector<int> resolution_templates;  // ascending; empty = inputs are never padded
  double fixed_overhead_ms = 0.0;
  double padding_cost_ms = 0.0;           // added whenever the input is padded up
  int reference_resolution = 224;
  std::map<BlockFamily, FamilyCoefficients> families;

  friend bool operator==(const DeviceProfile&, const DeviceProfile&) = default;
};

std::vector<std::string> preset_profile_names();
DeviceProfile load_device_profile(std::string_view name_or_path);
DeviceProfile parse_device_profile(std::string_view text);
std::string device_profile_to_text(const DeviceProfile& profile);

/// Smallest template >= resolution, or the resolution itself when the profile
/// has no templates. Throws DomainError above the largest template.
int padded_resolution(const DeviceProfile& profile, int resolution);

/// Checks that the profile declares the space's family and covers every
/// unit, layer, kernel and expansion ratio the space can produce.
void check_profile_covers(const DeviceProfile& profile, const DesignSpace& space);

/// fixed_overhead + padding + sum over layers of
/// kernel_factor * expansion_factor * channel_factor * unit_scale * depth_cost * spatial.
double profile_latency(const Architecture& arch, const DesignSpace& space, const DeviceProfile& profile);

class DeviceProfileEvaluator final : public MetricEvaluator {
 public:
  DeviceProfileEvaluator(DesignSpace space, DeviceProfile profile, std::string name = "");
  double evaluate(const Architecture& arch) const override;
  std::string parameter_text() const override;
  const DeviceProfile& profile() const { return profile_; }

 private:
  DesignSpace space_;
  DeviceProfile profile_;
};

}  // namespace blockprof
