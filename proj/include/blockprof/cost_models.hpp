#pragma once

#include <cstdint>
#include <vector>

#include "blockprof/design_space.hpp"
#include "blockprof/metric.hpp"

namespace blockprof {

struct CostOptions {
  int se_reduction = 4;       // squeeze channels = max(1, mid / se_reduction)
  bool include_se = true;     // count SE fully connected layers
  bool include_bias = false;  // add one bias per output channel of every conv/fc
  friend bool operator==(const CostOptions&, const CostOptions&) = default;
};

struct LayerCost {
  std::int64_t macs = 0;
  std::int64_t params = 0;

  LayerCost& operator+=(const LayerCost& o) {
    macs += o.macs;
    params += o.params;
    return *this;
  }
};

/// Spatial size after a "same"-padded convolution: (in + 2*(k/2) - k)/s + 1.
int conv_output_size(int input, int kernel, int stride);

/// Inverted bottleneck: 1x1 expand, kxk depthwise (with stride), optional SE,
/// 1x1 project. `input_size` is the square input height/width.
LayerCost mbconv_cost(int in_channels, int out_channels, int input_size, int stride, const BlockSpec& block,
                      const CostOptions& options = {});

/// ResNet bottleneck: 1x1 reduce, 3x3 (with stride), 1x1 expand, plus a 1x1
/// projection shortcut when the shape changes.
LayerCost bottleneck_cost(int in_channels, int out_channels, int input_size, int stride, double expansion_ratio,
                          const CostOptions& options = {});

/// Output channels of unit `unit_index` for this architecture.
int unit_channels(const DesignSpace& space, const Architecture& arch, std::size_t unit_index);

struct CostBreakdown {
  LayerCost stem;
  std::vector<std::vector<LayerCost>> body;  // per unit, per layer
  LayerCost head;
  std::vector<int> unit_input_size;          // square input size of each unit's first layer

  LayerCost total() const;
};

CostBreakdown cost_breakdown(const Architecture& arch, const DesignSpace& space, const CostOptions& options = {});

/// Multiply-accumulates over stem, body and head. Throws DomainError when
/// the architecture does not match the space.
std::int64_t macs(const Architecture& arch, const DesignSpace& space, const CostOptions& options = {});
std::int64_t param_count(const Architecture& arch, const DesignSpace& space, const CostOptions& options = {});

class MacsEvaluator final : public MetricEvaluator {
 public:
  explicit MacsEvaluator(DesignSpace space, CostOptions options = {});
  double evaluate(const Architecture& arch) const override;
  std::string parameter_text() const override;

 private:
  DesignSpace space_;
  CostOptions options_;
};

class ParamsEvaluator final : public MetricEvaluator {
 public:
  explicit ParamsEvaluator(DesignSpace space, CostOptions options = {});
  double evaluate(const Architecture& arch) const override;
  bool resolution_sensitive() const override { return false; }
  std::string parameter_text() const override;

 private:
  DesignSpace space_;
  CostOptions options_;
};

}  // namespace blockprof
