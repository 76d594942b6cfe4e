#include "blockprof/cost_models.hpp"

#include <algorithm>
#include <cmath>

#include "blockprof/errors.hpp"

namespace blockprof {

namespace {

std::int64_t sq(std::int64_t v) { return v * v; }

std::int64_t bias(const CostOptions& options, std::int64_t channels) { return options.include_bias ? channels : 0; }

void check_matches(const Architecture& arch, const DesignSpace& space) {
  if (arch.space != space.base) throw DomainError("architecture of space '" + arch.space + "' evaluated against '" + space.base + "'");
  if (arch.blocks.size() != space.units.size()) throw DomainError("architecture unit count does not match the space");
  if (space.family == BlockFamily::ResNetBottleneck && arch.channel_ratios.size() != space.units.size()) {
    throw DomainError("ResNet architecture lacks per-unit channel ratios");
  }
}

}  // namespace

int conv_output_size(int input, int kernel, int stride) { return (input + 2 * (kernel / 2) - kernel) / stride + 1; }

LayerCost mbconv_cost(int in_channels, int out_channels, int input_size, int stride, const BlockSpec& block,
                      const CostOptions& options) {
  const std::int64_t cin = in_channels;
  const std::int64_t cout = out_channels;
  const std::int64_t mid = std::llround(block.expansion_ratio * static_cast<double>(in_channels));
  const std::int64_t k = block.kernel_size;
  const std::int64_t in_area = sq(input_size);
  const std::int64_t out_area = sq(conv_output_size(input_size, block.kernel_size, stride));

  LayerCost cost;
  cost.macs = in_area * cin * mid + out_area * mid * k * k + out_area * mid * cout;
  cost.params = cin * mid + mid * k * k + mid * cout + bias(options, mid) * 2 + bias(options, cout);
  if (block.uses_se && options.include_se) {
    const std::int64_t squeeze = std::max<std::int64_t>(1, mid / options.se_reduction);
    cost.macs += 2 * mid * squeeze;
    cost.params += 2 * mid * squeeze + bias(options, squeeze) + bias(options, mid);
  }
  return cost;
}

LayerCost bottleneck_cost(int in_channels, int out_channels, int input_size, int stride, double expansion_ratio,
                          const CostOptions& options) {
  const std::int64_t cin = in_channels;
  const std::int64_t cout = out_channels;
  const std::int64_t mid = std::max<std::int64_t>(1, std::llround(expansion_ratio * static_cast<double>(out_channels)));
  const std::int64_t in_area = sq(input_size);
  const std::int64_t out_area = sq(conv_output_size(input_size, 3, stride));

  LayerCost cost;
  cost.macs = in_area * cin * mid + out_area * mid * mid * 9 + out_area * mid * cout;
  cost.params = cin * mid + mid * mid * 9 + mid * cout + bias(options, mid) * 2 + bias(options, cout);
  if (stride != 1 || in_channels != out_channels) {
    cost.macs += out_area * cin * cout;
    cost.params += cin * cout + bias(options, cout);
  }
  return cost;
}

int unit_channels(const DesignSpace& space, const Architecture& arch, std::size_t unit_index) {
  const int base = space.units.at(unit_index).base_channels;
  if (space.family != BlockFamily::ResNetBottleneck) return base;
  return std::max(1, static_cast<int>(std::lround(arch.channel_ratios.at(unit_index) * base)));
}

LayerCost CostBreakdown::total() const {
  LayerCost sum = stem;
  for (const auto& unit : body) {
    for (const auto& layer : unit) sum += layer;
  }
  sum += head;
  return sum;
}

CostBreakdown cost_breakdown(const Architecture& arch, const DesignSpace& space, const CostOptions& options) {
  check_matches(arch, space);
  CostBreakdown out;

  const auto& stem = space.stem;
  int size = conv_output_size(arch.resolution, stem.kernel, stem.stride);
  out.stem.macs = sq(size) * 3 * stem.channels * stem.kernel * stem.kernel;
  out.stem.params = 3LL * stem.channels * stem.kernel * stem.kernel + bias(options, stem.channels);
  if (stem.pool_stride > 1) size = conv_output_size(size, 3, stem.pool_stride);

  int channels = stem.channels;
  out.body.resize(space.units.size());
  for (std::size_t u = 0; u < space.units.size(); ++u) {
    const int out_channels = unit_channels(space, arch, u);
    out.unit_input_size.push_back(size);
    for (std::size_t l = 0; l < arch.blocks[u].size(); ++l) {
      const int stride = l == 0 ? kFirstLayerStride : 1;
      const auto& block = block_spec(space, u, arch.blocks[u][l]);
      LayerCost cost = space.family == BlockFamily::ResNetBottleneck
                           ? bottleneck_cost(channels, out_channels, size, stride, block.expansion_ratio, options)
                           : mbconv_cost(channels, out_channels, size, stride, block, options);
      out.body[u].push_back(cost);
      size = conv_output_size(size, block.kernel_size, stride);
      channels = out_channels;
    }
  }

  const auto& head = space.head;
  if (head.conv_channels > 0) {
    out.head.macs += sq(size) * channels * head.conv_channels;
    out.head.params += static_cast<std::int64_t>(channels) * head.conv_channels + bias(options, head.conv_channels);
    channels = head.conv_channels;
  }
  std::vector<int> fc = head.fc_channels;
  fc.push_back(head.num_classes);
  for (int width : fc) {
    out.head.macs += static_cast<std::int64_t>(channels) * width;
    out.head.params += static_cast<std::int64_t>(channels) * width + bias(options, width);
    channels = width;
  }
  return out;
}

std::int64_t macs(const Architecture& arch, const DesignSpace& space, const CostOptions& options) {
  return cost_breakdown(arch, space, options).total().macs;
}

std::int64_t param_count(const Architecture& arch, const DesignSpace& space, const CostOptions& options) {
  return cost_breakdown(arch, space, options).total().params;
}

namespace {

std::string options_text(const CostOptions& o) {
  return "se_reduction=" + std::to_string(o.se_reduction) + ";include_se=" + std::to_string(o.include_se) +
         ";include_bias=" + std::to_string(o.include_bias);
}

}  // namespace

MacsEvaluator::MacsEvaluator(DesignSpace space, CostOptions options)
    : MetricEvaluator("macs", Direction::Minimize, "MACs"), space_(std::move(space)), options_(options) {}

double MacsEvaluator::evaluate(const Architecture& arch) const {
  return static_cast<double>(macs(arch, space_, options_));
}

std::string MacsEvaluator::parameter_text() const { return "macs:" + options_text(options_); }

ParamsEvaluator::ParamsEvaluator(DesignSpace space, CostOptions options)
    : MetricEvaluator("params", Direction::Minimize, "weights"), space_(std::move(space)), options_(options) {}

double ParamsEvaluator::evaluate(const Architecture& arch) const {
  return static_cast<double>(param_count(arch, space_, options_));
}

std::string ParamsEvaluator::parameter_text() const { return "params:" + options_text(options_); }

}  // namespace blockprof
