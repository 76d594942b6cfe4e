#pragma once

#include <atomic>
#include <filesystem>
#include <memory>
#include <random>
#include <string>
#include <string_view>

#include "blockprof/design_space.hpp"
#include "blockprof/metric.hpp"

namespace fixtures {

/// Two units, depth 1-2, three blocks, two resolutions: 2 * 12 * 12 = 288
/// architectures, small enough to enumerate.
inline constexpr std::string_view kMiniSpace = R"({
  "name": "mini",
  "family": "MBConvV3",
  "resolutions": [160, 176],
  "stem": {"kernel": 3, "stride": 2, "channels": 16, "pool_stride": 1},
  "head": {"conv_channels": 64, "fc_channels": [], "num_classes": 10},
  "units": [
    {"depth_min": 1, "depth_max": 2, "base_channels": 24, "activation": "relu",
     "blocks": ["MBConv3-3", "MBConv4-5", "MBConv6-7"]},
    {"depth_min": 1, "depth_max": 2, "base_channels": 40, "activation": "hswish",
     "blocks": ["MBConv3-3", "MBConv4-5", "MBConv6-7"]}
  ]
})";

/// One layer, one block per unit: only the resolution can change.
inline constexpr std::string_view kResolutionOnlySpace = R"({
  "name": "flat",
  "family": "MBConvV3",
  "resolutions": [160, 224],
  "units": [
    {"depth_min": 1, "depth_max": 1, "base_channels": 24, "activation": "relu", "blocks": ["MBConv3-3"]},
    {"depth_min": 1, "depth_max": 1, "base_channels": 40, "activation": "relu", "blocks": ["MBConv4-5"]}
  ]
})";

/// Nothing can change at all.
inline constexpr std::string_view kFrozenSpace = R"({
  "name": "frozen",
  "family": "MBConvV3",
  "resolutions": [224],
  "units": [
    {"depth_min": 1, "depth_max": 1, "base_channels": 24, "activation": "relu", "blocks": ["MBConv3-3"]}
  ]
})";

inline blockprof::DesignSpace mini_space() { return blockprof::parse_space_config(kMiniSpace); }

/// Evaluator that counts its invocations.
class CountingEvaluator final : public blockprof::MetricEvaluator {
 public:
  CountingEvaluator(blockprof::EvaluatorPtr inner)
      : MetricEvaluator(inner->name(), inner->direction()), inner_(std::move(inner)) {}

  double evaluate(const blockprof::Architecture& arch) const override {
    ++calls_;
    return inner_->evaluate(arch);
  }
  std::size_t calls() const { return calls_.load(); }

 private:
  blockprof::EvaluatorPtr inner_;
  mutable std::atomic<std::size_t> calls_{0};
};

/// A fresh directory under the system temp path, removed on destruction.
class TempDir {
 public:
  explicit TempDir(std::string_view tag) {
    std::random_device rd;
    path_ = std::filesystem::temp_directory_path() /
            ("blockprof-" + std::string(tag) + "-" + std::to_string(rd()) + std::to_string(rd()));
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const std::filesystem::path& path() const { return path_; }
  std::string str() const { return path_.string(); }

 private:
  std::filesystem::path path_;
};

}  // namespace fixtures
