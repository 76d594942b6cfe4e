#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <string_view>

// Every default used by the command line tool lives here.
namespace blockprof::defaults {

inline constexpr std::string_view kVersion = "0.1.0";

inline constexpr std::uint64_t kSeed = 0;
inline constexpr int kWorkers = 1;
inline constexpr std::string_view kOutputDir = "blockprof-out";

// Profiling.
inline constexpr std::size_t kBlockSamples = 1000;      // per placement, block means
inline constexpr std::size_t kPlacementSamples = 10000;  // per placement, relative stats
inline constexpr std::array<double, 2> kPercentiles = {5.0, 95.0};

// Search.
inline constexpr int kGenerations = 10;
inline constexpr int kPopulation = 100;
inline constexpr int kChildren = 200;
inline constexpr int kRepeats = 1;
inline constexpr std::string_view kParetoObjectives = "acc:max,npu:min";
inline constexpr std::string_view kMaxObjectives = "acc:max";
inline constexpr std::size_t kFrontierGrid = 100;

// Environment overrides.
inline constexpr const char* kWorkersEnv = "BLOCKPROF_WORKERS";
inline constexpr const char* kOutputEnv = "BLOCKPROF_OUT";

}  // namespace blockprof::defaults
