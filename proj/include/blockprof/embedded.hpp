#pragma once

#include <optional>
#include <string_view>
#include <vector>

namespace blockprof {

/// Files shipped under data/ and compiled into the library, keyed by their
/// relative path (e.g. "spaces/ofa.json").
std::optional<std::string_view> embedded_file(std::string_view key);
std::vector<std::string_view> embedded_files();

}  // namespace blockprof
