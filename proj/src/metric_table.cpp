#include "blockprof/metric_table.hpp"

#include <charconv>
#include <filesystem>
#include <sstream>

#include "blockprof/errors.hpp"
#include "blockprof/io.hpp"

namespace blockprof {

namespace {

std::string trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return std::string(s);
}

double parse_double(const std::string& text, const std::string& where) {
  double v = 0.0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc() || ptr != text.data() + text.size()) throw ParseError(where + ": '" + text + "' is not a number");
  return v;
}

int parse_int(const std::string& text, const std::string& where) {
  int v = 0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc() || ptr != text.data() + text.size()) throw ParseError(where + ": '" + text + "' is not an integer");
  return v;
}

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    auto end = line.find(',', start);
    out.push_back(trim(std::string_view(line).substr(start, end == std::string::npos ? std::string::npos : end - start)));
    if (end == std::string::npos) break;
    start = end + 1;
  }
  return out;
}

}  // namespace

MetricTable parse_metric_table(std::string_view text) {
  MetricTable table;
  std::istringstream in{std::string(text)};
  std::string line;
  int line_no = 0;
  bool seen_columns = false;
  bool seen_kind = false;
  while (std::getline(in, line)) {
    ++line_no;
    const auto where = "metric table line " + std::to_string(line_no);
    const auto stripped = trim(line);
    if (stripped.empty()) continue;
    if (stripped.front() == '#') {
      const auto body = trim(std::string_view(stripped).substr(1));
      const auto colon = body.find(':');
      if (colon == std::string::npos) continue;
      const auto key = trim(std::string_view(body).substr(0, colon));
      const auto value = trim(std::string_view(body).substr(colon + 1));
      if (key == "space") table.space = value;
      else if (key == "metric") table.metric = value;
      else if (key == "direction") table.direction = parse_direction(value);
      else if (key == "units") table.units = value;
      else if (key == "kind") {
        if (value == "additive") table.additive = true;
        else if (value == "exact") table.additive = false;
        else throw ParseError(where + ": kind must be additive or exact");
        seen_kind = true;
      } else if (key == "resolution_constant") {
        const auto eq = value.find('=');
        if (eq == std::string::npos) throw ParseError(where + ": resolution_constant expects <resolution>=<value>");
        table.resolution_constants[parse_int(trim(value.substr(0, eq)), where)] =
            parse_double(trim(value.substr(eq + 1)), where);
      }
      continue;
    }
    const auto fields = split_csv_line(stripped);
    if (!seen_columns) {
      seen_columns = true;
      if (!seen_kind) throw ParseError(where + ": header must declare '# kind: additive|exact' before the data");
      const std::vector<std::string> expected = table.additive
                                                    ? std::vector<std::string>{"unit", "layer", "block_code", "value"}
                                                    : std::vector<std::string>{"arch_record_hash", "value"};
      if (fields != expected) throw ParseError(where + ": unexpected column header");
      continue;
    }
    if (table.additive) {
      if (fields.size() != 4) throw ParseError(where + ": expected 4 fields");
      table.placement_values[{parse_int(fields[0], where), parse_int(fields[1], where), fields[2]}] =
          parse_double(fields[3], where);
    } else {
      if (fields.size() != 2) throw ParseError(where + ": expected 2 fields");
      table.exact_values[fields[0]] = parse_double(fields[1], where);
    }
  }
  if (table.space.empty()) throw ParseError("metric table: header must declare '# space: <name>'");
  if (table.metric.empty()) throw ParseError("metric table: header must declare '# metric: <name>'");
  if (!seen_kind) throw ParseError("metric table: header must declare '# kind: additive|exact'");
  return table;
}

MetricTable load_metric_table(std::string_view path) {
  return parse_metric_table(read_text_file(std::filesystem::path(path)));
}

std::string metric_table_to_text(const MetricTable& table) {
  std::string out;
  out += "# space: " + table.space + "\n";
  out += "# metric: " + table.metric + "\n";
  out += "# direction: " + std::string(to_string(table.direction)) + "\n";
  out += "# units: " + table.units + "\n";
  out += std::string("# kind: ") + (table.additive ? "additive" : "exact") + "\n";
  if (table.additive) {
    for (const auto& [res, v] : table.resolution_constants) {
      out += "# resolution_constant: " + std::to_string(res) + "=" + format_number(v) + "\n";
    }
    out += "unit,layer,block_code,value\n";
    for (const auto& [key, v] : table.placement_values) {
      const auto& [u, l, code] = key;
      out += std::to_string(u) + "," + std::to_string(l) + "," + code + "," + format_number(v) + "\n";
    }
  } else {
    out += "arch_record_hash,value\n";
    for (const auto& [hash, v] : table.exact_values) out += hash + "," + format_number(v) + "\n";
  }
  return out;
}

std::string record_hash(const Architecture& arch, const DesignSpace& space) {
  return sha256_hex(serialize(arch, space));
}

void check_table_covers(const MetricTable& table, const DesignSpace& space) {
  if (table.space != space.base) {
    throw CoverageError("table declares space '" + table.space + "' but is used with '" + space.base + "'");
  }
  if (!table.additive) return;
  for (int r : space.resolutions) {
    if (!table.resolution_constants.contains(r)) {
      throw CoverageError("additive table lacks a resolution constant for " + std::to_string(r));
    }
  }
  for (const auto& p : enumerate_placements(space)) {
    const auto code = placement_code(space, p);
    if (!table.placement_values.contains({p.unit, p.layer, code})) {
      throw CoverageError("additive table lacks placement (" + std::to_string(p.unit) + "," + std::to_string(p.layer) +
                          "," + code + ")");
    }
  }
}

double table_evaluate(const Architecture& arch, const DesignSpace& space, const MetricTable& table) {
  if (!table.additive) {
    const auto hash = record_hash(arch, space);
    auto it = table.exact_values.find(hash);
    if (it == table.exact_values.end()) throw CoverageError("exact table has no entry for record " + hash);
    return it->second;
  }
  auto rc = table.resolution_constants.find(arch.resolution);
  if (rc == table.resolution_constants.end()) {
    throw CoverageError("additive table lacks a resolution constant for " + std::to_string(arch.resolution));
  }
  double total = rc->second;
  for (std::size_t u = 0; u < arch.blocks.size(); ++u) {
    for (std::size_t l = 0; l < arch.blocks[u].size(); ++l) {
      Placement p{static_cast<int>(u + 1), static_cast<int>(l + 1), arch.blocks[u][l], std::nullopt};
      if (!arch.channel_ratios.empty()) p.channel_ratio = arch.channel_ratios[u];
      const auto code = placement_code(space, p);
      auto it = table.placement_values.find({p.unit, p.layer, code});
      if (it == table.placement_values.end()) {
        throw CoverageError("additive table lacks placement (" + std::to_string(p.unit) + "," +
                            std::to_string(p.layer) + "," + code + ")");
      }
      total += it->second;
    }
  }
  return total;
}

TableEvaluator::TableEvaluator(DesignSpace space, MetricTable table)
    : MetricEvaluator(table.metric, table.direction, table.units), space_(std::move(space)), table_(std::move(table)) {
  check_table_covers(table_, space_);
}

double TableEvaluator::evaluate(const Architecture& arch) const { return table_evaluate(arch, space_, table_); }

std::string TableEvaluator::parameter_text() const { return metric_table_to_text(table_); }

}  // namespace blockprof
