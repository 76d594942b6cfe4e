#pragma once

#include <map>
#include <string>
#include <string_view>
#include <tuple>

#include "blockprof/design_space.hpp"
#include "blockprof/metric.hpp"

namespace blockprof {

/// Scalar lookup either per placement (additive) or per exact record.
///
/// File format: `# key: value` header lines (space, metric, direction, units,
/// kind, and for additive tables `resolution_constant: <res>=<value>` lines),
/// then a CSV header row and data rows. Additive rows are
/// `unit,layer,block_code,value`; exact rows are `arch_record_hash,value`
/// where the hash is the SHA-256 of the compact record text.
struct MetricTable {
  std::string space;
  std::string metric;
  Direction direction = Direction::Minimize;
  std::string units;
  bool additive = true;
  std::map<std::tuple<int, int, std::string>, double> placement_values;
  std::map<int, double> resolution_constants;
  std::map<std::string, double> exact_values;
};

MetricTable parse_metric_table(std::string_view text);
MetricTable load_metric_table(std::string_view path);
std::string metric_table_to_text(const MetricTable& table);

std::string record_hash(const Architecture& arch, const DesignSpace& space);

/// Throws CoverageError naming the first placement or resolution the
/// additive table lacks.
void check_table_covers(const MetricTable& table, const DesignSpace& space);

double table_evaluate(const Architecture& arch, const DesignSpace& space, const MetricTable& table);

class TableEvaluator final : public MetricEvaluator {
 public:
  TableEvaluator(DesignSpace space, MetricTable table);
  double evaluate(const Architecture& arch) const override;
  std::string parameter_text() const override;

 private:
  DesignSpace space_;
  MetricTable table_;
};

}  // namespace blockprof
