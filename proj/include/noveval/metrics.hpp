#pragma once

// R-Precision evaluation of frozen embeddings on a class-disjoint split.
//
// Every test image is used as a query against the rest of the test set.
// For a query of class c with N_c test images, the cut-off rank is
// R = N_c - 1 (the query itself is not part of its corpus), and
// R-Precision is the fraction of the top R neighbors that share class c.
// At rank R precision and recall coincide. Classes with a single test
// image have R = 0; they are skipped and reported as warnings.

#include <cstddef>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <unordered_set>
#include <vector>

#include "json.hpp"
#include "noveval/embedstore.hpp"
#include "noveval/splitgen.hpp"

namespace noveval {

// |top-R of ranked ∩ relevant| / R, with R == relevant.size().
// UndefinedMetric when R == 0.
double r_precision_query(std::span<const std::string> ranked,
                         const std::unordered_set<std::string>& relevant,
                         std::size_t r);

// |top-k of ranked ∩ relevant| / |relevant|. UndefinedMetric when relevant
// is empty; InvalidArgument when k == 0.
double recall_at_k(std::span<const std::string> ranked,
                   const std::unordered_set<std::string>& relevant,
                   std::size_t k);

struct ClassScore {
  Side side = Side::base;
  double r_precision = 0.0;  // percent
  std::size_t queries = 0;
  std::size_t class_size = 0;  // N_c in the test set

  friend bool operator==(const ClassScore&, const ClassScore&) = default;
};

struct MetricsReport {
  std::string dataset_id;
  std::string split;  // SplitSpec::descriptor()
  std::string algorithm;
  // Query-weighted means, percent. Empty when a side has no scored query.
  std::optional<double> base_r_precision;
  std::optional<double> novel_r_precision;
  std::size_t base_queries = 0;
  std::size_t novel_queries = 0;
  std::map<std::string, ClassScore> per_class;
  std::vector<std::string> warnings;

  friend bool operator==(const MetricsReport&, const MetricsReport&) = default;
};

struct EvalOptions {
  unsigned workers = 0;
  std::string algorithm;  // overrides the embedding set's own name if set
};

// Every row of test_set must be tagged test and carry a label of the split.
MetricsReport evaluate_split(const EmbeddingSet& test_set,
                             const SplitSpec& split,
                             const EvalOptions& options = {});

nlohmann::ordered_json report_to_json(const MetricsReport& report);
MetricsReport report_from_json(const nlohmann::json& doc);

enum class TableFormat { csv, markdown };
TableFormat parse_table_format(std::string_view text);

// Rounds half-up to three decimals: 65.1468 -> "65.147".
std::string format_cell(double percent);

// One row per algorithm and a Base/Novel column pair per split, both in
// order of first appearance. All reports must share one dataset.
std::string render_report(std::span<const MetricsReport> reports,
                          TableFormat format);

}  // namespace noveval
