#include "noveval/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <unordered_map>

#include "noveval/errors.hpp"
#include "noveval/retrieval.hpp"

namespace noveval {

double r_precision_query(std::span<const std::string> ranked,
                         const std::unordered_set<std::string>& relevant,
                         std::size_t r) {
  if (r == 0) {
    throw UndefinedMetric("R-Precision is undefined for R = 0");
  }
  if (r != relevant.size()) {
    throw InvalidArgument("R must equal the number of relevant items");
  }
  if (ranked.size() < r) {
    throw InvalidArgument("ranked list shorter than R");
  }
  std::size_t hits = 0;
  for (std::size_t i = 0; i < r; ++i) hits += relevant.contains(ranked[i]);
  return static_cast<double>(hits) / static_cast<double>(r);
}

double recall_at_k(std::span<const std::string> ranked,
                   const std::unordered_set<std::string>& relevant,
                   std::size_t k) {
  if (k == 0) throw InvalidArgument("k must be at least 1");
  if (relevant.empty()) {
    throw UndefinedMetric("recall is undefined without relevant items");
  }
  const std::size_t top = std::min(k, ranked.size());
  std::size_t hits = 0;
  for (std::size_t i = 0; i < top; ++i) hits += relevant.contains(ranked[i]);
  return static_cast<double>(hits) / static_cast<double>(relevant.size());
}

MetricsReport evaluate_split(const EmbeddingSet& test_set,
                             const SplitSpec& split,
                             const EvalOptions& options) {
  const std::size_t n = test_set.rows;
  for (std::size_t i = 0; i < n; ++i) {
    if (test_set.tags[i] != SampleTag::test) {
      throw InvalidArgument("row " + std::to_string(i) +
                            " is tagged train; evaluation takes test rows only");
    }
  }

  // Dense class ids in order of first appearance.
  std::unordered_map<std::string_view, std::uint32_t> class_ids;
  std::vector<std::string_view> class_names;
  std::vector<std::uint32_t> label(n);
  for (std::size_t i = 0; i < n; ++i) {
    auto [it, fresh] = class_ids.try_emplace(
        test_set.labels[i], static_cast<std::uint32_t>(class_names.size()));
    if (fresh) {
      split.side_of(test_set.labels[i]);  // throws UnknownLabel
      class_names.push_back(test_set.labels[i]);
    }
    label[i] = it->second;
  }
  std::vector<std::size_t> class_size(class_names.size(), 0);
  for (auto c : label) ++class_size[c];

  MetricsReport report;
  report.dataset_id = split.dataset_id;
  report.split = split.descriptor();
  report.algorithm =
      options.algorithm.empty() ? test_set.algorithm : options.algorithm;

  std::vector<std::size_t> cutoffs(n);
  std::vector<std::size_t> excluded(n);
  for (std::size_t i = 0; i < n; ++i) {
    cutoffs[i] = class_size[label[i]] - 1;
    excluded[i] = i;
  }

  std::vector<double> precision(n, 0.0);
  if (n > 0) {
    const auto unit = normalize_rows(MatrixView(test_set));
    const MatrixView view(unit, n, test_set.dim);
    search_neighbors(view, view, SearchPlan{cutoffs, excluded, options.workers},
                     [&](std::size_t q, std::span<const std::uint32_t> rows,
                         std::span<const double>) {
                       if (rows.empty()) return;
                       std::size_t hits = 0;
                       for (auto r : rows) hits += label[r] == label[q];
                       precision[q] = static_cast<double>(hits) /
                                      static_cast<double>(rows.size());
                     });
  }

  // Sequential sums in row order keep the aggregate independent of workers.
  std::vector<double> class_sum(class_names.size(), 0.0);
  double side_sum[2] = {0.0, 0.0};
  std::size_t side_count[2] = {0, 0};
  for (std::size_t i = 0; i < n; ++i) {
    if (cutoffs[i] == 0) continue;
    class_sum[label[i]] += precision[i];
    const auto side = static_cast<std::size_t>(split.side_of(class_names[label[i]]));
    side_sum[side] += precision[i];
    ++side_count[side];
  }

  std::vector<std::string> skipped;
  for (std::size_t c = 0; c < class_names.size(); ++c) {
    const std::string name(class_names[c]);
    if (class_size[c] < 2) {
      skipped.push_back(name);
      continue;
    }
    ClassScore score;
    score.side = split.side_of(name);
    score.queries = class_size[c];
    score.class_size = class_size[c];
    score.r_precision = 100.0 * class_sum[c] / static_cast<double>(class_size[c]);
    report.per_class.emplace(name, score);
  }
  std::sort(skipped.begin(), skipped.end());
  for (const auto& name : skipped) {
    report.warnings.push_back("class '" + name +
                              "' has a single test sample; skipped");
  }

  report.base_queries = side_count[0];
  report.novel_queries = side_count[1];
  if (side_count[0] > 0) {
    report.base_r_precision = 100.0 * side_sum[0] / side_count[0];
  }
  if (side_count[1] > 0) {
    report.novel_r_precision = 100.0 * side_sum[1] / side_count[1];
  }
  return report;
}

// --- JSON --------------------------------------------------------------------

nlohmann::ordered_json report_to_json(const MetricsReport& report) {
  using nlohmann::ordered_json;
  ordered_json doc;
  doc["dataset"] = report.dataset_id;
  doc["split"] = report.split;
  doc["algorithm"] = report.algorithm;
  auto cell = [](const std::optional<double>& v) {
    return v ? ordered_json(*v) : ordered_json(nullptr);
  };
  doc["base_r_precision"] = cell(report.base_r_precision);
  doc["novel_r_precision"] = cell(report.novel_r_precision);
  doc["base_queries"] = report.base_queries;
  doc["novel_queries"] = report.novel_queries;
  doc["protocol"] = {{"metric", "r_precision"},
                     {"cutoff", "class_size_minus_one"},
                     {"self_excluded", true},
                     {"aggregation", "per_query"},
                     {"scale", "percent"}};
  ordered_json per_class = ordered_json::object();
  for (const auto& [name, s] : report.per_class) {
    per_class[name] = {{"side", std::string(to_string(s.side))},
                       {"r_precision", s.r_precision},
                       {"queries", s.queries},
                       {"class_size", s.class_size}};
  }
  doc["per_class"] = std::move(per_class);
  doc["warnings"] = report.warnings;
  return doc;
}

MetricsReport report_from_json(const nlohmann::json& doc) {
  MetricsReport r;
  try {
    r.dataset_id = doc.at("dataset").get<std::string>();
    r.split = doc.at("split").get<std::string>();
    r.algorithm = doc.at("algorithm").get<std::string>();
    auto cell = [&](const char* key) -> std::optional<double> {
      const auto& v = doc.at(key);
      if (v.is_null()) return std::nullopt;
      return v.get<double>();
    };
    r.base_r_precision = cell("base_r_precision");
    r.novel_r_precision = cell("novel_r_precision");
    r.base_queries = doc.value("base_queries", std::size_t{0});
    r.novel_queries = doc.value("novel_queries", std::size_t{0});
    if (doc.contains("per_class")) {
      for (const auto& [name, v] : doc.at("per_class").items()) {
        ClassScore s;
        s.side = v.at("side").get<std::string>() == "base" ? Side::base
                                                           : Side::novel;
        s.r_precision = v.at("r_precision").get<double>();
        s.queries = v.at("queries").get<std::size_t>();
        s.class_size = v.at("class_size").get<std::size_t>();
        r.per_class.emplace(name, s);
      }
    }
    if (doc.contains("warnings")) {
      r.warnings = doc.at("warnings").get<std::vector<std::string>>();
    }
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(std::string("malformed report: ") + e.what());
  }
  for (const auto& v : {r.base_r_precision, r.novel_r_precision}) {
    if (v && !(*v >= 0.0 && *v <= 100.0)) {
      throw FormatError("report cell outside [0, 100]");
    }
  }
  return r;
}

// --- tables ------------------------------------------------------------------

TableFormat parse_table_format(std::string_view text) {
  if (text == "csv") return TableFormat::csv;
  if (text == "markdown" || text == "md") return TableFormat::markdown;
  throw InvalidArgument("unknown table format '" + std::string(text) +
                        "' (valid: csv, markdown)");
}

std::string format_cell(double percent) {
  const auto scaled =
      static_cast<long long>(std::floor(percent * 1000.0 + 0.5));
  const bool negative = scaled < 0;
  const auto mag = negative ? -scaled : scaled;
  std::string frac = std::to_string(mag % 1000);
  frac.insert(0, 3 - frac.size(), '0');
  return (negative ? "-" : "") + std::to_string(mag / 1000) + "." + frac;
}

namespace {

std::string csv_field(const std::string& text) {
  if (text.find_first_of(",\"\n") == std::string::npos) return text;
  std::string out = "\"";
  for (char ch : text) {
    if (ch == '"') out += '"';
    out += ch;
  }
  return out + "\"";
}

std::string cell_text(const std::optional<double>& v) {
  return v ? format_cell(*v) : "n/a";
}

}  // namespace

std::string render_report(std::span<const MetricsReport> reports,
                          TableFormat format) {
  if (reports.empty()) throw InvalidArgument("no reports to render");
  const auto& dataset = reports.front().dataset_id;
  std::vector<std::string> algorithms;
  std::vector<std::string> splits;
  std::map<std::pair<std::string, std::string>, const MetricsReport*> cells;
  for (const auto& r : reports) {
    if (r.dataset_id != dataset) {
      throw InvalidArgument("reports mix datasets '" + dataset + "' and '" +
                            r.dataset_id + "'");
    }
    if (std::find(algorithms.begin(), algorithms.end(), r.algorithm) ==
        algorithms.end()) {
      algorithms.push_back(r.algorithm);
    }
    if (std::find(splits.begin(), splits.end(), r.split) == splits.end()) {
      splits.push_back(r.split);
    }
    if (!cells.emplace(std::pair{r.algorithm, r.split}, &r).second) {
      throw InvalidArgument("two reports for algorithm '" + r.algorithm +
                            "' on split '" + r.split + "'");
    }
  }

  std::ostringstream out;
  if (format == TableFormat::csv) {
    out << "algorithm";
    for (const auto& s : splits) {
      out << ',' << csv_field(dataset + "-" + s + " base") << ','
          << csv_field(dataset + "-" + s + " novel");
    }
    out << '\n';
    for (const auto& a : algorithms) {
      out << csv_field(a);
      for (const auto& s : splits) {
        auto it = cells.find({a, s});
        if (it == cells.end()) {
          out << ",,";
        } else {
          out << ',' << cell_text(it->second->base_r_precision) << ','
              << cell_text(it->second->novel_r_precision);
        }
      }
      out << '\n';
    }
    return out.str();
  }

  out << "| Algo |";
  for (const auto& s : splits) {
    out << ' ' << dataset << '-' << s << " Base | " << dataset << '-' << s
        << " Novel |";
  }
  out << "\n|---|";
  for (std::size_t i = 0; i < splits.size(); ++i) out << "---:|---:|";
  out << '\n';
  for (const auto& a : algorithms) {
    out << "| " << a << " |";
    for (const auto& s : splits) {
      auto it = cells.find({a, s});
      if (it == cells.end()) {
        out << " - | - |";
      } else {
        out << ' ' << cell_text(it->second->base_r_precision) << " | "
            << cell_text(it->second->novel_r_precision) << " |";
      }
    }
    out << '\n';
  }
  return out.str();
}

}  // namespace noveval
