#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <string>
#include <unordered_set>
#include <vector>

#include "noveval/embedstore.hpp"
#include "noveval/errors.hpp"
#include "noveval/metrics.hpp"
#include "noveval/retrieval.hpp"
#include "noveval/split_io.hpp"
#include "noveval/splitgen.hpp"

namespace py = pybind11;
using namespace noveval;

namespace {

using FloatArray = py::array_t<float, py::array::c_style | py::array::forcecast>;

// Plain dict <-> JSON document, through the json module so the shapes seen
// from Python match the files on disk.
py::object to_python(const nlohmann::ordered_json& doc) {
  return py::module_::import("json").attr("loads")(doc.dump());
}

nlohmann::json from_python(const py::object& obj) {
  const auto text = py::module_::import("json").attr("dumps")(obj).cast<std::string>();
  return nlohmann::json::parse(text);
}

ClassTaxonomy taxonomy_arg(const py::object& obj) {
  return taxonomy_from_json(from_python(obj));
}

SplitSpec split_arg(const py::object& obj) { return split_from_json(from_python(obj)); }

MatrixView view_of(const FloatArray& a) {
  if (a.ndim() != 2) throw InvalidArgument("expected a 2-d array");
  const auto rows = static_cast<std::size_t>(a.shape(0));
  const auto dim = static_cast<std::size_t>(a.shape(1));
  return {std::span<const float>(a.data(), rows * dim), rows, dim};
}

EmbeddingSet make_set(const FloatArray& matrix, std::vector<std::string> ids,
                      std::vector<std::string> labels,
                      const std::vector<std::string>& tags) {
  const auto view = view_of(matrix);
  EmbeddingSet set;
  set.rows = view.rows;
  set.dim = view.dim;
  set.values.assign(view.values.begin(), view.values.end());
  set.ids = std::move(ids);
  set.labels = std::move(labels);
  for (const auto& t : tags) set.tags.push_back(parse_sample_tag(t));
  return set;
}

FloatArray to_array(const std::vector<float>& values, std::size_t rows,
                    std::size_t dim) {
  FloatArray out({rows, dim});
  std::copy(values.begin(), values.end(), out.mutable_data());
  return out;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Exact cosine retrieval and R-Precision evaluation on class-disjoint splits.";

  auto base_error = py::register_exception<Error>(m, "Error", PyExc_RuntimeError);
  py::register_exception<InvalidArgument>(m, "InvalidArgument", PyExc_ValueError);
  py::register_exception<NotFound>(m, "NotFound", PyExc_KeyError);
  py::register_exception<IoError>(m, "IoError", PyExc_OSError);
  py::register_exception<FormatError>(m, "FormatError", base_error.ptr());
  py::register_exception<ValidationError>(m, "ValidationError", base_error.ptr());
  py::register_exception<UndefinedMetric>(m, "UndefinedMetric", base_error.ptr());

  // Splits.
  m.def("builtin_dataset_ids", &builtin_dataset_ids);
  m.def("builtin_taxonomy", [](const std::string& dataset) {
    return to_python(taxonomy_to_json(builtin_taxonomy(dataset)));
  });
  m.def(
      "builtin_split",
      [](const std::string& dataset, const std::string& kind) {
        return to_python(split_to_json(builtin_split(dataset, parse_builtin_kind(kind))));
      },
      py::arg("dataset"), py::arg("kind"));
  m.def(
      "random_split",
      [](const py::object& taxonomy, std::size_t n_base, std::uint64_t seed) {
        return to_python(split_to_json(random_split(taxonomy_arg(taxonomy), n_base, seed)));
      },
      py::arg("taxonomy"), py::arg("n_base"), py::arg("seed"));
  m.def(
      "stratified_random_split",
      [](const py::object& taxonomy, std::size_t n_base, std::uint64_t seed) {
        return to_python(
            split_to_json(stratified_random_split(taxonomy_arg(taxonomy), n_base, seed)));
      },
      py::arg("taxonomy"), py::arg("n_base"), py::arg("seed"));
  m.def(
      "semantic_split",
      [](const py::object& taxonomy, const std::vector<std::string>& base_groups) {
        return to_python(split_to_json(semantic_split(taxonomy_arg(taxonomy), base_groups)));
      },
      py::arg("taxonomy"), py::arg("base_groups"));
  m.def(
      "partition_samples",
      [](const std::vector<std::tuple<std::string, std::string, std::string>>& samples,
         const py::object& split) {
        std::vector<Sample> in;
        in.reserve(samples.size());
        for (const auto& [id, label, tag] : samples) {
          in.push_back({id, label, parse_sample_tag(tag)});
        }
        const auto p = partition_samples(in, split_arg(split));
        auto ids = [](const std::vector<Sample>& v) {
          std::vector<std::string> out;
          for (const auto& s : v) out.push_back(s.id);
          return out;
        };
        py::dict out;
        out["base_train"] = ids(p.base_train);
        out["novel_train"] = ids(p.novel_train);
        out["base_test"] = ids(p.base_test);
        out["novel_test"] = ids(p.novel_test);
        return out;
      },
      py::arg("samples"), py::arg("split"));

  // Embedding files.
  m.def(
      "write_embeddings",
      [](const std::string& path, const FloatArray& matrix, std::vector<std::string> ids,
         std::vector<std::string> labels, const std::vector<std::string>& tags,
         const std::string& dataset, const std::string& split_file,
         const std::string& algorithm) {
        auto set = make_set(matrix, std::move(ids), std::move(labels), tags);
        set.dataset = dataset;
        set.split_file = split_file;
        set.algorithm = algorithm;
        return write_embedding_set(set, path);
      },
      py::arg("path"), py::arg("matrix"), py::arg("ids"), py::arg("labels"), py::arg("tags"),
      py::arg("dataset") = "", py::arg("split_file") = "", py::arg("algorithm") = "");
  m.def(
      "read_embeddings",
      [](const std::string& path) {
        const auto set = read_embedding_set(path);
        py::dict out;
        out["matrix"] = to_array(set.values, set.rows, set.dim);
        out["ids"] = set.ids;
        out["labels"] = set.labels;
        std::vector<std::string> tags;
        for (auto t : set.tags) tags.emplace_back(to_string(t));
        out["tags"] = tags;
        out["dataset"] = set.dataset;
        out["split_file"] = set.split_file;
        out["algorithm"] = set.algorithm;
        return out;
      },
      py::arg("path"));

  // Retrieval.
  m.def(
      "normalize_rows",
      [](const FloatArray& matrix) {
        const auto view = view_of(matrix);
        return to_array(normalize_rows(view), view.rows, view.dim);
      },
      py::arg("matrix"));
  m.def(
      "search",
      [](const FloatArray& queries, const FloatArray& corpus,
         const std::vector<std::size_t>& cutoffs,
         std::optional<std::vector<long long>> exclude, unsigned workers) {
        const auto q = view_of(queries);
        const auto c = view_of(corpus);
        std::vector<std::size_t> excluded;
        if (exclude) {
          for (auto e : *exclude) excluded.push_back(e < 0 ? kNoExclusion : std::size_t(e));
        }
        std::vector<std::pair<std::vector<std::uint32_t>, std::vector<double>>> hits(q.rows);
        {
          py::gil_scoped_release release;
          search_neighbors(q, c, SearchPlan{cutoffs, excluded, workers},
                           [&](std::size_t i, std::span<const std::uint32_t> rows,
                               std::span<const double> scores) {
                             hits[i].first.assign(rows.begin(), rows.end());
                             hits[i].second.assign(scores.begin(), scores.end());
                           });
        }
        py::list out;
        for (auto& [rows, scores] : hits) {
          out.append(py::make_tuple(py::array_t<std::uint32_t>(rows.size(), rows.data()),
                                    py::array_t<double>(scores.size(), scores.data())));
        }
        return out;
      },
      py::arg("queries"), py::arg("corpus"), py::arg("cutoffs"),
      py::arg("exclude") = py::none(), py::arg("workers") = 0u,
      "Exact top-k by cosine score over pre-normalized rows. Returns one "
      "(rows, scores) pair per query.");

  // Metrics.
  m.def(
      "r_precision_query",
      [](const std::vector<std::string>& ranked,
         const std::unordered_set<std::string>& relevant, std::size_t r) {
        return r_precision_query(ranked, relevant, r);
      },
      py::arg("ranked"), py::arg("relevant"), py::arg("r"));
  m.def(
      "recall_at_k",
      [](const std::vector<std::string>& ranked,
         const std::unordered_set<std::string>& relevant, std::size_t k) {
        return recall_at_k(ranked, relevant, k);
      },
      py::arg("ranked"), py::arg("relevant"), py::arg("k"));
  m.def(
      "evaluate_split",
      [](const FloatArray& matrix, std::vector<std::string> labels, const py::object& split,
         const std::string& algorithm, unsigned workers) {
        const auto view = view_of(matrix);
        std::vector<std::string> ids(view.rows);
        for (std::size_t i = 0; i < view.rows; ++i) ids[i] = std::to_string(i);
        const auto set = make_set(matrix, std::move(ids), std::move(labels),
                                  std::vector<std::string>(view.rows, "test"));
        const auto spec = split_arg(split);
        EvalOptions options{workers, algorithm};
        MetricsReport report;
        {
          py::gil_scoped_release release;
          report = evaluate_split(set, spec, options);
        }
        return to_python(report_to_json(report));
      },
      py::arg("matrix"), py::arg("labels"), py::arg("split"), py::arg("algorithm") = "",
      py::arg("workers") = 0u);
  m.def(
      "render_report",
      [](const std::vector<py::object>& reports, const std::string& format) {
        std::vector<MetricsReport> parsed;
        for (const auto& r : reports) parsed.push_back(report_from_json(from_python(r)));
        return render_report(parsed, parse_table_format(format));
      },
      py::arg("reports"), py::arg("format") = "markdown");
}
