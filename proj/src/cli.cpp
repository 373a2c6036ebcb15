#include "noveval/cli.hpp"

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <optional>
#include <sstream>

#include "CLI11.hpp"
#include "noveval/embedstore.hpp"
#include "noveval/errors.hpp"
#include "noveval/metrics.hpp"
#include "noveval/split_io.hpp"
#include "noveval/splitgen.hpp"

namespace noveval::cli {
namespace fs = std::filesystem;

namespace {

class UsageError : public Error {
 public:
  using Error::Error;
};

class DataMismatch : public Error {
 public:
  using Error::Error;
};

// Fills options that were not given on the command line from a JSON config
// document. Keys are long option names; a section named after the
// subcommand takes precedence over top-level keys.
void apply_config(CLI::App& sub, const std::string& config_path) {
  if (config_path.empty()) return;
  const auto doc = read_json_file(config_path);
  if (!doc.is_object()) throw FormatError("config must be a JSON object");
  const auto& section =
      doc.contains(sub.get_name()) && doc.at(sub.get_name()).is_object()
          ? doc.at(sub.get_name())
          : doc;
  for (CLI::Option* opt : sub.get_options()) {
    if (opt->count() > 0 || opt->get_lnames().empty()) continue;
    const auto& name = opt->get_lnames().front();
    if (name == "config" || name == "help") continue;
    const nlohmann::json* value = nullptr;
    if (section.contains(name)) {
      value = &section.at(name);
    } else if (&section != &doc && doc.contains(name)) {
      value = &doc.at(name);
    }
    if (!value || value->is_null()) continue;
    auto as_text = [](const nlohmann::json& v) {
      return v.is_string() ? v.get<std::string>() : v.dump();
    };
    if (value->is_array()) {
      for (const auto& item : *value) opt->add_result(as_text(item));
    } else {
      opt->add_result(as_text(*value));
    }
    try {
      opt->run_callback();
    } catch (const CLI::Error& e) {
      throw UsageError("config key '" + name + "': " + e.what());
    }
  }
}

unsigned default_workers() {
  const char* env = std::getenv("NOVEVAL_WORKERS");
  if (!env || !*env) return 0;
  try {
    std::size_t used = 0;
    const long v = std::stol(env, &used);
    if (used == std::string(env).size() && v >= 0) return static_cast<unsigned>(v);
  } catch (const std::exception&) {
  }
  throw UsageError(std::string("NOVEVAL_WORKERS must be a non-negative "
                               "integer, got '") + env + "'");
}

void emit(const std::string& text, const std::string& path, std::ostream& out) {
  if (path.empty() || path == "-") {
    out << text;
  } else {
    write_file_atomic(path, text);
  }
}

// --- split -------------------------------------------------------------------

struct SplitArgs {
  std::string config;
  std::string builtin;
  std::string kind;
  std::string taxonomy;
  std::string method;
  std::size_t n_base = 0;
  std::optional<std::uint64_t> seed;
  std::vector<std::string> base_groups;
  std::string output;
};

SplitSpec make_split(const SplitArgs& a) {
  if (a.builtin.empty() == a.taxonomy.empty()) {
    throw UsageError("give exactly one of --builtin or --taxonomy");
  }
  if (!a.builtin.empty()) {
    if (a.kind.empty()) {
      throw UsageError("--builtin needs --kind (valid kinds: random, semantic)");
    }
    return builtin_split(a.builtin, parse_builtin_kind(a.kind));
  }
  const auto taxonomy = load_taxonomy(a.taxonomy);
  if (a.method.empty()) {
    throw UsageError(
        "--taxonomy needs --method (random, stratified_random, semantic)");
  }
  switch (parse_split_method(a.method)) {
    case SplitMethod::random:
    case SplitMethod::stratified_random: {
      if (!a.seed) throw UsageError("--method " + a.method + " needs --seed");
      if (a.n_base == 0) throw UsageError("--method " + a.method + " needs --n-base");
      return a.method == "random"
                 ? random_split(taxonomy, a.n_base, *a.seed)
                 : stratified_random_split(taxonomy, a.n_base, *a.seed);
    }
    case SplitMethod::semantic:
      if (a.base_groups.empty()) {
        throw UsageError("--method semantic needs --base-groups");
      }
      return semantic_split(taxonomy, a.base_groups);
    case SplitMethod::builtin:
      break;
  }
  throw UsageError("use --builtin for builtin splits");
}

int cmd_split(const SplitArgs& a, std::ostream& out) {
  const auto split = make_split(a);
  const auto text = render_json(split_to_json(split));
  if (a.output.empty() || a.output == "-") {
    out << text;
    return kExitOk;
  }
  write_file_atomic(a.output, text);
  out << "dataset=" << split.dataset_id << " method=" << to_string(split.method);
  if (split.kind) out << " kind=" << to_string(*split.kind);
  if (split.seed) out << " seed=" << *split.seed;
  out << " base=" << split.base.size() << " novel=" << split.novel.size()
      << '\n';
  return kExitOk;
}

// --- eval --------------------------------------------------------------------

struct EvalArgs {
  std::string config;
  std::string embeddings;
  std::string split;
  std::string builtin;
  std::string kind;
  std::string algorithm;
  std::string output;
  std::string table;
  std::string format = "markdown";
  std::optional<unsigned> workers;
};

int cmd_eval(const EvalArgs& a, std::ostream& out, std::ostream& err) {
  if (a.embeddings.empty()) throw UsageError("eval needs --embeddings");
  if (a.split.empty() == a.builtin.empty()) {
    throw UsageError("give exactly one split source: --split or --builtin");
  }
  const auto format = parse_table_format(a.format);
  SplitSpec split;
  if (!a.split.empty()) {
    split = load_split(a.split);
  } else {
    if (a.kind.empty()) {
      throw UsageError("--builtin needs --kind (valid kinds: random, semantic)");
    }
    split = builtin_split(a.builtin, parse_builtin_kind(a.kind));
  }
  const unsigned workers = a.workers ? *a.workers : default_workers();

  const auto all = read_embedding_set(a.embeddings);
  if (!all.dataset.empty() && all.dataset != split.dataset_id) {
    throw DataMismatch("embeddings are for dataset '" + all.dataset +
                       "' but the split is for '" + split.dataset_id + "'");
  }
  std::vector<std::size_t> test_rows;
  for (std::size_t i = 0; i < all.rows; ++i) {
    if (all.tags[i] == SampleTag::test) test_rows.push_back(i);
  }
  if (test_rows.size() != all.rows) {
    err << "ignored " << all.rows - test_rows.size()
        << " train-tagged row(s); evaluating " << test_rows.size()
        << " test row(s)\n";
  }
  const auto test_set = all.select(test_rows);

  EvalOptions options;
  options.workers = workers;
  options.algorithm = a.algorithm;
  const auto report = evaluate_split(test_set, split, options);
  for (const auto& w : report.warnings) err << "warning: " << w << '\n';

  if (!a.output.empty()) {
    write_file_atomic(a.output, render_json(report_to_json(report)));
  }
  emit(render_report(std::span(&report, 1), format), a.table, out);
  return kExitOk;
}

// --- report ------------------------------------------------------------------

struct ReportArgs {
  std::string config;
  std::vector<std::string> inputs;
  std::string format = "markdown";
  std::string output;
};

int cmd_report(const ReportArgs& a, std::ostream& out) {
  if (a.inputs.empty()) throw UsageError("report needs at least one report file");
  const auto format = parse_table_format(a.format);
  std::vector<MetricsReport> reports;
  for (const auto& path : a.inputs) {
    reports.push_back(report_from_json(read_json_file(path)));
  }
  for (const auto& r : reports) {
    if (r.dataset_id != reports.front().dataset_id) {
      throw DataMismatch("reports mix datasets '" +
                         reports.front().dataset_id + "' and '" +
                         r.dataset_id + "'");
    }
  }
  emit(render_report(reports, format), a.output, out);
  return kExitOk;
}

// --- dump-builtin ------------------------------------------------------------

struct DumpArgs {
  std::string config;
  std::string dataset;
  std::string what = "taxonomy";
  std::string output;
  bool list = false;
};

int cmd_dump(const DumpArgs& a, std::ostream& out) {
  if (a.list) {
    for (const auto& id : builtin_dataset_ids()) out << id << '\n';
    return kExitOk;
  }
  if (a.dataset.empty()) throw UsageError("dump-builtin needs --dataset");
  std::string text;
  if (a.what == "taxonomy") {
    text = render_json(taxonomy_to_json(builtin_taxonomy(a.dataset)));
  } else if (a.what == "random" || a.what == "semantic") {
    text = render_json(
        split_to_json(builtin_split(a.dataset, parse_builtin_kind(a.what))));
  } else {
    throw UsageError("--what must be taxonomy, random or semantic");
  }
  emit(text, a.output, out);
  return kExitOk;
}

}  // namespace

int run(std::span<const std::string> args, std::ostream& out,
        std::ostream& err) {
  CLI::App app{"Novel-class retrieval benchmark: splits, evaluation, reports",
               "noveval"};
  app.require_subcommand(1);

  SplitArgs split_args;
  auto* split = app.add_subcommand("split", "Generate a base/novel class split");
  split->add_option("--config", split_args.config, "JSON config mirroring flags");
  split->add_option("--builtin", split_args.builtin, "Builtin dataset id");
  split->add_option("--kind", split_args.kind, "Builtin split kind: random|semantic");
  split->add_option("--taxonomy", split_args.taxonomy, "Taxonomy JSON file");
  split->add_option("--method", split_args.method,
                    "random|stratified_random|semantic");
  split->add_option("--n-base", split_args.n_base, "Number of base classes");
  split->add_option("--seed", split_args.seed, "Seed for randomized methods");
  split->add_option("--base-groups", split_args.base_groups,
                    "Superclasses kept as base (semantic)")
      ->delimiter(',');
  split->add_option("-o,--output", split_args.output, "Output split JSON");

  EvalArgs eval_args;
  auto* eval = app.add_subcommand("eval", "Evaluate an embedding file on a split");
  eval->add_option("--config", eval_args.config, "JSON config mirroring flags");
  eval->add_option("--embeddings", eval_args.embeddings, "Embedding file (.nveb)");
  eval->add_option("--split", eval_args.split, "Split JSON file");
  eval->add_option("--builtin", eval_args.builtin, "Builtin dataset id");
  eval->add_option("--kind", eval_args.kind, "Builtin split kind");
  eval->add_option("--algorithm", eval_args.algorithm, "Row label for the table");
  eval->add_option("-o,--output", eval_args.output, "Report JSON output");
  eval->add_option("--table", eval_args.table, "Rendered table output (default stdout)");
  eval->add_option("--format", eval_args.format, "csv|markdown");
  eval->add_option("--workers", eval_args.workers,
                   "Worker threads, 0 = all cores (default $NOVEVAL_WORKERS)");

  ReportArgs report_args;
  auto* report = app.add_subcommand("report", "Merge report JSON files into one table");
  report->add_option("--config", report_args.config, "JSON config mirroring flags");
  report->add_option("inputs", report_args.inputs, "Report JSON files");
  report->add_option("--format", report_args.format, "csv|markdown");
  report->add_option("-o,--output", report_args.output, "Table output (default stdout)");

  DumpArgs dump_args;
  auto* dump = app.add_subcommand("dump-builtin", "Print shipped taxonomies and splits");
  dump->add_option("--config", dump_args.config, "JSON config mirroring flags");
  dump->add_option("--dataset", dump_args.dataset, "cifar10|cifar100|imagenet100");
  dump->add_option("--what", dump_args.what, "taxonomy|random|semantic");
  dump->add_option("-o,--output", dump_args.output, "Output file (default stdout)");
  dump->add_flag("--list", dump_args.list, "List builtin datasets");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  }

  try {
    if (split->parsed()) {
      apply_config(*split, split_args.config);
      return cmd_split(split_args, out);
    }
    if (eval->parsed()) {
      apply_config(*eval, eval_args.config);
      return cmd_eval(eval_args, out, err);
    }
    if (report->parsed()) {
      apply_config(*report, report_args.config);
      return cmd_report(report_args, out);
    }
    apply_config(*dump, dump_args.config);
    return cmd_dump(dump_args, out);
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const UnknownLabel& e) {
    err << "data mismatch: label '" << e.label() << "' is not in the split\n";
    return kExitMismatch;
  } catch (const DataMismatch& e) {
    err << "data mismatch: " << e.what() << '\n';
    return kExitMismatch;
  } catch (const InvalidArgument& e) {
    err << "usage error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const NotFound& e) {
    err << "usage error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const FormatError& e) {
    err << "format error: " << e.what() << '\n';
    return kExitFormat;
  } catch (const ValidationError& e) {
    err << "format error: " << e.what() << '\n';
    return kExitFormat;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitFailure;
  }
}

}  // namespace noveval::cli
