#include "noveval/split_io.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>
#include <system_error>

#include "noveval/errors.hpp"

namespace noveval {
namespace fs = std::filesystem;

namespace {

template <class T>
T required(const nlohmann::json& doc, const char* key, const char* what) {
  if (!doc.is_object() || !doc.contains(key)) {
    throw FormatError(std::string(what) + " is missing field '" + key + "'");
  }
  try {
    return doc.at(key).get<T>();
  } catch (const nlohmann::json::exception&) {
    throw FormatError(std::string(what) + " field '" + key +
                      "' has the wrong type");
  }
}

}  // namespace

ordered_json taxonomy_to_json(const ClassTaxonomy& taxonomy) {
  ordered_json doc;
  doc["dataset"] = taxonomy.dataset_id;
  doc["classes"] = taxonomy.classes;
  if (taxonomy.groups) {
    ordered_json groups = ordered_json::object();
    for (const auto& name : taxonomy.classes) {
      groups[name] = taxonomy.groups->at(name);
    }
    doc["groups"] = std::move(groups);
  }
  return doc;
}

ClassTaxonomy taxonomy_from_json(const nlohmann::json& doc) {
  ClassTaxonomy t;
  t.dataset_id = required<std::string>(doc, "dataset", "taxonomy");
  t.classes = required<std::vector<std::string>>(doc, "classes", "taxonomy");
  if (doc.contains("groups") && !doc.at("groups").is_null()) {
    t.groups = required<std::map<std::string, std::string>>(doc, "groups",
                                                            "taxonomy");
  }
  t.validate();
  return t;
}

ordered_json split_to_json(const SplitSpec& split) {
  ordered_json doc;
  doc["dataset"] = split.dataset_id;
  doc["method"] = std::string(to_string(split.method));
  if (split.kind) doc["kind"] = std::string(to_string(*split.kind));
  if (split.seed) doc["seed"] = *split.seed;
  doc["base"] = split.base;
  doc["novel"] = split.novel;
  return doc;
}

SplitSpec split_from_json(const nlohmann::json& doc) {
  SplitSpec s;
  s.dataset_id = required<std::string>(doc, "dataset", "split");
  try {
    s.method = parse_split_method(required<std::string>(doc, "method", "split"));
    if (doc.contains("kind")) {
      s.kind = parse_builtin_kind(required<std::string>(doc, "kind", "split"));
    }
  } catch (const InvalidArgument& e) {
    throw FormatError(e.what());
  }
  if (doc.contains("seed")) {
    s.seed = required<std::uint64_t>(doc, "seed", "split");
  }
  s.base = required<std::vector<std::string>>(doc, "base", "split");
  s.novel = required<std::vector<std::string>>(doc, "novel", "split");
  std::sort(s.base.begin(), s.base.end());
  std::sort(s.novel.begin(), s.novel.end());
  try {
    s.validate();
  } catch (const InvalidArgument& e) {
    throw FormatError(std::string("invalid split document: ") + e.what());
  }
  return s;
}

std::string render_json(const ordered_json& doc) { return doc.dump(2) + "\n"; }

nlohmann::json read_json_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path.string() + "'");
  std::ostringstream text;
  text << in.rdbuf();
  try {
    return nlohmann::json::parse(text.str());
  } catch (const nlohmann::json::parse_error& e) {
    throw FormatError("'" + path.string() + "' is not valid JSON: " +
                      e.what());
  }
}

ClassTaxonomy load_taxonomy(const fs::path& path) {
  try {
    return taxonomy_from_json(read_json_file(path));
  } catch (const InvalidArgument& e) {
    throw FormatError("'" + path.string() + "': " + e.what());
  }
}

SplitSpec load_split(const fs::path& path) {
  return split_from_json(read_json_file(path));
}

void save_taxonomy(const ClassTaxonomy& taxonomy, const fs::path& path) {
  write_file_atomic(path, render_json(taxonomy_to_json(taxonomy)));
}

void save_split(const SplitSpec& split, const fs::path& path) {
  write_file_atomic(path, render_json(split_to_json(split)));
}

void write_file_atomic(const fs::path& path, const std::string& text) {
  fs::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot write '" + tmp.string() + "'");
    out.write(text.data(), static_cast<std::streamsize>(text.size()));
    out.flush();
    if (!out) throw IoError("write to '" + tmp.string() + "' failed");
  }
  std::error_code ec;
  fs::rename(tmp, path, ec);
  if (ec) {
    const auto reason = ec.message();
    fs::remove(tmp, ec);
    throw IoError("cannot move '" + tmp.string() + "' into place: " + reason);
  }
}

}  // namespace noveval
