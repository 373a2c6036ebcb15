#pragma once

// JSON encodings of taxonomies and splits.
//
// Split documents are byte-stable: keys are emitted in a fixed order
// (dataset, method, kind, seed, base, novel) and class lists are sorted.

#include <filesystem>
#include <string>

#include "json.hpp"
#include "noveval/splitgen.hpp"

namespace noveval {

using ordered_json = nlohmann::ordered_json;

ordered_json taxonomy_to_json(const ClassTaxonomy& taxonomy);
ClassTaxonomy taxonomy_from_json(const nlohmann::json& doc);

ordered_json split_to_json(const SplitSpec& split);
SplitSpec split_from_json(const nlohmann::json& doc);

// Two-space indented text with a trailing newline.
std::string render_json(const ordered_json& doc);

ClassTaxonomy load_taxonomy(const std::filesystem::path& path);
SplitSpec load_split(const std::filesystem::path& path);
void save_taxonomy(const ClassTaxonomy& taxonomy,
                   const std::filesystem::path& path);
void save_split(const SplitSpec& split, const std::filesystem::path& path);

// Parses a whole file as JSON; FormatError on malformed text, IoError when
// the file cannot be opened.
nlohmann::json read_json_file(const std::filesystem::path& path);

// Writes `text` to a sibling temp file and renames it over `path`.
void write_file_atomic(const std::filesystem::path& path,
                       const std::string& text);

}  // namespace noveval
