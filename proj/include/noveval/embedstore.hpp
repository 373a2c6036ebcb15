#pragma once

// Persistence for embedding sets.
//
// Binary file, all integers and floats little-endian:
//
//   "NVEB" | version u32 (=1) | n u32 | d u32 | n*d f32 | crc32c u32
//
// The trailing CRC-32C covers every preceding byte. Per-row metadata lives
// in a JSON sidecar next to it, `<path>.meta.json`:
//
//   {dataset, split_file, algorithm, ids: [...], labels: [...], tags: [...]}

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "noveval/types.hpp"

namespace noveval {

inline constexpr char kEmbeddingMagic[4] = {'N', 'V', 'E', 'B'};
inline constexpr std::uint32_t kEmbeddingVersion = 1;

struct EmbeddingSet {
  std::size_t rows = 0;
  std::size_t dim = 0;
  std::vector<float> values;  // rows x dim, row-major
  std::vector<std::string> ids;
  std::vector<std::string> labels;
  std::vector<SampleTag> tags;

  // Provenance carried through the sidecar.
  std::string dataset;
  std::string split_file;
  std::string algorithm;

  std::span<const float> row(std::size_t i) const {
    return {values.data() + i * dim, dim};
  }

  // Lengths agree, ids unique, every entry finite. Throws ValidationError
  // (with the row index for non-finite entries).
  void validate() const;

  // Subset of rows, in the given order, keeping provenance.
  EmbeddingSet select(std::span<const std::size_t> rows) const;
};

// Binary payload of the main file, checksum included.
std::vector<std::byte> encode_matrix(const EmbeddingSet& set);

struct DecodedMatrix {
  std::size_t rows = 0;
  std::size_t dim = 0;
  std::vector<float> values;
  std::uint32_t checksum = 0;
};

// Validates magic, version, length and checksum; FormatError otherwise.
// Does not check finiteness.
DecodedMatrix decode_matrix(std::span<const std::byte> bytes);

std::filesystem::path sidecar_path(const std::filesystem::path& path);

// Writes both files atomically and returns the checksum as 8 hex digits.
std::string write_embedding_set(const EmbeddingSet& set,
                                const std::filesystem::path& path);

EmbeddingSet read_embedding_set(const std::filesystem::path& path);

}  // namespace noveval
