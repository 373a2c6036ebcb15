#include "noveval/embedstore.hpp"

#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <unordered_set>

#include "json.hpp"
#include "noveval/crc32c.hpp"
#include "noveval/errors.hpp"
#include "noveval/split_io.hpp"

namespace noveval {
namespace fs = std::filesystem;

namespace {

constexpr std::size_t kHeaderBytes = 16;
constexpr std::size_t kTrailerBytes = 4;

void put_u32(std::byte* out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) out[i] = static_cast<std::byte>(v >> (8 * i));
}

std::uint32_t get_u32(const std::byte* in) {
  std::uint32_t v = 0;
  for (int i = 0; i < 4; ++i) v |= std::to_integer<std::uint32_t>(in[i]) << (8 * i);
  return v;
}

std::uint32_t checked_u32(std::size_t v, const char* what) {
  if (v > 0xFFFFFFFFu) {
    throw InvalidArgument(std::string(what) + " does not fit in 32 bits");
  }
  return static_cast<std::uint32_t>(v);
}

}  // namespace

void EmbeddingSet::validate() const {
  if (values.size() != rows * dim) {
    throw ValidationError("matrix holds " + std::to_string(values.size()) +
                          " values, expected " + std::to_string(rows) + "x" +
                          std::to_string(dim));
  }
  if (ids.size() != rows || labels.size() != rows || tags.size() != rows) {
    throw ValidationError("ids/labels/tags must each have " +
                          std::to_string(rows) + " entries");
  }
  std::unordered_set<std::string_view> seen;
  seen.reserve(rows);
  for (std::size_t i = 0; i < rows; ++i) {
    if (!seen.insert(ids[i]).second) {
      throw ValidationError("duplicate sample id '" + ids[i] + "' at row " +
                                std::to_string(i),
                            i);
    }
  }
  for (std::size_t i = 0; i < rows; ++i) {
    for (float x : row(i)) {
      if (!std::isfinite(x)) {
        throw ValidationError(
            "non-finite value in row " + std::to_string(i), i);
      }
    }
  }
}

EmbeddingSet EmbeddingSet::select(std::span<const std::size_t> picks) const {
  EmbeddingSet out;
  out.rows = picks.size();
  out.dim = dim;
  out.dataset = dataset;
  out.split_file = split_file;
  out.algorithm = algorithm;
  out.values.reserve(picks.size() * dim);
  for (auto r : picks) {
    const auto src = row(r);
    out.values.insert(out.values.end(), src.begin(), src.end());
    out.ids.push_back(ids[r]);
    out.labels.push_back(labels[r]);
    out.tags.push_back(tags[r]);
  }
  return out;
}

std::vector<std::byte> encode_matrix(const EmbeddingSet& set) {
  const auto n = checked_u32(set.rows, "row count");
  const auto d = checked_u32(set.dim, "dimension");
  std::vector<std::byte> out(kHeaderBytes + set.values.size() * 4 +
                             kTrailerBytes);
  std::memcpy(out.data(), kEmbeddingMagic, 4);
  put_u32(out.data() + 4, kEmbeddingVersion);
  put_u32(out.data() + 8, n);
  put_u32(out.data() + 12, d);
  std::byte* p = out.data() + kHeaderBytes;
  for (float x : set.values) {
    put_u32(p, std::bit_cast<std::uint32_t>(x));
    p += 4;
  }
  const auto crc = crc32c({out.data(), out.size() - kTrailerBytes});
  put_u32(p, crc);
  return out;
}

DecodedMatrix decode_matrix(std::span<const std::byte> bytes) {
  if (bytes.size() < kHeaderBytes + kTrailerBytes) {
    throw FormatError("embedding file truncated: " +
                      std::to_string(bytes.size()) + " bytes");
  }
  if (std::memcmp(bytes.data(), kEmbeddingMagic, 4) != 0) {
    throw FormatError("bad magic bytes (expected NVEB)");
  }
  const auto version = get_u32(bytes.data() + 4);
  if (version != kEmbeddingVersion) {
    throw FormatError("unsupported embedding file version " +
                      std::to_string(version));
  }
  DecodedMatrix m;
  m.rows = get_u32(bytes.data() + 8);
  m.dim = get_u32(bytes.data() + 12);
  const auto count = static_cast<std::uint64_t>(m.rows) * m.dim;
  const auto expected = kHeaderBytes + count * 4 + kTrailerBytes;
  if (bytes.size() < expected) {
    throw FormatError("embedding payload truncated: " +
                      std::to_string(bytes.size()) + " of " +
                      std::to_string(expected) + " bytes");
  }
  if (bytes.size() > expected) {
    throw FormatError("embedding file has " +
                      std::to_string(bytes.size() - expected) +
                      " trailing bytes");
  }
  const std::byte* p = bytes.data() + kHeaderBytes;
  m.checksum = get_u32(p + count * 4);
  const auto actual = crc32c(bytes.first(bytes.size() - kTrailerBytes));
  if (actual != m.checksum) {
    throw FormatError("checksum mismatch: stored " + to_hex(m.checksum) +
                      ", computed " + to_hex(actual));
  }
  m.values.resize(count);
  for (auto& x : m.values) {
    x = std::bit_cast<float>(get_u32(p));
    p += 4;
  }
  return m;
}

fs::path sidecar_path(const fs::path& path) {
  fs::path meta = path;
  meta += ".meta.json";
  return meta;
}

std::string write_embedding_set(const EmbeddingSet& set, const fs::path& path) {
  try {
    set.validate();
  } catch (const ValidationError& e) {
    throw InvalidArgument(std::string("refusing to write: ") + e.what());
  }
  const auto bytes = encode_matrix(set);

  ordered_json meta;
  meta["dataset"] = set.dataset;
  meta["split_file"] = set.split_file;
  meta["algorithm"] = set.algorithm;
  meta["ids"] = set.ids;
  meta["labels"] = set.labels;
  auto& tags = meta["tags"] = ordered_json::array();
  for (auto t : set.tags) tags.push_back(std::string(to_string(t)));

  write_file_atomic(path, std::string(reinterpret_cast<const char*>(bytes.data()),
                                      bytes.size()));
  write_file_atomic(sidecar_path(path), render_json(meta));
  return to_hex(get_u32(bytes.data() + bytes.size() - kTrailerBytes));
}

EmbeddingSet read_embedding_set(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path.string() + "'");
  std::vector<char> raw((std::istreambuf_iterator<char>(in)),
                        std::istreambuf_iterator<char>());
  auto m = decode_matrix(std::as_bytes(std::span(raw)));

  const auto meta_path = sidecar_path(path);
  if (!fs::exists(meta_path)) {
    throw FormatError("missing sidecar '" + meta_path.string() + "'");
  }
  const auto meta = read_json_file(meta_path);

  EmbeddingSet set;
  set.rows = m.rows;
  set.dim = m.dim;
  set.values = std::move(m.values);
  try {
    set.dataset = meta.value("dataset", "");
    set.split_file = meta.value("split_file", "");
    set.algorithm = meta.value("algorithm", "");
    for (const auto& id : meta.at("ids")) {
      set.ids.push_back(id.is_string() ? id.get<std::string>() : id.dump());
    }
    set.labels = meta.at("labels").get<std::vector<std::string>>();
    for (const auto& t : meta.at("tags")) {
      set.tags.push_back(parse_sample_tag(t.get<std::string>()));
    }
  } catch (const nlohmann::json::exception& e) {
    throw FormatError("malformed sidecar '" + meta_path.string() +
                      "': " + e.what());
  } catch (const InvalidArgument& e) {
    throw FormatError("malformed sidecar '" + meta_path.string() +
                      "': " + e.what());
  }
  if (set.ids.size() != set.rows || set.labels.size() != set.rows ||
      set.tags.size() != set.rows) {
    throw FormatError("sidecar describes " + std::to_string(set.ids.size()) +
                      " rows but the matrix has " + std::to_string(set.rows));
  }
  set.validate();
  return set;
}

}  // namespace noveval
