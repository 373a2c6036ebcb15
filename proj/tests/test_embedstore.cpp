#include <gtest/gtest.h>

#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <limits>
#include <random>

#include "fixtures.hpp"
#include "noveval/crc32c.hpp"
#include "noveval/embedstore.hpp"
#include "noveval/errors.hpp"
#include "oracle.hpp"

using namespace noveval;

namespace {

std::vector<std::byte> slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::vector<char> raw((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  std::vector<std::byte> out(raw.size());
  std::memcpy(out.data(), raw.data(), raw.size());
  return out;
}

void spit(const std::filesystem::path& p, std::span<const std::byte> bytes) {
  std::ofstream out(p, std::ios::binary | std::ios::trunc);
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
}

std::uint32_t oracle_crc(std::span<const std::byte> bytes) {
  return oracle::crc32c_bitwise(reinterpret_cast<const std::uint8_t*>(bytes.data()), bytes.size());
}

void expect_bit_identical(const EmbeddingSet& a, const EmbeddingSet& b) {
  ASSERT_EQ(a.rows, b.rows);
  ASSERT_EQ(a.dim, b.dim);
  ASSERT_EQ(a.values.size(), b.values.size());
  for (std::size_t i = 0; i < a.values.size(); ++i) {
    ASSERT_EQ(std::bit_cast<std::uint32_t>(a.values[i]), std::bit_cast<std::uint32_t>(b.values[i]))
        << "entry " << i;
  }
  EXPECT_EQ(a.ids, b.ids);
  EXPECT_EQ(a.labels, b.labels);
  EXPECT_EQ(a.tags, b.tags);
  EXPECT_EQ(a.dataset, b.dataset);
  EXPECT_EQ(a.split_file, b.split_file);
  EXPECT_EQ(a.algorithm, b.algorithm);
}

}  // namespace

TEST(Crc32c, KnownCheckValue) {
  const std::string text = "123456789";
  EXPECT_EQ(crc32c(std::as_bytes(std::span(text))), 0xE3069283u);
  EXPECT_EQ(to_hex(0xE3069283u), "e3069283");
  EXPECT_EQ(crc32c({}), 0u);
}

TEST(Crc32c, MatchesBitwiseOracleOnRandomBuffers) {
  std::mt19937_64 rng(1);
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<std::byte> buf(rng() % 300);
    for (auto& b : buf) b = static_cast<std::byte>(rng());
    EXPECT_EQ(crc32c(buf), oracle_crc(buf)) << "size " << buf.size();
    // Incremental updates agree with one-shot.
    Crc32c inc;
    const auto cut = buf.empty() ? 0 : rng() % buf.size();
    inc.update(std::span(buf).first(cut));
    inc.update(std::span(buf).subspan(cut));
    EXPECT_EQ(inc.value(), crc32c(buf));
  }
}

TEST(EmbedStore, ThreeByTwoRoundTripsBitForBit) {
  fixtures::TempDir dir;
  auto set = fixtures::make_set({1, 2, 3, 4, 5, 6}, 3, 2, {"a", "b", "a"});
  set.tags[1] = SampleTag::train;
  set.split_file = "split.json";
  const auto path = dir / "small.nveb";
  const auto checksum = write_embedding_set(set, path);
  EXPECT_EQ(checksum.size(), 8u);
  expect_bit_identical(read_embedding_set(path), set);

  // Header layout, little-endian.
  const auto bytes = slurp(path);
  ASSERT_EQ(bytes.size(), 16u + 6 * 4 + 4);
  EXPECT_EQ(std::memcmp(bytes.data(), "NVEB", 4), 0);
  EXPECT_EQ(std::to_integer<int>(bytes[4]), 1);
  EXPECT_EQ(std::to_integer<int>(bytes[8]), 3);
  EXPECT_EQ(std::to_integer<int>(bytes[12]), 2);
  EXPECT_TRUE(std::filesystem::exists(sidecar_path(path)));
}

TEST(EmbedStore, EmptySet) {
  fixtures::TempDir dir;
  auto set = fixtures::make_set({}, 0, 512, {});
  write_embedding_set(set, dir / "empty.nveb");
  const auto back = read_embedding_set(dir / "empty.nveb");
  EXPECT_EQ(back.rows, 0u);
  EXPECT_EQ(back.dim, 512u);
  EXPECT_TRUE(back.values.empty());
}

TEST(EmbedStore, ChecksumMatchesIndependentComputation) {
  fixtures::TempDir dir;
  auto set = fixtures::make_set(fixtures::gaussian(1000, 512, 3), 1000, 512,
                                fixtures::cyclic_labels(1000, 10));
  const auto path = dir / "big.nveb";
  const auto checksum = write_embedding_set(set, path);
  const auto bytes = slurp(path);
  const auto body = std::span(bytes).first(bytes.size() - 4);
  EXPECT_EQ(checksum, to_hex(oracle_crc(body)));
  expect_bit_identical(read_embedding_set(path), set);
}

TEST(EmbedStore, RoundTripProperty) {
  fixtures::TempDir dir;
  std::mt19937_64 rng(12);
  for (int trial = 0; trial < 20; ++trial) {
    const std::size_t n = rng() % 50;
    const std::size_t d = 1 + rng() % 40;
    std::vector<float> values(n * d);
    // Raw bit patterns, skipping non-finite ones, to cover denormals and -0.
    for (auto& v : values) {
      do {
        v = std::bit_cast<float>(static_cast<std::uint32_t>(rng()));
      } while (!std::isfinite(v));
    }
    auto set = fixtures::make_set(values, n, d, fixtures::cyclic_labels(n, 3));
    const auto path = dir / ("t" + std::to_string(trial) + ".nveb");
    const auto c1 = write_embedding_set(set, path);
    const auto back = read_embedding_set(path);
    expect_bit_identical(back, set);
    // write(read(file)) reproduces the file byte for byte.
    const auto path2 = dir / ("u" + std::to_string(trial) + ".nveb");
    EXPECT_EQ(write_embedding_set(back, path2), c1);
    EXPECT_EQ(slurp(path), slurp(path2));
  }
}

TEST(EmbedStore, AnyFlippedPayloadByteChangesTheChecksum) {
  std::mt19937_64 rng(4);
  auto set = fixtures::make_set(fixtures::gaussian(20, 8, 9), 20, 8, fixtures::cyclic_labels(20, 2));
  const auto bytes = encode_matrix(set);
  const auto body = std::span(bytes).first(bytes.size() - 4);
  const auto original = crc32c(body);
  for (std::size_t i = 0; i < body.size(); ++i) {
    auto copy = bytes;
    copy[i] ^= static_cast<std::byte>(1 + rng() % 255);
    EXPECT_NE(crc32c(std::span(copy).first(copy.size() - 4)), original) << "byte " << i;
    EXPECT_THROW(decode_matrix(copy), FormatError);
  }
}

TEST(EmbedStore, CorruptedMagicIsAFormatError) {
  fixtures::TempDir dir;
  auto set = fixtures::make_set({1, 0, 0, 1}, 2, 2, {"a", "b"});
  const auto path = dir / "m.nveb";
  write_embedding_set(set, path);
  auto bytes = slurp(path);
  bytes[0] = std::byte{'X'};
  spit(path, bytes);
  try {
    read_embedding_set(path);
    FAIL();
  } catch (const FormatError& e) {
    EXPECT_NE(std::string(e.what()).find("magic"), std::string::npos);
  }
}

TEST(EmbedStore, WrongVersionIsAFormatError) {
  auto bytes = encode_matrix(fixtures::make_set({1, 0}, 1, 2, {"a"}));
  bytes[4] = std::byte{2};
  EXPECT_THROW(decode_matrix(bytes), FormatError);
}

TEST(EmbedStore, TruncatedPayloadIsAFormatError) {
  const auto bytes = encode_matrix(fixtures::make_set(fixtures::gaussian(4, 3, 1), 4, 3,
                                                      fixtures::cyclic_labels(4, 2)));
  for (std::size_t keep : {std::size_t{0}, std::size_t{10}, std::size_t{19}, bytes.size() - 1}) {
    EXPECT_THROW(decode_matrix(std::span(bytes).first(keep)), FormatError) << keep;
  }
  auto longer = bytes;
  longer.push_back(std::byte{0});
  EXPECT_THROW(decode_matrix(longer), FormatError);
}

TEST(EmbedStore, NanRowIsAValidationErrorNamingTheRow) {
  fixtures::TempDir dir;
  auto set = fixtures::make_set(fixtures::gaussian(10, 4, 2), 10, 4, fixtures::cyclic_labels(10, 2));
  const auto path = dir / "nan.nveb";
  write_embedding_set(set, path);
  // Re-encode with a NaN at row 7 and a valid checksum.
  set.values[7 * 4 + 2] = std::numeric_limits<float>::quiet_NaN();
  spit(path, encode_matrix(set));
  try {
    read_embedding_set(path);
    FAIL();
  } catch (const ValidationError& e) {
    ASSERT_TRUE(e.row().has_value());
    EXPECT_EQ(*e.row(), 7u);
    EXPECT_NE(std::string(e.what()).find("row 7"), std::string::npos);
  }
}

TEST(EmbedStore, RefusesToWriteInvalidSets) {
  fixtures::TempDir dir;
  auto set = fixtures::make_set({1, 2, 3, 4}, 2, 2, {"a", "b"});
  set.values[3] = std::numeric_limits<float>::infinity();
  EXPECT_THROW(write_embedding_set(set, dir / "x.nveb"), InvalidArgument);
  set.values[3] = 1;
  set.ids[1] = set.ids[0];
  EXPECT_THROW(write_embedding_set(set, dir / "x.nveb"), InvalidArgument);
  set.ids[1] = "other";
  set.labels.pop_back();
  EXPECT_THROW(write_embedding_set(set, dir / "x.nveb"), InvalidArgument);
  EXPECT_FALSE(std::filesystem::exists(dir / "x.nveb"));
}

TEST(EmbedStore, SidecarProblemsAreFormatErrors) {
  fixtures::TempDir dir;
  auto set = fixtures::make_set({1, 2, 3, 4}, 2, 2, {"a", "b"});
  const auto path = dir / "s.nveb";
  write_embedding_set(set, path);
  std::filesystem::remove(sidecar_path(path));
  EXPECT_THROW(read_embedding_set(path), FormatError);

  std::ofstream(sidecar_path(path)) << R"({"ids":["x"],"labels":["a"],"tags":["test"]})";
  EXPECT_THROW(read_embedding_set(path), FormatError);
  std::ofstream(sidecar_path(path)) << "not json";
  EXPECT_THROW(read_embedding_set(path), FormatError);
  std::ofstream(sidecar_path(path)) << R"({"ids":["x","y"],"labels":["a","b"],"tags":["test","dev"]})";
  EXPECT_THROW(read_embedding_set(path), FormatError);
}

TEST(EmbedStore, MissingFileIsAnIoError) {
  EXPECT_THROW(read_embedding_set("/nonexistent/dir/file.nveb"), IoError);
}

TEST(EmbedStore, SelectKeepsRowsAndProvenance) {
  auto set = fixtures::make_set({1, 2, 3, 4, 5, 6}, 3, 2, {"a", "b", "c"});
  const std::vector<std::size_t> rows = {2, 0};
  const auto sub = set.select(rows);
  EXPECT_EQ(sub.rows, 2u);
  EXPECT_EQ(sub.values, (std::vector<float>{5, 6, 1, 2}));
  EXPECT_EQ(sub.labels, (std::vector<std::string>{"c", "a"}));
  EXPECT_EQ(sub.algorithm, set.algorithm);
}
