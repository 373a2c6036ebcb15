#include "noveval/crc32c.hpp"

#include <array>
#include <cstdio>

namespace noveval {
namespace {

using Table = std::array<std::array<std::uint32_t, 256>, 8>;

constexpr Table make_table() {
  Table t{};
  for (std::uint32_t i = 0; i < 256; ++i) {
    std::uint32_t c = i;
    for (int k = 0; k < 8; ++k) c = (c >> 1) ^ (0x82F63B78u & (0u - (c & 1u)));
    t[0][i] = c;
  }
  for (std::size_t s = 1; s < 8; ++s) {
    for (std::size_t i = 0; i < 256; ++i) {
      t[s][i] = (t[s - 1][i] >> 8) ^ t[0][t[s - 1][i] & 0xFFu];
    }
  }
  return t;
}

constexpr Table kTable = make_table();

inline std::uint32_t byte_at(std::span<const std::byte> b, std::size_t i) {
  return std::to_integer<std::uint32_t>(b[i]);
}

}  // namespace

void Crc32c::update(std::span<const std::byte> bytes) noexcept {
  std::uint32_t c = state_;
  std::size_t i = 0;
  for (; i + 8 <= bytes.size(); i += 8) {
    const std::uint32_t lo = c ^ (byte_at(bytes, i) | byte_at(bytes, i + 1) << 8 |
                                  byte_at(bytes, i + 2) << 16 |
                                  byte_at(bytes, i + 3) << 24);
    c = kTable[7][lo & 0xFF] ^ kTable[6][(lo >> 8) & 0xFF] ^
        kTable[5][(lo >> 16) & 0xFF] ^ kTable[4][lo >> 24] ^
        kTable[3][byte_at(bytes, i + 4)] ^ kTable[2][byte_at(bytes, i + 5)] ^
        kTable[1][byte_at(bytes, i + 6)] ^ kTable[0][byte_at(bytes, i + 7)];
  }
  for (; i < bytes.size(); ++i) {
    c = (c >> 8) ^ kTable[0][(c ^ byte_at(bytes, i)) & 0xFF];
  }
  state_ = c;
}

std::uint32_t crc32c(std::span<const std::byte> bytes) noexcept {
  Crc32c crc;
  crc.update(bytes);
  return crc.value();
}

std::string to_hex(std::uint32_t value) {
  char buf[9];
  std::snprintf(buf, sizeof buf, "%08x", value);
  return buf;
}

}  // namespace noveval
