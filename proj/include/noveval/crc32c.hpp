#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>

namespace noveval {

// CRC-32C (Castagnoli, reflected polynomial 0x82F63B78), slicing-by-8.
class Crc32c {
 public:
  void update(std::span<const std::byte> bytes) noexcept;
  std::uint32_t value() const noexcept { return ~state_; }

 private:
  std::uint32_t state_ = 0xFFFFFFFFu;
};

std::uint32_t crc32c(std::span<const std::byte> bytes) noexcept;

// Eight lowercase hex digits.
std::string to_hex(std::uint32_t value);

}  // namespace noveval
