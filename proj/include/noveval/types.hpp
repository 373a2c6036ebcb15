#pragma once

#include <cstdint>
#include <string_view>

namespace noveval {

// Which side of the image axis a sample belongs to.
enum class SampleTag : std::uint8_t { train = 0, test = 1 };

std::string_view to_string(SampleTag tag) noexcept;
SampleTag parse_sample_tag(std::string_view text);

// Which side of the label axis a class belongs to.
enum class Side : std::uint8_t { base = 0, novel = 1 };

std::string_view to_string(Side side) noexcept;

}  // namespace noveval
