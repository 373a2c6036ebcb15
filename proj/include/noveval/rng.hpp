#pragma once

#include <cstdint>
#include <random>
#include <utility>
#include <vector>

namespace noveval {

// Seeded generator behind every randomized split.
//
// std::mt19937_64's output sequence is pinned by the C++ standard, but the
// standard distributions are not, so bounded draws are done here by
// rejection sampling on the raw 64-bit output. Shuffles are Fisher-Yates
// walking from the last element down. The same seed therefore yields the
// same split on every platform and standard library.
class SplitRng {
 public:
  explicit SplitRng(std::uint64_t seed) : engine_(seed) {}

  // Uniform integer in [0, bound). bound must be > 0.
  std::uint64_t below(std::uint64_t bound) {
    const std::uint64_t threshold = (0 - bound) % bound;
    for (;;) {
      const std::uint64_t x = engine_();
      if (x >= threshold) return x % bound;
    }
  }

  template <class T>
  void shuffle(std::vector<T>& items) {
    for (std::size_t i = items.size(); i > 1; --i) {
      const auto j = static_cast<std::size_t>(below(i));
      using std::swap;
      swap(items[i - 1], items[j]);
    }
  }

 private:
  std::mt19937_64 engine_;
};

}  // namespace noveval
