#pragma once

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <random>
#include <string>
#include <vector>

#include "noveval/embedstore.hpp"
#include "noveval/splitgen.hpp"

namespace fixtures {

// Gaussian rows, so directions are uniform on the sphere.
inline std::vector<float> gaussian(std::size_t rows, std::size_t dim,
                                   std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<float> normal(0.0f, 1.0f);
  std::vector<float> out(rows * dim);
  for (auto& x : out) x = normal(rng);
  return out;
}

inline std::vector<std::string> class_names(std::size_t k) {
  std::vector<std::string> out;
  for (std::size_t i = 0; i < k; ++i) out.push_back("c" + std::to_string(i));
  return out;
}

// Labels cycling through classes, so every class gets n / k rows (+1).
inline std::vector<std::string> cyclic_labels(std::size_t n, std::size_t k) {
  std::vector<std::string> out;
  for (std::size_t i = 0; i < n; ++i) out.push_back("c" + std::to_string(i % k));
  return out;
}

inline noveval::EmbeddingSet make_set(std::vector<float> values,
                                      std::size_t rows, std::size_t dim,
                                      std::vector<std::string> labels,
                                      noveval::SampleTag tag =
                                          noveval::SampleTag::test) {
  noveval::EmbeddingSet set;
  set.rows = rows;
  set.dim = dim;
  set.values = std::move(values);
  set.labels = std::move(labels);
  for (std::size_t i = 0; i < rows; ++i) {
    set.ids.push_back("img" + std::to_string(i));
    set.tags.push_back(tag);
  }
  set.dataset = "synthetic";
  set.algorithm = "fixture";
  return set;
}

// Split of classes c0..c{k-1}: the first n_base are base.
inline noveval::SplitSpec first_k_split(std::size_t k, std::size_t n_base,
                                        std::string dataset = "synthetic") {
  noveval::SplitSpec s;
  s.dataset_id = std::move(dataset);
  s.method = noveval::SplitMethod::random;
  for (std::size_t i = 0; i < k; ++i) {
    (i < n_base ? s.base : s.novel).push_back("c" + std::to_string(i));
  }
  std::sort(s.base.begin(), s.base.end());
  std::sort(s.novel.begin(), s.novel.end());
  return s;
}

// Class c on axis c: every row of a class is the same unit vector.
inline noveval::EmbeddingSet perfect_clusters(std::size_t classes,
                                              std::size_t per_class) {
  const std::size_t n = classes * per_class;
  std::vector<float> values(n * classes, 0.0f);
  std::vector<std::string> labels;
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t c = i % classes;
    values[i * classes + c] = 1.0f;
    labels.push_back("c" + std::to_string(c));
  }
  return make_set(std::move(values), n, classes, std::move(labels));
}

class TempDir {
 public:
  TempDir() {
    static std::mt19937_64 rng(std::random_device{}());
    path_ = std::filesystem::temp_directory_path() /
            ("noveval-test-" + std::to_string(rng()));
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  std::filesystem::path operator/(const std::string& name) const {
    return path_ / name;
  }
  const std::filesystem::path& path() const { return path_; }

 private:
  std::filesystem::path path_;
};

}  // namespace fixtures
