#pragma once

// Exact cosine-similarity search.
//
// Rows are first scaled to unit length (normalize_rows); the score of a
// (query, corpus) pair is then their dot product, accumulated in double
// precision as a fused multiply-add chain over dimensions 0..d-1 in order.
// Every code path (vector widths, blocking, worker count) evaluates exactly
// that chain, so scores and rankings are bitwise reproducible. Ties are
// ordered by ascending corpus row.

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "noveval/embedstore.hpp"

namespace noveval {

inline constexpr double kMinRowNorm = 1e-12;

struct MatrixView {
  std::span<const float> values;
  std::size_t rows = 0;
  std::size_t dim = 0;

  MatrixView() = default;
  MatrixView(std::span<const float> v, std::size_t r, std::size_t d)
      : values(v), rows(r), dim(d) {}
  explicit MatrixView(const EmbeddingSet& set)
      : values(set.values), rows(set.rows), dim(set.dim) {}

  std::span<const float> row(std::size_t i) const {
    return values.subspan(i * dim, dim);
  }
};

// Each output row is float(x / ||x||) with the norm taken in double.
// ValidationError naming the row when ||x|| <= kMinRowNorm.
EmbeddingSet normalize_rows(const EmbeddingSet& set);
std::vector<float> normalize_rows(MatrixView m);

// The reference pair score: fma chain in double over the dimensions.
double pair_score(std::span<const float> a, std::span<const float> b);

// Called once per query with its ranked corpus rows and raw scores. May be
// invoked concurrently from different workers for different queries.
using NeighborSink = std::function<void(std::size_t query,
                                        std::span<const std::uint32_t> rows,
                                        std::span<const double> scores)>;

inline constexpr std::size_t kNoExclusion = static_cast<std::size_t>(-1);

struct SearchPlan {
  std::span<const std::size_t> cutoffs;   // one per query
  std::span<const std::size_t> excluded;  // corpus row to skip, or kNoExclusion
  unsigned workers = 0;                   // 0 = hardware concurrency
};

// Row-level search over already-normalized matrices.
void search_neighbors(MatrixView queries, MatrixView corpus,
                      const SearchPlan& plan, const NeighborSink& sink);

struct RetrievalResult {
  std::string query_id;
  std::vector<std::string> ranked_ids;
  std::vector<double> scores;  // clamped to [-1, 1], non-increasing
};

struct SearchOptions {
  bool exclude_self = true;  // drop corpus rows whose id equals the query id
  unsigned workers = 0;
};

// Both sets must already be normalized. cutoffs has one entry per query.
std::vector<RetrievalResult> top_r_neighbors(const EmbeddingSet& queries,
                                             const EmbeddingSet& corpus,
                                             std::span<const std::size_t> cutoffs,
                                             const SearchOptions& options = {});

}  // namespace noveval
