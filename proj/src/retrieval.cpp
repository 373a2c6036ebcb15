#include "noveval/retrieval.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <unordered_map>

#if defined(__AVX512F__) || (defined(__AVX2__) && defined(__FMA__))
#include <immintrin.h>
#endif

#include "noveval/errors.hpp"
#include "noveval/parallel.hpp"

namespace noveval {
namespace {

// Corpus rows are packed into panels of kLanes rows, stored dimension-major
// so the kernel streams one contiguous kLanes-wide slice per dimension.
constexpr std::size_t kLanes = 16;
constexpr std::size_t kQueryTile = 8;
// Unit of work handed to a worker. Fixed, so the set of pair scores a task
// computes never depends on the worker count.
constexpr std::size_t kQueryBlock = 64;
// Panels visited per pass over a query block (~1 MiB at d = 512).
constexpr std::size_t kChunkPanels = 16;

std::vector<double> pack_corpus(MatrixView corpus) {
  const std::size_t panels = (corpus.rows + kLanes - 1) / kLanes;
  const std::size_t d = corpus.dim;
  std::vector<double> packed(panels * d * kLanes, 0.0);
  for (std::size_t i = 0; i < corpus.rows; ++i) {
    const auto src = corpus.row(i);
    double* dst = packed.data() + (i / kLanes) * d * kLanes + i % kLanes;
    for (std::size_t k = 0; k < d; ++k) dst[k * kLanes] = src[k];
  }
  return packed;
}

// out[r * ld + j] = sum_k q[r * d + k] * panel[k * kLanes + j], evaluated as
// an fma chain in k order, for r < kQueryTile and j < kLanes.
void score_tile(const double* q, const double* panel, std::size_t d,
                double* out, std::size_t ld) {
#if defined(__AVX512F__)
  __m512d lo[kQueryTile];
  __m512d hi[kQueryTile];
  for (std::size_t r = 0; r < kQueryTile; ++r) {
    lo[r] = _mm512_setzero_pd();
    hi[r] = _mm512_setzero_pd();
  }
  for (std::size_t k = 0; k < d; ++k) {
    const __m512d p0 = _mm512_loadu_pd(panel + k * kLanes);
    const __m512d p1 = _mm512_loadu_pd(panel + k * kLanes + 8);
    for (std::size_t r = 0; r < kQueryTile; ++r) {
      const __m512d a = _mm512_set1_pd(q[r * d + k]);
      lo[r] = _mm512_fmadd_pd(a, p0, lo[r]);
      hi[r] = _mm512_fmadd_pd(a, p1, hi[r]);
    }
  }
  for (std::size_t r = 0; r < kQueryTile; ++r) {
    _mm512_storeu_pd(out + r * ld, lo[r]);
    _mm512_storeu_pd(out + r * ld + 8, hi[r]);
  }
#elif defined(__AVX2__) && defined(__FMA__)
  // Four queries by eight lanes per pass keeps the accumulators in the
  // sixteen ymm registers.
  for (std::size_t r0 = 0; r0 < kQueryTile; r0 += 4) {
    for (std::size_t j0 = 0; j0 < kLanes; j0 += 8) {
      __m256d lo[4];
      __m256d hi[4];
      for (int r = 0; r < 4; ++r) {
        lo[r] = _mm256_setzero_pd();
        hi[r] = _mm256_setzero_pd();
      }
      for (std::size_t k = 0; k < d; ++k) {
        const __m256d p0 = _mm256_loadu_pd(panel + k * kLanes + j0);
        const __m256d p1 = _mm256_loadu_pd(panel + k * kLanes + j0 + 4);
        for (int r = 0; r < 4; ++r) {
          const __m256d a = _mm256_set1_pd(q[(r0 + r) * d + k]);
          lo[r] = _mm256_fmadd_pd(a, p0, lo[r]);
          hi[r] = _mm256_fmadd_pd(a, p1, hi[r]);
        }
      }
      for (int r = 0; r < 4; ++r) {
        _mm256_storeu_pd(out + (r0 + r) * ld + j0, lo[r]);
        _mm256_storeu_pd(out + (r0 + r) * ld + j0 + 4, hi[r]);
      }
    }
  }
#else
  double acc[kQueryTile][kLanes] = {};
  for (std::size_t k = 0; k < d; ++k) {
    const double* p = panel + k * kLanes;
    for (std::size_t r = 0; r < kQueryTile; ++r) {
      const double a = q[r * d + k];
      for (std::size_t j = 0; j < kLanes; ++j) {
        acc[r][j] = std::fma(a, p[j], acc[r][j]);
      }
    }
  }
  for (std::size_t r = 0; r < kQueryTile; ++r) {
    std::copy_n(acc[r], kLanes, out + r * ld);
  }
#endif
}

struct Workspace {
  std::vector<double> queries;  // kQueryBlock x d
  std::vector<double> scores;   // kQueryBlock x padded corpus
  std::vector<double> scratch;
  std::vector<std::pair<double, std::uint32_t>> picked;
  std::vector<std::uint32_t> rows;
  std::vector<double> values;
};

bool ranks_before(const std::pair<double, std::uint32_t>& a,
                  const std::pair<double, std::uint32_t>& b) {
  return a.first > b.first || (a.first == b.first && a.second < b.second);
}

// Top `cutoff` corpus rows of one query by (score desc, row asc).
void select_top(std::span<const double> scores, std::size_t excluded,
                std::size_t cutoff, Workspace& ws) {
  ws.picked.clear();
  if (cutoff == 0) return;
  const std::size_t n = scores.size();
  ws.scratch.assign(scores.begin(), scores.end());
  if (excluded < n) {
    ws.scratch[excluded] = -std::numeric_limits<double>::infinity();
  }
  auto nth = ws.scratch.begin() + static_cast<std::ptrdiff_t>(cutoff - 1);
  std::nth_element(ws.scratch.begin(), nth, ws.scratch.end(),
                   std::greater<>{});
  const double threshold = *nth;

  for (std::size_t j = 0; j < n; ++j) {
    if (j != excluded && scores[j] > threshold) {
      ws.picked.emplace_back(scores[j], static_cast<std::uint32_t>(j));
    }
  }
  for (std::size_t j = 0; j < n && ws.picked.size() < cutoff; ++j) {
    if (j != excluded && scores[j] == threshold) {
      ws.picked.emplace_back(scores[j], static_cast<std::uint32_t>(j));
    }
  }
  std::sort(ws.picked.begin(), ws.picked.end(), ranks_before);
}

}  // namespace

std::vector<float> normalize_rows(MatrixView m) {
  std::vector<float> out(m.rows * m.dim);
  for (std::size_t i = 0; i < m.rows; ++i) {
    const auto row = m.row(i);
    double sq = 0.0;
    for (float x : row) sq += static_cast<double>(x) * static_cast<double>(x);
    const double norm = std::sqrt(sq);
    if (!(norm > kMinRowNorm)) {
      throw ValidationError("row " + std::to_string(i) +
                                " has near-zero norm and cannot be normalized",
                            i);
    }
    for (std::size_t k = 0; k < m.dim; ++k) {
      out[i * m.dim + k] = static_cast<float>(row[k] / norm);
    }
  }
  return out;
}

EmbeddingSet normalize_rows(const EmbeddingSet& set) {
  EmbeddingSet out = set;
  out.values = normalize_rows(MatrixView(set));
  return out;
}

double pair_score(std::span<const float> a, std::span<const float> b) {
  double acc = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) {
    acc = std::fma(static_cast<double>(a[k]), static_cast<double>(b[k]), acc);
  }
  return acc;
}

void search_neighbors(MatrixView queries, MatrixView corpus,
                      const SearchPlan& plan, const NeighborSink& sink) {
  if (queries.dim != corpus.dim) {
    throw InvalidArgument("dimension mismatch: queries have d=" +
                          std::to_string(queries.dim) + ", corpus d=" +
                          std::to_string(corpus.dim));
  }
  if (plan.cutoffs.size() != queries.rows) {
    throw InvalidArgument("need one cutoff per query");
  }
  if (!plan.excluded.empty() && plan.excluded.size() != queries.rows) {
    throw InvalidArgument("need one exclusion entry per query");
  }
  if (corpus.rows > std::numeric_limits<std::uint32_t>::max()) {
    throw InvalidArgument("corpus too large");
  }
  for (std::size_t q = 0; q < queries.rows; ++q) {
    const bool skips = !plan.excluded.empty() &&
                       plan.excluded[q] != kNoExclusion;
    if (skips && plan.excluded[q] >= corpus.rows) {
      throw InvalidArgument("excluded row out of range for query " +
                            std::to_string(q));
    }
    const std::size_t available = corpus.rows - (skips ? 1 : 0);
    if (plan.cutoffs[q] > available) {
      throw InvalidArgument("cutoff " + std::to_string(plan.cutoffs[q]) +
                            " for query " + std::to_string(q) +
                            " exceeds the " + std::to_string(available) +
                            " candidate rows");
    }
  }
  if (queries.rows == 0) return;

  const std::size_t d = corpus.dim;
  const std::size_t n = corpus.rows;
  const std::size_t panels = (n + kLanes - 1) / kLanes;
  const std::size_t ld = panels * kLanes;
  const auto packed = pack_corpus(corpus);
  const std::size_t blocks = (queries.rows + kQueryBlock - 1) / kQueryBlock;
  const unsigned workers = static_cast<unsigned>(
      std::min<std::size_t>(resolve_workers(plan.workers), blocks));
  std::vector<Workspace> spaces(workers);

  parallel_for(blocks, workers, [&](unsigned w, std::size_t block) {
    Workspace& ws = spaces[w];
    const std::size_t q0 = block * kQueryBlock;
    const std::size_t count = std::min(kQueryBlock, queries.rows - q0);
    const std::size_t tiles = (count + kQueryTile - 1) / kQueryTile;

    ws.queries.assign(tiles * kQueryTile * d, 0.0);
    for (std::size_t r = 0; r < count; ++r) {
      const auto src = queries.row(q0 + r);
      std::copy(src.begin(), src.end(), ws.queries.begin() + r * d);
    }
    ws.scores.resize(tiles * kQueryTile * ld);

    for (std::size_t c0 = 0; c0 < panels; c0 += kChunkPanels) {
      const std::size_t c1 = std::min(panels, c0 + kChunkPanels);
      for (std::size_t t = 0; t < tiles; ++t) {
        const double* q = ws.queries.data() + t * kQueryTile * d;
        double* out = ws.scores.data() + t * kQueryTile * ld;
        for (std::size_t p = c0; p < c1; ++p) {
          score_tile(q, packed.data() + p * d * kLanes, d, out + p * kLanes,
                     ld);
        }
      }
    }

    for (std::size_t r = 0; r < count; ++r) {
      const std::size_t query = q0 + r;
      const std::size_t excluded =
          plan.excluded.empty() ? kNoExclusion : plan.excluded[query];
      select_top({ws.scores.data() + r * ld, n}, excluded,
                 plan.cutoffs[query], ws);
      ws.rows.clear();
      ws.values.clear();
      for (const auto& [score, row] : ws.picked) {
        ws.values.push_back(score);
        ws.rows.push_back(row);
      }
      sink(query, ws.rows, ws.values);
    }
  });
}

std::vector<RetrievalResult> top_r_neighbors(
    const EmbeddingSet& queries, const EmbeddingSet& corpus,
    std::span<const std::size_t> cutoffs, const SearchOptions& options) {
  std::vector<std::size_t> excluded;
  if (options.exclude_self) {
    std::unordered_map<std::string_view, std::size_t> by_id;
    by_id.reserve(corpus.rows);
    for (std::size_t i = 0; i < corpus.rows; ++i) by_id.emplace(corpus.ids[i], i);
    excluded.resize(queries.rows, kNoExclusion);
    for (std::size_t q = 0; q < queries.rows; ++q) {
      if (auto it = by_id.find(queries.ids[q]); it != by_id.end()) {
        excluded[q] = it->second;
      }
    }
  }

  std::vector<RetrievalResult> results(queries.rows);
  SearchPlan plan{cutoffs, excluded, options.workers};
  search_neighbors(
      MatrixView(queries), MatrixView(corpus), plan,
      [&](std::size_t q, std::span<const std::uint32_t> rows,
          std::span<const double> scores) {
        auto& r = results[q];
        r.query_id = queries.ids[q];
        r.ranked_ids.reserve(rows.size());
        r.scores.reserve(rows.size());
        for (std::size_t i = 0; i < rows.size(); ++i) {
          r.ranked_ids.push_back(corpus.ids[rows[i]]);
          r.scores.push_back(std::clamp(scores[i], -1.0, 1.0));
        }
      });
  return results;
}

}  // namespace noveval
