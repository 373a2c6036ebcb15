#include <gtest/gtest.h>

#include <bit>
#include <cmath>
#include <random>

#include "fixtures.hpp"
#include "noveval/errors.hpp"
#include "noveval/retrieval.hpp"
#include "oracle.hpp"

using namespace noveval;

namespace {

struct Hits {
  std::vector<std::vector<std::uint32_t>> rows;
  std::vector<std::vector<double>> scores;
};

Hits run_search(const std::vector<float>& q, std::size_t nq, const std::vector<float>& c,
                std::size_t nc, std::size_t dim, const std::vector<std::size_t>& cutoffs,
                const std::vector<std::size_t>& excluded, unsigned workers) {
  Hits h;
  h.rows.resize(nq);
  h.scores.resize(nq);
  search_neighbors(MatrixView(q, nq, dim), MatrixView(c, nc, dim),
                   SearchPlan{cutoffs, excluded, workers},
                   [&](std::size_t i, std::span<const std::uint32_t> rows,
                       std::span<const double> scores) {
                     h.rows[i].assign(rows.begin(), rows.end());
                     h.scores[i].assign(scores.begin(), scores.end());
                   });
  return h;
}

std::uint64_t bits(double x) { return std::bit_cast<std::uint64_t>(x); }

}  // namespace

TEST(Normalize, ThreeFourFive) {
  const std::vector<float> v = {3, 4};
  const auto out = normalize_rows(MatrixView(v, 1, 2));
  EXPECT_FLOAT_EQ(out[0], 0.6f);
  EXPECT_FLOAT_EQ(out[1], 0.8f);
}

TEST(Normalize, UnitRowsAndIdempotence) {
  const auto raw = fixtures::gaussian(100, 16, 5);
  const auto once = normalize_rows(MatrixView(raw, 100, 16));
  EXPECT_EQ(once, oracle::normalize(raw, 100, 16));
  for (std::size_t i = 0; i < 100; ++i) {
    double sq = 0;
    for (std::size_t k = 0; k < 16; ++k) sq += double(once[i * 16 + k]) * once[i * 16 + k];
    EXPECT_NEAR(std::sqrt(sq), 1.0, 1e-6);
  }
  const auto twice = normalize_rows(MatrixView(once, 100, 16));
  for (std::size_t i = 0; i < once.size(); ++i) EXPECT_NEAR(twice[i], once[i], 1e-7);
}

TEST(Normalize, ZeroRowIsRejected) {
  const std::vector<float> v = {1, 0, 0, 0, 0, 1};
  try {
    normalize_rows(MatrixView(v, 3, 2));
    FAIL();
  } catch (const ValidationError& e) {
    EXPECT_EQ(e.row(), std::optional<std::size_t>(1));
  }
}

TEST(Search, HandRankedExample) {
  // Query along x; corpus at 0, 60, 90, 180 degrees and a near-duplicate.
  const std::vector<float> q = {1, 0};
  const std::vector<float> c = {-1, 0, 0, 1, 0.5f, 0.8660254f, 1, 0, 0.99f, 0.14106736f};
  const auto unit = normalize_rows(MatrixView(c, 5, 2));
  const auto h = run_search(q, 1, unit, 5, 2, {5}, {kNoExclusion}, 1);
  EXPECT_EQ(h.rows[0], (std::vector<std::uint32_t>{3, 4, 2, 1, 0}));
  EXPECT_DOUBLE_EQ(h.scores[0][0], 1.0);
  EXPECT_NEAR(h.scores[0][2], 0.5, 1e-7);
  EXPECT_EQ(h.scores[0][3], 0.0);
  EXPECT_DOUBLE_EQ(h.scores[0][4], -1.0);
}

TEST(Search, OrthogonalScoreIsExactlyZero) {
  const std::vector<float> a = {1, 0, 0, 0};
  const std::vector<float> b = {0, 0, 1, 0};
  EXPECT_EQ(pair_score(a, b), 0.0);
}

TEST(Search, MatchesNaiveOracleExactly) {
  const std::size_t n = 2000, dim = 37;
  const auto raw = fixtures::gaussian(n, dim, 17);
  const auto unit = normalize_rows(MatrixView(raw, n, dim));
  const std::size_t nq = 500;
  std::vector<float> queries(unit.begin(), unit.begin() + nq * dim);
  std::vector<std::size_t> cutoffs(nq), excluded(nq);
  std::mt19937_64 rng(3);
  for (std::size_t i = 0; i < nq; ++i) {
    cutoffs[i] = 1 + rng() % 300;
    excluded[i] = i;
  }
  const auto h = run_search(queries, nq, unit, n, dim, cutoffs, excluded, 4);
  for (std::size_t i = 0; i < nq; ++i) {
    const auto want = oracle::rank(queries, i, unit, n, dim, i);
    ASSERT_EQ(h.rows[i].size(), cutoffs[i]);
    for (std::size_t r = 0; r < cutoffs[i]; ++r) {
      ASSERT_EQ(h.rows[i][r], want.rows[r]) << "query " << i << " rank " << r;
      ASSERT_EQ(bits(h.scores[i][r]), bits(want.scores[r]));
    }
  }
}

TEST(Search, RandomShapesMatchOracle) {
  std::mt19937_64 rng(99);
  for (int trial = 0; trial < 40; ++trial) {
    const std::size_t n = 1 + rng() % 150;
    const std::size_t dim = 1 + rng() % 70;
    const auto raw = fixtures::gaussian(n, dim, trial);
    const auto unit = normalize_rows(MatrixView(raw, n, dim));
    std::vector<std::size_t> cutoffs(n), excluded(n);
    for (std::size_t i = 0; i < n; ++i) {
      excluded[i] = rng() % 2 ? i : kNoExclusion;
      const std::size_t avail = excluded[i] == kNoExclusion ? n : n - 1;
      cutoffs[i] = avail == 0 ? 0 : rng() % (avail + 1);
    }
    const auto h = run_search(unit, n, unit, n, dim, cutoffs, excluded, 1 + trial % 3);
    for (std::size_t i = 0; i < n; ++i) {
      const auto want = oracle::rank(unit, i, unit, n, dim,
                                     excluded[i] == kNoExclusion ? std::nullopt
                                                                 : std::optional(i));
      ASSERT_EQ(h.rows[i].size(), cutoffs[i]);
      for (std::size_t r = 0; r < cutoffs[i]; ++r) {
        ASSERT_EQ(h.rows[i][r], want.rows[r]) << "trial " << trial;
        ASSERT_EQ(bits(h.scores[i][r]), bits(want.scores[r]));
      }
    }
  }
}

TEST(Search, WorkerCountDoesNotChangeResults) {
  const std::size_t n = 700, dim = 64;
  const auto unit = normalize_rows(MatrixView(fixtures::gaussian(n, dim, 8), n, dim));
  std::vector<std::size_t> cutoffs(n, 50), excluded(n);
  for (std::size_t i = 0; i < n; ++i) excluded[i] = i;
  const auto one = run_search(unit, n, unit, n, dim, cutoffs, excluded, 1);
  for (unsigned w : {2u, 8u}) {
    const auto many = run_search(unit, n, unit, n, dim, cutoffs, excluded, w);
    EXPECT_EQ(one.rows, many.rows);
    EXPECT_EQ(one.scores, many.scores);
  }
}

TEST(Search, PowerOfTwoScalingLeavesRankingUnchanged) {
  const std::size_t n = 200, dim = 24;
  const auto raw = fixtures::gaussian(n, dim, 21);
  auto scaled = raw;
  std::mt19937_64 rng(2);
  for (std::size_t i = 0; i < n; ++i) {
    const float f = std::ldexp(1.0f, static_cast<int>(rng() % 20) - 10);
    for (std::size_t k = 0; k < dim; ++k) scaled[i * dim + k] *= f;
  }
  const auto a = normalize_rows(MatrixView(raw, n, dim));
  const auto b = normalize_rows(MatrixView(scaled, n, dim));
  EXPECT_EQ(a, b);
  std::vector<std::size_t> cutoffs(n, n - 1), excluded(n);
  for (std::size_t i = 0; i < n; ++i) excluded[i] = i;
  EXPECT_EQ(run_search(a, n, a, n, dim, cutoffs, excluded, 2).rows,
            run_search(b, n, b, n, dim, cutoffs, excluded, 2).rows);
}

TEST(Search, TiesBreakByAscendingRow) {
  // Rows 0, 4, 6 equal the query; rows 1, 2, 5 are orthogonal to it.
  const std::vector<float> c = {1, 0, 0, 1, 0, -1, -1, 0, 1, 0, 0, 1, 1, 0};
  const auto h = run_search({1, 0}, 1, c, 7, 2, {7}, {kNoExclusion}, 1);
  EXPECT_EQ(h.rows[0], (std::vector<std::uint32_t>{0, 4, 6, 1, 2, 5, 3}));
}

TEST(Search, ManyTiesAcrossPanelsStayOrdered) {
  const std::size_t n = 100, dim = 3;
  std::vector<float> c(n * dim, 0.0f);
  for (std::size_t i = 0; i < n; ++i) c[i * dim + (i % 3 == 0 ? 0 : 1)] = 1.0f;
  const auto h = run_search({1, 0, 0}, 1, c, n, dim, {40}, {kNoExclusion}, 1);
  std::vector<std::uint32_t> want;
  for (std::uint32_t i = 0; i < n && want.size() < 34; i += 3) want.push_back(i);
  for (std::uint32_t i = 0; want.size() < 40; ++i) {
    if (i % 3 != 0) want.push_back(i);
  }
  EXPECT_EQ(h.rows[0], want);
}

TEST(Search, RejectsBadPlans) {
  const std::vector<float> a = {1, 0, 0, 1};
  const std::vector<float> b = {1, 0, 0};
  std::vector<std::size_t> cut = {1, 1};
  std::vector<std::size_t> none = {kNoExclusion, kNoExclusion};
  auto sink = [](std::size_t, std::span<const std::uint32_t>, std::span<const double>) {};
  EXPECT_THROW(search_neighbors(MatrixView(a, 2, 2), MatrixView(b, 1, 3),
                                SearchPlan{cut, none, 1}, sink),
               InvalidArgument);
  std::vector<std::size_t> too_many = {3, 1};
  EXPECT_THROW(search_neighbors(MatrixView(a, 2, 2), MatrixView(a, 2, 2),
                                SearchPlan{too_many, none, 1}, sink),
               InvalidArgument);
  std::vector<std::size_t> self = {0, 1};
  std::vector<std::size_t> full = {2, 1};
  EXPECT_THROW(search_neighbors(MatrixView(a, 2, 2), MatrixView(a, 2, 2),
                                SearchPlan{full, self, 1}, sink),
               InvalidArgument);
  std::vector<std::size_t> short_cut = {1};
  EXPECT_THROW(search_neighbors(MatrixView(a, 2, 2), MatrixView(a, 2, 2),
                                SearchPlan{short_cut, none, 1}, sink),
               InvalidArgument);
}

TEST(TopR, ExcludesSelfByIdAndClampsScores) {
  auto set = fixtures::make_set({1, 0, 1, 0, 0, 1}, 3, 2, {"a", "a", "b"});
  const auto unit = normalize_rows(set);
  const std::vector<std::size_t> cutoffs = {2, 2, 2};
  const auto res = top_r_neighbors(unit, unit, cutoffs);
  ASSERT_EQ(res.size(), 3u);
  EXPECT_EQ(res[0].query_id, "img0");
  EXPECT_EQ(res[0].ranked_ids, (std::vector<std::string>{"img1", "img2"}));
  EXPECT_EQ(res[2].ranked_ids, (std::vector<std::string>{"img0", "img1"}));
  for (const auto& r : res) {
    for (double s : r.scores) {
      EXPECT_LE(s, 1.0);
      EXPECT_GE(s, -1.0);
    }
  }
  SearchOptions keep;
  keep.exclude_self = false;
  const auto with_self = top_r_neighbors(unit, unit, cutoffs, keep);
  EXPECT_EQ(with_self[0].ranked_ids, (std::vector<std::string>{"img0", "img1"}));
}
