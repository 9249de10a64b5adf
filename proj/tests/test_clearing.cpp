#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <set>

#include "jasda/clearing.hpp"
#include "jasda/rng.hpp"
#include "test_support.hpp"

using namespace jasda;
using jasda_test::brute_force_wis;
using jasda_test::make_scored;

namespace {
std::vector<ScoredVariant> table3_pool() {
  return {make_scored("vA1", 40, 47, 0.67, "J_A"),
          make_scored("vA2", 47, 50, 0.64, "J_A"),
          make_scored("vB1", 40, 50, 0.72, "J_B")};
}

std::vector<ScoredVariant> random_pool(SplitMix64& rng, int max_size) {
  int m = 1 + static_cast<int>(rng.next_u64() % max_size);
  std::vector<ScoredVariant> pool;
  for (int i = 0; i < m; ++i) {
    Tick start = static_cast<Tick>(rng.next_u64() % 90);
    Tick len = 1 + static_cast<Tick>(rng.next_u64() % (100 - start));
    // scores on a 1e-6 grid so integer scaling is collision-free
    double score =
        static_cast<double>(rng.next_u64() % 1000000) * 1e-6;
    pool.push_back(
        make_scored("v" + std::to_string(i), start, start + len, score));
  }
  return pool;
}
}  // namespace

TEST_CASE("worked-example pool clears to the two-chunk packing") {
  ClearingResult result = select_best_compatible(table3_pool());
  REQUIRE(result.selected.size() == 2);
  CHECK(result.selected[0].variant.variant_id == "vA1");
  CHECK(result.selected[1].variant.variant_id == "vA2");
  CHECK(result.total_score == doctest::Approx(1.31).epsilon(1e-9));
  REQUIRE(result.rejected.size() == 1);
  CHECK(result.rejected[0] == "vB1");
}

TEST_CASE("empty and singleton pools") {
  ClearingResult empty = select_best_compatible({});
  CHECK(empty.selected.empty());
  CHECK(empty.total_score == 0.0);

  ClearingResult one =
      select_best_compatible({make_scored("only", 3, 9, 0.4)});
  REQUIRE(one.selected.size() == 1);
  CHECK(one.selected[0].variant.variant_id == "only");
}

TEST_CASE("touching intervals are compatible, overlapping are not") {
  auto touch = select_best_compatible({make_scored("a", 0, 5, 0.5),
                                       make_scored("b", 5, 10, 0.5)});
  CHECK(touch.selected.size() == 2);
  auto overlap = select_best_compatible({make_scored("a", 0, 6, 0.5),
                                         make_scored("b", 5, 10, 0.5)});
  CHECK(overlap.selected.size() == 1);
}

TEST_CASE("DP equals exhaustive optimum on random pools") {
  SplitMix64 rng(20240401);
  for (int trial = 0; trial < 200; ++trial) {
    auto pool = random_pool(rng, 15);
    ClearingResult result = select_best_compatible(pool);
    std::int64_t dp_total = 0;
    for (const auto& sv : result.selected) {
      dp_total += scaled_score(sv.score);
    }
    CHECK(dp_total == brute_force_wis(pool));

    // compatibility of the selection
    auto sel = result.selected;
    std::sort(sel.begin(), sel.end(),
              [](const ScoredVariant& a, const ScoredVariant& b) {
                return a.variant.t_start < b.variant.t_start;
              });
    for (std::size_t i = 1; i < sel.size(); ++i) {
      CHECK(sel[i - 1].variant.end() <= sel[i].variant.t_start);
    }
  }
}

TEST_CASE("adding a variant never lowers the optimum") {
  SplitMix64 rng(77);
  for (int trial = 0; trial < 100; ++trial) {
    auto pool = random_pool(rng, 10);
    ClearingResult before = select_best_compatible(pool);
    pool.push_back(random_pool(rng, 1).front());
    ClearingResult after = select_best_compatible(pool);
    CHECK(after.total_score >= before.total_score - 1e-12);
  }
}

TEST_CASE("positive scaling preserves the selected set") {
  SplitMix64 rng(123);
  for (int trial = 0; trial < 50; ++trial) {
    auto pool = random_pool(rng, 12);
    ClearingResult base = select_best_compatible(pool);
    auto scaled = pool;
    for (auto& sv : scaled) sv.score *= 0.5;
    ClearingResult half = select_best_compatible(scaled);
    std::set<std::string> a, b;
    for (const auto& sv : base.selected) a.insert(sv.variant.variant_id);
    for (const auto& sv : half.selected) b.insert(sv.variant.variant_id);
    CHECK(a == b);
  }
}

TEST_CASE("max_score_variant single winner semantics") {
  auto best = max_score_variant(table3_pool());
  REQUIRE(best.has_value());
  CHECK(best->variant.variant_id == "vB1");
  CHECK(best->score == doctest::Approx(0.72));

  CHECK_FALSE(max_score_variant({}).has_value());

  // equal scores: deterministic tie-break on (age anchor, variant id)
  auto a = make_scored("x2", 0, 5, 0.5);
  auto b = make_scored("x1", 5, 10, 0.5);
  auto tie = max_score_variant({a, b});
  REQUIRE(tie.has_value());
  CHECK(tie->variant.variant_id == "x1");

  auto older = make_scored("x9", 0, 5, 0.5);
  older.age_anchor = 1;
  auto younger = make_scored("x0", 5, 10, 0.5);
  younger.age_anchor = 7;
  auto tie2 = max_score_variant({younger, older});
  REQUIRE(tie2.has_value());
  CHECK(tie2->variant.variant_id == "x9");
}

TEST_CASE("clearing result bookkeeping") {
  auto pool = table3_pool();
  ClearingResult result = select_best_compatible(pool);
  double sum = 0.0;
  for (const auto& sv : result.selected) sum += sv.score;
  CHECK(result.total_score == doctest::Approx(sum).epsilon(1e-9));
  CHECK(result.selected.size() + result.rejected.size() == pool.size());
}
