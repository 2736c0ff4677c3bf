#include <gtest/gtest.h>

#include <algorithm>
#include <map>
#include <numeric>

#include <nlohmann/json.hpp>

#include "exdes/design.hpp"

using namespace exdes;

namespace {

Permutation from_map(std::size_t n, auto f) {
  std::vector<Point> im(n);
  for (Point x = 0; x < n; ++x)
    im[x] = f(x);
  return Permutation(im);
}

// x -> x+1 and x -> 2x on Z/7: a group of order 21, transitive but not
// 2-transitive, preserving the Fano plane of the difference set {0, 1, 3}.
std::vector<Permutation> fano_group() {
  return {from_map(7, [](Point x) { return (x + 1) % 7; }),
          from_map(7, [](Point x) { return (2 * x) % 7; })};
}

// AGL(2, 3) on the 9 points x + 3y: translations and two generators of GL(2, 3).
std::vector<Permutation> agl23() {
  auto pt = [](unsigned x, unsigned y) { return static_cast<Point>(x % 3 + 3 * (y % 3)); };
  return {from_map(9, [&](Point p) { return pt(p % 3 + 1, p / 3); }),
          from_map(9, [&](Point p) { return pt(p % 3, p / 3 + 1); }),
          from_map(9, [&](Point p) { return pt(p / 3, p % 3); }),
          from_map(9, [&](Point p) { return pt(p % 3 + p / 3, p / 3); })};
}

// Pair counts straight from the block list.
std::map<std::pair<Point, Point>, std::uint64_t> pair_counts(const IncidenceStructure &s) {
  std::map<std::pair<Point, Point>, std::uint64_t> c;
  for (Point x = 0; x < s.v(); ++x)
    for (Point y = x + 1; y < s.v(); ++y)
      c[{x, y}] = 0;
  for (std::size_t i = 0; i < s.num_blocks(); ++i) {
    const auto b = s.block(i);
    for (std::size_t a = 0; a < b.size(); ++a)
      for (std::size_t d = a + 1; d < b.size(); ++d)
        ++c[{b[a], b[d]}];
  }
  return c;
}

}  // namespace

TEST(IncidenceStructure, Canonicalises) {
  const IncidenceStructure s(5, {{3, 1}, {0, 4}, {1, 3}, {2, 0}});
  ASSERT_EQ(s.num_blocks(), 3u);
  EXPECT_EQ(std::vector<BlockPoint>(s.block(0).begin(), s.block(0).end()),
            (std::vector<BlockPoint>{0, 2}));
  EXPECT_EQ(std::vector<BlockPoint>(s.block(2).begin(), s.block(2).end()),
            (std::vector<BlockPoint>{1, 3}));
  EXPECT_EQ(s.uniform_size(), 2u);
  EXPECT_THROW(IncidenceStructure(3, {{0, 3}}), std::invalid_argument);
  EXPECT_THROW(IncidenceStructure(3, {{1, 1}}), std::invalid_argument);
  const IncidenceStructure mixed(4, {{0}, {1, 2}});
  EXPECT_FALSE(mixed.uniform_size());
}

TEST(BlockIndex, FindsEveryBlock) {
  const auto s = expand_base_block(fano_group(), 7, std::vector<Point>{0, 1, 3});
  const BlockIndex idx(s);
  for (std::size_t i = 0; i < s.num_blocks(); ++i)
    EXPECT_EQ(idx.find(s.block(i)), i);
  const std::vector<BlockPoint> missing{0, 1, 2};
  EXPECT_FALSE(idx.find(missing));
  EXPECT_EQ(hash_block(s.block(0)), hash_block(s.block(0)));
}

TEST(ExpandBaseBlock, FanoPlane) {
  const auto s = expand_base_block(fano_group(), 7, std::vector<Point>{0, 1, 3});
  EXPECT_EQ(s.num_blocks(), 7u);
  const auto p = compute_params(s);
  EXPECT_EQ(p.v, 7u);
  EXPECT_EQ(p.b, 7u);
  EXPECT_EQ(p.r, 3u);
  EXPECT_EQ(p.k, 3u);
  EXPECT_EQ(p.lambda, 1u);
  for (const auto &[pair, c] : pair_counts(s))
    EXPECT_EQ(c, 1u);
  const auto bf = verify_lambda_bruteforce(s);
  EXPECT_TRUE(bf.constant);
  EXPECT_EQ(bf.lambda, 1u);
  EXPECT_EQ(bf.pairs_checked, 21u);
  // the group is not 2-transitive, so the shortcut must refuse
  const Bsgs g = schreier_sims(fano_group(), 7);
  EXPECT_THROW(verify_lambda_2transitive(g, s, BlockIndex(s)), std::invalid_argument);
}

TEST(ExpandBaseBlock, ThreadCountDoesNotChangeResult) {
  const auto gens = agl23();
  const std::vector<Point> base{0, 1, 2};
  const auto a = expand_base_block(gens, 9, base, 1);
  const auto b = expand_base_block(gens, 9, base, 4);
  EXPECT_EQ(design_to_json(a), design_to_json(b));
  EXPECT_THROW(expand_base_block(gens, 9, base, 1, 5), std::length_error);
  EXPECT_THROW(expand_base_block(gens, 9, std::vector<Point>{}), std::invalid_argument);
  EXPECT_THROW(expand_base_block(gens, 9, std::vector<Point>{0, 0}), std::invalid_argument);
  EXPECT_THROW(expand_base_block(gens, 9, std::vector<Point>{0, 9}), std::invalid_argument);
}

TEST(Lambda, AffinePlaneAllMethodsAgree) {
  const auto gens = agl23();
  const Bsgs g = schreier_sims(gens, 9);
  EXPECT_EQ(g.order(), 432);
  ASSERT_TRUE(is_2_transitive(g));
  const auto s = expand_base_block(gens, 9, std::vector<Point>{0, 1, 2});
  EXPECT_EQ(s.num_blocks(), 12u);
  const BlockIndex idx(s);
  EXPECT_TRUE(check_block_closure(gens, s, idx).closed);
  const auto bf = verify_lambda_bruteforce(s, 2);
  const auto tr = verify_lambda_2transitive(g, s, idx);
  const auto sm = verify_lambda_sampled(s, 500, 3, 2);
  EXPECT_TRUE(bf.constant && tr.constant && sm.constant);
  EXPECT_EQ(bf.lambda, 1u);
  EXPECT_EQ(tr.lambda, 1u);
  EXPECT_EQ(sm.lambda, 1u);
  EXPECT_EQ(sm.pairs_checked, 500u);
  EXPECT_TRUE(is_flag_transitive(g, point_stabilizer(g, 0), s, idx));
}

TEST(Lambda, DetectsNonDesign) {
  // two blocks through {0, 1}, none through {2, 3}
  const IncidenceStructure s(4, {{0, 1, 2}, {0, 1, 3}});
  const auto bf = verify_lambda_bruteforce(s);
  EXPECT_FALSE(bf.constant);
  ASSERT_TRUE(bf.witness);
  const auto counts = pair_counts(s);
  EXPECT_NE(counts.at(*bf.witness), bf.lambda);
  EXPECT_EQ(bf.witness_count, counts.at(*bf.witness));
  EXPECT_FALSE(verify_lambda_sampled(s, 200, 1).constant);
  EXPECT_THROW(verify_lambda_bruteforce(IncidenceStructure(3000, {{0, 1}}), 1, 2500),
               std::invalid_argument);
}

TEST(Closure, FindsMissingImage) {
  const auto gens = agl23();
  const IncidenceStructure s(9, {{0, 1, 2}});
  const auto c = check_block_closure(gens, s, BlockIndex(s));
  EXPECT_FALSE(c.closed);
  ASSERT_TRUE(c.witness);
  EXPECT_EQ(c.witness->first, 0u);
}

TEST(FlagTransitivity, FailsWhenStabiliserSplitsBlocksThroughAPoint) {
  // the translations alone are transitive on points but fix the lines
  // through 0 individually
  const auto all = agl23();
  const std::vector<Permutation> trans{all[0], all[1]};
  const Bsgs g = schreier_sims(trans, 9);
  const auto s = expand_base_block(all, 9, std::vector<Point>{0, 1, 2});
  EXPECT_FALSE(is_flag_transitive(g, point_stabilizer(g, 0), s, BlockIndex(s)));
}

TEST(Params, ArithmeticChecks) {
  DesignParams p;
  p.v = 65;
  p.b = 520;
  p.r = 64;
  p.k = 8;
  p.lambda = 7;
  for (const auto &c : arithmetic_checks(p))
    EXPECT_TRUE(c.ok) << c.name << ": " << c.detail;
  p.lambda = 14;  // r(k-1) != lambda(v-1), gcd(r, lambda) = 2
  const auto bad = arithmetic_checks(p);
  EXPECT_FALSE(bad[0].ok);
  EXPECT_FALSE(bad[2].ok);
  EXPECT_TRUE(bad[1].ok);
}

TEST(Params, JsonRoundTrip) {
  const auto s = expand_base_block(agl23(), 9, std::vector<Point>{0, 1, 2});
  const auto j = design_to_json(s);
  const auto back = design_from_json(nlohmann::json::parse(j.dump()));
  EXPECT_EQ(design_to_json(back), j);
  const auto pj = params_to_json(compute_params(s));
  EXPECT_EQ(pj["b"], 12);
  EXPECT_EQ(pj["r"], 4);
  EXPECT_EQ(pj["lambda"], 1);
}

TEST(IncidenceStructure, FromFlatMatchesNested) {
  const std::vector<BlockPoint> flat{3, 1, 0, 2};
  const auto a = IncidenceStructure::from_flat(4, 2, flat);
  const IncidenceStructure b(4, {{1, 3}, {0, 2}});
  EXPECT_EQ(design_to_json(a), design_to_json(b));
}
