#include <gtest/gtest.h>

#include <algorithm>
#include <map>
#include <numeric>

#include <nlohmann/json.hpp>

#include "exdes/families.hpp"

using namespace exdes;

namespace {

// Pair counts straight from the block list, as a histogram count -> pairs.
std::map<std::uint64_t, std::uint64_t> pair_histogram(const IncidenceStructure &s) {
  const std::size_t v = s.v();
  std::vector<std::uint32_t> c(v * v, 0);
  for (std::size_t i = 0; i < s.num_blocks(); ++i) {
    const auto b = s.block(i);
    for (std::size_t x = 0; x < b.size(); ++x)
      for (std::size_t y = x + 1; y < b.size(); ++y)
        ++c[b[x] * v + b[y]];
  }
  std::map<std::uint64_t, std::uint64_t> h;
  for (std::size_t x = 0; x < v; ++x)
    for (std::size_t y = x + 1; y < v; ++y)
      ++h[c[x * v + y]];
  return h;
}

bool block_is_fixed(const Permutation &g, std::span<const Point> block) {
  std::vector<Point> img;
  for (Point x : block)
    img.push_back(g(x));
  std::sort(img.begin(), img.end());
  return std::equal(img.begin(), img.end(), block.begin(), block.end());
}

const GroupContext &sz8() {
  static const GroupContext g = build_suzuki(8);
  return g;
}

const GroupContext &ree27() {
  static const GroupContext g = build_ree(27);
  return g;
}

}  // namespace

TEST(Families, NamesAndVariants) {
  EXPECT_EQ(parse_family("suzuki-a"), Family::A);
  EXPECT_EQ(parse_family("ree-unital"), Family::B);
  EXPECT_EQ(parse_family("ree-b"), Family::B);
  EXPECT_EQ(parse_family("C"), Family::C);
  EXPECT_EQ(parse_family("ree-d"), Family::D);
  EXPECT_THROW(parse_family("e"), std::invalid_argument);
  EXPECT_EQ(family_variants(Family::C),
            (std::vector<std::string>{"center", "centralizer"}));
  EXPECT_EQ(family_group(Family::A), GroupKind::Suzuki);
  EXPECT_EQ(family_group(Family::D), GroupKind::Ree);
}

TEST(Families, ExpectedParamsSatisfyDesignIdentities) {
  for (Family f : {Family::A, Family::B, Family::C, Family::D})
    for (std::uint64_t q : {8u, 27u, 32u, 128u, 243u, 2187u}) {
      const auto p = expected_params(f, q);
      EXPECT_EQ(p.v * p.r, p.b * p.k);
      EXPECT_EQ(p.r * (p.k - 1), p.lambda * (p.v - 1));
      EXPECT_EQ(std::gcd(p.r, p.lambda), 1u);
    }
  const auto a = expected_params(Family::A, 8);
  EXPECT_EQ(a.v, 65u);
  EXPECT_EQ(a.b, 520u);
  const auto b = expected_params(Family::B, 27);
  EXPECT_EQ(b.v, 19684u);
  EXPECT_EQ(b.b, 512487u);
  EXPECT_EQ(b.k, 28u);
}

TEST(Families, SuzukiQ8MatchesPairOracle) {
  ConstructOptions o;
  o.full_pairs = true;
  const Construction c = construct(Family::A, sz8(), o);
  EXPECT_EQ(c.params.v, 65u);
  EXPECT_EQ(c.params.b, 520u);
  EXPECT_EQ(c.params.r, 64u);
  EXPECT_EQ(c.params.k, 8u);
  EXPECT_EQ(c.params.lambda, 7u);
  EXPECT_TRUE(c.params.flag_transitive);
  EXPECT_TRUE(c.params.r_coprime_lambda);
  EXPECT_EQ(pair_histogram(c.design), (std::map<std::uint64_t, std::uint64_t>{{7, 2080}}));
  EXPECT_EQ(c.lambda_exhaustive.pairs_checked, 2080u);
  for (const auto &chk : c.checks)
    EXPECT_TRUE(chk.ok) << chk.name;
  // the centre of Q and the torus both stabilise the base block
  std::vector<Permutation> k0 = conjugate_subgroup(c.group, c.group.center_gens, 1);
  k0.insert(k0.end(), c.group.torus_gens.begin(), c.group.torus_gens.end());
  for (const auto &g : k0)
    EXPECT_TRUE(block_is_fixed(g, c.base_block));
}

TEST(Families, SuzukiQ32) {
  const Construction c = construct(Family::A, 32);
  const auto ex = expected_params(Family::A, 32);
  EXPECT_EQ(c.params.b, ex.b);
  EXPECT_EQ(c.params.lambda, ex.lambda);
  EXPECT_TRUE(c.lambda_exhaustive.constant);
  EXPECT_EQ(c.lambda_exhaustive.pairs_checked, 1025u * 1024u / 2u);
}

TEST(Families, ReeUnitalBlocksAreInvolutionFixedSets) {
  const Construction c = construct(Family::B, ree27());
  const auto ex = expected_params(Family::B, 27);
  EXPECT_EQ(c.params.b, ex.b);
  EXPECT_EQ(c.params.r, ex.r);
  EXPECT_EQ(c.params.lambda, 1u);
  EXPECT_TRUE(c.params.flag_transitive);
  EXPECT_EQ(c.base_block, fixed_points(find_involution(c.group, 0xDE516)));
  EXPECT_EQ(c.lambda_sampled.pairs_checked, 100000u);
  EXPECT_TRUE(c.lambda_sampled.constant);
  EXPECT_EQ(c.lambda_transitive.lambda, 1u);
}

TEST(Families, WrongGroupKindIsRejected) {
  EXPECT_THROW(construct(Family::B, sz8()), std::invalid_argument);
  ConstructOptions o;
  o.variant = "centralizer";
  EXPECT_THROW(construct(Family::A, sz8(), o), std::invalid_argument);
}

TEST(Verify, AcceptsConstructionAndRejectsTampering) {
  const Construction c = construct(Family::A, sz8());
  VerifyOptions vo;
  vo.brute_force = true;
  const VerifyReport ok = verify_design(c.group, c.design, vo);
  EXPECT_TRUE(ok.ok());
  ASSERT_TRUE(ok.closure);
  EXPECT_TRUE(ok.closure->closed);
  EXPECT_EQ(ok.exhaustive.pairs_checked, 2080u);
  EXPECT_EQ(verify_report_to_json(ok)["verdict"], "verified");

  // drop one block
  auto j = design_to_json(c.design);
  j["blocks"].erase(j["blocks"].begin());
  const VerifyReport dropped = verify_design(c.group, design_from_json(j), vo);
  EXPECT_FALSE(dropped.ok());

  // move one point of one block
  j = design_to_json(c.design);
  auto blk = j["blocks"][0].get<std::vector<Point>>();
  for (Point x = 0; x < 65; ++x)
    if (std::find(blk.begin(), blk.end(), x) == blk.end()) {
      blk[0] = x;
      break;
    }
  j["blocks"][0] = blk;
  const VerifyReport moved = verify_design(c.group, design_from_json(j), vo);
  EXPECT_FALSE(moved.ok());
  EXPECT_EQ(verify_report_to_json(moved)["verdict"], "failed");
  EXPECT_FALSE(moved.failed.empty());

  // wrong number of points
  const VerifyReport wrong = verify_design(ree27(), c.design, vo);
  EXPECT_FALSE(wrong.ok());
}

TEST(Construction, JsonIsDeterministic) {
  const Construction a = construct(Family::A, sz8());
  const Construction b = construct(Family::A, sz8());
  EXPECT_EQ(construction_to_json(a, true).dump(), construction_to_json(b, true).dump());
  const auto j = construction_to_json(a, true);
  EXPECT_EQ(j["family"], "a");
  EXPECT_EQ(j["params"]["b"], 520);
  EXPECT_EQ(j["design"]["blocks"].size(), 520u);
  EXPECT_FALSE(construction_to_json(a, false).contains("design"));
}
