#include <gtest/gtest.h>

#include <vector>

#include "exdes/ffield.hpp"

using namespace exdes;

namespace {

// Schoolbook arithmetic on coefficient vectors, reduced by the monic modulus.
struct PolyOracle {
  unsigned p, a;
  std::vector<unsigned> mod;  // non-leading coefficients

  std::vector<unsigned> coeffs(std::uint32_t label) const {
    std::vector<unsigned> c(a);
    for (unsigned i = 0; i < a; ++i, label /= p)
      c[i] = label % p;
    return c;
  }
  std::uint32_t label(const std::vector<unsigned> &c) const {
    std::uint32_t l = 0;
    for (unsigned i = a; i-- > 0;)
      l = l * p + c[i];
    return l;
  }
  std::uint32_t add(std::uint32_t x, std::uint32_t y) const {
    auto cx = coeffs(x), cy = coeffs(y);
    for (unsigned i = 0; i < a; ++i)
      cx[i] = (cx[i] + cy[i]) % p;
    return label(cx);
  }
  std::uint32_t mul(std::uint32_t x, std::uint32_t y) const {
    const auto cx = coeffs(x), cy = coeffs(y);
    std::vector<unsigned> prod(2 * a - 1, 0);
    for (unsigned i = 0; i < a; ++i)
      for (unsigned j = 0; j < a; ++j)
        prod[i + j] = (prod[i + j] + cx[i] * cy[j]) % p;
    // x^a = -sum mod_i x^i
    for (unsigned d = 2 * a - 2; d >= a; --d) {
      const unsigned c = prod[d];
      prod[d] = 0;
      for (unsigned i = 0; i < a; ++i)
        prod[d - a + i] = (prod[d - a + i] + (p - mod[i]) * c) % p;
    }
    prod.resize(a);
    return label(prod);
  }
};

PolyOracle oracle_for(const FieldCtx &f) {
  return {f.p(), f.degree(), {f.modulus().begin(), f.modulus().end()}};
}

// No monic factor of degree 1..a/2, by trial multiplication of all pairs.
bool irreducible_by_search(unsigned p, unsigned a, const std::vector<unsigned> &mod) {
  std::vector<unsigned> target(mod);
  target.push_back(1);
  auto count = [&](unsigned d) {
    unsigned n = 1;
    for (unsigned i = 0; i < d; ++i)
      n *= p;
    return n;
  };
  for (unsigned d = 1; d <= a / 2; ++d) {
    const unsigned e = a - d;
    for (unsigned f = 0; f < count(d); ++f)
      for (unsigned g = 0; g < count(e); ++g) {
        std::vector<unsigned> cf(d + 1), cg(e + 1), prod(a + 1, 0);
        for (unsigned i = 0, x = f; i < d; ++i, x /= p)
          cf[i] = x % p;
        for (unsigned i = 0, x = g; i < e; ++i, x /= p)
          cg[i] = x % p;
        cf[d] = cg[e] = 1;
        for (unsigned i = 0; i <= d; ++i)
          for (unsigned j = 0; j <= e; ++j)
            prod[i + j] = (prod[i + j] + cf[i] * cg[j]) % p;
        if (prod == target)
          return false;
      }
  }
  return true;
}

class SmallFields : public ::testing::TestWithParam<std::pair<unsigned, unsigned>> {};

}  // namespace

TEST_P(SmallFields, AdditionAndMultiplicationMatchPolynomialOracle) {
  const FieldCtx f(GetParam().first, GetParam().second);
  const PolyOracle o = oracle_for(f);
  for (std::uint32_t x = 0; x < f.order(); ++x)
    for (std::uint32_t y = 0; y < f.order(); ++y) {
      ASSERT_EQ(f.add({x}, {y}).label, o.add(x, y));
      ASSERT_EQ(f.mul({x}, {y}).label, o.mul(x, y));
    }
}

TEST_P(SmallFields, FieldAxiomsHoldExhaustively) {
  const FieldCtx f(GetParam().first, GetParam().second);
  const auto els = f.elements();
  ASSERT_EQ(els.size(), f.order());
  for (auto x : els) {
    EXPECT_EQ(f.add(x, f.zero()), x);
    EXPECT_EQ(f.mul(x, f.one()), x);
    EXPECT_EQ(f.add(x, f.neg(x)), f.zero());
    EXPECT_EQ(f.sub(x, x), f.zero());
    if (x != f.zero())
      EXPECT_EQ(f.mul(x, f.inv(x)), f.one());
    for (auto y : els) {
      ASSERT_EQ(f.add(x, y), f.add(y, x));
      ASSERT_EQ(f.mul(x, y), f.mul(y, x));
      for (auto z : els) {
        ASSERT_EQ(f.add(f.add(x, y), z), f.add(x, f.add(y, z)));
        ASSERT_EQ(f.mul(f.mul(x, y), z), f.mul(x, f.mul(y, z)));
        ASSERT_EQ(f.mul(x, f.add(y, z)), f.add(f.mul(x, y), f.mul(x, z)));
      }
    }
  }
}

TEST_P(SmallFields, ThetaSquaredIsFrobenius) {
  const FieldCtx f(GetParam().first, GetParam().second);
  for (auto x : f.elements()) {
    EXPECT_EQ(f.theta(f.theta(x)), f.frobenius(x));
    EXPECT_EQ(f.frobenius(x), f.pow(x, f.p()));
    for (auto y : f.elements()) {
      ASSERT_EQ(f.theta(f.mul(x, y)), f.mul(f.theta(x), f.theta(y)));
      ASSERT_EQ(f.theta(f.add(x, y)), f.add(f.theta(x), f.theta(y)));
    }
  }
}

TEST_P(SmallFields, ModulusIsIrreducibleAndPrimitiveGeneratesUnits) {
  const FieldCtx f(GetParam().first, GetParam().second);
  EXPECT_TRUE(irreducible_by_search(f.p(), f.degree(),
                                    {f.modulus().begin(), f.modulus().end()}));
  std::vector<bool> seen(f.order(), false);
  FieldElement x = f.one();
  for (std::uint32_t i = 0; i + 1 < f.order(); ++i) {
    EXPECT_FALSE(seen[x.label]);
    seen[x.label] = true;
    EXPECT_EQ(f.log(x), i);
    EXPECT_EQ(f.exp(i), x);
    x = f.mul(x, f.primitive());
  }
  EXPECT_EQ(x, f.one());
}

INSTANTIATE_TEST_SUITE_P(UpTo32, SmallFields,
                         ::testing::Values(std::pair{2u, 3u}, std::pair{3u, 3u},
                                           std::pair{2u, 5u}));

TEST(FieldCtx, ModulusStrings) {
  EXPECT_EQ(FieldCtx(2, 3).modulus_string(), "x^3 + x + 1");
  EXPECT_EQ(FieldCtx(3, 3).modulus_string(), "x^3 + 2*x + 1");
  EXPECT_EQ(FieldCtx(2, 5).modulus_string(), "x^5 + x^2 + 1");
}

TEST(FieldCtx, LargerFieldsStillSatisfyThetaIdentity) {
  for (auto [p, a] : {std::pair{2u, 7u}, std::pair{3u, 5u}}) {
    const FieldCtx f(p, a);
    for (auto x : f.elements())
      ASSERT_EQ(f.theta(f.theta(x)), f.frobenius(x));
  }
}

TEST(FieldCtx, RejectsUnsupportedParameters) {
  EXPECT_THROW(FieldCtx(5, 3), DomainError);
  EXPECT_THROW(FieldCtx(2, 4), DomainError);
  EXPECT_THROW(FieldCtx(2, 1), DomainError);
  const FieldCtx f(2, 3);
  EXPECT_THROW(f.inv(f.zero()), DomainError);
  EXPECT_THROW(f.log(f.zero()), DomainError);
}

TEST(FieldCtx, TwistedFieldParams) {
  EXPECT_EQ(twisted_field_params(8), std::make_pair(2u, 3u));
  EXPECT_EQ(twisted_field_params(27), std::make_pair(3u, 3u));
  EXPECT_EQ(twisted_field_params(32), std::make_pair(2u, 5u));
  EXPECT_THROW(twisted_field_params(9), DomainError);
  EXPECT_THROW(twisted_field_params(2), DomainError);
  EXPECT_THROW(twisted_field_params(12), DomainError);
}

TEST(FieldCtx, FromIntReducesModP) {
  const FieldCtx f(3, 3);
  EXPECT_EQ(f.from_int(4), f.one());
  EXPECT_EQ(f.from_int(-1), f.neg(f.one()));
}
