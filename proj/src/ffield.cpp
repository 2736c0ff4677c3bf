#include "exdes/ffield.hpp"

#include <algorithm>
#include <sstream>

namespace exdes {

namespace {

using Poly = std::vector<unsigned>;  // coefficients, low degree first

void trim(Poly &f) {
  while (!f.empty() && f.back() == 0)
    f.pop_back();
}

// Remainder of f modulo the monic polynomial g.
Poly poly_mod(Poly f, const Poly &g, unsigned p) {
  trim(f);
  const std::size_t dg = g.size() - 1;
  while (f.size() > dg) {
    const unsigned lead = f.back();
    const std::size_t shift = f.size() - 1 - dg;
    for (std::size_t i = 0; i <= dg; ++i)
      f[shift + i] = (f[shift + i] + p * p - lead * g[i] % p) % p;
    trim(f);
  }
  return f;
}

Poly monic_from_label(std::uint32_t label, unsigned p, unsigned deg) {
  Poly f(deg + 1);
  for (unsigned i = 0; i < deg; ++i) {
    f[i] = label % p;
    label /= p;
  }
  f[deg] = 1;
  return f;
}

std::uint32_t ipow(unsigned b, unsigned e) {
  std::uint32_t r = 1;
  while (e--)
    r *= b;
  return r;
}

bool is_irreducible(const Poly &f, unsigned p) {
  const unsigned deg = static_cast<unsigned>(f.size() - 1);
  for (unsigned d = 1; 2 * d <= deg; ++d) {
    const std::uint32_t n = ipow(p, d);
    for (std::uint32_t l = 0; l < n; ++l)
      if (poly_mod(f, monic_from_label(l, p, d), p).empty())
        return false;
  }
  return true;
}

}  // namespace

std::vector<unsigned> smallest_irreducible(unsigned p, unsigned a) {
  const std::uint32_t n = ipow(p, a);
  for (std::uint32_t l = 0; l < n; ++l) {
    Poly f = monic_from_label(l, p, a);
    if (is_irreducible(f, p)) {
      f.pop_back();
      return f;
    }
  }
  throw DomainError("no irreducible polynomial found");
}

std::pair<unsigned, unsigned> twisted_field_params(std::uint64_t q) {
  for (unsigned p : {2u, 3u}) {
    std::uint64_t x = 1;
    unsigned a = 0;
    while (x < q) {
      x *= p;
      ++a;
    }
    if (x == q) {
      if (a < 3 || a % 2 == 0)
        throw DomainError("q = " + std::to_string(q) +
                          " must be an odd power >= 3 of its prime");
      return {p, a};
    }
  }
  throw DomainError("q = " + std::to_string(q) + " is not a power of 2 or 3");
}

FieldCtx::FieldCtx(unsigned p, unsigned a) : p_(p), a_(a) {
  if (p != 2 && p != 3)
    throw DomainError("characteristic must be 2 or 3");
  if (a < 3 || a % 2 == 0)
    throw DomainError("extension degree must be odd and at least 3");
  if (a > (p == 2 ? 19u : 13u))
    throw DomainError("field too large");
  q_ = ipow(p, a);
  modulus_ = smallest_irreducible(p, a);

  neg_.resize(q_);
  for (std::uint32_t x = 0; x < q_; ++x) {
    std::uint32_t r = 0, t = x, w = 1;
    for (unsigned i = 0; i < a_; ++i, w *= p_) {
      r += ((p_ - t % p_) % p_) * w;
      t /= p_;
    }
    neg_[x] = r;
  }
  if (p_ == 3 && q_ <= 729) {
    add_.resize(std::size_t(q_) * q_);
    for (std::uint32_t x = 0; x < q_; ++x)
      for (std::uint32_t y = 0; y < q_; ++y)
        add_[std::size_t(x) * q_ + y] = add_digits(x, y);
  }

  // multiplication by a candidate generator via shift-and-reduce on labels
  Poly g(modulus_);
  g.push_back(1);
  auto mul_poly = [&](std::uint32_t x, std::uint32_t y) {
    Poly fx = monic_from_label(x, p_, a_), fy = monic_from_label(y, p_, a_);
    fx.pop_back();
    fy.pop_back();
    Poly prod(2 * a_, 0);
    for (unsigned i = 0; i < a_; ++i)
      for (unsigned j = 0; j < a_; ++j)
        prod[i + j] = (prod[i + j] + fx[i] * fy[j]) % p_;
    Poly r = poly_mod(prod, g, p_);
    std::uint32_t label = 0;
    for (std::size_t i = r.size(); i-- > 0;)
      label = label * p_ + r[i];
    return label;
  };

  exp_.assign(q_ - 1, 0);
  log_.assign(q_, 0);
  for (std::uint32_t cand = 2; cand < q_; ++cand) {
    std::uint32_t x = 1, n = 0;
    do {
      exp_[n++] = x;
      x = mul_poly(x, cand);
    } while (x != 1 && n < q_ - 1);
    if (x == 1 && n == q_ - 1)
      break;
  }
  for (std::uint32_t i = 0; i < q_ - 1; ++i)
    log_[exp_[i]] = i;

  std::uint64_t t = 1;
  for (unsigned i = 0; i <= m(); ++i)
    t = t * p_ % (q_ - 1);
  theta_exp_ = static_cast<std::uint32_t>(t);
}

std::string FieldCtx::modulus_string() const {
  std::ostringstream os;
  os << "x^" << a_;
  for (unsigned i = a_; i-- > 0;) {
    const unsigned c = modulus_[i];
    if (c == 0)
      continue;
    os << " + ";
    if (c != 1 || i == 0)
      os << c;
    if (i >= 1)
      os << (c != 1 ? "*" : "") << "x";
    if (i > 1)
      os << "^" << i;
  }
  return os.str();
}

std::uint32_t FieldCtx::add_digits(std::uint32_t x, std::uint32_t y) const {
  std::uint32_t r = 0, w = 1;
  for (unsigned i = 0; i < a_; ++i, w *= p_) {
    r += ((x % p_ + y % p_) % p_) * w;
    x /= p_;
    y /= p_;
  }
  return r;
}

FieldElement FieldCtx::from_int(long long n) const {
  long long r = n % static_cast<long long>(p_);
  if (r < 0)
    r += p_;
  return {static_cast<std::uint32_t>(r)};
}

FieldElement FieldCtx::from_coeffs(std::span<const unsigned> coeffs) const {
  if (coeffs.size() > a_)
    throw DomainError("too many coefficients");
  std::uint32_t label = 0;
  for (std::size_t i = coeffs.size(); i-- > 0;) {
    if (coeffs[i] >= p_)
      throw DomainError("coefficient out of range");
    label = label * p_ + coeffs[i];
  }
  return {label};
}

std::vector<unsigned> FieldCtx::coeffs(FieldElement x) const {
  std::vector<unsigned> c(a_);
  std::uint32_t l = x.label;
  for (unsigned i = 0; i < a_; ++i) {
    c[i] = l % p_;
    l /= p_;
  }
  return c;
}

FieldElement FieldCtx::add(FieldElement x, FieldElement y) const {
  if (p_ == 2)
    return {x.label ^ y.label};
  if (!add_.empty())
    return {add_[std::size_t(x.label) * q_ + y.label]};
  return {add_digits(x.label, y.label)};
}

FieldElement FieldCtx::neg(FieldElement x) const { return {neg_[x.label]}; }

FieldElement FieldCtx::sub(FieldElement x, FieldElement y) const {
  return add(x, neg(y));
}

FieldElement FieldCtx::mul(FieldElement x, FieldElement y) const {
  if (x.label == 0 || y.label == 0)
    return {0};
  std::uint32_t e = log_[x.label] + log_[y.label];
  if (e >= q_ - 1)
    e -= q_ - 1;
  return {exp_[e]};
}

FieldElement FieldCtx::inv(FieldElement x) const {
  if (x.label == 0)
    throw DomainError("inverse of zero");
  const std::uint32_t l = log_[x.label];
  return {exp_[l == 0 ? 0 : q_ - 1 - l]};
}

FieldElement FieldCtx::pow(FieldElement x, long long n) const {
  if (x.label == 0) {
    if (n < 0)
      throw DomainError("negative power of zero");
    return {n == 0 ? 1u : 0u};
  }
  const long long ord = q_ - 1;
  long long e = (static_cast<long long>(log_[x.label]) * (n % ord)) % ord;
  if (e < 0)
    e += ord;
  return {exp_[e]};
}

FieldElement FieldCtx::frobenius(FieldElement x) const { return pow(x, p_); }

FieldElement FieldCtx::theta(FieldElement x) const { return pow(x, theta_exp_); }

FieldElement FieldCtx::frobenius_power(FieldElement x, unsigned k) const {
  long long e = 1;
  for (unsigned i = 0; i < k % a_; ++i)
    e *= p_;
  return pow(x, e);
}

std::uint32_t FieldCtx::log(FieldElement x) const {
  if (x.label == 0)
    throw DomainError("log of zero");
  return log_[x.label];
}

FieldElement FieldCtx::exp(long long n) const {
  const long long ord = q_ - 1;
  long long e = n % ord;
  if (e < 0)
    e += ord;
  return {exp_[e]};
}

std::vector<FieldElement> FieldCtx::elements() const {
  std::vector<FieldElement> out(q_);
  for (std::uint32_t i = 0; i < q_; ++i)
    out[i] = {i};
  return out;
}

}  // namespace exdes
