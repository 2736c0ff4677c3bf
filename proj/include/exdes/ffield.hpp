#pragma once

#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace exdes {

// Thrown for arguments outside an operation's domain (zero inverse,
// unsupported characteristic, q out of range, ...).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// An element of GF(p^a), identified by its label sum c_i p^i where c_i are the
// coefficients of its polynomial representative.  Arithmetic goes through the
// owning FieldCtx.
struct FieldElement {
  std::uint32_t label = 0;

  friend bool operator==(FieldElement, FieldElement) = default;
  friend auto operator<=>(FieldElement, FieldElement) = default;
};

class FieldCtx {
 public:
  // p in {2, 3}, a odd and >= 3.
  FieldCtx(unsigned p, unsigned a);

  unsigned p() const { return p_; }
  unsigned degree() const { return a_; }
  unsigned m() const { return (a_ - 1) / 2; }
  std::uint32_t order() const { return q_; }

  // Non-leading coefficients c_0 .. c_{a-1} of the defining polynomial.
  std::span<const unsigned> modulus() const { return modulus_; }
  std::string modulus_string() const;

  FieldElement zero() const { return {0}; }
  FieldElement one() const { return {1}; }
  FieldElement from_int(long long n) const;
  FieldElement from_coeffs(std::span<const unsigned> coeffs) const;
  std::vector<unsigned> coeffs(FieldElement x) const;

  FieldElement add(FieldElement x, FieldElement y) const;
  FieldElement sub(FieldElement x, FieldElement y) const;
  FieldElement neg(FieldElement x) const;
  FieldElement mul(FieldElement x, FieldElement y) const;
  FieldElement inv(FieldElement x) const;
  FieldElement div(FieldElement x, FieldElement y) const { return mul(x, inv(y)); }
  FieldElement pow(FieldElement x, long long n) const;

  // x -> x^p
  FieldElement frobenius(FieldElement x) const;
  // x -> x^(p^(m+1)); applying it twice gives the Frobenius map.
  FieldElement theta(FieldElement x) const;
  // x -> x^(p^k)
  FieldElement frobenius_power(FieldElement x, unsigned k) const;

  // Smallest-label generator of the multiplicative group.
  FieldElement primitive() const { return {exp_[1]}; }
  // Discrete log base primitive(); x must be nonzero.
  std::uint32_t log(FieldElement x) const;
  FieldElement exp(long long n) const;

  std::vector<FieldElement> elements() const;

 private:
  unsigned p_;
  unsigned a_;
  std::uint32_t q_;
  std::vector<unsigned> modulus_;
  std::vector<std::uint32_t> exp_;  // exp_[i] = g^i, length q-1
  std::vector<std::uint32_t> log_;  // log_[x] for x != 0
  std::vector<std::uint32_t> add_;  // full addition table when q is small
  std::vector<std::uint32_t> neg_;
  std::uint32_t theta_exp_;         // p^(m+1) mod (q-1)

  std::uint32_t add_digits(std::uint32_t x, std::uint32_t y) const;
};

// Monic polynomial of degree a over GF(p) with the smallest label among the
// irreducible ones; returned as its non-leading coefficients.
std::vector<unsigned> smallest_irreducible(unsigned p, unsigned a);

// Decomposes q = p^a with p in {2, 3} and a odd >= 3 (the fields carrying a
// Suzuki or Ree group); throws DomainError otherwise.
std::pair<unsigned, unsigned> twisted_field_params(std::uint64_t q);

}  // namespace exdes
