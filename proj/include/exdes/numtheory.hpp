#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <utility>
#include <vector>

#include <gmpxx.h>

namespace exdes {

using BigInt = mpz_class;

struct Factorization {
  std::vector<std::pair<BigInt, unsigned>> factors;  // increasing primes

  BigInt value() const;
};

// Raised when Pollard rho runs out of budget; carries the unsplit part.
class FactorizationError : public std::runtime_error {
 public:
  FactorizationError(const std::string &what, BigInt cofactor)
      : std::runtime_error(what), cofactor_(std::move(cofactor)) {}
  const BigInt &cofactor() const { return cofactor_; }

 private:
  BigInt cofactor_;
};

bool is_prime(const BigInt &n);

// Trial division, then Brent's variant of Pollard rho.  `budget` caps the
// total number of rho iterations.
Factorization factorize(const BigInt &n, std::uint64_t budget = 100'000'000);

std::vector<BigInt> divisors(const Factorization &f);

// Largest power of p dividing n (n != 0).
BigInt p_part(const BigInt &n, unsigned long p);

struct PrimePower {
  std::uint64_t q;
  std::uint64_t p;
  unsigned a;
};

std::optional<PrimePower> as_prime_power(std::uint64_t q);
std::vector<PrimePower> prime_powers_up_to(std::uint64_t qmax);

}  // namespace exdes
