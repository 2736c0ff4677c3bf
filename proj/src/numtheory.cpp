#include "exdes/numtheory.hpp"

#include <algorithm>
#include <map>
#include <numeric>

namespace exdes {

namespace {

std::vector<std::uint32_t> small_primes(std::uint32_t limit) {
  std::vector<char> composite(limit + 1, 0);
  std::vector<std::uint32_t> out;
  for (std::uint32_t i = 2; i <= limit; ++i) {
    if (composite[i])
      continue;
    out.push_back(i);
    for (std::uint64_t j = std::uint64_t(i) * i; j <= limit; j += i)
      composite[j] = 1;
  }
  return out;
}

using u64 = std::uint64_t;
using u128 = unsigned __int128;

u64 mulmod(u64 a, u64 b, u64 m) { return static_cast<u64>(u128(a) * b % m); }

// One divisor of the composite n, or 0 when the budget runs out.
u64 rho64(u64 n, std::uint64_t &budget) {
  if (n % 2 == 0)
    return 2;
  for (u64 c = 1; budget > 0; ++c) {
    u64 y = 2, x = 2, ys = 2, g = 1, q = 1;
    u64 r = 1;
    constexpr u64 m = 128;
    auto f = [&](u64 v) { return (mulmod(v, v, n) + c) % n; };
    do {
      x = y;
      for (u64 i = 0; i < r; ++i)
        y = f(y);
      for (u64 k = 0; k < r && g == 1; k += m) {
        ys = y;
        for (u64 i = 0; i < std::min(m, r - k); ++i) {
          y = f(y);
          q = mulmod(q, x > y ? x - y : y - x, n);
        }
        g = std::gcd(q, n);
        budget = budget > m ? budget - m : 0;
      }
      r *= 2;
    } while (g == 1 && budget > 0);
    if (g == n) {
      do {
        ys = f(ys);
        g = std::gcd(x > ys ? x - ys : ys - x, n);
      } while (g == 1);
    }
    if (g != n && g != 1)
      return g;
  }
  return 0;
}

BigInt rho_big(const BigInt &n, std::uint64_t &budget) {
  if (mpz_even_p(n.get_mpz_t()))
    return 2;
  for (unsigned long c = 1; budget > 0; ++c) {
    BigInt y = 2, x = 2, ys = 2, g = 1, q = 1, t;
    std::uint64_t r = 1;
    constexpr std::uint64_t m = 128;
    auto f = [&](BigInt &v) {
      v = v * v + c;
      mpz_mod(v.get_mpz_t(), v.get_mpz_t(), n.get_mpz_t());
    };
    do {
      x = y;
      for (std::uint64_t i = 0; i < r; ++i)
        f(y);
      for (std::uint64_t k = 0; k < r && g == 1; k += m) {
        ys = y;
        for (std::uint64_t i = 0; i < std::min(m, r - k); ++i) {
          f(y);
          t = abs(x - y);
          q = q * t;
          mpz_mod(q.get_mpz_t(), q.get_mpz_t(), n.get_mpz_t());
        }
        mpz_gcd(g.get_mpz_t(), q.get_mpz_t(), n.get_mpz_t());
        budget = budget > m ? budget - m : 0;
      }
      r *= 2;
    } while (g == 1 && budget > 0);
    if (g == n) {
      do {
        f(ys);
        t = abs(x - ys);
        mpz_gcd(g.get_mpz_t(), t.get_mpz_t(), n.get_mpz_t());
      } while (g == 1);
    }
    if (g != n && g != 1)
      return g;
  }
  return 0;
}

}  // namespace

BigInt Factorization::value() const {
  BigInt v = 1;
  for (const auto &[p, e] : factors) {
    BigInt pe;
    mpz_pow_ui(pe.get_mpz_t(), p.get_mpz_t(), e);
    v *= pe;
  }
  return v;
}

bool is_prime(const BigInt &n) {
  return n >= 2 && mpz_probab_prime_p(n.get_mpz_t(), 30) > 0;
}

Factorization factorize(const BigInt &n, std::uint64_t budget) {
  if (n < 1)
    throw std::invalid_argument("factorize needs n >= 1");
  static const std::vector<std::uint32_t> primes = small_primes(10000);
  std::map<BigInt, unsigned> found;
  BigInt m = n;
  for (std::uint32_t p : primes) {
    if (BigInt(p) * p > m)
      break;
    while (mpz_divisible_ui_p(m.get_mpz_t(), p)) {
      ++found[p];
      m /= p;
    }
  }
  std::vector<BigInt> stack;
  if (m > 1)
    stack.push_back(m);
  while (!stack.empty()) {
    BigInt x = stack.back();
    stack.pop_back();
    if (x == 1)
      continue;
    if (is_prime(x)) {
      ++found[x];
      continue;
    }
    BigInt d;
    if (x.fits_ulong_p()) {
      const u64 r = rho64(x.get_ui(), budget);
      d = static_cast<unsigned long>(r);
    } else {
      d = rho_big(x, budget);
    }
    if (d == 0)
      throw FactorizationError("factorization budget exhausted", x);
    stack.push_back(d);
    stack.push_back(x / d);
  }
  Factorization f;
  for (auto &[p, e] : found)
    f.factors.emplace_back(p, e);
  return f;
}

std::vector<BigInt> divisors(const Factorization &f) {
  std::vector<BigInt> out{1};
  for (const auto &[p, e] : f.factors) {
    const std::size_t n = out.size();
    BigInt pk = 1;
    for (unsigned k = 1; k <= e; ++k) {
      pk *= p;
      for (std::size_t i = 0; i < n; ++i)
        out.push_back(out[i] * pk);
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

BigInt p_part(const BigInt &n, unsigned long p) {
  if (n == 0)
    throw std::invalid_argument("p-part of zero");
  BigInt m = abs(n), r = 1;
  while (mpz_divisible_ui_p(m.get_mpz_t(), p)) {
    m /= p;
    r *= p;
  }
  return r;
}

std::optional<PrimePower> as_prime_power(std::uint64_t q) {
  if (q < 2)
    return std::nullopt;
  for (std::uint64_t p = 2; p * p <= q; ++p) {
    if (q % p)
      continue;
    std::uint64_t x = q;
    unsigned a = 0;
    while (x % p == 0) {
      x /= p;
      ++a;
    }
    if (x != 1)
      return std::nullopt;
    return PrimePower{q, p, a};
  }
  return PrimePower{q, q, 1};
}

std::vector<PrimePower> prime_powers_up_to(std::uint64_t qmax) {
  std::vector<PrimePower> out;
  if (qmax < 2)
    return out;
  if (qmax > (1ull << 32))
    throw std::invalid_argument("prime power bound too large");
  for (std::uint32_t p : small_primes(static_cast<std::uint32_t>(qmax))) {
    std::uint64_t q = p;
    for (unsigned a = 1; q <= qmax; ++a, q *= p)
      out.push_back({q, p, a});
  }
  std::sort(out.begin(), out.end(),
            [](const PrimePower &x, const PrimePower &y) { return x.q < y.q; });
  return out;
}

}  // namespace exdes
