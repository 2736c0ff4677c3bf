#pragma once

#include <map>
#include <memory>
#include <stdexcept>
#include <string>
#include <utility>

#include <gmpxx.h>

namespace exdes {

class ParseError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Values for the symbols an expression may use: q, a = log_p q, eps = +-1
// and e = gcd(3, q - eps).
struct ExprVars {
  mpq_class q = 0;
  mpq_class a = 0;
  int eps = 1;
  int e = 1;
};

// Monomial q^i a^j -> coefficient, with eps and e already substituted.
using BiPoly = std::map<std::pair<long, long>, mpq_class>;

// Leading behaviour of a rational function in (q, a) as q -> infinity,
// treating a as growing slower than any power of q.
struct LeadingTerm {
  long q_degree = 0;
  long a_degree = 0;
  mpq_class coeff = 0;
};

// Arithmetic expression over integers and the symbols above, with + - * /
// ^ and parentheses.  Exponents must be constant non-negative integers.
class Expr {
 public:
  Expr() = default;
  static Expr parse(const std::string &src);

  mpq_class eval(const ExprVars &vars) const;
  LeadingTerm leading(int eps, int e) const;
  bool uses(const std::string &symbol) const;
  const std::string &source() const { return src_; }

  struct Node;

 private:
  std::shared_ptr<const Node> root_;
  std::string src_;
};

}  // namespace exdes
