#include "exdes/qexpr.hpp"

#include <cctype>
#include <vector>

namespace exdes {

struct Expr::Node {
  enum Kind { Num, Sym, Add, Sub, Mul, Div, Neg, Pow } kind = Num;
  mpq_class value;            // Num
  std::string symbol;         // Sym
  std::shared_ptr<const Node> lhs, rhs;
  unsigned long exponent = 0;  // Pow
};

namespace {

using NodePtr = std::shared_ptr<const Expr::Node>;

NodePtr make(Expr::Node::Kind k, NodePtr l, NodePtr r = nullptr) {
  auto n = std::make_shared<Expr::Node>();
  n->kind = k;
  n->lhs = std::move(l);
  n->rhs = std::move(r);
  return n;
}

bool is_constant(const Expr::Node &n) {
  if (n.kind == Expr::Node::Num)
    return true;
  if (n.kind == Expr::Node::Sym)
    return false;
  return (!n.lhs || is_constant(*n.lhs)) && (!n.rhs || is_constant(*n.rhs));
}

mpq_class eval_node(const Expr::Node &n, const ExprVars &v);

mpq_class pow_q(const mpq_class &b, unsigned long e) {
  mpq_class r;
  mpz_pow_ui(r.get_num_mpz_t(), b.get_num_mpz_t(), e);
  mpz_pow_ui(r.get_den_mpz_t(), b.get_den_mpz_t(), e);
  r.canonicalize();
  return r;
}

mpq_class eval_node(const Expr::Node &n, const ExprVars &v) {
  using K = Expr::Node;
  switch (n.kind) {
    case K::Num: return n.value;
    case K::Sym:
      if (n.symbol == "q") return v.q;
      if (n.symbol == "a") return v.a;
      if (n.symbol == "eps") return v.eps;
      return v.e;
    case K::Add: return eval_node(*n.lhs, v) + eval_node(*n.rhs, v);
    case K::Sub: return eval_node(*n.lhs, v) - eval_node(*n.rhs, v);
    case K::Mul: return eval_node(*n.lhs, v) * eval_node(*n.rhs, v);
    case K::Div: {
      const mpq_class d = eval_node(*n.rhs, v);
      if (d == 0)
        throw std::domain_error("division by zero");
      return eval_node(*n.lhs, v) / d;
    }
    case K::Neg: return -eval_node(*n.lhs, v);
    case K::Pow: return pow_q(eval_node(*n.lhs, v), n.exponent);
  }
  return 0;
}

class Parser {
 public:
  explicit Parser(const std::string &s) : s_(s) {}

  NodePtr parse() {
    NodePtr n = expr();
    skip();
    if (pos_ != s_.size())
      fail("unexpected '" + std::string(1, s_[pos_]) + "'");
    return n;
  }

 private:
  const std::string &s_;
  std::size_t pos_ = 0;

  [[noreturn]] void fail(const std::string &msg) {
    throw ParseError("cannot parse '" + s_ + "' at offset " +
                     std::to_string(pos_) + ": " + msg);
  }
  void skip() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_])))
      ++pos_;
  }
  bool eat(char c) {
    skip();
    if (pos_ < s_.size() && s_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  NodePtr expr() {
    NodePtr n = term();
    for (;;) {
      if (eat('+'))
        n = make(Expr::Node::Add, n, term());
      else if (eat('-'))
        n = make(Expr::Node::Sub, n, term());
      else
        return n;
    }
  }
  NodePtr term() {
    NodePtr n = unary();
    for (;;) {
      if (eat('*'))
        n = make(Expr::Node::Mul, n, unary());
      else if (eat('/'))
        n = make(Expr::Node::Div, n, unary());
      else
        return n;
    }
  }
  NodePtr unary() {
    if (eat('-'))
      return make(Expr::Node::Neg, unary());
    if (eat('+'))
      return unary();
    return power();
  }
  NodePtr power() {
    NodePtr base = atom();
    if (!eat('^'))
      return base;
    NodePtr ex = unary();
    if (!is_constant(*ex))
      fail("exponent must be a constant");
    const mpq_class e = eval_node(*ex, {});
    if (e.get_den() != 1 || e < 0 || e > 100000)
      fail("exponent must be a small non-negative integer");
    auto n = std::make_shared<Expr::Node>();
    n->kind = Expr::Node::Pow;
    n->lhs = base;
    n->exponent = e.get_num().get_ui();
    return n;
  }
  NodePtr atom() {
    skip();
    if (pos_ >= s_.size())
      fail("unexpected end of input");
    if (eat('(')) {
      NodePtr n = expr();
      if (!eat(')'))
        fail("missing ')'");
      return n;
    }
    const char c = s_[pos_];
    if (std::isdigit(static_cast<unsigned char>(c))) {
      std::size_t end = pos_;
      while (end < s_.size() && std::isdigit(static_cast<unsigned char>(s_[end])))
        ++end;
      auto n = std::make_shared<Expr::Node>();
      n->kind = Expr::Node::Num;
      n->value = mpq_class(mpz_class(s_.substr(pos_, end - pos_)));
      pos_ = end;
      return n;
    }
    if (std::isalpha(static_cast<unsigned char>(c))) {
      std::size_t end = pos_;
      while (end < s_.size() && std::isalnum(static_cast<unsigned char>(s_[end])))
        ++end;
      std::string name = s_.substr(pos_, end - pos_);
      if (name != "q" && name != "a" && name != "eps" && name != "e")
        fail("unknown symbol '" + name + "'");
      pos_ = end;
      auto n = std::make_shared<Expr::Node>();
      n->kind = Expr::Node::Sym;
      n->symbol = std::move(name);
      return n;
    }
    fail("unexpected '" + std::string(1, c) + "'");
  }
};

// Rational function num/den in (q, a).
struct RatFn {
  BiPoly num, den;
};

void trim(BiPoly &p) {
  for (auto it = p.begin(); it != p.end();)
    it = it->second == 0 ? p.erase(it) : std::next(it);
}

BiPoly constant(const mpq_class &c) {
  BiPoly p;
  if (c != 0)
    p[{0, 0}] = c;
  return p;
}

BiPoly add(const BiPoly &x, const BiPoly &y, int sign) {
  BiPoly r = x;
  for (const auto &[m, c] : y)
    r[m] += sign * c;
  trim(r);
  return r;
}

BiPoly mul(const BiPoly &x, const BiPoly &y) {
  BiPoly r;
  for (const auto &[mx, cx] : x)
    for (const auto &[my, cy] : y)
      r[{mx.first + my.first, mx.second + my.second}] += cx * cy;
  trim(r);
  return r;
}

RatFn to_ratfn(const Expr::Node &n, int eps, int e) {
  using K = Expr::Node;
  switch (n.kind) {
    case K::Num: return {constant(n.value), constant(1)};
    case K::Sym:
      if (n.symbol == "q") return {BiPoly{{{1, 0}, 1}}, constant(1)};
      if (n.symbol == "a") return {BiPoly{{{0, 1}, 1}}, constant(1)};
      return {constant(n.symbol == "eps" ? eps : e), constant(1)};
    case K::Add:
    case K::Sub: {
      const RatFn x = to_ratfn(*n.lhs, eps, e), y = to_ratfn(*n.rhs, eps, e);
      if (x.den == y.den)
        return {add(x.num, y.num, n.kind == K::Add ? 1 : -1), x.den};
      return {add(mul(x.num, y.den), mul(y.num, x.den), n.kind == K::Add ? 1 : -1),
              mul(x.den, y.den)};
    }
    case K::Mul: {
      const RatFn x = to_ratfn(*n.lhs, eps, e), y = to_ratfn(*n.rhs, eps, e);
      return {mul(x.num, y.num), mul(x.den, y.den)};
    }
    case K::Div: {
      const RatFn x = to_ratfn(*n.lhs, eps, e), y = to_ratfn(*n.rhs, eps, e);
      if (y.num.empty())
        throw std::domain_error("division by the zero polynomial");
      return {mul(x.num, y.den), mul(x.den, y.num)};
    }
    case K::Neg: {
      RatFn x = to_ratfn(*n.lhs, eps, e);
      for (auto &[m, c] : x.num)
        c = -c;
      return x;
    }
    case K::Pow: {
      RatFn base = to_ratfn(*n.lhs, eps, e), r{constant(1), constant(1)};
      for (unsigned long k = n.exponent; k; k >>= 1) {
        if (k & 1)
          r = {mul(r.num, base.num), mul(r.den, base.den)};
        if (k > 1)
          base = {mul(base.num, base.num), mul(base.den, base.den)};
      }
      return r;
    }
  }
  return {};
}

bool uses_node(const Expr::Node &n, const std::string &s) {
  if (n.kind == Expr::Node::Sym)
    return n.symbol == s;
  return (n.lhs && uses_node(*n.lhs, s)) || (n.rhs && uses_node(*n.rhs, s));
}

}  // namespace

Expr Expr::parse(const std::string &src) {
  Expr e;
  e.root_ = Parser(src).parse();
  e.src_ = src;
  return e;
}

mpq_class Expr::eval(const ExprVars &vars) const {
  if (!root_)
    throw std::logic_error("empty expression");
  return eval_node(*root_, vars);
}

LeadingTerm Expr::leading(int eps, int e) const {
  if (!root_)
    throw std::logic_error("empty expression");
  const RatFn f = to_ratfn(*root_, eps, e);
  if (f.num.empty())
    return {};
  const auto &[mn, cn] = *f.num.rbegin();
  const auto &[md, cd] = *f.den.rbegin();
  return {mn.first - md.first, mn.second - md.second, cn / cd};
}

bool Expr::uses(const std::string &symbol) const {
  return root_ && uses_node(*root_, symbol);
}

}  // namespace exdes
