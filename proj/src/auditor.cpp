#include "exdes/auditor.hpp"

#include <algorithm>
#include <cstdio>
#include <exception>
#include <fstream>
#include <functional>
#include <numeric>
#include <set>
#include <sstream>

#include <nlohmann/json.hpp>

#include "exdes/parallel.hpp"

#ifndef EXDES_DATA_DIR
#define EXDES_DATA_DIR "data"
#endif

namespace exdes {

namespace {

using json = nlohmann::json;

std::uint64_t fnv1a64(const std::string &s) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  return h;
}

BigInt pow_big(std::uint64_t base, unsigned long e) {
  BigInt r;
  mpz_ui_pow_ui(r.get_mpz_t(), base, e);
  return r;
}

BigInt gcd_big(const BigInt &a, const BigInt &b) {
  BigInt g;
  mpz_gcd(g.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return g;
}

// e = gcd(3, q - eps)
int e_value(std::uint64_t q, int eps) {
  const int r = static_cast<int>(q % 3);
  return ((r - eps) % 3 + 3) % 3 == 0 ? 3 : 1;
}

ExprVars vars_for(const PrimePower &pp, int eps) {
  ExprVars v;
  v.q = mpz_class(std::to_string(pp.q));
  v.a = pp.a;
  v.eps = eps;
  v.e = e_value(pp.q, eps);
  return v;
}

bool field_admits(FieldClass f, const PrimePower &pp) {
  switch (f) {
    case FieldClass::Suzuki: return pp.p == 2 && pp.a % 2 == 1;
    case FieldClass::Ree: return pp.p == 3 && pp.a % 2 == 1;
    case FieldClass::G2: return pp.q >= 3;
    case FieldClass::Any: return true;
  }
  return false;
}

FieldClass parse_field(const std::string &s) {
  if (s == "suzuki") return FieldClass::Suzuki;
  if (s == "ree") return FieldClass::Ree;
  if (s == "g2") return FieldClass::G2;
  if (s == "any") return FieldClass::Any;
  throw DataError("unknown field class '" + s + "'");
}

// Admissible q above `start`, in increasing order, at most `count` of them.
std::vector<PrimePower> probe_qs(FieldClass f, std::uint64_t start, std::size_t count,
                                 const std::function<bool(const PrimePower &)> &keep) {
  std::vector<PrimePower> out;
  if (f == FieldClass::Suzuki || f == FieldClass::Ree) {
    const std::uint64_t p = f == FieldClass::Suzuki ? 2 : 3;
    std::uint64_t q = p;
    for (unsigned a = 1; a < 40 && out.size() < count; a += 2, q *= p * p) {
      if (q > start && keep({q, p, a}))
        out.push_back({q, p, a});
      if (q > (1ull << 60) / (p * p))
        break;
    }
    return out;
  }
  for (std::uint64_t n = start + 1; n < start + 1'000'000 && out.size() < count; ++n) {
    const auto pp = as_prime_power(n);
    if (pp && field_admits(f, *pp) && keep(*pp))
      out.push_back(*pp);
  }
  return out;
}

// Decides whether big > small^2 for all large q.  Degrees in q decide
// first; equal degrees with no a-dependence compare the leading
// coefficient; anything else is settled by evaluation at the probes until
// three consecutive ones agree.
AsymptoticCheck compare_growth(const Expr &big, const Expr &small, int eps, int e,
                               const std::vector<PrimePower> &probes) {
  AsymptoticCheck c;
  c.eps = eps;
  c.e = e;
  const LeadingTerm lb = big.leading(eps, e), ls = small.leading(eps, e);
  c.ratio.q_degree = lb.q_degree - 2 * ls.q_degree;
  c.ratio.a_degree = lb.a_degree - 2 * ls.a_degree;
  c.ratio.coeff = ls.coeff == 0 ? mpq_class(0) : mpq_class(lb.coeff / (ls.coeff * ls.coeff));
  if (c.ratio.q_degree != 0) {
    c.method = "degree";
    c.verdict = c.ratio.q_degree > 0 ? "pass" : "fail";
    return c;
  }
  if (c.ratio.a_degree == 0 && c.ratio.coeff != 1) {
    c.method = "coefficient";
    c.verdict = c.ratio.coeff > 1 ? "pass" : "fail";
    return c;
  }
  c.method = "evaluation";
  c.verdict = "inconclusive";
  int run = 0;
  bool last = false;
  for (const auto &pp : probes) {
    const ExprVars v = vars_for(pp, eps);
    const mpq_class s = small.eval(v);
    const bool ok = s * s < big.eval(v);
    c.probes.push_back(pp.q);
    run = (run > 0 && ok == last) ? run + 1 : 1;
    last = ok;
    if (run == 3) {
      c.verdict = ok ? "pass" : "fail";
      break;
    }
  }
  return c;
}

std::string factor_string(const Factorization &f) {
  if (f.factors.empty())
    return "1";
  std::string s;
  for (const auto &[p, e] : f.factors) {
    if (!s.empty())
      s += "*";
    s += p.get_str();
    if (e > 1)
      s += "^" + std::to_string(e);
  }
  return s;
}

json big_list(const std::vector<BigInt> &xs) {
  json j = json::array();
  for (const auto &x : xs)
    j.push_back(x.get_str());
  return j;
}

json asym_json(const AsymptoticCheck &c) {
  json j = {{"eps", c.eps},
            {"e", c.e},
            {"q_degree", c.ratio.q_degree},
            {"a_degree", c.ratio.a_degree},
            {"coeff", c.ratio.coeff.get_str()},
            {"method", c.method},
            {"verdict", c.verdict}};
  if (!c.probes.empty())
    j["probes"] = c.probes;
  return j;
}

template <class Out, class In, class F>
std::vector<Out> run_rows(const std::vector<In> &rows, unsigned threads, F &&one) {
  std::vector<Out> out(rows.size());
  std::vector<std::exception_ptr> errors(chunk_count(rows.size(), threads));
  parallel_chunks(rows.size(), threads, [&](std::size_t c, std::size_t lo, std::size_t hi) {
    try {
      for (std::size_t i = lo; i < hi; ++i)
        out[i] = one(rows[i]);
    } catch (...) {
      errors[c] = std::current_exception();
    }
  });
  for (auto &e : errors)
    if (e)
      std::rethrow_exception(e);
  return out;
}

}  // namespace

std::string rows_checksum(const json &rows) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx",
                static_cast<unsigned long long>(fnv1a64(rows.dump())));
  return std::string("fnv1a64:") + buf;
}

json load_rows(const std::string &path) {
  std::ifstream in(path);
  if (!in)
    throw DataError("cannot open data file " + path);
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::exception &e) {
    throw DataError("malformed data file " + path + ": " + e.what());
  }
  if (!doc.is_object() || !doc.contains("rows") || !doc["rows"].is_array())
    throw DataError("data file " + path + " has no rows array");
  const std::string actual = rows_checksum(doc["rows"]);
  const std::string stated = doc.value("checksum", "");
  if (stated != actual)
    throw DataError("checksum mismatch in " + path + ": file states '" + stated +
                    "', rows hash to '" + actual + "'");
  return doc["rows"];
}

std::string default_data_dir() { return EXDES_DATA_DIR; }

// ---------------------------------------------------------------------------

std::vector<Table2Row> parse_table2(const json &rows) {
  std::vector<Table2Row> out;
  try {
    for (const auto &j : rows) {
      Table2Row r;
      r.id = j.at("id").get<int>();
      r.X = j.at("X").get<std::string>();
      r.H = j.at("H").get<std::string>();
      r.field = parse_field(j.at("field").get<std::string>());
      r.has_eps = j.value("eps", false);
      r.l_v = Expr::parse(j.at("l_v").get<std::string>());
      r.u_r = Expr::parse(j.at("u_r").get<std::string>());
      if (j.contains("conditions")) {
        const json &c = j["conditions"];
        if (c.contains("q_min"))
          r.q_min = c["q_min"].get<std::uint64_t>();
        if (c.contains("e"))
          r.e = c["e"].get<int>();
        if (c.contains("eps"))
          r.eps = c["eps"].get<int>();
        if (c.contains("exclude"))
          for (const auto &x : c["exclude"])
            r.exclude.emplace_back(x.at("eps").get<int>(), x.at("q").get<std::uint64_t>());
        if (c.contains("three_divides")) {
          r.three_divides = Expr::parse(c["three_divides"].get<std::string>());
          r.divides = c.value("divides", true);
        }
      }
      out.push_back(std::move(r));
    }
  } catch (const json::exception &e) {
    throw DataError(std::string("bad polynomial-bound row: ") + e.what());
  } catch (const ParseError &e) {
    throw DataError(std::string("bad polynomial-bound row: ") + e.what());
  }
  return out;
}

bool table2_admissible(const Table2Row &row, int eps, const PrimePower &pp) {
  if (!field_admits(row.field, pp))
    return false;
  if (row.q_min && pp.q < *row.q_min)
    return false;
  if (row.eps && eps != *row.eps)
    return false;
  for (const auto &[xe, xq] : row.exclude)
    if ((!row.has_eps || xe == eps) && xq == pp.q)
      return false;
  if (row.e && e_value(pp.q, eps) != *row.e)
    return false;
  if (row.three_divides) {
    const mpq_class x = row.three_divides->eval(vars_for(pp, eps));
    const bool div = x.get_den() == 1 && mpz_divisible_ui_p(x.get_num_mpz_t(), 3);
    if (div != row.divides)
      return false;
  }
  return true;
}

namespace {

std::vector<int> eps_branches(const Table2Row &row) {
  if (!row.has_eps)
    return {1};
  if (row.eps)
    return {*row.eps};
  return {1, -1};
}

}  // namespace

Table2Report check_table2_row(const Table2Row &row, const std::vector<PrimePower> &qs) {
  constexpr std::size_t kMaxWitnesses = 8;
  Table2Report rep;
  rep.id = row.id;
  rep.X = row.X;
  rep.H = row.H;
  for (int eps : eps_branches(row)) {
    for (const auto &pp : qs) {
      if (!table2_admissible(row, eps, pp))
        continue;
      ++rep.q_checked;
      const ExprVars v = vars_for(pp, eps);
      const mpq_class u = row.u_r.eval(v);
      const mpq_class u2 = u * u, l = row.l_v.eval(v);
      if (u2 < l)
        continue;
      ++rep.failures;
      if (rep.witnesses.size() < kMaxWitnesses)
        rep.witnesses.push_back({eps, pp.q, u2, l});
    }
    std::vector<int> es{1};
    if (row.e)
      es = {*row.e};
    else if (row.u_r.uses("e") || row.l_v.uses("e"))
      es = {1, 3};
    for (int e : es) {
      const std::uint64_t start = qs.empty() ? 1 : qs.back().q;
      const auto probes = probe_qs(row.field, start, 64, [&](const PrimePower &pp) {
        return table2_admissible(row, eps, pp) && e_value(pp.q, eps) == e;
      });
      rep.asymptotic.push_back(compare_growth(row.l_v, row.u_r, eps, e, probes));
    }
  }
  const bool asym_fail = std::any_of(rep.asymptotic.begin(), rep.asymptotic.end(),
                                     [](const auto &c) { return c.verdict == "fail"; });
  const bool asym_pass = std::all_of(rep.asymptotic.begin(), rep.asymptotic.end(),
                                     [](const auto &c) { return c.verdict == "pass"; });
  if (rep.failures > 0 || asym_fail)
    rep.verdict = "fail";
  else
    rep.verdict = asym_pass ? "pass" : "inconclusive";
  return rep;
}

std::vector<Table2Report> check_table2(const std::vector<Table2Row> &rows,
                                       std::uint64_t qmax, unsigned threads) {
  const auto qs = prime_powers_up_to(qmax);
  return run_rows<Table2Report>(rows, threads,
                                [&](const Table2Row &r) { return check_table2_row(r, qs); });
}

// ---------------------------------------------------------------------------

std::vector<Table3Row> parse_table3(const json &rows) {
  std::vector<Table3Row> out;
  try {
    for (const auto &j : rows) {
      Table3Row r;
      r.id = j.at("id").get<int>();
      r.X = j.at("X").get<std::string>();
      r.H = j.at("H").get<std::string>();
      r.q = j.at("q").get<std::uint64_t>();
      r.p = j.at("p").get<std::uint64_t>();
      r.v = BigInt(j.at("v").get<std::string>());
      r.r_div = BigInt(j.at("r_div").get<std::string>());
      if (r.v < 2 || r.r_div < 1 || !is_prime(BigInt(std::to_string(r.p))))
        throw DataError("row " + std::to_string(r.id) + " has out-of-range values");
      out.push_back(std::move(r));
    }
  } catch (const json::exception &e) {
    throw DataError(std::string("bad small-q row: ") + e.what());
  } catch (const std::invalid_argument &e) {
    throw DataError(std::string("bad integer in small-q row: ") + e.what());
  }
  return out;
}

std::vector<SurvivorTuple> enumerate_survivors(const BigInt &v, const BigInt &r_div) {
  constexpr unsigned long kMaxLambda = 10'000'000;
  std::vector<SurvivorTuple> out;
  const BigInt g = gcd_big(v - 1, r_div);
  for (const BigInt &r : divisors(factorize(g))) {
    const BigInt r2 = r * r;
    if (r2 <= v)
      continue;
    const BigInt lmax = (r2 - 1) / v;
    if (lmax > kMaxLambda)
      throw std::runtime_error("lambda range for r = " + r.get_str() + " is too large");
    for (unsigned long l = 1; l <= lmax.get_ui(); ++l) {
      const BigInt lam = l;
      if (gcd_big(lam, r) != 1)
        continue;
      const BigInt num = lam * (v - 1);
      if (!mpz_divisible_p(num.get_mpz_t(), r.get_mpz_t()))
        continue;
      const BigInt k = num / r + 1;
      if (k <= 2 || k > r)
        continue;
      const BigInt vr = v * r;
      if (!mpz_divisible_p(vr.get_mpz_t(), k.get_mpz_t()) || lam * v >= r2)
        continue;
      out.push_back({r, k, lam, vr / k});
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

bool tits_filter(const BigInt &v, unsigned long p) {
  return mpz_divisible_ui_p(v.get_mpz_t(), p) && gcd_big(v - 1, BigInt(p)) == 1;
}

Table3Report check_table3_row(const Table3Row &row) {
  Table3Report rep;
  rep.row = row;
  rep.g = gcd_big(row.v - 1, row.r_div);
  rep.tits = tits_filter(row.v, row.p);
  try {
    rep.g_factors = factorize(rep.g);
    rep.r_div_factors = factorize(row.r_div);
    for (const BigInt &d : divisors(rep.g_factors))
      if (d * d > row.v)
        rep.candidate_r.push_back(d);
    rep.survivors = enumerate_survivors(row.v, row.r_div);
    rep.verdict = rep.survivors.empty() ? "no survivors" : "survivors";
  } catch (const FactorizationError &e) {
    rep.verdict = "error";
    rep.error = std::string(e.what()) + " (cofactor " + e.cofactor().get_str() + ")";
  } catch (const std::runtime_error &e) {
    rep.verdict = "error";
    rep.error = e.what();
  }
  return rep;
}

std::vector<Table3Report> check_table3(const std::vector<Table3Row> &rows, unsigned threads) {
  return run_rows<Table3Report>(rows, threads, check_table3_row);
}

// ---------------------------------------------------------------------------

ParabolicReport parabolic_survivors(GroupKind kind, std::uint64_t q) {
  const auto pp = as_prime_power(q);
  const std::uint64_t want_p = kind == GroupKind::Suzuki ? 2 : 3;
  if (!pp || pp->p != want_p || pp->a % 2 == 0 || pp->a < 3)
    throw std::invalid_argument("q = " + std::to_string(q) + " is not " +
                                std::to_string(want_p) + "^odd with exponent >= 3");
  ParabolicReport rep;
  rep.kind = kind;
  rep.q = q;
  const unsigned long p = pp->p, a = pp->a;
  const unsigned long n = kind == GroupKind::Suzuki ? 2 : 3;
  const unsigned long N = n * a;  // |v-1|_p = p^N
  const BigInt Q = pow_big(p, a);
  rep.v = pow_big(p, N) + 1;
  const BigInt &v = rep.v;
  std::set<SurvivorTuple> found;

  // Checks shared by all branches once (r, k, lambda) is pinned down.
  auto finish = [&](const BigInt &r, const BigInt &k, const BigInt &lam) {
    auto elim = [&](const std::string &why) { rep.eliminated.push_back({r, k, lam, why}); };
    if (gcd_big(r, lam) != 1)
      return elim("gcd(r, lambda) != 1");
    if (r * (k - 1) != lam * (v - 1))
      return elim("r(k-1) != lambda(v-1)");
    const BigInt vr = v * r;
    if (!mpz_divisible_p(vr.get_mpz_t(), k.get_mpz_t()))
      return elim("k does not divide vr");
    if (lam * v >= r * r)
      return elim("lambda v >= r^2");
    if (k > r)
      return elim("k > r");
    found.insert({r, k, lam, vr / k});
  };

  // Block stabiliser inside a parabolic subgroup: k | p^t, so t = N and
  // k = p^m; the two-point stabiliser orbits force (q-1)/gcd(2,q-1) | k-1.
  const BigInt orbit = (Q - 1) / gcd_big(BigInt(2), Q - 1);
  for (unsigned long t = 1; t <= N; ++t) {
    const BigInt r = pow_big(p, t);
    if (r * r <= v)
      continue;
    const BigInt d = pow_big(p, N - t);
    for (unsigned long m = 1; m <= t; ++m) {
      const BigInt k = pow_big(p, m);
      if (!mpz_divisible_p(BigInt(k - 1).get_mpz_t(), d.get_mpz_t()))
        continue;
      const BigInt lam = (k - 1) / d;
      if (k <= 2) {
        rep.eliminated.push_back({r, k, lam, "k <= 2"});
        continue;
      }
      if (m == N) {
        rep.eliminated.push_back({r, k, lam, "k = v-1 gives the complete design"});
        continue;
      }
      if (!mpz_divisible_p(BigInt(k - 1).get_mpz_t(), orbit.get_mpz_t())) {
        rep.eliminated.push_back({r, k, lam, "(q-1)/gcd(2,q-1) does not divide k-1"});
        continue;
      }
      finish(r, k, lam);
    }
  }

  // Ree only: block stabiliser inside 2 x A1(q), of index q^2(q^2-q+1).
  if (kind == GroupKind::Ree) {
    const BigInt H0 = Q * Q * Q * (Q - 1);
    for (unsigned long t = 2 * a; t <= N; ++t) {
      const BigInt r = pow_big(p, t);
      if (r * r <= v)
        continue;
      const BigInt d = pow_big(p, N - t);
      const BigInt bound = pow_big(p, t - 2 * a) * (Q + 1);
      for (const BigInt &k : divisors(factorize(bound))) {
        if (!mpz_divisible_p(BigInt(k - 1).get_mpz_t(), d.get_mpz_t()))
          continue;
        const BigInt lam = (k - 1) / d;
        if (k < Q + 1) {
          rep.eliminated.push_back({r, k, lam, "A1(q) acts on the block, so k >= q+1"});
          continue;
        }
        if (mpz_divisible_ui_p(k.get_mpz_t(), p)) {
          const BigInt idx = Q * (Q + 1);
          if (!mpz_divisible_p(idx.get_mpz_t(), k.get_mpz_t()) || idx / k > 2) {
            rep.eliminated.push_back(
                {r, k, lam, "|M:K0| forces k = q(q+1) or q(q+1)/2"});
            continue;
          }
          const BigInt hk = H0 / r;  // |H cap K| = |H0| / r
          if (!mpz_divisible_p(hk.get_mpz_t(), Q.get_mpz_t())) {
            rep.eliminated.push_back(
                {r, k, lam, "q does not divide |H cap K| = " + hk.get_str()});
            continue;
          }
        }
        finish(r, k, lam);
      }
    }
  }
  rep.survivors.assign(found.begin(), found.end());
  return rep;
}

// ---------------------------------------------------------------------------

std::vector<PublishedCheck> check_published(const json &rows) {
  std::vector<PublishedCheck> out;
  try {
    for (const auto &j : rows) {
      PublishedCheck c;
      c.nr = j.at("nr").get<int>();
      c.group = j.at("group").get<std::string>();
      c.kind = parse_group_kind(j.at("kind").get<std::string>());
      c.q = j.at("q").get<std::uint64_t>();
      auto big = [&](const char *key) { return BigInt(std::to_string(j.at(key).get<std::uint64_t>())); };
      c.v = big("v");
      c.b = big("b");
      c.r = big("r");
      c.k = big("k");
      c.lambda = big("lambda");
      c.stabiliser = big("block_stabiliser_order");
      c.identities_hold = c.v * c.r == c.b * c.k && c.r * (c.k - 1) == c.lambda * (c.v - 1);
      const BigInt vr = c.v * c.r;
      if (mpz_divisible_p(vr.get_mpz_t(), c.k.get_mpz_t()))
        c.b_from_identity = vr / c.k;
      const BigInt order = expected_group_order(c.kind, c.q);
      if (mpz_divisible_p(order.get_mpz_t(), c.stabiliser.get_mpz_t()))
        c.b_from_stabiliser = order / c.stabiliser;
      c.consistent = c.identities_hold && c.b == c.b_from_identity &&
                     c.b == c.b_from_stabiliser;
      out.push_back(std::move(c));
    }
  } catch (const json::exception &e) {
    throw DataError(std::string("bad published example row: ") + e.what());
  }
  return out;
}

// ---------------------------------------------------------------------------

const std::vector<ResidualCase> &residual_cases() {
  static const std::vector<ResidualCase> cases = [] {
    auto mk = [](std::string id, std::string X, std::string H, FieldClass f,
                 const char *v, const char *pp) {
      return ResidualCase{std::move(id), std::move(X), std::move(H), f,
                          Expr::parse(v), Expr::parse(pp)};
    };
    return std::vector<ResidualCase>{
        mk("3D4-q11", "3D4(q)", "[q^11]:SL2(q).(q^3-1)", FieldClass::Any,
           "(q^8+q^4+1)*(q^3+1)", "q^3"),
        mk("2F4-q11", "2F4(q)", "[q^11]:GL2(q)", FieldClass::Suzuki,
           "(q^6+1)*(q^2+1)*(q^3+1)", "q^2"),
        mk("3D4-q9", "3D4(q)", "[q^9]:SL2(q^3).(q-1)", FieldClass::Any,
           "(q^8+q^4+1)*(q+1)", "q"),
        mk("2F4-q10", "2F4(q)", "[q^10]:(2B2(q)x(q-1))", FieldClass::Suzuki,
           "(q^6+1)*(q+1)*(q^3+1)", "q"),
        mk("G2-q5", "G2(q)", "[q^5]:GL2(q)", FieldClass::G2, "(q^6-1)/(q-1)", "q"),
        mk("F4-q15", "F4(q)", "[q^15]:B3(q).(q-1)", FieldClass::Any,
           "(q^12-1)*(q^4+1)/(q-1)", "q"),
        mk("E7-q27", "E7(q)", "[q^27]:E6(q).(q-1)", FieldClass::Any,
           "(q^14-1)*(q^9+1)*(q^5+1)/(q-1)", "q"),
    };
  }();
  return cases;
}

const ResidualCase &residual_case(const std::string &id) {
  for (const auto &c : residual_cases())
    if (c.id == id)
      return c;
  throw std::invalid_argument("unknown residual parabolic case '" + id + "'");
}

BigInt vminus1_p_part(const ResidualCase &c, const PrimePower &q) {
  const mpq_class v = c.v.eval(vars_for(q, 1));
  if (v.get_den() != 1)
    throw std::domain_error("v is not an integer for " + c.id);
  return p_part(BigInt(v.get_num()) - 1, q.p);
}

ResidualReport parab_residual_check(const ResidualCase &c, std::uint64_t qmax) {
  constexpr std::size_t kMaxListed = 16;
  ResidualReport rep;
  rep.id = c.id;
  rep.X = c.X;
  rep.H = c.H;
  const auto qs = prime_powers_up_to(qmax);
  for (const auto &pp : qs) {
    if (!field_admits(c.field, pp))
      continue;
    ++rep.q_checked;
    const ExprVars vars = vars_for(pp, 1);
    const mpq_class claimed = c.p_part.eval(vars);
    const mpq_class v = c.v.eval(vars);
    if (vminus1_p_part(c, pp) != claimed && rep.p_part_mismatches.size() < kMaxListed)
      rep.p_part_mismatches.push_back(pp.q);
    if (claimed * claimed > v && rep.not_contradicted.size() < kMaxListed)
      rep.not_contradicted.push_back(pp.q);
  }
  const auto probes = probe_qs(c.field, qs.empty() ? 1 : qs.back().q, 64,
                               [](const PrimePower &) { return true; });
  rep.asymptotic = compare_growth(c.v, c.p_part, 1, 1, probes);
  rep.verdict = rep.p_part_mismatches.empty() && rep.not_contradicted.empty() &&
                        rep.asymptotic.verdict == "pass"
                    ? "contradiction"
                    : "fail";
  return rep;
}

// ---------------------------------------------------------------------------

E6Report e6_subdegree_elimination(int case_id, std::uint64_t qmax) {
  constexpr std::size_t kMaxListed = 16;
  E6Report rep;
  rep.case_id = case_id;
  unsigned long chain = 0;
  if (case_id == 1) {
    rep.H = "[q^16]:D5(q).(q-1)";
    rep.v = Expr::parse("(q^8+q^4+1)*(q^9-1)/(q-1)");
    rep.r_bound = Expr::parse("q*(q^4+1)");
    chain = 12;
  } else if (case_id == 2) {
    rep.H = "[q^25]:A1(q)A4(q).(q-1)";
    rep.v = Expr::parse("(q^3+1)*(q^4+1)*(q^9-1)*(q^12-1)/((q-1)*(q^2-1))");
    rep.r_bound = Expr::parse("6*a*q*(q^4+q^3+q^2+q+1)");
    chain = 16;
  } else {
    throw std::invalid_argument("E6 case must be 1 or 2");
  }
  rep.chain_bound = "q^" + std::to_string(chain);
  const auto qs = prime_powers_up_to(qmax);
  for (const auto &pp : qs) {
    ++rep.q_checked;
    const ExprVars vars = vars_for(pp, 1);
    const mpq_class rb = rep.r_bound.eval(vars), v = rep.v.eval(vars);
    const mpq_class r2 = rb * rb;
    mpq_class qn;
    mpz_pow_ui(qn.get_num_mpz_t(), BigInt(std::to_string(pp.q)).get_mpz_t(), chain);
    if (r2 >= v && rep.failures.size() < kMaxListed)
      rep.failures.push_back(pp.q);
    if (!(r2 < qn && qn < v) && rep.chain_failures.size() < kMaxListed)
      rep.chain_failures.push_back(pp.q);
  }
  const auto probes = probe_qs(FieldClass::Any, qs.empty() ? 1 : qs.back().q, 64,
                               [](const PrimePower &) { return true; });
  rep.asymptotic = compare_growth(rep.v, rep.r_bound, 1, 1, probes);
  rep.verdict = rep.failures.empty() && rep.asymptotic.verdict == "pass" ? "eliminated" : "fail";
  return rep;
}

// ---------------------------------------------------------------------------

json to_json(const SurvivorTuple &t) {
  return {{"r", t.r.get_str()}, {"k", t.k.get_str()}, {"lambda", t.lambda.get_str()},
          {"b", t.b.get_str()}};
}

json to_json(const Table2Report &r) {
  json j = {{"row_id", r.id}, {"X", r.X}, {"H", r.H}, {"verdict", r.verdict},
            {"q_checked", r.q_checked}, {"failures", r.failures}};
  json w = json::array();
  for (const auto &x : r.witnesses)
    w.push_back({{"eps", x.eps}, {"q", x.q}, {"u_r_squared", x.u_r_squared.get_str()},
                 {"l_v", x.l_v.get_str()}});
  j["witnesses"] = w;
  json a = json::array();
  for (const auto &c : r.asymptotic)
    a.push_back(asym_json(c));
  j["asymptotic"] = a;
  return j;
}

json to_json(const Table3Report &r) {
  json j = {{"row_id", r.row.id},
            {"X", r.row.X},
            {"H", r.row.H},
            {"q", r.row.q},
            {"p", r.row.p},
            {"v", r.row.v.get_str()},
            {"r_div", r.row.r_div.get_str()},
            {"g", r.g.get_str()},
            {"tits_filter", r.tits},
            {"verdict", r.verdict}};
  if (!r.error.empty()) {
    j["error"] = r.error;
    return j;
  }
  j["g_factors"] = factor_string(r.g_factors);
  j["r_div_factors"] = factor_string(r.r_div_factors);
  j["candidate_r"] = big_list(r.candidate_r);
  json s = json::array();
  for (const auto &t : r.survivors)
    s.push_back(to_json(t));
  j["witnesses"] = s;
  return j;
}

json to_json(const ParabolicReport &r) {
  json s = json::array(), e = json::array();
  for (const auto &t : r.survivors)
    s.push_back(to_json(t));
  for (const auto &x : r.eliminated)
    e.push_back({{"r", x.r.get_str()}, {"k", x.k.get_str()}, {"lambda", x.lambda.get_str()},
                 {"reason", x.reason}});
  return {{"kind", to_string(r.kind)}, {"q", r.q}, {"v", r.v.get_str()},
          {"survivors", s}, {"eliminated", e}};
}

json to_json(const PublishedCheck &c) {
  return {{"nr", c.nr},
          {"group", c.group},
          {"q", c.q},
          {"printed", {{"v", c.v.get_str()}, {"b", c.b.get_str()}, {"r", c.r.get_str()},
                       {"k", c.k.get_str()}, {"lambda", c.lambda.get_str()}}},
          {"block_stabiliser_order", c.stabiliser.get_str()},
          {"b_from_identity", c.b_from_identity.get_str()},
          {"b_from_stabiliser", c.b_from_stabiliser.get_str()},
          {"identities_hold", c.identities_hold},
          {"verdict", c.consistent ? "consistent" : "discrepancy"}};
}

json to_json(const ResidualReport &r) {
  return {{"row_id", r.id},
          {"X", r.X},
          {"H", r.H},
          {"q_checked", r.q_checked},
          {"p_part_mismatches", r.p_part_mismatches},
          {"not_contradicted", r.not_contradicted},
          {"asymptotic", asym_json(r.asymptotic)},
          {"verdict", r.verdict}};
}

json to_json(const E6Report &r) {
  return {{"row_id", "E6-" + std::to_string(r.case_id)},
          {"H", r.H},
          {"v", r.v.source()},
          {"r_bound", r.r_bound.source()},
          {"chain_bound", r.chain_bound},
          {"q_checked", r.q_checked},
          {"witnesses", r.failures},
          {"chain_failures", r.chain_failures},
          {"asymptotic", asym_json(r.asymptotic)},
          {"verdict", r.verdict}};
}

}  // namespace exdes
