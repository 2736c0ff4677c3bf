#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "exdes/groups.hpp"
#include "exdes/numtheory.hpp"
#include "exdes/qexpr.hpp"

namespace exdes {

class DataError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// "fnv1a64:<hex>" over the compact, key-sorted dump of a rows array.
std::string rows_checksum(const nlohmann::json &rows);

// Reads a data file {name, columns, checksum, rows} and returns its rows
// after checking the checksum.
nlohmann::json load_rows(const std::string &path);

std::string default_data_dir();

// ---------------------------------------------------------------------------
// Polynomial bounds: u_r^2 < l_v for every admissible q.

enum class FieldClass { Suzuki, Ree, G2, Any };

struct Table2Row {
  int id = 0;
  std::string X, H;
  FieldClass field = FieldClass::Any;
  bool has_eps = false;
  Expr l_v, u_r;
  std::optional<std::uint64_t> q_min;
  std::optional<int> e;    // e = gcd(3, q - eps) must equal this
  std::optional<int> eps;  // only this sign
  std::vector<std::pair<int, std::uint64_t>> exclude;  // (eps, q)
  std::optional<Expr> three_divides;                   // 3 | expr ...
  bool divides = true;                                 // ... or 3 does not divide
};

std::vector<Table2Row> parse_table2(const nlohmann::json &rows);

// Whether (q, eps) falls under the row's field and conditions.
bool table2_admissible(const Table2Row &row, int eps, const PrimePower &q);

struct Table2Witness {
  int eps = 1;
  std::uint64_t q = 0;
  mpq_class u_r_squared, l_v;
};

// Leading term of l_v / u_r^2 for one (eps, e) branch.
struct AsymptoticCheck {
  int eps = 1;
  int e = 1;
  LeadingTerm ratio;
  std::string method;   // "degree", "coefficient" or "evaluation"
  std::string verdict;  // "pass", "fail" or "inconclusive"
  std::vector<std::uint64_t> probes;  // q values used by "evaluation"
};

struct Table2Report {
  int id = 0;
  std::string X, H;
  std::uint64_t q_checked = 0;
  std::uint64_t failures = 0;
  std::vector<Table2Witness> witnesses;  // first failures, by eps then q
  std::vector<AsymptoticCheck> asymptotic;
  std::string verdict;  // "pass", "fail" or "inconclusive"
};

// qs: all prime powers up to the sweep bound, in increasing order.
Table2Report check_table2_row(const Table2Row &row, const std::vector<PrimePower> &qs);
std::vector<Table2Report> check_table2(const std::vector<Table2Row> &rows,
                                       std::uint64_t qmax, unsigned threads = 1);

// ---------------------------------------------------------------------------
// Explicit (v, r) pairs for small q.

struct Table3Row {
  int id = 0;
  std::string X, H;
  std::uint64_t q = 0, p = 0;
  BigInt v, r_div;
};

std::vector<Table3Row> parse_table3(const nlohmann::json &rows);

struct SurvivorTuple {
  BigInt r, k, lambda, b;

  bool operator==(const SurvivorTuple &o) const {
    return r == o.r && k == o.k && lambda == o.lambda && b == o.b;
  }
  bool operator<(const SurvivorTuple &o) const {
    if (r != o.r) return r < o.r;
    if (k != o.k) return k < o.k;
    if (lambda != o.lambda) return lambda < o.lambda;
    return b < o.b;
  }
};

// All (r, k, lambda, b) with r | gcd(v-1, r_div), lambda v < r^2,
// gcd(lambda, r) = 1, k = lambda(v-1)/r + 1, 2 < k <= r and k | vr.
std::vector<SurvivorTuple> enumerate_survivors(const BigInt &v, const BigInt &r_div);

// p | v and gcd(p, v-1) = 1.
bool tits_filter(const BigInt &v, unsigned long p);

struct Table3Report {
  Table3Row row;
  BigInt g;  // gcd(v-1, r_div)
  Factorization g_factors, r_div_factors;
  std::vector<BigInt> candidate_r;  // divisors of g with r^2 > v
  std::vector<SurvivorTuple> survivors;
  bool tits = false;
  std::string verdict;  // "no survivors", "survivors" or "error"
  std::string error;
};

Table3Report check_table3_row(const Table3Row &row);
std::vector<Table3Report> check_table3(const std::vector<Table3Row> &rows,
                                       unsigned threads = 1);

// ---------------------------------------------------------------------------
// Parabolic point stabilisers in the rank-one groups.

struct Elimination {
  BigInt r, k, lambda;
  std::string reason;
};

struct ParabolicReport {
  GroupKind kind = GroupKind::Suzuki;
  std::uint64_t q = 0;
  BigInt v;
  std::vector<SurvivorTuple> survivors;  // sorted
  std::vector<Elimination> eliminated;
};

// Runs the divisibility chain for Sz(q) (q = 2^odd >= 8) or 2G2(q)
// (q = 3^odd >= 27) on v = q^2+1 or q^3+1.
ParabolicReport parabolic_survivors(GroupKind kind, std::uint64_t q);

struct PublishedCheck {
  int nr = 0;
  std::string group;
  GroupKind kind = GroupKind::Suzuki;
  std::uint64_t q = 0;
  BigInt v, b, r, k, lambda, stabiliser;
  BigInt b_from_identity;    // vr / k
  BigInt b_from_stabiliser;  // |X| / |X_B|
  bool identities_hold = false;  // vr = bk and r(k-1) = lambda(v-1)
  bool consistent = false;       // printed b agrees with both
};

std::vector<PublishedCheck> check_published(const nlohmann::json &rows);

// ---------------------------------------------------------------------------
// Remaining parabolic cases: r divides |v-1|_p, which is too small.

struct ResidualCase {
  std::string id, X, H;
  FieldClass field = FieldClass::Any;
  Expr v;
  Expr p_part;  // claimed |v-1|_p
};

const std::vector<ResidualCase> &residual_cases();
const ResidualCase &residual_case(const std::string &id);

// |v-1|_p computed from v at this q.
BigInt vminus1_p_part(const ResidualCase &c, const PrimePower &q);

struct ResidualReport {
  std::string id, X, H;
  std::uint64_t q_checked = 0;
  std::vector<std::uint64_t> p_part_mismatches;  // claimed != computed
  std::vector<std::uint64_t> not_contradicted;   // v >= p_part^2 fails
  AsymptoticCheck asymptotic;                    // v / p_part^2
  std::string verdict;  // "contradiction" or "fail"
};

ResidualReport parab_residual_check(const ResidualCase &c, std::uint64_t qmax);

// ---------------------------------------------------------------------------
// E6 parabolics eliminated through subdegrees.

struct E6Report {
  int case_id = 0;
  std::string H;
  Expr v, r_bound;
  std::string chain_bound;  // intermediate power of q in the r^2 < q^n < v chain
  std::uint64_t q_checked = 0;
  std::vector<std::uint64_t> failures;        // r_bound^2 >= v
  std::vector<std::uint64_t> chain_failures;  // r_bound^2 >= q^n or q^n >= v
  AsymptoticCheck asymptotic;                 // v / r_bound^2
  std::string verdict;  // "eliminated" or "fail"
};

E6Report e6_subdegree_elimination(int case_id, std::uint64_t qmax);

// ---------------------------------------------------------------------------
// JSON.

nlohmann::json to_json(const Table2Report &r);
nlohmann::json to_json(const Table3Report &r);
nlohmann::json to_json(const ParabolicReport &r);
nlohmann::json to_json(const PublishedCheck &r);
nlohmann::json to_json(const ResidualReport &r);
nlohmann::json to_json(const E6Report &r);
nlohmann::json to_json(const SurvivorTuple &t);

}  // namespace exdes
