#include <gtest/gtest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <numeric>
#include <set>
#include <tuple>

#include <nlohmann/json.hpp>

#include "exdes/auditor.hpp"
#include "exdes/families.hpp"

using namespace exdes;

namespace {

std::string data(const char *name) { return default_data_dir() + "/" + name; }

using Tuple = std::tuple<std::uint64_t, std::uint64_t, std::uint64_t, std::uint64_t>;

// Brute force over every r <= v-1 and every lambda, straight from the
// design identities: r | r_div, r(k-1) = lambda(v-1), vr = bk,
// gcd(r, lambda) = 1, lambda v < r^2, 2 < k <= r.
std::set<Tuple> survivor_oracle(std::uint64_t v, std::uint64_t r_div) {
  std::set<Tuple> out;
  for (std::uint64_t r = 1; r < v; ++r) {
    if (r_div % r != 0)
      continue;
    for (std::uint64_t lambda = 1; lambda * v < r * r; ++lambda) {
      if (std::gcd(r, lambda) != 1 || (lambda * (v - 1)) % r != 0)
        continue;
      const std::uint64_t k = lambda * (v - 1) / r + 1;
      if (k <= 2 || k > r || (v * r) % k != 0)
        continue;
      out.insert({r, k, lambda, v * r / k});
    }
  }
  return out;
}

std::set<Tuple> as_set(const std::vector<SurvivorTuple> &ts) {
  std::set<Tuple> out;
  for (const auto &t : ts)
    out.insert({t.r.get_ui(), t.k.get_ui(), t.lambda.get_ui(), t.b.get_ui()});
  return out;
}

Tuple expected_tuple(Family f, std::uint64_t q) {
  const auto p = expected_params(f, q);
  return {p.r, p.k, p.lambda, p.b};
}

const Table2Report &row_report(const std::vector<Table2Report> &rs, int id) {
  for (const auto &r : rs)
    if (r.id == id)
      return r;
  throw std::out_of_range("no row " + std::to_string(id));
}

PrimePower pp(std::uint64_t q) { return *as_prime_power(q); }

}  // namespace

TEST(Data, ChecksumsVerifyAndDetectTampering) {
  const auto rows = load_rows(data("table3.json"));
  EXPECT_EQ(rows.size(), 34u);
  EXPECT_EQ(load_rows(data("table2.json")).size(), 47u);

  std::ifstream in(data("table3.json"));
  auto doc = nlohmann::json::parse(in);
  doc["rows"][0]["r_div"] = "157";
  const auto path = std::filesystem::temp_directory_path() / "exdes_tampered.json";
  std::ofstream(path) << doc.dump();
  EXPECT_THROW(load_rows(path.string()), DataError);
  std::filesystem::remove(path);
  EXPECT_THROW(load_rows("/nonexistent/table.json"), DataError);
}

TEST(Survivors, MatchBruteForceOracleOnSyntheticPairs) {
  for (std::uint64_t v = 5; v <= 300; ++v)
    for (std::uint64_t r_div : {v - 1, 2 * (v - 1), std::uint64_t{5040}, std::uint64_t{4096}}) {
      const auto got = as_set(enumerate_survivors(BigInt(static_cast<unsigned long>(v)),
                                                  BigInt(static_cast<unsigned long>(r_div))));
      ASSERT_EQ(got, survivor_oracle(v, r_div)) << "v=" << v << " r_div=" << r_div;
    }
  // the Suzuki q = 8 design is among the candidates for v = 65, r | 64
  EXPECT_TRUE(survivor_oracle(65, 64).count({64, 8, 7, 520}));
}

TEST(Table3, AllRowsHaveNoSurvivors) {
  const auto rows = parse_table3(load_rows(data("table3.json")));
  const auto reports = check_table3(rows, 2);
  ASSERT_EQ(reports.size(), rows.size());
  for (const auto &r : reports) {
    EXPECT_EQ(r.verdict, "no survivors") << r.row.X << " / " << r.row.H;
    EXPECT_TRUE(r.survivors.empty());
    EXPECT_EQ(r.g_factors.value(), r.g);
  }
  EXPECT_EQ(reports[0].g, 13);
  EXPECT_TRUE(reports[0].candidate_r.empty());
}

TEST(Table3, KnownRows) {
  Table3Row j2{14, "G2(4)", "J2", 4, 2, BigInt(416), BigInt(1209600)};
  const auto r = check_table3_row(j2);
  EXPECT_EQ(r.g, 5);
  EXPECT_TRUE(r.survivors.empty());
  Table3Row sz32{2, "2B2(32)", "41:4", 32, 2, BigInt(198400), BigInt(820)};
  EXPECT_TRUE(check_table3_row(sz32).survivors.empty());
  // E7(2)/Fi22: r_div factors completely
  const auto rows = parse_table3(load_rows(data("table3.json")));
  const auto fi22 = check_table3_row(rows[25]);
  EXPECT_EQ(fi22.r_div_factors.value(), BigInt("64561751654400"));
  EXPECT_EQ(to_json(fi22)["verdict"], "no survivors");
}

TEST(Tits, Filter) {
  EXPECT_TRUE(tits_filter(560, 2));
  EXPECT_FALSE(tits_filter(65, 2));
  EXPECT_TRUE(tits_filter(3528, 3));
  EXPECT_FALSE(tits_filter(9, 3) && tits_filter(10, 3));
}

TEST(Table2, RowTwoAtQ27) {
  const auto rows = parse_table2(load_rows(data("table2.json")));
  const Table2Row &row = rows[1];
  ASSERT_EQ(row.id, 2);
  ExprVars vars;
  vars.q = 27;
  vars.a = 3;
  EXPECT_EQ(row.u_r.eval(vars), 78);
  EXPECT_EQ(row.l_v.eval(vars), 512487);
  EXPECT_TRUE(table2_admissible(row, 1, pp(27)));
  EXPECT_FALSE(table2_admissible(row, 1, pp(9)));
  EXPECT_FALSE(table2_admissible(row, 1, pp(8)));
}

TEST(Table2, SweepReportsExactlyTheKnownFailures) {
  const auto rows = parse_table2(load_rows(data("table2.json")));
  const auto reports = check_table2(rows, 1u << 12, 2);
  ASSERT_EQ(reports.size(), rows.size());
  std::vector<int> not_passing;
  for (const auto &r : reports) {
    if (r.verdict != "pass")
      not_passing.push_back(r.id);
    EXPECT_GT(r.q_checked, 0u) << r.id;
  }
  EXPECT_EQ(not_passing, (std::vector<int>{12, 32, 34}));

  // G2(q)/A2^eps(q): fails everywhere, asymptotically too (q^6 vs q^6/2)
  const auto &g2 = row_report(reports, 12);
  EXPECT_EQ(g2.verdict, "fail");
  EXPECT_EQ(g2.failures, g2.q_checked);
  bool saw_q4 = false;
  for (const auto &w : g2.witnesses)
    if (w.eps == 1 && w.q == 4) {
      saw_q4 = true;
      EXPECT_EQ(w.u_r_squared, 3969);
      EXPECT_EQ(w.l_v, 2080);
    }
  EXPECT_TRUE(saw_q4);
  for (const auto &a : g2.asymptotic) {
    EXPECT_EQ(a.verdict, "fail");
    EXPECT_EQ(a.ratio.q_degree, 0);
    EXPECT_EQ(a.ratio.coeff, mpq_class(1, 2));
  }

  // E6 rows: only q = 2 fails, the asymptotic check passes
  for (int id : {32, 34}) {
    const auto &r = row_report(reports, id);
    EXPECT_EQ(r.failures, 1u) << id;
    ASSERT_EQ(r.witnesses.size(), 1u);
    EXPECT_EQ(r.witnesses[0].q, 2u);
    for (const auto &a : r.asymptotic)
      EXPECT_EQ(a.verdict, "pass");
  }
  EXPECT_EQ(row_report(reports, 32).witnesses[0].eps, 1);
  EXPECT_EQ(row_report(reports, 34).witnesses[0].eps, -1);
  EXPECT_EQ(row_report(reports, 32).witnesses[0].u_r_squared, mpq_class(1835008) * 1835008);

  // row 1: q^8 < q^10
  const auto &r1 = row_report(reports, 1);
  EXPECT_EQ(r1.verdict, "pass");
  ASSERT_FALSE(r1.asymptotic.empty());
  EXPECT_EQ(r1.asymptotic[0].method, "degree");
  EXPECT_EQ(r1.asymptotic[0].ratio.q_degree, 2);
}

TEST(Parabolic, SurvivorsAreExactlyTheFamilyTuples) {
  auto got = [](GroupKind k, std::uint64_t q) {
    return as_set(parabolic_survivors(k, q).survivors);
  };
  EXPECT_EQ(got(GroupKind::Suzuki, 8), (std::set<Tuple>{{64, 8, 7, 520}}));
  EXPECT_EQ(got(GroupKind::Suzuki, 32), (std::set<Tuple>{{1024, 32, 31, 32800}}));
  EXPECT_EQ(got(GroupKind::Ree, 27),
            (std::set<Tuple>{{729, 28, 1, 512487},
                             {19683, 27, 26, 14349636},
                             {19683, 729, 728, 531468}}));
  for (std::uint64_t q : {8u, 32u, 128u, 512u})
    EXPECT_EQ(got(GroupKind::Suzuki, q), std::set<Tuple>{expected_tuple(Family::A, q)});
  for (std::uint64_t q : {27u, 243u})
    EXPECT_EQ(got(GroupKind::Ree, q),
              (std::set<Tuple>{expected_tuple(Family::B, q), expected_tuple(Family::C, q),
                               expected_tuple(Family::D, q)}));
  const auto rep = parabolic_survivors(GroupKind::Suzuki, 8);
  EXPECT_EQ(rep.v, 65);
  EXPECT_FALSE(rep.eliminated.empty());
  EXPECT_THROW(parabolic_survivors(GroupKind::Suzuki, 2), std::invalid_argument);
  EXPECT_THROW(parabolic_survivors(GroupKind::Ree, 9), std::invalid_argument);
}

TEST(Published, RowsAgreeWithIdentitiesAndStabilisers) {
  const auto checks = check_published(load_rows(data("published_examples.json")));
  ASSERT_FALSE(checks.empty());
  std::size_t misprints = 0;
  for (const auto &c : checks) {
    EXPECT_EQ(c.b_from_stabiliser, c.b_from_identity) << c.nr;
    if (!c.consistent)
      ++misprints;
    else
      EXPECT_TRUE(c.identities_hold);
  }
  // the two 2G2(27) rows with b = 551853 and 20439
  EXPECT_EQ(misprints, 2u);
}

TEST(Residual, KnownValuesAtQ2) {
  const auto &d4 = residual_case("3D4-q11");
  ExprVars vars;
  vars.q = 2;
  EXPECT_EQ(d4.v.eval(vars), 2457);
  EXPECT_EQ(vminus1_p_part(d4, pp(2)), 8);
  EXPECT_EQ(vminus1_p_part(residual_case("2F4-q11"), pp(2)), 4);
  EXPECT_EQ(vminus1_p_part(residual_case("G2-q5"), pp(3)), 3);
  EXPECT_THROW(residual_case("nope"), std::invalid_argument);
}

TEST(Residual, EveryCaseIsContradicted) {
  ASSERT_EQ(residual_cases().size(), 7u);
  for (const auto &c : residual_cases()) {
    const auto r = parab_residual_check(c, 1u << 10);
    EXPECT_EQ(r.verdict, "contradiction") << c.id;
    EXPECT_TRUE(r.p_part_mismatches.empty()) << c.id;
    EXPECT_TRUE(r.not_contradicted.empty()) << c.id;
    EXPECT_GT(r.q_checked, 0u);
  }
}

TEST(E6, SubdegreeBounds) {
  const auto c1 = e6_subdegree_elimination(1, 1u << 10);
  EXPECT_EQ(c1.verdict, "eliminated");
  ExprVars vars;
  vars.q = 2;
  vars.a = 1;
  EXPECT_EQ(c1.v.eval(vars), 139503);
  EXPECT_EQ(c1.r_bound.eval(vars), 34);
  EXPECT_TRUE(c1.failures.empty());
  EXPECT_TRUE(c1.chain_failures.empty());
  EXPECT_EQ(c1.asymptotic.verdict, "pass");
  EXPECT_EQ(c1.asymptotic.ratio.q_degree, 6);

  const auto c2 = e6_subdegree_elimination(2, 1u << 10);
  EXPECT_EQ(c2.verdict, "eliminated");
  EXPECT_EQ(c2.r_bound.eval(vars), 372);
  EXPECT_TRUE(c2.failures.empty());
  // 372^2 = 138384 exceeds 2^16, so only the intermediate bound fails at q = 2
  EXPECT_EQ(c2.chain_failures, std::vector<std::uint64_t>{2});
  EXPECT_THROW(e6_subdegree_elimination(3, 16), std::invalid_argument);
}
