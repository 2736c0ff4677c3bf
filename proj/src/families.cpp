#include "exdes/families.hpp"

#include <algorithm>
#include <numeric>

#include <nlohmann/json.hpp>

namespace exdes {

Family parse_family(const std::string &s) {
  if (s == "a" || s == "A" || s == "suzuki-a")
    return Family::A;
  if (s == "b" || s == "B" || s == "ree-b" || s == "ree-unital")
    return Family::B;
  if (s == "c" || s == "C" || s == "ree-c")
    return Family::C;
  if (s == "d" || s == "D" || s == "ree-d")
    return Family::D;
  throw std::invalid_argument("unknown family '" + s +
                              "' (expected suzuki-a, ree-b, ree-c or ree-d)");
}

std::string to_string(Family f) {
  switch (f) {
    case Family::A: return "a";
    case Family::B: return "b";
    case Family::C: return "c";
    case Family::D: return "d";
  }
  return "?";
}

GroupKind family_group(Family f) {
  return f == Family::A ? GroupKind::Suzuki : GroupKind::Ree;
}

ExpectedParams expected_params(Family f, std::uint64_t q) {
  const std::uint64_t q2 = q * q, q3 = q2 * q;
  switch (f) {
    case Family::A: return {q2 + 1, q * (q2 + 1), q2, q, q - 1};
    case Family::B: return {q3 + 1, q2 * (q2 - q + 1), q2, q + 1, 1};
    case Family::C: return {q3 + 1, q2 * (q3 + 1), q3, q, q - 1};
    case Family::D: return {q3 + 1, q * (q3 + 1), q3, q2, q2 - 1};
  }
  throw std::logic_error("bad family");
}

std::vector<std::string> family_variants(Family f) {
  switch (f) {
    case Family::A: return {"center"};
    case Family::B: return {"involution"};
    case Family::C: return {"center", "centralizer"};
    case Family::D: return {"derived"};
  }
  return {};
}

namespace {

std::string resolve_variant(Family f, const std::string &v) {
  const auto all = family_variants(f);
  if (v.empty() || v == "default")
    return all.front();
  if (std::find(all.begin(), all.end(), v) == all.end())
    throw std::invalid_argument("family " + to_string(f) + " has no variant '" +
                                v + "'");
  return v;
}

// Orbits of exactly k points under the block-stabiliser recipe, smallest
// first point first.
std::vector<std::vector<Point>> candidates(Family f, const GroupContext &g,
                                           const std::string &variant,
                                           std::uint64_t k,
                                           std::uint64_t seed) {
  std::vector<std::vector<Point>> out;
  if (f == Family::B) {
    for (std::uint64_t s = seed; s < seed + 3; ++s)
      out.push_back(fixed_points(find_involution(g, s)));
    return out;
  }
  const std::vector<Permutation> *core = nullptr;
  if (variant == "center")
    core = &g.center_gens;
  else if (variant == "centralizer")
    core = &g.centralizer_gens;
  else
    core = &g.derived_gens;
  // conjugate into the stabiliser of point 1, then add the torus fixing 0, 1
  std::vector<Permutation> k0 = conjugate_subgroup(g, *core, 1);
  k0.insert(k0.end(), g.torus_gens.begin(), g.torus_gens.end());
  for (auto &o : orbits(k0, g.degree))
    if (o.size() == k)
      out.push_back(std::move(o));
  return out;
}

}  // namespace

Construction construct(Family f, std::uint32_t q, const ConstructOptions &opts) {
  return construct(f, build_group(family_group(f), q), opts);
}

Construction construct(Family f, const GroupContext &group,
                       const ConstructOptions &opts) {
  if (group.kind != family_group(f))
    throw std::invalid_argument("family " + to_string(f) +
                                " needs a " + to_string(family_group(f)) + " group");
  Construction c;
  c.family = f;
  c.q = group.q;
  c.variant = resolve_variant(f, opts.variant);
  c.group = group;
  const ExpectedParams ex = expected_params(f, group.q);
  const GroupContext &g = c.group;
  const std::vector<Permutation> stab0 = g.bsgs.level_generators(1);

  for (auto &cand : candidates(f, g, c.variant, ex.k, opts.seed)) {
    ScanEntry entry;
    entry.candidate = cand;
    if (cand.size() != ex.k || cand.size() <= 2 || cand.size() >= ex.v - 1) {
      entry.note = "block size " + std::to_string(cand.size()) + " is not " +
                   std::to_string(ex.k) + " or is degenerate";
      c.scan_log.push_back(std::move(entry));
      continue;
    }
    IncidenceStructure s;
    try {
      s = expand_base_block(g.generators, g.degree, cand, opts.threads, ex.b);
    } catch (const std::length_error &e) {
      entry.note = e.what();
      c.scan_log.push_back(std::move(entry));
      continue;
    }
    entry.blocks = s.num_blocks();
    if (s.num_blocks() != ex.b) {
      entry.note = "orbit has " + std::to_string(s.num_blocks()) +
                   " blocks, expected " + std::to_string(ex.b);
      c.scan_log.push_back(std::move(entry));
      continue;
    }
    DesignParams p = compute_params(s);
    const BlockIndex index(s);
    LambdaResult exhaustive, sampled;
    const bool small = opts.full_pairs || s.v() <= opts.bruteforce_max_v;
    if (small)
      exhaustive = verify_lambda_bruteforce(s, opts.threads, 0);
    else
      sampled = verify_lambda_sampled(s, opts.sample_pairs, opts.seed, opts.threads);
    const LambdaResult transitive =
        verify_lambda_2transitive(g.bsgs, s, index, opts.threads);
    const LambdaResult &direct = small ? exhaustive : sampled;
    const bool lambda_ok = direct.constant && direct.lambda == ex.lambda &&
                           transitive.lambda == ex.lambda;
    if (!lambda_ok) {
      entry.note = "pair counts are not all equal to " + std::to_string(ex.lambda);
      c.scan_log.push_back(std::move(entry));
      continue;
    }
    p.is_2_design = true;
    p.lambda = ex.lambda;
    p.r_coprime_lambda = std::gcd(p.r, ex.lambda) == 1;
    p.flag_transitive = is_flag_transitive(g.bsgs, stab0, s, index);
    if (!p.flag_transitive || p.r != ex.r || p.k != ex.k) {
      entry.note = p.flag_transitive ? "parameters differ" : "not flag-transitive";
      c.scan_log.push_back(std::move(entry));
      continue;
    }
    entry.accepted = true;
    entry.note = "verified";
    c.scan_log.push_back(std::move(entry));
    c.base_block = cand;
    c.params = p;
    c.lambda_exhaustive = exhaustive;
    c.lambda_sampled = sampled;
    c.lambda_transitive = transitive;
    c.checks = arithmetic_checks(p);
    c.design = std::move(s);
    return c;
  }
  throw RecipeError("recipe failed: no candidate block verified for family " +
                        to_string(f) + " at q = " + std::to_string(group.q),
                    c.scan_log);
}

namespace {

nlohmann::json lambda_json(const LambdaResult &r) {
  nlohmann::json j;
  j["constant"] = r.constant;
  j["lambda"] = r.lambda;
  j["pairs_checked"] = r.pairs_checked;
  if (r.witness) {
    j["witness"] = {r.witness->first, r.witness->second};
    j["witness_count"] = r.witness_count;
  }
  return j;
}

}  // namespace

nlohmann::json construction_to_json(const Construction &c, bool with_blocks) {
  nlohmann::json j;
  j["family"] = to_string(c.family);
  j["q"] = c.q;
  j["variant"] = c.variant;
  j["group"] = {{"kind", to_string(c.group.kind)},
                {"degree", c.group.degree},
                {"order", c.group.order().get_str()},
                {"field_modulus", c.group.field.modulus_string()}};
  j["base_block"] = c.base_block;
  j["params"] = params_to_json(c.params);
  const ExpectedParams ex = expected_params(c.family, c.q);
  j["expected"] = {{"v", ex.v}, {"b", ex.b}, {"r", ex.r}, {"k", ex.k},
                   {"lambda", ex.lambda}};
  auto &lam = j["lambda_verification"];
  lam["two_transitive"] = lambda_json(c.lambda_transitive);
  if (c.lambda_exhaustive.pairs_checked)
    lam["exhaustive"] = lambda_json(c.lambda_exhaustive);
  if (c.lambda_sampled.pairs_checked)
    lam["sampled"] = lambda_json(c.lambda_sampled);
  auto &checks = j["checks"] = nlohmann::json::array();
  for (const auto &ch : c.checks)
    checks.push_back({{"name", ch.name}, {"ok", ch.ok}, {"detail", ch.detail}});
  auto &log = j["scan_log"] = nlohmann::json::array();
  for (const auto &e : c.scan_log)
    log.push_back({{"candidate_size", e.candidate.size()},
                   {"candidate_min", e.candidate.empty() ? 0 : e.candidate.front()},
                   {"blocks", e.blocks},
                   {"accepted", e.accepted},
                   {"note", e.note}});
  if (with_blocks)
    j["design"] = design_to_json(c.design);
  return j;
}

VerifyReport verify_design(const GroupContext &g, const IncidenceStructure &s,
                           const VerifyOptions &opts) {
  VerifyReport rep;
  DesignParams &p = rep.params;
  p = compute_params(s);
  auto fail = [&](const std::string &name) { rep.failed.push_back(name); };
  if (s.v() != g.degree) {
    fail("points match the group degree");
    return rep;
  }
  if (!p.uniform_k || p.k <= 2 || p.k + 1 >= p.v)
    fail("non-degenerate uniform blocks");
  if (!p.uniform_r)
    fail("constant replication number");

  const BlockIndex index(s);
  if (opts.full) {
    rep.closure = check_block_closure(g.generators, s, index, opts.threads);
    if (!rep.closure->closed)
      fail("block set closed under the group");
  }
  bool closed = !rep.closure || rep.closure->closed;
  if (closed) {
    try {
      rep.transitive = verify_lambda_2transitive(g.bsgs, s, index, opts.threads);
    } catch (const std::invalid_argument &) {
      closed = false;
      if (!opts.full)
        fail("block set closed under the group");
    }
  }

  std::vector<const LambdaResult *> counts;
  if (closed)
    counts.push_back(&rep.transitive);
  if (opts.full) {
    if (opts.brute_force || s.v() <= opts.bruteforce_max_v) {
      rep.exhaustive = verify_lambda_bruteforce(s, opts.threads, 0);
      counts.push_back(&rep.exhaustive);
    } else {
      rep.sampled = verify_lambda_sampled(s, opts.sample_pairs, opts.seed, opts.threads);
      counts.push_back(&rep.sampled);
    }
  }
  const bool lambda_ok =
      !counts.empty() && std::all_of(counts.begin(), counts.end(), [&](const LambdaResult *r) {
        return r->constant && r->lambda == counts.front()->lambda;
      });
  if (lambda_ok && counts.front()->lambda > 0) {
    p.is_2_design = true;
    p.lambda = counts.front()->lambda;
    p.r_coprime_lambda = std::gcd(p.r, *p.lambda) == 1;
  } else {
    fail("every pair in lambda blocks");
  }
  if (closed) {
    const std::vector<Permutation> stab0 = g.bsgs.level_generators(1);
    p.flag_transitive = is_flag_transitive(g.bsgs, stab0, s, index);
  }
  if (!p.flag_transitive)
    fail("flag-transitive");
  if (p.is_2_design) {
    rep.checks = arithmetic_checks(p);
    for (const auto &c : rep.checks)
      if (!c.ok)
        fail(c.name);
  }
  return rep;
}

nlohmann::json verify_report_to_json(const VerifyReport &r) {
  nlohmann::json j;
  j["params"] = params_to_json(r.params);
  auto &lam = j["lambda_verification"] = nlohmann::json::object();
  if (r.transitive.pairs_checked)
    lam["two_transitive"] = lambda_json(r.transitive);
  if (r.exhaustive.pairs_checked)
    lam["exhaustive"] = lambda_json(r.exhaustive);
  if (r.sampled.pairs_checked)
    lam["sampled"] = lambda_json(r.sampled);
  if (r.closure) {
    j["closure"] = {{"closed", r.closure->closed}};
    if (r.closure->witness)
      j["closure"]["witness"] = {{"block", r.closure->witness->first},
                                 {"generator", r.closure->witness->second}};
  }
  auto &checks = j["checks"] = nlohmann::json::array();
  for (const auto &ch : r.checks)
    checks.push_back({{"name", ch.name}, {"ok", ch.ok}, {"detail", ch.detail}});
  j["failed"] = r.failed;
  j["verdict"] = r.ok() ? "verified" : "failed";
  return j;
}

}  // namespace exdes
