#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "exdes/design.hpp"
#include "exdes/groups.hpp"

namespace exdes {

// a: Sz(q), k = q.  b: Ree unital, k = q+1.  c: Ree, k = q.  d: Ree, k = q^2.
enum class Family { A, B, C, D };

// Accepts a-d and the long names suzuki-a, ree-b (or ree-unital), ree-c, ree-d.
Family parse_family(const std::string &s);
std::string to_string(Family f);
GroupKind family_group(Family f);

struct ExpectedParams {
  std::uint64_t v, b, r, k, lambda;
};

ExpectedParams expected_params(Family f, std::uint64_t q);

// Base-block recipes available for a family ("default" is always first).
std::vector<std::string> family_variants(Family f);

struct ConstructOptions {
  std::string variant = "default";
  std::uint64_t seed = 0xDE516;
  unsigned threads = 1;
  // Pair checking: exhaustive when v is small or full_pairs is set, sampled
  // otherwise (alongside the 2-transitivity count).
  bool full_pairs = false;
  std::uint64_t sample_pairs = 100000;
  std::size_t bruteforce_max_v = 2500;
};

struct ScanEntry {
  std::vector<Point> candidate;  // sorted orbit
  std::uint64_t blocks = 0;
  bool accepted = false;
  std::string note;
};

struct Construction {
  Family family = Family::A;
  std::uint32_t q = 0;
  std::string variant;
  GroupContext group;
  std::vector<Point> base_block;
  IncidenceStructure design;
  DesignParams params;
  LambdaResult lambda_exhaustive;  // pairs_checked == 0 if not run
  LambdaResult lambda_sampled;     // pairs_checked == 0 if not run
  LambdaResult lambda_transitive;
  std::vector<NamedCheck> checks;
  std::vector<ScanEntry> scan_log;
};

// Carries the scan log of a recipe that produced no verified design.
class RecipeError : public std::runtime_error {
 public:
  RecipeError(const std::string &what, std::vector<ScanEntry> log)
      : std::runtime_error(what), log_(std::move(log)) {}
  const std::vector<ScanEntry> &log() const { return log_; }

 private:
  std::vector<ScanEntry> log_;
};

// Builds the group, picks the base-block candidates of the requested
// variant, expands each until one gives a verified 2-design with the
// expected parameters, and checks flag-transitivity.
Construction construct(Family f, std::uint32_t q, const ConstructOptions &opts = {});

// Same, reusing an already built group of the right kind and order.
Construction construct(Family f, const GroupContext &group,
                       const ConstructOptions &opts = {});

nlohmann::json construction_to_json(const Construction &c, bool with_blocks);

struct VerifyOptions {
  // Quick: identities and the 2-transitive lambda count.  Full adds the
  // pair oracle (exhaustive or sampled) and an explicit closure scan.
  bool full = true;
  bool brute_force = false;  // exhaustive pairs whatever v is
  std::uint64_t sample_pairs = 100000;
  std::uint64_t seed = 0xDE516;
  unsigned threads = 1;
  std::size_t bruteforce_max_v = 2500;
};

struct VerifyReport {
  DesignParams params;
  LambdaResult exhaustive, sampled, transitive;  // pairs_checked == 0 if not run
  std::optional<ClosureResult> closure;
  std::vector<NamedCheck> checks;
  std::vector<std::string> failed;  // names of the invariants that do not hold

  bool ok() const { return failed.empty(); }
};

// Re-checks a design on the points of `group` from scratch.
VerifyReport verify_design(const GroupContext &group, const IncidenceStructure &s,
                           const VerifyOptions &opts = {});

nlohmann::json verify_report_to_json(const VerifyReport &r);

}  // namespace exdes
