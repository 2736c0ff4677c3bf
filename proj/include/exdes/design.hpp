#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "exdes/permgrp.hpp"

namespace exdes {

using BlockPoint = std::uint16_t;
constexpr std::size_t kMaxDesignPoints = 65536;

// Finite incidence structure on points 0..v-1.  Blocks are sorted point
// lists; the block list itself is sorted lexicographically and free of
// duplicates.
class IncidenceStructure {
 public:
  IncidenceStructure() = default;
  // Canonicalises: sorts every block, sorts the list, drops duplicate blocks.
  // Throws std::invalid_argument on out-of-range or repeated points.
  IncidenceStructure(std::size_t v, std::vector<std::vector<Point>> blocks);
  // Blocks of common size k laid out back to back; same canonicalisation.
  static IncidenceStructure from_flat(std::size_t v, std::size_t k,
                                      std::vector<BlockPoint> flat);

  std::size_t v() const { return v_; }
  std::size_t num_blocks() const;
  std::span<const BlockPoint> block(std::size_t i) const;
  // Common block size, if all blocks have the same size.
  std::optional<std::size_t> uniform_size() const;

 private:
  std::size_t v_ = 0;
  std::size_t k_ = 0;                   // used when offsets_ is empty
  std::vector<BlockPoint> flat_;
  std::vector<std::uint64_t> offsets_;  // size b+1 for non-uniform structures

  void canonicalize();
};

// Open-addressing hash index from sorted point lists to block numbers.
class BlockIndex {
 public:
  explicit BlockIndex(const IncidenceStructure &s);
  std::optional<std::size_t> find(std::span<const BlockPoint> sorted) const;

 private:
  const IncidenceStructure *s_;
  std::vector<std::uint32_t> table_;  // block number + 1, 0 = empty
  std::uint64_t mask_ = 0;
};

std::uint64_t hash_block(std::span<const BlockPoint> sorted);

// Orbit of the block `base` under <gens>.  Throws std::invalid_argument if
// base is empty, has repeated points, or lies outside the point range.
// `threads` > 1 computes block images in parallel; the result does not
// depend on it.  With max_blocks > 0, throws std::length_error as soon as
// the orbit grows past that size.
IncidenceStructure expand_base_block(std::span<const Permutation> gens,
                                     std::size_t v,
                                     std::span<const Point> base,
                                     unsigned threads = 1,
                                     std::size_t max_blocks = 0);

struct DesignParams {
  std::uint64_t v = 0, b = 0, r = 0, k = 0;
  std::optional<std::uint64_t> lambda;
  bool uniform_k = false;
  bool uniform_r = false;
  bool is_1_design = false;
  bool is_2_design = false;  // only set by a lambda verification
  bool flag_transitive = false;
  bool r_coprime_lambda = false;
};

// Counts v, b, block sizes and replication numbers; lambda is filled in
// when r(k-1)/(v-1) is integral.
DesignParams compute_params(const IncidenceStructure &s);

struct LambdaResult {
  bool constant = false;
  std::uint64_t lambda = 0;  // the common value (first pair's count)
  std::uint64_t pairs_checked = 0;
  // A pair whose count differs from lambda, with its count.
  std::optional<std::pair<Point, Point>> witness;
  std::uint64_t witness_count = 0;
};

// Every pair of points counted.  Refuses v above `max_v` unless 0.
LambdaResult verify_lambda_bruteforce(const IncidenceStructure &s,
                                      unsigned threads = 1,
                                      std::size_t max_v = 2500);

// n uniformly random pairs of distinct points, seeded.
LambdaResult verify_lambda_sampled(const IncidenceStructure &s,
                                   std::uint64_t n_pairs, std::uint64_t seed,
                                   unsigned threads = 1);

// For a block set closed under a 2-transitive group, lambda is the number of
// blocks through points 0 and 1.  Throws std::invalid_argument when the group
// is not 2-transitive or the structure is not closed.
LambdaResult verify_lambda_2transitive(const Bsgs &g,
                                       const IncidenceStructure &s,
                                       const BlockIndex &index,
                                       unsigned threads = 1);

struct ClosureResult {
  bool closed = true;
  std::optional<std::pair<std::size_t, std::size_t>> witness;  // block, gen
};

ClosureResult check_block_closure(std::span<const Permutation> gens,
                                  const IncidenceStructure &s,
                                  const BlockIndex &index,
                                  unsigned threads = 1);

// Transitive on points and the point stabiliser of 0 transitive on the blocks
// through 0.  stab0 generates the stabiliser of point 0.
bool is_flag_transitive(const Bsgs &g, std::span<const Permutation> stab0,
                        const IncidenceStructure &s, const BlockIndex &index);

struct NamedCheck {
  std::string name;
  bool ok = false;
  std::string detail;
};

// Standard arithmetic constraints on flag-transitive 2-designs with
// gcd(r, lambda) = 1.
std::vector<NamedCheck> arithmetic_checks(const DesignParams &p);

nlohmann::json params_to_json(const DesignParams &p);
nlohmann::json design_to_json(const IncidenceStructure &s);
IncidenceStructure design_from_json(const nlohmann::json &j);

}  // namespace exdes
