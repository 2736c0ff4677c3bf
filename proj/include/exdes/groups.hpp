#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "exdes/ffield.hpp"
#include "exdes/permgrp.hpp"

namespace exdes {

enum class GroupKind { Suzuki, Ree };

std::string to_string(GroupKind k);
GroupKind parse_group_kind(const std::string &s);  // "sz" / "ree"

// Sz(q) on the q^2+1 points of its ovoid, or 2G2(q) on the q^3+1 points of
// its Ree unital, built from a matrix model and certified by Schreier-Sims
// against the known group order.
//
// Point 0 is the point at infinity, point 1 its opposite.  Affine point
// 1 + sum L(c_i) q^(d-1-i) corresponds to the unipotent coordinate tuple
// (c_0, ..., c_{d-1}); see coordinates().
struct GroupContext {
  GroupKind kind = GroupKind::Suzuki;
  std::uint32_t q = 0;
  FieldCtx field{2, 3};
  std::size_t degree = 0;
  unsigned dim = 0;  // dimension of the matrix module

  std::vector<Permutation> generators;  // twisted root element, torus, Weyl
  Bsgs bsgs;                            // base begins 0, 1
  Permutation weyl;                     // swaps points 0 and 1

  // All inside the stabiliser of point 0:
  std::vector<Permutation> unipotent_gens;  // Q, regular on points != 0
  std::vector<Permutation> torus_gens;      // stabiliser of 0 and 1, cyclic
  std::vector<Permutation> center_gens;     // Z(Q), order q
  std::vector<Permutation> derived_gens;    // Q' (order q^2 for Ree, q for Sz)
  // Ree only: centraliser in Q of the torus involution, order q.
  std::vector<Permutation> centralizer_gens;

  // Unipotent coordinates of affine points (field labels); empty for 0.
  std::vector<std::vector<std::uint32_t>> coordinates;

  BigInt order() const { return bsgs.order(); }
  std::uint64_t point_count() const { return degree; }
};

BigInt expected_group_order(GroupKind kind, std::uint64_t q);

GroupContext build_suzuki(std::uint32_t q);
GroupContext build_ree(std::uint32_t q);
GroupContext build_group(GroupKind kind, std::uint32_t q);

// x^-1 g x for every g, where x maps 0 to beta; the result fixes beta.
std::vector<Permutation> conjugate_subgroup(const GroupContext &ctx,
                                            std::span<const Permutation> gens,
                                            Point beta);

// Deterministic in seed.  Throws std::runtime_error if no even-order element
// turns up within the retry budget.
Permutation find_involution(const GroupContext &ctx, std::uint64_t seed);

// Stabiliser of 0 as generators: unipotent_gens followed by torus_gens.
std::vector<Permutation> parabolic_generators(const GroupContext &ctx);

}  // namespace exdes
