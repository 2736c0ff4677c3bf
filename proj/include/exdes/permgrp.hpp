#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <span>
#include <vector>

#include <gmpxx.h>
#include <nlohmann/json_fwd.hpp>

namespace exdes {

using Point = std::uint32_t;
using BigInt = mpz_class;

// A permutation of {0, ..., n-1}.  Products compose left to right:
// (g * h)(x) = h(g(x)), i.e. x^(gh) = (x^g)^h.
class Permutation {
 public:
  Permutation() = default;
  // Throws std::invalid_argument unless images is a bijection.
  explicit Permutation(std::vector<Point> images);
  static Permutation identity(std::size_t n);

  std::size_t degree() const { return images_.size(); }
  Point operator()(Point x) const { return images_[x]; }
  std::span<const Point> images() const { return images_; }

  Permutation operator*(const Permutation &h) const;
  Permutation inverse() const;
  bool is_identity() const;

  friend bool operator==(const Permutation &, const Permutation &) = default;

 private:
  std::vector<Point> images_;
};

Permutation power(const Permutation &g, std::uint64_t n);
std::uint64_t element_order(const Permutation &g);
std::vector<Point> fixed_points(const Permutation &g);
// Every cycle, fixed points included, each starting at its smallest point.
std::vector<std::vector<Point>> cycles(const Permutation &g);

// Orbit of a point with a Schreier vector: for every reached point y other
// than the root, via[y] is the index of the generator g with
// parent[y]^g = y.
struct Orbit {
  Point root = 0;
  std::vector<Point> points;      // BFS order, points[0] == root
  std::vector<std::int32_t> via;  // size = degree, -1 if unreached / root
  std::vector<Point> parent;

  bool contains(Point x) const { return x == root || via[x] >= 0; }
  std::size_t size() const { return points.size(); }
};

Orbit orbit(std::span<const Permutation> gens, Point root, std::size_t degree);

// Element u with root^u = x, read off the Schreier tree.
Permutation transversal(const Orbit &o, std::span<const Permutation> gens,
                        Point x);

// All orbits of <gens> on {0..n-1}, each sorted, listed by smallest point.
std::vector<std::vector<Point>> orbits(std::span<const Permutation> gens,
                                       std::size_t degree);

struct SchreierSimsOptions {
  std::uint64_t seed = 0xDE516;
  std::vector<Point> base_prefix;
  // Stop as soon as the order reaches this value (then confirm with a few
  // more sifts); without it, stop after trivial_sift_limit trivial sifts.
  std::optional<BigInt> target_order;
  unsigned trivial_sift_limit = 48;
  unsigned confirm_sifts = 20;
};

// Base and strong generating set.  Level i holds the orbit of base[i] under
// the strong generators fixing base[0..i-1].
class Bsgs {
 public:
  std::size_t degree() const { return degree_; }
  const std::vector<Point> &base() const { return base_; }
  const std::vector<Permutation> &strong_generators() const { return strong_; }
  const std::vector<Permutation> &generators() const { return gens_; }
  BigInt order() const;
  std::size_t levels() const { return base_.size(); }
  const Orbit &level_orbit(std::size_t i) const { return levels_[i].orbit; }
  // Strong generators fixing base[0..i-1] (generators of the stabiliser chain
  // member G^(i)).
  std::vector<Permutation> level_generators(std::size_t i) const;

  // Residue after sifting and the level where sifting stopped (levels() when
  // it ran through the whole chain).
  std::pair<Permutation, std::size_t> sift(const Permutation &g) const;
  bool contains(const Permutation &g) const;

  // Transversal element of level i mapping base[i] to x.
  Permutation level_transversal(std::size_t i, Point x) const;

 private:
  friend Bsgs schreier_sims(std::span<const Permutation>,
                            std::size_t, const SchreierSimsOptions &);
  struct Level {
    std::vector<std::size_t> gens;  // indices into strong_
    Orbit orbit;
  };

  std::size_t degree_ = 0;
  std::vector<Permutation> gens_;
  std::vector<Point> base_;
  std::vector<Permutation> strong_;
  std::vector<Permutation> strong_inv_;
  std::vector<Level> levels_;

  void rebuild_level(std::size_t i);
};

// Randomized Schreier-Sims.  Result is deterministic for a fixed seed.
// Throws std::runtime_error if a target order is given and exceeded.
Bsgs schreier_sims(std::span<const Permutation> gens, std::size_t degree,
                   const SchreierSimsOptions &opts = {});

// Generators of the stabiliser of alpha.
std::vector<Permutation> point_stabilizer(const Bsgs &g, Point alpha);
Bsgs point_stabilizer_bsgs(const Bsgs &g, Point alpha);

bool is_transitive(const Bsgs &g);
bool is_2_transitive(const Bsgs &g);

// Uniformly distributed element, as a product of random transversal
// elements down the stabiliser chain.
Permutation random_element(const Bsgs &g, std::uint64_t seed);

Permutation random_element(const Bsgs &g, std::mt19937_64 &rng);

// JSON as {"degree": n, "generators": [[images...], ...]}.
nlohmann::json generators_to_json(std::span<const Permutation> gens,
                                  std::size_t degree);
std::vector<Permutation> generators_from_json(const nlohmann::json &j,
                                              std::size_t &degree);

}  // namespace exdes
