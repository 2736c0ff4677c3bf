#include "exdes/permgrp.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>
#include <string>

#include <nlohmann/json.hpp>

namespace exdes {

Permutation::Permutation(std::vector<Point> images) : images_(std::move(images)) {
  std::vector<char> seen(images_.size(), 0);
  for (Point x : images_) {
    if (x >= images_.size() || seen[x])
      throw std::invalid_argument("image list is not a permutation");
    seen[x] = 1;
  }
}

Permutation Permutation::identity(std::size_t n) {
  Permutation p;
  p.images_.resize(n);
  std::iota(p.images_.begin(), p.images_.end(), Point{0});
  return p;
}

Permutation Permutation::operator*(const Permutation &h) const {
  if (h.degree() != degree())
    throw std::invalid_argument("degree mismatch in product");
  Permutation r;
  r.images_.resize(images_.size());
  for (std::size_t i = 0; i < images_.size(); ++i)
    r.images_[i] = h.images_[images_[i]];
  return r;
}

Permutation Permutation::inverse() const {
  Permutation r;
  r.images_.resize(images_.size());
  for (std::size_t i = 0; i < images_.size(); ++i)
    r.images_[images_[i]] = static_cast<Point>(i);
  return r;
}

bool Permutation::is_identity() const {
  for (std::size_t i = 0; i < images_.size(); ++i)
    if (images_[i] != i)
      return false;
  return true;
}

Permutation power(const Permutation &g, std::uint64_t n) {
  Permutation r = Permutation::identity(g.degree()), b = g;
  while (n) {
    if (n & 1)
      r = r * b;
    b = b * b;
    n >>= 1;
  }
  return r;
}

std::vector<std::vector<Point>> cycles(const Permutation &g) {
  std::vector<std::vector<Point>> out;
  std::vector<char> seen(g.degree(), 0);
  for (Point x = 0; x < g.degree(); ++x) {
    if (seen[x])
      continue;
    std::vector<Point> c;
    for (Point y = x; !seen[y]; y = g(y)) {
      seen[y] = 1;
      c.push_back(y);
    }
    out.push_back(std::move(c));
  }
  return out;
}

std::uint64_t element_order(const Permutation &g) {
  std::uint64_t ord = 1;
  for (const auto &c : cycles(g)) {
    const std::uint64_t len = c.size();
    const std::uint64_t l = ord / std::gcd(ord, len);
    if (l > UINT64_MAX / len)
      throw std::overflow_error("element order exceeds 64 bits");
    ord = l * len;
  }
  return ord;
}

std::vector<Point> fixed_points(const Permutation &g) {
  std::vector<Point> out;
  for (Point x = 0; x < g.degree(); ++x)
    if (g(x) == x)
      out.push_back(x);
  return out;
}

namespace {

template <class GenAt>
Orbit orbit_impl(std::size_t ngens, GenAt gen_at, Point root,
                 std::size_t degree) {
  Orbit o;
  o.root = root;
  o.via.assign(degree, -1);
  o.parent.assign(degree, 0);
  o.points.push_back(root);
  std::vector<char> seen(degree, 0);
  seen[root] = 1;
  for (std::size_t head = 0; head < o.points.size(); ++head) {
    const Point x = o.points[head];
    for (std::size_t j = 0; j < ngens; ++j) {
      const Point y = gen_at(j)(x);
      if (!seen[y]) {
        seen[y] = 1;
        o.via[y] = static_cast<std::int32_t>(j);
        o.parent[y] = x;
        o.points.push_back(y);
      }
    }
  }
  return o;
}

}  // namespace

Orbit orbit(std::span<const Permutation> gens, Point root, std::size_t degree) {
  if (root >= degree)
    throw std::out_of_range("orbit root out of range");
  return orbit_impl(
      gens.size(), [&](std::size_t j) -> const Permutation & { return gens[j]; },
      root, degree);
}

Permutation transversal(const Orbit &o, std::span<const Permutation> gens,
                        Point x) {
  if (!o.contains(x))
    throw std::invalid_argument("point not in orbit");
  std::vector<std::int32_t> path;
  for (Point y = x; y != o.root; y = o.parent[y])
    path.push_back(o.via[y]);
  Permutation u = Permutation::identity(o.via.size());
  for (auto it = path.rbegin(); it != path.rend(); ++it)
    u = u * gens[*it];
  return u;
}

std::vector<std::vector<Point>> orbits(std::span<const Permutation> gens,
                                       std::size_t degree) {
  std::vector<std::vector<Point>> out;
  std::vector<char> seen(degree, 0);
  for (Point x = 0; x < degree; ++x) {
    if (seen[x])
      continue;
    std::vector<Point> o{x};
    seen[x] = 1;
    for (std::size_t h = 0; h < o.size(); ++h)
      for (const auto &g : gens) {
        const Point y = g(o[h]);
        if (!seen[y]) {
          seen[y] = 1;
          o.push_back(y);
        }
      }
    std::sort(o.begin(), o.end());
    out.push_back(std::move(o));
  }
  return out;
}

BigInt Bsgs::order() const {
  BigInt n = 1;
  for (const auto &l : levels_)
    n *= static_cast<unsigned long>(l.orbit.size());
  return n;
}

std::vector<Permutation> Bsgs::level_generators(std::size_t i) const {
  std::vector<Permutation> out;
  if (i >= levels_.size())
    return out;
  for (std::size_t j : levels_[i].gens)
    out.push_back(strong_[j]);
  return out;
}

void Bsgs::rebuild_level(std::size_t i) {
  Level &l = levels_[i];
  l.orbit = orbit_impl(
      l.gens.size(),
      [&](std::size_t j) -> const Permutation & { return strong_[l.gens[j]]; },
      base_[i], degree_);
}

std::pair<Permutation, std::size_t> Bsgs::sift(const Permutation &g) const {
  Permutation h = g;
  for (std::size_t i = 0; i < levels_.size(); ++i) {
    const Level &l = levels_[i];
    Point beta = h(base_[i]);
    if (!l.orbit.contains(beta))
      return {h, i};
    while (beta != base_[i]) {
      const std::size_t j = l.gens[l.orbit.via[beta]];
      h = h * strong_inv_[j];
      beta = l.orbit.parent[beta];
    }
  }
  return {h, levels_.size()};
}

bool Bsgs::contains(const Permutation &g) const {
  if (g.degree() != degree_)
    return false;
  return sift(g).first.is_identity();
}

Permutation Bsgs::level_transversal(std::size_t i, Point x) const {
  const Level &l = levels_.at(i);
  if (!l.orbit.contains(x))
    throw std::invalid_argument("point not in level orbit");
  std::vector<std::size_t> path;
  for (Point y = x; y != base_[i]; y = l.orbit.parent[y])
    path.push_back(l.gens[l.orbit.via[y]]);
  Permutation u = Permutation::identity(degree_);
  for (auto it = path.rbegin(); it != path.rend(); ++it)
    u = u * strong_[*it];
  return u;
}

namespace {

// Product replacement random element generator.
class ProductReplacement {
 public:
  ProductReplacement(std::span<const Permutation> gens, std::size_t degree,
                     std::uint64_t seed)
      : rng_(seed), acc_(Permutation::identity(degree)) {
    const std::size_t r = std::max<std::size_t>(10, gens.size());
    for (std::size_t i = 0; i < r; ++i)
      slots_.push_back(gens.empty() ? Permutation::identity(degree)
                                    : gens[i % gens.size()]);
    for (int i = 0; i < 50; ++i)
      next();
  }

  Permutation next() {
    std::uniform_int_distribution<std::size_t> pick(0, slots_.size() - 1);
    std::size_t s = pick(rng_), t = pick(rng_);
    while (t == s)
      t = pick(rng_);
    const bool invert = rng_() & 1, left = rng_() & 1;
    const Permutation &w = invert ? slots_[t].inverse() : slots_[t];
    slots_[s] = left ? w * slots_[s] : slots_[s] * w;
    acc_ = acc_ * slots_[s];
    return acc_;
  }

 private:
  std::mt19937_64 rng_;
  std::vector<Permutation> slots_;
  Permutation acc_;
};

Point first_moved(const Permutation &g) {
  for (Point x = 0; x < g.degree(); ++x)
    if (g(x) != x)
      return x;
  return static_cast<Point>(g.degree());
}

}  // namespace

Bsgs schreier_sims(std::span<const Permutation> gens, std::size_t degree,
                   const SchreierSimsOptions &opts) {
  Bsgs b;
  b.degree_ = degree;
  for (const auto &g : gens) {
    if (g.degree() != degree)
      throw std::invalid_argument("generator degree mismatch");
    b.gens_.push_back(g);
  }
  for (Point x : opts.base_prefix) {
    if (x >= degree)
      throw std::out_of_range("base point out of range");
    if (std::find(b.base_.begin(), b.base_.end(), x) == b.base_.end())
      b.base_.push_back(x);
  }

  auto add_strong = [&](const Permutation &h) {
    // h fixes base[0..k-1] for the first k with base[k] moved
    std::size_t k = 0;
    while (k < b.base_.size() && h(b.base_[k]) == b.base_[k])
      ++k;
    if (k == b.base_.size())
      b.base_.push_back(first_moved(h));
    while (b.levels_.size() < b.base_.size()) {
      b.levels_.push_back({});
      b.levels_.back().orbit.root = b.base_[b.levels_.size() - 1];
    }
    const std::size_t idx = b.strong_.size();
    b.strong_.push_back(h);
    b.strong_inv_.push_back(h.inverse());
    for (std::size_t i = 0; i <= k; ++i)
      b.levels_[i].gens.push_back(idx);
    return k;
  };

  for (const auto &g : gens)
    if (!g.is_identity())
      add_strong(g);
  while (b.levels_.size() < b.base_.size())
    b.levels_.push_back({});
  for (std::size_t i = 0; i < b.levels_.size(); ++i)
    b.rebuild_level(i);

  if (b.strong_.empty())
    return b;

  ProductReplacement pr(b.strong_, degree, opts.seed);
  unsigned trivial = 0, confirmed = 0;
  for (;;) {
    if (opts.target_order) {
      const BigInt ord = b.order();
      if (ord > *opts.target_order)
        throw std::runtime_error("group order exceeds the expected order");
      if (ord == *opts.target_order && confirmed++ >= opts.confirm_sifts)
        break;
      if (trivial >= 8 * opts.trivial_sift_limit)
        throw std::runtime_error("group order stays below the expected order");
    } else if (trivial >= opts.trivial_sift_limit) {
      break;
    }
    auto [h, lvl] = b.sift(pr.next());
    if (h.is_identity()) {
      ++trivial;
      continue;
    }
    trivial = 0;
    const std::size_t old_levels = b.levels_.size();
    const std::size_t k = add_strong(h);
    for (std::size_t i = 0; i <= k; ++i)
      b.rebuild_level(i);
    for (std::size_t i = old_levels; i < b.levels_.size(); ++i)
      b.rebuild_level(i);
    (void)lvl;
  }
  // drop trailing levels with trivial orbits (prefix points kept)
  while (b.levels_.size() > opts.base_prefix.size() &&
         b.levels_.back().orbit.size() == 1) {
    b.levels_.pop_back();
    b.base_.pop_back();
  }
  return b;
}

Bsgs point_stabilizer_bsgs(const Bsgs &g, Point alpha) {
  SchreierSimsOptions opts;
  opts.base_prefix = {alpha};
  opts.target_order = g.order();
  Bsgs h = schreier_sims(g.strong_generators(), g.degree(), opts);
  std::vector<Permutation> gens = h.level_generators(1);
  SchreierSimsOptions sub;
  BigInt target = h.order();
  target /= static_cast<unsigned long>(h.level_orbit(0).size());
  sub.target_order = target;
  return schreier_sims(gens, g.degree(), sub);
}

std::vector<Permutation> point_stabilizer(const Bsgs &g, Point alpha) {
  if (!g.base().empty() && g.base()[0] == alpha)
    return g.level_generators(1);
  SchreierSimsOptions opts;
  opts.base_prefix = {alpha};
  opts.target_order = g.order();
  return schreier_sims(g.strong_generators(), g.degree(), opts)
      .level_generators(1);
}

bool is_transitive(const Bsgs &g) {
  if (g.levels() == 0)
    return g.degree() <= 1;
  return g.level_orbit(0).size() == g.degree();
}

bool is_2_transitive(const Bsgs &g) {
  if (!is_transitive(g) || g.degree() < 2)
    return false;
  if (g.levels() < 2)
    return g.degree() == 2;
  return g.level_orbit(1).size() == g.degree() - 1;
}

Permutation random_element(const Bsgs &g, std::mt19937_64 &rng) {
  Permutation r = Permutation::identity(g.degree());
  for (std::size_t i = g.levels(); i-- > 0;) {
    const Orbit &o = g.level_orbit(i);
    std::uniform_int_distribution<std::size_t> pick(0, o.size() - 1);
    r = r * g.level_transversal(i, o.points[pick(rng)]);
  }
  return r;
}

Permutation random_element(const Bsgs &g, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  return random_element(g, rng);
}

nlohmann::json generators_to_json(std::span<const Permutation> gens,
                                  std::size_t degree) {
  nlohmann::json j;
  j["degree"] = degree;
  j["generators"] = nlohmann::json::array();
  for (const auto &g : gens)
    j["generators"].push_back(std::vector<Point>(g.images().begin(),
                                                 g.images().end()));
  return j;
}

std::vector<Permutation> generators_from_json(const nlohmann::json &j,
                                              std::size_t &degree) {
  degree = j.at("degree").get<std::size_t>();
  std::vector<Permutation> out;
  for (const auto &row : j.at("generators")) {
    auto images = row.get<std::vector<Point>>();
    if (images.size() != degree)
      throw std::invalid_argument("generator of wrong degree");
    out.emplace_back(std::move(images));
  }
  return out;
}

}  // namespace exdes
