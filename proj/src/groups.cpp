#include "exdes/groups.hpp"

#include <stdexcept>
#include <unordered_map>

namespace exdes {

namespace {

// Entry (i, j, c) stands for c * E_ij (1-based, E_ij maps v_j to v_i).
struct Entry {
  unsigned i, j;
  int c;
};

class MatrixModel {
 public:
  MatrixModel(const FieldCtx &f, unsigned dim) : f_(f), dim_(dim) {}

  using Mat = std::vector<FieldElement>;
  using Vec = std::vector<FieldElement>;

  unsigned dim() const { return dim_; }

  Mat identity() const {
    Mat m(dim_ * dim_, f_.zero());
    for (unsigned i = 0; i < dim_; ++i)
      m[i * dim_ + i] = f_.one();
    return m;
  }

  // I + t * sum(e) + t^2 * sum(sq), sq already holding the halved square.
  Mat root_element(std::span<const Entry> e, std::span<const Entry> sq,
                   FieldElement t) const {
    Mat m = identity();
    const FieldElement t2 = f_.mul(t, t);
    for (const Entry &x : e)
      accumulate(m, x, t);
    for (const Entry &x : sq)
      accumulate(m, x, t2);
    return m;
  }

  Mat mul(const Mat &a, const Mat &b) const {
    Mat c(dim_ * dim_, f_.zero());
    for (unsigned i = 0; i < dim_; ++i)
      for (unsigned k = 0; k < dim_; ++k) {
        const FieldElement aik = a[i * dim_ + k];
        if (aik.label == 0)
          continue;
        for (unsigned j = 0; j < dim_; ++j)
          c[i * dim_ + j] = f_.add(c[i * dim_ + j], f_.mul(aik, b[k * dim_ + j]));
      }
    return c;
  }

  Vec apply(const Mat &m, const Vec &v) const {
    Vec r(dim_, f_.zero());
    for (unsigned i = 0; i < dim_; ++i)
      for (unsigned j = 0; j < dim_; ++j)
        r[i] = f_.add(r[i], f_.mul(m[i * dim_ + j], v[j]));
    return r;
  }

  // Scale so the last nonzero coordinate is 1.
  Vec normalize(Vec v) const {
    for (unsigned i = dim_; i-- > 0;)
      if (v[i].label != 0) {
        const FieldElement s = f_.inv(v[i]);
        for (auto &x : v)
          x = f_.mul(x, s);
        return v;
      }
    throw std::logic_error("zero vector");
  }

  std::uint64_t key(const Vec &v) const {
    std::uint64_t k = 0;
    for (unsigned i = dim_; i-- > 0;)
      k = k * f_.order() + v[i].label;
    return k;
  }

  Vec basis(unsigned i) const {
    Vec v(dim_, f_.zero());
    v[i] = f_.one();
    return v;
  }

 private:
  const FieldCtx &f_;
  unsigned dim_;

  void accumulate(Mat &m, const Entry &x, FieldElement s) const {
    auto &cell = m[(x.i - 1) * dim_ + (x.j - 1)];
    cell = f_.add(cell, f_.mul(f_.from_int(x.c), s));
  }
};

using Mat = MatrixModel::Mat;
using Vec = MatrixModel::Vec;

// Chevalley basis data.  Suzuki: 4-dim module of Sp4 in characteristic 2.
const Entry kSzA[] = {{1, 2, 1}, {3, 4, 1}};
const Entry kSzB[] = {{2, 3, 1}};
const Entry kSzAB[] = {{1, 3, 1}, {2, 4, 1}};

// Ree: 7-dim module of G2 in characteristic 3; second list of each pair is
// the divided square e^2/2.
const Entry kReeA[] = {{1, 2, 1}, {3, 4, 2}, {4, 5, 1}, {6, 7, 1}};
const Entry kReeA2[] = {{3, 5, 1}};
const Entry kReeB[] = {{2, 3, 1}, {5, 6, 1}};
const Entry kReeAB[] = {{1, 3, 1}, {2, 4, 1}, {4, 6, 1}, {5, 7, 2}};
const Entry kReeAB2[] = {{2, 6, 2}};
const Entry kRee2AB[] = {{1, 4, 1}, {2, 5, 1}, {3, 6, 1}, {4, 7, 2}};
const Entry kRee2AB2[] = {{1, 7, 1}};

// Everything the build needs from the matrix model.
struct ModelData {
  std::vector<Mat> unipotent_basis;  // x_S(t) for t = 1, x, ..., x^(a-1)
  Mat root_one;                      // x_S(1)
  Mat torus;                         // h(primitive)
  Mat weyl;
};

Mat twisted_root(const MatrixModel &mm, const FieldCtx &f, GroupKind kind,
                 FieldElement t) {
  const long long s = [&] {
    long long r = 1;
    for (unsigned i = 0; i < f.m(); ++i)
      r *= f.p();
    return r;
  }();
  const std::span<const Entry> none;
  if (kind == GroupKind::Suzuki) {
    Mat m = mm.root_element(kSzA, none, f.pow(t, s));
    m = mm.mul(m, mm.root_element(kSzB, none, t));
    return mm.mul(m, mm.root_element(kSzAB, none, f.pow(t, s + 1)));
  }
  Mat m = mm.root_element(kReeA, kReeA2, f.pow(t, s));
  m = mm.mul(m, mm.root_element(kReeB, none, t));
  m = mm.mul(m, mm.root_element(kReeAB, kReeAB2, f.neg(f.pow(t, s + 1))));
  return mm.mul(m, mm.root_element(kRee2AB, kRee2AB2, f.pow(t, 2 * s + 1)));
}

ModelData model_data(const MatrixModel &mm, const FieldCtx &f, GroupKind kind) {
  ModelData d;
  for (unsigned i = 0; i < f.degree(); ++i) {
    std::vector<unsigned> c(f.degree(), 0);
    c[i] = 1;
    d.unipotent_basis.push_back(twisted_root(mm, f, kind, f.from_coeffs(c)));
  }
  d.root_one = twisted_root(mm, f, kind, f.one());

  long long s = 1;
  for (unsigned i = 0; i < f.m(); ++i)
    s *= f.p();
  const FieldElement z = f.primitive();
  const unsigned n = mm.dim();
  std::vector<long long> ex;
  if (kind == GroupKind::Suzuki)
    ex = {2 * s + 1, 1, -1, -2 * s - 1};
  else
    ex = {2 * s + 1, s + 1, s, 0, -s, -s - 1, -2 * s - 1};
  d.torus.assign(n * n, f.zero());
  d.weyl.assign(n * n, f.zero());
  for (unsigned i = 0; i < n; ++i) {
    d.torus[i * n + i] = f.pow(z, ex[i]);
    const FieldElement sign =
        (kind == GroupKind::Ree && i % 2 == 1) ? f.neg(f.one()) : f.one();
    d.weyl[i * n + (n - 1 - i)] = sign;
  }
  return d;
}

GroupContext build(GroupKind kind, std::uint32_t q) {
  const auto [p, a] = twisted_field_params(q);
  if ((kind == GroupKind::Suzuki) != (p == 2))
    throw DomainError(kind == GroupKind::Suzuki
                          ? "Suzuki groups need q = 2^(2m+1), m >= 1"
                          : "Ree groups need q = 3^(2m+1), m >= 1");
  const unsigned coords = kind == GroupKind::Suzuki ? 2 : 3;
  std::uint64_t affine = 1;
  for (unsigned i = 0; i < coords; ++i)
    affine *= q;
  if (affine + 1 > (1u << 20))
    throw DomainError("degree " + std::to_string(affine + 1) +
                      " is beyond the supported range");

  GroupContext ctx;
  ctx.kind = kind;
  ctx.q = q;
  ctx.field = FieldCtx(p, a);
  ctx.degree = affine + 1;
  ctx.dim = kind == GroupKind::Suzuki ? 4 : 7;
  const FieldCtx &f = ctx.field;
  const MatrixModel mm(f, ctx.dim);
  const ModelData md = model_data(mm, f, kind);
  const unsigned n = ctx.dim;

  // Affine points are the Q-orbit of <v_n>; Q acts regularly on it, so each
  // point P carries the unique u in Q with u v_n = P.
  auto index_of = [&](const Vec &v) {
    std::uint64_t idx = 0;
    for (unsigned i = 0; i < coords; ++i)
      idx = idx * q + v[n - 2 - i].label;
    return static_cast<Point>(idx + 1);
  };
  std::vector<Vec> vecs(ctx.degree);
  std::vector<Mat> elems(ctx.degree);
  std::vector<char> seen(ctx.degree, 0);
  vecs[0] = mm.basis(0);
  {
    const Vec start = mm.basis(n - 1);
    const Point i0 = index_of(start);
    vecs[i0] = start;
    elems[i0] = mm.identity();
    seen[i0] = 1;
    std::vector<Point> queue{i0};
    for (std::size_t h = 0; h < queue.size(); ++h) {
      const Point x = queue[h];
      for (const Mat &g : md.unipotent_basis) {
        const Vec w = mm.normalize(mm.apply(g, vecs[x]));
        const Point y = index_of(w);
        if (seen[y]) {
          if (vecs[y] != w)
            throw std::logic_error("unipotent coordinates are not injective");
          continue;
        }
        seen[y] = 1;
        vecs[y] = w;
        elems[y] = mm.mul(g, elems[x]);
        queue.push_back(y);
      }
    }
    if (queue.size() != affine)
      throw std::logic_error("unipotent orbit has the wrong size");
  }

  std::unordered_map<std::uint64_t, Point> lookup;
  lookup.reserve(ctx.degree * 2);
  for (Point i = 0; i < ctx.degree; ++i)
    lookup.emplace(mm.key(vecs[i]), i);

  auto perm_of = [&](const Mat &m) {
    std::vector<Point> img(ctx.degree);
    for (Point i = 0; i < ctx.degree; ++i) {
      const auto it = lookup.find(mm.key(mm.normalize(mm.apply(m, vecs[i]))));
      if (it == lookup.end())
        throw std::logic_error("matrix does not preserve the point set");
      img[i] = it->second;
    }
    return Permutation(std::move(img));
  };

  const Permutation root = perm_of(md.root_one);
  const Permutation torus = perm_of(md.torus);
  ctx.weyl = perm_of(md.weyl);
  ctx.generators = {root, torus, ctx.weyl};

  SchreierSimsOptions opts;
  opts.base_prefix = {0, 1};
  opts.target_order = expected_group_order(kind, q);
  ctx.bsgs = schreier_sims(ctx.generators, ctx.degree, opts);

  for (const Mat &g : md.unipotent_basis)
    ctx.unipotent_gens.push_back(perm_of(g));
  ctx.torus_gens = {torus};

  // Subgroups of Q cut out by vanishing superdiagonals; generators picked
  // greedily by point index until the span (the orbit of point 1, since Q is
  // regular) reaches the expected size.
  auto subgroup = [&](auto keep, std::uint64_t expected) {
    std::vector<Point> members;
    for (Point i = 1; i < ctx.degree; ++i)
      if (keep(elems[i]))
        members.push_back(i);
    if (members.size() != expected)
      throw std::logic_error("subgroup of Q has unexpected order");
    std::vector<Permutation> gens;
    Orbit span = orbit(gens, 1, ctx.degree);
    for (Point m : members) {
      if (span.contains(m))
        continue;
      gens.push_back(perm_of(elems[m]));
      span = orbit(gens, 1, ctx.degree);
    }
    if (span.size() != expected)
      throw std::logic_error("subgroup of Q is not closed");
    return gens;
  };
  auto zero_bands = [&](unsigned width) {
    return [&, width](const Mat &u) {
      for (unsigned i = 0; i < n; ++i)
        for (unsigned d = 1; d <= width && i + d < n; ++d)
          if (u[i * n + i + d].label != 0)
            return false;
      return true;
    };
  };
  if (kind == GroupKind::Suzuki) {
    ctx.center_gens = subgroup(zero_bands(1), q);
    ctx.derived_gens = ctx.center_gens;
  } else {
    ctx.center_gens = subgroup(zero_bands(2), q);
    ctx.derived_gens = subgroup(zero_bands(1), std::uint64_t(q) * q);
    // commutes with diag(-1, 1, -1, ...) iff entries with i + j odd vanish
    ctx.centralizer_gens = subgroup(
        [&](const Mat &u) {
          for (unsigned i = 0; i < n; ++i)
            for (unsigned j = 0; j < n; ++j)
              if ((i + j) % 2 == 1 && u[i * n + j].label != 0)
                return false;
          return true;
        },
        q);
  }

  ctx.coordinates.assign(ctx.degree, {});
  for (Point i = 1; i < ctx.degree; ++i)
    for (unsigned c = 0; c < coords; ++c)
      ctx.coordinates[i].push_back(vecs[i][n - 2 - c].label);
  return ctx;
}

}  // namespace

std::string to_string(GroupKind k) {
  return k == GroupKind::Suzuki ? "sz" : "ree";
}

GroupKind parse_group_kind(const std::string &s) {
  if (s == "sz" || s == "suzuki")
    return GroupKind::Suzuki;
  if (s == "ree")
    return GroupKind::Ree;
  throw std::invalid_argument("unknown group kind '" + s + "'");
}

BigInt expected_group_order(GroupKind kind, std::uint64_t q) {
  const BigInt Q = static_cast<unsigned long>(q);
  if (kind == GroupKind::Suzuki)
    return Q * Q * (Q * Q + 1) * (Q - 1);
  return Q * Q * Q * (Q * Q * Q + 1) * (Q - 1);
}

GroupContext build_suzuki(std::uint32_t q) { return build(GroupKind::Suzuki, q); }
GroupContext build_ree(std::uint32_t q) { return build(GroupKind::Ree, q); }
GroupContext build_group(GroupKind kind, std::uint32_t q) { return build(kind, q); }

std::vector<Permutation> conjugate_subgroup(const GroupContext &ctx,
                                            std::span<const Permutation> gens,
                                            Point beta) {
  if (beta >= ctx.degree)
    throw std::out_of_range("point out of range");
  const Permutation x = ctx.bsgs.level_transversal(0, beta);
  const Permutation xi = x.inverse();
  std::vector<Permutation> out;
  for (const auto &g : gens)
    out.push_back(xi * g * x);
  return out;
}

Permutation find_involution(const GroupContext &ctx, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  for (int attempt = 0; attempt < 1000; ++attempt) {
    const Permutation g = random_element(ctx.bsgs, rng);
    const std::uint64_t o = element_order(g);
    if (o % 2 == 0)
      return power(g, o / 2);
  }
  throw std::runtime_error("no involution found");
}

std::vector<Permutation> parabolic_generators(const GroupContext &ctx) {
  std::vector<Permutation> out = ctx.unipotent_gens;
  out.insert(out.end(), ctx.torus_gens.begin(), ctx.torus_gens.end());
  return out;
}

}  // namespace exdes
