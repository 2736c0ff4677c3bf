#include "exdes/design.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>
#include <string_view>

#include <nlohmann/json.hpp>

#include "exdes/parallel.hpp"

namespace exdes {

std::uint64_t hash_block(std::span<const BlockPoint> sorted) {
  const std::string_view bytes(reinterpret_cast<const char *>(sorted.data()),
                               sorted.size() * sizeof(BlockPoint));
  const std::uint64_t h = std::hash<std::string_view>{}(bytes);
  // spread the low bits, which pick the slot
  return (h ^ (h >> 29)) * 0xbf58476d1ce4e5b9ULL;
}

namespace {

bool block_less(std::span<const BlockPoint> a, std::span<const BlockPoint> b) {
  return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end());
}

bool block_equal(std::span<const BlockPoint> a, std::span<const BlockPoint> b) {
  return std::equal(a.begin(), a.end(), b.begin(), b.end());
}

void check_block(std::span<const BlockPoint> sorted, std::size_t v) {
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    if (sorted[i] >= v)
      throw std::invalid_argument("block point out of range");
    if (i > 0 && sorted[i] == sorted[i - 1])
      throw std::invalid_argument("repeated point in block");
  }
}

std::uint64_t table_size_for(std::size_t n) {
  std::uint64_t size = 16;
  while (size < 2 * static_cast<std::uint64_t>(n))
    size <<= 1;
  return size;
}

// Growable hash set of uniform blocks stored back to back.
class FlatBlockSet {
 public:
  explicit FlatBlockSet(std::size_t k) : k_(k), table_(1024, 0), mask_(1023) {}

  std::size_t size() const { return count_; }
  std::span<const BlockPoint> at(std::size_t i) const {
    return {flat_.data() + i * k_, k_};
  }
  std::vector<BlockPoint> release() { return std::move(flat_); }

  bool insert(std::span<const BlockPoint> sorted) {
    const std::uint64_t h = hash_block(sorted);
    std::uint64_t slot = h & mask_;
    while (table_[slot] != 0) {
      if (block_equal(at(table_[slot] - 1), sorted))
        return false;
      slot = (slot + 1) & mask_;
    }
    if (count_ + 1 > UINT32_MAX - 1)
      throw std::length_error("too many blocks");
    flat_.insert(flat_.end(), sorted.begin(), sorted.end());
    table_[slot] = static_cast<std::uint32_t>(++count_);
    if (2 * count_ > table_.size())
      grow();
    return true;
  }

 private:
  std::size_t k_;
  std::vector<BlockPoint> flat_;
  std::vector<std::uint32_t> table_;
  std::uint64_t mask_;
  std::size_t count_ = 0;

  void grow() {
    table_.assign(table_.size() * 2, 0);
    mask_ = table_.size() - 1;
    for (std::size_t i = 0; i < count_; ++i) {
      std::uint64_t slot = hash_block(at(i)) & mask_;
      while (table_[slot] != 0)
        slot = (slot + 1) & mask_;
      table_[slot] = static_cast<std::uint32_t>(i + 1);
    }
  }
};

}  // namespace

IncidenceStructure::IncidenceStructure(std::size_t v,
                                       std::vector<std::vector<Point>> blocks)
    : v_(v) {
  if (v > kMaxDesignPoints)
    throw std::invalid_argument("too many points for block storage");
  offsets_.push_back(0);
  for (auto &b : blocks) {
    std::sort(b.begin(), b.end());
    for (std::size_t i = 0; i < b.size(); ++i) {
      if (b[i] >= v)
        throw std::invalid_argument("block point out of range");
      if (i > 0 && b[i] == b[i - 1])
        throw std::invalid_argument("repeated point in block");
      flat_.push_back(static_cast<BlockPoint>(b[i]));
    }
    offsets_.push_back(flat_.size());
  }
  canonicalize();
}

IncidenceStructure IncidenceStructure::from_flat(std::size_t v, std::size_t k,
                                                 std::vector<BlockPoint> flat) {
  if (v > kMaxDesignPoints)
    throw std::invalid_argument("too many points for block storage");
  if (k == 0 || flat.size() % k != 0)
    throw std::invalid_argument("flat block list is not a multiple of k");
  IncidenceStructure s;
  s.v_ = v;
  s.k_ = k;
  s.flat_ = std::move(flat);
  for (std::size_t i = 0; i < s.flat_.size(); i += k) {
    std::sort(s.flat_.begin() + i, s.flat_.begin() + i + k);
    check_block({s.flat_.data() + i, k}, v);
  }
  s.canonicalize();
  return s;
}

std::size_t IncidenceStructure::num_blocks() const {
  if (offsets_.empty())
    return k_ == 0 ? 0 : flat_.size() / k_;
  return offsets_.size() - 1;
}

std::span<const BlockPoint> IncidenceStructure::block(std::size_t i) const {
  if (offsets_.empty())
    return {flat_.data() + i * k_, k_};
  return {flat_.data() + offsets_[i], offsets_[i + 1] - offsets_[i]};
}

std::optional<std::size_t> IncidenceStructure::uniform_size() const {
  if (offsets_.empty())
    return k_;
  const std::size_t b = num_blocks();
  if (b == 0)
    return std::nullopt;
  const std::size_t k = block(0).size();
  for (std::size_t i = 1; i < b; ++i)
    if (block(i).size() != k)
      return std::nullopt;
  return k;
}

void IncidenceStructure::canonicalize() {
  const std::size_t b = num_blocks();
  std::vector<std::uint32_t> order(b);
  std::iota(order.begin(), order.end(), 0u);
  std::sort(order.begin(), order.end(), [&](std::uint32_t x, std::uint32_t y) {
    return block_less(block(x), block(y));
  });
  std::vector<BlockPoint> flat;
  flat.reserve(flat_.size());
  std::vector<std::uint64_t> offsets;
  if (!offsets_.empty())
    offsets.push_back(0);
  std::optional<std::uint32_t> prev;
  for (std::uint32_t i : order) {
    if (prev && block_equal(block(*prev), block(i)))
      continue;
    prev = i;
    const auto bl = block(i);
    flat.insert(flat.end(), bl.begin(), bl.end());
    if (!offsets_.empty())
      offsets.push_back(flat.size());
  }
  flat_ = std::move(flat);
  offsets_ = std::move(offsets);
  // a non-uniform layout whose blocks all share one size becomes uniform
  if (!offsets_.empty()) {
    if (auto k = uniform_size(); k && *k > 0) {
      k_ = *k;
      offsets_.clear();
    }
  }
}

BlockIndex::BlockIndex(const IncidenceStructure &s) : s_(&s) {
  const std::size_t b = s.num_blocks();
  table_.assign(table_size_for(b), 0);
  mask_ = table_.size() - 1;
  for (std::size_t i = 0; i < b; ++i) {
    std::uint64_t slot = hash_block(s.block(i)) & mask_;
    while (table_[slot] != 0)
      slot = (slot + 1) & mask_;
    table_[slot] = static_cast<std::uint32_t>(i + 1);
  }
}

std::optional<std::size_t> BlockIndex::find(
    std::span<const BlockPoint> sorted) const {
  std::uint64_t slot = hash_block(sorted) & mask_;
  while (table_[slot] != 0) {
    if (block_equal(s_->block(table_[slot] - 1), sorted))
      return table_[slot] - 1;
    slot = (slot + 1) & mask_;
  }
  return std::nullopt;
}

IncidenceStructure expand_base_block(std::span<const Permutation> gens,
                                     std::size_t v,
                                     std::span<const Point> base,
                                     unsigned threads,
                                     std::size_t max_blocks) {
  if (v > kMaxDesignPoints)
    throw std::invalid_argument("too many points for block storage");
  if (base.empty())
    throw std::invalid_argument("empty base block");
  for (const auto &g : gens)
    if (g.degree() != v)
      throw std::invalid_argument("generator degree does not match v");
  std::vector<BlockPoint> start;
  for (Point x : base) {
    if (x >= v)
      throw std::invalid_argument("base block point out of range");
    start.push_back(static_cast<BlockPoint>(x));
  }
  std::sort(start.begin(), start.end());
  if (std::adjacent_find(start.begin(), start.end()) != start.end())
    throw std::invalid_argument("repeated point in base block");

  const std::size_t k = start.size();
  const std::size_t ng = gens.size();
  FlatBlockSet set(k);
  set.insert(start);

  // Images of a batch of blocks are computed (possibly in parallel) into a
  // buffer and inserted in a fixed order.
  constexpr std::size_t kBatch = 1 << 15;
  std::vector<BlockPoint> buffer;
  for (std::size_t head = 0; head < set.size();) {
    const std::size_t end = std::min(set.size(), head + kBatch);
    const std::size_t n = end - head;
    buffer.resize(n * ng * k);
    parallel_chunks(n, threads, [&](std::size_t, std::size_t lo, std::size_t hi) {
      for (std::size_t i = lo; i < hi; ++i) {
        const auto bl = set.at(head + i);
        for (std::size_t j = 0; j < ng; ++j) {
          BlockPoint *out = buffer.data() + (i * ng + j) * k;
          for (std::size_t t = 0; t < k; ++t)
            out[t] = static_cast<BlockPoint>(gens[j](bl[t]));
          std::sort(out, out + k);
        }
      }
    });
    for (std::size_t i = 0; i < n * ng; ++i) {
      set.insert({buffer.data() + i * k, k});
      if (max_blocks != 0 && set.size() > max_blocks)
        throw std::length_error("block orbit exceeds " +
                                std::to_string(max_blocks) + " blocks");
    }
    head = end;
  }
  return IncidenceStructure::from_flat(v, k, set.release());
}

DesignParams compute_params(const IncidenceStructure &s) {
  DesignParams p;
  p.v = s.v();
  p.b = s.num_blocks();
  if (auto k = s.uniform_size()) {
    p.uniform_k = true;
    p.k = *k;
  }
  std::vector<std::uint64_t> rep(s.v(), 0);
  for (std::size_t i = 0; i < p.b; ++i)
    for (BlockPoint x : s.block(i))
      ++rep[x];
  p.uniform_r = !rep.empty() &&
                std::all_of(rep.begin(), rep.end(),
                            [&](std::uint64_t r) { return r == rep[0]; });
  if (p.uniform_r)
    p.r = rep[0];
  p.is_1_design = p.uniform_k && p.uniform_r;
  if (p.is_1_design && p.v > 1 && p.k >= 1 && (p.r * (p.k - 1)) % (p.v - 1) == 0) {
    p.lambda = p.r * (p.k - 1) / (p.v - 1);
    p.r_coprime_lambda = std::gcd(p.r, *p.lambda) == 1;
  }
  return p;
}

namespace {

template <class Counter>
LambdaResult bruteforce_counts(const IncidenceStructure &s, unsigned threads) {
  const std::uint64_t v = s.v();
  auto row_start = [v](std::uint64_t i) { return i * (2 * v - i - 1) / 2; };
  std::vector<Counter> count(v * (v - 1) / 2, 0);
  const std::size_t b = s.num_blocks();
  // each chunk owns the pairs whose smaller point falls in its range
  parallel_chunks(v, threads, [&](std::size_t, std::size_t lo, std::size_t hi) {
    for (std::size_t n = 0; n < b; ++n) {
      const auto bl = s.block(n);
      for (std::size_t i = 0; i < bl.size(); ++i) {
        const std::uint64_t x = bl[i];
        if (x < lo || x >= hi)
          continue;
        const std::uint64_t base = row_start(x) - x - 1;
        for (std::size_t j = i + 1; j < bl.size(); ++j)
          ++count[base + bl[j]];
      }
    }
  });
  LambdaResult res;
  res.pairs_checked = count.size();
  res.lambda = count.empty() ? 0 : count[0];
  res.constant = true;
  for (std::uint64_t x = 0; x + 1 < v && res.constant; ++x) {
    const std::uint64_t base = row_start(x) - x - 1;
    for (std::uint64_t y = x + 1; y < v; ++y)
      if (count[base + y] != res.lambda) {
        res.constant = false;
        res.witness = {{static_cast<Point>(x), static_cast<Point>(y)}};
        res.witness_count = count[base + y];
        break;
      }
  }
  return res;
}

}  // namespace

LambdaResult verify_lambda_bruteforce(const IncidenceStructure &s,
                                      unsigned threads, std::size_t max_v) {
  if (max_v != 0 && s.v() > max_v)
    throw std::invalid_argument("v = " + std::to_string(s.v()) +
                                " exceeds the brute-force limit");
  if (s.v() < 2)
    throw std::invalid_argument("need at least two points");
  std::vector<std::uint64_t> rep(s.v(), 0);
  for (std::size_t i = 0; i < s.num_blocks(); ++i)
    for (BlockPoint x : s.block(i))
      ++rep[x];
  const std::uint64_t rmax = *std::max_element(rep.begin(), rep.end());
  if (rmax < 0xff)
    return bruteforce_counts<std::uint8_t>(s, threads);
  if (rmax < 0xffff)
    return bruteforce_counts<std::uint16_t>(s, threads);
  return bruteforce_counts<std::uint32_t>(s, threads);
}

LambdaResult verify_lambda_sampled(const IncidenceStructure &s,
                                   std::uint64_t n_pairs, std::uint64_t seed,
                                   unsigned threads) {
  const std::size_t v = s.v();
  if (v < 2)
    throw std::invalid_argument("need at least two points");
  if (n_pairs == 0)
    throw std::invalid_argument("no pairs requested");
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<std::size_t> px(0, v - 1), py(0, v - 2);
  std::vector<std::pair<Point, Point>> pairs(n_pairs);
  for (auto &pr : pairs) {
    const std::size_t x = px(rng);
    std::size_t y = py(rng);
    if (y >= x)
      ++y;
    pr = {static_cast<Point>(std::min(x, y)), static_cast<Point>(std::max(x, y))};
  }
  // partner lists keyed by the smaller point
  std::vector<std::uint64_t> start(v + 1, 0);
  for (const auto &pr : pairs)
    ++start[pr.first + 1];
  std::partial_sum(start.begin(), start.end(), start.begin());
  std::vector<std::pair<Point, std::uint32_t>> partners(n_pairs);
  {
    std::vector<std::uint64_t> fill(start.begin(), start.end() - 1);
    for (std::uint32_t i = 0; i < n_pairs; ++i)
      partners[fill[pairs[i].first]++] = {pairs[i].second, i};
  }

  const std::size_t b = s.num_blocks();
  const std::size_t chunks = chunk_count(b, threads);
  std::vector<std::vector<std::uint32_t>> partial(chunks);
  parallel_chunks(b, threads, [&](std::size_t c, std::size_t lo, std::size_t hi) {
    std::vector<std::uint32_t> count(n_pairs, 0);
    std::vector<char> in_block(v, 0);
    for (std::size_t n = lo; n < hi; ++n) {
      const auto bl = s.block(n);
      for (BlockPoint x : bl)
        in_block[x] = 1;
      for (BlockPoint x : bl)
        for (std::uint64_t t = start[x]; t < start[x + 1]; ++t)
          if (in_block[partners[t].first])
            ++count[partners[t].second];
      for (BlockPoint x : bl)
        in_block[x] = 0;
    }
    partial[c] = std::move(count);
  });
  std::vector<std::uint64_t> total(n_pairs, 0);
  for (const auto &p : partial)
    for (std::size_t i = 0; i < p.size(); ++i)
      total[i] += p[i];

  LambdaResult res;
  res.pairs_checked = n_pairs;
  res.lambda = total[0];
  res.constant = true;
  for (std::size_t i = 0; i < n_pairs; ++i)
    if (total[i] != res.lambda) {
      res.constant = false;
      res.witness = pairs[i];
      res.witness_count = total[i];
      break;
    }
  return res;
}

ClosureResult check_block_closure(std::span<const Permutation> gens,
                                  const IncidenceStructure &s,
                                  const BlockIndex &index, unsigned threads) {
  const std::size_t b = s.num_blocks();
  const std::size_t chunks = chunk_count(b, threads);
  std::vector<ClosureResult> partial(chunks);
  parallel_chunks(b, threads, [&](std::size_t c, std::size_t lo, std::size_t hi) {
    std::vector<BlockPoint> img;
    for (std::size_t n = lo; n < hi; ++n) {
      const auto bl = s.block(n);
      for (std::size_t j = 0; j < gens.size(); ++j) {
        img.resize(bl.size());
        for (std::size_t t = 0; t < bl.size(); ++t)
          img[t] = static_cast<BlockPoint>(gens[j](bl[t]));
        std::sort(img.begin(), img.end());
        if (!index.find(img)) {
          partial[c] = {false, {{n, j}}};
          return;
        }
      }
    }
  });
  for (const auto &p : partial)
    if (!p.closed)
      return p;
  return {};
}

LambdaResult verify_lambda_2transitive(const Bsgs &g,
                                       const IncidenceStructure &s,
                                       const BlockIndex &index,
                                       unsigned threads) {
  if (g.degree() != s.v())
    throw std::invalid_argument("group degree does not match v");
  if (!is_2_transitive(g))
    throw std::invalid_argument("group is not 2-transitive");
  if (!check_block_closure(g.generators(), s, index, threads).closed)
    throw std::invalid_argument("block set is not invariant under the group");
  LambdaResult res;
  res.constant = true;
  res.pairs_checked = 1;
  for (std::size_t n = 0; n < s.num_blocks(); ++n) {
    const auto bl = s.block(n);
    if (bl.size() >= 2 && bl[0] == 0 && bl[1] == 1)
      ++res.lambda;
  }
  return res;
}

bool is_flag_transitive(const Bsgs &g, std::span<const Permutation> stab0,
                        const IncidenceStructure &s, const BlockIndex &index) {
  if (!is_transitive(g) || s.num_blocks() == 0)
    return false;
  // blocks through 0 form a prefix of the sorted block list
  std::size_t r0 = 0;
  while (r0 < s.num_blocks() && s.block(r0)[0] == 0)
    ++r0;
  if (r0 == 0)
    return false;
  std::vector<char> seen(r0, 0);
  std::vector<std::size_t> queue{0};
  seen[0] = 1;
  std::vector<BlockPoint> img;
  for (std::size_t h = 0; h < queue.size(); ++h) {
    const auto bl = s.block(queue[h]);
    for (const auto &x : stab0) {
      img.resize(bl.size());
      for (std::size_t t = 0; t < bl.size(); ++t)
        img[t] = static_cast<BlockPoint>(x(bl[t]));
      std::sort(img.begin(), img.end());
      const auto n = index.find(img);
      if (!n || *n >= r0)
        return false;
      if (!seen[*n]) {
        seen[*n] = 1;
        queue.push_back(*n);
      }
    }
  }
  return queue.size() == r0;
}

std::vector<NamedCheck> arithmetic_checks(const DesignParams &p) {
  std::vector<NamedCheck> out;
  const auto v = p.v, b = p.b, r = p.r, k = p.k;
  const bool have_lambda = p.lambda.has_value();
  const std::uint64_t l = p.lambda.value_or(0);
  auto add = [&](std::string name, bool ok, std::string detail) {
    out.push_back({std::move(name), ok, std::move(detail)});
  };
  auto u = [](std::uint64_t x) { return std::to_string(x); };
  add("r(k-1) = lambda(v-1)", have_lambda && r * (k - 1) == l * (v - 1),
      u(r * (k - 1)) + " vs " + (have_lambda ? u(l * (v - 1)) : "lambda unknown"));
  add("vr = bk", v * r == b * k, u(v * r) + " vs " + u(b * k));
  const bool coprime = have_lambda && std::gcd(r, l) == 1;
  add("gcd(r, lambda) = 1", coprime,
      have_lambda ? "gcd = " + u(std::gcd(r, l)) : "lambda unknown");
  add("r divides v-1", coprime && v > 1 && (v - 1) % r == 0,
      u(v - 1) + " mod " + u(r) + " = " + u(r ? (v - 1) % r : 0));
  add("gcd(r, v) = 1", coprime && std::gcd(r, v) == 1, "gcd = " + u(std::gcd(r, v)));
  {
    const BigInt lhs = BigInt(static_cast<unsigned long>(l)) * static_cast<unsigned long>(v);
    const BigInt rhs = BigInt(static_cast<unsigned long>(r)) * static_cast<unsigned long>(r);
    add("lambda v < r^2", have_lambda && lhs < rhs, lhs.get_str() + " vs " + rhs.get_str());
  }
  add("b >= v", b >= v, u(b) + " vs " + u(v));
  return out;
}

nlohmann::json params_to_json(const DesignParams &p) {
  nlohmann::json j;
  j["v"] = p.v;
  j["b"] = p.b;
  j["r"] = p.r;
  j["k"] = p.k;
  j["lambda"] = p.lambda ? nlohmann::json(*p.lambda) : nlohmann::json(nullptr);
  j["uniform_k"] = p.uniform_k;
  j["uniform_r"] = p.uniform_r;
  j["is_1_design"] = p.is_1_design;
  j["is_2_design"] = p.is_2_design;
  j["flag_transitive"] = p.flag_transitive;
  j["r_coprime_lambda"] = p.r_coprime_lambda;
  return j;
}

nlohmann::json design_to_json(const IncidenceStructure &s) {
  nlohmann::json j;
  j["v"] = s.v();
  j["b"] = s.num_blocks();
  auto &blocks = j["blocks"] = nlohmann::json::array();
  for (std::size_t i = 0; i < s.num_blocks(); ++i) {
    const auto bl = s.block(i);
    blocks.push_back(std::vector<unsigned>(bl.begin(), bl.end()));
  }
  return j;
}

IncidenceStructure design_from_json(const nlohmann::json &j) {
  const std::size_t v = j.at("v").get<std::size_t>();
  auto blocks = j.at("blocks").get<std::vector<std::vector<Point>>>();
  return IncidenceStructure(v, std::move(blocks));
}

}  // namespace exdes
