#include "flatbldg/chamber.hpp"

#include <algorithm>
#include <map>

#include "system_cache.hpp"

namespace flatbldg {

namespace detail {

// Breadth-first growth of the Cayley ball from the identity. Within a layer,
// parents are visited in stored (lexicographic) order and letters ascending,
// so the word recorded for each element is its lexicographically smallest
// reduced word and the node order is canonical: by length, then by word.
void grow_ball(const SystemPtr& sys, std::size_t radius) {
  auto& cache = sys->cache();
  std::scoped_lock lock(cache.mu);
  if (cache.complete_radius >= static_cast<long>(radius)) return;

  std::size_t r = sys->rank();
  if (cache.nodes.empty()) {
    BallNode id{IntMat::identity(r), IntMat::identity(r), Word{}, 0};
    cache.index.emplace(id.mat, 0);
    cache.nodes.push_back(std::move(id));
    cache.complete_radius = 0;
  }

  // frontier = nodes of the last completed layer
  while (cache.complete_radius < static_cast<long>(radius)) {
    unsigned depth = static_cast<unsigned>(cache.complete_radius);
    std::size_t begin = 0, end = cache.nodes.size();
    while (begin < end && cache.nodes[begin].len < depth) ++begin;
    bool grew = false;
    for (std::size_t idx = begin; idx < end; ++idx) {
      for (std::size_t s = 0; s < r; ++s) {
        Elem parent = Elem::from_parts(sys, cache.nodes[idx].mat, cache.nodes[idx].inv);
        if (has_right_descent(parent, s)) continue; // would shorten
        Elem child = parent.mul_gen_right(s);
        if (cache.index.count(child.matrix())) continue;
        Word w = cache.nodes[idx].word;
        w.letters.push_back(s);
        cache.index.emplace(child.matrix(), cache.nodes.size());
        cache.nodes.push_back(BallNode{child.matrix(), child.inverse_matrix(), std::move(w),
                                       depth + 1});
        grew = true;
      }
    }
    ++cache.complete_radius;
    if (!grew) {
      // finite group exhausted
      cache.complete_radius = static_cast<long>(radius);
      break;
    }
  }
}

} // namespace detail

Elem weyl_distance(const Elem& x, const Elem& y) {
  check_same_system(x, y);
  return x.inverse() * y;
}

// ---------------------------------------------------------------------------
// Residues and projections

ResidueRef::ResidueRef(std::vector<std::size_t> J, Elem base_chamber)
    : types(std::move(J)), base(std::move(base_chamber)) {
  std::sort(types.begin(), types.end());
  types.erase(std::unique(types.begin(), types.end()), types.end());
  for (auto s : types)
    if (s >= base.system()->rank()) fail(errc::unknown_generator, "residue type out of range");
}

bool in_parabolic(const Elem& w, const std::vector<std::size_t>& J) {
  Word wd = reduced_word(w);
  for (auto s : wd.letters)
    if (std::find(J.begin(), J.end(), s) == J.end()) return false;
  return true;
}

bool ResidueRef::same_residue(const ResidueRef& o) const {
  if (base.system() != o.base.system() || types != o.types) return false;
  return in_parabolic(weyl_distance(base, o.base), types);
}

bool ResidueRef::contains(const Elem& x) const {
  check_same_system(base, x);
  return in_parabolic(weyl_distance(base, x), types);
}

std::vector<Elem> ResidueRef::chambers(std::size_t limit) const {
  const SystemPtr& sys = base.system();
  // BFS inside the parabolic <J>, canonical order relative to the base.
  std::vector<Elem> rel{Elem::identity(sys)};
  ElemSet seen{rel[0]};
  std::size_t head = 0;
  while (head < rel.size()) {
    Elem cur = rel[head++];
    for (auto s : types) {
      Elem nxt = cur.mul_gen_right(s);
      if (seen.insert(nxt).second) {
        rel.push_back(nxt);
        if (rel.size() > limit)
          fail(errc::gem_too_large, "residue exceeds limit of " + std::to_string(limit) +
                                        " chambers; raise the limit explicitly");
      }
    }
  }
  // canonical order: sort by (length, lex word) of the relative element
  std::vector<std::pair<Word, Elem>> keyed;
  keyed.reserve(rel.size());
  for (auto& e : rel) keyed.emplace_back(reduced_word(e), e);
  std::sort(keyed.begin(), keyed.end(), [](const auto& a, const auto& b) {
    if (a.first.size() != b.first.size()) return a.first.size() < b.first.size();
    return a.first.letters < b.first.letters;
  });
  std::vector<Elem> out;
  out.reserve(keyed.size());
  for (auto& [w, e] : keyed) out.push_back(base * e);
  return out;
}

Elem proj(const ResidueRef& R, const Elem& x) {
  check_same_system(R.base, x);
  // gate: z = x * wJ where wJ is the minimal coset representative of
  // delta(x, base) <J>
  Elem w = weyl_distance(x, R.base);
  for (;;) {
    bool moved = false;
    for (auto s : R.types)
      if (has_right_descent(w, s)) {
        w = w.mul_gen_right(s);
        moved = true;
      }
    if (!moved) break;
  }
  return x * w;
}

Elem longest_element(const SystemPtr& sys, const std::vector<std::size_t>& J) {
  auto& cache = sys->cache();
  std::vector<std::size_t> key(J);
  std::sort(key.begin(), key.end());
  {
    std::scoped_lock lock(cache.mu);
    auto it = cache.longest.find(key);
    if (it != cache.longest.end())
      return Elem::from_parts(sys, it->second.first, it->second.second);
  }
  // greedy ascent; terminates iff <J> is finite (callers guarantee)
  Elem w = Elem::identity(sys);
  std::size_t guard = 0;
  for (;;) {
    bool moved = false;
    for (auto s : key)
      if (!has_right_descent(w, s)) {
        w = w.mul_gen_right(s);
        moved = true;
        break;
      }
    if (!moved) break;
    if (++guard > 1u << 22) fail(errc::internal, "longest element ascent did not terminate");
  }
  std::scoped_lock lock(cache.mu);
  cache.longest.emplace(key, std::make_pair(w.matrix(), w.inverse_matrix()));
  return w;
}

// ---------------------------------------------------------------------------
// Galleries and walls

std::vector<Elem> Gallery::chambers() const {
  std::vector<Elem> out{start};
  Elem cur = start;
  for (auto s : word.letters) {
    cur = cur.mul_gen_right(s);
    out.push_back(cur);
  }
  return out;
}

Elem Gallery::end() const {
  Elem cur = start;
  for (auto s : word.letters) cur = cur.mul_gen_right(s);
  return cur;
}

namespace {

// Wall crossed at step i of the gallery: between u and u*s the separating
// root on u's side is u(alpha_s); the wall key is the sign-canonical vector.
IntVec wall_key(const IntVec& v) { return vec_nonneg(v) ? v : vec_neg(v); }

} // namespace

MinimalityCertificate is_minimal(const Gallery& g, MinimalityMode mode) {
  MinimalityCertificate cert;
  if (mode == MinimalityMode::by_length) {
    cert.minimal = g.word.size() == length(weyl_distance(g.start, g.end()));
    return cert;
  }
  std::map<IntVec, std::size_t> crossed; // wall key -> first crossing step (1-based)
  Elem cur = g.start;
  std::size_t step = 0;
  for (auto s : g.word.letters) {
    ++step;
    IntVec root = cur.act(RootVec::simple(cur.system(), s).coords());
    IntVec key = wall_key(root);
    auto [it, inserted] = crossed.emplace(key, step);
    if (!inserted) {
      cert.minimal = false;
      cert.repeated_wall = RootVec(cur.system(), key);
      cert.crossings = std::make_pair(it->second, step);
      return cert;
    }
    cur = cur.mul_gen_right(s);
  }
  cert.minimal = true;
  return cert;
}

std::vector<RootVec> separating_roots(const Elem& x, const Elem& y) {
  check_same_system(x, y);
  const SystemPtr& sys = x.system();
  Word w = reduced_word(weyl_distance(x, y));
  std::vector<RootVec> out;
  Elem prefix = x;
  for (auto s : w.letters) {
    out.emplace_back(sys, prefix.act(RootVec::simple(sys, s).coords()));
    prefix = prefix.mul_gen_right(s);
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  if (out.size() != w.size()) fail(errc::internal, "reduced word crossed a wall twice");
  return out;
}

// ---------------------------------------------------------------------------
// Balls and intervals

std::vector<Elem> ball(const SystemPtr& sys, std::size_t radius) {
  detail::grow_ball(sys, radius);
  auto& cache = sys->cache();
  std::scoped_lock lock(cache.mu);
  std::vector<Elem> out;
  for (auto& node : cache.nodes) {
    if (node.len > radius) break;
    out.push_back(Elem::from_parts(sys, node.mat, node.inv));
  }
  return out;
}

std::vector<Elem> ball(const Elem& center, std::size_t radius) {
  std::vector<Elem> rel = ball(center.system(), radius);
  std::vector<Elem> out;
  out.reserve(rel.size());
  for (auto& e : rel) out.push_back(center * e);
  return out;
}

namespace {

// Ball indices of chambers on minimal galleries from 1 to w, cached. A
// chamber z qualifies iff l(z) + d(z, w) = l(w); the distance from w is a
// breadth-first sweep over the cached ball, valid because a witness gallery
// through any qualifying z stays inside the ball of radius l(w).
std::vector<std::size_t> interval_indices(const SystemPtr& sys, const Elem& w) {
  auto& cache = sys->cache();
  {
    std::scoped_lock lock(cache.mu);
    auto it = cache.intervals.find(w.matrix());
    if (it != cache.intervals.end()) return it->second;
  }
  std::size_t len = length(w);
  detail::grow_ball(sys, len);
  std::vector<std::size_t> result;
  {
    std::scoped_lock lock(cache.mu);
    std::size_t count = 0;
    while (count < cache.nodes.size() && cache.nodes[count].len <= len) ++count;

    auto it = cache.index.find(w.matrix());
    if (it == cache.index.end() || it->second >= count)
      fail(errc::internal, "interval endpoint missing from the ball");
    std::vector<long> dist(count, -1);
    std::vector<std::size_t> queue{it->second};
    dist[it->second] = 0;
    std::size_t head = 0;
    while (head < queue.size()) {
      std::size_t cur = queue[head++];
      if (dist[cur] >= static_cast<long>(len)) continue;
      Elem z = Elem::from_parts(sys, cache.nodes[cur].mat, cache.nodes[cur].inv);
      for (std::size_t s = 0; s < sys->rank(); ++s) {
        auto nb = cache.index.find(z.mul_gen_right(s).matrix());
        if (nb == cache.index.end() || nb->second >= count) continue;
        if (dist[nb->second] >= 0) continue;
        dist[nb->second] = dist[cur] + 1;
        queue.push_back(nb->second);
      }
    }
    for (std::size_t i = 0; i < count; ++i)
      if (dist[i] >= 0 && static_cast<long>(cache.nodes[i].len) + dist[i] == static_cast<long>(len))
        result.push_back(i);
    cache.intervals.emplace(w.matrix(), result);
  }
  return result;
}

} // namespace

std::vector<Elem> interval_chambers(const Elem& x, const Elem& y) {
  check_same_system(x, y);
  const SystemPtr& sys = x.system();
  auto idx = interval_indices(sys, weyl_distance(x, y));
  auto& cache = sys->cache();
  std::scoped_lock lock(cache.mu);
  std::vector<Elem> out;
  out.reserve(idx.size());
  for (auto i : idx)
    out.push_back(x * Elem::from_parts(sys, cache.nodes[i].mat, cache.nodes[i].inv));
  return out;
}

// ---------------------------------------------------------------------------
// Convex hulls

namespace {

std::vector<Elem> sorted_canonical(ElemSet&& set) {
  // ordered by (length, lex smallest reduced word); ElemSet is matrix-ordered
  std::vector<std::pair<Word, Elem>> keyed;
  keyed.reserve(set.size());
  for (auto& e : set) keyed.emplace_back(reduced_word(e), e);
  std::sort(keyed.begin(), keyed.end(), [](const auto& a, const auto& b) {
    if (a.first.size() != b.first.size()) return a.first.size() < b.first.size();
    return a.first.letters < b.first.letters;
  });
  std::vector<Elem> out;
  out.reserve(keyed.size());
  for (auto& [w, e] : keyed) out.push_back(e);
  return out;
}

ElemSet gallery_closure_set(const std::vector<Elem>& X) {
  ElemSet closed(X.begin(), X.end());
  std::vector<Elem> fresh(closed.begin(), closed.end());
  while (!fresh.empty()) {
    std::vector<Elem> added;
    std::vector<Elem> all(closed.begin(), closed.end());
    for (auto& a : fresh)
      for (auto& b : all) {
        if (a == b) continue;
        for (auto& z : interval_chambers(a, b))
          if (closed.insert(z).second) added.push_back(z);
      }
    fresh = std::move(added);
  }
  return closed;
}

} // namespace

bool hull_contains(const std::vector<Elem>& X, const Elem& z) {
  if (X.empty()) fail(errc::empty_input, "convex hull of the empty set");
  check_same_system(X[0], z);
  // z lies outside conv(X) iff some root contains all of X but not z; such a
  // root separates z from every member, so scanning the separating roots of
  // one member is enough.
  for (const auto& alpha : separating_roots(X[0], z)) {
    bool all = true;
    for (const auto& y : X)
      if (!alpha.contains(y)) {
        all = false;
        break;
      }
    if (all) return false;
  }
  return true;
}

std::vector<Elem> convex_hull(const std::vector<Elem>& X, HullMode mode) {
  if (X.empty()) fail(errc::empty_input, "convex hull of the empty set");
  for (std::size_t i = 1; i < X.size(); ++i) check_same_system(X[0], X[i]);

  ElemSet closure = gallery_closure_set(X);
  if (mode == HullMode::gallery_closure) return sorted_canonical(std::move(closure));

  // Root-intersection over the finite closure candidates.
  ElemSet kept;
  for (auto& w : closure)
    if (hull_contains(X, w)) kept.insert(w);
  return sorted_canonical(std::move(kept));
}

// ---------------------------------------------------------------------------
// Root enumeration over balls

std::vector<RootVec> roots_meeting_ball(const SystemPtr& sys, std::size_t radius) {
  if (radius == 0) fail(errc::malformed_spec, "radius must be >= 1");
  std::vector<Elem> B = ball(sys, radius);
  ElemSet members(B.begin(), B.end());
  std::set<IntVec> vecs;
  for (auto& u : B)
    for (std::size_t s = 0; s < sys->rank(); ++s) {
      if (!members.count(u.mul_gen_right(s))) continue; // panel not inside the ball
      vecs.insert(u.act(RootVec::simple(sys, s).coords()));
    }
  std::vector<RootVec> out;
  out.reserve(vecs.size());
  for (auto& v : vecs) out.emplace_back(sys, v);
  return out;
}

} // namespace flatbldg
