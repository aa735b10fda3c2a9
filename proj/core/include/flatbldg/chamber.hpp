#pragma once

#include <optional>
#include <set>
#include <utility>
#include <vector>

#include "flatbldg/coxeter.hpp"

namespace flatbldg {

// The Coxeter building Sigma(W,S): chambers are group elements, the Weyl
// distance is delta(x,y) = x^{-1} y.

Elem weyl_distance(const Elem& x, const Elem& y);

// Residue of type J at a base chamber. Two refs with equal J denote the same
// residue iff delta(base, base') lies in <J>.
struct ResidueRef {
  std::vector<std::size_t> types; // sorted
  Elem base;

  ResidueRef(std::vector<std::size_t> J, Elem base_chamber);
  const SystemPtr& system() const { return base.system(); }
  bool same_residue(const ResidueRef& o) const;
  bool contains(const Elem& x) const;
  // All chambers, canonical order; throws gem_too_large past the limit.
  std::vector<Elem> chambers(std::size_t limit) const;
};

// Gate of the residue nearest to x: the unique z in R with
// l(delta(x,y)) = l(delta(x,z)) + l(delta(z,y)) for all y in R.
Elem proj(const ResidueRef& R, const Elem& x);

// Longest element of the finite standard parabolic <J>.
Elem longest_element(const SystemPtr& sys, const std::vector<std::size_t>& J);

// Whether w lies in the standard parabolic <J>.
bool in_parabolic(const Elem& w, const std::vector<std::size_t>& J);

struct Gallery {
  Elem start;
  Word word;

  std::vector<Elem> chambers() const; // c_0 .. c_k
  Elem end() const;
};

enum class MinimalityMode { by_length, by_walls };

struct MinimalityCertificate {
  bool minimal = false;
  // Set when by_walls finds a wall crossed twice: canonical (positive side
  // seen first) root and the two 1-based crossing steps.
  std::optional<RootVec> repeated_wall;
  std::optional<std::pair<std::size_t, std::size_t>> crossings;
};

MinimalityCertificate is_minimal(const Gallery& g, MinimalityMode mode);

// Roots alpha with x inside and y outside; |result| = l(delta(x,y)).
std::vector<RootVec> separating_roots(const Elem& x, const Elem& y);

bool root_contains(const RootVec& beta, const Elem& w);

enum class HullMode { root_intersection, gallery_closure };

// Convex hull of a finite nonempty chamber set. gallery_closure iterates
// minimal-gallery insertion to a fixed point; root_intersection filters the
// closure candidates through half-space membership. The two must agree.
std::vector<Elem> convex_hull(const std::vector<Elem>& X, HullMode mode);

// Point test: z lies in conv(X), through the root-intersection
// characterization. Works for hulls too large to materialize.
bool hull_contains(const std::vector<Elem>& X, const Elem& z);

// Chambers on minimal galleries from x to y (the length-additive set).
std::vector<Elem> interval_chambers(const Elem& x, const Elem& y);

// Ball of the Cayley graph, canonical order (length, then lex word).
std::vector<Elem> ball(const SystemPtr& sys, std::size_t radius);
std::vector<Elem> ball(const Elem& center, std::size_t radius);

// All roots whose wall contains a panel {u, us} with l(u), l(us) <= N.
std::vector<RootVec> roots_meeting_ball(const SystemPtr& sys, std::size_t radius);

using ElemSet = std::set<Elem, ElemLess>;

} // namespace flatbldg
