#pragma once

#include <optional>
#include <vector>

#include "flatbldg/chamber.hpp"

namespace flatbldg {

// Affine-only geometry: gems, sectors, parallel classes and the translation
// lattice of W.

// A gem: residue of type S \ {o} at a special vertex o.
class Gem {
public:
  Gem(SystemPtr sys, std::size_t special_vertex, Elem base);

  const SystemPtr& system() const { return base_.system(); }
  std::size_t special_vertex() const { return o_; }
  const std::vector<std::size_t>& types() const { return types_; }
  const Elem& base() const { return base_; }
  const std::vector<Elem>& chambers() const { return chambers_; }
  ResidueRef residue() const { return ResidueRef(types_, base_); }

  bool contains(const Elem& x) const;
  // The unique chamber opposite to c in the gem: c * r_J.
  Elem opposite(const Elem& c) const;

private:
  std::size_t o_;
  std::vector<std::size_t> types_;
  Elem base_;
  Elem longest_;
  std::vector<Elem> chambers_;
};

Gem make_gem(const SystemPtr& sys, std::size_t special_vertex, const Elem& base);
// One gem per special vertex, based at the given chamber.
std::vector<Gem> gems(const SystemPtr& sys, const Elem& base);

// A sector sigma(R,c): gem plus apex, with the boundary root set [R,c].
class SectorRef {
public:
  SectorRef(Gem gem, Elem apex);

  const Gem& gem() const { return gem_; }
  const Elem& apex() const { return apex_; }
  const std::vector<RootVec>& boundary_roots() const { return boundary_; } // [R,c]

private:
  Gem gem_;
  Elem apex_;
  std::vector<RootVec> boundary_;
};

enum class SectorMode { root_intersection, projection };

bool sector_membership(const SectorRef& sector, const Elem& d, SectorMode mode);

// Nesting distance of two parallel roots: beta2 = beta1 + k*delta as vectors,
// positive when beta2 is the strictly larger half-space. Throws not_parallel.
Int parallel_dist(const RootVec& beta1, const RootVec& beta2);

// A translation of Sigma(W,S) inside W: w(alpha_s) - alpha_s is an integer
// multiple of delta for every s. wall_offsets holds those multiples;
// lattice_coords are coordinates in the fixed basis of the translation
// lattice (products of reflections in adjacent parallel walls, one per
// finite-type generator).
struct TranslationElem {
  Elem elem;
  IntVec wall_offsets;  // size rank
  IntVec lattice_coords; // size rank - 1
};

std::optional<TranslationElem> translation_test(const Elem& w);
std::vector<TranslationElem> translation_basis(const SystemPtr& sys);
TranslationElem translation_from_coords(const SystemPtr& sys, const IntVec& coords);
// All lattice elements with basis coordinates in [-bound, bound]^n.
std::vector<TranslationElem> enumerate_translations(const SystemPtr& sys, long bound);

// Coxeter number of the finite system at a gem: |Phi_R| / (rank - 1).
long coxeter_number(const SystemPtr& sys);

// Offset of t on the parallel class of beta: t(beta) = beta + k*delta.
Int class_offset(const RootVec& beta, const TranslationElem& t);

// t_{R,c,alpha}: fixes every boundary root except alpha, shrinks alpha, and
// does so minimally. Found by bounded search over the lattice; the default
// bound is 2h with h the Coxeter number. Throws search_bound_exceeded.
TranslationElem fundamental_translation(const SectorRef& sector, const RootVec& alpha,
                                        long search_bound = -1);

// t_{R,c}: product of the fundamental translations over [R,c].
TranslationElem sector_translation(const SectorRef& sector, long search_bound = -1);

// Phi_R: all roots cutting the gem, canonical order.
std::vector<RootVec> roots_cutting_gem(const Gem& R);

// gamma' = conv(gamma u {c}): the smallest parallel root containing gamma's
// half-space and the chamber c.
RootVec pushed_root(const RootVec& gamma, const Elem& c);

} // namespace flatbldg
