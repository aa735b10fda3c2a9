#pragma once

#include <optional>
#include <string>
#include <vector>

#include "flatbldg/sectors.hpp"

namespace flatbldg {

// The flat-group calculus over a regular locally finite building modeled by
// thickness parameters q_s: stabilizer indices, geometric-growth (tidiness)
// checks, eigenfactor labels and the root system of the flat group of
// translations. No automorphism group is ever materialized; every index is a
// q-product along galleries.

class Thickness {
public:
  Thickness(SystemPtr sys, IntVec q); // invalid_thickness names the violating edge
  static Thickness uniform(const SystemPtr& sys, const Int& q);

  const SystemPtr& system() const { return sys_; }
  const IntVec& values() const { return q_; }
  const Int& q(std::size_t s) const { return q_[s]; }
  bool sigma_compatible(const DiagramAutomorphism& sigma) const;

private:
  SystemPtr sys_;
  IntVec q_;
};

// Product of q over any reduced word of w; word-independent by the odd-edge
// rule on q.
Int q_length(const Elem& w, const Thickness& q);

// Thickness of a wall: q of the generator type of its panels.
Int wall_thickness(const RootVec& wall, const Thickness& q);

// An automorphism of Sigma(W,S): left multiplication by an element, possibly
// twisted by a diagram automorphism; x -> w * sigma(x).
struct BuildingAuto {
  Elem w;
  std::optional<DiagramAutomorphism> twist;

  Elem apply(const Elem& x) const;
  Elem apply_power(const Elem& x, unsigned n) const;
  bool is_translation() const;
};

// Model value of [G_c^0 : G_c^0 cap G_{g^n(c)}^0] in any closed
// Weyl-transitive group: q_length(delta(c, g^n(c))).
Int stabilizer_index(const Elem& c, const BuildingAuto& g, unsigned n, const Thickness& q);

struct TidyReport {
  std::string element;        // canonical word, with twist permutation if any
  bool is_translation = false;
  unsigned depth = 0;         // N
  std::vector<Int> indices;   // n = 1..N
  std::vector<bool> geometric; // per n: indices[n-1] == indices[0]^n
  bool all_geometric = false;
  // "tidy": claimed for translations (the stabilizer is tidy and the growth
  // must be geometric). "not_claimed": sequence reported only.
  enum class Verdict { tidy, not_claimed } verdict = Verdict::not_claimed;

  bool operator==(const TidyReport&) const = default;
};

TidyReport tidy_check(const Elem& c, const BuildingAuto& g, unsigned N, const Thickness& q);

struct EigenfactorLabel {
  enum class Kind { fix_apartment, fix_root } kind = Kind::fix_apartment;
  std::optional<RootVec> root; // gamma', present iff kind == fix_root

  int cmp(const EigenfactorLabel& o) const;
  bool operator==(const EigenfactorLabel& o) const { return cmp(o) == 0; }
  bool operator<(const EigenfactorLabel& o) const { return cmp(o) < 0; }
  std::string str() const;
};

// Label of U_{gamma_1^{e_1},...,gamma_k^{e_k}} for a minimal gallery
// (c_0 = apex, ..., c_k = opposite chamber) and signs e in {+-1}^k: either
// the fixator of the apartment or of a pushed root gamma'.
EigenfactorLabel eigenfactor_label(const SectorRef& sector, const Gallery& gallery,
                                   const std::vector<int>& signs);

struct EigenfactorCensus {
  std::vector<std::vector<int>> sign_vectors;  // all 2^k epsilon, fixed order
  std::vector<EigenfactorLabel> labels;        // label per sign vector
  std::vector<EigenfactorLabel> distinct;      // sweep labels plus the apartment fixator
};

// Sweep over all sign vectors along the canonical minimal gallery from the
// apex to its opposite chamber. The apartment fixator U_H0 is an eigenfactor
// unconditionally and is always included in `distinct`.
EigenfactorCensus eigenfactor_census(const SectorRef& sector);

// The sign vector that realizes Fix(gamma'): e_i = +1 iff c_i lies in gamma.
std::vector<int> realizing_signs(const SectorRef& sector, const Gallery& gallery,
                                 const RootVec& gamma);

// One root of the flat group per gamma in Phi_R. rho is the surjective
// integer functional on lattice translations, normalized by m; s is the
// scale base: the q-product over one fundamental period of walls in the
// parallel class of gamma'.
struct FlatRoot {
  RootVec gamma;
  RootVec gamma_prime;
  Int m;
  Int s;
  IntVec rho_basis; // rho on the translation basis

  // rho(t) = -class_offset(gamma', t) / m: negative when t enlarges gamma'.
  Int rho(const TranslationElem& t) const;
};

std::vector<FlatRoot> flat_root_system(const SectorRef& sector, const Thickness& q);

struct ScaleFactor {
  RootVec pair_root;  // canonical representative of the pair {gamma, -gamma}
  Int base;           // s_gamma
  Int exponent;       // |rho_gamma(t)|
};

struct ScaleReport {
  std::string translation; // canonical word
  Int scale;               // q_length(delta(c, t(c)))
  std::vector<ScaleFactor> factors;
};

// Scale of a lattice translation with its factorization over root pairs;
// verifies scale = prod base^exponent and throws factorization_mismatch with
// a witness otherwise.
ScaleReport scale_with_factorization(const TranslationElem& t, const SectorRef& sector,
                                     const Thickness& q);

// JSON serialization of report objects (schema documented in the CLI).
std::string to_json_string(const TidyReport& r);
std::string to_json_string(const ScaleReport& r);
std::string to_json_string(const std::vector<FlatRoot>& roots);
TidyReport tidy_report_from_json(const std::string& text, const SystemPtr& sys);
ScaleReport scale_report_from_json(const std::string& text, const SystemPtr& sys);
std::vector<FlatRoot> flat_roots_from_json(const std::string& text, const SystemPtr& sys);

bool operator==(const ScaleFactor& a, const ScaleFactor& b);
bool operator==(const ScaleReport& a, const ScaleReport& b);
bool operator==(const FlatRoot& a, const FlatRoot& b);

} // namespace flatbldg
