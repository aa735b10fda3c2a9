#pragma once

#include <cstddef>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "flatbldg/errors.hpp"
#include "flatbldg/intmat.hpp"

namespace flatbldg {

// Bond value used for m_st = infinity.
inline constexpr int infinite_bond = 0;

enum class SystemKind { spherical, affine, other };

const char* kind_name(SystemKind k);

struct AffineData {
  IntVec null_vector;                        // primitive positive delta with C*delta = 0
  std::vector<std::size_t> special_vertices; // sorted generator indices
};

class CoxSystem;
using SystemPtr = std::shared_ptr<const CoxSystem>;

struct Word {
  std::vector<std::size_t> letters;

  std::size_t size() const { return letters.size(); }
  bool operator==(const Word& o) const { return letters == o.letters; }
  bool operator<(const Word& o) const { return letters < o.letters; }
};

namespace detail {
struct SystemCache; // per-system memoization, internal
}

// A crystallographic Coxeter system of finite rank: generator labels, Coxeter
// matrix (m_ss = 1, bonds in {2,3,4,6,inf}), an exact integer Cartan matrix,
// and the affine metadata when the diagram is connected affine.
class CoxSystem {
public:
  std::vector<std::string> generators;
  std::vector<std::vector<int>> coxeter_matrix; // infinite_bond for m = infinity
  std::vector<std::vector<int>> cartan;
  SystemKind kind = SystemKind::other;
  std::optional<AffineData> affine;
  std::string type_name; // classified type, e.g. "A~2", "B3", "A2 x A1", "other"
  std::size_t gem_size_limit = 1152;

  std::size_t rank() const { return generators.size(); }
  int bond(std::size_t s, std::size_t t) const { return coxeter_matrix[s][t]; }
  const IntMat& gen_matrix(std::size_t s) const { return gen_mats_[s]; }
  std::size_t generator_index(std::string_view label) const;
  bool is_affine() const { return kind == SystemKind::affine; }
  const IntVec& delta() const; // throws not_affine when kind != affine

  // Generators joined by a chain of odd bonds are conjugate in W; thickness
  // assignments must be constant on these classes.
  std::size_t conjugacy_class(std::size_t s) const { return conj_class_[s]; }

  detail::SystemCache& cache() const { return *cache_; }

  ~CoxSystem();

private:
  CoxSystem() = default;
  std::vector<IntMat> gen_mats_;
  std::vector<std::size_t> conj_class_;
  std::unique_ptr<detail::SystemCache> cache_;

  friend SystemPtr finish_system(std::vector<std::string> labels,
                                 std::vector<std::vector<int>> m,
                                 std::vector<std::vector<int>> cartan, SystemKind kind,
                                 std::optional<AffineData> affine, std::string type_name,
                                 std::size_t gem_limit);
};

struct BuildOptions {
  std::size_t gem_size_limit = 1152; // guards gem enumeration; raise explicitly for big types
};

// Build from a type string ("A~2", "C~2", "B3", ...) or a JSON object of the
// form {"generators":[...], "m":[[...]]} (the string form also accepts a
// trailing tilde, "A2~"). Throws malformed_spec / non_crystallographic /
// asymmetric_matrix.
SystemPtr build_system(const std::string& spec, const BuildOptions& opts = {});

SystemPtr build_system_from_matrix(std::vector<std::string> generators,
                                   std::vector<std::vector<int>> coxeter_matrix,
                                   const BuildOptions& opts = {});

// A group element in the reflection representation on the root lattice.
// Matrices are canonical: equality of elements is equality of matrices.
class Elem {
public:
  Elem() = default;

  static Elem identity(const SystemPtr& sys);
  static Elem generator(const SystemPtr& sys, std::size_t s);
  static Elem from_word(const SystemPtr& sys, const Word& w);

  const SystemPtr& system() const { return sys_; }
  const IntMat& matrix() const { return mat_; }
  const IntMat& inverse_matrix() const { return inv_; }

  Elem operator*(const Elem& o) const;
  Elem inverse() const;
  Elem mul_gen_left(std::size_t s) const;  // s * w
  Elem mul_gen_right(std::size_t s) const; // w * s
  Elem pow(long n) const;

  bool operator==(const Elem& o) const { return mat_ == o.mat_; }
  bool operator!=(const Elem& o) const { return !(*this == o); }
  int cmp(const Elem& o) const { return mat_.cmp(o.mat_); }
  bool is_identity() const;

  IntVec act(const IntVec& v) const { return mat_ * v; }
  IntVec act_inverse(const IntVec& v) const { return inv_ * v; }

  static Elem from_parts(SystemPtr sys, IntMat mat, IntMat inv); // internal, trusted

private:
  SystemPtr sys_;
  IntMat mat_, inv_;
};

struct ElemLess {
  bool operator()(const Elem& a, const Elem& b) const { return a.cmp(b) < 0; }
};

void check_same_system(const Elem& a, const Elem& b);

// Length, descents and reduced words, all by strict descent through the
// reflection representation: s is a left descent of w iff w^{-1}(alpha_s) < 0.
std::size_t length(const Elem& w);
std::vector<std::size_t> left_descents(const Elem& w);
std::vector<std::size_t> right_descents(const Elem& w);
inline std::vector<std::size_t> descents(const Elem& w) { return left_descents(w); }
bool has_left_descent(const Elem& w, std::size_t s);
bool has_right_descent(const Elem& w, std::size_t s);

// Lexicographically smallest reduced word (smallest descent first).
Word reduced_word(const Elem& w);

Word parse_word(const SystemPtr& sys, std::string_view text); // "s0 s1", "1"/"e" = identity
std::string word_str(const SystemPtr& sys, const Word& w);
inline std::string canonical_word(const Elem& w) { return word_str(w.system(), reduced_word(w)); }

// A half-space root of Sigma(W,S), stored as a sign-pure integer vector in
// the simple-root basis. Membership: w lies in the half-space iff
// w^{-1}(beta) is positive. Construction verifies that the vector lies in the
// W-orbit of a simple root.
class RootVec {
public:
  RootVec(SystemPtr sys, IntVec coords);

  static RootVec simple(const SystemPtr& sys, std::size_t s);

  const SystemPtr& system() const { return sys_; }
  const IntVec& coords() const { return v_; }
  bool positive() const { return vec_positive_root(v_); } // identity chamber inside
  RootVec negated() const;

  bool contains(const Elem& w) const;

  // Generator type of the panels in the wall of this root; well defined up
  // to conjugacy, so thickness lookups through it are unambiguous.
  std::size_t panel_type() const { return simple_; }

  // The reflection swapping this root and its opposite.
  Elem reflection() const;

  int cmp(const RootVec& o) const;
  bool operator==(const RootVec& o) const { return cmp(o) == 0; }
  bool operator!=(const RootVec& o) const { return cmp(o) != 0; }
  bool operator<(const RootVec& o) const { return cmp(o) < 0; }

  std::string str() const { return vec_str(v_); }

private:
  SystemPtr sys_;
  IntVec v_;
  Word to_simple_;      // v with beta = +-v(alpha_simple), recorded during validation
  std::size_t simple_ = 0;
};

RootVec act_on_root(const Elem& w, const RootVec& beta);

// The automorphism of W induced by a bond-preserving bijection of S; applied
// to an element it relabels a reduced word.
class DiagramAutomorphism {
public:
  static DiagramAutomorphism create(SystemPtr sys, std::vector<std::size_t> perm);
  static DiagramAutomorphism identity(SystemPtr sys);

  std::size_t map(std::size_t s) const { return perm_[s]; }
  const std::vector<std::size_t>& perm() const { return perm_; }
  bool is_identity() const;
  bool preserves_cartan() const { return preserves_cartan_; }

  Elem apply(const Elem& w) const;
  Word apply(const Word& w) const;

private:
  SystemPtr sys_;
  std::vector<std::size_t> perm_;
  bool preserves_cartan_ = false;
};

DiagramAutomorphism extend_diagram_automorphism(const SystemPtr& sys,
                                                std::vector<std::size_t> perm);

} // namespace flatbldg
