#pragma once

#include <gmpxx.h>

#include <cstddef>
#include <string>
#include <vector>

namespace flatbldg {

using Int = mpz_class;
using IntVec = std::vector<Int>;

// Dense square matrix over arbitrary-precision integers. Entries grow only
// linearly with word length here, but flat-calculus index values do not, so
// the whole library stays on exact bignums.
class IntMat {
public:
  IntMat() = default;
  explicit IntMat(std::size_t n) : n_(n), a_(n * n) {}

  static IntMat identity(std::size_t n) {
    IntMat m(n);
    for (std::size_t i = 0; i < n; ++i) m.at(i, i) = 1;
    return m;
  }

  std::size_t size() const { return n_; }

  Int& at(std::size_t i, std::size_t j) { return a_[i * n_ + j]; }
  const Int& at(std::size_t i, std::size_t j) const { return a_[i * n_ + j]; }

  IntMat operator*(const IntMat& o) const {
    IntMat r(n_);
    for (std::size_t i = 0; i < n_; ++i)
      for (std::size_t k = 0; k < n_; ++k) {
        const Int& aik = at(i, k);
        if (aik == 0) continue;
        for (std::size_t j = 0; j < n_; ++j) r.at(i, j) += aik * o.at(k, j);
      }
    return r;
  }

  IntVec operator*(const IntVec& v) const {
    IntVec r(n_);
    for (std::size_t i = 0; i < n_; ++i)
      for (std::size_t j = 0; j < n_; ++j)
        if (at(i, j) != 0) r[i] += at(i, j) * v[j];
    return r;
  }

  IntVec column(std::size_t j) const {
    IntVec r(n_);
    for (std::size_t i = 0; i < n_; ++i) r[i] = at(i, j);
    return r;
  }

  bool operator==(const IntMat& o) const { return n_ == o.n_ && a_ == o.a_; }
  bool operator!=(const IntMat& o) const { return !(*this == o); }

  int cmp(const IntMat& o) const {
    if (n_ != o.n_) return n_ < o.n_ ? -1 : 1;
    for (std::size_t i = 0; i < a_.size(); ++i) {
      int c = ::cmp(a_[i], o.a_[i]);
      if (c != 0) return c;
    }
    return 0;
  }

  bool operator<(const IntMat& o) const { return cmp(o) < 0; }

  std::string str() const {
    std::string s = "[";
    for (std::size_t i = 0; i < n_; ++i) {
      s += i ? "; " : "";
      for (std::size_t j = 0; j < n_; ++j) {
        if (j) s += " ";
        s += at(i, j).get_str();
      }
    }
    return s + "]";
  }

private:
  std::size_t n_ = 0;
  std::vector<Int> a_;
};

// Sign tests in the simple-root basis. A valid root vector is nonzero and
// sign-pure; "nonneg" means every coordinate >= 0.
inline bool vec_is_zero(const IntVec& v) {
  for (const Int& x : v)
    if (x != 0) return false;
  return true;
}

inline bool vec_nonneg(const IntVec& v) {
  for (const Int& x : v)
    if (x < 0) return false;
  return true;
}

inline bool vec_nonpos(const IntVec& v) {
  for (const Int& x : v)
    if (x > 0) return false;
  return true;
}

inline bool vec_positive_root(const IntVec& v) { return !vec_is_zero(v) && vec_nonneg(v); }
inline bool vec_negative_root(const IntVec& v) { return !vec_is_zero(v) && vec_nonpos(v); }
inline bool vec_sign_pure(const IntVec& v) { return vec_nonneg(v) || vec_nonpos(v); }

inline IntVec vec_neg(const IntVec& v) {
  IntVec r(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) r[i] = -v[i];
  return r;
}

inline int vec_cmp(const IntVec& a, const IntVec& b) {
  if (a.size() != b.size()) return a.size() < b.size() ? -1 : 1;
  for (std::size_t i = 0; i < a.size(); ++i) {
    int c = ::cmp(a[i], b[i]);
    if (c != 0) return c;
  }
  return 0;
}

inline std::string vec_str(const IntVec& v) {
  std::string s = "(";
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) s += ",";
    s += v[i].get_str();
  }
  return s + ")";
}

} // namespace flatbldg
