#pragma once

#include <functional>
#include <random>
#include <vector>

#include <flatbldg/flat.hpp>

namespace testutil {

using namespace flatbldg;

inline Elem el(const SystemPtr& sys, const std::string& word) {
  return Elem::from_word(sys, parse_word(sys, word));
}

inline Elem sample_from(const std::vector<Elem>& pool, std::mt19937& rng) {
  return pool[rng() % pool.size()];
}

// All words over the generators up to the given length, as elements.
inline void for_each_word(const SystemPtr& sys, std::size_t max_len,
                          const std::function<void(const Word&)>& fn) {
  std::size_t r = sys->rank();
  Word w;
  std::function<void()> rec = [&]() {
    fn(w);
    if (w.letters.size() == max_len) return;
    for (std::size_t s = 0; s < r; ++s) {
      w.letters.push_back(s);
      rec();
      w.letters.pop_back();
    }
  };
  rec();
}

// Enumerates every reduced word of an element by following descents.
inline void all_reduced_words(const Elem& w, Word& prefix,
                              const std::function<void(const Word&)>& fn) {
  if (w.is_identity()) {
    fn(prefix);
    return;
  }
  for (std::size_t s = 0; s < w.system()->rank(); ++s) {
    if (!has_left_descent(w, s)) continue;
    prefix.letters.push_back(s);
    all_reduced_words(w.mul_gen_left(s), prefix, fn);
    prefix.letters.pop_back();
  }
}

// Permutations of {0..n-1} composed as maps, for the symmetric-group model.
struct Perm {
  std::vector<int> img;

  static Perm id(int n) {
    Perm p;
    p.img.resize(n);
    for (int i = 0; i < n; ++i) p.img[i] = i;
    return p;
  }
  static Perm transposition(int n, int i) {
    Perm p = id(n);
    std::swap(p.img[i], p.img[i + 1]);
    return p;
  }
  Perm operator*(const Perm& o) const {
    Perm r;
    r.img.resize(img.size());
    for (std::size_t i = 0; i < img.size(); ++i) r.img[i] = img[o.img[i]];
    return r;
  }
  bool operator==(const Perm& o) const { return img == o.img; }
};

inline TranslationElem random_translation(const SystemPtr& sys, std::mt19937& rng, long box = 3) {
  std::size_t n = translation_basis(sys).size();
  IntVec coords(n);
  for (std::size_t j = 0; j < n; ++j)
    coords[j] = static_cast<long>(rng() % (2 * box + 1)) - box;
  return translation_from_coords(sys, coords);
}

} // namespace testutil
