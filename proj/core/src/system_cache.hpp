#pragma once

#include <map>
#include <mutex>
#include <optional>
#include <vector>

#include "flatbldg/coxeter.hpp"

namespace flatbldg::detail {

struct BallNode {
  IntMat mat, inv;
  Word word; // lexicographically smallest reduced word
  unsigned len;
};

struct TransData {
  IntMat mat, inv;
  IntVec offsets;
};

// Per-system memoization: the Cayley ball from the identity in canonical
// order (grown on demand), relative minimal-gallery intervals, the
// translation-lattice basis and longest parabolic elements. Guarded by a
// recursive mutex; all entries are plain data so the owning system holds no
// shared_ptr cycles.
struct SystemCache {
  std::recursive_mutex mu;

  std::vector<BallNode> nodes;
  std::map<IntMat, std::size_t> index;
  long complete_radius = -1;

  std::map<IntMat, std::vector<std::size_t>> intervals;
  std::optional<std::vector<TransData>> translation_basis;
  std::map<std::vector<std::size_t>, std::pair<IntMat, IntMat>> longest;
};

// Grows the cached ball to the given radius (idempotent). Defined in
// chamber.cpp; callers must hold no cache lock.
void grow_ball(const SystemPtr& sys, std::size_t radius);

} // namespace flatbldg::detail
