#include "flatbldg/coxeter.hpp"

#include <algorithm>
#include <cctype>
#include <functional>
#include <numeric>
#include <set>
#include <sstream>

#include <nlohmann/json.hpp>

#include "system_cache.hpp"

namespace flatbldg {

const char* errc_name(errc c) {
  switch (c) {
    case errc::malformed_spec: return "MalformedSpec";
    case errc::non_crystallographic: return "NonCrystallographic";
    case errc::asymmetric_matrix: return "AsymmetricMatrix";
    case errc::system_mismatch: return "SystemMismatch";
    case errc::not_a_root_vector: return "NotARootVector";
    case errc::not_diagram_compatible: return "NotDiagramCompatible";
    case errc::not_affine: return "NotAffine";
    case errc::not_special_vertex: return "NotSpecialVertex";
    case errc::not_parallel: return "NotParallel";
    case errc::not_a_translation: return "NotATranslation";
    case errc::search_bound_exceeded: return "SearchBoundExceeded";
    case errc::invalid_thickness: return "InvalidThickness";
    case errc::thickness_sigma_mismatch: return "ThicknessSigmaMismatch";
    case errc::gallery_not_minimal: return "GalleryNotMinimal";
    case errc::not_opposite: return "NotOpposite";
    case errc::factorization_mismatch: return "FactorizationMismatch";
    case errc::empty_input: return "EmptyInput";
    case errc::unknown_generator: return "UnknownGenerator";
    case errc::gem_too_large: return "GemTooLarge";
    case errc::internal: return "InternalError";
  }
  return "UnknownError";
}

const char* kind_name(SystemKind k) {
  switch (k) {
    case SystemKind::spherical: return "spherical";
    case SystemKind::affine: return "affine";
    case SystemKind::other: return "other";
  }
  return "?";
}

// ---------------------------------------------------------------------------
// Diagram catalog and classifier

namespace {

struct Catalog {
  std::string name;
  bool affine = false;
  char finite_letter = 0; // underlying finite letter (affine types de-tilded, C -> B)
  int finite_rank = 0;
  std::vector<std::vector<int>> m;
  std::vector<std::vector<int>> cartan;
};

struct Proto {
  std::size_t r;
  std::vector<std::vector<int>> m, c;

  explicit Proto(std::size_t rank) : r(rank) {
    m.assign(r, std::vector<int>(r, 2));
    c.assign(r, std::vector<int>(r, 0));
    for (std::size_t i = 0; i < r; ++i) {
      m[i][i] = 1;
      c[i][i] = 2;
    }
  }

  // cij = <alpha_j, alpha_i^v> at row i, column j.
  void edge(std::size_t i, std::size_t j, int mval, int cij, int cji) {
    m[i][j] = m[j][i] = mval;
    c[i][j] = cij;
    c[j][i] = cji;
  }
  void simple_edge(std::size_t i, std::size_t j) { edge(i, j, 3, -1, -1); }
  // 4-bond with alpha_j the short root.
  void four_edge_short(std::size_t i, std::size_t j) { edge(i, j, 4, -1, -2); }
};

Catalog make_catalog(std::string name, bool affine, char letter, int rank, Proto p) {
  return Catalog{std::move(name), affine, letter, rank, std::move(p.m), std::move(p.c)};
}

Catalog cat_A(int n) {
  Proto p(n);
  for (int i = 0; i + 1 < n; ++i) p.simple_edge(i, i + 1);
  return make_catalog("A" + std::to_string(n), false, 'A', n, std::move(p));
}

Catalog cat_B(int n) {
  Proto p(n);
  for (int i = 0; i + 2 < n; ++i) p.simple_edge(i, i + 1);
  p.four_edge_short(n - 2, n - 1);
  return make_catalog("B" + std::to_string(n), false, 'B', n, std::move(p));
}

// Tree with a trivalent center and arms of the given vertex counts.
Proto proto_t(int a, int b, int c) {
  Proto p(a + b + c + 1);
  int center = a + b + c;
  int idx = 0;
  for (int arm : {a, b, c}) {
    int prev = center;
    for (int k = 0; k < arm; ++k) {
      p.simple_edge(prev, idx);
      prev = idx;
      ++idx;
    }
  }
  return p;
}

Catalog cat_Dn(int n) {
  // path 0..n-3, tips n-2 and n-1 attached to n-3
  Proto p(n);
  for (int i = 0; i + 1 <= n - 3; ++i) p.simple_edge(i, i + 1);
  p.simple_edge(n - 3, n - 2);
  p.simple_edge(n - 3, n - 1);
  return make_catalog("D" + std::to_string(n), false, 'D', n, std::move(p));
}

Catalog cat_E(int n) {
  Proto p = proto_t(1, 2, n - 4);
  return make_catalog("E" + std::to_string(n), false, 'E', n, std::move(p));
}

Catalog cat_F4() {
  Proto p(4);
  p.simple_edge(0, 1);
  p.four_edge_short(1, 2); // alpha_2, alpha_3 short
  p.simple_edge(2, 3);
  return make_catalog("F4", false, 'F', 4, std::move(p));
}

Catalog cat_G2() {
  Proto p(2);
  p.edge(0, 1, 6, -1, -3); // alpha_1 short
  return make_catalog("G2", false, 'G', 2, std::move(p));
}

Catalog cat_A1aff() {
  Proto p(2);
  p.edge(0, 1, infinite_bond, -2, -2);
  return make_catalog("A~1", true, 'A', 1, std::move(p));
}

Catalog cat_Aaff(int n) {
  Proto p(n + 1);
  for (int i = 0; i < n; ++i) p.simple_edge(i, i + 1);
  p.simple_edge(0, n);
  return make_catalog("A~" + std::to_string(n), true, 'A', n, std::move(p));
}

Catalog cat_Baff(int n) {
  // tips 0,1 on 2; chain 2..n; alpha_n short
  Proto p(n + 1);
  p.simple_edge(0, 2);
  p.simple_edge(1, 2);
  for (int i = 2; i + 1 < n; ++i) p.simple_edge(i, i + 1);
  p.four_edge_short(n - 1, n);
  return make_catalog("B~" + std::to_string(n), true, 'B', n, std::move(p));
}

Catalog cat_Caff(int n) {
  // path 0..n, long roots at both ends, short in the middle
  Proto p(n + 1);
  p.four_edge_short(0, 1);
  for (int i = 1; i + 1 < n; ++i) p.simple_edge(i, i + 1);
  p.four_edge_short(n, n - 1);
  return make_catalog("C~" + std::to_string(n), true, 'B', n, std::move(p));
}

Catalog cat_Daff(int n) {
  Proto p(n + 1);
  p.simple_edge(0, 2);
  p.simple_edge(1, 2);
  for (int i = 2; i + 1 <= n - 2; ++i) p.simple_edge(i, i + 1);
  p.simple_edge(n - 2, n - 1);
  p.simple_edge(n - 2, n);
  return make_catalog("D~" + std::to_string(n), true, 'D', n, std::move(p));
}

Catalog cat_Eaff(int n) {
  Proto p = n == 6 ? proto_t(2, 2, 2) : (n == 7 ? proto_t(1, 3, 3) : proto_t(1, 2, 5));
  return make_catalog("E~" + std::to_string(n), true, 'E', n, std::move(p));
}

Catalog cat_Faff4() {
  Proto p(5);
  p.simple_edge(0, 1);
  p.simple_edge(1, 2);
  p.four_edge_short(2, 3); // alpha_3, alpha_4 short
  p.simple_edge(3, 4);
  return make_catalog("F~4", true, 'F', 4, std::move(p));
}

Catalog cat_Gaff2() {
  Proto p(3);
  p.simple_edge(0, 1);
  p.edge(1, 2, 6, -1, -3); // alpha_2 short
  return make_catalog("G~2", true, 'G', 2, std::move(p));
}

std::vector<Catalog> candidates_for_rank(std::size_t r) {
  std::vector<Catalog> out;
  int n = static_cast<int>(r);
  out.push_back(cat_A(n));
  if (n >= 2) out.push_back(cat_B(n));
  if (n >= 4) out.push_back(cat_Dn(n));
  if (n >= 6 && n <= 8) out.push_back(cat_E(n));
  if (n == 4) out.push_back(cat_F4());
  if (n == 2) out.push_back(cat_G2());
  if (n == 2) out.push_back(cat_A1aff());
  if (n >= 3) out.push_back(cat_Aaff(n - 1));
  if (n - 1 >= 3) out.push_back(cat_Baff(n - 1));
  if (n - 1 >= 2) out.push_back(cat_Caff(n - 1));
  if (n - 1 >= 4) out.push_back(cat_Daff(n - 1));
  if (n == 7) out.push_back(cat_Eaff(6));
  if (n == 8) out.push_back(cat_Eaff(7));
  if (n == 9) out.push_back(cat_Eaff(8));
  if (n == 5) out.push_back(cat_Faff4());
  if (n == 3) out.push_back(cat_Gaff2());
  return out;
}

// Vertex signature: sorted multiset of incident bond labels.
std::vector<int> vertex_signature(const std::vector<std::vector<int>>& m, std::size_t v) {
  std::vector<int> sig;
  for (std::size_t j = 0; j < m.size(); ++j)
    if (j != v && m[v][j] != 2) sig.push_back(m[v][j]);
  std::sort(sig.begin(), sig.end());
  return sig;
}

bool match_rec(const std::vector<std::vector<int>>& user, const std::vector<std::vector<int>>& canon,
               const std::vector<std::vector<int>>& user_sig,
               const std::vector<std::vector<int>>& canon_sig, std::vector<std::size_t>& perm,
               std::vector<bool>& used, std::size_t i) {
  std::size_t r = canon.size();
  if (i == r) return true;
  for (std::size_t u = 0; u < r; ++u) {
    if (used[u] || user_sig[u] != canon_sig[i]) continue;
    bool ok = true;
    for (std::size_t j = 0; j < i && ok; ++j)
      if (user[u][perm[j]] != canon[i][j]) ok = false;
    if (!ok) continue;
    perm[i] = u;
    used[u] = true;
    if (match_rec(user, canon, user_sig, canon_sig, perm, used, i + 1)) return true;
    used[u] = false;
  }
  return false;
}

// Finds perm with user[perm[i]][perm[j]] == canon[i][j], or nothing.
std::optional<std::vector<std::size_t>> match_diagram(const std::vector<std::vector<int>>& user,
                                                      const std::vector<std::vector<int>>& canon) {
  std::size_t r = canon.size();
  if (user.size() != r) return std::nullopt;
  std::vector<std::vector<int>> us(r), cs(r);
  for (std::size_t v = 0; v < r; ++v) {
    us[v] = vertex_signature(user, v);
    cs[v] = vertex_signature(canon, v);
  }
  {
    auto a = us, b = cs;
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    if (a != b) return std::nullopt;
  }
  std::vector<std::size_t> perm(r);
  std::vector<bool> used(r, false);
  if (match_rec(user, canon, us, cs, perm, used, 0)) return perm;
  return std::nullopt;
}

struct Classified {
  Catalog cat;
  std::vector<std::size_t> perm; // canonical index -> user index
};

std::optional<Classified> classify_connected(const std::vector<std::vector<int>>& m) {
  for (auto& cat : candidates_for_rank(m.size()))
    if (auto perm = match_diagram(m, cat.m)) return Classified{cat, *perm};
  return std::nullopt;
}

std::vector<std::vector<std::size_t>> components(const std::vector<std::vector<int>>& m) {
  std::size_t r = m.size();
  std::vector<int> comp(r, -1);
  int nc = 0;
  for (std::size_t v = 0; v < r; ++v) {
    if (comp[v] >= 0) continue;
    std::vector<std::size_t> stack{v};
    comp[v] = nc;
    while (!stack.empty()) {
      std::size_t x = stack.back();
      stack.pop_back();
      for (std::size_t j = 0; j < r; ++j)
        if (comp[j] < 0 && m[x][j] != 2) {
          comp[j] = nc;
          stack.push_back(j);
        }
    }
    ++nc;
  }
  std::vector<std::vector<std::size_t>> out(nc);
  for (std::size_t v = 0; v < r; ++v) out[comp[v]].push_back(v);
  return out;
}

std::vector<std::vector<int>> submatrix(const std::vector<std::vector<int>>& m,
                                        const std::vector<std::size_t>& verts) {
  std::vector<std::vector<int>> sub(verts.size(), std::vector<int>(verts.size()));
  for (std::size_t i = 0; i < verts.size(); ++i)
    for (std::size_t j = 0; j < verts.size(); ++j) sub[i][j] = m[verts[i]][verts[j]];
  return sub;
}

// Primitive positive integer kernel vector of the (corank one) Cartan matrix.
IntVec affine_null_vector(const std::vector<std::vector<int>>& cartan) {
  std::size_t r = cartan.size();
  std::vector<std::vector<mpq_class>> a(r, std::vector<mpq_class>(r));
  for (std::size_t i = 0; i < r; ++i)
    for (std::size_t j = 0; j < r; ++j) a[i][j] = cartan[i][j];

  std::vector<std::size_t> pivot_col;
  std::size_t row = 0;
  for (std::size_t col = 0; col < r && row < r; ++col) {
    std::size_t p = row;
    while (p < r && a[p][col] == 0) ++p;
    if (p == r) continue;
    std::swap(a[p], a[row]);
    mpq_class inv = 1 / a[row][col];
    for (std::size_t j = 0; j < r; ++j) a[row][j] *= inv;
    for (std::size_t i = 0; i < r; ++i) {
      if (i == row || a[i][col] == 0) continue;
      mpq_class f = a[i][col];
      for (std::size_t j = 0; j < r; ++j) a[i][j] -= f * a[row][j];
    }
    pivot_col.push_back(col);
    ++row;
  }
  if (pivot_col.size() != r - 1) fail(errc::internal, "affine Cartan matrix has corank != 1");
  std::vector<bool> is_pivot(r, false);
  for (auto c : pivot_col) is_pivot[c] = true;
  std::size_t free_col = 0;
  while (is_pivot[free_col]) ++free_col;

  std::vector<mpq_class> x(r, 0);
  x[free_col] = 1;
  for (std::size_t k = 0; k < pivot_col.size(); ++k)
    x[pivot_col[k]] = -a[k][free_col];

  Int lcm_den = 1;
  for (auto& q : x) {
    q.canonicalize();
    mpz_class den = q.get_den();
    mpz_class g;
    mpz_gcd(g.get_mpz_t(), lcm_den.get_mpz_t(), den.get_mpz_t());
    lcm_den = lcm_den / g * den;
  }
  IntVec v(r);
  for (std::size_t i = 0; i < r; ++i) {
    mpq_class q = x[i] * lcm_den;
    q.canonicalize();
    v[i] = q.get_num();
  }
  Int g = 0;
  for (auto& e : v) mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), e.get_mpz_t());
  if (g == 0) fail(errc::internal, "null vector is zero");
  for (auto& e : v) e /= g;
  bool neg = false, pos = false;
  for (auto& e : v) {
    if (e < 0) neg = true;
    if (e > 0) pos = true;
  }
  if (neg && pos) fail(errc::internal, "null vector has mixed signs");
  if (neg)
    for (auto& e : v) e = -e;
  for (auto& e : v)
    if (e == 0) fail(errc::internal, "null vector has a zero entry");
  return v;
}

void validate_cartan_pair(int m, int cst, int cts) {
  auto ok = [&](int a, int b) { return (cst == a && cts == b) || (cst == b && cts == a); };
  bool good = false;
  switch (m) {
    case 2: good = (cst == 0 && cts == 0); break;
    case 3: good = (cst == -1 && cts == -1); break;
    case 4: good = ok(-1, -2); break;
    case 6: good = ok(-1, -3); break;
    case infinite_bond: good = (cst == -2 && cts == -2); break;
    default: good = false;
  }
  if (!good) fail(errc::internal, "Cartan pair inconsistent with bond");
}

} // namespace

// ---------------------------------------------------------------------------
// System construction

SystemPtr finish_system(std::vector<std::string> labels, std::vector<std::vector<int>> m,
                        std::vector<std::vector<int>> cartan, SystemKind kind,
                        std::optional<AffineData> affine, std::string type_name,
                        std::size_t gem_limit) {
  auto sys = std::shared_ptr<CoxSystem>(new CoxSystem());
  std::size_t r = labels.size();
  sys->generators = std::move(labels);
  sys->coxeter_matrix = std::move(m);
  sys->cartan = std::move(cartan);
  sys->kind = kind;
  sys->affine = std::move(affine);
  sys->type_name = std::move(type_name);
  sys->gem_size_limit = gem_limit;

  for (std::size_t s = 0; s < r; ++s)
    for (std::size_t t = s + 1; t < r; ++t)
      validate_cartan_pair(sys->coxeter_matrix[s][t], sys->cartan[s][t], sys->cartan[t][s]);

  sys->gen_mats_.reserve(r);
  for (std::size_t s = 0; s < r; ++s) {
    IntMat g = IntMat::identity(r);
    for (std::size_t j = 0; j < r; ++j) g.at(s, j) -= sys->cartan[s][j];
    sys->gen_mats_.push_back(std::move(g));
  }

  // conjugacy classes of generators: union over odd finite bonds
  std::vector<std::size_t> cls(r);
  std::iota(cls.begin(), cls.end(), 0);
  std::function<std::size_t(std::size_t)> find = [&](std::size_t x) {
    while (cls[x] != x) x = cls[x] = cls[cls[x]];
    return x;
  };
  for (std::size_t s = 0; s < r; ++s)
    for (std::size_t t = s + 1; t < r; ++t) {
      int b = sys->coxeter_matrix[s][t];
      if (b != infinite_bond && b % 2 == 1) cls[find(s)] = find(t);
    }
  sys->conj_class_.resize(r);
  for (std::size_t s = 0; s < r; ++s) sys->conj_class_[s] = find(s);

  sys->cache_ = std::make_unique<detail::SystemCache>();
  return sys;
}

CoxSystem::~CoxSystem() = default;

std::size_t CoxSystem::generator_index(std::string_view label) const {
  for (std::size_t i = 0; i < generators.size(); ++i)
    if (generators[i] == label) return i;
  fail(errc::unknown_generator, "no generator named '" + std::string(label) + "'");
}

const IntVec& CoxSystem::delta() const {
  if (!affine) fail(errc::not_affine, "system '" + type_name + "' is not connected affine");
  return affine->null_vector;
}

SystemPtr build_system_from_matrix(std::vector<std::string> generators,
                                   std::vector<std::vector<int>> m, const BuildOptions& opts) {
  std::size_t r = generators.size();
  if (r == 0) fail(errc::malformed_spec, "no generators");
  {
    std::set<std::string> seen(generators.begin(), generators.end());
    if (seen.size() != r) fail(errc::malformed_spec, "duplicate generator labels");
  }
  if (m.size() != r) fail(errc::malformed_spec, "Coxeter matrix size does not match generators");
  for (auto& row : m)
    if (row.size() != r) fail(errc::malformed_spec, "Coxeter matrix is not square");
  for (std::size_t i = 0; i < r; ++i) {
    if (m[i][i] != 1) fail(errc::malformed_spec, "diagonal entries must be 1");
    for (std::size_t j = 0; j < r; ++j) {
      if (m[i][j] != m[j][i])
        fail(errc::asymmetric_matrix, "m[" + std::to_string(i) + "][" + std::to_string(j) +
                                          "] != m[" + std::to_string(j) + "][" +
                                          std::to_string(i) + "]");
      if (i != j) {
        int v = m[i][j];
        if (v == 1 || v < 0) fail(errc::malformed_spec, "off-diagonal bonds must be >= 2");
        if (v != 2 && v != 3 && v != 4 && v != 6 && v != infinite_bond)
          fail(errc::non_crystallographic,
               "bond m = " + std::to_string(v) + " is outside {2,3,4,6,inf}");
      }
    }
  }

  auto comps = components(m);
  std::vector<std::vector<int>> cartan(r, std::vector<int>(r, 0));
  for (std::size_t i = 0; i < r; ++i) cartan[i][i] = 2;

  auto default_orientation = [&](const std::vector<std::size_t>& verts) {
    for (std::size_t a = 0; a < verts.size(); ++a)
      for (std::size_t b = a + 1; b < verts.size(); ++b) {
        std::size_t i = verts[a], j = verts[b];
        switch (m[i][j]) {
          case 2: break;
          case 3: cartan[i][j] = cartan[j][i] = -1; break;
          case 4: cartan[i][j] = -1; cartan[j][i] = -2; break;
          case 6: cartan[i][j] = -1; cartan[j][i] = -3; break;
          case infinite_bond: cartan[i][j] = cartan[j][i] = -2; break;
          default: break;
        }
      }
  };

  SystemKind kind;
  std::optional<AffineData> affine;
  std::string type_name;

  if (comps.size() == 1) {
    auto cl = classify_connected(m);
    if (cl) {
      for (std::size_t i = 0; i < r; ++i)
        for (std::size_t j = 0; j < r; ++j)
          cartan[cl->perm[i]][cl->perm[j]] = cl->cat.cartan[i][j];
      type_name = cl->cat.name;
      if (cl->cat.affine) {
        kind = SystemKind::affine;
        AffineData ad;
        ad.null_vector = affine_null_vector(cartan);
        for (std::size_t o = 0; o < r; ++o) {
          std::vector<std::size_t> rest;
          for (std::size_t v = 0; v < r; ++v)
            if (v != o) rest.push_back(v);
          auto sub = submatrix(m, rest);
          if (components(sub).size() != 1) continue;
          auto sub_cl = classify_connected(sub);
          if (sub_cl && !sub_cl->cat.affine && sub_cl->cat.finite_letter == cl->cat.finite_letter &&
              sub_cl->cat.finite_rank == cl->cat.finite_rank)
            ad.special_vertices.push_back(o);
        }
        if (ad.special_vertices.empty()) fail(errc::internal, "affine diagram without special vertex");
        affine = std::move(ad);
      } else {
        kind = SystemKind::spherical;
      }
    } else {
      kind = SystemKind::other;
      type_name = "other";
      default_orientation(comps[0]);
    }
  } else {
    bool all_spherical = true;
    std::vector<std::string> names;
    for (auto& verts : comps) {
      auto sub = submatrix(m, verts);
      auto cl = classify_connected(sub);
      if (cl && !cl->cat.affine) {
        for (std::size_t i = 0; i < verts.size(); ++i)
          for (std::size_t j = 0; j < verts.size(); ++j)
            cartan[verts[cl->perm[i]]][verts[cl->perm[j]]] = cl->cat.cartan[i][j];
        names.push_back(cl->cat.name);
      } else {
        all_spherical = false;
        names.push_back(cl ? cl->cat.name : "other");
        default_orientation(verts);
      }
    }
    kind = all_spherical ? SystemKind::spherical : SystemKind::other;
    type_name = names[0];
    for (std::size_t i = 1; i < names.size(); ++i) type_name += " x " + names[i];
  }

  return finish_system(std::move(generators), std::move(m), std::move(cartan), kind,
                       std::move(affine), std::move(type_name), opts.gem_size_limit);
}

namespace {

SystemPtr build_from_type_string(const std::string& text, const BuildOptions& opts) {
  std::string s;
  for (char c : text)
    if (!std::isspace(static_cast<unsigned char>(c))) s += c;
  const std::string grammar = "expected LETTER[~]RANK with LETTER in {A..G}, e.g. A~2, C~2, B3";
  if (s.empty()) fail(errc::malformed_spec, "empty type spec; " + grammar);
  char letter = static_cast<char>(std::toupper(static_cast<unsigned char>(s[0])));
  if (letter < 'A' || letter > 'G') fail(errc::malformed_spec, "bad letter '" + s.substr(0, 1) + "'; " + grammar);
  std::size_t pos = 1;
  bool affine = false;
  if (pos < s.size() && s[pos] == '~') {
    affine = true;
    ++pos;
  }
  std::size_t digits_start = pos;
  while (pos < s.size() && std::isdigit(static_cast<unsigned char>(s[pos]))) ++pos;
  if (digits_start == pos) fail(errc::malformed_spec, "missing rank in '" + text + "'; " + grammar);
  int n = std::stoi(s.substr(digits_start, pos - digits_start));
  if (pos < s.size() && s[pos] == '~' && !affine) {
    affine = true;
    ++pos;
  }
  if (pos != s.size()) fail(errc::malformed_spec, "trailing characters in '" + text + "'; " + grammar);

  auto bad_rank = [&]() -> Catalog {
    fail(errc::malformed_spec, "rank " + std::to_string(n) + " is invalid for type " + letter +
                                   std::string(affine ? "~" : ""));
  };

  Catalog cat = [&]() -> Catalog {
    if (!affine) {
      switch (letter) {
        case 'A': return n >= 1 ? cat_A(n) : bad_rank();
        case 'B': return n >= 2 ? cat_B(n) : bad_rank();
        case 'C': return n >= 2 ? cat_B(n) : bad_rank();
        case 'D': return n >= 4 ? cat_Dn(n) : bad_rank();
        case 'E': return (n >= 6 && n <= 8) ? cat_E(n) : bad_rank();
        case 'F': return n == 4 ? cat_F4() : bad_rank();
        case 'G': return n == 2 ? cat_G2() : bad_rank();
      }
    } else {
      switch (letter) {
        case 'A': return n == 1 ? cat_A1aff() : (n >= 2 ? cat_Aaff(n) : bad_rank());
        case 'B': return n >= 3 ? cat_Baff(n) : bad_rank();
        case 'C': return n >= 2 ? cat_Caff(n) : bad_rank();
        case 'D': return n >= 4 ? cat_Daff(n) : bad_rank();
        case 'E': return (n >= 6 && n <= 8) ? cat_Eaff(n) : bad_rank();
        case 'F': return n == 4 ? cat_Faff4() : bad_rank();
        case 'G': return n == 2 ? cat_Gaff2() : bad_rank();
      }
    }
    return bad_rank();
  }();

  std::vector<std::string> labels;
  for (std::size_t i = 0; i < cat.m.size(); ++i) labels.push_back("s" + std::to_string(i));
  return build_system_from_matrix(std::move(labels), cat.m, opts);
}

} // namespace

SystemPtr build_system(const std::string& spec, const BuildOptions& opts) {
  std::size_t i = 0;
  while (i < spec.size() && std::isspace(static_cast<unsigned char>(spec[i]))) ++i;
  if (i < spec.size() && spec[i] == '{') {
    nlohmann::json j = nlohmann::json::parse(spec, nullptr, false);
    if (j.is_discarded() || !j.is_object() || !j.contains("generators") || !j.contains("m"))
      fail(errc::malformed_spec, "JSON spec must be {\"generators\":[...], \"m\":[[...]]}");
    std::vector<std::string> labels;
    if (!j["generators"].is_array()) fail(errc::malformed_spec, "generators must be an array");
    for (auto& g : j["generators"]) {
      if (!g.is_string()) fail(errc::malformed_spec, "generator labels must be strings");
      labels.push_back(g.get<std::string>());
    }
    std::vector<std::vector<int>> m;
    if (!j["m"].is_array()) fail(errc::malformed_spec, "m must be an array of arrays");
    for (auto& row : j["m"]) {
      if (!row.is_array()) fail(errc::malformed_spec, "m must be an array of arrays");
      std::vector<int> r;
      for (auto& e : row) {
        if (e.is_string() && (e == "inf" || e == "infinity")) {
          r.push_back(infinite_bond);
        } else if (e.is_number_integer()) {
          r.push_back(e.get<int>());
        } else {
          fail(errc::malformed_spec, "bond entries must be integers or \"inf\" (0 = inf)");
        }
      }
      m.push_back(std::move(r));
    }
    return build_system_from_matrix(std::move(labels), std::move(m), opts);
  }
  return build_from_type_string(spec, opts);
}

// ---------------------------------------------------------------------------
// Elements

Elem Elem::from_parts(SystemPtr sys, IntMat mat, IntMat inv) {
  Elem e;
  e.sys_ = std::move(sys);
  e.mat_ = std::move(mat);
  e.inv_ = std::move(inv);
  return e;
}

Elem Elem::identity(const SystemPtr& sys) {
  auto I = IntMat::identity(sys->rank());
  return from_parts(sys, I, I);
}

Elem Elem::generator(const SystemPtr& sys, std::size_t s) {
  if (s >= sys->rank()) fail(errc::unknown_generator, "generator index out of range");
  return from_parts(sys, sys->gen_matrix(s), sys->gen_matrix(s));
}

Elem Elem::from_word(const SystemPtr& sys, const Word& w) {
  Elem e = identity(sys);
  for (std::size_t s : w.letters) e = e.mul_gen_right(s);
  return e;
}

void check_same_system(const Elem& a, const Elem& b) {
  if (a.system() != b.system())
    fail(errc::system_mismatch, "elements belong to different systems");
}

Elem Elem::operator*(const Elem& o) const {
  check_same_system(*this, o);
  return from_parts(sys_, mat_ * o.mat_, o.inv_ * inv_);
}

Elem Elem::inverse() const { return from_parts(sys_, inv_, mat_); }

Elem Elem::mul_gen_left(std::size_t s) const {
  std::size_t r = sys_->rank();
  IntMat m = mat_, v = inv_;
  const auto& C = sys_->cartan[s];
  // rows of s * mat: only row s changes
  for (std::size_t j = 0; j < r; ++j) {
    Int acc = m.at(s, j);
    for (std::size_t k = 0; k < r; ++k)
      if (C[k] != 0) acc -= C[k] * mat_.at(k, j);
    m.at(s, j) = acc;
  }
  // inv * M(s): column update
  for (std::size_t i = 0; i < r; ++i) {
    const Int bis = inv_.at(i, s);
    if (bis == 0) continue;
    for (std::size_t j = 0; j < r; ++j)
      if (C[j] != 0) v.at(i, j) -= bis * C[j];
  }
  return from_parts(sys_, std::move(m), std::move(v));
}

Elem Elem::mul_gen_right(std::size_t s) const {
  std::size_t r = sys_->rank();
  IntMat m = mat_, v = inv_;
  const auto& C = sys_->cartan[s];
  for (std::size_t i = 0; i < r; ++i) {
    const Int ais = mat_.at(i, s);
    if (ais == 0) continue;
    for (std::size_t j = 0; j < r; ++j)
      if (C[j] != 0) m.at(i, j) -= ais * C[j];
  }
  for (std::size_t j = 0; j < r; ++j) {
    Int acc = v.at(s, j);
    for (std::size_t k = 0; k < r; ++k)
      if (C[k] != 0) acc -= C[k] * inv_.at(k, j);
    v.at(s, j) = acc;
  }
  return from_parts(sys_, std::move(m), std::move(v));
}

Elem Elem::pow(long n) const {
  Elem base = n >= 0 ? *this : inverse();
  unsigned long k = n >= 0 ? static_cast<unsigned long>(n) : static_cast<unsigned long>(-n);
  Elem acc = identity(sys_);
  while (k) {
    if (k & 1) acc = acc * base;
    base = base * base;
    k >>= 1;
  }
  return acc;
}

bool Elem::is_identity() const {
  std::size_t r = sys_->rank();
  for (std::size_t i = 0; i < r; ++i)
    for (std::size_t j = 0; j < r; ++j)
      if (mat_.at(i, j) != (i == j ? 1 : 0)) return false;
  return true;
}

bool has_left_descent(const Elem& w, std::size_t s) {
  return vec_negative_root(w.inverse_matrix().column(s));
}

bool has_right_descent(const Elem& w, std::size_t s) {
  return vec_negative_root(w.matrix().column(s));
}

std::vector<std::size_t> left_descents(const Elem& w) {
  std::vector<std::size_t> out;
  for (std::size_t s = 0; s < w.system()->rank(); ++s)
    if (has_left_descent(w, s)) out.push_back(s);
  return out;
}

std::vector<std::size_t> right_descents(const Elem& w) {
  std::vector<std::size_t> out;
  for (std::size_t s = 0; s < w.system()->rank(); ++s)
    if (has_right_descent(w, s)) out.push_back(s);
  return out;
}

Word reduced_word(const Elem& w) {
  {
    auto& cache = w.system()->cache();
    std::scoped_lock lock(cache.mu);
    auto it = cache.index.find(w.matrix());
    if (it != cache.index.end()) return cache.nodes[it->second].word;
  }
  Word out;
  Elem cur = w;
  while (!cur.is_identity()) {
    std::size_t r = cur.system()->rank();
    std::size_t s = r;
    for (std::size_t t = 0; t < r; ++t)
      if (has_left_descent(cur, t)) {
        s = t;
        break;
      }
    if (s == r) fail(errc::internal, "element without descent");
    out.letters.push_back(s);
    cur = cur.mul_gen_left(s);
  }
  return out;
}

std::size_t length(const Elem& w) {
  {
    auto& cache = w.system()->cache();
    std::scoped_lock lock(cache.mu);
    auto it = cache.index.find(w.matrix());
    if (it != cache.index.end()) return cache.nodes[it->second].len;
  }
  std::size_t n = 0;
  Elem cur = w;
  while (!cur.is_identity()) {
    std::size_t r = cur.system()->rank();
    std::size_t s = r;
    for (std::size_t t = 0; t < r; ++t)
      if (has_left_descent(cur, t)) {
        s = t;
        break;
      }
    if (s == r) fail(errc::internal, "element without descent");
    cur = cur.mul_gen_left(s);
    ++n;
  }
  return n;
}

Word parse_word(const SystemPtr& sys, std::string_view text) {
  Word w;
  std::string token;
  std::istringstream in{std::string(text)};
  while (in >> token) {
    if (token == "1" || token == "e") continue;
    w.letters.push_back(sys->generator_index(token));
  }
  return w;
}

std::string word_str(const SystemPtr& sys, const Word& w) {
  if (w.letters.empty()) return "1";
  std::string out;
  for (std::size_t i = 0; i < w.letters.size(); ++i) {
    if (i) out += " ";
    out += sys->generators[w.letters[i]];
  }
  return out;
}

// ---------------------------------------------------------------------------
// Root vectors

RootVec::RootVec(SystemPtr sys, IntVec coords) : sys_(std::move(sys)), v_(std::move(coords)) {
  std::size_t r = sys_->rank();
  if (v_.size() != r) fail(errc::not_a_root_vector, "wrong dimension");
  if (vec_is_zero(v_)) fail(errc::not_a_root_vector, "zero vector");
  if (!vec_sign_pure(v_)) fail(errc::not_a_root_vector, "mixed signs: " + vec_str(v_));

  IntVec b = vec_nonneg(v_) ? v_ : vec_neg(v_);
  const auto& C = sys_->cartan;
  for (;;) {
    // simple?
    std::size_t nonzero = r, count = 0;
    for (std::size_t i = 0; i < r; ++i)
      if (b[i] != 0) {
        nonzero = i;
        ++count;
      }
    if (count == 1 && b[nonzero] == 1) {
      simple_ = nonzero;
      break;
    }
    std::size_t s = r;
    Int pairing;
    for (std::size_t t = 0; t < r; ++t) {
      Int p = 0;
      for (std::size_t j = 0; j < r; ++j)
        if (C[t][j] != 0) p += C[t][j] * b[j];
      if (p > 0) {
        s = t;
        pairing = p;
        break;
      }
    }
    if (s == r) fail(errc::not_a_root_vector, "not in the orbit of a simple root: " + vec_str(v_));
    b[s] -= pairing;
    if (!vec_positive_root(b))
      fail(errc::not_a_root_vector, "not in the orbit of a simple root: " + vec_str(v_));
    to_simple_.letters.push_back(s);
  }
}

RootVec RootVec::simple(const SystemPtr& sys, std::size_t s) {
  IntVec v(sys->rank(), 0);
  v[s] = 1;
  return RootVec(sys, std::move(v));
}

RootVec RootVec::negated() const { return RootVec(sys_, vec_neg(v_)); }

bool RootVec::contains(const Elem& w) const {
  if (w.system() != sys_) fail(errc::system_mismatch, "root and chamber from different systems");
  return vec_positive_root(w.act_inverse(v_));
}

Elem RootVec::reflection() const {
  Elem v = Elem::from_word(sys_, to_simple_);
  return v * Elem::generator(sys_, simple_) * v.inverse();
}

int RootVec::cmp(const RootVec& o) const { return vec_cmp(v_, o.v_); }

RootVec act_on_root(const Elem& w, const RootVec& beta) {
  if (w.system() != beta.system())
    fail(errc::system_mismatch, "element and root from different systems");
  return RootVec(w.system(), w.act(beta.coords()));
}

bool root_contains(const RootVec& beta, const Elem& w) { return beta.contains(w); }

// ---------------------------------------------------------------------------
// Diagram automorphisms

DiagramAutomorphism DiagramAutomorphism::create(SystemPtr sys, std::vector<std::size_t> perm) {
  std::size_t r = sys->rank();
  if (perm.size() != r) fail(errc::not_diagram_compatible, "permutation has wrong size");
  std::vector<bool> seen(r, false);
  for (auto p : perm) {
    if (p >= r || seen[p]) fail(errc::not_diagram_compatible, "not a permutation of the generators");
    seen[p] = true;
  }
  for (std::size_t s = 0; s < r; ++s)
    for (std::size_t t = 0; t < r; ++t)
      if (sys->bond(perm[s], perm[t]) != sys->bond(s, t))
        fail(errc::not_diagram_compatible,
             "bond {" + sys->generators[s] + "," + sys->generators[t] + "} is not preserved");
  DiagramAutomorphism a;
  a.sys_ = std::move(sys);
  a.perm_ = std::move(perm);
  a.preserves_cartan_ = true;
  for (std::size_t s = 0; s < r && a.preserves_cartan_; ++s)
    for (std::size_t t = 0; t < r; ++t)
      if (a.sys_->cartan[a.perm_[s]][a.perm_[t]] != a.sys_->cartan[s][t]) {
        a.preserves_cartan_ = false;
        break;
      }
  return a;
}

DiagramAutomorphism DiagramAutomorphism::identity(SystemPtr sys) {
  std::vector<std::size_t> perm(sys->rank());
  std::iota(perm.begin(), perm.end(), 0);
  return create(std::move(sys), std::move(perm));
}

bool DiagramAutomorphism::is_identity() const {
  for (std::size_t s = 0; s < perm_.size(); ++s)
    if (perm_[s] != s) return false;
  return true;
}

Word DiagramAutomorphism::apply(const Word& w) const {
  Word out;
  out.letters.reserve(w.letters.size());
  for (auto s : w.letters) out.letters.push_back(perm_[s]);
  return out;
}

Elem DiagramAutomorphism::apply(const Elem& w) const {
  if (w.system() != sys_) fail(errc::system_mismatch, "element from a different system");
  return Elem::from_word(sys_, apply(reduced_word(w)));
}

DiagramAutomorphism extend_diagram_automorphism(const SystemPtr& sys,
                                                std::vector<std::size_t> perm) {
  return DiagramAutomorphism::create(sys, std::move(perm));
}

} // namespace flatbldg
