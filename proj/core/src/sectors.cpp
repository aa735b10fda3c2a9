#include "flatbldg/sectors.hpp"

#include <algorithm>
#include <map>
#include <set>

#include "system_cache.hpp"

namespace flatbldg {

namespace {

void require_affine(const SystemPtr& sys) {
  if (!sys->is_affine())
    fail(errc::not_affine, "operation needs a connected affine system, got '" + sys->type_name + "'");
}

IntVec basis_vec(std::size_t r, std::size_t s) {
  IntVec v(r, 0);
  v[s] = 1;
  return v;
}

} // namespace

// ---------------------------------------------------------------------------
// Gems

Gem::Gem(SystemPtr sys, std::size_t special_vertex, Elem base)
    : o_(special_vertex), base_(std::move(base)) {
  require_affine(sys);
  if (base_.system() != sys) fail(errc::system_mismatch, "gem base from a different system");
  const auto& specials = sys->affine->special_vertices;
  if (std::find(specials.begin(), specials.end(), o_) == specials.end())
    fail(errc::not_special_vertex,
         "vertex '" + (o_ < sys->rank() ? sys->generators[o_] : std::to_string(o_)) +
             "' is not special in " + sys->type_name);
  for (std::size_t s = 0; s < sys->rank(); ++s)
    if (s != o_) types_.push_back(s);
  longest_ = longest_element(sys, types_);
  chambers_ = ResidueRef(types_, base_).chambers(sys->gem_size_limit);
}

bool Gem::contains(const Elem& x) const { return residue().contains(x); }

Elem Gem::opposite(const Elem& c) const {
  if (!contains(c)) fail(errc::malformed_spec, "chamber is not in the gem");
  return c * longest_;
}

Gem make_gem(const SystemPtr& sys, std::size_t special_vertex, const Elem& base) {
  return Gem(sys, special_vertex, base);
}

std::vector<Gem> gems(const SystemPtr& sys, const Elem& base) {
  require_affine(sys);
  std::vector<Gem> out;
  for (auto o : sys->affine->special_vertices) out.emplace_back(sys, o, base);
  return out;
}

// ---------------------------------------------------------------------------
// Sectors

SectorRef::SectorRef(Gem gem, Elem apex) : gem_(std::move(gem)), apex_(std::move(apex)) {
  if (!gem_.contains(apex_)) fail(errc::malformed_spec, "apex chamber is not in the gem");
  // [R,c]: the roots separating the apex from its neighbours inside the gem
  for (auto s : gem_.types())
    boundary_.emplace_back(apex_.system(), apex_.act(basis_vec(apex_.system()->rank(), s)));
  std::sort(boundary_.begin(), boundary_.end());
}

bool sector_membership(const SectorRef& sector, const Elem& d, SectorMode mode) {
  check_same_system(sector.apex(), d);
  if (mode == SectorMode::projection)
    return proj(sector.gem().residue(), d) == sector.apex();
  for (const auto& alpha : sector.boundary_roots())
    if (!alpha.contains(d)) return false;
  return true;
}

// ---------------------------------------------------------------------------
// Parallel classes

Int parallel_dist(const RootVec& beta1, const RootVec& beta2) {
  if (beta1.system() != beta2.system())
    fail(errc::system_mismatch, "roots from different systems");
  const SystemPtr& sys = beta1.system();
  require_affine(sys);
  const IntVec& delta = sys->delta();
  const IntVec& a = beta1.coords();
  const IntVec& b = beta2.coords();
  // beta2 = beta1 + k * delta, componentwise
  Int k;
  bool have_k = false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    Int diff = b[i] - a[i];
    Int q, r;
    mpz_fdiv_qr(q.get_mpz_t(), r.get_mpz_t(), diff.get_mpz_t(), delta[i].get_mpz_t());
    if (r != 0) fail(errc::not_parallel, beta1.str() + " and " + beta2.str() + " are not parallel");
    if (!have_k) {
      k = q;
      have_k = true;
    } else if (k != q) {
      fail(errc::not_parallel, beta1.str() + " and " + beta2.str() + " are not parallel");
    }
  }
  return k;
}

// ---------------------------------------------------------------------------
// Translations

namespace {

// Offsets n_s with w(alpha_s) = alpha_s + n_s * delta, or nothing.
std::optional<IntVec> translation_offsets(const Elem& w) {
  const SystemPtr& sys = w.system();
  const IntVec& delta = sys->delta();
  std::size_t r = sys->rank();
  IntVec offsets(r);
  for (std::size_t s = 0; s < r; ++s) {
    IntVec img = w.act(basis_vec(r, s));
    Int k;
    bool have_k = false;
    for (std::size_t i = 0; i < r; ++i) {
      Int diff = img[i] - (i == s ? 1 : 0);
      Int q, rem;
      mpz_fdiv_qr(q.get_mpz_t(), rem.get_mpz_t(), diff.get_mpz_t(), delta[i].get_mpz_t());
      if (rem != 0) return std::nullopt;
      if (!have_k) {
        k = q;
        have_k = true;
      } else if (k != q) {
        return std::nullopt;
      }
    }
    offsets[s] = k;
  }
  return offsets;
}

// Exact solve of basis_offsets * coords = offsets over the integers.
IntVec solve_lattice_coords(const std::vector<IntVec>& basis_offsets, const IntVec& offsets) {
  std::size_t rows = offsets.size(), cols = basis_offsets.size();
  std::vector<std::vector<mpq_class>> a(rows, std::vector<mpq_class>(cols + 1));
  for (std::size_t i = 0; i < rows; ++i) {
    for (std::size_t j = 0; j < cols; ++j) a[i][j] = mpq_class(basis_offsets[j][i]);
    a[i][cols] = mpq_class(offsets[i]);
  }
  std::vector<long> pivot_of_col(cols, -1);
  std::size_t row = 0;
  for (std::size_t col = 0; col < cols && row < rows; ++col) {
    std::size_t p = row;
    while (p < rows && a[p][col] == 0) ++p;
    if (p == rows) continue;
    std::swap(a[p], a[row]);
    mpq_class inv = 1 / a[row][col];
    for (std::size_t j = 0; j <= cols; ++j) a[row][j] *= inv;
    for (std::size_t i = 0; i < rows; ++i) {
      if (i == row || a[i][col] == 0) continue;
      mpq_class f = a[i][col];
      for (std::size_t j = 0; j <= cols; ++j) a[i][j] -= f * a[row][j];
    }
    pivot_of_col[col] = static_cast<long>(row);
    ++row;
  }
  IntVec coords(cols);
  for (std::size_t col = 0; col < cols; ++col) {
    if (pivot_of_col[col] < 0) fail(errc::internal, "translation basis is degenerate");
    mpq_class v = a[pivot_of_col[col]][cols];
    v.canonicalize();
    if (v.get_den() != 1) fail(errc::internal, "translation outside the lattice");
    coords[col] = v.get_num();
  }
  for (std::size_t i = row; i < rows; ++i)
    if (a[i][cols] != 0) fail(errc::internal, "translation outside the lattice");
  return coords;
}

const std::vector<detail::TransData>& basis_data(const SystemPtr& sys) {
  require_affine(sys);
  auto& cache = sys->cache();
  std::scoped_lock lock(cache.mu);
  if (!cache.translation_basis) {
    std::size_t r = sys->rank();
    std::size_t o0 = sys->affine->special_vertices.front();
    const IntVec& delta = sys->delta();
    std::vector<detail::TransData> basis;
    for (std::size_t s = 0; s < r; ++s) {
      if (s == o0) continue;
      // product of the reflections in two adjacent parallel walls of the
      // class of alpha_s
      IntVec shifted = basis_vec(r, s);
      for (std::size_t i = 0; i < r; ++i) shifted[i] += delta[i];
      Elem t = RootVec(sys, shifted).reflection() * Elem::generator(sys, s);
      auto offsets = translation_offsets(t);
      if (!offsets) fail(errc::internal, "wall-pair product is not a translation");
      basis.push_back(detail::TransData{t.matrix(), t.inverse_matrix(), std::move(*offsets)});
    }
    cache.translation_basis = std::move(basis);
  }
  return *cache.translation_basis;
}

} // namespace

std::optional<TranslationElem> translation_test(const Elem& w) {
  require_affine(w.system());
  auto offsets = translation_offsets(w);
  if (!offsets) return std::nullopt;
  const auto& basis = basis_data(w.system());
  std::vector<IntVec> basis_offsets;
  for (const auto& b : basis) basis_offsets.push_back(b.offsets);
  IntVec coords = solve_lattice_coords(basis_offsets, *offsets);
  return TranslationElem{w, std::move(*offsets), std::move(coords)};
}

std::vector<TranslationElem> translation_basis(const SystemPtr& sys) {
  const auto& data = basis_data(sys);
  std::vector<TranslationElem> out;
  out.reserve(data.size());
  for (std::size_t j = 0; j < data.size(); ++j) {
    IntVec coords(data.size(), 0);
    coords[j] = 1;
    out.push_back(TranslationElem{Elem::from_parts(sys, data[j].mat, data[j].inv),
                                  data[j].offsets, std::move(coords)});
  }
  return out;
}

TranslationElem translation_from_coords(const SystemPtr& sys, const IntVec& coords) {
  const auto& basis = translation_basis(sys);
  if (coords.size() != basis.size())
    fail(errc::malformed_spec, "expected " + std::to_string(basis.size()) + " lattice coordinates");
  Elem t = Elem::identity(sys);
  IntVec offsets(sys->rank(), 0);
  for (std::size_t j = 0; j < basis.size(); ++j) {
    if (coords[j] == 0) continue;
    if (!coords[j].fits_slong_p()) fail(errc::malformed_spec, "lattice coordinate too large");
    t = t * basis[j].elem.pow(coords[j].get_si());
    for (std::size_t i = 0; i < offsets.size(); ++i)
      offsets[i] += coords[j] * basis[j].wall_offsets[i];
  }
  return TranslationElem{std::move(t), std::move(offsets), coords};
}

std::vector<TranslationElem> enumerate_translations(const SystemPtr& sys, long bound) {
  if (bound < 0) fail(errc::malformed_spec, "bound must be >= 0");
  const auto& basis = translation_basis(sys);
  std::size_t n = basis.size();
  std::vector<TranslationElem> out;
  IntVec coords(n, -bound);
  for (;;) {
    out.push_back(translation_from_coords(sys, coords));
    std::size_t j = 0;
    while (j < n && coords[j] == bound) coords[j++] = -bound;
    if (j == n) break;
    coords[j] += 1;
  }
  return out;
}

long coxeter_number(const SystemPtr& sys) {
  require_affine(sys);
  // h = |Phi_R| / (rank - 1), read off the classified type
  char letter = sys->type_name.empty() ? '?' : sys->type_name[0];
  long n = static_cast<long>(sys->rank()) - 1;
  switch (letter) {
    case 'A': return n + 1;
    case 'B':
    case 'C': return 2 * n;
    case 'D': return 2 * n - 2;
    case 'E': return n == 6 ? 12 : (n == 7 ? 18 : 30);
    case 'F': return 12;
    case 'G': return 6;
    default: fail(errc::internal, "unclassified affine system");
  }
}

Int class_offset(const RootVec& beta, const TranslationElem& t) {
  return parallel_dist(beta, act_on_root(t.elem, beta));
}

TranslationElem fundamental_translation(const SectorRef& sector, const RootVec& alpha,
                                        long search_bound) {
  const SystemPtr& sys = sector.apex().system();
  const auto& boundary = sector.boundary_roots();
  std::size_t which = boundary.size();
  for (std::size_t i = 0; i < boundary.size(); ++i)
    if (boundary[i] == alpha) which = i;
  if (which == boundary.size())
    fail(errc::malformed_spec, "alpha is not a boundary root of the sector");

  if (search_bound < 0) search_bound = 2 * coxeter_number(sys);
  const auto& basis = translation_basis(sys);
  std::size_t n = basis.size();

  // offsets are linear in the lattice coordinates
  std::vector<std::vector<Int>> off(boundary.size(), std::vector<Int>(n));
  for (std::size_t i = 0; i < boundary.size(); ++i)
    for (std::size_t j = 0; j < n; ++j) off[i][j] = class_offset(boundary[i], basis[j]);

  std::vector<long> coords(n, -search_bound);
  std::optional<std::vector<long>> best;
  Int best_offset;
  for (;;) {
    Int alpha_offset = 0;
    bool ok = true;
    for (std::size_t i = 0; i < boundary.size() && ok; ++i) {
      Int o = 0;
      for (std::size_t j = 0; j < n; ++j)
        if (coords[j] != 0) o += off[i][j] * coords[j];
      if (i == which) {
        alpha_offset = o;
        if (o >= 0) ok = false; // must shrink alpha
      } else if (o != 0) {
        ok = false; // must fix the other boundary roots
      }
    }
    if (ok && (!best || alpha_offset > best_offset)) {
      best = coords;
      best_offset = alpha_offset;
    }
    std::size_t j = 0;
    while (j < n && coords[j] == search_bound) coords[j++] = -search_bound;
    if (j == n) break;
    coords[j] += 1;
  }
  if (!best)
    fail(errc::search_bound_exceeded,
         "no fundamental translation within lattice bound " + std::to_string(search_bound) +
             "; raise the bound and retry");
  IntVec c(n);
  for (std::size_t j = 0; j < n; ++j) c[j] = (*best)[j];
  return translation_from_coords(sys, c);
}

TranslationElem sector_translation(const SectorRef& sector, long search_bound) {
  const SystemPtr& sys = sector.apex().system();
  Elem t = Elem::identity(sys);
  IntVec offsets(sys->rank(), 0);
  IntVec coords(translation_basis(sys).size(), 0);
  for (const auto& alpha : sector.boundary_roots()) {
    TranslationElem f = fundamental_translation(sector, alpha, search_bound);
    t = t * f.elem;
    for (std::size_t i = 0; i < offsets.size(); ++i) offsets[i] += f.wall_offsets[i];
    for (std::size_t j = 0; j < coords.size(); ++j) coords[j] += f.lattice_coords[j];
  }
  return TranslationElem{std::move(t), std::move(offsets), std::move(coords)};
}

std::vector<RootVec> roots_cutting_gem(const Gem& R) {
  const SystemPtr& sys = R.base().system();
  std::set<IntVec> vecs;
  for (const auto& x : R.chambers())
    for (auto s : R.types()) vecs.insert(x.act(basis_vec(sys->rank(), s)));
  std::vector<RootVec> out;
  out.reserve(vecs.size());
  for (const auto& v : vecs) out.emplace_back(sys, v);
  return out;
}

RootVec pushed_root(const RootVec& gamma, const Elem& c) {
  if (gamma.system() != c.system()) fail(errc::system_mismatch, "root and chamber mismatch");
  const SystemPtr& sys = c.system();
  require_affine(sys);
  const IntVec& delta = sys->delta();
  IntVec u = c.act_inverse(gamma.coords());
  Int k = 0;
  for (std::size_t i = 0; i < u.size(); ++i) {
    if (u[i] >= 0) continue;
    Int need;
    Int nu = -u[i];
    mpz_cdiv_q(need.get_mpz_t(), nu.get_mpz_t(), delta[i].get_mpz_t());
    if (need > k) k = need;
  }
  IntVec v = gamma.coords();
  for (std::size_t i = 0; i < v.size(); ++i) v[i] += k * delta[i];
  return RootVec(sys, std::move(v));
}

} // namespace flatbldg
