#include "flatbldg/flat.hpp"

#include <algorithm>
#include <map>
#include <set>

namespace flatbldg {

// ---------------------------------------------------------------------------
// Thickness

Thickness::Thickness(SystemPtr sys, IntVec q) : sys_(std::move(sys)), q_(std::move(q)) {
  std::size_t r = sys_->rank();
  if (q_.size() != r) fail(errc::invalid_thickness, "expected one value per generator");
  for (std::size_t s = 0; s < r; ++s)
    if (q_[s] < 2)
      fail(errc::invalid_thickness, "q(" + sys_->generators[s] + ") must be >= 2");
  for (std::size_t s = 0; s < r; ++s)
    for (std::size_t t = s + 1; t < r; ++t) {
      int b = sys_->bond(s, t);
      if (b != infinite_bond && b % 2 == 1 && q_[s] != q_[t])
        fail(errc::invalid_thickness, "odd bond {" + sys_->generators[s] + "," +
                                          sys_->generators[t] + "} (m = " + std::to_string(b) +
                                          ") forces q(" + sys_->generators[s] + ") = q(" +
                                          sys_->generators[t] + ")");
    }
}

Thickness Thickness::uniform(const SystemPtr& sys, const Int& q) {
  return Thickness(sys, IntVec(sys->rank(), q));
}

bool Thickness::sigma_compatible(const DiagramAutomorphism& sigma) const {
  for (std::size_t s = 0; s < q_.size(); ++s)
    if (q_[sigma.map(s)] != q_[s]) return false;
  return true;
}

Int q_length(const Elem& w, const Thickness& q) {
  if (w.system() != q.system()) fail(errc::system_mismatch, "thickness for a different system");
  Int out = 1;
  for (auto s : reduced_word(w).letters) out *= q.q(s);
  return out;
}

Int wall_thickness(const RootVec& wall, const Thickness& q) {
  if (wall.system() != q.system()) fail(errc::system_mismatch, "thickness for a different system");
  return q.q(wall.panel_type());
}

// ---------------------------------------------------------------------------
// Automorphisms of Sigma and stabilizer indices

Elem BuildingAuto::apply(const Elem& x) const {
  return twist ? w * twist->apply(x) : w * x;
}

Elem BuildingAuto::apply_power(const Elem& x, unsigned n) const {
  Elem out = x;
  for (unsigned i = 0; i < n; ++i) out = apply(out);
  return out;
}

bool BuildingAuto::is_translation() const {
  const SystemPtr& sys = w.system();
  bool twist_trivial = !twist || twist->is_identity();
  if (!sys->is_affine()) return twist_trivial && w.is_identity();
  if (twist_trivial) {
    // w(alpha_s) - alpha_s must be a multiple of delta for every s
    const IntVec& delta = sys->delta();
    for (std::size_t s = 0; s < sys->rank(); ++s) {
      IntVec e(sys->rank(), 0);
      e[s] = 1;
      IntVec img = w.act(e);
      Int k;
      bool have = false;
      for (std::size_t i = 0; i < img.size(); ++i) {
        Int diff = img[i] - e[i];
        Int q, r;
        mpz_fdiv_qr(q.get_mpz_t(), r.get_mpz_t(), diff.get_mpz_t(), delta[i].get_mpz_t());
        if (r != 0) return false;
        if (!have) {
          k = q;
          have = true;
        } else if (k != q) {
          return false;
        }
      }
    }
    return true;
  }
  if (!twist->preserves_cartan()) return false; // the twist does not act linearly here
  // combined linear action: beta -> w(P_sigma beta)
  const IntVec& delta = sys->delta();
  for (std::size_t s = 0; s < sys->rank(); ++s) {
    IntVec e(sys->rank(), 0);
    e[twist->map(s)] = 1;
    IntVec img = w.act(e);
    img[s] -= 1;
    Int k;
    bool have = false;
    for (std::size_t i = 0; i < img.size(); ++i) {
      Int q, r;
      mpz_fdiv_qr(q.get_mpz_t(), r.get_mpz_t(), img[i].get_mpz_t(), delta[i].get_mpz_t());
      if (r != 0) return false;
      if (!have) {
        k = q;
        have = true;
      } else if (k != q) {
        return false;
      }
    }
  }
  return true;
}

Int stabilizer_index(const Elem& c, const BuildingAuto& g, unsigned n, const Thickness& q) {
  check_same_system(c, g.w);
  if (g.twist && !q.sigma_compatible(*g.twist))
    fail(errc::thickness_sigma_mismatch, "q is not constant on the twist orbits");
  return q_length(weyl_distance(c, g.apply_power(c, n)), q);
}

TidyReport tidy_check(const Elem& c, const BuildingAuto& g, unsigned N, const Thickness& q) {
  TidyReport rep;
  rep.element = canonical_word(g.w);
  if (g.twist && !g.twist->is_identity()) {
    rep.element += " @ (";
    for (std::size_t s = 0; s < g.twist->perm().size(); ++s) {
      if (s) rep.element += ",";
      rep.element += c.system()->generators[s] + "->" +
                     c.system()->generators[g.twist->map(s)];
    }
    rep.element += ")";
  }
  rep.is_translation = g.is_translation();
  rep.depth = N;
  rep.all_geometric = true;
  Int base = stabilizer_index(c, g, 1, q);
  for (unsigned n = 1; n <= N; ++n) {
    Int idx = stabilizer_index(c, g, n, q);
    Int expect;
    mpz_pow_ui(expect.get_mpz_t(), base.get_mpz_t(), n);
    bool ok = idx == expect;
    rep.indices.push_back(std::move(idx));
    rep.geometric.push_back(ok);
    if (!ok) rep.all_geometric = false;
  }
  rep.verdict = rep.is_translation ? TidyReport::Verdict::tidy : TidyReport::Verdict::not_claimed;
  return rep;
}

// ---------------------------------------------------------------------------
// Eigenfactor labels

int EigenfactorLabel::cmp(const EigenfactorLabel& o) const {
  if (kind != o.kind) return kind == Kind::fix_apartment ? -1 : 1;
  if (kind == Kind::fix_apartment) return 0;
  return root->cmp(*o.root);
}

std::string EigenfactorLabel::str() const {
  return kind == Kind::fix_apartment ? "Fix(apartment)" : "Fix" + root->str();
}

EigenfactorLabel eigenfactor_label(const SectorRef& sector, const Gallery& gallery,
                                   const std::vector<int>& signs) {
  const Elem& c = sector.apex();
  if (gallery.start != c) fail(errc::malformed_spec, "gallery must start at the apex");
  if (signs.size() != gallery.word.size())
    fail(errc::malformed_spec, "need one sign per gallery step");
  for (int e : signs)
    if (e != 1 && e != -1) fail(errc::malformed_spec, "signs must be +-1");
  if (!is_minimal(gallery, MinimalityMode::by_length).minimal)
    fail(errc::gallery_not_minimal, "gallery is not minimal");
  const Gem& R = sector.gem();
  Elem d = gallery.end();
  if (!R.contains(d) || R.opposite(c) != d)
    fail(errc::not_opposite, "gallery must end at the chamber opposite the apex in the gem");

  std::vector<Elem> chain = gallery.chambers();
  std::vector<Elem> picked; // d_1 .. d_k
  for (std::size_t i = 1; i < chain.size(); ++i) {
    if (!R.contains(chain[i])) fail(errc::internal, "minimal gallery left the gem");
    picked.push_back(signs[i - 1] > 0 ? chain[i] : R.opposite(chain[i]));
  }

  // At most one root of Phi_R can contain the picked set: its hull in the
  // gem is the full trace of that root.
  std::optional<RootVec> found;
  for (const auto& gamma : roots_cutting_gem(R)) {
    bool all = true;
    for (const auto& x : picked)
      if (!gamma.contains(x)) {
        all = false;
        break;
      }
    if (!all) continue;
    if (found) fail(errc::internal, "two cutting roots contain the picked chamber set");
    found = gamma;
  }
  if (!found) return EigenfactorLabel{EigenfactorLabel::Kind::fix_apartment, std::nullopt};
  return EigenfactorLabel{EigenfactorLabel::Kind::fix_root, pushed_root(*found, c)};
}

std::vector<int> realizing_signs(const SectorRef& sector, const Gallery& gallery,
                                 const RootVec& gamma) {
  std::vector<Elem> chain = gallery.chambers();
  std::vector<int> signs;
  for (std::size_t i = 1; i < chain.size(); ++i)
    signs.push_back(gamma.contains(chain[i]) ? 1 : -1);
  return signs;
}

EigenfactorCensus eigenfactor_census(const SectorRef& sector) {
  const Elem& c = sector.apex();
  const Gem& R = sector.gem();
  Gallery gallery{c, reduced_word(weyl_distance(c, R.opposite(c)))};
  std::size_t k = gallery.word.size();
  if (k > 24) fail(errc::gem_too_large, "sign sweep of size 2^" + std::to_string(k));

  EigenfactorCensus census;
  std::set<EigenfactorLabel> distinct;
  distinct.insert(EigenfactorLabel{EigenfactorLabel::Kind::fix_apartment, std::nullopt});
  for (std::size_t mask = 0; mask < (std::size_t(1) << k); ++mask) {
    std::vector<int> signs(k);
    for (std::size_t i = 0; i < k; ++i) signs[i] = (mask >> i) & 1 ? 1 : -1;
    EigenfactorLabel label = eigenfactor_label(sector, gallery, signs);
    distinct.insert(label);
    census.sign_vectors.push_back(std::move(signs));
    census.labels.push_back(std::move(label));
  }
  census.distinct.assign(distinct.begin(), distinct.end());
  return census;
}

// ---------------------------------------------------------------------------
// The root system of the flat group

Int FlatRoot::rho(const TranslationElem& t) const {
  Int offset = class_offset(gamma_prime, t);
  Int q, r;
  mpz_fdiv_qr(q.get_mpz_t(), r.get_mpz_t(), offset.get_mpz_t(), m.get_mpz_t());
  if (r != 0) fail(errc::internal, "class offset not divisible by the normalization");
  return -q;
}

std::vector<FlatRoot> flat_root_system(const SectorRef& sector, const Thickness& q) {
  const SystemPtr& sys = sector.apex().system();
  if (q.system() != sys) fail(errc::system_mismatch, "thickness for a different system");
  auto basis = translation_basis(sys);
  const IntVec& delta = sys->delta();

  std::vector<FlatRoot> out;
  for (const auto& gamma : roots_cutting_gem(sector.gem())) {
    RootVec gp = pushed_root(gamma, sector.apex());
    IntVec offsets(basis.size());
    Int m = 0;
    for (std::size_t j = 0; j < basis.size(); ++j) {
      offsets[j] = class_offset(gp, basis[j]);
      Int a = abs(offsets[j]);
      mpz_gcd(m.get_mpz_t(), m.get_mpz_t(), a.get_mpz_t());
    }
    if (m == 0) fail(errc::internal, "parallel class fixed by the whole lattice");
    IntVec rho(basis.size());
    for (std::size_t j = 0; j < basis.size(); ++j) rho[j] = -offsets[j] / m;

    // q-product over one fundamental period of walls in the class of gamma'
    Int s = 1;
    IntVec v = gp.coords();
    if (!m.fits_ulong_p()) fail(errc::internal, "normalization overflow");
    for (unsigned long j = 0; j < m.get_ui(); ++j) {
      s *= wall_thickness(RootVec(sys, v), q);
      for (std::size_t i = 0; i < v.size(); ++i) v[i] += delta[i];
    }
    out.push_back(FlatRoot{gamma, std::move(gp), std::move(m), std::move(s), std::move(rho)});
  }

  for (std::size_t i = 0; i < out.size(); ++i)
    for (std::size_t j = i + 1; j < out.size(); ++j)
      if (out[i].rho_basis == out[j].rho_basis)
        fail(errc::internal, "flat roots " + out[i].gamma.str() + " and " + out[j].gamma.str() +
                                 " give the same functional");
  return out;
}

ScaleReport scale_with_factorization(const TranslationElem& t, const SectorRef& sector,
                                     const Thickness& q) {
  const SystemPtr& sys = sector.apex().system();
  if (t.elem.system() != sys) fail(errc::system_mismatch, "translation for a different system");

  ScaleReport rep;
  rep.translation = canonical_word(t.elem);
  rep.scale = q_length(weyl_distance(sector.apex(), t.elem * sector.apex()), q);

  auto roots = flat_root_system(sector, q);
  std::map<IntVec, const FlatRoot*> by_gamma;
  for (const auto& fr : roots) by_gamma.emplace(fr.gamma.coords(), &fr);

  Int product = 1;
  for (const auto& fr : roots) {
    IntVec neg = vec_neg(fr.gamma.coords());
    if (vec_cmp(fr.gamma.coords(), neg) < 0) continue; // visit each pair once
    auto it = by_gamma.find(neg);
    if (it == by_gamma.end()) fail(errc::internal, "Phi_R is not closed under negation");
    const FlatRoot& partner = *it->second;
    Int e1 = abs(fr.rho(t)), e2 = abs(partner.rho(t));
    if (e1 != e2 || fr.s != partner.s)
      fail(errc::internal, "opposite flat roots disagree on " + fr.gamma.str());
    Int term;
    if (!e1.fits_ulong_p()) fail(errc::internal, "exponent overflow");
    mpz_pow_ui(term.get_mpz_t(), fr.s.get_mpz_t(), e1.get_ui());
    product *= term;
    rep.factors.push_back(ScaleFactor{fr.gamma, fr.s, std::move(e1)});
  }

  if (product != rep.scale)
    fail(errc::factorization_mismatch,
         "q_length = " + rep.scale.get_str() + " but the pair factorization gives " +
             product.get_str() + " for translation '" + rep.translation + "'");
  return rep;
}

bool operator==(const ScaleFactor& a, const ScaleFactor& b) {
  return a.pair_root == b.pair_root && a.base == b.base && a.exponent == b.exponent;
}

bool operator==(const ScaleReport& a, const ScaleReport& b) {
  return a.translation == b.translation && a.scale == b.scale && a.factors == b.factors;
}

bool operator==(const FlatRoot& a, const FlatRoot& b) {
  return a.gamma == b.gamma && a.gamma_prime == b.gamma_prime && a.m == b.m && a.s == b.s &&
         a.rho_basis == b.rho_basis;
}

} // namespace flatbldg
