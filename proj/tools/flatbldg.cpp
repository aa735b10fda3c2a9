// flatbldg: exact computations in affine Coxeter complexes and the
// flat-group calculus of regular locally finite buildings.
//
// Subcommands: info, roots, hull, sector, tidy, flat-roots, scale.
// Output formats: table (default), json, csv. JSON reports follow
//   {"command":…, "system":…, "q":…, "seed":…, "result":…,
//    "checks":[{"name":…, "pass":…, "witness":…}]}
// Exit codes: 0 success, 1 usage error, 2 verification failure.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include <flatbldg/flat.hpp>

using namespace flatbldg;
using nlohmann::json;

namespace {

struct RunConfig {
  std::string type_spec;
  std::string q_spec;
  std::string format = "table";
  unsigned long seed = 0;
  bool use_cache = false;
  std::size_t gem_limit = 1152;
};

struct Check {
  std::string name;
  bool pass;
  std::string witness;
};

json check_to_json(const Check& c) {
  json j;
  j["name"] = c.name;
  j["pass"] = c.pass;
  j["witness"] = c.witness;
  return j;
}

json system_to_json(const SystemPtr& sys) {
  json j;
  j["type"] = sys->type_name;
  j["kind"] = kind_name(sys->kind);
  j["rank"] = sys->rank();
  j["generators"] = sys->generators;
  if (sys->is_affine()) {
    json delta = json::array();
    for (const auto& e : sys->delta()) delta.push_back(e.get_str());
    j["delta"] = delta;
    json sp = json::array();
    for (auto o : sys->affine->special_vertices) sp.push_back(sys->generators[o]);
    j["special_vertices"] = sp;
  }
  return j;
}

Thickness parse_thickness(const SystemPtr& sys, const std::string& spec) {
  std::vector<std::string> parts;
  std::string cur;
  for (char ch : spec) {
    if (ch == ',') {
      parts.push_back(cur);
      cur.clear();
    } else {
      cur += ch;
    }
  }
  parts.push_back(cur);

  IntVec q(sys->rank(), 0);
  bool keyed = spec.find('=') != std::string::npos;
  if (keyed) {
    for (auto& p : parts) {
      auto eq = p.find('=');
      if (eq == std::string::npos) fail(errc::invalid_thickness, "expected label=value in '" + p + "'");
      std::size_t s = sys->generator_index(p.substr(0, eq));
      q[s] = Int(p.substr(eq + 1));
    }
    for (std::size_t s = 0; s < q.size(); ++s)
      if (q[s] == 0)
        fail(errc::invalid_thickness, "no value for generator " + sys->generators[s]);
  } else if (parts.size() == 1) {
    q.assign(sys->rank(), Int(parts[0]));
  } else {
    if (parts.size() != sys->rank())
      fail(errc::invalid_thickness, "expected 1 or " + std::to_string(sys->rank()) + " values");
    for (std::size_t s = 0; s < q.size(); ++s) q[s] = Int(parts[s]);
  }
  return Thickness(sys, std::move(q));
}

std::optional<DiagramAutomorphism> parse_sigma(const SystemPtr& sys, const std::string& spec) {
  if (spec.empty()) return std::nullopt;
  std::vector<std::size_t> perm(sys->rank());
  for (std::size_t s = 0; s < perm.size(); ++s) perm[s] = s;
  std::stringstream ss(spec);
  std::string part;
  while (std::getline(ss, part, ',')) {
    auto arrow = part.find("->");
    std::size_t sep_len = 2;
    if (arrow == std::string::npos) {
      arrow = part.find(':');
      sep_len = 1;
    }
    if (arrow == std::string::npos)
      fail(errc::malformed_spec, "sigma entries look like s0:s1 or s0->s1");
    perm[sys->generator_index(part.substr(0, arrow))] =
        sys->generator_index(part.substr(arrow + sep_len));
  }
  return DiagramAutomorphism::create(sys, std::move(perm));
}

// ---------------------------------------------------------------------------
// Optional ball cache: content-addressed by a hash of the normalized system
// name and radius. Off unless --cache is given; FLATBLDG_CACHE_DIR overrides
// the location. Files are written to a temp name and renamed into place.

std::string cache_dir() {
  if (const char* env = std::getenv("FLATBLDG_CACHE_DIR")) return env;
  return ".flatbldg-cache";
}

std::string fnv1a(const std::string& text) {
  unsigned long long h = 1469598103934665603ull;
  for (unsigned char c : text) {
    h ^= c;
    h *= 1099511628211ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", h);
  return buf;
}

std::vector<Elem> cached_ball(const RunConfig& cfg, const SystemPtr& sys, std::size_t radius) {
  if (!cfg.use_cache) return ball(sys, radius);
  std::string key = fnv1a(sys->type_name + "|" + std::to_string(sys->rank()) + "|ball|" +
                          std::to_string(radius));
  std::filesystem::path dir = cache_dir();
  std::filesystem::path file = dir / (key + ".json");
  std::error_code ec;
  if (std::filesystem::exists(file, ec)) {
    std::ifstream in(file);
    json j = json::parse(in, nullptr, false);
    if (!j.is_discarded() && j.value("radius", 0u) == radius) {
      std::vector<Elem> out;
      for (const auto& w : j.at("words"))
        out.push_back(Elem::from_word(sys, parse_word(sys, w.get<std::string>())));
      return out;
    }
  }
  std::vector<Elem> out = ball(sys, radius);
  json j;
  j["system"] = sys->type_name;
  j["radius"] = radius;
  json words = json::array();
  for (const auto& e : out) words.push_back(canonical_word(e));
  j["words"] = words;
  std::filesystem::create_directories(dir, ec);
  std::filesystem::path tmp = file;
  tmp += ".tmp";
  {
    std::ofstream outf(tmp);
    outf << j.dump();
  }
  std::filesystem::rename(tmp, file, ec);
  return out;
}

// ---------------------------------------------------------------------------
// Output

int emit(const RunConfig& cfg, const std::string& command, const SystemPtr& sys,
         const std::optional<Thickness>& q, const json& result, const std::vector<Check>& checks,
         const std::string& table, const std::string& csv) {
  bool all_pass = true;
  for (const auto& c : checks) all_pass = all_pass && c.pass;

  if (cfg.format == "json") {
    json env;
    env["command"] = command;
    env["system"] = system_to_json(sys);
    if (q) {
      json qv = json::object();
      for (std::size_t s = 0; s < sys->rank(); ++s) qv[sys->generators[s]] = q->q(s).get_str();
      env["q"] = qv;
    } else {
      env["q"] = nullptr;
    }
    env["seed"] = cfg.seed;
    env["result"] = result;
    json cs = json::array();
    for (const auto& c : checks) cs.push_back(check_to_json(c));
    env["checks"] = cs;
    std::cout << env.dump(2) << "\n";
  } else if (cfg.format == "csv") {
    if (csv.empty()) fail(errc::malformed_spec, "no csv form for this command; use table or json");
    std::cout << csv;
  } else {
    std::cout << table;
    for (const auto& c : checks)
      std::cout << "check " << c.name << ": " << (c.pass ? "pass" : "FAIL")
                << (c.witness.empty() ? "" : " (" + c.witness + ")") << "\n";
  }
  return all_pass ? 0 : 2;
}

std::string root_line(const RootVec& r) {
  return r.str() + " type=" + r.system()->generators[r.panel_type()];
}

json root_to_json(const RootVec& r) {
  json j;
  json v = json::array();
  for (const auto& e : r.coords()) v.push_back(e.get_str());
  j["vector"] = v;
  j["panel_type"] = r.system()->generators[r.panel_type()];
  return j;
}

Gem gem_for(const SystemPtr& sys, const std::string& gem_label, const Elem& base) {
  std::size_t o = gem_label.empty() ? sys->affine->special_vertices.front()
                                    : sys->generator_index(gem_label);
  return make_gem(sys, o, base);
}

// ---------------------------------------------------------------------------
// Commands

int cmd_info(const RunConfig& cfg) {
  auto sys = build_system(cfg.type_spec, BuildOptions{cfg.gem_limit});
  json result = system_to_json(sys);
  json m = json::array();
  for (const auto& row : sys->coxeter_matrix) {
    json r = json::array();
    for (int v : row) r.push_back(v == infinite_bond ? json("inf") : json(v));
    m.push_back(r);
  }
  result["coxeter_matrix"] = m;
  result["cartan"] = sys->cartan;

  std::ostringstream t;
  t << "type: " << sys->type_name << "\nkind: " << kind_name(sys->kind)
    << "\nrank: " << sys->rank() << "\ngenerators:";
  for (const auto& g : sys->generators) t << " " << g;
  t << "\n";
  if (sys->is_affine()) {
    t << "delta: " << vec_str(sys->delta()) << "\nspecial vertices:";
    for (auto o : sys->affine->special_vertices) t << " " << sys->generators[o];
    t << "\ngem sizes:";
    json gs = json::object();
    for (auto o : sys->affine->special_vertices) {
      auto g = make_gem(sys, o, Elem::identity(sys));
      t << " " << sys->generators[o] << "=" << g.chambers().size();
      gs[sys->generators[o]] = g.chambers().size();
    }
    result["gem_sizes"] = gs;
    t << "\n";
  }
  return emit(cfg, "info", sys, std::nullopt, result, {}, t.str(), "");
}

int cmd_roots(const RunConfig& cfg, const std::string& gem_label, long radius,
              const std::string& base_word, bool count_only) {
  auto sys = build_system(cfg.type_spec, BuildOptions{cfg.gem_limit});
  std::vector<RootVec> roots;
  json result;
  if (radius >= 0) {
    cached_ball(cfg, sys, static_cast<std::size_t>(radius)); // warms the cache when enabled
    roots = roots_meeting_ball(sys, static_cast<std::size_t>(radius));
    result["mode"] = "ball";
    result["radius"] = radius;
  } else {
    Elem base = Elem::from_word(sys, parse_word(sys, base_word));
    Gem g = gem_for(sys, gem_label, base);
    roots = roots_cutting_gem(g);
    result["mode"] = "gem";
    result["gem"] = sys->generators[g.special_vertex()];
  }
  result["count"] = roots.size();

  std::vector<Check> checks;
  {
    bool closed = true;
    std::string witness;
    std::set<IntVec> seen;
    for (const auto& r : roots) seen.insert(r.coords());
    for (const auto& r : roots)
      if (!seen.count(vec_neg(r.coords()))) {
        closed = false;
        witness = r.str();
        break;
      }
    checks.push_back(Check{"closed-under-negation", closed, witness});
  }

  std::ostringstream t, c;
  t << "roots: " << roots.size() << "\n";
  c << "vector,panel_type\n";
  json list = json::array();
  if (!count_only) {
    for (const auto& r : roots) {
      t << "  " << root_line(r) << "\n";
      list.push_back(root_to_json(r));
      std::string flat;
      for (std::size_t i = 0; i < r.coords().size(); ++i)
        flat += (i ? " " : "") + r.coords()[i].get_str();
      c << "\"" << flat << "\"," << sys->generators[r.panel_type()] << "\n";
    }
    result["roots"] = list;
  }
  return emit(cfg, "roots", sys, std::nullopt, result, checks, t.str(),
              count_only ? "" : c.str());
}

int cmd_hull(const RunConfig& cfg, const std::string& chambers_spec, const std::string& mode) {
  auto sys = build_system(cfg.type_spec, BuildOptions{cfg.gem_limit});
  std::vector<Elem> X;
  std::stringstream ss(chambers_spec);
  std::string part;
  while (std::getline(ss, part, ';')) X.push_back(Elem::from_word(sys, parse_word(sys, part)));
  if (X.empty()) fail(errc::empty_input, "no chambers given");

  std::vector<Check> checks;
  std::vector<Elem> hull;
  if (mode == "gallery") {
    hull = convex_hull(X, HullMode::gallery_closure);
  } else if (mode == "roots") {
    hull = convex_hull(X, HullMode::root_intersection);
  } else {
    hull = convex_hull(X, HullMode::gallery_closure);
    auto other = convex_hull(X, HullMode::root_intersection);
    bool agree = hull.size() == other.size() && std::equal(hull.begin(), hull.end(), other.begin());
    std::string witness;
    if (!agree) witness = "sizes " + std::to_string(hull.size()) + " vs " + std::to_string(other.size());
    checks.push_back(Check{"hull-modes-agree", agree, witness});
  }

  json result;
  result["size"] = hull.size();
  json ch = json::array();
  std::ostringstream t;
  t << "hull size: " << hull.size() << "\n";
  for (const auto& e : hull) {
    ch.push_back(canonical_word(e));
    t << "  " << canonical_word(e) << "\n";
  }
  result["chambers"] = ch;
  return emit(cfg, "hull", sys, std::nullopt, result, checks, t.str(), "");
}

int cmd_sector(const RunConfig& cfg, const std::string& gem_label, const std::string& apex_word,
               const std::string& base_word, long radius, const std::string& chamber_word) {
  auto sys = build_system(cfg.type_spec, BuildOptions{cfg.gem_limit});
  Elem base = Elem::from_word(sys, parse_word(sys, base_word));
  Gem g = gem_for(sys, gem_label, base);
  SectorRef sec(g, Elem::from_word(sys, parse_word(sys, apex_word)));

  json result;
  result["gem"] = sys->generators[g.special_vertex()];
  result["apex"] = canonical_word(sec.apex());
  json br = json::array();
  for (const auto& r : sec.boundary_roots()) br.push_back(root_to_json(r));
  result["boundary_roots"] = br;

  std::vector<Check> checks;
  std::ostringstream t;
  t << "sector at gem " << sys->generators[g.special_vertex()] << ", apex "
    << canonical_word(sec.apex()) << "\n";

  if (!chamber_word.empty()) {
    Elem d = Elem::from_word(sys, parse_word(sys, chamber_word));
    bool via_roots = sector_membership(sec, d, SectorMode::root_intersection);
    bool via_proj = sector_membership(sec, d, SectorMode::projection);
    result["chamber"] = canonical_word(d);
    result["member"] = via_roots;
    checks.push_back(Check{"membership-modes-agree", via_roots == via_proj, canonical_word(d)});
    t << "chamber " << canonical_word(d) << ": " << (via_roots ? "inside" : "outside") << "\n";
  } else {
    std::size_t r = radius < 0 ? 5 : static_cast<std::size_t>(radius);
    auto B = cached_ball(cfg, sys, r);
    std::size_t members = 0;
    bool agree = true;
    std::string witness;
    json mem = json::array();
    for (const auto& d : B) {
      bool via_roots = sector_membership(sec, d, SectorMode::root_intersection);
      bool via_proj = sector_membership(sec, d, SectorMode::projection);
      if (via_roots != via_proj && agree) {
        agree = false;
        witness = canonical_word(d);
      }
      if (via_roots) {
        ++members;
        mem.push_back(canonical_word(d));
      }
    }
    result["radius"] = r;
    result["ball_size"] = B.size();
    result["member_count"] = members;
    result["members"] = mem;
    checks.push_back(Check{"membership-modes-agree", agree, witness});
    t << "ball radius " << r << ": " << members << " of " << B.size() << " chambers inside\n";
  }
  return emit(cfg, "sector", sys, std::nullopt, result, checks, t.str(), "");
}

int cmd_tidy(const RunConfig& cfg, const std::string& t_word, unsigned N,
             const std::string& c_word, const std::string& gem_label,
             const std::string& sigma_spec) {
  auto sys = build_system(cfg.type_spec, BuildOptions{cfg.gem_limit});
  Thickness q = parse_thickness(sys, cfg.q_spec);
  Elem c = Elem::from_word(sys, parse_word(sys, c_word));

  Elem g_elem = Elem::identity(sys);
  if (t_word == "auto") {
    Gem gem = gem_for(sys, gem_label, c);
    g_elem = sector_translation(SectorRef(gem, c)).elem;
  } else {
    g_elem = Elem::from_word(sys, parse_word(sys, t_word));
  }
  BuildingAuto g{g_elem, parse_sigma(sys, sigma_spec)};

  TidyReport rep = tidy_check(c, g, N, q);
  json result = json::parse(to_json_string(rep));

  std::vector<Check> checks;
  checks.push_back(Check{"tidy-for-translation", !rep.is_translation || rep.all_geometric,
                         rep.is_translation ? rep.element : "not a translation: no claim"});

  std::ostringstream t, csv;
  t << "element: " << rep.element << "\n"
    << "translation: " << (rep.is_translation ? "yes" : "no") << "\n";
  csv << "n,index,geometric\n";
  for (std::size_t n = 1; n <= rep.indices.size(); ++n) {
    t << "  [U : U cap g^" << n << " U g^-" << n << "] = " << rep.indices[n - 1].get_str()
      << (rep.geometric[n - 1] ? "" : "  (not geometric)") << "\n";
    csv << n << "," << rep.indices[n - 1].get_str() << "," << (rep.geometric[n - 1] ? 1 : 0)
        << "\n";
  }
  t << "verdict: " << (rep.verdict == TidyReport::Verdict::tidy ? "tidy" : "not claimed") << "\n";
  return emit(cfg, "tidy", sys, q, result, checks, t.str(), csv.str());
}

int cmd_flat_roots(const RunConfig& cfg, const std::string& gem_label,
                   const std::string& apex_word, unsigned verify) {
  auto sys = build_system(cfg.type_spec, BuildOptions{cfg.gem_limit});
  Thickness q = parse_thickness(sys, cfg.q_spec);
  Elem apex = Elem::from_word(sys, parse_word(sys, apex_word));
  Gem g = gem_for(sys, gem_label, apex);
  SectorRef sec(g, apex);

  auto roots = flat_root_system(sec, q);
  json result = json::parse(to_json_string(roots));

  std::vector<Check> checks;
  {
    bool ok = true;
    std::string witness;
    std::map<IntVec, IntVec> rho_of;
    for (const auto& fr : roots) rho_of.emplace(fr.gamma.coords(), fr.rho_basis);
    for (const auto& fr : roots) {
      auto it = rho_of.find(vec_neg(fr.gamma.coords()));
      if (it == rho_of.end() || it->second != vec_neg(fr.rho_basis)) {
        ok = false;
        witness = fr.gamma.str();
        break;
      }
    }
    checks.push_back(Check{"rho-negation-pairs", ok, witness});
  }
  {
    bool ok = true;
    std::string witness;
    for (std::size_t i = 0; i < roots.size() && ok; ++i)
      for (std::size_t j = i + 1; j < roots.size(); ++j)
        if (roots[i].rho_basis == roots[j].rho_basis) {
          ok = false;
          witness = roots[i].gamma.str();
          break;
        }
    checks.push_back(Check{"rho-distinct", ok, witness});
  }
  if (verify > 0) {
    // sampled additivity of rho on products of lattice translations
    std::mt19937 rng(static_cast<unsigned>(cfg.seed));
    auto basis = translation_basis(sys);
    bool ok = true;
    std::string witness;
    for (unsigned i = 0; i < verify && ok; ++i) {
      IntVec c1(basis.size()), c2(basis.size());
      for (std::size_t j = 0; j < basis.size(); ++j) {
        c1[j] = static_cast<long>(rng() % 7) - 3;
        c2[j] = static_cast<long>(rng() % 7) - 3;
      }
      auto t1 = translation_from_coords(sys, c1);
      auto t2 = translation_from_coords(sys, c2);
      auto t12 = translation_test(t1.elem * t2.elem);
      for (const auto& fr : roots)
        if (fr.rho(*t12) != fr.rho(t1) + fr.rho(t2)) {
          ok = false;
          witness = canonical_word(t1.elem) + " * " + canonical_word(t2.elem);
          break;
        }
    }
    checks.push_back(Check{"rho-additive-sampled", ok, witness});
  }

  std::ostringstream t, csv;
  t << "flat roots (" << roots.size() << ") at gem " << sys->generators[g.special_vertex()]
    << ", apex " << canonical_word(apex) << "\n";
  csv << "gamma,gamma_prime,m,s,rho_basis\n";
  for (const auto& fr : roots) {
    t << "  gamma=" << fr.gamma.str() << " gamma'=" << fr.gamma_prime.str() << " m=" << fr.m.get_str()
      << " s=" << fr.s.get_str() << " rho=" << vec_str(fr.rho_basis) << "\n";
    csv << "\"" << fr.gamma.str() << "\",\"" << fr.gamma_prime.str() << "\"," << fr.m.get_str()
        << "," << fr.s.get_str() << ",\"" << vec_str(fr.rho_basis) << "\"\n";
  }
  return emit(cfg, "flat-roots", sys, q, result, checks, t.str(), csv.str());
}

int cmd_scale(const RunConfig& cfg, const std::string& t_word, const std::string& gem_label,
              const std::string& apex_word) {
  auto sys = build_system(cfg.type_spec, BuildOptions{cfg.gem_limit});
  Thickness q = parse_thickness(sys, cfg.q_spec);
  Elem apex = Elem::from_word(sys, parse_word(sys, apex_word));
  Gem g = gem_for(sys, gem_label, apex);
  SectorRef sec(g, apex);

  Elem w = Elem::from_word(sys, parse_word(sys, t_word));
  auto tr = translation_test(w);
  if (!tr)
    fail(errc::not_a_translation, "'" + canonical_word(w) + "' is not a lattice translation");

  ScaleReport rep = scale_with_factorization(*tr, sec, q); // throws on mismatch
  json result = json::parse(to_json_string(rep));

  std::vector<Check> checks{Check{"scale-factorization", true, rep.translation}};

  std::ostringstream t, csv;
  t << "translation: " << rep.translation << "\nscale: " << rep.scale.get_str() << "\n";
  csv << "pair_root,base,exponent\n";
  for (const auto& f : rep.factors) {
    t << "  pair " << f.pair_root.str() << ": base=" << f.base.get_str()
      << " exponent=" << f.exponent.get_str() << "\n";
    csv << "\"" << f.pair_root.str() << "\"," << f.base.get_str() << "," << f.exponent.get_str()
        << "\n";
  }
  return emit(cfg, "scale", sys, q, result, checks, t.str(), csv.str());
}

const char* grammar_hint =
    "type spec: LETTER[~]RANK (A~2, C~2, B3, ...) or JSON {\"generators\":[...],\"m\":[[...]]}\n"
    "thickness: --q v (uniform) or --q v0,v1,... or --q s0=2,s1=3\n"
    "elements: whitespace-separated generator words, e.g. \"s0 s1\"; \"1\" is the identity\n";

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"exact affine Coxeter complexes and flat-group calculus"};
  app.require_subcommand(1);
  app.fallthrough(); // global flags may follow the subcommand

  RunConfig cfg;
  app.add_option("--format", cfg.format, "output format: table, json, csv")
      ->check(CLI::IsMember({"table", "json", "csv"}))
      ->capture_default_str();
  app.add_option("--seed", cfg.seed, "seed for sampled checks")->capture_default_str();
  app.add_flag("--cache", cfg.use_cache, "cache ball enumerations (FLATBLDG_CACHE_DIR)");
  app.add_option("--gem-limit", cfg.gem_limit, "max chambers per gem enumeration")
      ->capture_default_str();

  auto add_type = [&](CLI::App* sub) {
    sub->add_option("--type", cfg.type_spec, "system type spec")->required();
  };
  auto add_q = [&](CLI::App* sub) {
    sub->add_option("--q", cfg.q_spec, "thickness assignment")->required();
  };

  auto* info = app.add_subcommand("info", "describe a Coxeter system");
  add_type(info);

  auto* roots = app.add_subcommand("roots", "roots cutting a gem, or meeting a ball");
  add_type(roots);
  std::string gem_label, base_word = "1", apex_word = "1";
  long radius = -1;
  bool count_only = false;
  roots->add_option("--gem", gem_label, "special vertex label (default: first)");
  roots->add_option("--radius", radius, "enumerate roots meeting the ball of this radius");
  roots->add_option("--base", base_word, "base chamber word");
  roots->add_flag("--count", count_only, "print the count only");

  auto* hull = app.add_subcommand("hull", "convex hull of a chamber set");
  add_type(hull);
  std::string chambers_spec, hull_mode = "both";
  hull->add_option("--chambers", chambers_spec, "semicolon-separated chamber words")->required();
  hull->add_option("--mode", hull_mode, "roots, gallery, or both")
      ->check(CLI::IsMember({"roots", "gallery", "both"}));

  auto* sector = app.add_subcommand("sector", "sector membership sweep or single test");
  add_type(sector);
  std::string chamber_word;
  long sweep_radius = -1;
  sector->add_option("--gem", gem_label, "special vertex label (default: first)");
  sector->add_option("--apex", apex_word, "apex chamber word");
  sector->add_option("--base", base_word, "gem base chamber word");
  sector->add_option("--radius", sweep_radius, "sweep ball radius (default 5)");
  sector->add_option("--chamber", chamber_word, "test a single chamber");

  auto* tidy = app.add_subcommand("tidy", "stabilizer index growth (tidiness) report");
  add_type(tidy);
  add_q(tidy);
  std::string t_word, c_word = "1", sigma_spec;
  unsigned depth = 4;
  tidy->add_option("--t", t_word, "element word, or 'auto' for the sector translation")
      ->required();
  tidy->add_option("--N", depth, "check indices for n = 1..N")->capture_default_str();
  tidy->add_option("--c", c_word, "base chamber word");
  tidy->add_option("--gem", gem_label, "gem for --t auto");
  tidy->add_option("--sigma", sigma_spec, "diagram twist, e.g. s0:s1,s1:s0");

  auto* flat = app.add_subcommand("flat-roots", "root system of the flat group of translations");
  add_type(flat);
  add_q(flat);
  unsigned verify = 0;
  flat->add_option("--gem", gem_label, "special vertex label (default: first)");
  flat->add_option("--apex", apex_word, "apex chamber word");
  flat->add_option("--verify", verify, "sample this many additivity checks");

  auto* scale = app.add_subcommand("scale", "scale of a translation with its factorization");
  add_type(scale);
  add_q(scale);
  scale->add_option("--t", t_word, "translation word")->required();
  scale->add_option("--gem", gem_label, "special vertex label (default: first)");
  scale->add_option("--apex", apex_word, "apex chamber word");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? 0 : 1;
  }

  try {
    if (info->parsed()) return cmd_info(cfg);
    if (roots->parsed()) return cmd_roots(cfg, gem_label, radius, base_word, count_only);
    if (hull->parsed()) return cmd_hull(cfg, chambers_spec, hull_mode);
    if (sector->parsed())
      return cmd_sector(cfg, gem_label, apex_word, base_word, sweep_radius, chamber_word);
    if (tidy->parsed()) return cmd_tidy(cfg, t_word, depth, c_word, gem_label, sigma_spec);
    if (flat->parsed()) return cmd_flat_roots(cfg, gem_label, apex_word, verify);
    if (scale->parsed()) return cmd_scale(cfg, t_word, gem_label, apex_word);
  } catch (const error& e) {
    if (e.code() == errc::factorization_mismatch) {
      json failure;
      failure["error"] = errc_name(e.code());
      failure["witness"] = e.what();
      std::cout << failure.dump(2) << "\n";
      return 2;
    }
    std::cerr << "error: " << e.what() << "\n" << grammar_hint;
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 1;
}
