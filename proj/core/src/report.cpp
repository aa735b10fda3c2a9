#include <nlohmann/json.hpp>

#include "flatbldg/flat.hpp"

// JSON serialization of the report objects. Big integers are encoded as
// decimal strings so values never hit the double range of JSON numbers.

namespace flatbldg {

namespace {

using nlohmann::json;

json int_to_json(const Int& v) { return v.get_str(); }

Int int_from_json(const json& j) {
  if (j.is_number_integer()) return Int(j.get<long>());
  if (j.is_string()) return Int(j.get<std::string>());
  fail(errc::malformed_spec, "expected an integer or decimal string");
}

json vec_to_json(const IntVec& v) {
  json a = json::array();
  for (const auto& x : v) a.push_back(int_to_json(x));
  return a;
}

IntVec vec_from_json(const json& j) {
  IntVec v;
  for (const auto& e : j) v.push_back(int_from_json(e));
  return v;
}

} // namespace

std::string to_json_string(const TidyReport& r) {
  json j;
  j["element"] = r.element;
  j["is_translation"] = r.is_translation;
  j["depth"] = r.depth;
  json idx = json::array();
  for (const auto& v : r.indices) idx.push_back(int_to_json(v));
  j["indices"] = idx;
  j["geometric"] = r.geometric;
  j["all_geometric"] = r.all_geometric;
  j["verdict"] = r.verdict == TidyReport::Verdict::tidy ? "tidy" : "not_claimed";
  return j.dump();
}

TidyReport tidy_report_from_json(const std::string& text, const SystemPtr&) {
  json j = json::parse(text);
  TidyReport r;
  r.element = j.at("element").get<std::string>();
  r.is_translation = j.at("is_translation").get<bool>();
  r.depth = j.at("depth").get<unsigned>();
  for (const auto& e : j.at("indices")) r.indices.push_back(int_from_json(e));
  r.geometric = j.at("geometric").get<std::vector<bool>>();
  r.all_geometric = j.at("all_geometric").get<bool>();
  r.verdict = j.at("verdict") == "tidy" ? TidyReport::Verdict::tidy
                                        : TidyReport::Verdict::not_claimed;
  return r;
}

std::string to_json_string(const ScaleReport& r) {
  json j;
  j["translation"] = r.translation;
  j["scale"] = int_to_json(r.scale);
  json fs = json::array();
  for (const auto& f : r.factors) {
    json e;
    e["pair_root"] = vec_to_json(f.pair_root.coords());
    e["base"] = int_to_json(f.base);
    e["exponent"] = int_to_json(f.exponent);
    fs.push_back(e);
  }
  j["factors"] = fs;
  return j.dump();
}

ScaleReport scale_report_from_json(const std::string& text, const SystemPtr& sys) {
  json j = json::parse(text);
  ScaleReport r{j.at("translation").get<std::string>(), int_from_json(j.at("scale")), {}};
  for (const auto& e : j.at("factors"))
    r.factors.push_back(ScaleFactor{RootVec(sys, vec_from_json(e.at("pair_root"))),
                                    int_from_json(e.at("base")),
                                    int_from_json(e.at("exponent"))});
  return r;
}

std::string to_json_string(const std::vector<FlatRoot>& roots) {
  json a = json::array();
  for (const auto& fr : roots) {
    json e;
    e["gamma"] = vec_to_json(fr.gamma.coords());
    e["gamma_prime"] = vec_to_json(fr.gamma_prime.coords());
    e["m"] = int_to_json(fr.m);
    e["s"] = int_to_json(fr.s);
    e["rho_basis"] = vec_to_json(fr.rho_basis);
    a.push_back(e);
  }
  return a.dump();
}

std::vector<FlatRoot> flat_roots_from_json(const std::string& text, const SystemPtr& sys) {
  json a = json::parse(text);
  std::vector<FlatRoot> out;
  for (const auto& e : a)
    out.push_back(FlatRoot{RootVec(sys, vec_from_json(e.at("gamma"))),
                           RootVec(sys, vec_from_json(e.at("gamma_prime"))),
                           int_from_json(e.at("m")), int_from_json(e.at("s")),
                           vec_from_json(e.at("rho_basis"))});
  return out;
}

} // namespace flatbldg
