#pragma once

#include <fstream>
#include <memory>
#include <optional>
#include <string>

#include <json.hpp>

#include "pseudoalg/modules.hpp"

namespace pseudoalg {

using nlohmann::json;

/// All JSON indices are 1-based to match the d_i notation; rationals are
/// strings "p/q" (or bare integers).
inline Rat rat_from_json(const json& j) {
  if (j.is_string()) return rat_parse(j.get<std::string>());
  if (j.is_number_integer()) return Rat(j.get<long>());
  throw std::invalid_argument("rational must be a string \"p/q\" or an integer");
}

inline RatVec vec_from_json(const json& j) {
  RatVec v;
  for (const auto& x : j) v.push_back(rat_from_json(x));
  return v;
}

inline RatMat mat_from_json(const json& j) {
  RatMat m;
  for (const auto& row : j) m.push_back(vec_from_json(row));
  return m;
}

inline json vec_to_json(const RatVec& v) {
  json j = json::array();
  for (const auto& x : v) j.push_back(rat_str(x));
  return j;
}

inline json mat_to_json(const RatMat& m) {
  json j = json::array();
  for (const auto& row : m) j.push_back(vec_to_json(row));
  return j;
}

/// Algebra file: { "dim": N, "labels": [...],
///   "brackets": [{"i": 1, "j": 2, "coeffs": {"3": "1"}}, ...],
///   "subalgebra_split": r, "chi": [...], "omega": [[...]] }.
/// Bracket entries are applied literally; an unspecified (i,j) inherits
/// -c(j,i,k) when (j,i) was given, so broken antisymmetry can be expressed.
struct AlgebraFile {
  LieAlgebra algebra;
  std::optional<int> subalgebra_split;
  std::optional<RatVec> chi;
  std::optional<RatMat> omega;
};

inline AlgebraFile algebra_from_json(const json& j) {
  int n = j.at("dim").get<int>();
  std::vector<std::string> labels;
  if (j.contains("labels")) labels = j.at("labels").get<std::vector<std::string>>();
  std::vector<Rat> c(static_cast<size_t>(n * n * n), Rat(0));
  std::vector<bool> given(static_cast<size_t>(n * n), false);
  auto at = [&](int i, int jj, int k) -> Rat& {
    return c[static_cast<size_t>((i * n + jj) * n + k)];
  };
  if (j.contains("brackets"))
    for (const auto& b : j.at("brackets")) {
      int i = b.at("i").get<int>() - 1;
      int jj = b.at("j").get<int>() - 1;
      if (i < 0 || i >= n || jj < 0 || jj >= n)
        throw std::invalid_argument("bracket index out of range");
      given[static_cast<size_t>(i * n + jj)] = true;
      for (const auto& [key, val] : b.at("coeffs").items()) {
        int k = std::stoi(key) - 1;
        if (k < 0 || k >= n) throw std::invalid_argument("bracket target out of range");
        at(i, jj, k) = rat_from_json(val);
      }
    }
  // fill unspecified mirror entries by antisymmetry
  for (int i = 0; i < n; ++i)
    for (int jj = 0; jj < n; ++jj)
      if (given[static_cast<size_t>(i * n + jj)] && !given[static_cast<size_t>(jj * n + i)])
        for (int k = 0; k < n; ++k) at(jj, i, k) = -at(i, jj, k);

  AlgebraFile out{LieAlgebra(n, labels, std::move(c)), {}, {}, {}};
  if (j.contains("subalgebra_split")) out.subalgebra_split = j.at("subalgebra_split").get<int>();
  if (j.contains("chi")) out.chi = vec_from_json(j.at("chi"));
  if (j.contains("omega")) out.omega = mat_from_json(j.at("omega"));
  return out;
}

inline AlgebraFile algebra_from_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  json j;
  in >> j;
  return algebra_from_json(j);
}

/// Pseudoalgebra section: { "kind": "W"|"S"|"H"|"K",
///   "chi": [...] (S), "r": [[i, j, "p/q"], ...], "s": [...] (H/K) }.
inline PseudoAlgebra pseudo_from_json(const json& j,
                                      std::shared_ptr<const LieAlgebra> base) {
  std::string kind = j.at("kind").get<std::string>();
  int n = base->dim();
  if (kind == "W") return build_w(std::move(base));
  if (kind == "S") {
    RatVec chi = j.contains("chi") ? vec_from_json(j.at("chi")) : zero_vec(n);
    return build_s(std::move(base), chi);
  }
  if (kind == "H" || kind == "K") {
    RatMat r = zero_mat(n, n);
    for (const auto& entry : j.at("r")) {
      int a = entry.at(0).get<int>() - 1;
      int b = entry.at(1).get<int>() - 1;
      Rat v = rat_from_json(entry.at(2));
      r[static_cast<size_t>(a)][static_cast<size_t>(b)] = v;
      r[static_cast<size_t>(b)][static_cast<size_t>(a)] = -v;
    }
    RatVec s = j.contains("s") ? vec_from_json(j.at("s")) : zero_vec(n);
    PseudoAlgebra a = build_rank1(std::move(base), r, s);
    if ((kind == "H") != (a.kind == PKind::HType))
      throw std::domain_error("rank-1 data classifies as " + kind_name(a.kind) +
                              ", not " + kind);
    return a;
  }
  throw std::invalid_argument("unknown pseudoalgebra kind " + kind);
}

/// Rep section: { "dim": m, "pi": [mat, ...], "u": [mat, ...] } with
/// matrices as row-major arrays of rational strings.
inline RepSpec rep_from_json(const json& j) {
  RepSpec r;
  r.dim_r = j.at("dim").get<int>();
  for (const auto& m : j.at("pi")) r.pi.push_back(mat_from_json(m));
  for (const auto& m : j.at("u")) r.u.push_back(mat_from_json(m));
  return r;
}

/// Module job file:
/// { "algebra": {...algebra file...}, "pseudo": {...},
///   "module": { "type": "tensor"|"current"|"twisted", "rep": {...},
///               "t": [...] (twisted) } }
struct ModuleJob {
  std::shared_ptr<const PseudoAlgebra> algebra;  // possibly current
  PseudoModule module;
};

inline ModuleJob module_job_from_json(const json& j) {
  AlgebraFile af = algebra_from_json(j.at("algebra"));
  const json& mj = j.at("module");
  std::string type = mj.at("type").get<std::string>();
  RepSpec rep = rep_from_json(mj.at("rep"));

  std::shared_ptr<const SubalgebraPair> pair;
  std::shared_ptr<const LieAlgebra> small;
  if (af.subalgebra_split && *af.subalgebra_split > 0) {
    pair = std::make_shared<SubalgebraPair>(af.algebra, *af.subalgebra_split);
    small = std::make_shared<LieAlgebra>(pair->small());
  } else {
    small = std::make_shared<LieAlgebra>(af.algebra);
  }

  auto prim = std::make_shared<PseudoAlgebra>(pseudo_from_json(j.at("pseudo"), small));
  ModuleJob out;
  if (type == "tensor") {
    out.algebra = prim;
    out.module = tensor_module(prim, rep);
  } else if (type == "current") {
    if (!pair) throw std::invalid_argument("current module needs subalgebra_split");
    out.module = current_module(tensor_module(prim, rep), pair);
    out.algebra = out.module.alg;
  } else if (type == "twisted") {
    if (!pair) throw std::invalid_argument("twisted module needs subalgebra_split");
    auto cur = std::make_shared<PseudoAlgebra>(current_algebra(prim, pair));
    RatVec t = mj.contains("t") ? vec_from_json(mj.at("t")) : zero_vec(pair->big().dim());
    out.module = twisted_module(cur, rep, t);
    out.algebra = cur;
  } else {
    throw std::invalid_argument("unknown module type " + type);
  }
  return out;
}

inline json carrier_to_json(const Carrier& c) {
  json j = json::array();
  for (const auto& [k, v] : c.terms) {
    json entry;
    entry["K"] = k.e;
    entry["v"] = vec_to_json(v);
    j.push_back(entry);
  }
  return j;
}

}  // namespace pseudoalg
