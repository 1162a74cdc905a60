#pragma once

// JSON file formats for entwining structures and cochains.  Entries are
// sparse index tuples with scalars as decimal strings ("p/q" over the
// rationals, canonical representatives over F_p); emission uses a stable key
// order and sorted entries, so a load/emit round trip is byte identical.

#include <cstdint>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"

#include "entwine/scalar.hpp"
#include "entwine/structures.hpp"

namespace entwine {

using Json = nlohmann::ordered_json;

// Dense multiplication / comultiplication / entwining tables are built on
// load; the cap bounds the memory that a hostile file can demand.
inline constexpr int kLoadDimCap = 16;

struct StructureFile {
  std::string name;  // empty when the file carries none
  Field field = Field::rationals();
  EntwiningStructure<Rat> s;  // constants kept exact; convert per field later
};

struct CochainFile {
  int degree = 0;
  DVec<Rat> values;  // dense over C (x) A^(degree+1), tuple-lexicographic
};

namespace detail {

[[noreturn]] inline void io_fail(const std::string& where,
                                 const std::string& what) {
  throw EntwineError(where + ": " + what);
}

inline const Json& member(const Json& j, const std::string& where,
                          const char* key) {
  if (!j.is_object()) io_fail(where, "expected an object");
  auto it = j.find(key);
  if (it == j.end()) io_fail(where, std::string("missing key '") + key + "'");
  return *it;
}

inline int int_at(const Json& j, const std::string& where) {
  if (!j.is_number_integer()) io_fail(where, "expected an integer");
  return j.get<int>();
}

inline int index_at(const Json& j, const std::string& where, int bound) {
  int v = int_at(j, where);
  if (v < 0 || v >= bound)
    io_fail(where, "index " + std::to_string(v) + " out of range [0, " +
                       std::to_string(bound) + ")");
  return v;
}

inline Rat rat_at(const Json& j, const std::string& where) {
  if (!j.is_string()) io_fail(where, "expected a scalar string");
  try {
    return rat_from_string(j.get<std::string>());
  } catch (const EntwineError& e) {
    io_fail(where, e.what());
  }
}

inline int dim_at(const Json& j, const std::string& where, int cap) {
  int d = int_at(j, where);
  if (d < 1) io_fail(where, "dimension must be >= 1");
  if (d > cap)
    io_fail(where, "dimension " + std::to_string(d) + " exceeds the load cap " +
                       std::to_string(cap));
  return d;
}

// Shared shape check for an entry array [i_1, ..., i_k, "scalar"].
inline void entry_shape(const Json& e, const std::string& where, int arity) {
  if (!e.is_array() || int(e.size()) != arity + 1)
    io_fail(where, "expected [index x" + std::to_string(arity) + ", scalar]");
}

}  // namespace detail

inline Json json_from_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw EntwineError(path + ": cannot open file");
  try {
    return Json::parse(in);
  } catch (const Json::parse_error& e) {
    throw EntwineError(path + ": " + e.what());
  }
}

inline void text_to_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw EntwineError(path + ": cannot open file for writing");
  out << text;
}

inline StructureFile load_structure(const Json& j, int cap = kLoadDimCap) {
  using namespace detail;
  StructureFile f;
  const Json& fmt = member(j, "structure", "format");
  if (!fmt.is_string() || fmt.get<std::string>() != "entwining-structure")
    io_fail("structure.format", "expected \"entwining-structure\"");
  if (j.contains("name")) {
    if (!j["name"].is_string()) io_fail("structure.name", "expected a string");
    f.name = j["name"].get<std::string>();
  }
  if (j.contains("field")) {
    if (!j["field"].is_string())
      io_fail("structure.field", "expected \"q\" or \"fp:P\"");
    f.field = Field::parse(j["field"].get<std::string>());
  }

  const Json& ja = member(j, "structure", "algebra");
  FiniteAlgebra<Rat>& A = f.s.A;
  A.dim = dim_at(member(ja, "algebra", "dim"), "algebra.dim", cap);
  A.unital = true;
  if (ja.contains("unital")) {
    if (!ja["unital"].is_boolean())
      io_fail("algebra.unital", "expected a boolean");
    A.unital = ja["unital"].get<bool>();
  }
  A.unit = zero_vec<Rat>(A.dim);
  if (A.unital) {
    const Json& ju = member(ja, "algebra", "unit");
    if (!ju.is_array()) io_fail("algebra.unit", "expected an array");
    for (std::size_t t = 0; t < ju.size(); ++t) {
      std::string where = "algebra.unit[" + std::to_string(t) + "]";
      entry_shape(ju[t], where, 1);
      int i = index_at(ju[t][0], where, A.dim);
      if (!is_zero(A.unit(i))) io_fail(where, "duplicate index");
      A.unit(i) = rat_at(ju[t][1], where);
    }
  } else if (ja.contains("unit")) {
    io_fail("algebra.unit", "present but unital is false");
  }
  A.mul.assign(std::size_t(A.dim) * A.dim, zero_vec<Rat>(A.dim));
  {
    const Json& jm = member(ja, "algebra", "mul");
    if (!jm.is_array()) io_fail("algebra.mul", "expected an array");
    for (std::size_t t = 0; t < jm.size(); ++t) {
      std::string where = "algebra.mul[" + std::to_string(t) + "]";
      entry_shape(jm[t], where, 3);
      int i = index_at(jm[t][0], where, A.dim);
      int jj = index_at(jm[t][1], where, A.dim);
      int k = index_at(jm[t][2], where, A.dim);
      DVec<Rat>& cell = A.mul[std::size_t(i) * A.dim + jj];
      if (!is_zero(cell(k))) io_fail(where, "duplicate position");
      cell(k) = rat_at(jm[t][3], where);
    }
  }

  const Json& jc = member(j, "structure", "coalgebra");
  FiniteCoalgebra<Rat>& C = f.s.C;
  C.dim = dim_at(member(jc, "coalgebra", "dim"), "coalgebra.dim", cap);
  C.counit = zero_vec<Rat>(C.dim);
  {
    const Json& je = member(jc, "coalgebra", "counit");
    if (!je.is_array()) io_fail("coalgebra.counit", "expected an array");
    for (std::size_t t = 0; t < je.size(); ++t) {
      std::string where = "coalgebra.counit[" + std::to_string(t) + "]";
      entry_shape(je[t], where, 1);
      int k = index_at(je[t][0], where, C.dim);
      if (!is_zero(C.counit(k))) io_fail(where, "duplicate index");
      C.counit(k) = rat_at(je[t][1], where);
    }
  }
  C.comul.assign(std::size_t(C.dim), zero_mat<Rat>(C.dim, C.dim));
  {
    const Json& jm = member(jc, "coalgebra", "comul");
    if (!jm.is_array()) io_fail("coalgebra.comul", "expected an array");
    for (std::size_t t = 0; t < jm.size(); ++t) {
      std::string where = "coalgebra.comul[" + std::to_string(t) + "]";
      entry_shape(jm[t], where, 3);
      int k = index_at(jm[t][0], where, C.dim);
      int i = index_at(jm[t][1], where, C.dim);
      int jj = index_at(jm[t][2], where, C.dim);
      if (!is_zero(C.comul[k](i, jj))) io_fail(where, "duplicate position");
      C.comul[k](i, jj) = rat_at(jm[t][3], where);
    }
  }

  EntwiningMap<Rat>& psi = f.s.psi;
  psi.dimA = A.dim;
  psi.dimC = C.dim;
  psi.comp.assign(std::size_t(C.dim) * A.dim, zero_mat<Rat>(A.dim, C.dim));
  {
    const Json& jp = member(j, "structure", "psi");
    if (!jp.is_array()) io_fail("psi", "expected an array");
    for (std::size_t t = 0; t < jp.size(); ++t) {
      std::string where = "psi[" + std::to_string(t) + "]";
      entry_shape(jp[t], where, 4);
      int i = index_at(jp[t][0], where, C.dim);
      int jj = index_at(jp[t][1], where, A.dim);
      int p = index_at(jp[t][2], where, A.dim);
      int q = index_at(jp[t][3], where, C.dim);
      DMat<Rat>& cell = psi.comp[std::size_t(i) * A.dim + jj];
      if (!is_zero(cell(p, q))) io_fail(where, "duplicate position");
      cell(p, q) = rat_at(jp[t][4], where);
    }
  }
  return f;
}

inline StructureFile load_structure_file(const std::string& path,
                                         int cap = kLoadDimCap) {
  return load_structure(json_from_file(path), cap);
}

template <class S>
Json structure_json(const EntwiningStructure<S>& s, const Field& field,
                    const std::string& name = "") {
  Json j;
  j["format"] = "entwining-structure";
  if (!name.empty()) j["name"] = name;
  j["field"] = field.str();
  Json ja;
  ja["dim"] = s.A.dim;
  ja["unital"] = s.A.unital;
  if (s.A.unital) {
    Json u = Json::array();
    for (int i = 0; i < s.A.dim; ++i)
      if (!is_zero(s.A.unit(i))) u.push_back({i, scalar_str(s.A.unit(i))});
    ja["unit"] = u;
  }
  Json jm = Json::array();
  for (int i = 0; i < s.A.dim; ++i)
    for (int jj = 0; jj < s.A.dim; ++jj) {
      const DVec<S>& cell = s.A.mul_basis(i, jj);
      for (int k = 0; k < s.A.dim; ++k)
        if (!is_zero(cell(k))) jm.push_back({i, jj, k, scalar_str(cell(k))});
    }
  ja["mul"] = jm;
  j["algebra"] = ja;
  Json jc;
  jc["dim"] = s.C.dim;
  Json je = Json::array();
  for (int k = 0; k < s.C.dim; ++k)
    if (!is_zero(s.C.counit(k))) je.push_back({k, scalar_str(s.C.counit(k))});
  jc["counit"] = je;
  Json jd = Json::array();
  for (int k = 0; k < s.C.dim; ++k)
    for (int i = 0; i < s.C.dim; ++i)
      for (int jj = 0; jj < s.C.dim; ++jj)
        if (!is_zero(s.C.comul[k](i, jj)))
          jd.push_back({k, i, jj, scalar_str(s.C.comul[k](i, jj))});
  jc["comul"] = jd;
  j["coalgebra"] = jc;
  Json jp = Json::array();
  for (int i = 0; i < s.dimC(); ++i)
    for (int jj = 0; jj < s.dimA(); ++jj) {
      const DMat<S>& cell = s.psi.at(i, jj);
      for (int p = 0; p < s.dimA(); ++p)
        for (int q = 0; q < s.dimC(); ++q)
          if (!is_zero(cell(p, q)))
            jp.push_back({i, jj, p, q, scalar_str(cell(p, q))});
    }
  j["psi"] = jp;
  return j;
}

inline Json structure_json(const StructureFile& f) {
  return structure_json(f.s, f.field, f.name);
}

inline CochainFile load_cochain(const Json& j, int dimA, int dimC) {
  using namespace detail;
  CochainFile g;
  const Json& fmt = member(j, "cochain", "format");
  if (!fmt.is_string() || fmt.get<std::string>() != "entwined-cochain")
    io_fail("cochain.format", "expected \"entwined-cochain\"");
  g.degree = int_at(member(j, "cochain", "degree"), "cochain.degree");
  if (g.degree < 0) io_fail("cochain.degree", "degree must be >= 0");
  long long dim = dimC;
  for (int t = 0; t <= g.degree; ++t) {
    dim *= dimA;
    if (dim > (1LL << 40)) io_fail("cochain.degree", "space too large");
  }
  g.values = zero_vec<Rat>(int(dim));
  const Json& je = member(j, "cochain", "entries");
  if (!je.is_array()) io_fail("cochain.entries", "expected an array");
  for (std::size_t t = 0; t < je.size(); ++t) {
    std::string where = "cochain.entries[" + std::to_string(t) + "]";
    entry_shape(je[t], where, g.degree + 2);
    long long idx = index_at(je[t][0], where, dimC);
    for (int l = 1; l <= g.degree + 1; ++l)
      idx = idx * dimA + index_at(je[t][l], where, dimA);
    if (!is_zero(g.values(int(idx)))) io_fail(where, "duplicate position");
    g.values(int(idx)) = rat_at(je[t][g.degree + 2], where);
  }
  return g;
}

inline CochainFile load_cochain_file(const std::string& path, int dimA,
                                     int dimC) {
  return load_cochain(json_from_file(path), dimA, dimC);
}

template <class S>
Json cochain_json(const DVec<S>& values, int degree, int dimA, int dimC) {
  Json j;
  j["format"] = "entwined-cochain";
  j["degree"] = degree;
  Json je = Json::array();
  for (long long idx = 0; idx < values.size(); ++idx) {
    if (is_zero(values(idx))) continue;
    std::vector<int> word(std::size_t(degree) + 1);
    long long rem = idx;
    for (int l = degree; l >= 0; --l) {
      word[std::size_t(l)] = int(rem % dimA);
      rem /= dimA;
    }
    Json entry = Json::array();
    entry.push_back(int(rem));
    for (int a : word) entry.push_back(a);
    entry.push_back(scalar_str(values(idx)));
    je.push_back(entry);
  }
  j["entries"] = je;
  (void)dimC;
  return j;
}

namespace detail {

inline void pretty_json_rec(const Json& j, std::string& out, int depth) {
  auto pad = [&](int d) { out.append(std::size_t(d) * 2, ' '); };
  if (j.is_object()) {
    if (j.empty()) {
      out += "{}";
      return;
    }
    out += "{\n";
    std::size_t i = 0;
    for (auto it = j.begin(); it != j.end(); ++it, ++i) {
      pad(depth + 1);
      out += Json(it.key()).dump();
      out += ": ";
      pretty_json_rec(it.value(), out, depth + 1);
      if (i + 1 < j.size()) out += ",";
      out += "\n";
    }
    pad(depth);
    out += "}";
  } else if (j.is_array()) {
    if (j.empty()) {
      out += "[]";
      return;
    }
    bool flat = true;
    for (const auto& e : j)
      if (e.is_object() || e.is_array()) {
        flat = false;
        break;
      }
    if (flat) {
      out += "[";
      for (std::size_t i = 0; i < j.size(); ++i) {
        out += j[i].dump();
        if (i + 1 < j.size()) out += ", ";
      }
      out += "]";
    } else {
      out += "[\n";
      for (std::size_t i = 0; i < j.size(); ++i) {
        pad(depth + 1);
        pretty_json_rec(j[i], out, depth + 1);
        if (i + 1 < j.size()) out += ",";
        out += "\n";
      }
      pad(depth);
      out += "]";
    }
  } else {
    out += j.dump();
  }
}

}  // namespace detail

// Canonical on-disk form: two space indent, entry tuples on one line.
inline std::string pretty_json(const Json& j) {
  std::string out;
  detail::pretty_json_rec(j, out, 0);
  out += "\n";
  return out;
}

inline std::uint64_t fnv1a64(const std::string& s) {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char ch : s) {
    h ^= ch;
    h *= 1099511628211ull;
  }
  return h;
}

inline std::string hex64(std::uint64_t h) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return std::string(buf);
}

inline std::string json_digest(const Json& j) { return hex64(fnv1a64(j.dump())); }

}  // namespace entwine
