// Command line front end.  Batch commands over structure / cochain files;
// reports as text or JSON with a stable key order.  Exit codes: 0 all checks
// pass, 1 a mathematical check failed (witness printed), 2 usage or parse
// error.

#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "entwine/complexes.hpp"
#include "entwine/io.hpp"
#include "entwine/morita.hpp"
#include "entwine/omega.hpp"
#include "entwine/pairing.hpp"
#include "entwine/structures.hpp"

using namespace entwine;

namespace {

struct Options {
  std::string field_flag;  // empty: take the field from the file
  std::string output = "text";
  int threads = 1;  // cap on internal parallelism; output independent of it
  long long max_dim = Limits{}.max_dim;

  std::string command;
  std::string structure_path;
  std::string cochain_path;
  std::string structure2_path;
  std::string cochain2_path;
  std::string theory = "hochschild";
  int max_degree = -1;  // -1: take the per command default after parsing
  bool bases = false;
  int ext_r = 2;
  std::string unit_text;
  std::string inverse_text;
};

Field resolve_field(const Options& opt, const StructureFile& f) {
  if (opt.field_flag.empty()) return f.field;
  return Field::parse(opt.field_flag);
}

Json items_json(const Report& rep) {
  Json arr = Json::array();
  for (const CheckItem& it : rep.items) {
    Json e;
    e["name"] = it.name;
    e["ok"] = it.ok;
    e["witness"] = it.witness;
    arr.push_back(e);
  }
  return arr;
}

void print_items_text(std::ostream& os, const Report& rep) {
  for (const CheckItem& it : rep.items) {
    if (it.ok) {
      os << "  ok " << it.name;
      if (!it.witness.empty()) os << " [" << it.witness << "]";
      os << "\n";
    } else {
      os << "  FAIL " << it.name;
      if (!it.witness.empty()) os << ": " << it.witness;
      os << "\n";
    }
  }
}

// Shared skeleton: header, per item lines, verdict.  Returns the exit code.
int emit_report(const Options& opt, const std::string& command, Json header,
                const Report& rep, const Json& extra = Json()) {
  if (opt.output == "json") {
    Json j;
    j["command"] = command;
    for (auto& [k, v] : header.items()) j[k] = v;
    j["ok"] = rep.ok();
    j["items"] = items_json(rep);
    if (!extra.is_null())
      for (auto& [k, v] : extra.items()) j[k] = v;
    std::cout << j.dump(2) << "\n";
  } else {
    std::cout << command;
    for (auto& [k, v] : header.items())
      std::cout << " " << k << "=" << (v.is_string() ? v.get<std::string>() : v.dump());
    std::cout << "\n";
    print_items_text(std::cout, rep);
    std::cout << (rep.ok() ? "PASS" : "FAIL") << "\n";
  }
  return rep.ok() ? 0 : 1;
}

template <class S>
DVec<S> cochain_as(const CochainFile& c, const Field& fld) {
  return vec_from_rat<S>(c.values, fld);
}

DVec<Rat> parse_vector(const std::string& text, int dim, const char* what) {
  std::vector<std::string> parts;
  std::string cur;
  std::stringstream ss(text);
  while (std::getline(ss, cur, ',')) parts.push_back(cur);
  if (int(parts.size()) != dim)
    throw EntwineError(std::string(what) + ": expected " + std::to_string(dim) +
                       " comma separated scalars, got " +
                       std::to_string(parts.size()));
  DVec<Rat> v = zero_vec<Rat>(dim);
  for (int i = 0; i < dim; ++i) v(i) = rat_from_string(parts[std::size_t(i)]);
  return v;
}

template <class S>
Json basis_entries(const SpMat<S>& basis) {
  Json arr = Json::array();
  for (int j = 0; j < basis.cols(); ++j) {
    Json vec = Json::array();
    DVec<S> col = sparse_col(basis, j);
    for (int i = 0; i < col.size(); ++i)
      if (!is_zero(col(i))) vec.push_back({i, scalar_str(col(i))});
    arr.push_back(vec);
  }
  return arr;
}

template <class S>
int cmd_validate(const Options& opt, const StructureFile& f, const Field& fld) {
  EntwiningStructure<S> s = structure_from_rat<S>(f.s, fld);
  Report rep = validate(s);
  Json header;
  header["field"] = fld.str();
  header["input"] = f.name;
  header["digest"] = json_digest(structure_json(f));
  return emit_report(opt, "validate", header, rep);
}

template <class S>
int cmd_cohomology(const Options& opt, const StructureFile& f,
                   const Field& fld) {
  EntwiningStructure<S> s = structure_from_rat<S>(f.s, fld);
  Theory th = theory_from_string(opt.theory);
  Json rows = Json::array();
  Json bases = Json::array();
  std::ostringstream table;
  table << "  n ambient subspace cocycles coboundaries dim\n";
  for (int n = 0; n <= opt.max_degree; ++n) {
    CohomologyResult<S> r = cohomology(s, th, n, opt.max_dim);
    Json row;
    row["degree"] = n;
    row["ambient"] = r.ambient_dim;
    row["subspace"] = r.subspace_dim;
    row["cocycles"] = r.cocycle_dim;
    row["coboundaries"] = r.coboundary_dim;
    row["dim"] = r.dim;
    rows.push_back(row);
    if (opt.bases) {
      Json b;
      b["degree"] = n;
      b["cocycles"] = basis_entries(r.cocycle_basis);
      b["coboundaries"] = basis_entries(r.coboundary_basis);
      bases.push_back(b);
    }
    table << "  " << n << " " << r.ambient_dim << " " << r.subspace_dim << " "
          << r.cocycle_dim << " " << r.coboundary_dim << " " << r.dim << "\n";
  }
  if (opt.output == "json") {
    Json j;
    j["command"] = "cohomology";
    j["field"] = fld.str();
    j["input"] = f.name;
    j["digest"] = json_digest(structure_json(f));
    j["theory"] = theory_str(th);
    j["rows"] = rows;
    if (opt.bases) j["bases"] = bases;
    j["ok"] = true;
    std::cout << j.dump(2) << "\n";
  } else {
    std::cout << "cohomology field=" << fld.str() << " theory=" << theory_str(th)
              << " input=" << f.name << "\n"
              << table.str() << "PASS\n";
  }
  return 0;
}

template <class S>
int cmd_cocyclic(const Options& opt, const StructureFile& f, const Field& fld) {
  EntwiningStructure<S> s = structure_from_rat<S>(f.s, fld);
  Report rep = cocyclic_check(s, opt.max_degree, opt.max_dim);
  Json header;
  header["field"] = fld.str();
  header["input"] = f.name;
  header["max_degree"] = opt.max_degree;
  return emit_report(opt, "cocyclic-check", header, rep);
}

template <class S>
int cmd_morita(const Options& opt, const StructureFile& f, const Field& fld) {
  EntwiningStructure<S> s = structure_from_rat<S>(f.s, fld);
  Report rep = morita_report(s, opt.ext_r, opt.max_degree, opt.max_dim);
  Json header;
  header["field"] = fld.str();
  header["input"] = f.name;
  header["r"] = opt.ext_r;
  header["max_degree"] = opt.max_degree;
  return emit_report(opt, "morita", header, rep);
}

template <class S>
int cmd_trace_check(const Options& opt, const StructureFile& f,
                    const Field& fld) {
  EntwiningStructure<S> s = structure_from_rat<S>(f.s, fld);
  CochainFile c = load_cochain_file(opt.cochain_path, s.dimA(), s.dimC());
  DVec<S> g = cochain_as<S>(c, fld);
  int n = c.degree;
  DgEntwining<S> dg = omega_build(s, n < 1 ? 1 : n, opt.max_dim);
  EntwinedTrace<S> T = trace_from_cocycle(s, g, n);
  Report rep = validate_trace(dg, T);
  DVec<S> back = character(dg, T, n);
  rep.check("character recovers the cochain", dvec_equal(back, g), "");
  Json header;
  header["field"] = fld.str();
  header["input"] = f.name;
  header["degree"] = n;
  return emit_report(opt, "trace-check", header, rep);
}

template <class S>
int cmd_pair(const Options& opt, const StructureFile& f1, const Field& fld) {
  StructureFile f2 = load_structure_file(opt.structure2_path);
  if (opt.field_flag.empty() && !(f2.field == fld))
    throw EntwineError("pair: the two structure files declare different fields"
                       " (" + fld.str() + " vs " + f2.field.str() +
                       "); pass --field to override");
  EntwiningStructure<S> s1 = structure_from_rat<S>(f1.s, fld);
  EntwiningStructure<S> s2 = structure_from_rat<S>(f2.s, fld);
  CochainFile c1 = load_cochain_file(opt.cochain_path, s1.dimA(), s1.dimC());
  CochainFile c2 = load_cochain_file(opt.cochain2_path, s2.dimA(), s2.dimC());
  DVec<S> g1 = cochain_as<S>(c1, fld);
  DVec<S> g2 = cochain_as<S>(c2, fld);
  Report rep = pairing_report(s1, g1, c1.degree, s2, g2, c2.degree, opt.max_dim);
  Json header;
  header["field"] = fld.str();
  Json inputs;
  inputs["left_structure"] = json_digest(structure_json(f1));
  inputs["left_cocycle"] =
      json_digest(cochain_json(c1.values, c1.degree, s1.dimA(), s1.dimC()));
  inputs["right_structure"] = json_digest(structure_json(f2));
  inputs["right_cocycle"] =
      json_digest(cochain_json(c2.values, c2.degree, s2.dimA(), s2.dimC()));
  header["inputs"] = inputs;
  Json extra;
  if (rep.ok()) {
    DVec<S> paired =
        pair_cocycles(s1, g1, c1.degree, s2, g2, c2.degree, opt.max_dim);
    EntwiningStructure<S> tp = tensor_structure(s1, s2, int(opt.max_dim));
    extra["paired"] =
        cochain_json(paired, c1.degree + c2.degree, tp.dimA(), tp.dimC());
  }
  return emit_report(opt, "pair", header, rep, extra);
}

template <class S>
int cmd_conjugation(const Options& opt, const StructureFile& f,
                    const Field& fld) {
  EntwiningStructure<S> s = structure_from_rat<S>(f.s, fld);
  CochainFile c = load_cochain_file(opt.cochain_path, s.dimA(), s.dimC());
  DVec<S> g = cochain_as<S>(c, fld);
  DVec<S> x =
      vec_from_rat<S>(parse_vector(opt.unit_text, s.dimA(), "--unit"), fld);
  DVec<S> y = vec_from_rat<S>(parse_vector(opt.inverse_text, s.dimA(), "--inverse"),
                              fld);
  Report rep = conjugation_check(s, x, y, g, opt.max_dim);
  Json header;
  header["field"] = fld.str();
  header["input"] = f.name;
  header["degree"] = c.degree;
  return emit_report(opt, "conjugation-check", header, rep);
}

template <class S>
int run_command(const Options& opt, const StructureFile& f, const Field& fld) {
  if (opt.command == "validate") return cmd_validate<S>(opt, f, fld);
  if (opt.command == "cohomology") return cmd_cohomology<S>(opt, f, fld);
  if (opt.command == "cocyclic-check") return cmd_cocyclic<S>(opt, f, fld);
  if (opt.command == "morita") return cmd_morita<S>(opt, f, fld);
  if (opt.command == "trace-check") return cmd_trace_check<S>(opt, f, fld);
  if (opt.command == "pair") return cmd_pair<S>(opt, f, fld);
  if (opt.command == "conjugation-check") return cmd_conjugation<S>(opt, f, fld);
  throw EntwineError("unknown command " + opt.command);
}

}  // namespace

int main(int argc, char** argv) {
  Options opt;
  CLI::App app{"exact Hochschild and cyclic cohomology of entwining structures"};
  app.require_subcommand(1);
  app.add_option("--field", opt.field_flag,
                 "q or fp:P, overrides the field stored in the file");
  app.add_option("--output", opt.output, "report format")
      ->check(CLI::IsMember({"text", "json"}));
  app.add_option("--threads", opt.threads,
                 "cap on internal parallelism (output independent of it)")
      ->check(CLI::Range(1, 256));
  app.add_option("--max-dim-guard", opt.max_dim,
                 "refuse chain spaces with more basis elements than this")
      ->check(CLI::PositiveNumber);

  CLI::App* c;
  c = app.add_subcommand("validate", "check the entwining axioms");
  c->add_option("structure", opt.structure_path, "structure file")->required();

  c = app.add_subcommand("cohomology", "dimension table, optional bases");
  c->add_option("structure", opt.structure_path, "structure file")->required();
  c->add_option("--theory", opt.theory, "hochschild, cyclic or invariant")
      ->check(CLI::IsMember({"hochschild", "cyclic", "invariant"}));
  c->add_option("--max-degree", opt.max_degree, "top degree of the table")
      ->check(CLI::Range(0, 8));
  c->add_flag("--bases", opt.bases, "include cocycle and coboundary bases");

  c = app.add_subcommand("cocyclic-check",
                         "cosimplicial and cyclic operator identities");
  c->add_option("structure", opt.structure_path, "structure file")->required();
  c->add_option("--max-degree", opt.max_degree, "top degree checked")
      ->check(CLI::Range(0, 6));

  c = app.add_subcommand("morita", "matrix extension invariance certificate");
  c->add_option("structure", opt.structure_path, "structure file")->required();
  c->add_option("--r", opt.ext_r, "matrix size of the extension")
      ->check(CLI::Range(1, 6));
  c->add_option("--max-degree", opt.max_degree, "top degree checked")
      ->check(CLI::Range(0, 6));

  c = app.add_subcommand("trace-check",
                         "entwined trace attached to a cyclic cochain");
  c->add_option("structure", opt.structure_path, "structure file")->required();
  c->add_option("cochain", opt.cochain_path, "cochain file")->required();

  c = app.add_subcommand("pair", "cup product pairing of two cyclic cocycles");
  c->add_option("structure1", opt.structure_path, "left structure file")
      ->required();
  c->add_option("cochain1", opt.cochain_path, "left cocycle file")->required();
  c->add_option("structure2", opt.structure2_path, "right structure file")
      ->required();
  c->add_option("cochain2", opt.cochain2_path, "right cocycle file")->required();

  c = app.add_subcommand("conjugation-check",
                         "pullback along an inner automorphism");
  c->add_option("structure", opt.structure_path, "structure file")->required();
  c->add_option("cochain", opt.cochain_path, "cochain file")->required();
  c->add_option("--unit", opt.unit_text, "comma separated coordinates of x")
      ->required();
  c->add_option("--inverse", opt.inverse_text,
                "comma separated coordinates of x^-1")
      ->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }
  opt.command = app.get_subcommands().at(0)->get_name();
  if (opt.max_degree < 0) {
    if (opt.command == "cohomology") opt.max_degree = 4;
    else if (opt.command == "cocyclic-check") opt.max_degree = 3;
    else opt.max_degree = 2;
  }

  try {
    StructureFile f = load_structure_file(opt.structure_path);
    Field fld = resolve_field(opt, f);
    if (fld.kind == Field::Kind::Q) return run_command<Rat>(opt, f, fld);
    return run_command<Fp>(opt, f, fld);
  } catch (const EntwineError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
