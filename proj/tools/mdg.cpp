// Command-line front end.
//
// Exit codes: 0 pass, 1 check failure, 2 input error, 3 resource limit.
#include <climits>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "mdg/cohomology.hpp"
#include "mdg/extensions.hpp"
#include "mdg/harness.hpp"
#include "mdg/io.hpp"
#include "mdg/modularity.hpp"
#include "mdg/os_algebra.hpp"

using namespace mdg;

namespace {

struct Common {
  std::string lattice;
  int max_atoms = 3;
  int max_rank = 1;
  std::uint64_t seed = 1;
  bool json_out = false;
  std::string dump;
};

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ','))
    if (!item.empty()) out.push_back(item);
  return out;
}

Mask atoms_mask(const GeometricLattice& l, const std::string& list) {
  Mask m = 0;
  for (const auto& a : split_list(list)) {
    int i = l.atom_index(a);
    if (i < 0) throw Error(ErrorKind::SpecParse, "unknown atom '" + a + "'");
    m |= bit(i);
  }
  return m;
}

FlatId parse_flat(const GeometricLattice& l, const std::string& s) {
  if (s.empty() || s == "top") return l.top();
  if (s == "bottom") return l.bottom();
  return l.closure(atoms_mask(l, s));
}

std::string join_ll(const std::vector<long long>& v) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? " " : "") + std::to_string(v[i]);
  return s;
}

void print(const json& j, bool as_json, const std::string& text) {
  if (as_json)
    std::cout << j.dump(2) << "\n";
  else
    std::cout << text;
}

Bounds bounds_of(const Common& c) { return Bounds{c.max_atoms, c.max_rank}; }

HarnessOptions harness_options(const Common& c) {
  HarnessOptions o;
  o.bounds = bounds_of(c);
  o.seed = c.seed;
  o.spec_path = c.lattice;
  o.dump_dir = c.dump;
  return o;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Modular diagrams of geometric lattices"};
  app.require_subcommand(1);
  Common c;
  auto common = [&](CLI::App* sub, bool need_lattice = true) {
    auto* opt = sub->add_option("--lattice", c.lattice, "lattice spec (JSON)");
    if (need_lattice) opt->required();
    sub->add_option("--max-atoms", c.max_atoms, "bound on new atoms of extensions");
    sub->add_option("--max-rank", c.max_rank, "bound on the extra rank of extensions");
    sub->add_option("--seed", c.seed, "seed for sampled checks");
    sub->add_flag("--json", c.json_out, "print JSON");
    sub->add_option("--dump-matrices", c.dump, "directory for the matrices of d");
  };

  auto* validate = app.add_subcommand("validate", "check the geometric lattice axioms");
  common(validate);

  std::string flat_arg;
  auto* modular = app.add_subcommand("modular", "modular flats, or test one flat");
  common(modular);
  modular->add_option("--flat", flat_arg, "comma-separated atoms spanning the flat");

  auto* supersolvable = app.add_subcommand("supersolvable", "search for a maximal modular chain");
  common(supersolvable);

  auto* chordal = app.add_subcommand("chordal", "chordality vs supersolvability of a graph");
  common(chordal);

  std::string word_arg;
  auto* os = app.add_subcommand("os", "Orlik-Solomon algebra");
  os->require_subcommand(1);
  auto* os_hilbert = os->add_subcommand("hilbert", "Hilbert series in the nbc basis");
  common(os_hilbert);
  auto* os_reduce = os->add_subcommand("reduce", "reduce a monomial to the nbc basis");
  common(os_reduce);
  os_reduce->add_option("--word", word_arg, "comma-separated atoms")->required();

  std::string grading_arg = "top";
  int degree_arg = INT_MIN;
  std::size_t index_arg = 0;
  auto* md = app.add_subcommand("md", "modular diagrams");
  md->require_subcommand(1);
  auto* md_basis = md->add_subcommand("basis", "normalized diagrams within the bounds");
  auto* md_diff = md->add_subcommand("diff", "differential of a basis diagram");
  auto* md_coh = md->add_subcommand("cohomology", "truncated cohomology with a stability check");
  for (auto* sub : {md_basis, md_diff, md_coh}) {
    common(sub);
    sub->add_option("--grading", grading_arg, "top, bottom, any, or atoms spanning a flat");
  }
  md_basis->add_option("--degree", degree_arg, "restrict to one degree");
  md_diff->add_option("--index", index_arg, "position in the basis listing")->required();

  auto* ext = app.add_subcommand("extensions", "modular extensions");
  ext->require_subcommand(1);
  auto* ext_enum = ext->add_subcommand("enumerate", "bounded catalogue up to isomorphism");
  common(ext_enum);

  bool all_gradings = false;
  auto* qiso = app.add_subcommand("verify-qiso", "compare truncated H(MD) with OS");
  common(qiso);
  qiso->add_flag("--all-gradings", all_gradings, "every grading, not only the top");

  std::size_t pair_budget = 20000;
  auto* axioms = app.add_subcommand("axioms", "property checks on the bounded basis");
  common(axioms);
  axioms->add_option("--pair-budget", pair_budget, "pairs checked before sampling");
  std::size_t coproduct_budget = 4000;
  axioms->add_option("--coproduct-budget", coproduct_budget, "coproduct checks per law before sampling");

  std::string corpus_dir, out_dir;
  auto* golden = app.add_subcommand("golden", "write canonical reports for a corpus");
  golden->add_option("--corpus", corpus_dir, "directory of lattice specs")->required();
  golden->add_option("--out", out_dir, "output directory")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (golden->parsed()) {
      for (const auto& p : emit_golden(corpus_dir, out_dir)) std::cout << p << "\n";
      return 0;
    }
    LatticeSpec spec = load_lattice(c.lattice);
    const LatticePtr& l = spec.lattice;

    if (validate->parsed()) {
      std::string why = l->check_invariants();
      json j = lattice_to_json(*l, spec.name);
      j["rank"] = l->rank();
      j["valid"] = why.empty();
      if (!why.empty()) j["violation"] = why;
      std::ostringstream t;
      t << spec.name << ": " << l->num_atoms() << " atoms, " << l->num_flats() << " flats, rank "
        << l->rank() << (why.empty() ? ", valid\n" : ", INVALID: " + why + "\n");
      print(j, c.json_out, t.str());
      return why.empty() ? 0 : 1;
    }

    if (modular->parsed()) {
      json j;
      std::ostringstream t;
      if (!flat_arg.empty()) {
        FlatId f = parse_flat(*l, flat_arg);
        ModularityResult r = is_modular(*l, f);
        bool agree = modular_characterizations_agree(*l, f);
        j["flat"] = l->flat_label(f);
        j["modular"] = r.modular;
        j["characterizations_agree"] = agree;
        if (!r.modular) j["witness"] = l->flat_label(r.witness);
        t << l->flat_label(f) << (r.modular ? " modular" : " not modular");
        if (!r.modular) t << " (witness " << l->flat_label(r.witness) << ")";
        t << "\n";
        print(j, c.json_out, t.str());
        return agree ? 0 : 1;
      }
      json fl = json::array();
      for (FlatId f : modular_flats(*l)) {
        fl.push_back(l->flat_label(f));
        t << l->flat_label(f) << "\n";
      }
      j["modular_flats"] = fl;
      print(j, c.json_out, t.str());
      return 0;
    }

    if (supersolvable->parsed()) {
      auto ch = is_supersolvable(l);
      json j;
      std::ostringstream t;
      j["supersolvable"] = ch.has_value();
      if (ch) {
        json fl = json::array(), js = json::array();
        for (FlatId f : ch->chain) fl.push_back(l->flat_label(f));
        for (int s : ch->j_sizes()) js.push_back(s);
        j["chain"] = fl;
        j["j_sizes"] = js;
        t << "supersolvable, |J_i| = " << js.dump() << "\n";
      } else {
        t << "not supersolvable\n";
      }
      print(j, c.json_out, t.str());
      return 0;
    }

    if (chordal->parsed()) {
      if (!spec.graph) throw Error(ErrorKind::SpecParse, "chordal needs a graph spec");
      ChordalityCheck cc = chordality_crosscheck(*spec.graph);
      json j{{"chordal", cc.chordal}, {"supersolvable", cc.supersolvable}, {"agree", cc.agree()}};
      print(j, c.json_out,
            std::string("chordal ") + (cc.chordal ? "yes" : "no") + ", supersolvable " +
                (cc.supersolvable ? "yes" : "no") + "\n");
      return cc.agree() ? 0 : 1;
    }

    if (os_hilbert->parsed()) {
      OSAlgebra a(l);
      auto h = a.hilbert_series();
      json j{{"hilbert", h}, {"top_concentrated", a.top_concentrated()}};
      print(j, c.json_out, "hilbert " + join_ll(h) + "\n");
      return 0;
    }
    if (os_reduce->parsed()) {
      OSAlgebra a(l);
      std::vector<int> w;
      for (const auto& x : split_list(word_arg)) {
        int i = l->atom_index(x);
        if (i < 0) throw Error(ErrorKind::SpecParse, "unknown atom '" + x + "'");
        w.push_back(i);
      }
      OSElement e = a.reduce_word(w);
      json j{{"reduced", a.format(e)}};
      print(j, c.json_out, a.format(e) + "\n");
      return 0;
    }

    if (md_basis->parsed() || md_diff->parsed() || md_coh->parsed()) {
      MDContext ctx;
      MDSpace& s = ctx.space(l);
      const Bounds b = bounds_of(c);
      const FlatId g = grading_arg == "any" ? -1 : parse_flat(*l, grading_arg);
      if (md_coh->parsed()) {
        if (g < 0) throw Error(ErrorKind::SpecParse, "cohomology needs one grading");
        StabilityReport st = cohomology_with_stability(s, g, b, c.dump);
        json j;
        json bt = json::object(), nx = json::object();
        for (auto& [k, h] : st.at.betti) bt[std::to_string(k)] = h;
        for (auto& [k, h] : st.next.betti) nx[std::to_string(k)] = h;
        j["grading"] = l->flat_label(g);
        j["betti"] = bt;
        j["betti_next"] = nx;
        j["stable"] = st.all_stable;
        std::ostringstream t;
        t << "grading " << l->flat_label(g) << "\n";
        for (auto& [k, h] : st.at.betti)
          t << "  H^" << k << " = " << h << (st.stable[k] ? "" : "  (unstable)") << "\n";
        print(j, c.json_out, t.str());
        return 0;
      }
      std::vector<DiagramKey> keys = s.basis(g, md_diff->parsed() ? INT_MIN : degree_arg, b);
      if (md_basis->parsed()) {
        json arr = json::array();
        std::ostringstream t;
        for (std::size_t i = 0; i < keys.size(); ++i) {
          json d = diagram_to_json(s, keys[i]);
          d["degree"] = s.degree(keys[i]);
          arr.push_back(d);
          t << i << "  deg " << s.degree(keys[i]) << "  " << s.describe(keys[i]) << "\n";
        }
        print(arr, c.json_out, t.str());
        return 0;
      }
      if (index_arg >= keys.size()) throw Error(ErrorKind::SpecParse, "index past the end of the basis");
      const DiagramKey& k = keys[index_arg];
      DiagramVector d = s.differential(k);
      json j{{"diagram", diagram_to_json(s, k)}, {"differential", vector_to_json(s, d)},
             {"d_squared_zero", s.differential(d).empty()}};
      std::ostringstream t;
      t << "d " << s.describe(k) << " =\n";
      for (auto& [kk, cc] : d) t << "  " << rational_str(cc) << "  " << s.describe(kk) << "\n";
      print(j, c.json_out, t.str());
      return s.differential(d).empty() ? 0 : 1;
    }

    if (ext_enum->parsed()) {
      CatalogOptions o;
      o.max_new_atoms = c.max_atoms;
      o.max_extra_rank = c.max_rank;
      auto exts = enumerate_modular_extensions(l, o);
      std::map<std::pair<int, int>, int> counts;
      for (auto& e : exts) ++counts[{popcount(e.new_atoms()), e.extra_rank()}];
      json j = json::array();
      std::ostringstream t;
      for (auto& [key, n] : counts) {
        j.push_back({{"new_atoms", key.first}, {"extra_rank", key.second}, {"count", n}});
        t << "new atoms " << key.first << ", extra rank " << key.second << ": " << n << "\n";
      }
      print(j, c.json_out, t.str());
      return 0;
    }

    if (qiso->parsed() || axioms->parsed()) {
      HarnessOptions o = harness_options(c);
      o.all_gradings = all_gradings;
      o.pair_budget = pair_budget;
      o.coproduct_budget = coproduct_budget;
      VerificationReport r = qiso->parsed() ? run_verify_qiso(spec, o) : run_axiom_suite(spec, o);
      print(r.to_json(), c.json_out, r.table());
      return r.pass() ? 0 : 1;
    }
  } catch (const Error& e) {
    std::cerr << "error (" << to_string(e.kind()) << "): " << e.what() << "\n";
    return e.kind() == ErrorKind::ResourceLimit ? 3 : 2;
  }
  return 0;
}
