#include "mdg/io.hpp"

#include <fstream>
#include <set>
#include <sstream>

namespace mdg {

namespace {

std::string need_string(const json& j, const char* key) {
  if (!j.contains(key) || !j[key].is_string())
    throw Error(ErrorKind::SpecParse, std::string("missing string field '") + key + "'");
  return j[key].get<std::string>();
}

int need_int(const json& j, const char* key) {
  if (!j.contains(key) || !j[key].is_number_integer())
    throw Error(ErrorKind::SpecParse, std::string("missing integer field '") + key + "'");
  return j[key].get<int>();
}

std::string atom_text(const json& a) {
  if (a.is_string()) return a.get<std::string>();
  if (a.is_number_integer()) return std::to_string(a.get<long long>());
  throw Error(ErrorKind::SpecParse, "atom labels must be strings or integers");
}

}  // namespace

LatticeSpec parse_lattice(const json& j) {
  if (!j.is_object()) throw Error(ErrorKind::SpecParse, "lattice spec must be a JSON object");
  LatticeSpec s;
  s.kind = need_string(j, "kind");
  s.name = j.contains("name") && j["name"].is_string() ? j["name"].get<std::string>() : s.kind;
  if (s.kind == "flats") {
    if (!j.contains("atoms") || !j["atoms"].is_array() || !j.contains("flats") || !j["flats"].is_array())
      throw Error(ErrorKind::SpecParse, "flats spec needs 'atoms' and 'flats' arrays");
    std::vector<std::string> atoms;
    for (auto& a : j["atoms"]) atoms.push_back(atom_text(a));
    std::vector<std::vector<std::string>> flats;
    for (auto& f : j["flats"]) {
      if (!f.is_array()) throw Error(ErrorKind::SpecParse, "each flat must be an array of atoms");
      std::vector<std::string> fl;
      for (auto& a : f) fl.push_back(atom_text(a));
      flats.push_back(std::move(fl));
    }
    s.lattice = build_from_flats(atoms, flats);
  } else if (s.kind == "point_line") {
    // Rank 3: the listed lines plus every two-point line not inside one.
    if (!j.contains("atoms") || !j["atoms"].is_array() || !j.contains("lines") || !j["lines"].is_array())
      throw Error(ErrorKind::SpecParse, "point_line spec needs 'atoms' and 'lines' arrays");
    std::vector<std::string> atoms;
    for (auto& a : j["atoms"]) atoms.push_back(atom_text(a));
    std::vector<std::vector<std::string>> flats{{}};
    for (auto& a : atoms) flats.push_back({a});
    std::vector<std::set<std::string>> lines;
    for (auto& ln : j["lines"]) {
      if (!ln.is_array()) throw Error(ErrorKind::SpecParse, "each line must be an array of atoms");
      std::vector<std::string> fl;
      for (auto& a : ln) fl.push_back(atom_text(a));
      lines.emplace_back(fl.begin(), fl.end());
      flats.push_back(std::move(fl));
    }
    for (std::size_t x = 0; x < atoms.size(); ++x)
      for (std::size_t y = x + 1; y < atoms.size(); ++y) {
        bool covered = false;
        for (auto& ln : lines) covered |= ln.count(atoms[x]) && ln.count(atoms[y]);
        if (!covered) flats.push_back({atoms[x], atoms[y]});
      }
    flats.push_back(atoms);
    s.lattice = build_from_flats(atoms, flats);
  } else if (s.kind == "graph") {
    if (!j.contains("edges") || !j["edges"].is_array())
      throw Error(ErrorKind::SpecParse, "graph spec needs an 'edges' array");
    Graph g;
    for (auto& e : j["edges"]) {
      if (!e.is_array() || e.size() != 2) throw Error(ErrorKind::SpecParse, "edges are pairs of vertices");
      g.push_back({atom_text(e[0]), atom_text(e[1])});
    }
    s.lattice = build_from_graph(g);
    s.graph = g;
  } else if (s.kind == "partition") {
    s.lattice = build_partition_lattice(need_int(j, "n"));
  } else if (s.kind == "boolean") {
    int n = need_int(j, "n");
    if (n < 0) throw Error(ErrorKind::SpecParse, "boolean lattice needs n >= 0");
    s.lattice = build_boolean(n);
  } else if (s.kind == "uniform") {
    s.lattice = build_uniform(need_int(j, "rank"), need_int(j, "n"));
  } else {
    throw Error(ErrorKind::SpecParse, "unknown lattice kind '" + s.kind + "'");
  }
  return s;
}

LatticeSpec load_lattice(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::SpecParse, "cannot open " + path);
  json j;
  try {
    j = json::parse(in);
  } catch (const json::exception& e) {
    throw Error(ErrorKind::SpecParse, path + ": " + e.what());
  }
  return parse_lattice(j);
}

json lattice_to_json(const GeometricLattice& l, const std::string& name) {
  json j;
  j["name"] = name;
  j["kind"] = "flats";
  j["atoms"] = l.atoms();
  json flats = json::array();
  for (FlatId f = 0; f < l.num_flats(); ++f) {
    json fl = json::array();
    for (int a : bits_of(l.mask(f))) fl.push_back(l.atom(a));
    flats.push_back(fl);
  }
  j["flats"] = flats;
  return j;
}

std::string rational_str(const mpq_class& q) {
  if (q.get_den() == 1) return q.get_num().get_str();
  return q.get_num().get_str() + "/" + q.get_den().get_str();
}

json certificate_to_json(const Certificate& c) {
  json j;
  j["atoms"] = c.n;
  j["colors"] = c.colors;
  json fl = json::array();
  for (Mask m : c.flats) {
    std::ostringstream os;
    os << std::hex << m;
    fl.push_back(os.str());
  }
  j["flats"] = fl;
  return j;
}

json diagram_to_json(const MDSpace& s, const DiagramKey& k, int sign) {
  const ExtRecord& r = s.ext(k.ext);
  json j;
  j["extension"] = certificate_to_json(r.cert);
  json w = json::array();
  for (int x : s.word(k))
    w.push_back(x < r.num_old ? s.base()->atom(x) : "e" + std::to_string(x - r.num_old + 1));
  j["J"] = w;
  j["sign"] = sign;
  return j;
}

json vector_to_json(const MDSpace& s, const DiagramVector& v) {
  json out = json::array();
  for (auto& [k, c] : v) {
    json t = diagram_to_json(s, k, 1);
    t["coefficient"] = rational_str(c);
    out.push_back(t);
  }
  return out;
}

}  // namespace mdg
