#include <cstdio>
#include <fstream>
#include <iterator>
#include <sstream>

#include "json.hpp"
#include "qdunkl/lattice.hpp"

namespace qdunkl {

namespace {

using json = nlohmann::ordered_json;

[[noreturn]] void schema(const std::string& msg) { throw Error(ErrorCode::schema, msg); }

int line_of(const std::string& text, std::size_t byte) {
  int line = 1;
  for (std::size_t i = 0; i < byte && i < text.size(); ++i)
    if (text[i] == '\n') ++line;
  return line;
}

const json& field(const json& j, const char* name) {
  auto it = j.find(name);
  if (it == j.end()) schema(std::string("missing field '") + name + "'");
  return *it;
}

int integer_field(const json& j, const char* name) {
  const json& v = field(j, name);
  if (!v.is_number_integer()) schema(std::string("field '") + name + "' must be an integer");
  return v.get<int>();
}

std::vector<cplx> branch_field(const json& j, const char* name, std::size_t expected) {
  const json& v = field(j, name);
  if (!v.is_array()) schema(std::string("field '") + name + "' must be an array of [re, im] pairs");
  if (v.size() != expected) {
    std::ostringstream os;
    os << "field '" << name << "' has length " << v.size() << ", expected n_hi - n_lo + 1 = " << expected;
    schema(os.str());
  }
  std::vector<cplx> out;
  out.reserve(expected);
  for (std::size_t i = 0; i < v.size(); ++i) {
    const json& e = v[i];
    if (!e.is_array() || e.size() != 2 || !e[0].is_number() || !e[1].is_number()) {
      std::ostringstream os;
      os << "field '" << name << "[" << i << "]' must be a [re, im] pair of numbers";
      schema(os.str());
    }
    out.emplace_back(e[0].get<double>(), e[1].get<double>());
  }
  return out;
}

json branch_json(const std::vector<cplx>& v) {
  json a = json::array();
  for (const cplx& z : v) a.push_back(json::array({z.real(), z.imag()}));
  return a;
}

}  // namespace

void write_grid_function(std::ostream& os, const GridFunction& f) {
  const QGrid& g = f.grid();
  json j;
  j["q"] = g.q();
  if (g.qp().k()) j["k"] = *g.qp().k();
  j["n_lo"] = g.n_lo();
  j["n_hi"] = g.n_hi();
  j["pos"] = branch_json(f.pos());
  j["neg"] = branch_json(f.neg());
  os << j.dump(1) << '\n';
}

GridFunction read_grid_function(std::istream& is) {
  std::string text((std::istreambuf_iterator<char>(is)), std::istreambuf_iterator<char>());
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    std::ostringstream os;
    os << "malformed file at line " << line_of(text, e.byte) << ": " << e.what();
    schema(os.str());
  }
  if (!j.is_object()) schema("top level must be an object");
  const json& qv = field(j, "q");
  if (!qv.is_number()) schema("field 'q' must be a number");
  const double q = qv.get<double>();
  if (!(q > 0.0 && q < 1.0)) {
    std::ostringstream os;
    os << "field 'q' = " << q << " lies outside (0,1)";
    schema(os.str());
  }
  std::optional<int> k;
  if (j.contains("k") && !j["k"].is_null()) k = integer_field(j, "k");
  const int n_lo = integer_field(j, "n_lo"), n_hi = integer_field(j, "n_hi");
  if (n_lo > n_hi) schema("field 'n_lo' exceeds 'n_hi'");
  std::optional<QParameter> qp;
  try {
    qp.emplace(q, k);
  } catch (const Error& e) {
    schema(std::string("fields 'q'/'k': ") + e.message());
  }
  const std::size_t n = std::size_t(n_hi - n_lo + 1);
  auto pos = branch_field(j, "pos", n);
  auto neg = branch_field(j, "neg", n);
  return GridFunction(QGrid(*qp, n_lo, n_hi), std::move(pos), std::move(neg));
}

void save_grid_function(const std::string& path, const GridFunction& f) {
  std::ofstream os(path);
  if (!os) throw Error(ErrorCode::invalid_argument, "cannot open " + path + " for writing");
  write_grid_function(os, f);
  if (!os) throw Error(ErrorCode::invalid_argument, "failed writing " + path);
}

GridFunction load_grid_function(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw Error(ErrorCode::schema, "cannot open " + path);
  try {
    return read_grid_function(is);
  } catch (const Error& e) {
    throw Error(e.code(), path + ": " + e.message());
  }
}

void write_csv(std::ostream& os, const GridFunction& f) {
  const QGrid& g = f.grid();
  os << "n,x,re,im,branch\n";
  char buf[160];
  for (int s : {1, -1}) {
    for (int n = g.n_lo(); n <= g.n_hi(); ++n) {
      const cplx v = f(s, n);
      std::snprintf(buf, sizeof buf, "%d,%.17g,%.17g,%.17g,%s\n", n, s * g.point(n), v.real(), v.imag(),
                    s > 0 ? "pos" : "neg");
      os << buf;
    }
  }
}

}  // namespace qdunkl
