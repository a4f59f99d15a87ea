#include "nptk/json_io.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "nptk/errors.hpp"

namespace nptk::json_io {

namespace {

const json& field(const json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) throw InputError(std::string("JSON: missing field \"") + key + "\"");
  return j.at(key);
}

double to_real(const json& j) {
  if (!j.is_number()) throw InputError("JSON: expected a number");
  return j.get<double>();
}

std::size_t to_count(const json& j) {
  if (!j.is_number_integer() || j.get<long long>() < 0) throw InputError("JSON: expected a nonnegative integer");
  return j.get<std::size_t>();
}

JordanBlock to_block(const json& j) {
  JordanBlock b{to_vector(field(j, "point")), {}};
  const json& nil = field(j, "nilpotent");
  if (!nil.is_array()) throw InputError("JSON: \"nilpotent\" must be an array of matrices");
  for (const auto& m : nil) b.nilpotent.push_back(to_matrix(m));
  return b;
}

}  // namespace

json load(const std::string& text_or_file) {
  std::string text = text_or_file;
  if (!text.empty() && text.front() == '@') {
    std::ifstream in(text.substr(1));
    if (!in) throw InputError("cannot open input file " + text.substr(1));
    std::ostringstream ss;
    ss << in.rdbuf();
    text = ss.str();
  }
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw InputError(std::string("JSON parse error: ") + e.what());
  }
}

cplx to_complex(const json& j) {
  if (j.is_number()) return j.get<double>();
  if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number())
    throw InputError("JSON: complex numbers are [re, im] pairs");
  const cplx z{j[0].get<double>(), j[1].get<double>()};
  if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) throw InputError("JSON: non-finite complex number");
  return z;
}

json from_complex(cplx z) { return json::array({z.real(), z.imag()}); }

CVector to_vector(const json& j) {
  if (!j.is_array()) throw InputError("JSON: expected an array of complex numbers");
  CVector v;
  for (const auto& e : j) v.push_back(to_complex(e));
  return v;
}

json from_vector(std::span<const cplx> v) {
  json out = json::array();
  for (cplx z : v) out.push_back(from_complex(z));
  return out;
}

ComplexMatrix to_matrix(const json& j) {
  if (!j.is_array() || j.empty()) throw InputError("JSON: a matrix is a nonempty array of rows");
  const std::size_t rows = j.size();
  std::vector<cplx> entries;
  std::size_t cols = 0;
  for (const auto& row : j) {
    const CVector r = to_vector(row);
    if (cols == 0) cols = r.size();
    if (r.size() != cols || cols == 0) throw InputError("JSON: matrix rows must have equal nonzero length");
    entries.insert(entries.end(), r.begin(), r.end());
  }
  return ComplexMatrix::from_entries(rows, cols, std::move(entries));
}

json from_matrix(const ComplexMatrix& m) {
  json out = json::array();
  for (std::size_t i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (std::size_t k = 0; k < m.cols(); ++k) row.push_back(from_complex(m(i, k)));
    out.push_back(std::move(row));
  }
  return out;
}

Point3 to_point3(const json& j) {
  const CVector v = to_vector(j);
  if (v.size() != 3) throw InputError("JSON: a point of C^3 has three coordinates");
  return {v[0], v[1], v[2]};
}

json from_point3(const Point3& z) { return json::array({from_complex(z.z1), from_complex(z.z2), from_complex(z.z3)}); }

Point2 to_point2(const json& j) {
  const CVector v = to_vector(j);
  if (v.size() != 2) throw InputError("JSON: a point of C^2 has two coordinates");
  return {v[0], v[1]};
}

DiscFunction to_disc_function(const json& j) {
  if (j.is_object() && j.contains("poly")) return DiscFunction::polynomial(to_vector(j.at("poly")));
  if (j.is_object() && j.contains("blaschke")) {
    const json& b = j.at("blaschke");
    Blaschke out;
    if (b.contains("zeros")) out.zeros = to_vector(b.at("zeros"));
    if (b.contains("phase")) {
      const json& ph = b.at("phase");
      out.phase = ph.is_number() ? std::polar(1.0, ph.get<double>()) : to_complex(ph);
    }
    if (b.contains("scale")) out.scale = to_real(b.at("scale"));
    return DiscFunction(std::move(out));
  }
  throw InputError("JSON: a disc function is {\"poly\": [...]} or {\"blaschke\": {...}}");
}

TFunction to_tfunction(const json& j) { return TFunction(to_disc_function(field(j, "f1")), to_disc_function(field(j, "f2"))); }

Polynomial to_polynomial(const json& j, std::size_t nvars) {
  const json& ex = field(j, "exponents");
  const json& co = field(j, "coeffs");
  if (!ex.is_array() || !co.is_array() || ex.size() != co.size())
    throw InputError("JSON: polynomial needs equally long \"exponents\" and \"coeffs\"");
  std::vector<Monomial> terms;
  for (std::size_t i = 0; i < ex.size(); ++i) {
    if (!ex[i].is_array()) throw InputError("JSON: exponent entries are integer arrays");
    MultiIndex e;
    for (const auto& k : ex[i]) {
      if (!k.is_number_integer()) throw InputError("JSON: exponents must be integers");
      e.push_back(k.get<int>());
    }
    if (nvars == 0) nvars = e.size();
    terms.push_back({std::move(e), to_complex(co[i])});
  }
  if (nvars == 0) throw InputError("JSON: cannot infer the variable count of an empty polynomial");
  return Polynomial(nvars, std::move(terms));
}

json from_polynomial(const Polynomial& p) {
  json ex = json::array(), co = json::array();
  for (const auto& t : p.terms()) {
    ex.push_back(t.exponents);
    co.push_back(from_complex(t.coeff));
  }
  return {{"exponents", ex}, {"coeffs", co}};
}

PolyMatrix to_polymatrix(const json& j) {
  if (j.is_object() && j.contains("gauge")) {
    const std::string g = field(j, "gauge").get<std::string>();
    const std::size_t d = to_count(field(j, "d"));
    if (d == 0) throw InputError("JSON: gauge dimension must be positive");
    if (g == "polydisc") return PolyMatrix::polydisc(d);
    if (g == "ball") return PolyMatrix::ball(d);
    throw InputError("JSON: unknown gauge \"" + g + "\"");
  }
  if (j.is_object()) return PolyMatrix(1, 1, {to_polynomial(j)});
  if (!j.is_array() || j.empty() || !j[0].is_array() || j[0].empty())
    throw InputError("JSON: a polynomial matrix is a nonempty array of rows of polynomials");
  std::vector<Polynomial> entries;
  const std::size_t cols = j[0].size();
  std::size_t nvars = 0;
  for (const auto& row : j) {
    if (!row.is_array() || row.size() != cols) throw InputError("JSON: polynomial matrix rows must have equal length");
    for (const auto& e : row) {
      entries.push_back(to_polynomial(e, nvars));
      nvars = entries.back().nvars();
    }
  }
  return PolyMatrix(j.size(), cols, std::move(entries));
}

VarietySpec to_variety(const json& j, std::size_t nvars) {
  const json& gens = j.is_object() ? field(j, "generators") : j;
  if (!gens.is_array()) throw InputError("JSON: variety generators must be an array");
  std::vector<Polynomial> out;
  for (const auto& g : gens) out.push_back(to_polynomial(g, nvars));
  return VarietySpec(std::move(out));
}

CommutingTuple to_tuple(const json& j) {
  if (!j.is_object()) throw InputError("JSON: a tuple is an object");
  const json* asm_json = j.contains("assembly") ? &j.at("assembly") : (j.contains("blocks") ? &j : nullptr);
  std::optional<Assembly> a;
  if (asm_json) {
    const json& blocks = field(*asm_json, "blocks");
    if (!blocks.is_array()) throw InputError("JSON: \"blocks\" must be an array");
    std::vector<JordanBlock> bs;
    for (const auto& b : blocks) bs.push_back(to_block(b));
    std::optional<ComplexMatrix> s, s_inv;
    if (asm_json->contains("S")) s = to_matrix(asm_json->at("S"));
    if (asm_json->contains("S_inv")) s_inv = to_matrix(asm_json->at("S_inv"));
    CommutingTuple built = CommutingTuple::from_blocks(std::move(bs), s, s_inv);
    if (!j.contains("matrices")) return built;
    a = *built.assembly();
  }
  const json& ms = field(j, "matrices");
  if (!ms.is_array()) throw InputError("JSON: \"matrices\" must be an array");
  std::vector<ComplexMatrix> mats;
  for (const auto& m : ms) mats.push_back(to_matrix(m));
  if (a) return CommutingTuple::with_assembly(std::move(mats), std::move(*a));
  return CommutingTuple(std::move(mats));
}

json from_tuple(const CommutingTuple& x) {
  json out;
  out["matrices"] = json::array();
  for (const auto& m : x.matrices()) out["matrices"].push_back(from_matrix(m));
  if (x.assembly()) {
    const Assembly& a = *x.assembly();
    json blocks = json::array();
    for (const auto& b : a.blocks) {
      json nil = json::array();
      for (const auto& n : b.nilpotent) nil.push_back(from_matrix(n));
      blocks.push_back({{"point", from_vector(b.point)}, {"nilpotent", nil}});
    }
    out["assembly"] = {{"S", from_matrix(a.s)}, {"S_inv", from_matrix(a.s_inv)}, {"blocks", blocks}};
  }
  return out;
}

EvenModel to_model(const json& j) {
  const json& split = field(j, "split");
  if (!split.is_array() || split.size() != 2) throw InputError("JSON: \"split\" is [n1, n2]");
  DecomposedOperator u =
      DecomposedOperator::unitary(to_matrix(field(j, "U")), to_count(split[0]), to_count(split[1]));
  return EvenModel(std::move(u), Realization::from_colligation(to_matrix(field(j, "L"))));
}

std::string status_name(MembershipStatus s) {
  switch (s) {
    case MembershipStatus::member:
      return "member";
    case MembershipStatus::non_member:
      return "non-member";
    default:
      return "boundary-indeterminate";
  }
}

json from_report(const EnvelopeReport& r) {
  return {{"member", r.member},
          {"status", status_name(r.status)},
          {"closed_form_margin", r.closed_form_margin},
          {"norm_u", r.norm_u},
          {"argmax_r", r.argmax_r},
          {"agreement", r.agreement}};
}

}  // namespace nptk::json_io
