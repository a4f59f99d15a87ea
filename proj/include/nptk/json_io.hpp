#pragma once

#include <string>

#include <json.hpp>

#include "nptk/commuting_tuple.hpp"
#include "nptk/crossed_discs.hpp"
#include "nptk/envelope.hpp"
#include "nptk/estimators.hpp"
#include "nptk/polynomial.hpp"
#include "nptk/realization.hpp"

// JSON encodings. Complex numbers are [re, im] pairs (a bare number is read
// as a real). Every parser throws InputError on malformed input.
namespace nptk::json_io {

using json = nlohmann::json;

/// Parses text, or the contents of a file when text starts with '@'.
json load(const std::string& text_or_file);

cplx to_complex(const json& j);
json from_complex(cplx z);
CVector to_vector(const json& j);
json from_vector(std::span<const cplx> v);
/// Array of rows, each an array of complex entries.
ComplexMatrix to_matrix(const json& j);
json from_matrix(const ComplexMatrix& m);

Point3 to_point3(const json& j);
json from_point3(const Point3& z);
Point2 to_point2(const json& j);

/// {"poly": [c0, c1, ...]} or {"blaschke": {"zeros": [...], "phase": z or angle, "scale": s}}.
DiscFunction to_disc_function(const json& j);
/// {"f1": ..., "f2": ...}.
TFunction to_tfunction(const json& j);

/// {"exponents": [[...], ...], "coeffs": [z, ...]}; nvars is inferred from
/// the exponent length unless given.
Polynomial to_polynomial(const json& j, std::size_t nvars = 0);
json from_polynomial(const Polynomial& p);
/// Nested arrays of polynomials, or {"gauge": "polydisc" | "ball", "d": n}.
PolyMatrix to_polymatrix(const json& j);
/// {"generators": [poly, ...]} or a bare array of polynomials.
VarietySpec to_variety(const json& j, std::size_t nvars = 0);

/// {"matrices": [M, ...], "assembly": {"S": M, "S_inv": M, "blocks": [{"point": v, "nilpotent": [M, ...]}]}}
/// or {"blocks": [...]} alone.
CommutingTuple to_tuple(const json& j);
json from_tuple(const CommutingTuple& x);

/// {"U": M, "split": [n1, n2], "L": M}.
EvenModel to_model(const json& j);

json from_report(const EnvelopeReport& r);
std::string status_name(MembershipStatus s);

}  // namespace nptk::json_io
