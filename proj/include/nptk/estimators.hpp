#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "nptk/commuting_tuple.hpp"
#include "nptk/polynomial.hpp"

namespace nptk {

/// Lower bound for a matrix-function sup norm, with the tuple attaining it.
struct NormEstimate {
  double value = 0.0;
  std::optional<CommutingTuple> witness;
  int evaluations = 0;    // candidate tuples tried
  int accepted = 0;       // candidates that were feasible
  bool feasible = true;   // false when no feasible tuple was found
  std::string warning;
};

/// sup of ||f(x)|| over x in F_p, estimated from below by random tuples of
/// sizes 1..8 and hill climbing on the recipe of the best one. For a fixed
/// seed the value never decreases as the budget grows.
NormEstimate pnorm_estimate(const PolyMatrix& p, const Polynomial& f, int budget, std::uint64_t seed);

/// Same over tuples in F_p that are subordinate to V: scalar tuples on V and
/// direct sums of 2 x 2 blocks along tangent directions of V, under a
/// similarity with condition number at most 10.
NormEstimate pVnorm_estimate(const PolyMatrix& p, const VarietySpec& v, const Polynomial& f, int budget,
                             std::uint64_t seed);

/// Newton projection of l onto the common zero set of the generators;
/// nullopt when it fails to converge to residual <= tol.
std::optional<CVector> project_to_variety(const VarietySpec& v, CVector l, double tol = 1e-13);

}  // namespace nptk
