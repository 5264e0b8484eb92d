#pragma once

// Joint spectral radius brackets by level-wise branch and bound, and the
// highest-weight check that the support of the joint spectrum along the
// k-th fundamental weight equals log r(wedge^k S).

#include <span>
#include <vector>

#include "jspec/spectrum.hpp"

namespace jspec {

struct JsrLevel {
    int depth = 0;
    std::size_t explored = 0; // cumulative node count
    std::size_t frontier = 0; // products kept for extension
    double lower = 0.0;
    double upper = 0.0;
    Word witness;
};

/// Brackets of log r(M), natural-log units.
struct JsrBounds {
    double lower = 0.0;
    double upper = 0.0;
    int depth = 0;
    std::size_t explored = 0;
    double prune_delta = 0.0;
    Word witness; // lower == log rho(product of witness) / |witness|
    std::vector<JsrLevel> levels;
};

inline constexpr double kDefaultPruneDelta = 0.005;

/// lower is the best (1/l) log rho(P) over explored products P of length
/// l <= depth.  upper is a covering bound: every infinite word has a prefix
/// among the pruned or final-level products, each of which carries
/// b(P) = min over its prefixes Q of (1/|Q|) log ||Q||_2, so log r(M) <= max b.
/// A product is pruned once b(P) < lower + prune_delta, with lower taken
/// from the completed level.  Ties for the witness go to the
/// lexicographically smallest word.
JsrBounds jsr_bounds(std::span<const Matrix> mats, int depth, double prune_delta = kDefaultPruneDelta);

struct BergerWangResult {
    int k = 1;
    double lhs = 0.0;   // support of the Cartan body along z_1 + ... + z_k
    double lower = 0.0; // bracket of log r(wedge^k S)
    double upper = 0.0;
    double rhs = 0.0;   // bracket midpoint
    double gap = 0.0;   // distance from lhs to [lower, upper]
    JsrBounds bounds;
};

/// Throws BadIndex unless 1 <= k <= d - 1.
BergerWangResult berger_wang_check(const MatrixSet& set, int k, int depth, const SpectrumEstimate& spectrum,
                                   double prune_delta = kDefaultPruneDelta);

} // namespace jspec
