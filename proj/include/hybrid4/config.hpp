#pragma once

namespace hybrid4 {

/// Tolerances shared by every module. Binary64 stands in for the quadruple
/// precision a production run of the rule generator would use, hence the
/// relaxed moment and geometric thresholds.
struct Tolerances {
    double ortho = 1e-12;    // ||Q^T Q - I||_inf for congruence witnesses
    double geom = 1e-12;     // vertex mapping error, relative to element size
    double vol = 1e-14;      // below this an element counts as degenerate
    double dedup = 1e-12;    // tolerance-hash fallback for imported vertices
    double moment = 1e-12;   // quadrature moment residual
    double weight_sum = 1e-13;
};

inline constexpr Tolerances default_tolerances{};

} // namespace hybrid4
