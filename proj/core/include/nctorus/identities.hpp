#pragma once

#include "nctorus/algebra.hpp"

namespace nctorus {

/// Largest defects of the calculus rules for f = h and g = h h, plus a
/// parity probe that is exact only on odd extents.
struct IdentityReport {
    double trace_derivative = 0.0;     ///< max_j |T(d_j f)| / ||f||
    double partial_integration = 0.0;  ///< max_j |T(d_j f g) + T(f d_j g)| / (||f|| ||g||)
    double leibniz = 0.0;              ///< max_j leibniz_defect(f, g) / (||f|| ||g||)
    double star_derivation = 0.0;      ///< max_j ||d_j(f^*) - (d_j f)^*|| / ||f||
    /// max_j ||d_j(z^-1) + z^-1 d_j z z^-1|| / ||z^-1||, with the short-range
    /// invertible z = U_{e_1} (2 + cos diag f) whose inverse is short range too.
    double inverse = 0.0;
    double cyclicity = 0.0;            ///< |T(f g) - T(g f)| / (||f|| ||g||)
    double positivity = 0.0;           ///< min(T(f^* f), T(g^* g)) / max(...), must be >= 0
    /// Same as partial_integration for r = (f + i)^-1 and r^*, which reach
    /// across the whole torus: exact on odd extents only.
    double parity_probe = 0.0;

    /// Short-range checks below `tolerance` and positivity non-negative.
    bool passed(double tolerance = 1e-12) const;
};

IdentityReport calculus_identities(const AlgebraElement& h);

}  // namespace nctorus
