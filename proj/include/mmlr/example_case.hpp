#pragma once

#include "mmlr/geometry.hpp"
#include "mmlr/matrix.hpp"
#include "mmlr/verify.hpp"

namespace mmlr {

// The built-in worked example: a 6-dimensional ambient space, a 3-dimensional
// range spanned by the first three coordinates, and a 4-row sketch chosen so
// that every subspace in the range decomposition is nontrivial and the
// largest principal angle between Z and the range is exactly 45 degrees.
// Exposed so tests can reuse the same fixed matrices.
DenseMatrix example_q();       // 6x3, columns e1, e2, e3
DenseMatrix example_s();       // 4x6, rows e1, e2, e3+e6, e2+e5
DenseMatrix example_z();       // 3x6, rows e1, e2+e5/2, e3+e6

// Evaluates every closed-form quantity of the example against its expected
// value and returns the checks as "example:" reports. All comparisons are at
// 1e-12 except angle-derived quantities at 1e-10. Failures are report
// entries, never exceptions.
RunReport cmd_paper_example(double angle_tol = default_angle_tol);

}  // namespace mmlr
