#ifndef FLOWCURV_LINALG_HPP
#define FLOWCURV_LINALG_HPP

#include <vector>

#include "flowcurv/poly.hpp"

namespace flowcurv {

using PolyMatrix = std::vector<std::vector<Poly>>;
using RationalMatrix = std::vector<std::vector<Rational>>;

enum class DetAlgo {
    laplace_dp, // Laplace expansion with memoized minors over column subsets
    bareiss     // fraction-free elimination with exact division
};

/// Determinant of a square polynomial matrix. Both algorithms return
/// the identical canonical polynomial.
Poly determinant(const PolyMatrix& m, DetAlgo algo = DetAlgo::laplace_dp);

/// Exact determinant of a rational matrix by cofactor expansion
/// (test-support oracle; n stays small).
Rational rational_determinant(const RationalMatrix& m);

Rational rational_trace(const RationalMatrix& m);

/// Matrix-vector product over rationals.
std::vector<Rational> apply(const RationalMatrix& m, const std::vector<Rational>& v);

/// Appendix identity: sum_i det(a_1, ..., J a_i, ..., a_n) equals
/// Tr(J) det(a_1, ..., a_n). Both sides evaluated exactly; returns
/// whether they agree.
bool trace_identity_oracle(const RationalMatrix& j, const std::vector<std::vector<Rational>>& vectors);

} // namespace flowcurv

#endif
