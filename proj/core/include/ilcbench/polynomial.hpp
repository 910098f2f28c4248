#pragma once

#include <complex>
#include <cstddef>
#include <vector>

// Polynomials in the unit-delay operator q = z^-1, stored with ascending
// powers: c[0] + c[1] q + c[2] q^2 + ...
namespace ilcbench::poly {

using Coeffs = std::vector<double>;
using Roots = std::vector<std::complex<double>>;

Coeffs multiply(const Coeffs& a, const Coeffs& b);
Coeffs add(const Coeffs& a, const Coeffs& b);
Coeffs scale(Coeffs a, double k);

/// Drop trailing (highest-power) zeros; keeps at least one coefficient.
Coeffs trim_trailing(Coeffs a);

/// Number of leading zero coefficients, i.e. the pure delay factor q^d.
std::size_t leading_zeros(const Coeffs& a);

/// z-plane roots of c[0] + c[1] z^-1 + ... after removing the delay factor.
/// A delay q^d contributes no finite roots.
Roots roots(const Coeffs& a);

/// Ascending q-coefficients of lead * prod_i (1 - r_i q). Complex roots must
/// come in conjugate pairs; the imaginary residue is discarded.
Coeffs from_roots(const Roots& roots, double lead = 1.0);

std::complex<double> evaluate(const Coeffs& a, std::complex<double> q);

bool is_zero(const Coeffs& a) noexcept;

} // namespace ilcbench::poly
