#pragma once

#include <string>
#include <vector>

#include "nodalfm/scalar.hpp"

namespace nodalfm {

// Univariate polynomial over Q, coefficients from the constant term up,
// no trailing zeros (the zero polynomial is empty).
using UPoly = std::vector<Rational>;

UPoly upoly_trim(UPoly p);
UPoly upoly_derivative(const UPoly& p);
UPoly upoly_mul(const UPoly& a, const UPoly& b);
// quotient and remainder; b nonzero
void upoly_divmod(const UPoly& a, const UPoly& b, UPoly& q, UPoly& r);
UPoly upoly_monic(const UPoly& p);
UPoly upoly_gcd(const UPoly& a, const UPoly& b);
UPoly upoly_squarefree_part(const UPoly& p);
Rational upoly_eval(const UPoly& p, const Rational& x);
std::string upoly_to_string(const UPoly& p, const std::string& var = "t");

// Rational roots of p (distinct). Candidates come from a floating-point root
// finder and are kept only if they are exact roots; see the .cpp.
std::vector<Rational> upoly_rational_roots(const UPoly& p);

}  // namespace nodalfm
