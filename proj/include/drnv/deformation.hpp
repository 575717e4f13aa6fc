#pragma once

namespace drnv {

/// Double-power deformation of a CDF value u in [0,1] with radius rho in [0,1).
///
/// With k = 1/(1-rho):
///   upper(u) = (1 - (1-u)^k)^(1/k)      (>= u, tends to H(0) as rho -> 1)
///   lower(u) = 1 - (1 - u^k)^(1/k)      (<= u, tends to H(1) as rho -> 1)
/// The pair satisfies upper(1-u) = 1 - lower(u), and each operator is the
/// inverse of the other: upper(lower(p)) = p.
double deform_upper_value(double u, double rho);
double deform_lower_value(double u, double rho);

inline double deform_upper_inverse(double p, double rho) { return deform_lower_value(p, rho); }
inline double deform_lower_inverse(double p, double rho) { return deform_upper_value(p, rho); }

}  // namespace drnv
