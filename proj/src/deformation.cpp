#include "drnv/deformation.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "drnv/errors.hpp"

namespace drnv {

namespace {

void check_rho(double rho) {
    if (!(rho >= 0.0 && rho < 1.0))
        throw DomainError("deformation radius must lie in [0,1), got " + std::to_string(rho));
}

// log(1 - e^a) for a <= 0, accurate at both ends.
double log1m_exp(double a) {
    return a > -0.6931471805599453 ? std::log(-std::expm1(a)) : std::log1p(-std::exp(a));
}

}  // namespace

double deform_upper_value(double u, double rho) {
    check_rho(rho);
    u = std::clamp(u, 0.0, 1.0);
    if (rho == 0.0) return u;
    const double k = 1.0 / (1.0 - rho);
    // (1 - (1-u)^k)^(1/k)
    return std::exp(log1m_exp(k * std::log1p(-u)) / k);
}

double deform_lower_value(double u, double rho) {
    check_rho(rho);
    u = std::clamp(u, 0.0, 1.0);
    if (rho == 0.0) return u;
    const double k = 1.0 / (1.0 - rho);
    // 1 - (1 - u^k)^(1/k)
    return -std::expm1(log1m_exp(k * std::log(u)) / k);
}

}  // namespace drnv
