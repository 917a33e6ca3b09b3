#include "stcalc/sequences.hpp"

namespace stcalc {

double st_number_binet(const StParams<double>& p, int n) {
    if (n < 0) throw Error(ErrorCode::DomainError, "sequences", "index must be nonnegative");
    if (n == 0) return 0.0;
    const double phi = p.phi();
    const double phip = p.phi_prime();
    if (p.degenerate_q()) return n * std::pow(phi, n - 1);
    return (std::pow(phi, n) - std::pow(phip, n)) / (phi - phip);
}

}  // namespace stcalc
