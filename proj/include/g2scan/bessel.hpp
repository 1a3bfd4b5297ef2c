// Copyright (c) 2026, The g2scan Authors
// SPDX-License-Identifier: Apache-2.0
//
// The modified Bessel function K_0 on balls.

#ifndef G2SCAN_BESSEL_HPP
#define G2SCAN_BESSEL_HPP

#include "g2scan/ball.hpp"

namespace g2scan {

// K_0 at an exact point x > 0, enclosed at the given precision.  Small x use
// the power series with a rigorous tail; large x use the asymptotic
// expansion, whose remainder is bounded by the first omitted term.
Ball bessel_k0(mpfr_srcptr x, mpfr_prec_t prec);

// K_0 over a ball (K_0 is decreasing, so the endpoints suffice).  Throws
// std::domain_error unless x > 0.
Ball bessel_k0(const Ball& x);

}  // namespace g2scan

#endif  // G2SCAN_BESSEL_HPP
