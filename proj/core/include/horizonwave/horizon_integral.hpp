#pragma once

#include "horizonwave/field.hpp"

namespace horizonwave {

struct HorizonIntegralQuadrature {
    double s_cut = -36.0;
    int panels = 4096;
};

/// d_t u|_{t=0}(x) = -int_{-inf}^0 e^s u0(x - 2s) ds for box u + u = 0 on
/// Misner+, truncated at s_cut. Evaluated point by point with a 5-point
/// Gauss rule and direct trigonometric sums of u0, independently of the
/// transport solver.
Field remark22_first_derivative(const Field& u0, const HorizonIntegralQuadrature& quad = {});

}  // namespace horizonwave
