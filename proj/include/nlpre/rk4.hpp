// Classical fixed-step fourth-order Runge-Kutta step over Eigen vectors.
#pragma once

#include "nlpre/types.hpp"

namespace nlpre {

/// One RK4 step of x' = f(t, x). The derivative callable must return a
/// vector of the same dimension as the state. Throws IntegrationError when
/// a stage produces a non-finite entry.
template <typename Derivative>
Vec rk4_step(Derivative&& f, const Vec& x, double t, double h) {
    const Vec k1 = f(t, x);
    const Vec k2 = f(t + 0.5 * h, Vec(x + 0.5 * h * k1));
    const Vec k3 = f(t + 0.5 * h, Vec(x + 0.5 * h * k2));
    const Vec k4 = f(t + h, Vec(x + h * k3));
    Vec next = x + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    if (!next.allFinite()) {
        throw IntegrationError("non-finite state after RK4 stage at t=" + std::to_string(t),
                               static_cast<long>(t / h));
    }
    return next;
}

}  // namespace nlpre
