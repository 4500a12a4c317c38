// State-affine plant x' = F(x, u) + R(x) S(theta) and the first-order filter
// bank that turns it into the regression y = Omega S(theta) without
// differentiating the state:
//   z' = -lambda (z + x) - F(x, u),  Omega' = -lambda Omega + R(x),
//   y  = z + x.
#pragma once

#include "nlpre/map.hpp"

#include <functional>

namespace nlpre {

struct GeneralCTPlant {
    Index n = 0;
    Index m = 0;
    std::function<Vec(const Vec&, const Vec&)> F;                 // (x, u) -> R^n
    std::function<Mat(const Vec&)> R;                             // x -> n x p
    FactorizedNPRE npre;
    std::function<Vec(const Vec&, const Vec&, double)> beta;      // (x, theta, t) -> u
};

struct PlantFilterState {
    Vec z;
    Mat Omega;
    double lambda = 1.0;

    static PlantFilterState zero(Index n, Index p, double lambda) {
        return {Vec::Zero(n), Mat::Zero(n, p), lambda};
    }
};

struct PlantFilterDerivative {
    Vec dz;
    Mat dOmega;
};

inline PlantFilterDerivative general_plant_filter_derivative(const PlantFilterState& state,
                                                             const Vec& x, const Vec& u,
                                                             const GeneralCTPlant& plant) {
    return {-state.lambda * (state.z + x) - plant.F(x, u),
            -state.lambda * state.Omega + plant.R(x)};
}

inline Vec plant_filter_output(const PlantFilterState& state, const Vec& x) {
    return state.z + x;
}

}  // namespace nlpre
