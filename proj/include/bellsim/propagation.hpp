#pragma once

#include "bellsim/fields.hpp"
#include "bellsim/geometry.hpp"
#include "bellsim/rng.hpp"

namespace bellsim {

/// Field value carried to a spacetime event by the wave evolution.
struct PropagatedField {
    Event event;
    double lambda1 = 0.0;
    double lambda2 = 0.0;
};

/// Euler-Maruyama step model: d(lambda) = -drift_rate * lambda * dt + clipped
/// Gaussian increment. The noise acts on the Cauchy data before the
/// deterministic wave propagation (operator splitting), keeping the causal
/// support of propagate() exact.
struct LangevinSpec {
    double drift_rate = 0.0;  // 1/time, >= 0
    double noise_sigma = 0.0; // diffusion amplitude, >= 0
    double noise_bound = 1.0; // hard bound per increment, > 0
    double dt = 0.01;         // step size, > 0

    void validate() const;
    bool operator==(const LangevinSpec&) const = default;
};

/// d'Alembert solution of the 1+1D unit-speed wave equation: per component,
/// value = (lambda0(x-t) + lambda0(x+t)) / 2 + (1/2) * integral of v0 over
/// [x-t, x+t], with lambda0 and v0 read as piecewise-linear interpolants of
/// the lattice data (the integral is the trapezoid rule with exact partial
/// end cells).
///
/// The cone base must lie within the lattice span; no extrapolation.
/// Causal support is exact when x-t and x+t are lattice nodes; endpoints
/// falling inside a cell additionally read that cell's bounding nodes (one
/// cell of smearing, the interpolation stencil).
PropagatedField propagate(const InitialFieldConfiguration& f, const Event& e);

/// The causal region of initial data the value at e may depend on.
CausalDomain dependence_support(const Event& e);

/// Evolves lambda1 and lambda2 pointwise to t_end. Draw order: per step,
/// component 1 then component 2, lattice points ascending. noise_sigma = 0
/// consumes no randomness and is exactly reproducible.
InitialFieldConfiguration evolve_langevin(const InitialFieldConfiguration& f,
                                          const LangevinSpec& spec, double t_end,
                                          RngStream& rng);

} // namespace bellsim
