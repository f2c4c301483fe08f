#include "bellsim/propagation.hpp"

#include <algorithm>
#include <cmath>

#include "bellsim/errors.hpp"

namespace bellsim {

void LangevinSpec::validate() const {
    if (!std::isfinite(drift_rate) || drift_rate < 0.0)
        throw config_error("drift_rate must be >= 0");
    if (!std::isfinite(noise_sigma) || noise_sigma < 0.0)
        throw config_error("noise_sigma must be >= 0");
    if (!std::isfinite(noise_bound) || noise_bound <= 0.0)
        throw config_error("noise_bound must be > 0");
    if (!std::isfinite(dt) || dt <= 0.0) throw config_error("dt must be > 0");
}

namespace {

struct Locator {
    int cell;    // node index; position is x(cell) + frac * spacing
    double frac; // 0 exactly when x is a lattice node
};

// Locates x on the lattice with exact-node detection, so nodal data is
// reproduced bitwise and the stencil never widens past the containing cell.
Locator locate(const Lattice& lat, double x) {
    int i = static_cast<int>(std::floor((x - lat.x_min) / lat.spacing()));
    i = std::clamp(i, 0, lat.n - 2);
    while (i > 0 && x < lat.x(i)) --i;
    while (i < lat.n - 2 && x > lat.x(i + 1)) ++i;
    if (x == lat.x(i)) return {i, 0.0};
    if (x == lat.x(i + 1)) return {i + 1, 0.0};
    return {i, (x - lat.x(i)) / lat.spacing()};
}

double value_at(const std::vector<double>& v, const Locator& loc) {
    const auto i = static_cast<std::size_t>(loc.cell);
    if (loc.frac == 0.0) return v[i];
    return v[i] + loc.frac * (v[i + 1] - v[i]);
}

double interpolate(const Lattice& lat, const std::vector<double>& v, double x) {
    return value_at(v, locate(lat, x));
}

// Exact integral of the piecewise-linear interpolant of v over [a, b].
double integrate(const Lattice& lat, const std::vector<double>& v, double a, double b) {
    if (!(b > a)) return 0.0;
    const double dx = lat.spacing();
    const Locator la = locate(lat, a);
    const Locator lb = locate(lat, b);
    const double ua = la.cell + la.frac;
    const double ub = lb.cell + lb.frac;
    const int ia = static_cast<int>(std::ceil(ua));  // first node at or after a
    const int ib = static_cast<int>(std::floor(ub)); // last node at or before b
    if (ia > ib) // both endpoints inside one cell
        return 0.5 * (value_at(v, la) + value_at(v, lb)) * (b - a);
    double total = 0.0;
    if (ua < ia)
        total += 0.5 * (value_at(v, la) + v[static_cast<std::size_t>(ia)]) * (lat.x(ia) - a);
    for (int i = ia; i < ib; ++i)
        total += 0.5 * (v[static_cast<std::size_t>(i)] + v[static_cast<std::size_t>(i + 1)]) * dx;
    if (ub > ib)
        total += 0.5 * (v[static_cast<std::size_t>(ib)] + value_at(v, lb)) * (b - lat.x(ib));
    return total;
}

} // namespace

CausalDomain dependence_support(const Event& e) { return past_light_cone_base(e); }

PropagatedField propagate(const InitialFieldConfiguration& f, const Event& e) {
    if (!std::isfinite(e.x) || !std::isfinite(e.t)) throw config_error("event must be finite");
    if (e.t < 0.0) throw config_error("propagate requires t >= 0");
    const Lattice& lat = f.lattice;
    const double a = e.x - e.t;
    const double b = e.x + e.t;
    if (a < lat.x_min || b > lat.x_max)
        throw config_error("cone base exceeds lattice span; no extrapolation");

    PropagatedField out;
    out.event = e;
    const double velocity_term = 0.5 * integrate(lat, f.v0, a, b);
    out.lambda1 =
        0.5 * (interpolate(lat, f.lambda1, a) + interpolate(lat, f.lambda1, b)) + velocity_term;
    out.lambda2 =
        0.5 * (interpolate(lat, f.lambda2, a) + interpolate(lat, f.lambda2, b)) + velocity_term;
    return out;
}

InitialFieldConfiguration evolve_langevin(const InitialFieldConfiguration& f,
                                          const LangevinSpec& spec, double t_end,
                                          RngStream& rng) {
    spec.validate();
    f.validate();
    if (!std::isfinite(t_end) || t_end < 0.0) throw config_error("t_end must be >= 0");
    const double steps_exact = t_end / spec.dt;
    const double steps_rounded = std::round(steps_exact);
    if (std::abs(steps_exact - steps_rounded) > 1e-12)
        throw config_error("dt must divide t_end within 1e-12");
    const auto steps = static_cast<long>(steps_rounded);

    InitialFieldConfiguration out = f;
    const double factor = 1.0 - spec.drift_rate * spec.dt;
    const double amp = spec.noise_sigma * std::sqrt(spec.dt);
    for (long s = 0; s < steps; ++s) {
        for (auto* component : {&out.lambda1, &out.lambda2}) {
            for (double& value : *component) {
                value *= factor;
                if (spec.noise_sigma > 0.0)
                    value += std::clamp(amp * rng.normal(), -spec.noise_bound, spec.noise_bound);
            }
        }
    }
    return out;
}

} // namespace bellsim
