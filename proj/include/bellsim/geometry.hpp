#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "bellsim/errors.hpp"

namespace bellsim {

/// Spacetime point in natural units (c = 1), 1+1 dimensions.
struct Event {
    double x = 0.0;
    double t = 0.0;
};

struct Interval {
    double lo = 0.0;
    double hi = 0.0;
    double length() const { return hi - lo; }
    bool operator==(const Interval&) const = default;
};

/// Union of disjoint closed intervals on the t = 0 slice, kept sorted and
/// normalized (touching intervals merged). Set operations use closure
/// semantics: difference returns the closure of the set difference, so a
/// domain and its complement-within-a-parent may share endpoints but never
/// positive measure.
class CausalDomain {
public:
    CausalDomain() = default;

    static CausalDomain single(double lo, double hi);
    static CausalDomain from_intervals(std::vector<Interval> ivs);

    const std::vector<Interval>& intervals() const { return intervals_; }
    bool empty() const { return intervals_.empty(); }
    std::size_t size() const { return intervals_.size(); }

    double min() const;
    double max() const;
    double total_length() const;

    bool contains(double x) const;
    bool intersects(const CausalDomain& other) const;
    /// Distance from x to the nearest point of the domain (0 if inside).
    double distance_to(double x) const;

    CausalDomain unite(const CausalDomain& other) const;
    CausalDomain intersect(const CausalDomain& other) const;
    /// Closure of the set difference this \ other.
    CausalDomain difference(const CausalDomain& other) const;

    bool operator==(const CausalDomain&) const = default;

private:
    std::vector<Interval> intervals_;
    void normalize();
};

/// Source at the origin, detectors at x = +-D. Particles travel at speed
/// beta and enter the apparatuses at tau = D/beta; spin alignment completes
/// at T = tau + t_align, when the outcomes are read.
struct ExperimentGeometry {
    double D = 1.0;
    double beta = 0.5;
    double t_align = 0.0;
    /// Events where the settings a and b are fixed, if modeled.
    std::optional<std::pair<Event, Event>> choice_events;

    double tau() const { return D / beta; }
    double detection_time() const { return tau() + t_align; }

    Event detection_a() const { return {D, detection_time()}; }
    Event detection_b() const { return {-D, detection_time()}; }

    void validate() const;
    bool operator==(const ExperimentGeometry&) const;
};

struct DomainBlocks {
    CausalDomain omega_a;
    CausalDomain omega_b;
    CausalDomain sigma_a;
    CausalDomain sigma_b;
    CausalDomain sigma_c;
};

/// Base of the past light cone of e on the t = 0 slice: [x - t, x + t].
CausalDomain past_light_cone_base(const Event& e);

/// Cone bases of the two detection events and their partition into
/// sigma_a = omega_a \ sigma_c, sigma_b = omega_b \ sigma_c, sigma_c = overlap.
DomainBlocks experiment_domains(const ExperimentGeometry& g);

/// Half-width of sigma_c at the moment of arrival (t_align = 0): D(1-beta)/beta.
double sigma_c_radius(double D, double beta);

struct ExclusionBoundary {
    double beta_star = 0.5;          // infimum speed excluding the apparatuses
    double radius_at_boundary = 0.0; // equals D exactly
    bool monotone_decreasing = false;
    int grid_points = 0;
};

/// The apparatuses at +-D lie outside sigma_c iff beta > 1/2 (strict); the
/// returned certificate verifies that the radius decreases strictly in beta.
ExclusionBoundary apparatus_exclusion_boundary(double D);

struct WingIndependence {
    bool conspiracy_risk = false;      // past cone base of the choice meets sigma_c
    bool spacelike_from_other = false; // spacelike separated from the other detection
    bool safe_window_nonempty = false;
    /// Supremum of choice times at this position keeping both flags safe
    /// (the conspiracy bound is exclusive); NaN when no safe time exists.
    double latest_safe_time = 0.0;
};

struct IndependenceReport {
    WingIndependence wing_a;
    WingIndependence wing_b;
};

/// Audits the no-conspiracy requirement: each setting choice must neither see
/// sigma_c in its causal past nor be timelike-connected to the opposite
/// detection event.
IndependenceReport settings_independence_report(const ExperimentGeometry& g);

} // namespace bellsim
