#include "bellsim/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace bellsim {

namespace {
bool finite(double v) { return std::isfinite(v); }
} // namespace

CausalDomain CausalDomain::single(double lo, double hi) {
    if (!finite(lo) || !finite(hi)) throw config_error("interval bounds must be finite");
    if (lo > hi) throw config_error("interval requires lo <= hi");
    CausalDomain d;
    d.intervals_.push_back({lo, hi});
    return d;
}

CausalDomain CausalDomain::from_intervals(std::vector<Interval> ivs) {
    for (const auto& iv : ivs) {
        if (!finite(iv.lo) || !finite(iv.hi)) throw config_error("interval bounds must be finite");
        if (iv.lo > iv.hi) throw config_error("interval requires lo <= hi");
    }
    CausalDomain d;
    d.intervals_ = std::move(ivs);
    d.normalize();
    return d;
}

void CausalDomain::normalize() {
    if (intervals_.empty()) return;
    std::sort(intervals_.begin(), intervals_.end(),
              [](const Interval& a, const Interval& b) { return a.lo < b.lo; });
    std::vector<Interval> merged;
    merged.push_back(intervals_.front());
    for (std::size_t i = 1; i < intervals_.size(); ++i) {
        Interval& last = merged.back();
        const Interval& cur = intervals_[i];
        if (cur.lo <= last.hi) {
            last.hi = std::max(last.hi, cur.hi);
        } else {
            merged.push_back(cur);
        }
    }
    intervals_ = std::move(merged);
}

double CausalDomain::min() const {
    if (empty()) throw config_error("min() of empty domain");
    return intervals_.front().lo;
}

double CausalDomain::max() const {
    if (empty()) throw config_error("max() of empty domain");
    return intervals_.back().hi;
}

double CausalDomain::total_length() const {
    double s = 0.0;
    for (const auto& iv : intervals_) s += iv.length();
    return s;
}

bool CausalDomain::contains(double x) const {
    for (const auto& iv : intervals_) {
        if (x < iv.lo) return false;
        if (x <= iv.hi) return true;
    }
    return false;
}

bool CausalDomain::intersects(const CausalDomain& other) const {
    std::size_t i = 0, j = 0;
    while (i < intervals_.size() && j < other.intervals_.size()) {
        const Interval& a = intervals_[i];
        const Interval& b = other.intervals_[j];
        if (std::max(a.lo, b.lo) <= std::min(a.hi, b.hi)) return true;
        if (a.hi < b.hi) ++i; else ++j;
    }
    return false;
}

double CausalDomain::distance_to(double x) const {
    double best = std::numeric_limits<double>::infinity();
    for (const auto& iv : intervals_) {
        if (x >= iv.lo && x <= iv.hi) return 0.0;
        best = std::min(best, x < iv.lo ? iv.lo - x : x - iv.hi);
    }
    return best;
}

CausalDomain CausalDomain::unite(const CausalDomain& other) const {
    std::vector<Interval> all = intervals_;
    all.insert(all.end(), other.intervals_.begin(), other.intervals_.end());
    return from_intervals(std::move(all));
}

CausalDomain CausalDomain::intersect(const CausalDomain& other) const {
    std::vector<Interval> out;
    std::size_t i = 0, j = 0;
    while (i < intervals_.size() && j < other.intervals_.size()) {
        const Interval& a = intervals_[i];
        const Interval& b = other.intervals_[j];
        const double lo = std::max(a.lo, b.lo);
        const double hi = std::min(a.hi, b.hi);
        if (lo <= hi) out.push_back({lo, hi});
        if (a.hi < b.hi) ++i; else ++j;
    }
    return from_intervals(std::move(out));
}

CausalDomain CausalDomain::difference(const CausalDomain& other) const {
    std::vector<Interval> out;
    for (const auto& a : intervals_) {
        double cur = a.lo;
        bool open = true; // piece [cur, ...] still pending
        for (const auto& b : other.intervals_) {
            if (b.hi < a.lo) continue;
            if (b.lo > a.hi) break;
            if (b.lo > cur) out.push_back({cur, std::min(b.lo, a.hi)});
            cur = std::max(cur, b.hi);
            if (cur >= a.hi) {
                // a is fully consumed unless it is a degenerate point outside b
                open = a.lo == a.hi && !other.contains(a.lo);
                break;
            }
        }
        if (open && cur < a.hi) {
            out.push_back({cur, a.hi});
        } else if (open && a.lo == a.hi && !other.contains(a.lo)) {
            out.push_back({a.lo, a.hi});
        }
    }
    return from_intervals(std::move(out));
}

void ExperimentGeometry::validate() const {
    if (!finite(D) || D <= 0.0) throw config_error("D must be positive and finite");
    if (!finite(beta) || beta <= 0.0 || beta > 1.0) throw config_error("beta out of (0,1]");
    if (!finite(t_align) || t_align < 0.0) throw config_error("t_align must be >= 0");
    if (choice_events) {
        for (const Event* e : {&choice_events->first, &choice_events->second}) {
            if (!finite(e->x) || !finite(e->t) || e->t < 0.0)
                throw config_error("choice events require finite coordinates and t >= 0");
        }
    }
}

bool ExperimentGeometry::operator==(const ExperimentGeometry& o) const {
    if (D != o.D || beta != o.beta || t_align != o.t_align) return false;
    if (choice_events.has_value() != o.choice_events.has_value()) return false;
    if (!choice_events) return true;
    const auto& [ea, eb] = *choice_events;
    const auto& [fa, fb] = *o.choice_events;
    return ea.x == fa.x && ea.t == fa.t && eb.x == fb.x && eb.t == fb.t;
}

CausalDomain past_light_cone_base(const Event& e) {
    if (!finite(e.x) || !finite(e.t)) throw config_error("event coordinates must be finite");
    if (e.t < 0.0) throw config_error("past light cone requires t >= 0");
    return CausalDomain::single(e.x - e.t, e.x + e.t);
}

DomainBlocks experiment_domains(const ExperimentGeometry& g) {
    g.validate();
    DomainBlocks d;
    d.omega_a = past_light_cone_base(g.detection_a());
    d.omega_b = past_light_cone_base(g.detection_b());
    d.sigma_c = d.omega_a.intersect(d.omega_b);
    d.sigma_a = d.omega_a.difference(d.sigma_c);
    d.sigma_b = d.omega_b.difference(d.sigma_c);
    return d;
}

double sigma_c_radius(double D, double beta) {
    if (!finite(D) || D <= 0.0) throw config_error("D must be positive and finite");
    if (!finite(beta) || beta <= 0.0 || beta > 1.0) throw config_error("beta out of (0,1]");
    return D * (1.0 - beta) / beta;
}

ExclusionBoundary apparatus_exclusion_boundary(double D) {
    if (!finite(D) || D <= 0.0) throw config_error("D must be positive and finite");
    ExclusionBoundary b;
    b.beta_star = 0.5;
    b.radius_at_boundary = sigma_c_radius(D, 0.5);
    b.grid_points = 1000;
    b.monotone_decreasing = true;
    double prev = std::numeric_limits<double>::infinity();
    for (int i = 1; i <= b.grid_points; ++i) {
        const double beta = static_cast<double>(i) / b.grid_points;
        const double r = sigma_c_radius(D, beta);
        if (r >= prev) {
            b.monotone_decreasing = false;
            break;
        }
        prev = r;
    }
    return b;
}

namespace {

WingIndependence audit_choice(const Event& choice, const Event& other_detection,
                              const CausalDomain& sigma_c) {
    WingIndependence w;
    const CausalDomain base = past_light_cone_base(choice);
    w.conspiracy_risk = base.intersects(sigma_c);

    const double dx = std::abs(choice.x - other_detection.x);
    const double dt = std::abs(choice.t - other_detection.t);
    w.spacelike_from_other = dx > dt;

    // Safe choice times at this position: t < dist(x, sigma_c) keeps the cone
    // base clear of sigma_c, and |t - T_other| < dx keeps the choice spacelike.
    const double conspiracy_sup = sigma_c.distance_to(choice.x);
    const double spacelike_lo = other_detection.t - dx;
    const double spacelike_hi = other_detection.t + dx;
    const double sup = std::min(conspiracy_sup, spacelike_hi);
    const double inf = std::max(0.0, spacelike_lo);
    w.safe_window_nonempty = sup > inf;
    w.latest_safe_time = w.safe_window_nonempty
                             ? sup
                             : std::numeric_limits<double>::quiet_NaN();
    return w;
}

} // namespace

IndependenceReport settings_independence_report(const ExperimentGeometry& g) {
    g.validate();
    if (!g.choice_events) throw config_error("settings_independence_report requires choice events");
    const DomainBlocks d = experiment_domains(g);
    IndependenceReport r;
    r.wing_a = audit_choice(g.choice_events->first, g.detection_b(), d.sigma_c);
    r.wing_b = audit_choice(g.choice_events->second, g.detection_a(), d.sigma_c);
    return r;
}

} // namespace bellsim
