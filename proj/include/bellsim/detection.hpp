#pragma once

#include <array>
#include <functional>
#include <memory>
#include <optional>
#include <vector>

#include "bellsim/fields.hpp"
#include "bellsim/geometry.hpp"
#include "bellsim/propagation.hpp"
#include "bellsim/rng.hpp"

namespace bellsim {

/// Analyzer orientation, reduced to [0, 2*pi).
struct AnalyzerSetting {
    double angle = 0.0;

    AnalyzerSetting() = default;
    explicit AnalyzerSetting(double a);
    bool operator==(const AnalyzerSetting&) const = default;
};

struct OutcomePair {
    int a = 1; // +-1
    int b = 1; // +-1
    int product() const { return a * b; }
};

enum class ScenarioKind { local_field, singlet_oracle, pr_box, shared_phase };

struct AngleSet {
    double a = 0.0;
    double a_prime = 1.5707963267948966;  // pi/2
    double b = 0.7853981633974483;        // pi/4
    double b_prime = 2.356194490192345;   // 3*pi/4

    AnalyzerSetting setting_a() const { return AnalyzerSetting(a); }
    AnalyzerSetting setting_a_prime() const { return AnalyzerSetting(a_prime); }
    AnalyzerSetting setting_b() const { return AnalyzerSetting(b); }
    AnalyzerSetting setting_b_prime() const { return AnalyzerSetting(b_prime); }
    bool operator==(const AngleSet&) const = default;
};

/// A runnable experiment. local-field draws hidden fields and propagates them
/// to the detectors; the oracle kinds reproduce reference correlated-outcome
/// statistics directly (they model non-factorizable backgrounds without a
/// field dynamics).
struct Scenario {
    ScenarioKind kind = ScenarioKind::singlet_oracle;
    ExperimentGeometry geometry;
    std::optional<Lattice> lattice;          // local-field only; default derived
    std::optional<CovarianceSpec> covariance; // local-field only
    std::optional<LangevinSpec> langevin;    // local-field only
    AngleSet angles;

    void validate() const;
    bool operator==(const Scenario&) const;
};

/// Signed projection of the two-component field onto the analyzer direction;
/// sign(0) = +1 so outcomes are always exactly +-1.
int analyzer_outcome(double lambda1, double lambda2, const AnalyzerSetting& s);
inline int analyzer_outcome(const PropagatedField& f, const AnalyzerSetting& s) {
    return analyzer_outcome(f.lambda1, f.lambda2, s);
}

enum class Wing { A, B };
inline Wing other(Wing w) { return w == Wing::A ? Wing::B : Wing::A; }

enum class AccessKind { setting, detection_field };

struct WingAccess {
    Wing by;
    Wing requested;
    AccessKind kind;
};

/// Per-trial view handed to a wing functional. All reads of settings and
/// propagated detector fields go through it, so cross-wing accesses can be
/// recorded and audited.
class WingContext {
public:
    WingContext(const InitialFieldConfiguration& cfg, std::array<Event, 2> detection_events,
                std::array<AnalyzerSetting, 2> settings, std::vector<WingAccess>* log)
        : cfg_(cfg), events_(detection_events), settings_(settings), log_(log) {}

    const InitialFieldConfiguration& config() const { return cfg_; }
    Event detection_event(Wing w) const { return events_[index(w)]; }

    AnalyzerSetting setting(Wing by, Wing requested) const;
    PropagatedField detection_field(Wing by, Wing requested) const;

private:
    static std::size_t index(Wing w) { return w == Wing::A ? 0 : 1; }
    const InitialFieldConfiguration& cfg_;
    std::array<Event, 2> events_;
    std::array<AnalyzerSetting, 2> settings_;
    std::vector<WingAccess>* log_;
};

/// Maps one wing's view of a trial to a +-1 outcome. The default functional
/// propagates to the wing's own detection event and applies the analyzer
/// projection with the wing's own setting.
using WingFunctional = std::function<int(const WingContext&, Wing)>;

WingFunctional default_wing_functional();

struct LocalityAuditReport {
    bool passed = false;
    std::vector<WingAccess> offenses;
};

/// Values of the shared initial data both wings can read: the sigma_c block
/// plus, when a cone endpoint falls strictly inside a lattice cell, the one
/// boundary node of the neighbouring block inside the interpolation stencil.
/// Fixing exactly this set makes the two wings conditionally independent on
/// the lattice, which is what the averaged-correlation construction needs.
struct SharedRestriction {
    std::vector<int> indices;                   // lattice node indices, ascending
    std::vector<std::array<double, 2>> values;  // per node: lambda1, lambda2
};

/// Caches the covariance factorization and geometry for a scenario so trials
/// are cheap. Thread-safe for concurrent run() calls (const state only).
class TrialRunner {
public:
    explicit TrialRunner(const Scenario& sc);
    ~TrialRunner();
    TrialRunner(TrialRunner&&) noexcept;
    TrialRunner& operator=(TrialRunner&&) noexcept;

    const Scenario& scenario() const { return scenario_; }

    OutcomePair run(const AnalyzerSetting& a, const AnalyzerSetting& b, RngStream& rng) const;

    /// local-field only: draw a configuration (sample, optional Langevin
    /// evolution, v0 tied to the evolved second component).
    InitialFieldConfiguration draw_configuration(RngStream& rng) const;

    /// local-field only: evaluate one wing on a fixed configuration.
    int wing_outcome(const InitialFieldConfiguration& cfg, Wing w, const AnalyzerSetting& a_own,
                     const AnalyzerSetting& b_own, std::vector<WingAccess>* log = nullptr) const;

    /// Replace the wing functional (tests, audits, alternative analyzers).
    void set_wing_functional(WingFunctional f);

    // Conditional machinery (factorized local-field only).
    bool factorized() const;
    const CovarianceModel& covariance_model() const;
    const DomainBlocks& domains() const;

    /// Draw the sigma_c restriction of a fresh configuration: block sample,
    /// optionally Langevin-evolved pointwise.
    std::vector<std::array<double, 2>> sample_sigma_c(RngStream& rng) const;
    const std::vector<int>& sigma_c_indices() const;

    /// Monte Carlo mean of the wing outcome over m resamples of the wing's
    /// own disjoint block, holding the sigma_c restriction fixed.
    double conditional_wing_average(Wing w, const AnalyzerSetting& s,
                                    const std::vector<std::array<double, 2>>& lambda_c, int m,
                                    RngStream& rng) const;

private:
    Scenario scenario_;
    struct LocalFieldState;
    std::unique_ptr<LocalFieldState> local_;
    WingFunctional functional_;

    OutcomePair run_local_field(const AnalyzerSetting& a, const AnalyzerSetting& b,
                                RngStream& rng) const;
    OutcomePair run_singlet(const AnalyzerSetting& a, const AnalyzerSetting& b,
                            RngStream& rng) const;
    OutcomePair run_pr_box(const AnalyzerSetting& a, const AnalyzerSetting& b,
                           RngStream& rng) const;
    OutcomePair run_shared_phase(const AnalyzerSetting& a, const AnalyzerSetting& b,
                                 RngStream& rng) const;
};

/// One trial of the scenario at settings (a, b).
OutcomePair run_trial(const Scenario& sc, const AnalyzerSetting& a, const AnalyzerSetting& b,
                      RngStream& rng);

/// Runs instrumented trials and reports any cross-wing access of settings or
/// detector fields. Refuses oracle scenarios (nothing to audit).
LocalityAuditReport wing_locality_audit(const Scenario& sc, int trials = 4,
                                        std::uint64_t seed = 0,
                                        const WingFunctional& functional = {});

} // namespace bellsim
