#pragma once

#include <cstdint>
#include <vector>

#include <Eigen/Dense>

#include "bellsim/geometry.hpp"
#include "bellsim/rng.hpp"

namespace bellsim {

/// Uniform discretization of the Cauchy slice.
struct Lattice {
    double x_min = -1.0;
    double x_max = 1.0;
    int n = 2;

    double spacing() const { return (x_max - x_min) / (n - 1); }
    double x(int i) const { return x_min + i * spacing(); }

    void validate() const;
    bool covers(const CausalDomain& d) const;
    bool operator==(const Lattice&) const = default;
};

enum class CovarianceMode { factorized, coupled };

/// Squared-exponential Gaussian random field model for the initial data.
/// rho_cross scales every cross-block entry in coupled mode; factorized mode
/// zeroes all cross-block entries (block-diagonal == independence for
/// Gaussian fields).
struct CovarianceSpec {
    double sigma = 1.0;     // field standard deviation, >= 0
    double xi = 0.5;        // correlation length, > 0
    double rho_cross = 0.0; // cross-region coupling in [0, 1]
    CovarianceMode mode = CovarianceMode::factorized;

    void validate() const;
    bool operator==(const CovarianceSpec&) const = default;
};

/// Two-component hidden field lambda0 on the lattice plus the initial time
/// derivative v0 of the Cauchy data (defaults to zero).
struct InitialFieldConfiguration {
    Lattice lattice;
    std::vector<double> lambda1;
    std::vector<double> lambda2;
    std::vector<double> v0;

    static InitialFieldConfiguration zeros(const Lattice& lat);
    void validate() const;
};

/// Block membership of each lattice point. Boundary points shared by two
/// closed blocks are assigned with priority sigma_c, then sigma_a, then
/// sigma_b, so the partition used for the covariance mask is unambiguous.
enum class Block : std::uint8_t { outside = 0, sigma_a, sigma_b, sigma_c };

/// Covariance of one field component over the lattice, with rows/columns
/// outside omega_a U omega_b identically zero (compact support).
struct CovarianceModel {
    Lattice lattice;
    CovarianceSpec spec;
    std::vector<Block> block;        // per lattice point
    Eigen::MatrixXd matrix;          // n x n, exact kernel (no jitter)
    Eigen::MatrixXd chol;            // lower factor of in-support submatrix (+ jitter)
    std::vector<int> support;        // lattice indices inside omega_a U omega_b

    std::vector<int> block_indices(Block b) const;
};

/// PSD jitter added to the in-support diagonal before factorization.
inline constexpr double kCholeskyJitter = 1e-10;

CovarianceModel build_covariance(const CovarianceSpec& spec, const Lattice& lattice,
                                 const DomainBlocks& domains);

/// Independent zero-mean draw per component through the Cholesky factor.
/// Consumes 2 * support.size() normals: component 1 first, then component 2,
/// each in ascending lattice order. v0 is left at zero.
InitialFieldConfiguration sample_initial_fields(const CovarianceModel& cov, RngStream& rng);

struct FactorizationReport {
    bool factorized = false;
    double max_off_block = 0.0; // max |entry| across block boundaries
    double tolerance = 0.0;
};

/// True iff the covariance is block-diagonal with respect to
/// {sigma_a, sigma_b, sigma_c} within the tolerance.
FactorizationReport factorization_check(const CovarianceSpec& spec, const Lattice& lattice,
                                        const DomainBlocks& domains, double tolerance = 1e-12);

/// Default lattice: 257 points spanning the two cone bases with a margin of
/// one correlation length on each side.
Lattice default_lattice(const ExperimentGeometry& g, const CovarianceSpec& spec);

} // namespace bellsim
