#include "bellsim/fields.hpp"

#include <cmath>

#include <Eigen/Cholesky>

#include "bellsim/errors.hpp"

namespace bellsim {

void Lattice::validate() const {
    if (!std::isfinite(x_min) || !std::isfinite(x_max) || x_min >= x_max)
        throw config_error("lattice requires finite x_min < x_max");
    if (n < 2) throw config_error("lattice requires n >= 2");
}

bool Lattice::covers(const CausalDomain& d) const {
    return d.empty() || (d.min() >= x_min && d.max() <= x_max);
}

void CovarianceSpec::validate() const {
    if (!std::isfinite(sigma) || sigma < 0.0) throw config_error("sigma must be >= 0");
    if (!std::isfinite(xi) || xi <= 0.0) throw config_error("xi must be > 0");
    if (!std::isfinite(rho_cross) || rho_cross < 0.0 || rho_cross > 1.0)
        throw config_error("rho_cross out of [0,1]");
    if (mode == CovarianceMode::factorized && rho_cross != 0.0)
        throw config_error("factorized mode requires rho_cross = 0");
}

InitialFieldConfiguration InitialFieldConfiguration::zeros(const Lattice& lat) {
    lat.validate();
    InitialFieldConfiguration f;
    f.lattice = lat;
    f.lambda1.assign(lat.n, 0.0);
    f.lambda2.assign(lat.n, 0.0);
    f.v0.assign(lat.n, 0.0);
    return f;
}

void InitialFieldConfiguration::validate() const {
    lattice.validate();
    const auto n = static_cast<std::size_t>(lattice.n);
    if (lambda1.size() != n || lambda2.size() != n || v0.size() != n)
        throw config_error("field arrays must match lattice size");
    for (const auto* v : {&lambda1, &lambda2, &v0})
        for (double x : *v)
            if (!std::isfinite(x)) throw config_error("field values must be finite");
}

std::vector<int> CovarianceModel::block_indices(Block b) const {
    std::vector<int> idx;
    for (int i = 0; i < lattice.n; ++i)
        if (block[static_cast<std::size_t>(i)] == b) idx.push_back(i);
    return idx;
}

namespace {

Block classify(double x, const DomainBlocks& d) {
    if (d.sigma_c.contains(x)) return Block::sigma_c;
    if (d.sigma_a.contains(x)) return Block::sigma_a;
    if (d.sigma_b.contains(x)) return Block::sigma_b;
    return Block::outside;
}

} // namespace

CovarianceModel build_covariance(const CovarianceSpec& spec, const Lattice& lattice,
                                 const DomainBlocks& domains) {
    spec.validate();
    lattice.validate();
    const CausalDomain sigma = domains.omega_a.unite(domains.omega_b);
    if (!lattice.covers(sigma))
        throw config_error("lattice does not cover omega_a U omega_b");

    CovarianceModel m;
    m.lattice = lattice;
    m.spec = spec;
    m.block.resize(static_cast<std::size_t>(lattice.n));
    for (int i = 0; i < lattice.n; ++i) {
        m.block[static_cast<std::size_t>(i)] = classify(lattice.x(i), domains);
        if (m.block[static_cast<std::size_t>(i)] != Block::outside) m.support.push_back(i);
    }

    const double var = spec.sigma * spec.sigma;
    const double inv2xi2 = 1.0 / (2.0 * spec.xi * spec.xi);
    m.matrix = Eigen::MatrixXd::Zero(lattice.n, lattice.n);
    for (int i : m.support) {
        for (int j : m.support) {
            const Block bi = m.block[static_cast<std::size_t>(i)];
            const Block bj = m.block[static_cast<std::size_t>(j)];
            double mask = 1.0;
            if (bi != bj)
                mask = spec.mode == CovarianceMode::factorized ? 0.0 : spec.rho_cross;
            if (mask == 0.0) continue;
            const double dx = lattice.x(i) - lattice.x(j);
            m.matrix(i, j) = var * std::exp(-dx * dx * inv2xi2) * mask;
        }
    }

    const auto s = static_cast<Eigen::Index>(m.support.size());
    Eigen::MatrixXd sub(s, s);
    for (Eigen::Index a = 0; a < s; ++a)
        for (Eigen::Index b = 0; b < s; ++b)
            sub(a, b) = m.matrix(m.support[static_cast<std::size_t>(a)],
                                 m.support[static_cast<std::size_t>(b)]);
    sub.diagonal().array() += kCholeskyJitter * var;

    if (s > 0) {
        Eigen::LLT<Eigen::MatrixXd> llt(sub);
        if (llt.info() != Eigen::Success) {
            if (var == 0.0) {
                m.chol = Eigen::MatrixXd::Zero(s, s);
                return m;
            }
            throw numerical_error("covariance not positive definite after jitter");
        }
        m.chol = llt.matrixL();
    }
    return m;
}

InitialFieldConfiguration sample_initial_fields(const CovarianceModel& cov, RngStream& rng) {
    InitialFieldConfiguration f = InitialFieldConfiguration::zeros(cov.lattice);
    const auto s = static_cast<Eigen::Index>(cov.support.size());
    for (auto* component : {&f.lambda1, &f.lambda2}) {
        Eigen::VectorXd z(s);
        for (Eigen::Index k = 0; k < s; ++k) z(k) = rng.normal();
        const Eigen::VectorXd values = cov.chol.triangularView<Eigen::Lower>() * z;
        for (Eigen::Index k = 0; k < s; ++k)
            (*component)[static_cast<std::size_t>(cov.support[static_cast<std::size_t>(k)])] =
                values(k);
    }
    return f;
}

FactorizationReport factorization_check(const CovarianceSpec& spec, const Lattice& lattice,
                                        const DomainBlocks& domains, double tolerance) {
    const CovarianceModel m = build_covariance(spec, lattice, domains);
    FactorizationReport r;
    r.tolerance = tolerance;
    for (int i : m.support) {
        for (int j : m.support) {
            if (m.block[static_cast<std::size_t>(i)] == m.block[static_cast<std::size_t>(j)])
                continue;
            r.max_off_block = std::max(r.max_off_block, std::abs(m.matrix(i, j)));
        }
    }
    r.factorized = r.max_off_block <= tolerance;
    return r;
}

Lattice default_lattice(const ExperimentGeometry& g, const CovarianceSpec& spec) {
    g.validate();
    spec.validate();
    const double span = g.D + g.detection_time() + spec.xi;
    return Lattice{-span, span, 257};
}

} // namespace bellsim
