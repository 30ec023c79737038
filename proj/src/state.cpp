#include "spintex/state.hpp"

#include <stdexcept>

#include "spintex/rng.hpp"

namespace spintex {

double QuantumState::trace() const {
    if (rep == Representation::density_matrix) return rho.trace().real();
    double w = 0.0;
    for (std::size_t m = 0; m < kets.size(); ++m) w += weights[m] * kets[m].squaredNorm();
    return w;
}

double QuantumState::min_eigenvalue() const {
    if (rep != Representation::density_matrix)
        throw std::logic_error("min_eigenvalue: density representation required");
    Eigen::SelfAdjointEigenSolver<MatrixXcd> es(rho, Eigen::EigenvaluesOnly);
    return es.eigenvalues().minCoeff();
}

Eigen::Vector3d QuantumState::site_spin(int k) const {
    if (rep == Representation::density_matrix) return spintex::site_spin(rho, k, n_spins);
    Eigen::Vector3d v = Eigen::Vector3d::Zero();
    for (std::size_t m = 0; m < kets.size(); ++m)
        v += weights[m] * spintex::site_spin(kets[m], k, n_spins);
    return v;
}

double QuantumState::total_spin_x() const {
    double sum = 0.0;
    for (int k = 0; k < n_spins; ++k) sum += site_spin(k).x();
    return sum;
}

double QuantumState::energy(const BlockHamiltonian& h) const {
    if (rep == Representation::density_matrix) return expectation(rho, h);
    double e = 0.0;
    for (std::size_t m = 0; m < kets.size(); ++m) e += weights[m] * expectation(kets[m], h);
    return e;
}

std::vector<double> QuantumState::bond_energy(const BlockHamiltonian& h,
                                              const std::vector<Matrix4cd>& bonds) const {
    if (rep == Representation::density_matrix) return bond_energies(rho, h, bonds);
    std::vector<double> out(bonds.size(), 0.0);
    for (std::size_t m = 0; m < kets.size(); ++m) {
        auto be = bond_energies(kets[m], h, bonds);
        for (std::size_t k = 0; k < out.size(); ++k) out[k] += weights[m] * be[k];
    }
    return out;
}

void InitialStateSpec::validate() const {
    for (double p : profile)
        if (std::abs(p) > 1.0)
            throw std::invalid_argument("InitialStateSpec: |p_n| must be <= 1");
    if (std::abs(axis.norm() - 1.0) > 1e-12)
        throw std::invalid_argument("InitialStateSpec: axis must be a unit vector");
}

InitialStateSpec InitialStateSpec::uniform(int n_spins, int n_polarized, double p, int first) {
    InitialStateSpec spec;
    spec.profile.assign(n_spins, 0.0);
    for (int k = first; k < std::min(n_spins, first + n_polarized); ++k) spec.profile[k] = p;
    return spec;
}

InitialStateSpec InitialStateSpec::domain_wall(int n_spins, int n_plus, double p_plus,
                                               int n_minus, double p_minus, int first) {
    InitialStateSpec spec;
    spec.profile.assign(n_spins, 0.0);
    for (int k = first; k < std::min(n_spins, first + n_plus); ++k) spec.profile[k] = p_plus;
    for (int k = first + n_plus; k < std::min(n_spins, first + n_plus + n_minus); ++k)
        spec.profile[k] = p_minus;
    return spec;
}

namespace {

/// Unit kets along +axis / -axis of the Bloch sphere.
std::pair<Eigen::Vector2cd, Eigen::Vector2cd> axis_kets(const Eigen::Vector3d& n) {
    Eigen::SelfAdjointEigenSolver<Matrix2cd> es(pauli::direction(n));
    // eigenvalues sorted ascending: column 1 is +1, column 0 is -1
    return {es.eigenvectors().col(1), es.eigenvectors().col(0)};
}

}  // namespace

QuantumState prepare_state(const InitialStateSpec& spec, int n_spins, Representation rep,
                           int n_trajectories, std::uint64_t seed) {
    spec.validate();
    if (static_cast<int>(spec.profile.size()) != n_spins)
        throw std::invalid_argument("prepare_state: profile size != n_spins");

    QuantumState state;
    state.n_spins = n_spins;
    state.rep = rep;

    if (rep == Representation::density_matrix) {
        if (n_spins > max_density_spins)
            throw std::invalid_argument("prepare_state: density matrices limited to 14 spins");
        const std::size_t dim = state.dim();
        // rho = prod_k (1 + p_k sigma.axis)/2: diagonal in the axis eigenbasis,
        // assembled as a product over per-site 2x2 factors.
        std::vector<Matrix2cd> factor(n_spins);
        for (int k = 0; k < n_spins; ++k)
            factor[k] = 0.5 * (Matrix2cd::Identity() + spec.profile[k] * pauli::direction(spec.axis));
        state.rho = MatrixXcd::Zero(dim, dim);
        for (std::size_t r = 0; r < dim; ++r)
            for (std::size_t c = 0; c < dim; ++c) {
                Complex v = 1.0;
                for (int k = 0; k < n_spins && v != Complex(0.0); ++k)
                    v *= factor[k]((r >> k) & 1, (c >> k) & 1);
                if (v != Complex(0.0)) state.rho(r, c) = v;
            }
        return state;
    }

    if (n_spins > max_bundle_spins)
        throw std::invalid_argument("prepare_state: trajectory bundles limited to 20 spins");
    if (n_trajectories < 1)
        throw std::invalid_argument("prepare_state: trajectory bundle needs n_trajectories >= 1");

    auto [up, down] = axis_kets(spec.axis);
    const std::size_t dim = state.dim();
    state.kets.reserve(n_trajectories);
    state.weights.assign(n_trajectories, 1.0 / n_trajectories);
    for (int m = 0; m < n_trajectories; ++m) {
        Rng rng = Rng::derive(seed, static_cast<std::uint64_t>(m));
        // Product pure state: site k along +axis with probability (1 + p_k)/2.
        std::vector<bool> flip(n_spins);
        for (int k = 0; k < n_spins; ++k) flip[k] = rng.uniform() > 0.5 * (1.0 + spec.profile[k]);
        VectorXcd psi = VectorXcd::Zero(dim);
        psi[0] = 1.0;
        // Build as repeated single-site rotations of |0...0>.
        for (int k = 0; k < n_spins; ++k) {
            const Eigen::Vector2cd& target = flip[k] ? down : up;
            Matrix2cd u;
            u << target[0], -std::conj(target[1]), target[1], std::conj(target[0]);
            apply_site_op(psi, u, k);
        }
        state.kets.push_back(std::move(psi));
    }
    return state;
}

}  // namespace spintex
