#include "spintex/trotter.hpp"

#include <stdexcept>

namespace spintex {

namespace {

Matrix4cd gate_exp(const Matrix4cd& h, double dt) {
    // exp(-i 2pi h dt) of a Hermitian 4x4, via its eigendecomposition.
    Eigen::SelfAdjointEigenSolver<Matrix4cd> es(h);
    Eigen::Vector4cd phases;
    for (int i = 0; i < 4; ++i)
        phases[i] = std::exp(Complex(0.0, -2.0 * M_PI * es.eigenvalues()[i] * dt));
    return es.eigenvectors() * phases.asDiagonal() * es.eigenvectors().adjoint();
}

}  // namespace

ChainGates make_chain_gates(const BlockHamiltonian& h, double dt) {
    std::vector<Matrix4cd> bonds = chain_bond_blocks(h);
    ChainGates g;
    g.n_spins = h.n_spins;
    g.dt = dt;
    for (int k = 0; k < static_cast<int>(bonds.size()); ++k) {
        if (k % 2 == 0) {
            g.even_half.push_back(gate_exp(bonds[k], dt / 2));
            g.even_bonds.push_back(k);
        } else {
            g.odd_full.push_back(gate_exp(bonds[k], dt));
            g.odd_bonds.push_back(k);
        }
    }
    return g;
}

namespace {

/// In-place 4-group mix v <- u v over the strided quadruple starting at p.
template <int Stride0>
inline void mix4(Complex* p, std::size_t s, const Matrix4cd& u) {
    const Complex v0 = p[0], v1 = p[s], v2 = p[2 * s], v3 = p[3 * s];
    p[0] = u(0, 0) * v0 + u(0, 1) * v1 + u(0, 2) * v2 + u(0, 3) * v3;
    p[s] = u(1, 0) * v0 + u(1, 1) * v1 + u(1, 2) * v2 + u(1, 3) * v3;
    p[2 * s] = u(2, 0) * v0 + u(2, 1) * v1 + u(2, 2) * v2 + u(2, 3) * v3;
    p[3 * s] = u(3, 0) * v0 + u(3, 1) * v1 + u(3, 2) * v2 + u(3, 3) * v3;
}

/// Apply u on the adjacent-site quadruples of a contiguous amplitude block.
inline void left_mix_block(Complex* data, std::size_t dim, const Matrix4cd& u, int k) {
    const std::size_t bk = std::size_t{1} << k;
    const std::size_t group = 4 * bk;
    for (std::size_t base = 0; base < dim; base += group) {
        Complex* p = data + base;
        for (std::size_t lo = 0; lo < bk; ++lo) mix4<0>(p + lo, bk, u);
    }
}

}  // namespace

void apply_pair_gate(VectorXcd& psi, const Matrix4cd& u, int k) {
    left_mix_block(psi.data(), psi.size(), u, k);
}

void apply_pair_gate(MatrixXcd& rho, const Matrix4cd& u, int k) {
    const std::size_t dim = rho.rows();
    const std::size_t bk = std::size_t{1} << k;
    // Left action per column.
    for (std::size_t c = 0; c < dim; ++c) left_mix_block(rho.col(c).data(), dim, u, k);
    // Right action rho <- rho u^dag: column quadruples combine with conj(u),
    // rows contiguous for locality.
    const Matrix4cd uc = u.conjugate();
    const std::size_t group = 4 * bk;
    for (std::size_t cbase = 0; cbase < dim; cbase += group) {
        for (std::size_t lo = 0; lo < bk; ++lo) {
            Complex* p0 = rho.col(cbase + lo).data();
            Complex* p1 = rho.col(cbase + lo + bk).data();
            Complex* p2 = rho.col(cbase + lo + 2 * bk).data();
            Complex* p3 = rho.col(cbase + lo + 3 * bk).data();
            for (std::size_t r = 0; r < dim; ++r) {
                const Complex v0 = p0[r], v1 = p1[r], v2 = p2[r], v3 = p3[r];
                p0[r] = uc(0, 0) * v0 + uc(0, 1) * v1 + uc(0, 2) * v2 + uc(0, 3) * v3;
                p1[r] = uc(1, 0) * v0 + uc(1, 1) * v1 + uc(1, 2) * v2 + uc(1, 3) * v3;
                p2[r] = uc(2, 0) * v0 + uc(2, 1) * v1 + uc(2, 2) * v2 + uc(2, 3) * v3;
                p3[r] = uc(3, 0) * v0 + uc(3, 1) * v1 + uc(3, 2) * v2 + uc(3, 3) * v3;
            }
        }
    }
}

namespace {

template <typename State>
void step_impl(State& s, const ChainGates& g) {
    for (std::size_t i = 0; i < g.even_bonds.size(); ++i)
        apply_pair_gate(s, g.even_half[i], g.even_bonds[i]);
    for (std::size_t i = 0; i < g.odd_bonds.size(); ++i)
        apply_pair_gate(s, g.odd_full[i], g.odd_bonds[i]);
    for (std::size_t i = 0; i < g.even_bonds.size(); ++i)
        apply_pair_gate(s, g.even_half[i], g.even_bonds[i]);
}

}  // namespace

void trotter_step(VectorXcd& psi, const ChainGates& g) { step_impl(psi, g); }
void trotter_step(MatrixXcd& rho, const ChainGates& g) { step_impl(rho, g); }

double default_trotter_dt(const BlockHamiltonian& h, double angle_per_step) {
    std::vector<Matrix4cd> bonds = chain_bond_blocks(h);
    double wmax = 0.0;
    for (const auto& b : bonds) wmax = std::max(wmax, b.operatorNorm());
    if (wmax <= 0.0) throw std::invalid_argument("default_trotter_dt: zero Hamiltonian");
    return angle_per_step / (2.0 * M_PI * wmax);
}

}  // namespace spintex
