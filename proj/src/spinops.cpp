#include "spintex/spinops.hpp"

#include <stdexcept>

namespace spintex {

namespace pauli {

Matrix2cd x() {
    Matrix2cd m;
    m << 0, 1, 1, 0;
    return m;
}
Matrix2cd y() {
    Matrix2cd m;
    m << Complex(0, 0), Complex(0, -1), Complex(0, 1), Complex(0, 0);
    return m;
}
Matrix2cd z() {
    Matrix2cd m;
    m << 1, 0, 0, -1;
    return m;
}
Matrix2cd id() { return Matrix2cd::Identity(); }

Matrix2cd component(int axis) {
    switch (axis) {
        case 0: return x();
        case 1: return y();
        case 2: return z();
    }
    throw std::invalid_argument("pauli::component: axis must be 0, 1 or 2");
}

Matrix2cd direction(const Eigen::Vector3d& n) { return n.x() * x() + n.y() * y() + n.z() * z(); }

}  // namespace pauli

Matrix4cd pair_block(const Eigen::Matrix3d& m) {
    Matrix4cd block = Matrix4cd::Zero();
    for (int a = 0; a < 3; ++a)
        for (int b = 0; b < 3; ++b) {
            if (m(a, b) == 0.0) continue;
            Matrix2cd ua = pauli::component(a), ub = pauli::component(b);
            // kron(ua, ub)/4 with site i on the low bit: index = bi + 2*bj.
            Matrix4cd k;
            for (int r = 0; r < 4; ++r)
                for (int c = 0; c < 4; ++c)
                    k(r, c) = ua(r & 1, c & 1) * ub(r >> 1, c >> 1);
            block += 0.25 * m(a, b) * k;
        }
    return block;
}

Matrix2cd site_block(const Eigen::Vector3d& f) { return 0.5 * pauli::direction(f); }

BlockHamiltonian BlockHamiltonian::from(const EffectiveHamiltonian& h) {
    BlockHamiltonian out;
    out.n_spins = h.n_spins;
    out.pairs.reserve(h.pairs.size());
    for (const auto& p : h.pairs) out.pairs.push_back({p.i, p.j, pair_block(p.m)});
    for (int k = 0; k < h.n_spins; ++k)
        if (k < static_cast<int>(h.site_fields.size()) && h.site_fields[k].norm() > 0.0)
            out.sites.push_back({k, site_block(h.site_fields[k])});
    return out;
}

namespace {

/// Iterate the four basis amplitudes of sites (i, j) for every rest pattern,
/// branch-free: z = (hi << (j+1)) | (mid << (i+1)) | lo.
template <typename F>
void for_each_pair_group(int n_spins, int i, int j, F&& f) {
    const std::size_t dim = std::size_t{1} << n_spins;
    const std::size_t bi = std::size_t{1} << i;
    const std::size_t bj = std::size_t{1} << j;
    const std::size_t n_hi = dim >> (j + 1);
    const std::size_t n_mid = bj >> (i + 1);
    for (std::size_t hi = 0; hi < n_hi; ++hi)
        for (std::size_t mid = 0; mid < n_mid; ++mid) {
            const std::size_t base = (hi << (j + 1)) | (mid << (i + 1));
            for (std::size_t lo = 0; lo < bi; ++lo) {
                const std::size_t z = base | lo;
                f(z, z | bi, z | bj, z | bi | bj);
            }
        }
}

}  // namespace

void BlockHamiltonian::apply(const VectorXcd& x, VectorXcd& y) const {
    const std::size_t d = dim();
    if (y.size() != static_cast<Eigen::Index>(d)) y.resize(d);
    y.setZero();
    for (const auto& p : pairs) {
        for_each_pair_group(n_spins, p.i, p.j, [&](std::size_t z0, std::size_t z1, std::size_t z2, std::size_t z3) {
            const Complex v0 = x[z0], v1 = x[z1], v2 = x[z2], v3 = x[z3];
            y[z0] += p.h(0, 0) * v0 + p.h(0, 1) * v1 + p.h(0, 2) * v2 + p.h(0, 3) * v3;
            y[z1] += p.h(1, 0) * v0 + p.h(1, 1) * v1 + p.h(1, 2) * v2 + p.h(1, 3) * v3;
            y[z2] += p.h(2, 0) * v0 + p.h(2, 1) * v1 + p.h(2, 2) * v2 + p.h(2, 3) * v3;
            y[z3] += p.h(3, 0) * v0 + p.h(3, 1) * v1 + p.h(3, 2) * v2 + p.h(3, 3) * v3;
        });
    }
    for (const auto& b : sites) {
        const std::size_t bk = std::size_t{1} << b.k;
        const std::size_t group = 2 * bk;
        for (std::size_t base = 0; base < d; base += group)
            for (std::size_t lo = 0; lo < bk; ++lo) {
                const std::size_t z = base + lo;
                const Complex v0 = x[z], v1 = x[z | bk];
                y[z] += b.h(0, 0) * v0 + b.h(0, 1) * v1;
                y[z | bk] += b.h(1, 0) * v0 + b.h(1, 1) * v1;
            }
    }
}

MatrixXcd BlockHamiltonian::dense() const {
    const std::size_t d = dim();
    if (n_spins > 14) throw std::invalid_argument("BlockHamiltonian::dense: n_spins > 14");
    MatrixXcd h = MatrixXcd::Zero(d, d);
    for (const auto& p : pairs) {
        for_each_pair_group(n_spins, p.i, p.j, [&](std::size_t z0, std::size_t z1, std::size_t z2, std::size_t z3) {
            const std::size_t idx[4] = {z0, z1, z2, z3};
            for (int r = 0; r < 4; ++r)
                for (int c = 0; c < 4; ++c) h(idx[r], idx[c]) += p.h(r, c);
        });
    }
    for (const auto& b : sites) {
        const std::size_t bk = std::size_t{1} << b.k;
        for (std::size_t z = 0; z < d; ++z) {
            if (z & bk) continue;
            const std::size_t idx[2] = {z, z | bk};
            for (int r = 0; r < 2; ++r)
                for (int c = 0; c < 2; ++c) h(idx[r], idx[c]) += b.h(r, c);
        }
    }
    return h;
}

double BlockHamiltonian::norm_bound() const {
    double bound = 0.0;
    for (const auto& p : pairs) bound += p.h.operatorNorm();
    for (const auto& b : sites) bound += b.h.operatorNorm();
    return bound;
}

std::vector<Matrix4cd> chain_bond_blocks(const BlockHamiltonian& h) {
    const int n = h.n_spins;
    std::vector<Matrix4cd> bonds(n - 1, Matrix4cd::Zero());
    for (const auto& p : h.pairs) {
        if (p.j != p.i + 1)
            throw std::invalid_argument("chain_bond_blocks: Hamiltonian is not a nearest-neighbor chain");
        bonds[p.i] += p.h;
    }
    auto embed_site = [&](int bond, int slot, const Matrix2cd& u, double weight) {
        // slot 0: low site of the bond, slot 1: high site.
        Matrix4cd e = Matrix4cd::Zero();
        for (int r = 0; r < 4; ++r)
            for (int c = 0; c < 4; ++c) {
                const int rb = slot == 0 ? (r & 1) : (r >> 1);
                const int cb = slot == 0 ? (c & 1) : (c >> 1);
                const int ro = slot == 0 ? (r >> 1) : (r & 1);
                const int co = slot == 0 ? (c >> 1) : (c & 1);
                if (ro == co) e(r, c) = u(rb, cb);
            }
        bonds[bond] += weight * e;
    };
    for (const auto& b : h.sites) {
        const bool left_edge = b.k == 0;
        const bool right_edge = b.k == n - 1;
        if (left_edge) {
            embed_site(0, 0, b.h, 1.0);
        } else if (right_edge) {
            embed_site(n - 2, 1, b.h, 1.0);
        } else {
            embed_site(b.k - 1, 1, b.h, 0.5);
            embed_site(b.k, 0, b.h, 0.5);
        }
    }
    return bonds;
}

Matrix2cd one_site_rdm(const MatrixXcd& rho, int k, int n_spins) {
    const std::size_t dim = std::size_t{1} << n_spins;
    const std::size_t bk = std::size_t{1} << k;
    Matrix2cd rdm = Matrix2cd::Zero();
    for (std::size_t z = 0; z < dim; ++z) {
        if (z & bk) continue;
        rdm(0, 0) += rho(z, z);
        rdm(0, 1) += rho(z, z | bk);
        rdm(1, 0) += rho(z | bk, z);
        rdm(1, 1) += rho(z | bk, z | bk);
    }
    return rdm;
}

Matrix2cd one_site_rdm(const VectorXcd& psi, int k, int n_spins) {
    const std::size_t dim = std::size_t{1} << n_spins;
    const std::size_t bk = std::size_t{1} << k;
    Matrix2cd rdm = Matrix2cd::Zero();
    for (std::size_t z = 0; z < dim; ++z) {
        if (z & bk) continue;
        const Complex a = psi[z], b = psi[z | bk];
        rdm(0, 0) += a * std::conj(a);
        rdm(0, 1) += a * std::conj(b);
        rdm(1, 0) += b * std::conj(a);
        rdm(1, 1) += b * std::conj(b);
    }
    return rdm;
}

Matrix4cd two_site_rdm(const MatrixXcd& rho, int i, int j, int n_spins) {
    Matrix4cd rdm = Matrix4cd::Zero();
    for_each_pair_group(n_spins, i, j, [&](std::size_t z0, std::size_t z1, std::size_t z2, std::size_t z3) {
        const std::size_t idx[4] = {z0, z1, z2, z3};
        for (int r = 0; r < 4; ++r)
            for (int c = 0; c < 4; ++c) rdm(r, c) += rho(idx[r], idx[c]);
    });
    return rdm;
}

Matrix4cd two_site_rdm(const VectorXcd& psi, int i, int j, int n_spins) {
    Matrix4cd rdm = Matrix4cd::Zero();
    for_each_pair_group(n_spins, i, j, [&](std::size_t z0, std::size_t z1, std::size_t z2, std::size_t z3) {
        const Complex v[4] = {psi[z0], psi[z1], psi[z2], psi[z3]};
        for (int r = 0; r < 4; ++r)
            for (int c = 0; c < 4; ++c) rdm(r, c) += v[r] * std::conj(v[c]);
    });
    return rdm;
}

namespace {

template <typename State>
Eigen::Vector3d site_spin_impl(const State& s, int k, int n_spins) {
    Matrix2cd rdm = one_site_rdm(s, k, n_spins);
    return {0.5 * (pauli::x() * rdm).trace().real(), 0.5 * (pauli::y() * rdm).trace().real(),
            0.5 * (pauli::z() * rdm).trace().real()};
}

}  // namespace

Eigen::Vector3d site_spin(const MatrixXcd& rho, int k, int n_spins) {
    return site_spin_impl(rho, k, n_spins);
}
Eigen::Vector3d site_spin(const VectorXcd& psi, int k, int n_spins) {
    return site_spin_impl(psi, k, n_spins);
}

EnergyVariance energy_variance(const std::vector<double>& bond_energy, double total_tolerance) {
    EnergyVariance out;
    double total = 0.0;
    for (double e : bond_energy) total += e;
    if (std::abs(total) < total_tolerance) {
        out.reliable = false;
        return out;
    }
    double nbar = 0.0;
    for (std::size_t n = 0; n < bond_energy.size(); ++n) nbar += n * bond_energy[n] / total;
    double var = 0.0;
    for (std::size_t n = 0; n < bond_energy.size(); ++n)
        var += (n - nbar) * (n - nbar) * bond_energy[n] / total;
    out.value = var;
    out.center = nbar;
    return out;
}

void apply_site_op(VectorXcd& psi, const Matrix2cd& u, int k) {
    const std::size_t dim = psi.size();
    const std::size_t bk = std::size_t{1} << k;
    for (std::size_t z = 0; z < dim; ++z) {
        if (z & bk) continue;
        const Complex v0 = psi[z], v1 = psi[z | bk];
        psi[z] = u(0, 0) * v0 + u(0, 1) * v1;
        psi[z | bk] = u(1, 0) * v0 + u(1, 1) * v1;
    }
}

}  // namespace spintex
