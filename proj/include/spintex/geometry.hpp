#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "spintex/constants.hpp"

namespace spintex {

using Eigen::Vector3d;

enum class LatticeDimension { chain_1d, diamond_3d };

/// Symmetric pair coupling, stored once per unordered pair (i < j).
struct PairCoupling {
    int i;
    int j;
    double b_hz;
};

/// A fixed random spin ensemble: positions, couplings and the defect
/// (NV) gradient field. Immutable after construction, shareable.
struct SpinLattice {
    std::vector<Vector3d> positions;          // nm, NV at origin
    Vector3d nv_position = Vector3d::Zero();  // nm
    Vector3d b_field_direction = Vector3d::UnitZ();
    std::vector<PairCoupling> couplings;      // Hz
    std::vector<double> eta;                  // per-site defect field, Hz
    LatticeDimension dimension = LatticeDimension::chain_1d;
    std::uint64_t seed = 0;

    int n_spins() const { return static_cast<int>(positions.size()); }
    double radius(int k) const { return (positions[k] - nv_position).norm(); }

    /// cos(theta) of site k relative to the field axis.
    double cos_theta(int k) const {
        Vector3d r = positions[k] - nv_position;
        return b_field_direction.dot(r) / r.norm();
    }
};

struct LatticeSpec {
    int n_spins = 1000;
    double occupation_density = 0.005;  // fraction of lattice sites occupied
    double lattice_constant = 0.357;    // nm, conventional cubic cell
    double d_min = 2 * 0.357;           // nm, minimal pair distance
    double r_min = 3.0;                 // nm, frozen-core exclusion
    std::uint64_t rng_seed = 0;
    /// Euler angles (z-y-z, rad) applied after the default [100] || z alignment.
    Vector3d euler_angles = Vector3d::Zero();

    void validate() const;
};

struct GenerationError : std::runtime_error {
    explicit GenerationError(const std::string& what) : std::runtime_error(what) {}
};

/// Secular dipolar coupling b = J_exp (3 cos^2 theta - 1)/r^3 in Hz for the
/// inter-spin vector r_vec (nm), with theta measured from the field axis.
double dipolar_coupling(const Vector3d& r_vec, const PhysicalConstants& constants,
                        const Vector3d& field_axis = Vector3d::UnitZ());

/// Defect gradient field of a thermally polarized electron,
/// eta = 2 P K_exp (3 cos^2 theta - 1)/r^3 in Hz.
double nv_gradient_field(const Vector3d& position, double electron_polarization,
                         const PhysicalConstants& constants,
                         const Vector3d& field_axis = Vector3d::UnitZ());

/// theta with 3 cos^2 theta - 1 = 0.
inline double magic_angle() { return std::acos(1.0 / std::sqrt(3.0)); }

/// Draw spin sites on a diamond lattice restricted to r >= r_min with all
/// pairwise distances >= d_min. Deterministic for a fixed spec.
SpinLattice sample_diamond_lattice(const LatticeSpec& spec,
                                   const PhysicalConstants& constants = PhysicalConstants::carbon13());

/// 1D chain with positions x_j = x_offset + a*j + jitter and nearest-neighbor
/// couplings J_k = J0 + W_k, W_k uniform on [-disorder, disorder].
/// Site fields eta are initialized to zero.
SpinLattice build_chain(int n_spins, double lattice_constant, double position_jitter,
                        double coupling_j0, double disorder, std::uint64_t seed,
                        double x_offset = -1.0);

/// Fill lattice.eta from the NV gradient field at each site.
void apply_nv_field(SpinLattice& lattice, double electron_polarization,
                    const PhysicalConstants& constants = PhysicalConstants::carbon13());

}  // namespace spintex
