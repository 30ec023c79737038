#include "spintex/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "spintex/rng.hpp"

namespace spintex {

void LatticeSpec::validate() const {
    if (n_spins < 1) throw std::invalid_argument("LatticeSpec: n_spins must be >= 1");
    if (occupation_density <= 0.0 || occupation_density > 1.0)
        throw std::invalid_argument("LatticeSpec: occupation_density must be in (0, 1]");
    if (lattice_constant <= 0.0) throw std::invalid_argument("LatticeSpec: lattice_constant must be > 0");
    if (d_min < lattice_constant)
        throw std::invalid_argument("LatticeSpec: d_min must be >= lattice_constant");
    if (r_min <= 0.0) throw std::invalid_argument("LatticeSpec: r_min must be > 0");
}

double dipolar_coupling(const Vector3d& r_vec, const PhysicalConstants& constants,
                        const Vector3d& field_axis) {
    const double r = r_vec.norm();
    if (r <= 0.0) throw std::domain_error("dipolar_coupling: zero-length inter-spin vector");
    const double c = field_axis.normalized().dot(r_vec) / r;
    return constants.J_exp * (3.0 * c * c - 1.0) / (r * r * r);
}

double nv_gradient_field(const Vector3d& position, double electron_polarization,
                         const PhysicalConstants& constants, const Vector3d& field_axis) {
    const double r = position.norm();
    if (r <= 0.0) throw std::domain_error("nv_gradient_field: position at the NV origin");
    if (electron_polarization < 0.0 || electron_polarization > 1.0)
        throw std::invalid_argument("nv_gradient_field: polarization must be in [0, 1]");
    const double c = field_axis.normalized().dot(position) / r;
    return 2.0 * electron_polarization * constants.K_exp * (3.0 * c * c - 1.0) / (r * r * r);
}

namespace {

Eigen::Matrix3d orientation_matrix(const Vector3d& euler) {
    // Default alignment: crystal [100] along the lab field axis z.
    Eigen::Matrix3d align;
    align << 0, 1, 0,
             0, 0, 1,
             1, 0, 0;
    using Eigen::AngleAxisd;
    Eigen::Matrix3d rot =
        (AngleAxisd(euler[0], Vector3d::UnitZ()) * AngleAxisd(euler[1], Vector3d::UnitY()) *
         AngleAxisd(euler[2], Vector3d::UnitZ()))
            .toRotationMatrix();
    return rot * align;
}

/// Enumerate diamond-lattice vertices with r_min <= |x| <= r_max (lab frame).
std::vector<Vector3d> diamond_vertices(double a0, double r_min, double r_max,
                                       const Eigen::Matrix3d& orient) {
    static const double basis[8][3] = {
        {0.00, 0.00, 0.00}, {0.00, 0.50, 0.50}, {0.50, 0.00, 0.50}, {0.50, 0.50, 0.00},
        {0.25, 0.25, 0.25}, {0.25, 0.75, 0.75}, {0.75, 0.25, 0.75}, {0.75, 0.75, 0.25}};
    const int nc = static_cast<int>(std::ceil(r_max / a0)) + 1;
    std::vector<Vector3d> verts;
    const double r2_min = r_min * r_min, r2_max = r_max * r_max;
    for (int i = -nc; i <= nc; ++i)
        for (int j = -nc; j <= nc; ++j)
            for (int k = -nc; k <= nc; ++k)
                for (const auto& b : basis) {
                    Vector3d crystal((i + b[0]) * a0, (j + b[1]) * a0, (k + b[2]) * a0);
                    Vector3d lab = orient * crystal;
                    const double r2 = lab.squaredNorm();
                    if (r2 >= r2_min && r2 <= r2_max) verts.push_back(lab);
                }
    return verts;
}

void compute_all_couplings(SpinLattice& lattice, const PhysicalConstants& constants) {
    const int n = lattice.n_spins();
    lattice.couplings.clear();
    lattice.couplings.reserve(static_cast<std::size_t>(n) * (n - 1) / 2);
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) {
            Vector3d rv = lattice.positions[j] - lattice.positions[i];
            lattice.couplings.push_back({i, j, dipolar_coupling(rv, constants, lattice.b_field_direction)});
        }
}

}  // namespace

SpinLattice sample_diamond_lattice(const LatticeSpec& spec, const PhysicalConstants& constants) {
    spec.validate();
    const double a0 = spec.lattice_constant;

    // Ball radius such that the shell r_min..R holds n_spins/occupation vertices
    // (8 vertices per conventional cell).
    const double vertex_density = 8.0 / (a0 * a0 * a0);
    const double needed = spec.n_spins / spec.occupation_density;
    const double vol = needed / vertex_density + 4.0 / 3.0 * M_PI * std::pow(spec.r_min, 3);
    const double r_max = std::cbrt(vol * 3.0 / (4.0 * M_PI));

    const Eigen::Matrix3d orient = orientation_matrix(spec.euler_angles);
    std::vector<Vector3d> verts = diamond_vertices(a0, spec.r_min, r_max, orient);
    if (static_cast<int>(verts.size()) < spec.n_spins)
        throw GenerationError("sample_diamond_lattice: r_min/r_max shell holds only " +
                              std::to_string(verts.size()) + " vertices, need " +
                              std::to_string(spec.n_spins));

    Rng rng(spec.rng_seed);
    std::vector<std::uint32_t> order(verts.size());
    std::iota(order.begin(), order.end(), 0u);
    std::shuffle(order.begin(), order.end(), rng.engine());

    SpinLattice lattice;
    lattice.dimension = LatticeDimension::diamond_3d;
    lattice.seed = spec.rng_seed;
    lattice.positions.reserve(spec.n_spins);

    const double d2_min = spec.d_min * spec.d_min;
    constexpr std::size_t attempt_budget = 1'000'000;
    std::size_t attempts = 0;
    for (std::uint32_t idx : order) {
        if (static_cast<int>(lattice.positions.size()) == spec.n_spins) break;
        if (++attempts > attempt_budget)
            throw GenerationError("sample_diamond_lattice: attempt budget exhausted while "
                                  "enforcing d_min = " + std::to_string(spec.d_min) + " nm");
        const Vector3d& cand = verts[idx];
        bool ok = true;
        for (const Vector3d& p : lattice.positions)
            if ((cand - p).squaredNorm() < d2_min) { ok = false; break; }
        if (ok) lattice.positions.push_back(cand);
    }
    if (static_cast<int>(lattice.positions.size()) != spec.n_spins)
        throw GenerationError("sample_diamond_lattice: could not place " +
                              std::to_string(spec.n_spins) + " spins with d_min = " +
                              std::to_string(spec.d_min) + " nm inside r <= " +
                              std::to_string(r_max) + " nm");

    lattice.eta.assign(spec.n_spins, 0.0);
    compute_all_couplings(lattice, constants);
    return lattice;
}

SpinLattice build_chain(int n_spins, double lattice_constant, double position_jitter,
                        double coupling_j0, double disorder, std::uint64_t seed,
                        double x_offset) {
    if (n_spins < 2) throw std::invalid_argument("build_chain: n_spins must be >= 2");
    if (lattice_constant <= 0.0) throw std::invalid_argument("build_chain: lattice_constant must be > 0");
    if (disorder < 0.0) throw std::invalid_argument("build_chain: disorder must be >= 0");
    if (x_offset < 0.0) x_offset = 5.0 * lattice_constant;

    Rng rng(seed);
    SpinLattice lattice;
    lattice.dimension = LatticeDimension::chain_1d;
    lattice.seed = seed;
    lattice.positions.reserve(n_spins);
    // Chain laid out along the field axis: site radii are x_offset + a*j.
    for (int j = 0; j < n_spins; ++j) {
        double x = x_offset + lattice_constant * j;
        if (position_jitter > 0.0) x += rng.normal(0.0, position_jitter);
        lattice.positions.emplace_back(0.0, 0.0, x);
    }
    lattice.couplings.reserve(n_spins - 1);
    for (int k = 0; k + 1 < n_spins; ++k) {
        double w = disorder > 0.0 ? rng.uniform(-disorder, disorder) : 0.0;
        lattice.couplings.push_back({k, k + 1, coupling_j0 + w});
    }
    lattice.eta.assign(n_spins, 0.0);
    return lattice;
}

void apply_nv_field(SpinLattice& lattice, double electron_polarization,
                    const PhysicalConstants& constants) {
    for (int k = 0; k < lattice.n_spins(); ++k)
        lattice.eta[k] = nv_gradient_field(lattice.positions[k] - lattice.nv_position,
                                           electron_polarization, constants,
                                           lattice.b_field_direction);
}

}  // namespace spintex
