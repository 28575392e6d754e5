#pragma once

#include <array>
#include <cstdint>
#include <string>

#include "ptcl/types.hpp"

namespace ptcl {

// Spin-orbital electronic system. Orbitals 0..n_occ-1 are occupied, the rest
// virtual. V(p,q,r,s) holds <pq||rs>.
struct SpinOrbitalSystem {
    int n_occ = 0;
    int n_virt = 0;
    Eigen::VectorXd eps;
    Tensor4 V;
    std::array<Eigen::MatrixXd, 3> mu;

    int n() const { return n_occ + n_virt; }
    int n_ph() const { return n_occ * n_virt; }
    bool occupied(int p) const { return p < n_occ; }
    Space space(int p) const { return p < n_occ ? Space::Occ : Space::Virt; }
    // flattened particle-hole index of (occupied i, virtual a)
    int ph(int i, int a) const { return i * n_virt + (a - n_occ); }
};

struct ModelBuilder {
    std::uint64_t seed = 1;
    int n_occ = 2;
    int n_virt = 2;
    double scale = 0.05;
    bool complex_integrals = false;
    double occ_low = -1.0, occ_high = -0.4;
    double virt_low = 0.3, virt_high = 1.0;
};

SpinOrbitalSystem build_model(const ModelBuilder& b);

struct SymmetryReport {
    double antisymmetry = 0.0;
    double hermiticity = 0.0;
    double dipole_hermiticity = 0.0;
    double max() const;
    bool ok(double tol = 1e-10) const { return max() <= tol; }
};

SymmetryReport validate_symmetries(const SpinOrbitalSystem& s);

// Spatial integrals in chemist notation (pq|rs), dipoles per spatial orbital.
struct SpatialIntegrals {
    int n = 0;
    Eigen::VectorXd eps;
    std::vector<double> eri;  // n^4, (pq|rs)
    std::array<Eigen::MatrixXd, 3> mu;
    double eri_at(int p, int q, int r, int s) const {
        return eri[((static_cast<std::size_t>(p) * n + q) * n + r) * n + s];
    }
};

// Spin orbitals ordered by energy (alpha before beta on ties); the lowest
// n_electrons are occupied.
SpinOrbitalSystem expand_spatial(const SpatialIntegrals& s, int n_electrons);

SpinOrbitalSystem load_fcidump(const std::string& path, int n_electrons);

void write_native(const SpinOrbitalSystem& s, const std::string& path);
SpinOrbitalSystem read_native(const std::string& path);

// Two chromophores, each with one doubly occupied and one empty spatial
// orbital. Energies and couplings are chosen so that the locally excited
// states are bright and close in energy.
struct DimerModel {
    double homo_left = -0.40, homo_right = -0.43;
    double lumo_left = 0.10, lumo_right = 0.12;
    double coulomb = 0.25;       // on-site (pp|qq) within a chromophore
    double exchange = 0.05;      // on-site (pq|qp)
    double inter_coulomb = 0.08; // between chromophores
    double transfer = 0.01;      // excitonic (H_L L_L | H_R L_R)
    double dipole = 1.0;
};

SpinOrbitalSystem build_dimer(const DimerModel& m);

}  // namespace ptcl
