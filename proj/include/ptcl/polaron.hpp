#pragma once

#include <vector>

#include "ptcl/bath.hpp"
#include "ptcl/hamiltonian.hpp"

namespace ptcl {

struct PolaronSystem {
    SpinOrbitalSystem base;
    Eigen::VectorXd lambda;
    Eigen::VectorXd eps_tilde;
    Tensor4 V_tilde;
    Eigen::MatrixXd mtilde;  // (mode, orbital)

    // base with eps and V replaced by their dressed counterparts
    SpinOrbitalSystem dressed() const;
};

// lambda_p = sum_k (M_k^p)^2 / omega_k. Densities must already be discretized.
Eigen::VectorXd reorganization_energies(const BathSpec& bath, int n_orb);

PolaronSystem transform_integrals(const SpinOrbitalSystem& s, const BathSpec& bath);

// X^dag_a X_i for each particle-hole pair, indexed like SpinOrbitalSystem::ph.
struct DipoleSignature {
    int create = 0;
    int annihilate = 0;
};
std::vector<DipoleSignature> dressed_dipole_signature(const SpinOrbitalSystem& s);

}  // namespace ptcl
