#include "ptcl/polaron.hpp"

namespace ptcl {

SpinOrbitalSystem PolaronSystem::dressed() const {
    SpinOrbitalSystem s = base;
    s.eps = eps_tilde;
    s.V = V_tilde;
    return s;
}

Eigen::VectorXd reorganization_energies(const BathSpec& bath, int n_orb) {
    Eigen::VectorXd lambda = Eigen::VectorXd::Zero(n_orb);
    for (const auto& m : bath.modes) {
        if (!(m.omega > 0.0)) throw DomainError("mode frequency must be positive");
        for (int p = 0; p < n_orb; ++p) lambda(p) += m.coupling(p, p) * m.coupling(p, p) / m.omega;
    }
    return lambda;
}

PolaronSystem transform_integrals(const SpinOrbitalSystem& s, const BathSpec& bath) {
    const int n = s.n();
    if (bath.n_orb != n && !bath.modes.empty()) throw DomainError("bath couplings do not match the orbital count");
    PolaronSystem ps;
    ps.base = s;
    ps.lambda = reorganization_energies(bath, n);
    ps.eps_tilde = s.eps - ps.lambda;
    ps.mtilde = Eigen::MatrixXd::Zero(static_cast<int>(bath.modes.size()), n);
    for (std::size_t k = 0; k < bath.modes.size(); ++k)
        for (int p = 0; p < n; ++p) ps.mtilde(static_cast<int>(k), p) = bath.modes[k].mtilde(p);

    // sum_k omega_k M~_p M~_q
    Eigen::MatrixXd w = Eigen::MatrixXd::Zero(n, n);
    for (std::size_t k = 0; k < bath.modes.size(); ++k)
        w += bath.modes[k].omega * ps.mtilde.row(static_cast<int>(k)).transpose() * ps.mtilde.row(static_cast<int>(k));

    ps.V_tilde = s.V;
    for (int p = 0; p < n; ++p)
        for (int q = 0; q < n; ++q) {
            if (p == q) continue;
            ps.V_tilde(p, q, p, q) -= 2.0 * w(p, q);
            ps.V_tilde(p, q, q, p) += 2.0 * w(p, q);
        }
    return ps;
}

std::vector<DipoleSignature> dressed_dipole_signature(const SpinOrbitalSystem& s) {
    std::vector<DipoleSignature> out(s.n_ph());
    for (int i = 0; i < s.n_occ; ++i)
        for (int a = s.n_occ; a < s.n(); ++a) out[s.ph(i, a)] = {a, i};
    return out;
}

}  // namespace ptcl
