#pragma once

#include <cstdint>
#include <vector>

#include "ptcl/bath.hpp"
#include "ptcl/hamiltonian.hpp"

namespace ptcl::oracle {

struct TruncationError : DomainError {
    using DomainError::DomainError;
};

// Occupation-number basis over n spin-orbitals; state index = bit mask.
class FockSpace {
public:
    explicit FockSpace(int n);

    int n() const { return n_; }
    int dim() const { return dim_; }
    // ops[0] is leftmost; (create, orbital)
    Eigen::MatrixXd product(const std::vector<std::pair<bool, int>>& ops) const;
    Eigen::MatrixXd annihilator(int p) const { return product({{false, p}}); }
    // normal-ordered product relative to the determinant with n_occ lowest orbitals filled
    Eigen::MatrixXd normal_ordered(const std::vector<std::pair<bool, int>>& ops, int n_occ) const;
    MatrixXc interaction(const SpinOrbitalSystem& s) const;  // V_N
    Eigen::VectorXd energies(const Eigen::VectorXd& eps) const;
    int reference(int n_occ) const { return (1 << n_occ) - 1; }

private:
    int n_;
    int dim_;
};

// Applies ops (rightmost first) to determinant det; returns false if annihilated.
bool apply_string(const std::vector<std::pair<bool, int>>& ops, std::uint32_t det, std::uint32_t& out, int& sign);

MatrixXc cis_matrix(const SpinOrbitalSystem& s);

struct CisResult {
    Eigen::VectorXd values;
    MatrixXc vectors;  // columns, ph-indexed
};
CisResult exact_cis(const SpinOrbitalSystem& s);

// E_k - E_0 for the n_occ-electron sector, ascending, k >= 1.
Eigen::VectorXd exact_fci_poles(const SpinOrbitalSystem& s);
// With dipole strengths |<0|mu|k>|^2 summed over axes, aligned with the poles.
Eigen::VectorXd fci_strengths(const SpinOrbitalSystem& s);
// <k| a+_a a_i |0> for every excited state k (columns, aligned with the poles), rows ph-indexed.
MatrixXc fci_transition_amplitudes(const SpinOrbitalSystem& s);

// ph part of -[V(t), Q [V(s), o]] as a matrix over ph amplitudes
// (interaction picture, bath factors stripped).
MatrixXc superoperator_tcl(const SpinOrbitalSystem& s, double t, double sp);
// ph part of -[V(t), [V(s), o]] without the projector.
MatrixXc double_commutator_ph(const SpinOrbitalSystem& s, double t, double sp);
// -i times the one-body part of [V(t), E_pq] for every one-body basis string
// {a+_p a_q}; rows and columns indexed p * n + q.
MatrixXc one_body_map(const SpinOrbitalSystem& s, double t);
// ph part of -[A(t), [A(s), o]] with A = sum M_pq a+_p a_q.
MatrixXc superoperator_untransformed(const SpinOrbitalSystem& s, const Eigen::MatrixXd& M, double t, double sp);
// ph part of -i [V_N, o] (the first-order generator without the gap).
MatrixXc first_order_map(const SpinOrbitalSystem& s);

// Coefficient of the normal-ordered string {a+_p a_q} in Y and the scalar part.
struct OneBodyPart {
    Complex scalar;
    MatrixXc y;
};
OneBodyPart one_body_part(const FockSpace& f, int n_occ, const MatrixXc& Y);

// Single truncated oscillator.
class TruncatedBoson {
public:
    TruncatedBoson(int n_max, double omega, double beta);
    int levels() const { return n_; }
    const Eigen::MatrixXd& b() const { return b_; }
    const Eigen::VectorXd& thermal() const { return rho_; }
    // exp(alpha b+ - alpha b) evolved to time t under omega b+b
    MatrixXc displacement(double alpha, double t) const;
    Complex expectation(const MatrixXc& op) const;

private:
    int n_;
    double omega_;
    Eigen::MatrixXd b_;
    Eigen::VectorXd rho_;
};

struct DisplacementOp {
    int orbital = 0;
    bool dagger = true;  // X^dag_p = D(+M~_p), X_p = D(-M~_p)
    double time = 0.0;
};

// Thermal trace of the ordered product (leftmost first), factorized over modes.
Complex boson_trace(const std::vector<DisplacementOp>& ops, const BathSpec& bath, int n_max);
// <q(t) q(0)> with q = b + b+ for one oscillator.
Complex oscillator_correlation(double omega, double beta, double t, int n_max);
// Lowest levels of eps + omega b+b + M (b + b+), truncated.
Eigen::VectorXd independent_boson_levels(double eps, double M, double omega, int n_max, int count);

}  // namespace ptcl::oracle
