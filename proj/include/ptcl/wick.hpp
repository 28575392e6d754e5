#pragma once

#include <array>
#include <functional>
#include <string>
#include <vector>

#include "ptcl/hamiltonian.hpp"

namespace ptcl {

struct Rational {
    long num = 0;
    long den = 1;

    Rational() = default;
    Rational(long n, long d = 1);
    double value() const { return static_cast<double>(num) / static_cast<double>(den); }
    bool zero() const { return num == 0; }
    std::string str() const;
    Rational operator-() const { return Rational(-num, den); }
    friend Rational operator+(const Rational& a, const Rational& b);
    friend Rational operator*(const Rational& a, const Rational& b);
    friend bool operator==(const Rational& a, const Rational& b) = default;
};

enum class TermKind { Gap, FirstOrder, SecondOrder, Bath };

// One contraction recipe. Labels 0 and 1 are the external virtual (a) and
// occupied (i) indices of the output amplitude; the rest are summed.
//
//   FirstOrder:  d o[i,a]/dt += -i c <vt> o[o] B_eq(vt)
//   SecondOrder: d o[i,a]/dt += c <vt> <vs> o[o] K(t),  K = int_0^t B(tau) e^{i phase_sign D tau}
//   Bath:        d o[i,a]/dt += c o[o] sum_k M_k[vt] M_k[vs] int_0^t F_k(tau) e^{i D tau}
//
// with <vt> = <vt0 vt1||vt2 vt3> (conjugated for Hermitian partners) and D the
// energies annihilated minus the energies created by the s-time operator.
// For Bath terms only vt[0..1], vs[0..1] are used: M^{pq} couples a+_p a_q.
struct TermSpec {
    TermKind kind = TermKind::SecondOrder;
    std::string id;
    std::vector<Space> labels;
    std::array<int, 4> vt{-1, -1, -1, -1};
    std::array<int, 4> vs{-1, -1, -1, -1};
    std::array<int, 2> o{1, 0};    // (occupied, virtual)
    std::array<int, 2> out{1, 0};  // (occupied, virtual)
    Rational prefactor{1};
    bool conjugate = false;
    int phase_sign = 1;
    int scaling = 2;
    bool factorizable = false;
    int spectator = -1;
    int partner_of = -1;  // index of the unpaired skeleton this term came from

    int sign() const { return prefactor.num < 0 ? -1 : 1; }
    std::string label_name(int l) const;
    std::string pattern() const;
    std::string phase_t() const;
    std::string phase_s() const;
    std::string bath_signature() const;
};

using Catalog = std::vector<TermSpec>;

Catalog first_order_terms();
// Unpaired second-order skeletons of [V(t), Q[V(s), o]] projected on ph.
Catalog second_order_skeletons();
// Hermitized: each skeleton split into two halves with swapped amplitude slots.
Catalog second_order_terms();
Catalog untransformed_terms();
Catalog hermitize(const Catalog& skeletons);

// Canonical form used for deduplication, exposed so tests can look up terms.
TermSpec canonicalize(const TermSpec& t, int* sign_out = nullptr);
const TermSpec* find_term(const Catalog& c, const TermSpec& probe);

// Calls fn(idx) for every orbital assignment idx[label] of the term's labels.
void for_each_assignment(const TermSpec& t, const SpinOrbitalSystem& s, const std::function<void(const int*)>& fn);

// Tensor product <vt><vs> (or <vt> alone) at an assignment, honouring conjugate.
Complex tensor_value(const TermSpec& t, const SpinOrbitalSystem& s, const int* idx);
// Energy created minus annihilated by the t-time and s-time operators.
double created_minus_annihilated_t(const TermSpec& t, const Eigen::VectorXd& eps, const int* idx);
double created_minus_annihilated_s(const TermSpec& t, const Eigen::VectorXd& eps, const int* idx);

// Interaction-picture map of the unpaired skeletons at times (t, s), adiabatic.
MatrixXc skeleton_map(const Catalog& skeletons, const SpinOrbitalSystem& s, double t, double sp);
// Same for untransformed bath terms with a single coupling matrix, kernel stripped.
MatrixXc bath_skeleton_map(const Catalog& terms, const SpinOrbitalSystem& s, const Eigen::MatrixXd& M, double t,
                           double sp);

double validate_against_superoperator(const Catalog& skeletons, const SpinOrbitalSystem& s, double t, double sp);

std::string catalog_json(const Catalog& c);

}  // namespace ptcl
