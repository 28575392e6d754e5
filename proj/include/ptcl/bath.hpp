#pragma once

#include <functional>
#include <limits>
#include <vector>

#include "ptcl/types.hpp"

namespace ptcl {

// One harmonic mode. coupling(p, q) = M^{pq} in Hartree; the polaron theory
// uses the diagonal only. A nonzero width damps F(t) by exp(-width |t|).
struct Mode {
    double omega = 0.0;
    double width = 0.0;
    Eigen::MatrixXd coupling;

    double mtilde(int p) const { return coupling(p, p) / omega; }
};

enum class DensityShape { Ohmic, SuperOhmic };

struct Density {
    DensityShape shape = DensityShape::SuperOhmic;
    Eigen::VectorXd eta;  // per orbital
    double omega_c = 0.0;
    int n_points = 64;
};

struct BathSpec {
    int n_orb = 0;
    std::vector<Mode> modes;
    std::vector<Density> densities;
    double beta = std::numeric_limits<double>::infinity();

    bool empty() const { return modes.empty() && densities.empty(); }
};

double coth_half(double beta, double omega);

// J(omega) per unit eta
double spectral_density(DensityShape shape, double omega, double omega_c);

Complex f_kernel(double omega, double beta, double t, double width = 0.0);

std::vector<Mode> discretize_density(const Density& d, int n_orb);

// Modes only: every density replaced by its discretization.
BathSpec discretized(const BathSpec& b);

// Creation (X^dagger) and annihilation (X) orbital lists for the operator
// group at the later time t and the earlier time s.
struct BathSignature {
    std::vector<int> t_create, t_annihilate;
    std::vector<int> s_create, s_annihilate;

    BathSignature conjugate() const;
};

// Signed displacement sum per mode: sum M~(create) - sum M~(annihilate).
Eigen::VectorXd net_displacement(const std::vector<int>& create, const std::vector<int>& annihilate,
                                 const BathSpec& bath);

Complex bcf_two_time(const BathSignature& sig, const BathSpec& bath, double tau);
double bcf_equal_time(const std::vector<int>& create, const std::vector<int>& annihilate, const BathSpec& bath);
// limit of bcf_two_time once the mode correlations have decayed
Complex bcf_equilibrium(const BathSignature& sig, const BathSpec& bath);

// Sum over modes of M^{pq} M^{rs} F(tau).
Complex classical_corr(const BathSpec& bath, double tau, int p, int q, int r, int s);
// Sum over modes of weights[m] F_m(tau).
Complex classical_corr(const BathSpec& bath, double tau, const std::vector<double>& weights);

struct HalfFourier {
    Complex value;
    bool conditionally_convergent = false;
};

// Integral of f(tau) e^{i delta tau} over [0, inf): quadrature on [0, t_c],
// the tail replaced by the analytic transform of the constant f_inf.
HalfFourier half_fourier(const std::function<Complex(double)>& f, Complex f_inf, double delta, double t_c,
                         double max_freq);
HalfFourier half_fourier(const BathSignature& sig, const BathSpec& bath, double delta, double t_c);

// Largest mode frequency (for quadrature panel sizing).
double max_frequency(const BathSpec& bath);

}  // namespace ptcl
