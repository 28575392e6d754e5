#pragma once

#include <string>
#include <vector>

#include "ptcl/propagator.hpp"

namespace ptcl {

struct RateTensorSet {
    double t_c = 0.0;
    VectorXc R;  // infinite-time value per kernel id
    std::vector<int> conditionally_convergent;
    std::vector<std::pair<std::string, double>> term_norms;  // Frobenius norm of each term's R-weighted map
    MatrixXc G_eff;
};

// Correlation time of the discretized bath: int |C(t)| dt / |C(0)| with C the
// coupling-weighted mode correlation.
double correlation_time(const BathSpec& bath, double t_max = 0.0);

RateTensorSet build_rates(const Generator& gen, double t_c);

Trajectory markov_propagate(const MatrixXc& G_eff, const MatrixXc& initial, double t_final, double stride);
// Same trajectory through the eigendecomposition of G_eff.
Trajectory markov_propagate_spectral(const MatrixXc& G_eff, const MatrixXc& initial, double t_final, double stride);

struct Pole {
    double pole = 0.0;   // Hartree
    double width = 0.0;  // -Re lambda
    Complex strength;    // sum over the given dipole directions
};

struct MarkovSpectrum {
    std::vector<Pole> poles;
    bool defective = false;
    double condition = 0.0;
    int growing = 0;  // eigenvalues with positive real part
};

// dipoles: ph-indexed vectors, one per direction
MarkovSpectrum markov_spectrum(const MatrixXc& G_eff, const std::vector<VectorXc>& dipoles);

}  // namespace ptcl
