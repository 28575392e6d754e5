#pragma once

#include <array>
#include <string>
#include <vector>

#include "ptcl/bath.hpp"
#include "ptcl/hamiltonian.hpp"
#include "ptcl/propagator.hpp"

namespace ptcl {

struct Kick {
    VectorXc amplitude;   // mu_ia along the direction
    VectorXc normalized;  // amplitude / |amplitude|, the propagated initial state
    double norm = 0.0;
    bool dark = false;
};

Kick dipole_kick(const SpinOrbitalSystem& s, int direction);
VectorXc dipole_vector(const SpinOrbitalSystem& s, int direction);

enum class DipoleDressing { None, Full, Equilibrium };

// C_ab(t) = sum_{ia,jb} mu^a_ia o_ia(t) mu^b_jb o_jb(0) B_{ia,jb}(t) where o(0)
// is the normalized kick along b that produced the series (n_times x n_ph).
VectorXc dipole_correlation(const MatrixXc& series, const VectorXc& initial, const VectorXc& mu_out,
                            const VectorXc& mu_in, const std::vector<double>& times, const SpinOrbitalSystem& s,
                            const BathSpec& bath, DipoleDressing dressing);

struct SpectrumOptions {
    double window = 0.0;  // exponential damping rate
    int pad = 1;          // zero padding factor
    bool normalize = false;
};

struct SpectrumResult {
    Eigen::VectorXd freqs;  // Hartree, ascending
    std::vector<VectorXc> amplitude;  // per input correlation
    Eigen::VectorXd averaged;         // Re of the mean of the diagonal inputs
    double resolution = 0.0;          // 2 pi / T_total
};

// Each C is sampled at spacing dt from t = 0.
SpectrumResult spectrum(const std::vector<VectorXc>& C, double dt, const SpectrumOptions& opt,
                        const std::vector<int>& diagonal = {});

struct Peak {
    double freq = 0.0;
    double height = 0.0;
};
// Local maxima above rel_threshold * max, refined by a parabola through the three top points.
std::vector<Peak> find_peaks(const Eigen::VectorXd& freqs, const Eigen::VectorXd& y, double rel_threshold = 0.05,
                             double f_min = -std::numeric_limits<double>::infinity());

void write_spectrum(const std::string& path, const SpectrumResult& r, const std::vector<std::string>& labels);

struct PopulationTrace {
    std::vector<double> times;
    Eigen::MatrixXd populations;  // n_times x n_states
    Eigen::VectorXd norm;
    Eigen::VectorXd energies;
};

PopulationTrace cis_populations(const MatrixXc& series, const std::vector<double>& times, const SpinOrbitalSystem& s);
// Normalized equal-weight superposition of the given CIS eigenstates.
VectorXc cis_superposition(const SpinOrbitalSystem& s, const std::vector<int>& states);

}  // namespace ptcl
