#pragma once

#include <functional>
#include <string>
#include <vector>

#include "ptcl/kernels.hpp"

namespace ptcl {

struct PropagationConfig {
    double dt_initial = 0.05;
    double dt_min = 1e-7;
    double dt_max = 0.1;
    double rk_tolerance = 1e-8;
    double t_final = 100.0;
    double output_stride = 0.5;
    int quadrature_order = 3;
    Theory mode = Theory::Adiabatic;
    bool correlation_terms = true;
    // serial reference kernels and assembly (testing)
    bool reference = false;

    void validate() const;
};

// Sampled amplitudes; columns of each sample are independent right-hand sides.
struct Trajectory {
    std::vector<double> times;
    std::vector<MatrixXc> samples;
    std::vector<Eigen::VectorXd> norms;
    long accepted = 0;
    long rejected = 0;

    // column k of every sample as (n_times x n_ph)
    MatrixXc series(int column) const;
};

struct Checkpoint {
    double time = 0.0;
    double h_next = 0.0;
    MatrixXc state;
    VectorXc kernels;
};

void write_checkpoint(const std::string& path, const Checkpoint& c);
Checkpoint read_checkpoint(const std::string& path);

// Columns: t, then Re/Im of each o[ia] in flattened order, then the norm.
void write_trajectory(const std::string& path, const Trajectory& tr, int column);
// Returns (times, amplitudes as n_times x n_ph).
std::pair<std::vector<double>, MatrixXc> read_trajectory(const std::string& path);

class Propagator {
public:
    Propagator(Generator& gen, const PropagationConfig& cfg);

    // dO/dt = G(t) O using the committed kernels advanced by h_offset.
    void derivative(const MatrixXc& O, double h_offset, MatrixXc& dO);
    // G(t) at the committed kernel time.
    MatrixXc generator_now();

    // Integrates from the committed kernel time to cfg.t_final.
    Trajectory propagate(const MatrixXc& initial);
    Trajectory resume(const Checkpoint& c);
    Checkpoint checkpoint() const;

    // Optional hook after each accepted step (t, state).
    std::function<void(double, const MatrixXc&)> on_step;

    const PropagationConfig& config() const { return cfg_; }

private:
    void kernels_at(double h, VectorXc& K) const;
    void assemble(const VectorXc& K, MatrixXc& G) const;
    Trajectory run(MatrixXc O, double h);

    Generator& gen_;
    PropagationConfig cfg_;
    MatrixXc state_;
    double h_next_ = 0.0;
};

}  // namespace ptcl
