#pragma once

#include <map>
#include <tuple>
#include <vector>

#include "ptcl/bath.hpp"
#include "ptcl/hamiltonian.hpp"
#include "ptcl/wick.hpp"

namespace ptcl {

enum class KernelKind { Unit, Dressed, Classical };

// K(t) = int_0^t f(tau) e^{i phase tau} dtau with
//   Unit:      f = 1
//   Dressed:   f = amplitude * exp(-sum_{c in t, d in s} n_c n_d C_cd(tau))
//   Classical: f = C_cd(tau) for the single channels c, d
// where C_cd(tau) = sum_m g_c(m) g_d(m) F_m(tau).
struct KernelSpec {
    KernelKind kind = KernelKind::Unit;
    double phase = 0.0;
    std::vector<std::pair<int, int>> t_sig, s_sig;  // (channel, signed count)
    double amplitude = 1.0;

    auto key() const { return std::make_tuple(kind, phase, t_sig, s_sig); }
};

// Couplings g_c(m) of each channel to each mode.
struct ChannelTable {
    Eigen::MatrixXd g;  // channel x mode
    Eigen::VectorXd omega, width, coth;
    Eigen::MatrixXd S;  // sum_m coth g_c g_d

    int size() const { return static_cast<int>(g.rows()); }
    void build(const std::vector<Eigen::VectorXd>& couplings, const BathSpec& bath);
    void correlation(double tau, MatrixXc& C) const;
};

class KernelTable {
public:
    KernelTable() = default;
    explicit KernelTable(const BathSpec& bath);

    int add(KernelSpec k);
    int find(const KernelSpec& k) const;
    int size() const { return static_cast<int>(specs_.size()); }
    const KernelSpec& spec(int id) const { return specs_[id]; }

    // orbital -> dressed channel (-1 if uncoupled); (p,q) -> classical channel
    int dressed_channel(int orbital) const;
    int classical_channel(int p, int q) const;
    double static_factor(const std::vector<std::pair<int, int>>& sig) const;

    double time() const { return time_; }
    const VectorXc& value() const { return value_; }
    int quadrature_order() const { return order_; }
    void set_quadrature_order(int q);

    // Kernel values at time() + h from the committed values; OpenMP over kernels.
    void advance(double h, VectorXc& out) const;
    // Serial reference evaluated through the bath module one kernel at a time.
    void advance_reference(double h, VectorXc& out) const;
    void commit(double h, const VectorXc& v);
    void reset();
    void restore(double t, const VectorXc& v);

    // Dense composite quadrature over [0, t] through the bath module.
    VectorXc from_scratch(double t, int panels_per_unit = 40) const;
    // f(tau) for one kernel through the bath module (no e^{i phase tau}).
    Complex correlation_reference(int id, double tau) const;
    // Infinite-time value with the tail regularized beyond t_c.
    HalfFourier markov_limit(int id, double t_c) const;
    bool has_dressed() const { return dressed_.size() > 0; }
    const BathSpec& bath() const { return bath_; }
    // continuous densities as given, before discretization
    const std::vector<Density>& densities() const { return densities_; }

private:
    BathSpec bath_;
    std::vector<Density> densities_;
    std::vector<int> orbital_channel_;
    std::vector<int> channel_orbital_;
    std::map<std::pair<int, int>, int> element_channel_;
    std::vector<std::pair<int, int>> channel_element_;
    ChannelTable dressed_, classical_;

    std::vector<KernelSpec> specs_;
    using Key = std::tuple<KernelKind, double, std::vector<std::pair<int, int>>, std::vector<std::pair<int, int>>>;
    std::map<Key, int> index_;
    VectorXc value_;
    double time_ = 0.0;
    int order_ = 3;
};

enum class Theory { Adiabatic, Transformed, Untransformed, Markovian };

struct GeneratorOptions {
    Theory mode = Theory::Adiabatic;
    bool correlation = true;
    bool factorize = true;
};

// Time-local generator G(t) of d o / dt = G(t) o over flattened ph amplitudes.
class Generator {
public:
    struct Entry {
        int out;
        int in;
        Complex coef;
        int kernel;
    };
    struct Intermediate {
        std::string term;
        Space spectator;
        int rows, cols;
        std::vector<Entry> entries;  // partial indices
        std::vector<int> row_ptr;
    };

    // sys carries the orbital energies and tensor actually used (dressed in
    // transformed mode); bath is ignored in adiabatic mode.
    Generator(const SpinOrbitalSystem& sys, const BathSpec& bath, const GeneratorOptions& opt);

    const SpinOrbitalSystem& system() const { return sys_; }
    const Catalog& catalog() const { return catalog_; }
    const GeneratorOptions& options() const { return opt_; }
    KernelTable& kernels() { return kernels_; }
    const KernelTable& kernels() const { return kernels_; }
    const MatrixXc& constant() const { return constant_; }
    std::size_t direct_entries() const { return direct_.size(); }
    std::size_t intermediate_entries() const;

    // OpenMP over output rows.
    void assemble(const VectorXc& K, MatrixXc& G) const;
    // Serial: loops the catalog index tuples directly with hashed kernel lookup.
    void assemble_reference(const VectorXc& K, MatrixXc& G) const;
    // Abort with the offending term id if any contribution is not finite.
    void check_finite(const VectorXc& K) const;

    // kernel id for one assignment of a correlated or bath term
    int kernel_for(const TermSpec& t, const int* idx) const;
    Complex coefficient(const TermSpec& t, const int* idx) const;

private:
    void build_entries();
    KernelSpec make_kernel(const TermSpec& t, const int* idx) const;

    SpinOrbitalSystem sys_;
    GeneratorOptions opt_;
    Catalog catalog_;
    MatrixXc constant_;
    KernelTable kernels_;
    std::vector<Entry> direct_;
    std::vector<int> row_ptr_;
    std::vector<Intermediate> factored_;
};

}  // namespace ptcl
