#include "ptcl/bath.hpp"

#include <algorithm>
#include <cmath>

#include "ptcl/quadrature.hpp"

namespace ptcl {

double coth_half(double beta, double omega) {
    if (std::isinf(beta)) return 1.0;
    return 1.0 / std::tanh(0.5 * beta * omega);
}

double spectral_density(DensityShape shape, double omega, double omega_c) {
    if (omega <= 0.0) return 0.0;
    if (shape == DensityShape::SuperOhmic)
        return omega * omega * omega / (6.0 * omega_c * omega_c) * std::exp(-omega / omega_c);
    return omega * std::exp(-omega / omega_c);
}

Complex f_kernel(double omega, double beta, double t, double width) {
    const Complex f(coth_half(beta, omega) * std::cos(omega * t), -std::sin(omega * t));
    return width > 0.0 ? f * std::exp(-width * std::abs(t)) : f;
}

std::vector<Mode> discretize_density(const Density& d, int n_orb) {
    if (d.n_points < 8) throw DomainError("density discretization needs at least 8 points");
    if (d.omega_c <= 0.0) throw DomainError("cutoff frequency must be positive");
    const double w_hi = 10.0 * d.omega_c;
    const double w_lo = 1e-3 * d.omega_c;
    const double h = std::log(w_hi / w_lo) / (d.n_points - 1);
    std::vector<Mode> modes;
    for (int k = 0; k < d.n_points; ++k) {
        const double w = w_lo * std::exp(k * h);
        double dw = w * h;
        if (k == 0 || k == d.n_points - 1) dw *= 0.5;
        const double j = spectral_density(d.shape, w, d.omega_c);
        Mode m;
        m.omega = w;
        m.coupling = Eigen::MatrixXd::Zero(n_orb, n_orb);
        for (int p = 0; p < n_orb && p < d.eta.size(); ++p) {
            // M~ = sqrt(J dw) / w, so M = w M~ = sqrt(J dw)
            m.coupling(p, p) = std::sqrt(std::max(0.0, d.eta(p)) * j * dw);
        }
        modes.push_back(std::move(m));
    }
    return modes;
}

BathSpec discretized(const BathSpec& b) {
    BathSpec out;
    out.n_orb = b.n_orb;
    out.beta = b.beta;
    out.modes = b.modes;
    for (const auto& d : b.densities) {
        auto m = discretize_density(d, b.n_orb);
        out.modes.insert(out.modes.end(), m.begin(), m.end());
    }
    for (const auto& m : out.modes)
        if (!(m.omega > 0.0)) throw DomainError("mode frequency must be positive");
    return out;
}

BathSignature BathSignature::conjugate() const {
    // (X^dag_c X_a)(t) (X^dag_c' X_a')(s) -> swap groups, swap roles
    return BathSignature{s_annihilate, s_create, t_annihilate, t_create};
}

Eigen::VectorXd net_displacement(const std::vector<int>& create, const std::vector<int>& annihilate,
                                 const BathSpec& bath) {
    Eigen::VectorXd n = Eigen::VectorXd::Zero(static_cast<int>(bath.modes.size()));
    for (std::size_t m = 0; m < bath.modes.size(); ++m) {
        const auto& mode = bath.modes[m];
        double s = 0.0;
        for (int p : create) s += mode.mtilde(p);
        for (int p : annihilate) s -= mode.mtilde(p);
        n(static_cast<int>(m)) = s;
    }
    return n;
}

namespace {

double static_exponent(const Eigen::VectorXd& nt, const Eigen::VectorXd& ns, const BathSpec& bath) {
    double e = 0.0;
    for (std::size_t m = 0; m < bath.modes.size(); ++m) {
        const int k = static_cast<int>(m);
        e += 0.5 * coth_half(bath.beta, bath.modes[m].omega) * (nt(k) * nt(k) + ns(k) * ns(k));
    }
    return e;
}

}  // namespace

Complex bcf_two_time(const BathSignature& sig, const BathSpec& bath, double tau) {
    const Eigen::VectorXd nt = net_displacement(sig.t_create, sig.t_annihilate, bath);
    const Eigen::VectorXd ns = net_displacement(sig.s_create, sig.s_annihilate, bath);
    Complex x = -static_exponent(nt, ns, bath);
    for (std::size_t m = 0; m < bath.modes.size(); ++m) {
        const int k = static_cast<int>(m);
        if (nt(k) == 0.0 || ns(k) == 0.0) continue;
        const auto& mode = bath.modes[m];
        x -= nt(k) * ns(k) * f_kernel(mode.omega, bath.beta, tau, mode.width);
    }
    return std::exp(x);
}

double bcf_equal_time(const std::vector<int>& create, const std::vector<int>& annihilate, const BathSpec& bath) {
    const Eigen::VectorXd n = net_displacement(create, annihilate, bath);
    double e = 0.0;
    for (std::size_t m = 0; m < bath.modes.size(); ++m)
        e += 0.5 * coth_half(bath.beta, bath.modes[m].omega) * n(static_cast<int>(m)) * n(static_cast<int>(m));
    return std::exp(-e);
}

Complex bcf_equilibrium(const BathSignature& sig, const BathSpec& bath) {
    const Eigen::VectorXd nt = net_displacement(sig.t_create, sig.t_annihilate, bath);
    const Eigen::VectorXd ns = net_displacement(sig.s_create, sig.s_annihilate, bath);
    return std::exp(-static_exponent(nt, ns, bath));
}

Complex classical_corr(const BathSpec& bath, double tau, int p, int q, int r, int s) {
    Complex c{};
    for (const auto& mode : bath.modes) {
        const double w = mode.coupling(p, q) * mode.coupling(r, s);
        if (w != 0.0) c += w * f_kernel(mode.omega, bath.beta, tau, mode.width);
    }
    return c;
}

Complex classical_corr(const BathSpec& bath, double tau, const std::vector<double>& weights) {
    Complex c{};
    for (std::size_t m = 0; m < bath.modes.size() && m < weights.size(); ++m)
        c += weights[m] * f_kernel(bath.modes[m].omega, bath.beta, tau, bath.modes[m].width);
    return c;
}

double max_frequency(const BathSpec& bath) {
    double w = 0.0;
    for (const auto& m : bath.modes) w = std::max(w, m.omega);
    return w;
}

HalfFourier half_fourier(const std::function<Complex(double)>& f, Complex f_inf, double delta, double t_c,
                         double max_freq) {
    if (!(t_c > 0.0)) throw DomainError("half_fourier needs t_c > 0");
    static const GaussRule rule = gauss_legendre(8);
    const double fast = std::max({std::abs(delta) + max_freq, max_freq, 1e-3});
    // about eight nodes per shortest period
    const int panels = std::max(64, static_cast<int>(std::ceil(t_c * fast / (2.0 * M_PI) * 2.0)));
    HalfFourier r;
    r.value = integrate_panels([&](double tau) { return f(tau) * std::exp(I * delta * tau); }, 0.0, t_c, panels, rule);
    if (std::abs(f_inf) > 0.0) {
        if (delta == 0.0) {
            r.conditionally_convergent = true;
            warn("half_fourier: nonzero equilibrium offset at zero frequency; tail dropped");
        } else {
            r.value += f_inf * I * std::exp(I * delta * t_c) / delta;
        }
    }
    return r;
}

HalfFourier half_fourier(const BathSignature& sig, const BathSpec& bath, double delta, double t_c) {
    return half_fourier([&](double tau) { return bcf_two_time(sig, bath, tau); }, bcf_equilibrium(sig, bath), delta,
                        t_c, max_frequency(bath));
}

}  // namespace ptcl
