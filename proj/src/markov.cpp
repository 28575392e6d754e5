#include "ptcl/markov.hpp"

#include <cmath>
#include <sstream>

#include <unsupported/Eigen/MatrixFunctions>

#include "ptcl/quadrature.hpp"

namespace ptcl {

double correlation_time(const BathSpec& raw, double t_max) {
    const BathSpec bath = discretized(raw);
    if (bath.modes.empty()) return 0.0;
    std::vector<double> w;
    double slowest = 0.0;
    for (const auto& m : bath.modes) {
        double s = 0.0;
        for (int p = 0; p < bath.n_orb; ++p) s += m.mtilde(p) * m.mtilde(p);
        w.push_back(s * m.omega * m.omega);
        slowest = std::max(slowest, m.width > 0.0 ? 1.0 / m.width : 2.0 * M_PI / m.omega);
    }
    if (t_max <= 0.0) t_max = 20.0 * slowest;
    const double c0 = std::abs(classical_corr(bath, 0.0, w));
    if (c0 == 0.0) return 0.0;
    const GaussRule r = gauss_legendre(8);
    const int panels = std::max(64, static_cast<int>(std::ceil(t_max * max_frequency(bath))));
    return integrate_panels([&](double t) { return std::abs(classical_corr(bath, t, w)); }, 0.0, t_max, panels, r) / c0;
}

namespace {

void check_cutoff(const KernelTable& kt, double t_c) {
    const BathSpec& bath = kt.bath();
    for (const auto& d : kt.densities()) {
        const double need = std::sqrt(20.0 / (bath.beta * d.omega_c));
        if (std::isfinite(bath.beta) && t_c < need) {
            std::ostringstream m;
            m << "t_c = " << t_c << " violates beta*omega_c*t_c^2 >> 2; suggest t_c >= " << need;
            warn(m.str());
        }
    }
    bool undamped = false;
    for (const auto& m : bath.modes) undamped = undamped || m.width <= 0.0;
    if (undamped && !bath.modes.empty() && kt.densities().empty()) {
        const double tau = correlation_time(bath);
        std::ostringstream m;
        m << "bath has undamped modes; correlations do not decay, rates depend on t_c (correlation time estimate "
          << tau << ")";
        warn(m.str());
    }
}

}  // namespace

RateTensorSet build_rates(const Generator& gen, double t_c) {
    if (!(t_c > 0.0)) throw ValidationError("t_c must be positive");
    const KernelTable& kt = gen.kernels();
    check_cutoff(kt, t_c);
    RateTensorSet out;
    out.t_c = t_c;
    out.R.resize(kt.size());
    std::vector<char> cc(kt.size(), 0);
#pragma omp parallel for schedule(dynamic)
    for (int id = 0; id < kt.size(); ++id) {
        const HalfFourier h = kt.markov_limit(id, t_c);
        out.R(id) = h.value;
        cc[id] = h.conditionally_convergent;
    }
    for (int id = 0; id < kt.size(); ++id)
        if (cc[id]) out.conditionally_convergent.push_back(id);
    if (!out.conditionally_convergent.empty())
        warn(std::to_string(out.conditionally_convergent.size()) + " rate kernels have zero frequency; tails dropped");
    gen.assemble(out.R, out.G_eff);
    const SpinOrbitalSystem& s = gen.system();
    for (const auto& t : gen.catalog()) {
        if (t.kind != TermKind::SecondOrder && t.kind != TermKind::Bath) continue;
        MatrixXc m = MatrixXc::Zero(s.n_ph(), s.n_ph());
        for_each_assignment(t, s, [&](const int* idx) {
            const Complex c = gen.coefficient(t, idx);
            if (c == Complex{}) return;
            const int kid = gen.kernel_for(t, idx);
            if (kid >= 0) m(s.ph(idx[t.out[0]], idx[t.out[1]]), s.ph(idx[t.o[0]], idx[t.o[1]])) += c * out.R(kid);
        });
        out.term_norms.emplace_back(t.id, m.norm());
    }
    return out;
}

namespace {

Trajectory sampled(const MatrixXc& initial, double t_final, double stride,
                   const std::function<MatrixXc(double)>& evolve) {
    Trajectory tr;
    const long n = static_cast<long>(std::floor(t_final / stride + 1e-9));
    for (long k = 0; k <= n; ++k) {
        const double t = k * stride;
        MatrixXc o = evolve(t);
        tr.times.push_back(t);
        tr.norms.push_back(o.colwise().squaredNorm().transpose());
        tr.samples.push_back(std::move(o));
    }
    if (t_final - n * stride > 1e-9 * stride) {
        MatrixXc o = evolve(t_final);
        tr.times.push_back(t_final);
        tr.norms.push_back(o.colwise().squaredNorm().transpose());
        tr.samples.push_back(std::move(o));
    }
    (void)initial;
    return tr;
}

}  // namespace

Trajectory markov_propagate(const MatrixXc& G, const MatrixXc& initial, double t_final, double stride) {
    if (!(stride > 0.0)) throw ValidationError("output stride must be positive");
    const MatrixXc step = (G * stride).exp();
    MatrixXc o = initial;
    double t_now = 0.0;
    return sampled(initial, t_final, stride, [&](double t) {
        if (t == 0.0) return initial;
        const double dt = t - t_now;
        if (std::abs(dt - stride) < 1e-12 * stride)
            o = step * o;
        else
            o = (G * dt).exp() * o;
        t_now = t;
        return o;
    });
}

Trajectory markov_propagate_spectral(const MatrixXc& G, const MatrixXc& initial, double t_final, double stride) {
    if (!(stride > 0.0)) throw ValidationError("output stride must be positive");
    Eigen::ComplexEigenSolver<MatrixXc> es(G);
    const MatrixXc V = es.eigenvectors();
    const MatrixXc c = V.partialPivLu().solve(initial);
    const VectorXc lam = es.eigenvalues();
    return sampled(initial, t_final, stride, [&](double t) {
        VectorXc e = (lam * t).array().exp();
        return MatrixXc(V * e.asDiagonal() * c);
    });
}

MarkovSpectrum markov_spectrum(const MatrixXc& G, const std::vector<VectorXc>& dipoles) {
    MarkovSpectrum out;
    Eigen::ComplexEigenSolver<MatrixXc> es(G);
    const MatrixXc V = es.eigenvectors();
    Eigen::JacobiSVD<MatrixXc> svd(V);
    const auto sv = svd.singularValues();
    out.condition = sv(sv.size() - 1) > 0.0 ? sv(0) / sv(sv.size() - 1) : std::numeric_limits<double>::infinity();
    if (!(out.condition < 1e12)) {
        out.defective = true;
        warn("effective generator is numerically defective; use the time-domain spectrum");
        return out;
    }
    const MatrixXc L = V.inverse();
    for (int k = 0; k < G.rows(); ++k) {
        const Complex lam = es.eigenvalues()(k);
        Pole p;
        p.pole = -lam.imag();
        p.width = -lam.real();
        for (const auto& mu : dipoles) p.strength += (mu.transpose() * V.col(k)).value() * (L.row(k) * mu).value();
        if (lam.real() > 1e-12) ++out.growing;
        out.poles.push_back(p);
    }
    std::sort(out.poles.begin(), out.poles.end(), [](const Pole& a, const Pole& b) { return a.pole < b.pole; });
    if (out.growing > 0) warn(std::to_string(out.growing) + " eigenvalues of the effective generator have positive real part");
    return out;
}

}  // namespace ptcl
