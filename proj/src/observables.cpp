#include "ptcl/observables.hpp"

#include <cmath>
#include <fstream>
#include <iomanip>

#include <fftw3.h>

#include "ptcl/oracle.hpp"
#include "ptcl/units.hpp"

namespace ptcl {

VectorXc dipole_vector(const SpinOrbitalSystem& s, int direction) {
    if (direction < 0 || direction > 2) throw DomainError("kick direction must be x, y or z");
    VectorXc v(s.n_ph());
    for (int i = 0; i < s.n_occ; ++i)
        for (int a = s.n_occ; a < s.n(); ++a) v(s.ph(i, a)) = s.mu[direction](i, a);
    return v;
}

Kick dipole_kick(const SpinOrbitalSystem& s, int direction) {
    Kick k;
    k.amplitude = dipole_vector(s, direction);
    k.norm = k.amplitude.norm();
    if (k.norm == 0.0) {
        k.dark = true;
        k.normalized = k.amplitude;
        warn(std::string("dipole block along ") + "xyz"[direction] + " is zero (dark direction)");
    } else {
        k.normalized = k.amplitude / k.norm;
    }
    return k;
}

VectorXc dipole_correlation(const MatrixXc& series, const VectorXc& initial, const VectorXc& mu_out,
                            const VectorXc& mu_in, const std::vector<double>& times, const SpinOrbitalSystem& s,
                            const BathSpec& raw, DipoleDressing dressing) {
    const int nt = static_cast<int>(series.rows());
    const int nph = s.n_ph();
    VectorXc C(nt);
    const BathSpec bath = dressing == DipoleDressing::None ? BathSpec{} : discretized(raw);
    if (bath.modes.empty()) {
        const Complex right = (mu_in.transpose() * initial).value();
        for (int k = 0; k < nt; ++k) C(k) = (series.row(k) * mu_out).value() * right;
        return C;
    }
    // per ph pair: n(m) = M~_i - M~_a; the later pair enters as (X+_i X_a), the earlier as (X+_b X_j)
    const int nm = static_cast<int>(bath.modes.size());
    Eigen::MatrixXd n(nph, nm);
    Eigen::VectorXd coth(nm);
    for (int m = 0; m < nm; ++m) {
        coth(m) = coth_half(bath.beta, bath.modes[m].omega);
        for (int i = 0; i < s.n_occ; ++i)
            for (int a = s.n_occ; a < s.n(); ++a)
                n(s.ph(i, a), m) = bath.modes[m].mtilde(i) - bath.modes[m].mtilde(a);
    }
    Eigen::VectorXd self(nph);
    for (int p = 0; p < nph; ++p) self(p) = 0.5 * (n.row(p).array().square() * coth.transpose().array()).sum();
    VectorXc right(nph);
    for (int q = 0; q < nph; ++q) right(q) = mu_in(q) * initial(q);
#pragma omp parallel for schedule(static)
    for (int k = 0; k < nt; ++k) {
        VectorXc F(nm);
        for (int m = 0; m < nm; ++m)
            F(m) = dressing == DipoleDressing::Full
                       ? f_kernel(bath.modes[m].omega, bath.beta, times[k], bath.modes[m].width)
                       : Complex{};
        Complex acc{};
        for (int p = 0; p < nph; ++p) {
            const Complex left = mu_out(p) * series(k, p);
            if (left == Complex{}) continue;
            for (int q = 0; q < nph; ++q) {
                if (right(q) == Complex{}) continue;
                // n_s = -n_q for the reversed earlier pair
                Complex x = -(self(p) + self(q));
                for (int m = 0; m < nm; ++m) x += n(p, m) * n(q, m) * F(m);
                acc += left * right(q) * std::exp(x);
            }
        }
        C(k) = acc;
    }
    return C;
}

SpectrumResult spectrum(const std::vector<VectorXc>& C, double dt, const SpectrumOptions& opt,
                        const std::vector<int>& diagonal) {
    if (C.empty()) throw ValidationError("no correlation functions to transform");
    if (!(dt > 0.0)) throw ValidationError("sampling interval must be positive");
    if (opt.pad < 1) throw ValidationError("padding factor must be >= 1");
    const int n = static_cast<int>(C.front().size());
    const int N = n * opt.pad;
    SpectrumResult r;
    r.resolution = 2.0 * M_PI / (N * dt);
    r.freqs.resize(N);
    std::vector<int> order(N);
    for (int k = 0; k < N; ++k) {
        const int j = (k + (N + 1) / 2) % N;  // ascending, negative frequencies first
        order[k] = j;
        r.freqs(k) = (2 * j < N ? j : j - N) * r.resolution;
    }
    std::vector<Complex> in(N), out(N);
    fftw_plan plan = fftw_plan_dft_1d(N, reinterpret_cast<fftw_complex*>(in.data()),
                                      reinterpret_cast<fftw_complex*>(out.data()), FFTW_BACKWARD, FFTW_ESTIMATE);
    for (const auto& c : C) {
        if (c.size() != n) throw ValidationError("correlation functions differ in length");
        std::fill(in.begin(), in.end(), Complex{});
        for (int k = 0; k < n; ++k) in[k] = c(k) * std::exp(-opt.window * k * dt);
        fftw_execute(plan);
        VectorXc a(N);
        for (int k = 0; k < N; ++k) a(k) = out[order[k]] * dt;
        r.amplitude.push_back(a);
    }
    fftw_destroy_plan(plan);
    std::vector<int> diag = diagonal;
    if (diag.empty())
        for (int k = 0; k < static_cast<int>(C.size()); ++k) diag.push_back(k);
    r.averaged = Eigen::VectorXd::Zero(N);
    for (int d : diag) r.averaged += r.amplitude.at(d).real() / static_cast<double>(diag.size());
    if (opt.normalize) {
        const double m = r.averaged.cwiseAbs().maxCoeff();
        if (m > 0.0) {
            r.averaged /= m;
            for (auto& a : r.amplitude) a /= m;
        }
    }
    return r;
}

std::vector<Peak> find_peaks(const Eigen::VectorXd& f, const Eigen::VectorXd& y, double rel, double f_min) {
    std::vector<Peak> out;
    const int n = static_cast<int>(y.size());
    if (n < 3) return out;
    const double thr = rel * y.maxCoeff();
    for (int k = 1; k + 1 < n; ++k) {
        if (f(k) < f_min) continue;
        if (!(y(k) > y(k - 1) && y(k) >= y(k + 1) && y(k) > thr)) continue;
        const double a = y(k - 1), b = y(k), c = y(k + 1);
        const double den = a - 2.0 * b + c;
        const double shift = den != 0.0 ? 0.5 * (a - c) / den : 0.0;
        const double h = f(k + 1) - f(k);
        out.push_back({f(k) + shift * h, b - 0.25 * (a - c) * shift});
    }
    return out;
}

void write_spectrum(const std::string& path, const SpectrumResult& r, const std::vector<std::string>& labels) {
    std::ofstream f(path);
    if (!f) throw std::runtime_error("cannot write " + path);
    f << std::setprecision(12) << "# freq_hartree freq_ev freq_cm-1";
    for (const auto& l : labels) f << " re_" << l << " im_" << l;
    f << " averaged\n";
    for (int k = 0; k < r.freqs.size(); ++k) {
        f << r.freqs(k) << ' ' << r.freqs(k) * units::hartree_ev << ' ' << r.freqs(k) * units::hartree_cm;
        for (const auto& a : r.amplitude) f << ' ' << a(k).real() << ' ' << a(k).imag();
        f << ' ' << r.averaged(k) << '\n';
    }
}

PopulationTrace cis_populations(const MatrixXc& series, const std::vector<double>& times, const SpinOrbitalSystem& s) {
    const oracle::CisResult cis = oracle::exact_cis(s);
    PopulationTrace p;
    p.times = times;
    p.energies = cis.values;
    const MatrixXc proj = series * cis.vectors.conjugate();
    p.populations = proj.cwiseAbs2();
    p.norm = series.rowwise().squaredNorm();
    return p;
}

VectorXc cis_superposition(const SpinOrbitalSystem& s, const std::vector<int>& states) {
    const oracle::CisResult cis = oracle::exact_cis(s);
    VectorXc v = VectorXc::Zero(s.n_ph());
    for (int k : states) {
        if (k < 0 || k >= cis.vectors.cols()) throw ValidationError("CIS state index out of range");
        v += cis.vectors.col(k);
    }
    return v / v.norm();
}

}  // namespace ptcl
