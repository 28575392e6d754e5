#include <cmath>
#include <sstream>

#include "ptcl/kernels.hpp"
#include "ptcl/quadrature.hpp"

namespace ptcl {

namespace {

BathSignature signature_of(const KernelSpec& k, const std::vector<int>& channel_orbital) {
    BathSignature sig;
    auto fill = [&](const std::vector<std::pair<int, int>>& s, std::vector<int>& cre, std::vector<int>& ann) {
        for (auto [c, n] : s)
            for (int r = 0; r < std::abs(n); ++r) (n > 0 ? cre : ann).push_back(channel_orbital[c]);
    };
    fill(k.t_sig, sig.t_create, sig.t_annihilate);
    fill(k.s_sig, sig.s_create, sig.s_annihilate);
    return sig;
}

Complex unit_integral(double phase, double a, double b) {
    if (phase == 0.0) return b - a;
    return (std::exp(I * (phase * b)) - std::exp(I * (phase * a))) / (I * phase);
}

}  // namespace

Complex KernelTable::correlation_reference(int id, double tau) const {
    const KernelSpec& k = specs_.at(id);
    switch (k.kind) {
        case KernelKind::Unit: return 1.0;
        case KernelKind::Dressed: return bcf_two_time(signature_of(k, channel_orbital_), bath_, tau);
        case KernelKind::Classical: {
            auto [p, q] = channel_element_[k.t_sig[0].first];
            auto [r, s] = channel_element_[k.s_sig[0].first];
            return classical_corr(bath_, tau, p, q, r, s);
        }
    }
    return 0.0;
}

void KernelTable::advance_reference(double h, VectorXc& out) const {
    const GaussRule r = gauss_legendre(order_);
    out.resize(size());
    for (int id = 0; id < size(); ++id) {
        const KernelSpec& k = specs_[id];
        if (k.kind == KernelKind::Unit) {
            out(id) = value_(id) + unit_integral(k.phase, time_, time_ + h);
            continue;
        }
        Complex inc{};
        for (std::size_t n = 0; n < r.x.size(); ++n) {
            const double tau = time_ + 0.5 * h * (1.0 + r.x[n]);
            inc += 0.5 * h * r.w[n] * correlation_reference(id, tau) * std::exp(I * (k.phase * tau));
        }
        out(id) = value_(id) + inc;
    }
}

VectorXc KernelTable::from_scratch(double t, int panels_per_unit) const {
    const GaussRule r = gauss_legendre(8);
    const double wmax = max_frequency(bath_);
    VectorXc out(size());
    for (int id = 0; id < size(); ++id) {
        const KernelSpec& k = specs_[id];
        if (k.kind == KernelKind::Unit) {
            out(id) = unit_integral(k.phase, 0.0, t);
            continue;
        }
        const double rate = std::abs(k.phase) + wmax + 1.0;
        const int panels = std::max(4, static_cast<int>(std::ceil(t * rate * panels_per_unit / 40.0)));
        out(id) = integrate_panels(
            [&](double tau) { return correlation_reference(id, tau) * std::exp(I * (k.phase * tau)); }, 0.0, t, panels,
            r);
    }
    return out;
}

HalfFourier KernelTable::markov_limit(int id, double t_c) const {
    const KernelSpec& k = specs_.at(id);
    if (k.kind == KernelKind::Unit) {
        if (k.phase == 0.0) return {0.0, true};
        return {I / k.phase, false};
    }
    // dressed correlations relax to the static factor, classical ones to zero
    const Complex f_inf = k.kind == KernelKind::Dressed ? Complex(k.amplitude) : Complex{};
    return half_fourier([&](double tau) { return correlation_reference(id, tau); }, f_inf, k.phase, t_c,
                        max_frequency(bath_));
}

void Generator::assemble_reference(const VectorXc& K, MatrixXc& G) const {
    G = constant_;
    for (const auto& t : catalog_) {
        if (t.kind != TermKind::SecondOrder && t.kind != TermKind::Bath) continue;
        for_each_assignment(t, sys_, [&](const int* idx) {
            const Complex c = coefficient(t, idx);
            if (c == Complex{}) return;
            const int kid = kernel_for(t, idx);
            if (kid < 0) return;
            G(sys_.ph(idx[t.out[0]], idx[t.out[1]]), sys_.ph(idx[t.o[0]], idx[t.o[1]])) += c * K(kid);
        });
    }
}

void Generator::check_finite(const VectorXc& K) const {
    if (K.allFinite()) return;
    for (const auto& t : catalog_) {
        if (t.kind != TermKind::SecondOrder && t.kind != TermKind::Bath) continue;
        bool bad = false;
        for_each_assignment(t, sys_, [&](const int* idx) {
            if (bad) return;
            const int kid = kernel_for(t, idx);
            if (kid >= 0 && !std::isfinite(std::abs(coefficient(t, idx) * K(kid)))) bad = true;
        });
        if (bad) throw IntegratorError("non-finite contribution from term " + t.id);
    }
    throw IntegratorError("non-finite kernel value");
}

}  // namespace ptcl
