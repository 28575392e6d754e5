#include "ptcl/kernels.hpp"

#include <algorithm>
#include <cmath>

#include "ptcl/quadrature.hpp"

namespace ptcl {

void ChannelTable::build(const std::vector<Eigen::VectorXd>& couplings, const BathSpec& bath) {
    const int nc = static_cast<int>(couplings.size());
    const int nm = static_cast<int>(bath.modes.size());
    g = Eigen::MatrixXd::Zero(nc, nm);
    for (int c = 0; c < nc; ++c) g.row(c) = couplings[c].transpose();
    omega.resize(nm);
    width.resize(nm);
    coth.resize(nm);
    for (int m = 0; m < nm; ++m) {
        omega(m) = bath.modes[m].omega;
        width(m) = bath.modes[m].width;
        coth(m) = coth_half(bath.beta, omega(m));
    }
    S = g * coth.asDiagonal() * g.transpose();
}

void ChannelTable::correlation(double tau, MatrixXc& C) const {
    const int nm = static_cast<int>(omega.size());
    VectorXc F(nm);
    for (int m = 0; m < nm; ++m) {
        Complex f(coth(m) * std::cos(omega(m) * tau), -std::sin(omega(m) * tau));
        if (width(m) > 0.0) f *= std::exp(-width(m) * std::abs(tau));
        F(m) = f;
    }
    C = g.cast<Complex>() * F.asDiagonal() * g.transpose().cast<Complex>();
}

KernelTable::KernelTable(const BathSpec& bath) : bath_(discretized(bath)), densities_(bath.densities) {
    const BathSpec& b = bath_;
    const int n = b.n_orb;
    orbital_channel_.assign(n, -1);
    std::vector<Eigen::VectorXd> dressed, classical;
    const int nm = static_cast<int>(b.modes.size());
    for (int p = 0; p < n && nm > 0; ++p) {
        Eigen::VectorXd g(nm);
        for (int m = 0; m < nm; ++m) g(m) = b.modes[m].mtilde(p);
        if (g.cwiseAbs().maxCoeff() > 0.0) {
            orbital_channel_[p] = static_cast<int>(dressed.size());
            channel_orbital_.push_back(p);
            dressed.push_back(g);
        }
    }
    for (int p = 0; p < n && nm > 0; ++p)
        for (int q = 0; q < n; ++q) {
            Eigen::VectorXd g(nm);
            for (int m = 0; m < nm; ++m) g(m) = b.modes[m].coupling(p, q);
            if (g.cwiseAbs().maxCoeff() > 0.0) {
                element_channel_[{p, q}] = static_cast<int>(classical.size());
                channel_element_.emplace_back(p, q);
                classical.push_back(g);
            }
        }
    dressed_.build(dressed, b);
    classical_.build(classical, b);
}

int KernelTable::add(KernelSpec k) {
    Key key = k.key();
    auto it = index_.find(key);
    if (it != index_.end()) return it->second;
    if (k.kind == KernelKind::Dressed) k.amplitude = std::exp(-(static_factor(k.t_sig) + static_factor(k.s_sig)));
    const int id = static_cast<int>(specs_.size());
    specs_.push_back(std::move(k));
    index_.emplace(std::move(key), id);
    value_.conservativeResize(size());
    value_(id) = 0.0;
    return id;
}

int KernelTable::find(const KernelSpec& k) const {
    auto it = index_.find(k.key());
    return it == index_.end() ? -1 : it->second;
}

int KernelTable::dressed_channel(int orbital) const {
    return orbital < static_cast<int>(orbital_channel_.size()) ? orbital_channel_[orbital] : -1;
}

int KernelTable::classical_channel(int p, int q) const {
    auto it = element_channel_.find({p, q});
    return it == element_channel_.end() ? -1 : it->second;
}

double KernelTable::static_factor(const std::vector<std::pair<int, int>>& sig) const {
    double e = 0.0;
    for (auto [c, nc] : sig)
        for (auto [d, nd] : sig) e += 0.5 * nc * nd * dressed_.S(c, d);
    return e;
}

void KernelTable::set_quadrature_order(int q) {
    if (q < 1 || q > 20) throw DomainError("quadrature order must be in 1..20");
    order_ = q;
}

namespace {

// int_t^{t+h} e^{i phase tau} dtau
Complex unit_increment(double phase, double t, double h) {
    const double x = phase * h;
    Complex phi1;
    if (std::abs(x) < 1e-4) {
        const Complex z = I * x;
        phi1 = 1.0 + z / 2.0 + z * z / 6.0 + z * z * z / 24.0;
    } else {
        phi1 = (std::exp(I * x) - 1.0) / (I * x);
    }
    return std::exp(I * (phase * t)) * h * phi1;
}

}  // namespace

void KernelTable::advance(double h, VectorXc& out) const {
    const int nk = size();
    out.resize(nk);
    static thread_local GaussRule rule;
    if (static_cast<int>(rule.x.size()) != order_) rule = gauss_legendre(order_);
    const GaussRule r = rule;
    const int q = order_;
    std::vector<double> tau(q), w(q);
    std::vector<MatrixXc> Cd(q), Cc(q);
    for (int k = 0; k < q; ++k) {
        tau[k] = time_ + 0.5 * h * (1.0 + r.x[k]);
        w[k] = 0.5 * h * r.w[k];
        if (dressed_.size() > 0) dressed_.correlation(tau[k], Cd[k]);
        if (classical_.size() > 0) classical_.correlation(tau[k], Cc[k]);
    }
#pragma omp parallel for schedule(static)
    for (int id = 0; id < nk; ++id) {
        const KernelSpec& s = specs_[id];
        if (s.kind == KernelKind::Unit) {
            out(id) = value_(id) + unit_increment(s.phase, time_, h);
            continue;
        }
        Complex inc{};
        for (int k = 0; k < q; ++k) {
            Complex f;
            if (s.kind == KernelKind::Dressed) {
                Complex x{};
                for (auto [c, nc] : s.t_sig)
                    for (auto [d, nd] : s.s_sig) x += double(nc * nd) * Cd[k](c, d);
                f = s.amplitude * std::exp(-x);
            } else {
                f = Cc[k](s.t_sig[0].first, s.s_sig[0].first);
            }
            inc += w[k] * f * std::exp(I * (s.phase * tau[k]));
        }
        out(id) = value_(id) + inc;
    }
}

void KernelTable::commit(double h, const VectorXc& v) {
    value_ = v;
    time_ += h;
}

void KernelTable::reset() {
    value_.setZero(size());
    time_ = 0.0;
}

void KernelTable::restore(double t, const VectorXc& v) {
    if (v.size() != size()) throw ValidationError("checkpoint kernel count does not match the catalog");
    value_ = v;
    time_ = t;
}

// ---------------------------------------------------------------------------

Generator::Generator(const SpinOrbitalSystem& sys, const BathSpec& bath, const GeneratorOptions& opt)
    : sys_(sys), opt_(opt) {
    BathSpec b = bath;
    if (opt.mode == Theory::Adiabatic) {
        b.modes.clear();
        b.densities.clear();
    }
    b.n_orb = sys.n();
    kernels_ = KernelTable(b);
    catalog_ = first_order_terms();
    if (opt.correlation) {
        auto so = second_order_terms();
        catalog_.insert(catalog_.end(), so.begin(), so.end());
    }
    if (opt.mode == Theory::Untransformed) {
        auto ut = untransformed_terms();
        catalog_.insert(catalog_.end(), ut.begin(), ut.end());
    }
    build_entries();
}

std::size_t Generator::intermediate_entries() const {
    std::size_t n = 0;
    for (const auto& f : factored_) n += f.entries.size();
    return n;
}

namespace {

void signature_counts(const KernelTable& kt, const std::array<int, 4>& v, const int* idx,
                      std::vector<std::pair<int, int>>& sig) {
    std::map<int, int> counts;
    for (int k = 0; k < 4; ++k) {
        const int c = kt.dressed_channel(idx[v[k]]);
        if (c >= 0) counts[c] += k < 2 ? 1 : -1;
    }
    sig.clear();
    for (auto [c, n] : counts)
        if (n != 0) sig.emplace_back(c, n);
}

double annihilated_minus_created_s(const TermSpec& t, const Eigen::VectorXd& e, const int* idx) {
    if (t.kind == TermKind::Bath) return e(idx[t.vs[1]]) - e(idx[t.vs[0]]);
    double cre[2] = {e(idx[t.vs[0]]), e(idx[t.vs[1]])};
    double ann[2] = {e(idx[t.vs[2]]), e(idx[t.vs[3]])};
    std::sort(cre, cre + 2);
    std::sort(ann, ann + 2);
    return (ann[0] + ann[1]) - (cre[0] + cre[1]);
}

void sort_and_merge(std::vector<Generator::Entry>& v, int rows, std::vector<int>& row_ptr) {
    std::sort(v.begin(), v.end(), [](const auto& a, const auto& b) {
        return std::tie(a.out, a.in, a.kernel) < std::tie(b.out, b.in, b.kernel);
    });
    std::vector<Generator::Entry> merged;
    for (const auto& e : v) {
        if (!merged.empty() && merged.back().out == e.out && merged.back().in == e.in && merged.back().kernel == e.kernel)
            merged.back().coef += e.coef;
        else
            merged.push_back(e);
    }
    std::erase_if(merged, [](const auto& e) { return e.coef == Complex{}; });
    v = std::move(merged);
    row_ptr.assign(rows + 1, 0);
    for (const auto& e : v) ++row_ptr[e.out + 1];
    for (int r = 0; r < rows; ++r) row_ptr[r + 1] += row_ptr[r];
}

}  // namespace

KernelSpec Generator::make_kernel(const TermSpec& t, const int* idx) const {
    KernelSpec k;
    k.phase = t.phase_sign * annihilated_minus_created_s(t, sys_.eps, idx);
    if (t.kind == TermKind::Bath) {
        k.kind = KernelKind::Classical;
        const int ct = kernels_.classical_channel(idx[t.vt[0]], idx[t.vt[1]]);
        const int cs = kernels_.classical_channel(idx[t.vs[0]], idx[t.vs[1]]);
        if (ct < 0 || cs < 0) {
            k.t_sig.clear();
            return k;
        }
        k.t_sig = {{ct, 1}};
        k.s_sig = {{cs, 1}};
        return k;
    }
    if (opt_.mode == Theory::Transformed || opt_.mode == Theory::Markovian) {
        k.kind = KernelKind::Dressed;
        signature_counts(kernels_, t.vt, idx, k.t_sig);
        signature_counts(kernels_, t.vs, idx, k.s_sig);
    } else {
        k.kind = KernelKind::Unit;
    }
    return k;
}

Complex Generator::coefficient(const TermSpec& t, const int* idx) const {
    return t.prefactor.value() * tensor_value(t, sys_, idx);
}

int Generator::kernel_for(const TermSpec& t, const int* idx) const {
    const KernelSpec k = make_kernel(t, idx);
    if (k.kind == KernelKind::Classical && k.t_sig.empty()) return -1;
    return kernels_.find(k);
}

void Generator::build_entries() {
    const int nph = sys_.n_ph();
    constant_ = MatrixXc::Zero(nph, nph);
    const bool dressed = opt_.mode == Theory::Transformed || opt_.mode == Theory::Markovian;
    for (int i = 0; i < sys_.n_occ; ++i)
        for (int a = sys_.n_occ; a < sys_.n(); ++a) constant_(sys_.ph(i, a), sys_.ph(i, a)) = -I * (sys_.eps(a) - sys_.eps(i));
    for (const auto& t : catalog_) {
        if (t.kind != TermKind::FirstOrder) continue;
        for_each_assignment(t, sys_, [&](const int* idx) {
            Complex c = coefficient(t, idx);
            if (c == Complex{}) return;
            if (dressed) {
                std::vector<std::pair<int, int>> sig;
                signature_counts(kernels_, t.vt, idx, sig);
                c *= std::exp(-kernels_.static_factor(sig));
            }
            constant_(sys_.ph(idx[t.out[0]], idx[t.out[1]]), sys_.ph(idx[t.o[0]], idx[t.o[1]])) += -I * c;
        });
    }

    direct_.clear();
    factored_.clear();
    for (const auto& t : catalog_) {
        if (t.kind != TermKind::SecondOrder && t.kind != TermKind::Bath) continue;
        const bool factor = opt_.factorize && t.factorizable;
        Intermediate inter;
        if (factor) {
            inter.term = t.id;
            inter.spectator = t.labels[t.spectator];
            const int dim = inter.spectator == Space::Occ ? sys_.n_virt : sys_.n_occ;
            inter.rows = inter.cols = dim;
        }
        const int free_ext = t.spectator == 1 ? 0 : 1;
        const int in_free = t.o[0] == t.spectator ? t.o[1] : t.o[0];
        const int offset = (factor && inter.spectator == Space::Occ) ? sys_.n_occ : 0;
        for_each_assignment(t, sys_, [&](const int* idx) {
            if (factor) {
                const int first = t.labels[t.spectator] == Space::Occ ? 0 : sys_.n_occ;
                if (idx[t.spectator] != first) return;
            }
            const Complex c = coefficient(t, idx);
            if (c == Complex{}) return;
            KernelSpec k = make_kernel(t, idx);
            if (k.kind == KernelKind::Classical && k.t_sig.empty()) return;
            const int kid = kernels_.add(std::move(k));
            if (factor) {
                inter.entries.push_back({idx[free_ext] - offset, idx[in_free] - offset, c, kid});
            } else {
                direct_.push_back({sys_.ph(idx[t.out[0]], idx[t.out[1]]), sys_.ph(idx[t.o[0]], idx[t.o[1]]), c, kid});
            }
        });
        if (factor) {
            sort_and_merge(inter.entries, inter.rows, inter.row_ptr);
            factored_.push_back(std::move(inter));
        }
    }
    sort_and_merge(direct_, nph, row_ptr_);
}

void Generator::assemble(const VectorXc& K, MatrixXc& G) const {
    const int nph = sys_.n_ph();
    G = constant_;
#pragma omp parallel for schedule(static)
    for (int r = 0; r < nph; ++r)
        for (int e = row_ptr_[r]; e < row_ptr_[r + 1]; ++e) {
            const Entry& x = direct_[e];
            G(r, x.in) += x.coef * K(x.kernel);
        }
    for (const auto& f : factored_) {
        MatrixXc Im = MatrixXc::Zero(f.rows, f.cols);
#pragma omp parallel for schedule(static)
        for (int r = 0; r < f.rows; ++r)
            for (int e = f.row_ptr[r]; e < f.row_ptr[r + 1]; ++e) Im(r, f.entries[e].in) += f.entries[e].coef * K(f.entries[e].kernel);
        if (f.spectator == Space::Occ) {
#pragma omp parallel for schedule(static)
            for (int i = 0; i < sys_.n_occ; ++i)
                for (int a = 0; a < f.rows; ++a)
                    for (int c = 0; c < f.cols; ++c) G(i * sys_.n_virt + a, i * sys_.n_virt + c) += Im(a, c);
        } else {
#pragma omp parallel for schedule(static)
            for (int a = 0; a < sys_.n_virt; ++a)
                for (int i = 0; i < f.rows; ++i)
                    for (int k = 0; k < f.cols; ++k) G(i * sys_.n_virt + a, k * sys_.n_virt + a) += Im(i, k);
        }
    }
}

}  // namespace ptcl
