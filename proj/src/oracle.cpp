#include "ptcl/oracle.hpp"

#include <algorithm>
#include <bit>
#include <cmath>

#include <unsupported/Eigen/MatrixFunctions>

namespace ptcl::oracle {

using OpList = std::vector<std::pair<bool, int>>;

bool apply_string(const OpList& ops, std::uint32_t det, std::uint32_t& out, int& sign) {
    sign = 1;
    for (auto it = ops.rbegin(); it != ops.rend(); ++it) {
        const std::uint32_t mask = 1u << it->second;
        const int below = std::popcount(det & (mask - 1u));
        if (it->first) {
            if (det & mask) return false;
            det |= mask;
        } else {
            if (!(det & mask)) return false;
            det &= ~mask;
        }
        if (below & 1) sign = -sign;
    }
    out = det;
    return true;
}

namespace {

// Reorders ops so that quasi-creators precede quasi-annihilators; returns the sign.
int normal_order(OpList& ops, int n_occ) {
    auto quasi_create = [&](const std::pair<bool, int>& op) { return op.first == (op.second >= n_occ); };
    std::vector<int> perm;
    OpList out;
    for (int pass = 0; pass < 2; ++pass)
        for (std::size_t k = 0; k < ops.size(); ++k)
            if (quasi_create(ops[k]) == (pass == 0)) {
                perm.push_back(static_cast<int>(k));
                out.push_back(ops[k]);
            }
    int inv = 0;
    for (std::size_t a = 0; a < perm.size(); ++a)
        for (std::size_t b = a + 1; b < perm.size(); ++b)
            if (perm[a] > perm[b]) ++inv;
    ops = out;
    return inv % 2 ? -1 : 1;
}

// V_N over a list of determinants.
MatrixXc interaction_block(const SpinOrbitalSystem& s, const std::vector<std::uint32_t>& dets) {
    const int n = s.n();
    std::vector<int> index(std::size_t(1) << n, -1);
    for (std::size_t k = 0; k < dets.size(); ++k) index[dets[k]] = static_cast<int>(k);
    const int dim = static_cast<int>(dets.size());
    MatrixXc H = MatrixXc::Zero(dim, dim);
    for (int p = 0; p < n; ++p)
        for (int q = 0; q < n; ++q)
            for (int r = 0; r < n; ++r)
                for (int t = 0; t < n; ++t) {
                    const Complex v = s.V(p, q, r, t);
                    if (v == Complex{}) continue;
                    OpList ops = {{true, p}, {true, q}, {false, t}, {false, r}};
                    const int sg = normal_order(ops, s.n_occ);
                    for (int col = 0; col < dim; ++col) {
                        std::uint32_t out = 0;
                        int sign = 1;
                        if (!apply_string(ops, dets[col], out, sign)) continue;
                        const int row = index[out];
                        if (row >= 0) H(row, col) += 0.25 * v * double(sg * sign);
                    }
                }
    return H;
}

MatrixXc in_picture(const MatrixXc& op, const Eigen::VectorXd& E, double t) {
    MatrixXc out = op;
    for (int c = 0; c < op.cols(); ++c)
        for (int r = 0; r < op.rows(); ++r)
            if (out(r, c) != Complex{}) out(r, c) *= std::exp(I * ((E(r) - E(c)) * t));
    return out;
}

// sign and determinant of a+_a a_i |0>
std::pair<int, std::uint32_t> single(int i, int a, std::uint32_t ref) {
    std::uint32_t out = 0;
    int sign = 1;
    apply_string({{true, a}, {false, i}}, ref, out, sign);
    return {sign, out};
}

template <class F>
MatrixXc ph_map(const SpinOrbitalSystem& s, F&& column_operator) {
    FockSpace f(s.n());
    const std::uint32_t ref = f.reference(s.n_occ);
    MatrixXc out = MatrixXc::Zero(s.n_ph(), s.n_ph());
    for (int j = 0; j < s.n_occ; ++j)
        for (int b = s.n_occ; b < s.n(); ++b) {
            const MatrixXc o = f.product({{true, b}, {false, j}}).cast<Complex>();
            const MatrixXc Z = column_operator(f, o);
            for (int i = 0; i < s.n_occ; ++i)
                for (int a = s.n_occ; a < s.n(); ++a) {
                    auto [sg, det] = single(i, a, ref);
                    out(s.ph(i, a), s.ph(j, b)) = double(sg) * Z(det, ref);
                }
        }
    return out;
}

}  // namespace

FockSpace::FockSpace(int n) : n_(n), dim_(1 << n) {
    if (n < 1 || n > 12) throw DomainError("Fock space limited to 1..12 spin-orbitals");
}

Eigen::MatrixXd FockSpace::product(const OpList& ops) const {
    Eigen::MatrixXd m = Eigen::MatrixXd::Zero(dim_, dim_);
    for (int x = 0; x < dim_; ++x) {
        std::uint32_t out = 0;
        int sign = 1;
        if (apply_string(ops, static_cast<std::uint32_t>(x), out, sign)) m(out, x) = sign;
    }
    return m;
}

Eigen::MatrixXd FockSpace::normal_ordered(const OpList& ops, int n_occ) const {
    OpList o = ops;
    const int sg = normal_order(o, n_occ);
    return sg * product(o);
}

MatrixXc FockSpace::interaction(const SpinOrbitalSystem& s) const {
    std::vector<std::uint32_t> dets(dim_);
    for (int x = 0; x < dim_; ++x) dets[x] = static_cast<std::uint32_t>(x);
    return interaction_block(s, dets);
}

Eigen::VectorXd FockSpace::energies(const Eigen::VectorXd& eps) const {
    Eigen::VectorXd E = Eigen::VectorXd::Zero(dim_);
    for (int x = 0; x < dim_; ++x)
        for (int p = 0; p < n_; ++p)
            if (x & (1 << p)) E(x) += eps(p);
    return E;
}

OneBodyPart one_body_part(const FockSpace& f, int n_occ, const MatrixXc& Y) {
    const int n = f.n();
    const std::uint32_t ref = f.reference(n_occ);
    OneBodyPart r;
    r.scalar = Y(ref, ref);
    r.y = MatrixXc::Zero(n, n);
    auto state = [&](const OpList& ops) {
        std::uint32_t out = 0;
        int sign = 1;
        apply_string(ops, ref, out, sign);
        return std::make_pair(sign, out);
    };
    for (int p = 0; p < n; ++p)
        for (int q = 0; q < n; ++q) {
            const bool pv = p >= n_occ, qv = q >= n_occ;
            const Complex d = p == q ? r.scalar : Complex{};
            if (pv && !qv) {
                auto [sg, det] = state({{true, p}, {false, q}});
                r.y(p, q) = double(sg) * Y(det, ref);
            } else if (!pv && qv) {
                auto [sg, det] = state({{true, q}, {false, p}});
                r.y(p, q) = double(sg) * Y(ref, det);
            } else if (pv && qv) {
                auto [sp, dp] = state({{true, p}});
                auto [sq, dq] = state({{true, q}});
                r.y(p, q) = double(sp * sq) * Y(dp, dq) - d;
            } else {
                auto [sp, dp] = state({{false, p}});
                auto [sq, dq] = state({{false, q}});
                r.y(p, q) = -(double(sp * sq) * Y(dq, dp) - d);
            }
        }
    return r;
}

MatrixXc superoperator_tcl(const SpinOrbitalSystem& s, double t, double sp) {
    FockSpace f(s.n());
    const MatrixXc V = f.interaction(s);
    const Eigen::VectorXd E = f.energies(s.eps);
    const MatrixXc Vt = in_picture(V, E, t), Vs = in_picture(V, E, sp);
    std::vector<Eigen::MatrixXd> e1;
    for (int p = 0; p < s.n(); ++p)
        for (int q = 0; q < s.n(); ++q) e1.push_back(f.normal_ordered({{true, p}, {false, q}}, s.n_occ));
    return ph_map(s, [&](const FockSpace& fs, const MatrixXc& o) {
        MatrixXc Y = Vs * o - o * Vs;
        const OneBodyPart part = one_body_part(fs, s.n_occ, Y);
        Y.diagonal().array() -= part.scalar;
        for (int p = 0; p < s.n(); ++p)
            for (int q = 0; q < s.n(); ++q)
                if (part.y(p, q) != Complex{}) Y -= part.y(p, q) * e1[p * s.n() + q];
        return MatrixXc(-(Vt * Y - Y * Vt));
    });
}

MatrixXc double_commutator_ph(const SpinOrbitalSystem& s, double t, double sp) {
    FockSpace f(s.n());
    const MatrixXc V = f.interaction(s);
    const Eigen::VectorXd E = f.energies(s.eps);
    const MatrixXc Vt = in_picture(V, E, t), Vs = in_picture(V, E, sp);
    return ph_map(s, [&](const FockSpace&, const MatrixXc& o) {
        const MatrixXc Y = Vs * o - o * Vs;
        return MatrixXc(-(Vt * Y - Y * Vt));
    });
}

MatrixXc one_body_map(const SpinOrbitalSystem& s, double t) {
    const int n = s.n();
    FockSpace f(n);
    const MatrixXc Vt = in_picture(f.interaction(s), f.energies(s.eps), t);
    MatrixXc L = MatrixXc::Zero(n * n, n * n);
    for (int p = 0; p < n; ++p)
        for (int q = 0; q < n; ++q) {
            const MatrixXc X = f.normal_ordered({{true, p}, {false, q}}, s.n_occ).cast<Complex>();
            const MatrixXc C = -I * (Vt * X - X * Vt);
            const OneBodyPart part = one_body_part(f, s.n_occ, C);
            for (int r = 0; r < n; ++r)
                for (int u = 0; u < n; ++u) L(r * n + u, p * n + q) = part.y(r, u);
        }
    return L;
}

MatrixXc superoperator_untransformed(const SpinOrbitalSystem& s, const Eigen::MatrixXd& M, double t, double sp) {
    FockSpace f(s.n());
    MatrixXc A = MatrixXc::Zero(f.dim(), f.dim());
    for (int p = 0; p < s.n(); ++p)
        for (int q = 0; q < s.n(); ++q)
            if (M(p, q) != 0.0) A += M(p, q) * f.product({{true, p}, {false, q}}).cast<Complex>();
    const Eigen::VectorXd E = f.energies(s.eps);
    const MatrixXc At = in_picture(A, E, t), As = in_picture(A, E, sp);
    return ph_map(s, [&](const FockSpace&, const MatrixXc& o) {
        const MatrixXc Y = As * o - o * As;
        return MatrixXc(-(At * Y - Y * At));
    });
}

MatrixXc first_order_map(const SpinOrbitalSystem& s) {
    FockSpace f(s.n());
    const MatrixXc V = f.interaction(s);
    return ph_map(s, [&](const FockSpace&, const MatrixXc& o) { return MatrixXc(-I * (V * o - o * V)); });
}

MatrixXc cis_matrix(const SpinOrbitalSystem& s) {
    MatrixXc A = MatrixXc::Zero(s.n_ph(), s.n_ph());
    for (int i = 0; i < s.n_occ; ++i)
        for (int a = s.n_occ; a < s.n(); ++a)
            for (int j = 0; j < s.n_occ; ++j)
                for (int b = s.n_occ; b < s.n(); ++b) {
                    Complex v = s.V(a, j, i, b);
                    if (i == j && a == b) v += s.eps(a) - s.eps(i);
                    A(s.ph(i, a), s.ph(j, b)) = v;
                }
    return A;
}

CisResult exact_cis(const SpinOrbitalSystem& s) {
    Eigen::SelfAdjointEigenSolver<MatrixXc> es(cis_matrix(s));
    return {es.eigenvalues(), es.eigenvectors()};
}

namespace {

std::vector<std::uint32_t> sector(int n, int n_el) {
    std::vector<std::uint32_t> dets;
    for (std::uint32_t x = 0; x < (1u << n); ++x)
        if (std::popcount(x) == n_el) dets.push_back(x);
    return dets;
}

Eigen::SelfAdjointEigenSolver<MatrixXc> fci(const SpinOrbitalSystem& s, std::vector<std::uint32_t>& dets) {
    if (s.n() > 12) throw DomainError("full CI limited to 12 spin-orbitals");
    dets = sector(s.n(), s.n_occ);
    MatrixXc H = interaction_block(s, dets);
    for (std::size_t k = 0; k < dets.size(); ++k)
        for (int p = 0; p < s.n(); ++p)
            if (dets[k] & (1u << p)) H(static_cast<int>(k), static_cast<int>(k)) += s.eps(p);
    return Eigen::SelfAdjointEigenSolver<MatrixXc>(H);
}

}  // namespace

Eigen::VectorXd exact_fci_poles(const SpinOrbitalSystem& s) {
    std::vector<std::uint32_t> dets;
    auto es = fci(s, dets);
    const Eigen::VectorXd& e = es.eigenvalues();
    return (e.tail(e.size() - 1).array() - e(0)).matrix();
}

Eigen::VectorXd fci_strengths(const SpinOrbitalSystem& s) {
    std::vector<std::uint32_t> dets;
    auto es = fci(s, dets);
    const int dim = static_cast<int>(dets.size());
    std::vector<int> index(std::size_t(1) << s.n(), -1);
    for (int k = 0; k < dim; ++k) index[dets[k]] = k;
    Eigen::VectorXd str = Eigen::VectorXd::Zero(dim - 1);
    for (const auto& mu : s.mu) {
        MatrixXc D = MatrixXc::Zero(dim, dim);
        for (int col = 0; col < dim; ++col)
            for (int p = 0; p < s.n(); ++p)
                for (int q = 0; q < s.n(); ++q) {
                    if (mu(p, q) == 0.0) continue;
                    std::uint32_t out = 0;
                    int sign = 1;
                    if (apply_string({{true, p}, {false, q}}, dets[col], out, sign) && index[out] >= 0)
                        D(index[out], col) += mu(p, q) * sign;
                }
        const VectorXc g = es.eigenvectors().col(0);
        const VectorXc m = es.eigenvectors().adjoint() * (D * g);
        for (int k = 1; k < dim; ++k) str(k - 1) += std::norm(m(k));
    }
    return str;
}

MatrixXc fci_transition_amplitudes(const SpinOrbitalSystem& s) {
    std::vector<std::uint32_t> dets;
    auto es = fci(s, dets);
    const int dim = static_cast<int>(dets.size());
    std::vector<int> index(std::size_t(1) << s.n(), -1);
    for (int k = 0; k < dim; ++k) index[dets[k]] = k;
    const VectorXc g = es.eigenvectors().col(0);
    MatrixXc out(s.n_ph(), dim - 1);
    for (int i = 0; i < s.n_occ; ++i)
        for (int a = s.n_occ; a < s.n(); ++a) {
            VectorXc e = VectorXc::Zero(dim);
            for (int col = 0; col < dim; ++col) {
                std::uint32_t d = 0;
                int sign = 1;
                if (apply_string({{true, a}, {false, i}}, dets[col], d, sign) && index[d] >= 0)
                    e(index[d]) += g(col) * double(sign);
            }
            out.row(s.ph(i, a)) = (es.eigenvectors().adjoint() * e).tail(dim - 1).transpose();
        }
    return out;
}

// ---------------------------------------------------------------------------

TruncatedBoson::TruncatedBoson(int n_max, double omega, double beta) : n_(n_max), omega_(omega) {
    if (n_max < 2) throw DomainError("truncated oscillator needs at least two levels");
    b_ = Eigen::MatrixXd::Zero(n_, n_);
    for (int k = 1; k < n_; ++k) b_(k - 1, k) = std::sqrt(double(k));
    rho_ = Eigen::VectorXd::Zero(n_);
    if (std::isinf(beta)) {
        rho_(0) = 1.0;
    } else {
        for (int k = 0; k < n_; ++k) rho_(k) = std::exp(-beta * omega * k);
        rho_ /= rho_.sum();
    }
}

MatrixXc TruncatedBoson::displacement(double alpha, double t) const {
    const Eigen::MatrixXd G = alpha * (b_.transpose() - b_);
    const Eigen::MatrixXd D = G.exp();
    MatrixXc out(n_, n_);
    for (int m = 0; m < n_; ++m)
        for (int k = 0; k < n_; ++k) out(m, k) = D(m, k) * std::exp(I * (omega_ * (m - k) * t));
    return out;
}

Complex TruncatedBoson::expectation(const MatrixXc& op) const {
    Complex s{};
    for (int k = 0; k < n_; ++k) s += rho_(k) * op(k, k);
    return s;
}

namespace {

Complex boson_trace_at(const std::vector<DisplacementOp>& ops, const BathSpec& bath, int n_max) {
    Complex total = 1.0;
    for (const auto& mode : bath.modes) {
        if (mode.width != 0.0) throw DomainError("truncated-boson oracle needs undamped modes");
        TruncatedBoson osc(n_max, mode.omega, bath.beta);
        MatrixXc prod = MatrixXc::Identity(n_max, n_max);
        for (const auto& op : ops) {
            const double m = mode.mtilde(op.orbital);
            if (m == 0.0) continue;
            prod = prod * osc.displacement(op.dagger ? m : -m, op.time);
        }
        total *= osc.expectation(prod);
    }
    return total;
}

}  // namespace

Complex boson_trace(const std::vector<DisplacementOp>& ops, const BathSpec& bath, int n_max) {
    if (n_max > 200) throw DomainError("n_max too large for the dense oracle");
    const Complex hi = boson_trace_at(ops, bath, n_max);
    const Complex lo = boson_trace_at(ops, bath, n_max - 10);
    if (std::abs(hi - lo) > 1e-8) throw TruncationError("boson trace not converged in n_max");
    return hi;
}

Complex oscillator_correlation(double omega, double beta, double t, int n_max) {
    TruncatedBoson osc(n_max, omega, beta);
    const Eigen::MatrixXd q = osc.b() + osc.b().transpose();
    MatrixXc qt(n_max, n_max);
    for (int m = 0; m < n_max; ++m)
        for (int k = 0; k < n_max; ++k) qt(m, k) = q(m, k) * std::exp(I * (omega * (m - k) * t));
    return osc.expectation(qt * q.cast<Complex>());
}

Eigen::VectorXd independent_boson_levels(double eps, double M, double omega, int n_max, int count) {
    TruncatedBoson osc(n_max, omega, std::numeric_limits<double>::infinity());
    Eigen::MatrixXd H = M * (osc.b() + osc.b().transpose());
    for (int k = 0; k < n_max; ++k) H(k, k) += eps + omega * k;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(H);
    return es.eigenvalues().head(count);
}

}  // namespace ptcl::oracle
