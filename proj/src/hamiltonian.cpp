#include "ptcl/hamiltonian.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <random>

#include <json.hpp>

namespace ptcl {

double SymmetryReport::max() const {
    return std::max({antisymmetry, hermiticity, dipole_hermiticity});
}

SpinOrbitalSystem build_model(const ModelBuilder& b) {
    if (b.n_occ < 1 || b.n_virt < 1) throw DomainError("model needs at least one occupied and one virtual orbital");
    std::mt19937_64 rng(b.seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    auto draw = [&](double lo, double hi) { return lo + (hi - lo) * unit(rng); };

    SpinOrbitalSystem s;
    s.n_occ = b.n_occ;
    s.n_virt = b.n_virt;
    const int n = s.n();
    s.eps.resize(n);
    for (int p = 0; p < b.n_occ; ++p) s.eps(p) = draw(b.occ_low, b.occ_high);
    for (int p = b.n_occ; p < n; ++p) s.eps(p) = draw(b.virt_low, b.virt_high);
    std::sort(s.eps.data(), s.eps.data() + b.n_occ);
    std::sort(s.eps.data() + b.n_occ, s.eps.data() + n);

    Tensor4 w(n);
    for (auto& x : w.raw()) {
        const double re = draw(-b.scale, b.scale);
        const double im = b.complex_integrals ? draw(-b.scale, b.scale) : 0.0;
        x = Complex(re, im);
    }
    Tensor4 a(n);
    for (int p = 0; p < n; ++p)
        for (int q = 0; q < n; ++q)
            for (int r = 0; r < n; ++r)
                for (int t = 0; t < n; ++t)
                    a(p, q, r, t) = 0.25 * (w(p, q, r, t) - w(q, p, r, t) - w(p, q, t, r) + w(q, p, t, r));
    s.V = Tensor4(n);
    for (int p = 0; p < n; ++p)
        for (int q = 0; q < n; ++q)
            for (int r = 0; r < n; ++r)
                for (int t = 0; t < n; ++t)
                    s.V(p, q, r, t) = 0.5 * (a(p, q, r, t) + std::conj(a(r, t, p, q)));

    for (auto& m : s.mu) {
        m = Eigen::MatrixXd::Zero(n, n);
        for (int p = 0; p < n; ++p)
            for (int q = p; q < n; ++q) m(p, q) = m(q, p) = draw(-1.0, 1.0);
    }
    return s;
}

SymmetryReport validate_symmetries(const SpinOrbitalSystem& s) {
    SymmetryReport r;
    const int n = s.n();
    const Tensor4& V = s.V;
    for (int p = 0; p < n; ++p)
        for (int q = 0; q < n; ++q)
            for (int a = 0; a < n; ++a)
                for (int b = 0; b < n; ++b) {
                    const Complex v = V(p, q, a, b);
                    r.antisymmetry = std::max({r.antisymmetry, std::abs(v + V(q, p, a, b)),
                                               std::abs(v + V(p, q, b, a)), std::abs(v - V(q, p, b, a))});
                    r.hermiticity = std::max(r.hermiticity, std::abs(v - std::conj(V(a, b, p, q))));
                }
    for (const auto& m : s.mu)
        if (m.size() > 0) r.dipole_hermiticity = std::max(r.dipole_hermiticity, (m - m.transpose()).cwiseAbs().maxCoeff());
    return r;
}

SpinOrbitalSystem expand_spatial(const SpatialIntegrals& sp, int n_electrons) {
    const int ns = sp.n;
    const int n = 2 * ns;
    if (n_electrons < 1 || n_electrons >= n) throw DomainError("electron count must leave at least one occupied and one virtual spin-orbital");

    // (spatial index, spin) sorted by orbital energy
    std::vector<std::pair<int, int>> so;
    for (int p = 0; p < ns; ++p) {
        so.emplace_back(p, 0);
        so.emplace_back(p, 1);
    }
    std::stable_sort(so.begin(), so.end(), [&](const auto& x, const auto& y) { return sp.eps(x.first) < sp.eps(y.first); });

    SpinOrbitalSystem s;
    s.n_occ = n_electrons;
    s.n_virt = n - n_electrons;
    s.eps.resize(n);
    for (int P = 0; P < n; ++P) s.eps(P) = sp.eps(so[P].first);
    s.V = Tensor4(n);
    for (int P = 0; P < n; ++P)
        for (int Q = 0; Q < n; ++Q)
            for (int R = 0; R < n; ++R)
                for (int S = 0; S < n; ++S) {
                    const auto [p, sgp] = so[P];
                    const auto [q, sgq] = so[Q];
                    const auto [r, sgr] = so[R];
                    const auto [t, sgt] = so[S];
                    double v = 0.0;
                    if (sgp == sgr && sgq == sgt) v += sp.eri_at(p, r, q, t);
                    if (sgp == sgt && sgq == sgr) v -= sp.eri_at(p, t, q, r);
                    s.V(P, Q, R, S) = v;
                }
    for (int k = 0; k < 3; ++k) {
        s.mu[k] = Eigen::MatrixXd::Zero(n, n);
        if (sp.mu[k].size() == 0) continue;
        for (int P = 0; P < n; ++P)
            for (int Q = 0; Q < n; ++Q)
                if (so[P].second == so[Q].second) s.mu[k](P, Q) = sp.mu[k](so[P].first, so[Q].first);
    }
    return s;
}

namespace {

nlohmann::json matrix_json(const Eigen::MatrixXd& m) {
    nlohmann::json rows = nlohmann::json::array();
    for (int i = 0; i < m.rows(); ++i) {
        std::vector<double> row(m.cols());
        for (int j = 0; j < m.cols(); ++j) row[j] = m(i, j);
        rows.push_back(row);
    }
    return rows;
}

Eigen::MatrixXd json_matrix(const nlohmann::json& j, int n, const std::string& what) {
    if (!j.is_array() || static_cast<int>(j.size()) != n) throw ParseError(what + ": expected " + std::to_string(n) + " rows");
    Eigen::MatrixXd m(n, n);
    for (int i = 0; i < n; ++i) {
        if (!j[i].is_array() || static_cast<int>(j[i].size()) != n) throw ParseError(what + ": bad row " + std::to_string(i));
        for (int k = 0; k < n; ++k) m(i, k) = j[i][k].get<double>();
    }
    return m;
}

}  // namespace

void write_native(const SpinOrbitalSystem& s, const std::string& path) {
    nlohmann::json j;
    j["format"] = "ptcl-system";
    j["version"] = 1;
    j["n_occ"] = s.n_occ;
    j["n_virt"] = s.n_virt;
    j["eps"] = std::vector<double>(s.eps.data(), s.eps.data() + s.eps.size());
    std::vector<double> re, im;
    re.reserve(s.V.raw().size());
    im.reserve(s.V.raw().size());
    for (const auto& v : s.V.raw()) {
        re.push_back(v.real());
        im.push_back(v.imag());
    }
    j["V"] = {{"layout", "pqrs row-major <pq||rs>"}, {"re", re}, {"im", im}};
    j["mu"] = {{"x", matrix_json(s.mu[0])}, {"y", matrix_json(s.mu[1])}, {"z", matrix_json(s.mu[2])}};
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << j.dump(1) << '\n';
}

SpinOrbitalSystem read_native(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open system file " + path);
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::parse_error& e) {
        throw ParseError(path + ": " + e.what());
    }
    try {
        if (j.value("format", "") != "ptcl-system") throw ParseError(path + ": not a ptcl-system file");
        SpinOrbitalSystem s;
        s.n_occ = j.at("n_occ").get<int>();
        s.n_virt = j.at("n_virt").get<int>();
        const int n = s.n();
        if (s.n_occ < 1 || s.n_virt < 1) throw ParseError(path + ": need n_occ, n_virt >= 1");
        auto eps = j.at("eps").get<std::vector<double>>();
        if (static_cast<int>(eps.size()) != n) throw ParseError(path + ": eps has wrong length");
        s.eps = Eigen::Map<Eigen::VectorXd>(eps.data(), n);
        auto re = j.at("V").at("re").get<std::vector<double>>();
        auto im = j.at("V").at("im").get<std::vector<double>>();
        s.V = Tensor4(n);
        if (re.size() != s.V.raw().size() || im.size() != re.size()) throw ParseError(path + ": V has wrong size");
        for (std::size_t k = 0; k < re.size(); ++k) s.V.raw()[k] = Complex(re[k], im[k]);
        const char* axes[3] = {"x", "y", "z"};
        for (int k = 0; k < 3; ++k) s.mu[k] = json_matrix(j.at("mu").at(axes[k]), n, std::string("mu.") + axes[k]);
        return s;
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(path + ": " + e.what());
    }
}

SpinOrbitalSystem build_dimer(const DimerModel& m) {
    // spatial orbitals: 0 = H_L, 1 = H_R, 2 = L_L, 3 = L_R (reordered by energy in expansion)
    SpatialIntegrals sp;
    sp.n = 4;
    sp.eps.resize(4);
    sp.eps << m.homo_left, m.homo_right, m.lumo_left, m.lumo_right;
    sp.eri.assign(256, 0.0);
    auto set = [&](int p, int q, int r, int s, double v) {
        const int idx[8][4] = {{p, q, r, s}, {q, p, r, s}, {p, q, s, r}, {q, p, s, r},
                               {r, s, p, q}, {s, r, p, q}, {r, s, q, p}, {s, r, q, p}};
        for (const auto& x : idx) sp.eri[((x[0] * 4 + x[1]) * 4 + x[2]) * 4 + x[3]] = v;
    };
    const int chrom[4] = {0, 1, 0, 1};
    for (int p = 0; p < 4; ++p)
        for (int q = 0; q < 4; ++q) {
            if (chrom[p] == chrom[q]) {
                set(p, p, q, q, m.coulomb);
                if (p != q) set(p, q, q, p, m.exchange);
            } else {
                set(p, p, q, q, m.inter_coulomb);
            }
        }
    set(0, 2, 1, 3, m.transfer);
    for (auto& mu : sp.mu) mu = Eigen::MatrixXd::Zero(4, 4);
    sp.mu[0](0, 2) = sp.mu[0](2, 0) = m.dipole;
    sp.mu[0](1, 3) = sp.mu[0](3, 1) = m.dipole;
    return expand_spatial(sp, 4);
}

}  // namespace ptcl
