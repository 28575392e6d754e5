#include <doctest.h>

#include "ptcl/oracle.hpp"
#include "ptcl/polaron.hpp"

using namespace ptcl;

namespace {

Mode mode(int n, double omega, const std::vector<double>& mtilde) {
    Mode m;
    m.omega = omega;
    m.coupling = Eigen::MatrixXd::Zero(n, n);
    for (int p = 0; p < n; ++p) m.coupling(p, p) = mtilde[p] * omega;
    return m;
}

double tensor_diff(const Tensor4& a, const Tensor4& b) {
    double d = 0.0;
    for (std::size_t k = 0; k < a.raw().size(); ++k) d = std::max(d, std::abs(a.raw()[k] - b.raw()[k]));
    return d;
}

}  // namespace

TEST_CASE("reorganization energy") {
    BathSpec b;
    b.n_orb = 2;
    CHECK(reorganization_energies(b, 2).isZero());
    Mode m;
    m.omega = 0.01;
    m.coupling = Eigen::MatrixXd::Zero(2, 2);
    m.coupling(0, 0) = 0.001;
    b.modes.push_back(m);
    CHECK(reorganization_energies(b, 2)(0) == doctest::Approx(1e-4).epsilon(1e-12));
    CHECK(reorganization_energies(b, 2)(1) == 0.0);
    b.modes.push_back(m);
    CHECK(reorganization_energies(b, 2)(0) == doctest::Approx(2e-4).epsilon(1e-12));
}

TEST_CASE("zero displacement leaves the system unchanged") {
    ModelBuilder mb;
    mb.scale = 0.1;
    const SpinOrbitalSystem s = build_model(mb);
    BathSpec b;
    b.n_orb = s.n();
    b.modes.push_back(mode(s.n(), 0.05, std::vector<double>(s.n(), 0.0)));
    const PolaronSystem ps = transform_integrals(s, b);
    CHECK(ps.eps_tilde == s.eps);
    CHECK(tensor_diff(ps.V_tilde, s.V) == 0.0);
}

TEST_CASE("dressed interaction shift") {
    ModelBuilder mb;
    mb.scale = 0.0;
    const SpinOrbitalSystem s = build_model(mb);
    const double w = 0.02;
    const std::vector<double> mt = {0.3, -0.2, 0.5, 0.1};
    BathSpec b;
    b.n_orb = 4;
    b.modes.push_back(mode(4, w, mt));
    const PolaronSystem ps = transform_integrals(s, b);
    for (int p = 0; p < 4; ++p) {
        CHECK(ps.eps_tilde(p) == doctest::Approx(s.eps(p) - w * mt[p] * mt[p]));
        CHECK(ps.V_tilde(p, p, p, p) == Complex{});
        for (int q = 0; q < 4; ++q) {
            if (p == q) continue;
            CHECK(ps.V_tilde(p, q, p, q).real() == doctest::Approx(-2.0 * w * mt[p] * mt[q]));
            CHECK(ps.V_tilde(p, q, q, p).real() == doctest::Approx(2.0 * w * mt[p] * mt[q]));
        }
    }
    // only the pair pattern moves
    CHECK(ps.V_tilde(0, 1, 2, 3) == Complex{});
    CHECK(validate_symmetries(ps.dressed()).max() < 1e-14);
}

TEST_CASE("independent-boson levels") {
    const double eps = -0.3, M = 0.004, w = 0.01;
    const Eigen::VectorXd lv = oracle::independent_boson_levels(eps, M, w, 60, 4);
    BathSpec b;
    b.n_orb = 1;
    Mode m;
    m.omega = w;
    m.coupling = Eigen::MatrixXd::Constant(1, 1, M);
    b.modes.push_back(m);
    const double lambda = reorganization_energies(b, 1)(0);
    for (int n = 0; n < 4; ++n) CHECK(lv(n) == doctest::Approx(eps - lambda + n * w).epsilon(1e-8));
}

TEST_CASE("dipole dressing signature") {
    ModelBuilder mb;
    mb.n_occ = 2;
    mb.n_virt = 3;
    const SpinOrbitalSystem s = build_model(mb);
    const auto sig = dressed_dipole_signature(s);
    REQUIRE(sig.size() == 6);
    CHECK(sig[s.ph(1, 3)].create == 3);
    CHECK(sig[s.ph(1, 3)].annihilate == 1);
    CHECK(sig[s.ph(0, 4)].create == 4);
    CHECK(sig[s.ph(0, 4)].annihilate == 0);
}

TEST_CASE("mismatched coupling size is rejected") {
    const SpinOrbitalSystem s = build_model(ModelBuilder{});
    BathSpec b;
    b.n_orb = 2;
    b.modes.push_back(mode(2, 0.1, {0.1, 0.1}));
    CHECK_THROWS_AS(transform_integrals(s, b), DomainError);
}
