#include <doctest.h>

#include <algorithm>

#include "ptcl/observables.hpp"
#include "ptcl/oracle.hpp"
#include "ptcl/propagator.hpp"

using namespace ptcl;

namespace {

SpinOrbitalSystem model(std::uint64_t seed, double scale) {
    ModelBuilder b;
    b.seed = seed;
    b.n_occ = 2;
    b.n_virt = 2;
    b.scale = scale;
    return build_model(b);
}

VectorXc sampled(const std::vector<std::pair<double, double>>& terms, int n, double dt) {
    VectorXc c = VectorXc::Zero(n);
    for (int k = 0; k < n; ++k)
        for (auto [amp, w] : terms) c(k) += amp * std::exp(-I * w * (k * dt));
    return c;
}

double peak_height_near(const SpectrumResult& r, double f) {
    const auto peaks = find_peaks(r.freqs, r.averaged, 0.01);
    double best = 1e9, h = 0.0;
    for (const auto& p : peaks)
        if (std::abs(p.freq - f) < best) {
            best = std::abs(p.freq - f);
            h = p.height;
        }
    return best < 2.0 * r.resolution ? h : 0.0;
}

Trajectory first_order(const SpinOrbitalSystem& s, const VectorXc& o0, double t_final) {
    GeneratorOptions o;
    o.correlation = false;
    Generator g(s, BathSpec{}, o);
    PropagationConfig c;
    c.t_final = t_final;
    c.output_stride = 1.0;
    c.rk_tolerance = 1e-12;
    Propagator p(g, c);
    return p.propagate(o0);
}

}  // namespace

TEST_CASE("zero dipole gives a dark kick") {
    SpinOrbitalSystem s = model(1, 0.1);
    for (auto& m : s.mu) m.setZero();
    set_warnings_quiet(true);
    const Kick k = dipole_kick(s, 2);
    set_warnings_quiet(false);
    CHECK(k.dark);
    CHECK(k.normalized.isZero());
    CHECK_FALSE(take_warnings().empty());
}

TEST_CASE("single-element dipole kick") {
    SpinOrbitalSystem s = model(1, 0.1);
    for (auto& m : s.mu) m.setZero();
    s.mu[0](1, 3) = s.mu[0](3, 1) = 0.4;
    const Kick k = dipole_kick(s, 0);
    CHECK_FALSE(k.dark);
    CHECK(k.norm == doctest::Approx(0.4));
    for (int p = 0; p < s.n_ph(); ++p) CHECK(k.normalized(p) == Complex(p == s.ph(1, 3) ? 1.0 : 0.0));
    CHECK_THROWS_AS(dipole_kick(s, 3), DomainError);
}

TEST_CASE("a single free excitation gives one peak at its gap") {
    const SpinOrbitalSystem s = model(2, 0.0);
    const double gap = s.eps(3) - s.eps(1);
    const double dt = 0.5;
    const int n = 2048;
    SpectrumOptions o;
    o.pad = 2;
    const SpectrumResult r = spectrum({sampled({{1.0, gap}}, n, dt)}, dt, o);
    CHECK(r.resolution == doctest::Approx(2.0 * M_PI / (2 * n * dt)));
    const auto peaks = find_peaks(r.freqs, r.averaged, 0.5);
    REQUIRE(peaks.size() == 1);
    CHECK(std::abs(peaks[0].freq - gap) < r.resolution);
    CHECK(std::is_sorted(r.freqs.data(), r.freqs.data() + r.freqs.size()));
}

TEST_CASE("peak heights follow the amplitudes") {
    const double dt = 0.4;
    SpectrumOptions o;
    o.window = 2e-3;
    o.pad = 4;
    const SpectrumResult r = spectrum({sampled({{2.0, 0.3}, {1.0, 0.8}}, 8192, dt)}, dt, o);
    CHECK(peak_height_near(r, 0.3) / peak_height_near(r, 0.8) == doctest::Approx(2.0).epsilon(0.02));
}

TEST_CASE("Parseval") {
    const double dt = 0.3;
    const VectorXc c = sampled({{1.0, 0.4}, {0.5, -1.1}, {0.2, 2.0}}, 1000, dt) + 0.1 * VectorXc::Random(1000);
    const SpectrumResult r = spectrum({c}, dt, SpectrumOptions{});
    const double lhs = r.amplitude[0].squaredNorm() * r.resolution / (2.0 * M_PI);
    CHECK(lhs == doctest::Approx(dt * c.squaredNorm()).epsilon(1e-12));
}

TEST_CASE("longer records keep the peak in place") {
    const double dt = 0.5, w = 0.4321;
    SpectrumOptions o;
    o.pad = 2;
    const SpectrumResult a = spectrum({sampled({{1.0, w}}, 1000, dt)}, dt, o);
    const SpectrumResult b = spectrum({sampled({{1.0, w}}, 2000, dt)}, dt, o);
    const double fa = find_peaks(a.freqs, a.averaged, 0.5).at(0).freq;
    const double fb = find_peaks(b.freqs, b.averaged, 0.5).at(0).freq;
    CHECK(std::abs(fa - fb) < a.resolution);
    CHECK(std::abs(fb - w) < b.resolution);
}

TEST_CASE("normalization and input checks") {
    SpectrumOptions o;
    o.normalize = true;
    const SpectrumResult r = spectrum({sampled({{3.0, 0.5}}, 256, 0.5)}, 0.5, o);
    CHECK(r.averaged.cwiseAbs().maxCoeff() == doctest::Approx(1.0));
    CHECK_THROWS_AS(spectrum({}, 0.5, o), ValidationError);
    CHECK_THROWS_AS(spectrum({VectorXc::Ones(4), VectorXc::Ones(5)}, 0.5, o), ValidationError);
}

TEST_CASE("a CIS eigenstate keeps its population") {
    const SpinOrbitalSystem s = model(3, 0.2);
    const auto cis = oracle::exact_cis(s);
    const Trajectory tr = first_order(s, cis.vectors.col(2), 40.0);
    const PopulationTrace p = cis_populations(tr.series(0), tr.times, s);
    for (int k = 0; k < p.populations.rows(); ++k) {
        CHECK(p.populations(k, 2) == doctest::Approx(1.0).epsilon(1e-9));
        CHECK(p.norm(k) == doctest::Approx(1.0).epsilon(1e-9));
    }
}

TEST_CASE("a superposition keeps equal populations") {
    const SpinOrbitalSystem s = model(4, 0.2);
    const VectorXc v = cis_superposition(s, {0, 3});
    CHECK(v.norm() == doctest::Approx(1.0));
    const Trajectory tr = first_order(s, v, 40.0);
    const PopulationTrace p = cis_populations(tr.series(0), tr.times, s);
    for (int k = 0; k < p.populations.rows(); ++k) {
        CHECK(p.populations(k, 0) == doctest::Approx(0.5).epsilon(1e-9));
        CHECK(p.populations(k, 3) == doctest::Approx(0.5).epsilon(1e-9));
        CHECK(std::abs(p.populations(k, 1)) < 1e-9);
    }
    CHECK_THROWS_AS(cis_superposition(s, {7}), ValidationError);
}

TEST_CASE("undressed dipole correlation") {
    const SpinOrbitalSystem s = model(5, 0.1);
    const VectorXc mu = dipole_vector(s, 0);
    const Trajectory tr = first_order(s, mu / mu.norm(), 10.0);
    const MatrixXc series = tr.series(0);
    const VectorXc c = dipole_correlation(series, mu / mu.norm(), mu, mu, tr.times, s, BathSpec{}, DipoleDressing::Full);
    CHECK(std::abs(c(0) - mu.squaredNorm()) < 1e-14);
    for (int k = 0; k < c.size(); ++k) CHECK(std::abs(c(k) - (series.row(k) * mu).value() * mu.norm()) < 1e-14);
}

TEST_CASE("uncoupled bath leaves the dipole correlation bare") {
    const SpinOrbitalSystem s = model(6, 0.1);
    BathSpec b;
    b.n_orb = s.n();
    b.beta = 50.0;
    Mode m;
    m.omega = 0.1;
    m.coupling = Eigen::MatrixXd::Zero(s.n(), s.n());
    b.modes.push_back(m);
    const VectorXc mu = dipole_vector(s, 1);
    const Trajectory tr = first_order(s, mu / mu.norm(), 5.0);
    const MatrixXc series = tr.series(0);
    const VectorXc bare = dipole_correlation(series, mu / mu.norm(), mu, mu, tr.times, s, b, DipoleDressing::None);
    const VectorXc full = dipole_correlation(series, mu / mu.norm(), mu, mu, tr.times, s, b, DipoleDressing::Full);
    CHECK((bare - full).cwiseAbs().maxCoeff() < 1e-14);
}

TEST_CASE("dressing reduces the equal-time dipole correlation") {
    const SpinOrbitalSystem s = model(7, 0.1);
    BathSpec b;
    b.n_orb = s.n();
    b.beta = 50.0;
    Mode m;
    m.omega = 0.1;
    m.coupling = Eigen::MatrixXd::Zero(s.n(), s.n());
    for (int p = s.n_occ; p < s.n(); ++p) m.coupling(p, p) = 0.05;
    b.modes.push_back(m);
    SpinOrbitalSystem one = s;
    for (auto& d : one.mu) d.setZero();
    one.mu[0](0, 2) = one.mu[0](2, 0) = 1.0;
    const VectorXc mu = dipole_vector(one, 0);
    const MatrixXc series = mu.transpose();
    const VectorXc full = dipole_correlation(series, mu, mu, mu, {0.0}, one, b, DipoleDressing::Full);
    // equal times: the displacement and its inverse cancel
    CHECK(std::abs(full(0) - 1.0) < 1e-14);
    const VectorXc eq = dipole_correlation(series, mu, mu, mu, {0.0}, one, b, DipoleDressing::Equilibrium);
    const double nsq = 0.25, coth = coth_half(50.0, 0.1);
    CHECK(eq(0).real() == doctest::Approx(std::exp(-nsq * coth)).epsilon(1e-12));
}
