#include "ptcl/propagator.hpp"

#include <cmath>
#include <cstring>
#include <fstream>
#include <iomanip>
#include <sstream>

namespace ptcl {

void PropagationConfig::validate() const {
    if (!(dt_min > 0.0 && dt_min <= dt_initial && dt_initial <= dt_max))
        throw ValidationError("propagation: need 0 < dt_min <= dt_initial <= dt_max");
    if (!(rk_tolerance > 0.0)) throw ValidationError("propagation: rk_tolerance must be positive");
    if (!(t_final >= 0.0)) throw ValidationError("propagation: t_final must be non-negative");
    if (!(output_stride > 0.0)) throw ValidationError("propagation: output stride must be positive");
    if (quadrature_order < 1 || quadrature_order > 20) throw ValidationError("propagation: quadrature order out of range");
}

MatrixXc Trajectory::series(int column) const {
    if (samples.empty()) return {};
    MatrixXc s(samples.size(), samples.front().rows());
    for (std::size_t k = 0; k < samples.size(); ++k) s.row(k) = samples[k].col(column).transpose();
    return s;
}

namespace {

// Dormand-Prince 5(4)
constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
constexpr double a21 = 1.0 / 5;
constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561, a54 = -212.0 / 729;
constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                 a65 = -5103.0 / 18656;
constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192, b5 = -2187.0 / 6784, b6 = 11.0 / 84;
constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920, e5 = -17253.0 / 339200, e6 = 22.0 / 525,
                 e7 = -1.0 / 40;

constexpr char kMagic[8] = {'P', 'T', 'C', 'L', 'C', 'H', 'K', '1'};

template <class T>
void put(std::ofstream& f, const T& v) {
    f.write(reinterpret_cast<const char*>(&v), sizeof(T));
}
template <class T>
T get(std::ifstream& f) {
    T v;
    f.read(reinterpret_cast<char*>(&v), sizeof(T));
    if (!f) throw ParseError("truncated checkpoint", 0);
    return v;
}

}  // namespace

void write_checkpoint(const std::string& path, const Checkpoint& c) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot write " + path);
    f.write(kMagic, 8);
    put<std::int64_t>(f, c.state.rows());
    put<std::int64_t>(f, c.state.cols());
    put<std::int64_t>(f, c.kernels.size());
    put(f, c.time);
    put(f, c.h_next);
    f.write(reinterpret_cast<const char*>(c.state.data()), sizeof(Complex) * c.state.size());
    f.write(reinterpret_cast<const char*>(c.kernels.data()), sizeof(Complex) * c.kernels.size());
}

Checkpoint read_checkpoint(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw ValidationError("checkpoint not found: " + path);
    char magic[8];
    f.read(magic, 8);
    if (!f || std::memcmp(magic, kMagic, 8) != 0) throw ParseError("not a checkpoint file: " + path, 0);
    const auto rows = get<std::int64_t>(f), cols = get<std::int64_t>(f), nk = get<std::int64_t>(f);
    Checkpoint c;
    c.time = get<double>(f);
    c.h_next = get<double>(f);
    c.state.resize(rows, cols);
    c.kernels.resize(nk);
    f.read(reinterpret_cast<char*>(c.state.data()), sizeof(Complex) * c.state.size());
    f.read(reinterpret_cast<char*>(c.kernels.data()), sizeof(Complex) * c.kernels.size());
    if (!f) throw ParseError("truncated checkpoint", 0);
    return c;
}

void write_trajectory(const std::string& path, const Trajectory& tr, int column) {
    std::ofstream f(path);
    if (!f) throw std::runtime_error("cannot write " + path);
    f << std::setprecision(12);
    const int nph = tr.samples.empty() ? 0 : static_cast<int>(tr.samples.front().rows());
    f << "# t";
    for (int k = 0; k < nph; ++k) f << " re" << k << " im" << k;
    f << " norm\n";
    for (std::size_t n = 0; n < tr.times.size(); ++n) {
        f << tr.times[n];
        for (int k = 0; k < nph; ++k) f << ' ' << tr.samples[n](k, column).real() << ' ' << tr.samples[n](k, column).imag();
        f << ' ' << tr.norms[n](column) << '\n';
    }
}

std::pair<std::vector<double>, MatrixXc> read_trajectory(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw ValidationError("trajectory not found: " + path);
    std::vector<double> t;
    std::vector<std::vector<Complex>> rows;
    std::string line;
    int lineno = 0;
    while (std::getline(f, line)) {
        ++lineno;
        if (line.empty() || line[0] == '#') continue;
        std::istringstream in(line);
        std::vector<double> v;
        double x;
        while (in >> x) v.push_back(x);
        if (v.size() < 2 || v.size() % 2 != 0) throw ParseError("malformed trajectory row", lineno);
        t.push_back(v[0]);
        std::vector<Complex> r;
        for (std::size_t k = 1; k + 1 < v.size(); k += 2) r.emplace_back(v[k], v[k + 1]);
        if (!rows.empty() && r.size() != rows.front().size()) throw ParseError("ragged trajectory row", lineno);
        rows.push_back(std::move(r));
    }
    MatrixXc m(rows.size(), rows.empty() ? 0 : rows.front().size());
    for (std::size_t n = 0; n < rows.size(); ++n)
        for (std::size_t k = 0; k < rows[n].size(); ++k) m(n, k) = rows[n][k];
    return {t, m};
}

// ---------------------------------------------------------------------------

Propagator::Propagator(Generator& gen, const PropagationConfig& cfg) : gen_(gen), cfg_(cfg) {
    cfg_.validate();
    gen_.kernels().set_quadrature_order(cfg_.quadrature_order);
}

void Propagator::kernels_at(double h, VectorXc& K) const {
    const KernelTable& kt = gen_.kernels();
    if (h == 0.0) {
        K = kt.value();
        return;
    }
    if (cfg_.reference)
        kt.advance_reference(h, K);
    else
        kt.advance(h, K);
}

void Propagator::assemble(const VectorXc& K, MatrixXc& G) const {
    if (cfg_.reference)
        gen_.assemble_reference(K, G);
    else
        gen_.assemble(K, G);
    if (!G.allFinite()) gen_.check_finite(K);
}

void Propagator::derivative(const MatrixXc& O, double h_offset, MatrixXc& dO) {
    VectorXc K;
    MatrixXc G;
    kernels_at(h_offset, K);
    assemble(K, G);
    dO.noalias() = G * O;
}

MatrixXc Propagator::generator_now() {
    MatrixXc G;
    assemble(gen_.kernels().value(), G);
    return G;
}

Trajectory Propagator::propagate(const MatrixXc& initial) {
    if (initial.rows() != gen_.system().n_ph()) throw ValidationError("initial amplitude has wrong dimension");
    return run(initial, cfg_.dt_initial);
}

Trajectory Propagator::resume(const Checkpoint& c) {
    gen_.kernels().restore(c.time, c.kernels);
    return run(c.state, c.h_next > 0.0 ? c.h_next : cfg_.dt_initial);
}

Checkpoint Propagator::checkpoint() const {
    return {gen_.kernels().time(), h_next_, state_, gen_.kernels().value()};
}

Trajectory Propagator::run(MatrixXc O, double h) {
    KernelTable& kt = gen_.kernels();
    Trajectory tr;
    auto sample = [&](double t) {
        tr.times.push_back(t);
        tr.samples.push_back(O);
        tr.norms.push_back(O.colwise().squaredNorm().transpose());
    };
    double t = kt.time();
    sample(t);
    const double stride = cfg_.output_stride;
    long next_index = std::lround(t / stride) + 1;
    const double eps_t = 1e-12 * std::max(1.0, cfg_.t_final);

    MatrixXc k1, k2, k3, k4, k5, k6, k7, y, G;
    VectorXc K, K1;
    derivative(O, 0.0, k1);
    h = std::min(h, cfg_.dt_max);
    while (t < cfg_.t_final - eps_t) {
        const double t_out = std::min(next_index * stride, cfg_.t_final);
        double hs = std::min(h, t_out - t);
        const bool clamped = hs < h;
        while (true) {
            if (hs < cfg_.dt_min && t_out - t > cfg_.dt_min) throw IntegratorError("step underflow at t = " + std::to_string(t));
            auto stage = [&](double c, const MatrixXc& yy, MatrixXc& k) {
                kernels_at(c * hs, K);
                assemble(K, G);
                k.noalias() = G * yy;
            };
            y = O + hs * a21 * k1;
            stage(c2, y, k2);
            y = O + hs * (a31 * k1 + a32 * k2);
            stage(c3, y, k3);
            y = O + hs * (a41 * k1 + a42 * k2 + a43 * k3);
            stage(c4, y, k4);
            y = O + hs * (a51 * k1 + a52 * k2 + a53 * k3 + a54 * k4);
            stage(c5, y, k5);
            y = O + hs * (a61 * k1 + a62 * k2 + a63 * k3 + a64 * k4 + a65 * k5);
            kernels_at(hs, K1);
            assemble(K1, G);
            k6.noalias() = G * y;
            y = O + hs * (b1 * k1 + b3 * k3 + b4 * k4 + b5 * k5 + b6 * k6);
            k7.noalias() = G * y;
            const MatrixXc err = hs * (e1 * k1 + e3 * k3 + e4 * k4 + e5 * k5 + e6 * k6 + e7 * k7);
            double acc = 0.0;
            for (Eigen::Index c = 0; c < err.cols(); ++c)
                for (Eigen::Index r = 0; r < err.rows(); ++r) {
                    const double sc = cfg_.rk_tolerance * (1.0 + std::max(std::abs(O(r, c)), std::abs(y(r, c))));
                    acc += std::norm(err(r, c)) / (sc * sc);
                }
            const double e = err.size() ? std::sqrt(acc / err.size()) : 0.0;
            if (!std::isfinite(e)) throw IntegratorError("non-finite error estimate at t = " + std::to_string(t));
            const double fac = e == 0.0 ? 5.0 : std::min(5.0, std::max(0.2, 0.9 * std::pow(e, -0.2)));
            if (e <= 1.0) {
                kt.commit(hs, K1);
                t += hs;
                O = y;
                k1 = k7;
                ++tr.accepted;
                // a step shortened to hit an output time does not shrink the next one
                h = std::min(cfg_.dt_max, clamped ? std::max(h, hs * fac) : hs * fac);
                break;
            }
            ++tr.rejected;
            hs *= std::max(0.2, 0.9 * std::pow(e, -0.2));
        }
        state_ = O;
        h_next_ = h;
        if (on_step) on_step(t, O);
        if (t >= t_out - eps_t) {
            sample(t);
            ++next_index;
        }
    }
    state_ = O;
    h_next_ = h;
    return tr;
}

}  // namespace ptcl
