#include "ptcl/cli.hpp"

#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "ptcl/markov.hpp"
#include "ptcl/observables.hpp"
#include "ptcl/oracle.hpp"
#include "ptcl/polaron.hpp"
#include "ptcl/units.hpp"

namespace fs = std::filesystem;

namespace ptcl {

std::uint64_t fnv1a(const std::string& bytes) {
    std::uint64_t h = 14695981039346656037ull;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

Setup prepare(const RunConfig& c) {
    Setup s;
    s.bare = load_system(c.system);
    const SymmetryReport rep = validate_symmetries(s.bare);
    if (!rep.ok(1e-8)) throw ValidationError("integrals violate permutational symmetry");
    const Theory mode = c.propagation.mode;
    s.bath = c.bath.present ? discretized(resolve_bath(c.bath, s.bare.n())) : BathSpec{};
    s.bath.n_orb = s.bare.n();
    s.sys = s.bare;
    if (mode == Theory::Transformed || mode == Theory::Markovian) {
        s.sys = transform_integrals(s.bare, s.bath).dressed();
    } else if (mode == Theory::Untransformed && c.bath.subtract_reorganization) {
        s.sys.eps -= reorganization_energies(s.bath, s.bare.n());
    }
    GeneratorOptions opt;
    opt.mode = mode;
    opt.correlation = c.propagation.correlation_terms;
    s.gen = std::make_unique<Generator>(s.sys, s.bath, opt);
    return s;
}

namespace {

std::string hex(std::uint64_t h) {
    std::ostringstream o;
    o << std::hex << std::setw(16) << std::setfill('0') << h;
    return o.str();
}

std::string read_file(const fs::path& p) {
    std::ifstream f(p, std::ios::binary);
    std::stringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

const char* axis(int d) { return d == 0 ? "x" : d == 1 ? "y" : "z"; }

struct Run {
    const RunConfig& cfg;
    fs::path out;
    std::vector<std::string> artifacts;

    explicit Run(const RunConfig& c) : cfg(c), out(c.output) { fs::create_directories(out); }

    fs::path file(const std::string& name) {
        artifacts.push_back(name);
        return out / name;
    }

    void manifest(const std::string& sub, const Catalog& catalog) {
        const fs::path mp = out / "manifest.json";
        nlohmann::ordered_json m;
        if (fs::exists(mp)) {
            try {
                m = nlohmann::ordered_json::parse(read_file(mp));
            } catch (...) {
                m = nlohmann::ordered_json::object();
            }
        }
        nlohmann::ordered_json r;
        r["tool"] = "ptcl";
        r["version"] = kVersion;
        r["config"] = cfg.source_path;
        r["config_hash"] = hex(fnv1a(cfg.text));
        r["catalog_hash"] = hex(fnv1a(catalog_json(catalog)));
        nlohmann::ordered_json a = nlohmann::ordered_json::object();
        for (const auto& name : artifacts) a[name] = hex(fnv1a(read_file(out / name)));
        r["artifacts"] = a;
        m[sub] = r;
        std::ofstream(mp) << m.dump(2) << '\n';
    }
};

Catalog full_catalog() {
    Catalog c = first_order_terms();
    for (auto& t : second_order_terms()) c.push_back(t);
    for (auto& t : untransformed_terms()) c.push_back(t);
    return c;
}

int cmd_terms(const RunConfig& cfg) {
    Run run(cfg);
    const Catalog c = full_catalog();
    const std::string text = catalog_json(c);
    std::ofstream(run.file("terms.json")) << text << '\n';
    for (const auto& t : c)
        std::cout << std::left << std::setw(5) << t.id << ' ' << std::setw(6) << t.prefactor.str() << ' '
                  << std::setw(44) << t.pattern() << " scaling " << t.scaling << (t.factorizable ? " factorizable" : "")
                  << '\n';
    std::cout << second_order_skeletons().size() << " second-order skeletons, " << second_order_terms().size()
              << " after Hermitization\n";
    run.manifest("terms", c);
    return 0;
}

int cmd_transform(const RunConfig& cfg) {
    Run run(cfg);
    const SpinOrbitalSystem bare = load_system(cfg.system);
    if (!cfg.bath.present) throw ParseError("missing section 'bath' required by transform");
    const BathSpec bath = discretized(resolve_bath(cfg.bath, bare.n()));
    const PolaronSystem ps = transform_integrals(bare, bath);
    write_native(ps.dressed(), run.file("transformed.json").string());
    std::ofstream f(run.file("reorganization.dat"));
    f << std::setprecision(12) << "# orbital eps eps_tilde lambda lambda_cm-1\n";
    for (int p = 0; p < bare.n(); ++p)
        f << p << ' ' << bare.eps(p) << ' ' << ps.eps_tilde(p) << ' ' << ps.lambda(p) << ' '
          << ps.lambda(p) * units::hartree_cm << '\n';
    run.manifest("transform", full_catalog());
    return 0;
}

double markov_cutoff(const RunConfig& cfg, const BathSpec& bath) {
    if (cfg.bath.t_c > 0.0) return cfg.bath.t_c;
    const double tau = correlation_time(bath);
    return tau > 0.0 ? 10.0 * tau : 100.0;
}

std::vector<std::pair<std::string, VectorXc>> initial_states(const RunConfig& cfg, const SpinOrbitalSystem& s) {
    std::vector<std::pair<std::string, VectorXc>> v;
    if (!cfg.observables.cis_states.empty()) {
        v.emplace_back("cis", cis_superposition(s, cfg.observables.cis_states));
        return v;
    }
    for (int d : cfg.observables.kick) v.emplace_back(axis(d), dipole_kick(s, d).normalized);
    return v;
}

int cmd_propagate(const RunConfig& cfg) {
    Run run(cfg);
    Setup s = prepare(cfg);
    const auto init = initial_states(cfg, s.sys);
    MatrixXc O0(s.sys.n_ph(), init.size());
    for (std::size_t k = 0; k < init.size(); ++k) O0.col(k) = init[k].second;
    Trajectory tr;
    if (cfg.propagation.mode == Theory::Markovian) {
        const RateTensorSet rates = build_rates(*s.gen, markov_cutoff(cfg, s.bath));
        tr = markov_propagate(rates.G_eff, O0, cfg.propagation.t_final, cfg.propagation.output_stride);
    } else {
        Propagator p(*s.gen, cfg.propagation);
        tr = p.propagate(O0);
        write_checkpoint(run.file("checkpoint.bin").string(), p.checkpoint());
        std::cout << "accepted " << tr.accepted << " steps, rejected " << tr.rejected << '\n';
    }
    for (std::size_t k = 0; k < init.size(); ++k) write_trajectory(run.file("trajectory_" + init[k].first + ".dat").string(), tr, k);
    if (!cfg.observables.cis_states.empty()) {
        const PopulationTrace pop = cis_populations(tr.series(0), tr.times, s.sys);
        std::ofstream f(run.file("populations.dat"));
        f << std::setprecision(10) << "# t_au t_fs";
        for (int k = 0; k < pop.energies.size(); ++k) f << " state" << k;
        f << " norm\n";
        for (std::size_t n = 0; n < pop.times.size(); ++n) {
            f << pop.times[n] << ' ' << pop.times[n] / units::fs_au;
            for (int k = 0; k < pop.populations.cols(); ++k) f << ' ' << pop.populations(n, k);
            f << ' ' << pop.norm(n) << '\n';
        }
    }
    run.manifest("propagate", s.gen->catalog());
    return 0;
}

int cmd_spectrum(const RunConfig& cfg, bool markov) {
    Run run(cfg);
    Setup s = prepare(cfg);
    if (markov) {
        const RateTensorSet rates = build_rates(*s.gen, markov_cutoff(cfg, s.bath));
        std::vector<VectorXc> mu;
        for (int d : cfg.observables.kick) mu.push_back(dipole_vector(s.sys, d));
        const MarkovSpectrum sp = markov_spectrum(rates.G_eff, mu);
        if (!sp.defective) {
            std::ofstream f(run.file("poles.dat"));
            f << std::setprecision(12) << "# pole_hartree pole_ev width_hartree strength_re strength_im\n";
            for (const auto& p : sp.poles)
                f << p.pole << ' ' << p.pole * units::hartree_ev << ' ' << p.width << ' ' << p.strength.real() << ' '
                  << p.strength.imag() << '\n';
            run.manifest("spectrum_markov", s.gen->catalog());
            return 0;
        }
    }
    std::vector<VectorXc> C;
    std::vector<std::string> labels;
    std::vector<int> diag;
    double dt = 0.0;
    DipoleDressing dressing = cfg.observables.dressing;
    if (cfg.propagation.mode == Theory::Markovian && dressing == DipoleDressing::Full) dressing = DipoleDressing::Equilibrium;
    for (int b : cfg.observables.kick) {
        const fs::path tp = run.out / ("trajectory_" + std::string(axis(b)) + ".dat");
        auto [times, series] = read_trajectory(tp.string());
        if (times.size() < 2) throw ValidationError("trajectory too short: " + tp.string());
        dt = times[1] - times[0];
        const Kick kb = dipole_kick(s.sys, b);
        for (int a : cfg.observables.kick) {
            if (a == b) diag.push_back(static_cast<int>(C.size()));
            C.push_back(dipole_correlation(series, kb.normalized, dipole_vector(s.sys, a), kb.amplitude, times, s.bare,
                                           s.bath, dressing));
            labels.push_back(std::string(axis(a)) + axis(b));
        }
    }
    // the last sample may sit on a shortened stride
    std::size_t n = C.front().size();
    for (auto& c : C) c.conservativeResize(n);
    const SpectrumResult r = spectrum(C, dt, cfg.observables.spectrum, diag);
    write_spectrum(run.file("spectrum.dat").string(), r, labels);
    std::ofstream f(run.file("peaks.dat"));
    f << std::setprecision(10) << "# freq_hartree freq_ev height\n";
    for (const auto& p : find_peaks(r.freqs, r.averaged, 0.05, 0.0))
        f << p.freq << ' ' << p.freq * units::hartree_ev << ' ' << p.height << '\n';
    run.manifest("spectrum", s.gen->catalog());
    return 0;
}

int cmd_rates(const RunConfig& cfg) {
    Run run(cfg);
    RunConfig c = cfg;
    if (c.propagation.mode != Theory::Untransformed) c.propagation.mode = Theory::Markovian;
    Setup s = prepare(c);
    const double t_c = markov_cutoff(cfg, s.bath);
    const RateTensorSet rates = build_rates(*s.gen, t_c);
    {
        std::ofstream f(run.file("geff.dat"));
        f << std::setprecision(14) << "# row col re im (t_c = " << t_c << ")\n";
        for (int i = 0; i < rates.G_eff.rows(); ++i)
            for (int j = 0; j < rates.G_eff.cols(); ++j)
                f << i << ' ' << j << ' ' << rates.G_eff(i, j).real() << ' ' << rates.G_eff(i, j).imag() << '\n';
    }
    std::ofstream f(run.file("rate_norms.dat"));
    f << std::setprecision(10) << "# term frobenius_norm\n";
    for (const auto& [id, norm] : rates.term_norms) f << id << ' ' << norm << '\n';
    run.manifest("rates", s.gen->catalog());
    return 0;
}

struct Check {
    std::string name;
    double deviation;
    double tolerance;
};

int cmd_validate(const RunConfig& cfg) {
    const SpinOrbitalSystem s = load_system(cfg.system);
    std::vector<Check> checks;
    const SymmetryReport rep = validate_symmetries(s);
    checks.push_back({"integral symmetry", rep.max(), 1e-10});
    {
        BathSpec none;
        none.n_orb = s.n();
        GeneratorOptions o;
        o.correlation = false;
        Generator g(s, none, o);
        const Eigen::VectorXd cis = oracle::exact_cis(s).values;
        Eigen::ComplexEigenSolver<MatrixXc> es(I * g.constant());
        Eigen::VectorXd ev = es.eigenvalues().real();
        std::sort(ev.data(), ev.data() + ev.size());
        checks.push_back({"first-order generator vs CIS", (ev - cis).cwiseAbs().maxCoeff(), 1e-10});
    }
    if (s.n() <= 8) {
        const double dev = validate_against_superoperator(second_order_skeletons(), s, 0.7, 0.3);
        checks.push_back({"second-order catalog vs superoperator", dev, 1e-10});
    }
    if (cfg.bath.present) {
        const BathSpec bath = discretized(resolve_bath(cfg.bath, s.n()));
        if (bath.modes.size() <= 2 && !bath.modes.empty()) {
            bool damped = false;
            for (const auto& m : bath.modes) damped = damped || m.width > 0.0;
            if (!damped) {
                double dev = 0.0;
                const int n = s.n();
                for (int p = 0; p < n; ++p)
                    for (int q = 0; q < n; ++q) {
                        BathSignature sig;
                        sig.t_create = {p};
                        sig.t_annihilate = {q};
                        sig.s_create = {q};
                        sig.s_annihilate = {p};
                        std::vector<oracle::DisplacementOp> ops = {{p, true, 0.9}, {q, false, 0.9},
                                                                   {q, true, 0.0}, {p, false, 0.0}};
                        try {
                            const Complex ref = oracle::boson_trace(ops, bath, 60);
                            dev = std::max(dev, std::abs(ref - bcf_two_time(sig, bath, 0.9)));
                        } catch (const oracle::TruncationError& e) {
                            warn(std::string("boson trace skipped: ") + e.what());
                        }
                    }
                checks.push_back({"bath correlation vs boson trace", dev, 1e-7});
            }
        }
    }
    bool ok = true;
    for (const auto& c : checks) {
        const bool pass = c.deviation <= c.tolerance;
        ok = ok && pass;
        std::cout << (pass ? "PASS " : "FAIL ") << std::left << std::setw(42) << c.name << " deviation "
                  << std::scientific << std::setprecision(2) << c.deviation << " (tol " << c.tolerance << ")\n"
                  << std::defaultfloat;
    }
    return ok ? 0 : 3;
}

}  // namespace

int run_cli(int argc, char** argv) {
    CLI::App app{"Second-order time-convolutionless dynamics of dressed particle-hole excitations"};
    app.set_version_flag("--version", kVersion);
    app.require_subcommand(1);
    std::string config;
    std::string output;
    bool markov = false;
    std::map<std::string, CLI::App*> subs;
    for (const char* name : {"terms", "transform", "propagate", "spectrum", "rates", "validate"}) {
        CLI::App* sub = app.add_subcommand(name);
        sub->add_option("config", config, "JSON run configuration")->required();
        sub->add_option("-o,--output", output, "output directory (overrides the config)");
        subs[name] = sub;
    }
    subs["spectrum"]->add_flag("--markov", markov, "pole table from the Markovian effective generator");
    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : 2;
    }
    try {
        RunConfig cfg = load_config(config);
        if (!output.empty()) cfg.output = output;
        if (subs["terms"]->parsed()) return cmd_terms(cfg);
        if (subs["transform"]->parsed()) return cmd_transform(cfg);
        if (subs["propagate"]->parsed()) return cmd_propagate(cfg);
        if (subs["spectrum"]->parsed()) return cmd_spectrum(cfg, markov);
        if (subs["rates"]->parsed()) return cmd_rates(cfg);
        if (subs["validate"]->parsed()) return cmd_validate(cfg);
    } catch (const ParseError& e) {
        std::cerr << "parse error: " << e.what() << '\n';
        return 2;
    } catch (const ValidationError& e) {
        std::cerr << "validation error: " << e.what() << '\n';
        return 3;
    } catch (const IntegratorError& e) {
        std::cerr << "integrator error: " << e.what() << '\n';
        return 4;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 1;
}

}  // namespace ptcl
