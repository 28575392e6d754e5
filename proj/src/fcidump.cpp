#include <cmath>
#include <fstream>
#include <regex>
#include <sstream>

#include "ptcl/hamiltonian.hpp"

namespace ptcl {

namespace {

int header_int(const std::string& header, const std::string& key, int fallback) {
    std::regex re(key + R"(\s*=\s*(-?\d+))", std::regex::icase);
    std::smatch m;
    if (std::regex_search(header, m, re)) return std::stoi(m[1]);
    return fallback;
}

}  // namespace

SpinOrbitalSystem load_fcidump(const std::string& path, int n_electrons) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open FCIDUMP " + path);

    std::string line, header;
    int line_no = 0;
    bool in_header = false, header_done = false;
    std::vector<std::pair<int, std::string>> records;
    while (std::getline(in, line)) {
        ++line_no;
        const auto first = line.find_first_not_of(" \t\r");
        if (first == std::string::npos) continue;
        if (!header_done && (in_header || line[first] == '&')) {
            in_header = true;
            header += line + " ";
            std::string up = line;
            for (auto& c : up) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
            if (up.find("&END") != std::string::npos || up.find_first_not_of(" \t\r/") == std::string::npos) {
                header_done = true;
                in_header = false;
            }
            continue;
        }
        header_done = true;
        records.emplace_back(line_no, line);
    }
    if (in_header) throw ParseError("unterminated &FCI header", line_no);

    int norb = header_int(header, "NORB", -1);
    if (n_electrons <= 0) n_electrons = header_int(header, "NELEC", -1);
    if (n_electrons <= 0) throw ParseError("electron count not given and NELEC missing from header");
    if (n_electrons % 2 != 0) throw DomainError("odd electron count: closed-shell expansion needs an even count");

    struct Rec { int line; double v; int i, j, k, l; };
    std::vector<Rec> parsed;
    int max_index = 0;
    for (const auto& [ln, text] : records) {
        std::istringstream ss(text);
        std::string tok[5];
        int got = 0;
        while (got < 5 && ss >> tok[got]) ++got;
        std::string extra;
        if (got != 5 || (ss >> extra)) throw ParseError("expected 'value i j k l'", ln);
        Rec r{ln, 0.0, 0, 0, 0, 0};
        try {
            std::size_t pos = 0;
            std::string vt = tok[0];
            for (auto& c : vt)
                if (c == 'D' || c == 'd') c = 'e';
            r.v = std::stod(vt, &pos);
            if (pos != vt.size()) throw std::invalid_argument("trailing");
            int* idx[4] = {&r.i, &r.j, &r.k, &r.l};
            for (int q = 0; q < 4; ++q) {
                *idx[q] = std::stoi(tok[q + 1], &pos);
                if (pos != tok[q + 1].size()) throw std::invalid_argument("trailing");
            }
        } catch (const std::exception&) {
            throw ParseError("malformed record '" + text + "'", ln);
        }
        if (!std::isfinite(r.v)) throw ParseError("non-finite integral", ln);
        if (r.i < 0 || r.j < 0 || r.k < 0 || r.l < 0) throw ParseError("negative orbital index", ln);
        max_index = std::max({max_index, r.i, r.j, r.k, r.l});
        parsed.push_back(r);
    }
    if (norb < 0) norb = max_index;
    if (norb < 1) throw ParseError("no orbitals found");

    SpatialIntegrals sp;
    sp.n = norb;
    sp.eri.assign(static_cast<std::size_t>(norb) * norb * norb * norb, 0.0);
    std::vector<char> seen(sp.eri.size(), 0);
    Eigen::VectorXd eps = Eigen::VectorXd::Zero(norb);
    Eigen::MatrixXd h = Eigen::MatrixXd::Zero(norb, norb);
    bool have_eps = false, have_h = false;

    auto slot = [&](int p, int q, int r, int s) { return ((static_cast<std::size_t>(p) * norb + q) * norb + r) * norb + s; };
    for (const auto& r : parsed) {
        if (std::max({r.i, r.j, r.k, r.l}) > norb) throw ParseError("orbital index exceeds NORB", r.line);
        if (r.i == 0 && r.j == 0 && r.k == 0 && r.l == 0) continue;  // core energy
        if (r.k == 0 && r.l == 0) {
            if (r.i == 0) throw ParseError("malformed one-index record", r.line);
            if (r.j == 0) {
                eps(r.i - 1) = r.v;
                have_eps = true;
            } else {
                h(r.i - 1, r.j - 1) = h(r.j - 1, r.i - 1) = r.v;
                have_h = true;
            }
            continue;
        }
        if (r.i == 0 || r.j == 0 || r.k == 0 || r.l == 0) throw ParseError("two-electron record with a zero index", r.line);
        const int p = r.i - 1, q = r.j - 1, a = r.k - 1, b = r.l - 1;
        const int perms[8][4] = {{p, q, a, b}, {q, p, a, b}, {p, q, b, a}, {q, p, b, a},
                                 {a, b, p, q}, {b, a, p, q}, {a, b, q, p}, {b, a, q, p}};
        for (const auto& x : perms) {
            const auto k = slot(x[0], x[1], x[2], x[3]);
            if (seen[k] && std::abs(sp.eri[k] - r.v) > 1e-10) {
                std::ostringstream msg;
                msg << "line " << r.line << ": integral (" << r.i << r.j << "|" << r.k << r.l
                    << ") conflicts with a symmetry-equivalent element (difference "
                    << std::abs(sp.eri[k] - r.v) << ")";
                throw ValidationError(msg.str());
            }
            sp.eri[k] = r.v;
            seen[k] = 1;
        }
    }

    if (!have_eps) {
        if (!have_h) throw ParseError("file carries neither orbital energies nor one-electron integrals");
        // closed-shell Fock diagonal with the lowest orbitals occupied
        const int nd = n_electrons / 2;
        for (int p = 0; p < norb; ++p) {
            double f = h(p, p);
            for (int k = 0; k < nd; ++k) f += 2.0 * sp.eri[slot(p, p, k, k)] - sp.eri[slot(p, k, k, p)];
            eps(p) = f;
        }
    }
    sp.eps = eps;
    for (auto& m : sp.mu) m = Eigen::MatrixXd::Zero(norb, norb);
    return expand_spatial(sp, n_electrons);
}

}  // namespace ptcl
