#include "ptcl/wick.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <sstream>

#include <json.hpp>

#include "ptcl/oracle.hpp"

namespace ptcl {

Rational::Rational(long n, long d) : num(n), den(d) {
    if (den == 0) throw std::domain_error("zero denominator");
    if (den < 0) {
        num = -num;
        den = -den;
    }
    const long g = std::gcd(num < 0 ? -num : num, den);
    if (g > 1) {
        num /= g;
        den /= g;
    }
    if (num == 0) den = 1;
}

Rational operator+(const Rational& a, const Rational& b) { return Rational(a.num * b.den + b.num * a.den, a.den * b.den); }
Rational operator*(const Rational& a, const Rational& b) { return Rational(a.num * b.num, a.den * b.den); }

std::string Rational::str() const {
    return den == 1 ? std::to_string(num) : std::to_string(num) + "/" + std::to_string(den);
}

std::string TermSpec::label_name(int l) const {
    if (l == 0) return "a";
    if (l == 1) return "i";
    static const char occ_names[] = "jklmnpq";
    static const char virt_names[] = "bcdefgh";
    int rank = 0;
    for (int k = 2; k < l; ++k)
        if (labels[k] == labels[l]) ++rank;
    return std::string(1, labels[l] == Space::Occ ? occ_names[rank % 7] : virt_names[rank % 7]);
}

namespace {

std::string names(const TermSpec& t, const int* slots, int n) {
    std::string s;
    for (int k = 0; k < n; ++k) s += t.label_name(slots[k]);
    return s;
}

std::string tensor_str(const TermSpec& t, const std::array<int, 4>& v) {
    std::string s = "<" + names(t, v.data(), 2) + "||" + names(t, v.data() + 2, 2) + ">";
    return t.conjugate ? s + "*" : s;
}

std::string phase_str(const TermSpec& t, const std::array<int, 4>& v, int n_create, int n_total) {
    std::string s;
    for (int k = 0; k < n_total; ++k) s += (k < n_create ? "+e" : "-e") + t.label_name(v[k]);
    return s;
}

}  // namespace

std::string TermSpec::pattern() const {
    const std::string amp = "o[" + label_name(o[0]) + label_name(o[1]) + "]";
    switch (kind) {
        case TermKind::Gap: return "(ea-ei) o[ia]";
        case TermKind::FirstOrder: return tensor_str(*this, vt) + " " + amp;
        case TermKind::SecondOrder: return tensor_str(*this, vt) + " " + tensor_str(*this, vs) + " " + amp;
        case TermKind::Bath:
            return "M[" + names(*this, vt.data(), 2) + "] M[" + names(*this, vs.data(), 2) + "] " + amp;
    }
    return {};
}

std::string TermSpec::phase_t() const {
    if (kind == TermKind::SecondOrder || kind == TermKind::FirstOrder) return phase_str(*this, vt, 2, 4);
    if (kind == TermKind::Bath) return phase_str(*this, vt, 1, 2);
    return {};
}

std::string TermSpec::phase_s() const {
    if (kind == TermKind::SecondOrder) return phase_str(*this, vs, 2, 4);
    if (kind == TermKind::Bath) return phase_str(*this, vs, 1, 2);
    return {};
}

std::string TermSpec::bath_signature() const {
    auto group = [&](const std::array<int, 4>& v) {
        return "X+" + label_name(v[0]) + " X+" + label_name(v[1]) + " X-" + label_name(v[2]) + " X-" + label_name(v[3]);
    };
    if (kind == TermKind::SecondOrder) return "t: " + group(vt) + "; s: " + group(vs);
    if (kind == TermKind::FirstOrder) return "t: " + group(vt);
    return {};
}

// ---------------------------------------------------------------------------
// Wick contraction engine

namespace {

struct Op {
    bool create;
    int label;
};

bool can_contract(const Op& l, const Op& r, const std::vector<Space>& sp) {
    if (sp[l.label] != sp[r.label]) return false;
    if (!l.create && r.create) return sp[l.label] == Space::Virt;
    if (l.create && !r.create) return sp[l.label] == Space::Occ;
    return false;
}

int parity(const std::vector<int>& perm) {
    int inv = 0;
    for (std::size_t a = 0; a < perm.size(); ++a)
        for (std::size_t b = a + 1; b < perm.size(); ++b)
            if (perm[a] > perm[b]) ++inv;
    return inv % 2 ? -1 : 1;
}

using Emit = std::function<void(int sign, const std::vector<std::pair<int, int>>& merged, std::vector<Op> rest)>;

// All ways of contracting exactly k operator pairs between normal-ordered
// strings L (left) and R (right).
void contract(const std::vector<Op>& L, const std::vector<Op>& R, const std::vector<Space>& sp, int k,
              const Emit& emit) {
    const int nl = static_cast<int>(L.size()), nr = static_cast<int>(R.size());
    std::vector<int> match(nl, -1);
    std::vector<char> used(nr, 0);
    std::function<void(int, int)> rec = [&](int li, int count) {
        if (count > k) return;
        if (li == nl) {
            if (count != k) return;
            std::vector<int> perm;
            std::vector<std::pair<int, int>> merged;
            for (int a = 0; a < nl; ++a)
                if (match[a] >= 0) {
                    perm.push_back(a);
                    perm.push_back(nl + match[a]);
                    merged.emplace_back(L[a].label, R[match[a]].label);
                }
            std::vector<Op> rest;
            for (int a = 0; a < nl; ++a)
                if (match[a] < 0) {
                    perm.push_back(a);
                    rest.push_back(L[a]);
                }
            for (int b = 0; b < nr; ++b)
                if (!used[b]) {
                    perm.push_back(nl + b);
                    rest.push_back(R[b]);
                }
            emit(parity(perm), merged, std::move(rest));
            return;
        }
        rec(li + 1, count);
        for (int b = 0; b < nr; ++b) {
            if (used[b] || !can_contract(L[li], R[b], sp)) continue;
            used[b] = 1;
            match[li] = b;
            rec(li + 1, count + 1);
            used[b] = 0;
            match[li] = -1;
        }
    };
    rec(0, 0);
}

struct UnionFind {
    std::vector<int> p;
    explicit UnionFind(int n) : p(n) { std::iota(p.begin(), p.end(), 0); }
    int find(int x) {
        while (p[x] != x) x = p[x] = p[p[x]];
        return x;
    }
    void merge(int a, int b) { p[find(b)] = find(a); }
};

struct Draft {
    Rational coef;
    std::vector<Op> ops;
    std::vector<std::pair<int, int>> merged;
};

// [A, B] restricted to exactly k contractions; uncontracted parts cancel for
// even strings so k >= 1.
std::vector<Draft> commutator(const Draft& A, const Draft& B, const std::vector<Space>& sp, int k) {
    std::vector<Draft> out;
    auto collect = [&](const Draft& L, const Draft& R, int sgn) {
        contract(L.ops, R.ops, sp, k, [&](int sign, const std::vector<std::pair<int, int>>& m, std::vector<Op> rest) {
            Draft d;
            d.coef = A.coef * B.coef * Rational(sign * sgn);
            d.ops = std::move(rest);
            d.merged = A.merged;
            d.merged.insert(d.merged.end(), B.merged.begin(), B.merged.end());
            d.merged.insert(d.merged.end(), m.begin(), m.end());
            out.push_back(std::move(d));
        });
    };
    collect(A, B, 1);
    collect(B, A, -1);
    return out;
}

// Reads the particle-hole part {a+_a a_i} of a two-operator remainder.
bool ph_orientation(const std::vector<Op>& rest, const std::vector<Space>& sp, int& virt, int& occ, int& sign) {
    if (rest.size() != 2) return false;
    for (int first = 0; first < 2; ++first) {
        const Op& c = rest[first];
        const Op& a = rest[1 - first];
        if (c.create && sp[c.label] == Space::Virt && !a.create && sp[a.label] == Space::Occ) {
            virt = c.label;
            occ = a.label;
            sign = first == 0 ? 1 : -1;
            return true;
        }
    }
    return false;
}

std::vector<Op> two_body(const int* l) {
    // (1/4) <pq||rs> {a+_p a+_q a_s a_r}
    return {{true, l[0]}, {true, l[1]}, {false, l[3]}, {false, l[2]}};
}

struct Accumulator {
    std::map<std::vector<int>, std::pair<TermSpec, Rational>> terms;
    std::vector<int> key(const TermSpec& t) const {
        std::vector<int> k;
        k.push_back(static_cast<int>(t.kind));
        k.insert(k.end(), t.vt.begin(), t.vt.end());
        k.insert(k.end(), t.vs.begin(), t.vs.end());
        k.insert(k.end(), t.o.begin(), t.o.end());
        k.push_back(t.conjugate);
        k.push_back(t.phase_sign);
        for (auto s : t.labels) k.push_back(static_cast<int>(s));
        return k;
    }
    void add(const TermSpec& raw) {
        int sign = 0;
        TermSpec c = canonicalize(raw, &sign);
        if (sign == 0) return;
        auto k = key(c);
        Rational coef = raw.prefactor * Rational(sign);
        auto it = terms.find(k);
        if (it == terms.end())
            terms.emplace(k, std::make_pair(c, coef));
        else
            it->second.second = it->second.second + coef;
    }
    Catalog finish(const std::string& prefix) const {
        Catalog out;
        for (const auto& [k, v] : terms) {
            if (v.second.zero()) continue;
            TermSpec t = v.first;
            t.prefactor = v.second;
            out.push_back(t);
        }
        std::stable_sort(out.begin(), out.end(), [](const TermSpec& a, const TermSpec& b) { return a.scaling < b.scaling; });
        for (std::size_t n = 0; n < out.size(); ++n) {
            std::ostringstream id;
            id << prefix << (n + 1 < 10 ? "0" : "") << n + 1;
            out[n].id = id.str();
        }
        return out;
    }
};

void finalize_shape(TermSpec& t) {
    const int n = static_cast<int>(t.labels.size());
    auto in_tensor = [&](int l) {
        for (int x : t.vt)
            if (x == l) return true;
        for (int x : t.vs)
            if (x == l) return true;
        return false;
    };
    t.factorizable = false;
    t.spectator = -1;
    for (int ext : {1, 0}) {
        if (!in_tensor(ext) && (t.o[0] == ext || t.o[1] == ext)) {
            t.factorizable = true;
            t.spectator = ext;
            break;
        }
    }
    t.scaling = n - (t.factorizable ? 1 : 0);
}

int space_bit(int cls, int k) { return (cls >> k) & 1; }

}  // namespace

TermSpec canonicalize(const TermSpec& t, int* sign_out) {
    const bool anti_t = t.kind == TermKind::FirstOrder || t.kind == TermKind::SecondOrder;
    const bool anti_s = t.kind == TermKind::SecondOrder;
    const int nv_t = anti_t ? 4 : 1, nv_s = anti_s ? 4 : 1;
    std::vector<int> best_key;
    TermSpec best;
    int best_sign = 0;
    bool conflict = false;
    for (int vtv = 0; vtv < nv_t; ++vtv)
        for (int vsv = 0; vsv < nv_s; ++vsv) {
            TermSpec c = t;
            int sign = 1;
            auto flip = [&](std::array<int, 4>& v, int variant) {
                if (variant & 1) {
                    std::swap(v[0], v[1]);
                    sign = -sign;
                }
                if (variant & 2) {
                    std::swap(v[2], v[3]);
                    sign = -sign;
                }
            };
            flip(c.vt, vtv);
            flip(c.vs, vsv);
            // externals fixed by the output slots, dummies by first appearance
            std::map<int, int> relabel;
            relabel[t.out[0]] = 1;
            relabel[t.out[1]] = 0;
            int next = 2;
            auto visit = [&](int& l) {
                if (l < 0) return;
                auto it = relabel.find(l);
                if (it == relabel.end()) it = relabel.emplace(l, next++).first;
                l = it->second;
            };
            std::vector<Space> sp(t.labels.size());
            for (int& l : c.vt) visit(l);
            for (int& l : c.vs) visit(l);
            for (int& l : c.o) visit(l);
            for (int& l : c.out) visit(l);
            sp.resize(relabel.size());
            for (const auto& [from, to] : relabel) sp[to] = t.labels[from];
            c.labels = sp;
            std::vector<int> key(c.vt.begin(), c.vt.end());
            key.insert(key.end(), c.vs.begin(), c.vs.end());
            key.insert(key.end(), c.o.begin(), c.o.end());
            for (auto s : sp) key.push_back(static_cast<int>(s));
            if (best_key.empty() || key < best_key) {
                best_key = key;
                best = c;
                best_sign = sign;
                conflict = false;
            } else if (key == best_key && sign != best_sign) {
                conflict = true;
            }
        }
    finalize_shape(best);
    if (sign_out) *sign_out = conflict ? 0 : best_sign;
    return best;
}

const TermSpec* find_term(const Catalog& c, const TermSpec& probe) {
    int sign = 0;
    TermSpec p = canonicalize(probe, &sign);
    for (const auto& t : c) {
        if (t.kind != p.kind || t.vt != p.vt || t.vs != p.vs || t.o != p.o || t.labels != p.labels) continue;
        if (t.conjugate != p.conjugate || t.phase_sign != p.phase_sign) continue;
        return &t;
    }
    return nullptr;
}

Catalog first_order_terms() {
    Accumulator acc;
    for (int cls = 0; cls < 16; ++cls) {
        // labels: 0 o_virt, 1 o_occ, 2..5 V
        std::vector<Space> sp = {Space::Virt, Space::Occ};
        for (int k = 0; k < 4; ++k) sp.push_back(space_bit(cls, k) ? Space::Virt : Space::Occ);
        const int vl[4] = {2, 3, 4, 5};
        Draft v{Rational(1, 4), two_body(vl), {}};
        Draft o{Rational(1), {{true, 0}, {false, 1}}, {}};
        for (const Draft& d : commutator(v, o, sp, 2)) {
            int virt = 0, occ = 0, orient = 0;
            if (!ph_orientation(d.ops, sp, virt, occ, orient)) continue;
            UnionFind uf(static_cast<int>(sp.size()));
            for (auto [x, y] : d.merged) uf.merge(x, y);
            TermSpec t;
            t.kind = TermKind::FirstOrder;
            t.labels = sp;
            for (int k = 0; k < 4; ++k) t.vt[k] = uf.find(vl[k]);
            t.o = {uf.find(1), uf.find(0)};
            t.out = {uf.find(occ), uf.find(virt)};
            t.prefactor = d.coef * Rational(orient);
            acc.add(t);
        }
    }
    Catalog out;
    TermSpec gap;
    gap.kind = TermKind::Gap;
    gap.id = "G00";
    gap.labels = {Space::Virt, Space::Occ};
    gap.scaling = 2;
    out.push_back(gap);
    for (auto& t : acc.finish("F")) out.push_back(t);
    return out;
}

Catalog second_order_skeletons() {
    Accumulator acc;
    // labels: 0 o_virt, 1 o_occ, 2..5 V(s), 6..9 V(t)
    const int ls[4] = {2, 3, 4, 5}, lt[4] = {6, 7, 8, 9};
    for (int cs = 0; cs < 16; ++cs) {
        for (int ct = 0; ct < 16; ++ct) {
            std::vector<Space> sp = {Space::Virt, Space::Occ};
            for (int k = 0; k < 4; ++k) sp.push_back(space_bit(cs, k) ? Space::Virt : Space::Occ);
            for (int k = 0; k < 4; ++k) sp.push_back(space_bit(ct, k) ? Space::Virt : Space::Occ);
            Draft vs{Rational(1, 4), two_body(ls), {}};
            Draft vt{Rational(1, 4), two_body(lt), {}};
            Draft o{Rational(1), {{true, 0}, {false, 1}}, {}};
            // Q keeps the two-body part of [V(s), o]: exactly one contraction
            for (const Draft& y : commutator(vs, o, sp, 1)) {
                if (y.ops.size() != 4) throw std::logic_error("non-conserving intermediate string");
                for (const Draft& z : commutator(vt, y, sp, 3)) {
                    int virt = 0, occ = 0, orient = 0;
                    if (!ph_orientation(z.ops, sp, virt, occ, orient)) continue;
                    UnionFind uf(static_cast<int>(sp.size()));
                    for (auto [x, w] : z.merged) uf.merge(x, w);
                    TermSpec t;
                    t.kind = TermKind::SecondOrder;
                    t.labels = sp;
                    for (int k = 0; k < 4; ++k) {
                        t.vs[k] = uf.find(ls[k]);
                        t.vt[k] = uf.find(lt[k]);
                    }
                    t.o = {uf.find(1), uf.find(0)};
                    t.out = {uf.find(occ), uf.find(virt)};
                    // (-i)^2 from the two Liouvillians
                    t.prefactor = z.coef * Rational(-orient);
                    acc.add(t);
                }
            }
        }
    }
    return acc.finish("S");
}

Catalog hermitize(const Catalog& skeletons) {
    Catalog out;
    for (std::size_t k = 0; k < skeletons.size(); ++k) {
        const TermSpec& s = skeletons[k];
        TermSpec half = s;
        half.prefactor = s.prefactor * Rational(1, 2);
        half.partner_of = static_cast<int>(k);
        half.id = s.id + "a";
        TermSpec partner = s;
        std::swap(partner.out, partner.o);
        partner.conjugate = !s.conjugate;
        partner.phase_sign = -s.phase_sign;
        int sign = 1;
        partner = canonicalize(partner, &sign);
        partner.conjugate = !s.conjugate;
        partner.phase_sign = -s.phase_sign;
        partner.prefactor = s.prefactor * Rational(-1, 2) * Rational(sign == 0 ? 1 : sign);
        partner.partner_of = static_cast<int>(k);
        partner.id = s.id + "b";
        out.push_back(half);
        out.push_back(partner);
    }
    return out;
}

Catalog second_order_terms() { return hermitize(second_order_skeletons()); }

Catalog untransformed_terms() {
    Accumulator acc;
    // labels: 0 o_virt, 1 o_occ, 2..3 A(s), 4..5 A(t)
    for (int cs = 0; cs < 4; ++cs)
        for (int ct = 0; ct < 4; ++ct) {
            std::vector<Space> sp = {Space::Virt, Space::Occ};
            for (int k = 0; k < 2; ++k) sp.push_back(space_bit(cs, k) ? Space::Virt : Space::Occ);
            for (int k = 0; k < 2; ++k) sp.push_back(space_bit(ct, k) ? Space::Virt : Space::Occ);
            Draft as{Rational(1), {{true, 2}, {false, 3}}, {}};
            Draft at{Rational(1), {{true, 4}, {false, 5}}, {}};
            Draft o{Rational(1), {{true, 0}, {false, 1}}, {}};
            for (const Draft& y : commutator(as, o, sp, 1))
                for (const Draft& z : commutator(at, y, sp, 1)) {
                    int virt = 0, occ = 0, orient = 0;
                    if (!ph_orientation(z.ops, sp, virt, occ, orient)) continue;
                    UnionFind uf(static_cast<int>(sp.size()));
                    for (auto [x, w] : z.merged) uf.merge(x, w);
                    TermSpec t;
                    t.kind = TermKind::Bath;
                    t.labels = sp;
                    t.vs = {uf.find(2), uf.find(3), -1, -1};
                    t.vt = {uf.find(4), uf.find(5), -1, -1};
                    t.o = {uf.find(1), uf.find(0)};
                    t.out = {uf.find(occ), uf.find(virt)};
                    t.prefactor = z.coef * Rational(-orient);
                    acc.add(t);
                }
        }
    return acc.finish("U");
}

// ---------------------------------------------------------------------------
// Numeric evaluation

void for_each_assignment(const TermSpec& t, const SpinOrbitalSystem& s, const std::function<void(const int*)>& fn) {
    const int n = static_cast<int>(t.labels.size());
    std::vector<int> idx(n), lo(n), hi(n);
    for (int l = 0; l < n; ++l) {
        lo[l] = t.labels[l] == Space::Occ ? 0 : s.n_occ;
        hi[l] = t.labels[l] == Space::Occ ? s.n_occ : s.n();
        idx[l] = lo[l];
    }
    while (true) {
        fn(idx.data());
        int l = n - 1;
        while (l >= 0 && ++idx[l] == hi[l]) {
            idx[l] = lo[l];
            --l;
        }
        if (l < 0) break;
    }
}

Complex tensor_value(const TermSpec& t, const SpinOrbitalSystem& s, const int* idx) {
    auto v = [&](const std::array<int, 4>& x) {
        const Complex c = s.V(idx[x[0]], idx[x[1]], idx[x[2]], idx[x[3]]);
        return t.conjugate ? std::conj(c) : c;
    };
    switch (t.kind) {
        case TermKind::FirstOrder: return v(t.vt);
        case TermKind::SecondOrder: return v(t.vt) * v(t.vs);
        default: return 1.0;
    }
}

double created_minus_annihilated_t(const TermSpec& t, const Eigen::VectorXd& e, const int* idx) {
    if (t.kind == TermKind::Bath) return e(idx[t.vt[0]]) - e(idx[t.vt[1]]);
    return e(idx[t.vt[0]]) + e(idx[t.vt[1]]) - e(idx[t.vt[2]]) - e(idx[t.vt[3]]);
}

double created_minus_annihilated_s(const TermSpec& t, const Eigen::VectorXd& e, const int* idx) {
    if (t.kind == TermKind::Bath) return e(idx[t.vs[0]]) - e(idx[t.vs[1]]);
    return e(idx[t.vs[0]]) + e(idx[t.vs[1]]) - e(idx[t.vs[2]]) - e(idx[t.vs[3]]);
}

MatrixXc skeleton_map(const Catalog& skeletons, const SpinOrbitalSystem& s, double t, double sp) {
    MatrixXc G = MatrixXc::Zero(s.n_ph(), s.n_ph());
    for (const auto& term : skeletons) {
        if (term.kind != TermKind::SecondOrder) continue;
        const double c = term.prefactor.value();
        for_each_assignment(term, s, [&](const int* idx) {
            const Complex v = tensor_value(term, s, idx);
            if (v == Complex{}) return;
            const double ph = created_minus_annihilated_t(term, s.eps, idx) * t +
                              created_minus_annihilated_s(term, s.eps, idx) * sp;
            G(s.ph(idx[term.out[0]], idx[term.out[1]]), s.ph(idx[term.o[0]], idx[term.o[1]])) +=
                c * v * std::exp(I * ph);
        });
    }
    return G;
}

MatrixXc bath_skeleton_map(const Catalog& terms, const SpinOrbitalSystem& s, const Eigen::MatrixXd& M, double t,
                           double sp) {
    MatrixXc G = MatrixXc::Zero(s.n_ph(), s.n_ph());
    for (const auto& term : terms) {
        if (term.kind != TermKind::Bath) continue;
        const double c = term.prefactor.value();
        for_each_assignment(term, s, [&](const int* idx) {
            const double m = M(idx[term.vt[0]], idx[term.vt[1]]) * M(idx[term.vs[0]], idx[term.vs[1]]);
            if (m == 0.0) return;
            const double ph = created_minus_annihilated_t(term, s.eps, idx) * t +
                              created_minus_annihilated_s(term, s.eps, idx) * sp;
            G(s.ph(idx[term.out[0]], idx[term.out[1]]), s.ph(idx[term.o[0]], idx[term.o[1]])) +=
                c * m * std::exp(I * ph);
        });
    }
    return G;
}

double validate_against_superoperator(const Catalog& skeletons, const SpinOrbitalSystem& s, double t, double sp) {
    const MatrixXc ref = oracle::superoperator_tcl(s, t, sp);
    const MatrixXc got = skeleton_map(skeletons, s, t, sp);
    return (ref - got).cwiseAbs().maxCoeff();
}

std::string catalog_json(const Catalog& c) {
    nlohmann::ordered_json arr = nlohmann::ordered_json::array();
    auto kind_name = [](TermKind k) {
        switch (k) {
            case TermKind::Gap: return "gap";
            case TermKind::FirstOrder: return "first_order";
            case TermKind::SecondOrder: return "second_order";
            case TermKind::Bath: return "bath";
        }
        return "";
    };
    for (const auto& t : c) {
        nlohmann::ordered_json j;
        j["id"] = t.id;
        j["kind"] = kind_name(t.kind);
        j["pattern"] = t.pattern();
        j["output"] = "o[" + t.label_name(1) + t.label_name(0) + "]";
        j["prefactor"] = t.prefactor.str();
        j["sign"] = t.sign();
        j["conjugate"] = t.conjugate;
        j["phase_t"] = t.phase_t();
        j["phase_s"] = t.phase_s();
        j["kernel_phase_sign"] = t.phase_sign;
        j["bath_signature"] = t.bath_signature();
        j["scaling"] = t.scaling;
        j["factorizable"] = t.factorizable;
        if (t.factorizable) j["spectator"] = t.label_name(t.spectator);
        arr.push_back(j);
    }
    return arr.dump(1);
}

}  // namespace ptcl
