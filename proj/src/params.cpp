#include "orbitlab/params.hpp"

#include "orbitlab/errors.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <sstream>
#include <stdexcept>

namespace orbitlab {

namespace {

void ensure(bool cond, const std::string& what) {
    if (!cond) throw std::logic_error(what);
}

bool sign_order(const Signs& a, const Signs& b) {
    // + before -
    for (size_t i = 0; i < a.size() && i < b.size(); ++i)
        if (a[i] != b[i]) return a[i] > b[i];
    return a.size() < b.size();
}

Vec half_sum(const RootSystemView& s, const std::vector<int>& idx) {
    Vec r = zeros(s.dim);
    for (int i : idx) r = add(r, s.roots[i]);
    return scale(frac(1, 2), r);
}

Mat reflection_matrix(const Vec& root, const Vec& coroot) {
    int n = static_cast<int>(root.size());
    Mat m = Mat::identity(n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) m(i, j) -= root[i] * coroot[j];
    return m;
}

// columns of a basis as a matrix
Mat columns(const std::vector<Vec>& basis, int dim) {
    Mat m(dim, static_cast<int>(basis.size()));
    for (size_t j = 0; j < basis.size(); ++j)
        for (int i = 0; i < dim; ++i) m(i, static_cast<int>(j)) = basis[j][i];
    return m;
}

// basis of the kernel of k restricted to span(basis), or to V when basis is empty
std::vector<Vec> kernel_within(const Mat& k, const std::vector<Vec>& basis, int dim) {
    if (basis.empty()) return nullspace(k);
    Mat b = columns(basis, dim);
    std::vector<Vec> out;
    for (const auto& c : nullspace(k * b)) out.push_back(b * c);
    return out;
}

// Fourier-Motzkin: a point y with a.y >= b for every row, or nothing.
std::optional<Vec> fm_point(const std::vector<std::pair<Vec, Q>>& rows, int d) {
    if (d == 0) {
        for (const auto& r : rows)
            if (r.second > 0) return std::nullopt;
        return Vec{};
    }
    int v = d - 1;
    std::vector<std::pair<Vec, Q>> lower, upper, next;
    for (const auto& r : rows) {
        int s = sgn(r.first[v]);
        if (s > 0) lower.push_back(r);
        else if (s < 0) upper.push_back(r);
        else next.push_back({Vec(r.first.begin(), r.first.begin() + v), r.second});
    }
    for (const auto& p : lower)
        for (const auto& n : upper) {
            Q cp = p.first[v], cn = -n.first[v];
            Vec a(v);
            for (int i = 0; i < v; ++i) a[i] = cn * p.first[i] + cp * n.first[i];
            next.push_back({a, cn * p.second + cp * n.second});
        }
    auto rest = fm_point(next, v);
    if (!rest) return std::nullopt;
    auto bound = [&](const std::pair<Vec, Q>& r) -> Q {
        Q acc = r.second;
        for (int i = 0; i < v; ++i) acc -= r.first[i] * (*rest)[i];
        return acc / r.first[v];
    };
    std::optional<Q> lo, hi;
    for (const auto& p : lower) {
        Q b = bound(p);
        if (!lo || b > *lo) lo = b;
    }
    for (const auto& n : upper) {
        Q b = bound(n);
        if (!hi || b < *hi) hi = b;
    }
    Q x = 0;
    if (lo && hi) x = (*lo + *hi) / 2;
    else if (lo) x = *lo;
    else if (hi) x = *hi;
    Vec out = *rest;
    out.push_back(x);
    return out;
}

bool is_lex_positive(const Vec& v) {
    for (const auto& x : v)
        if (x != 0) return x > 0;
    return false;
}

}  // namespace

Vec RootSystemView::t_part(const Vec& v) const { return scale(frac(1, 2), sub(v, sigma * v)); }
Vec RootSystemView::a_part(const Vec& v) const { return scale(frac(1, 2), add(v, sigma * v)); }

bool RootSystemView::in_ambient(const Vec& v) const {
    if (static_cast<int>(v.size()) != dim) return false;
    if (ambient.empty()) return true;
    return in_span(ambient, v, dim);
}

int RootSystemView::index_of(const Vec& root) const {
    for (int i = 0; i < num_roots(); ++i)
        if (roots[i] == root) return i;
    return -1;
}

Vec RootSystemView::reflect(int i, const Vec& v) const { return sub(v, scale(pairing(v, i), roots[i])); }

RootSystemView view_of(const CartanFrame& f) {
    const RootDatum& rd = f.rd();
    RootSystemView s;
    s.group = f.group;
    s.name = f.name;
    s.dim = rd.dim();
    s.sigma = f.sigma;
    s.form = rd.form();
    s.roots = rd.roots();
    for (int i = 0; i < rd.num_roots(); ++i) {
        s.coroots.push_back(rd.coroot(i));
        s.source_root.push_back(i);
    }
    s.labels = f.labels;
    s.npos = rd.num_positive();
    s.kernel_lattice = f.kernel_lattice;
    s.has_kernel_lattice = true;
    s.datum = f.datum;
    return s;
}

bool vanishes_on(const RootSystemView& s, const Vec& lambda, int alpha) {
    return s.pairing(s.t_part(lambda), alpha) == 0 && s.pairing(s.a_part(lambda), alpha) == 0;
}

std::vector<int> centralizer_roots(const RootSystemView& s, const Vec& lambda) {
    std::vector<int> out;
    for (int i = 0; i < s.npos; ++i)
        if (vanishes_on(s, lambda, i)) out.push_back(i);
    return out;
}

std::vector<int> imaginary_roots_of(const RootSystemView& s, const Vec& lambda) {
    std::vector<int> out;
    Vec m = s.t_part(lambda);
    for (int i = 0; i < s.npos; ++i)
        if (is_imaginary(s.labels[i]) && s.pairing(m, i) == 0) out.push_back(i);
    return out;
}

std::string signs_string(const Signs& s) {
    std::string out;
    for (int x : s) out += x > 0 ? '+' : '-';
    return out;
}

Signs parse_signs(const std::string& s) {
    Signs out;
    for (char c : s) {
        if (c == '+') out.push_back(1);
        else if (c == '-') out.push_back(-1);
        else if (c == ',' || c == ' ') continue;
        else fail(Errc::Usage, "bad chamber sign '" + std::string(1, c) + "'");
    }
    return out;
}

Vec ParamTilde::rho_f() const {
    Vec r = zeros(sys->dim);
    for (size_t k = 0; k < imag.size(); ++k) r = add(r, scale(Q(fplus[k]), sys->roots[imag[k]]));
    return scale(frac(1, 2), r);
}

ParamTilde make_param(std::shared_ptr<const RootSystemView> sys, const Vec& lambda, const Signs& fplus) {
    if (!sys->in_ambient(lambda)) fail(Errc::DegenerateInput, "lambda " + to_string(lambda) + " is not a form on this Cartan subalgebra");
    ParamTilde pt;
    pt.sys = sys;
    pt.lambda = lambda;
    pt.imag = imaginary_roots_of(*sys, lambda);
    if (fplus.size() != pt.imag.size())
        fail(Errc::NotAChamber, "chamber needs " + std::to_string(pt.imag.size()) + " signs, got " +
                                    std::to_string(fplus.size()));
    for (int x : fplus)
        if (x != 1 && x != -1) fail(Errc::NotAChamber, "signs must be +1 or -1");
    pt.fplus = fplus;
    // the half sum of the selected roots is a witness point when the signs are realizable
    Vec rho = pt.rho_f();
    for (size_t k = 0; k < pt.imag.size(); ++k)
        if (sgn(sys->pairing(rho, pt.imag[k])) != fplus[k])
            fail(Errc::NotAChamber, "sign vector " + signs_string(fplus) + " is not a chamber");
    return pt;
}

std::vector<int> simple_of(const RootSystemView& s, const std::vector<int>& positive) {
    std::set<Vec> pos;
    for (int i : positive) pos.insert(s.roots[i]);
    std::vector<int> out;
    for (int i : positive) {
        bool decomposable = false;
        for (int j : positive) {
            if (j == i) continue;
            if (pos.count(sub(s.roots[i], s.roots[j]))) {
                decomposable = true;
                break;
            }
        }
        if (!decomposable) out.push_back(i);
    }
    return out;
}

namespace {

bool chamber_regular(const RootSystemView& s, const std::vector<int>& imag, const Signs& signs) {
    std::vector<int> pos;
    for (size_t k = 0; k < imag.size(); ++k) pos.push_back(signs[k] > 0 ? imag[k] : s.negative_of(imag[k]));
    for (int i : simple_of(s, pos))
        if (s.labels[i] != RootLabel::ImaginaryNoncompact) return false;
    return true;
}

}  // namespace

std::vector<ChamberInfo> enumerate_chambers(const RootSystemView& s, const Vec& lambda) {
    auto imag = imaginary_roots_of(s, lambda);
    Vec start = zeros(s.dim);
    for (int i : imag) start = add(start, s.roots[i]);
    start = scale(frac(1, 2), start);
    std::set<Vec> seen{start};
    std::vector<Vec> orbit{start};
    for (size_t head = 0; head < orbit.size(); ++head)
        for (int i : imag) {
            Vec v = s.reflect(i, orbit[head]);
            if (seen.insert(v).second) orbit.push_back(v);
        }
    std::vector<ChamberInfo> out;
    for (const auto& v : orbit) {
        ChamberInfo c;
        c.rho = v;
        for (int i : imag) c.fplus.push_back(sgn(s.pairing(v, i)));
        c.regular = chamber_regular(s, imag, c.fplus);
        out.push_back(c);
    }
    std::sort(out.begin(), out.end(), [](const ChamberInfo& a, const ChamberInfo& b) { return sign_order(a.fplus, b.fplus); });
    return out;
}

bool is_regular_chamber(const ParamTilde& pt) { return chamber_regular(*pt.sys, pt.imag, pt.fplus); }

std::vector<AChamber> enumerate_a_chambers(const RootSystemView& s, const std::vector<int>& subsystem) {
    std::vector<AChamber> out;
    if (subsystem.empty()) {
        AChamber c;
        c.point = zeros(s.dim);
        out.push_back(c);
        return out;
    }
    auto basis = kernel_within(s.sigma - Mat::identity(s.dim), s.ambient, s.dim);
    int d = static_cast<int>(basis.size());
    std::vector<Vec> normals;
    for (int i : subsystem) {
        Vec n(d);
        for (int j = 0; j < d; ++j) n[j] = dot(basis[j], s.coroots[i]);
        if (is_zero(n)) fail(Errc::InconsistentFrame, "imaginary root in a root subset without imaginary roots");
        normals.push_back(n);
    }
    int k = static_cast<int>(subsystem.size());
    if (k > 16) fail(Errc::Unsupported, "too many restricted roots");
    for (long mask = 0; mask < (1L << k); ++mask) {
        Signs signs(k);
        std::vector<std::pair<Vec, Q>> rows;
        for (int i = 0; i < k; ++i) {
            signs[i] = (mask >> (k - 1 - i)) & 1 ? -1 : 1;
            rows.push_back({scale(Q(signs[i]), normals[i]), Q(1)});
        }
        auto y = fm_point(rows, d);
        if (!y) continue;
        AChamber c;
        c.roots = subsystem;
        c.signs = signs;
        c.point = zeros(s.dim);
        for (int j = 0; j < d; ++j) c.point = add(c.point, scale((*y)[j], basis[j]));
        out.push_back(c);
    }
    return out;
}

std::vector<int> stabilizer_subsystem(const ParamTilde& pt) {
    Vec rho = pt.rho_f();
    std::vector<int> out;
    for (int i : centralizer_roots(*pt.sys, pt.lambda))
        if (pt.sys->pairing(rho, i) == 0) out.push_back(i);
    return out;
}

Q epsilon_for(const RootDatum& rd, const Vec& nu, const Vec& rho_prime) {
    std::optional<Q> best;
    for (const auto& a : rd.automorphisms()) {
        Vec anu = a * nu, arho = a * rho_prime;
        if (anu == nu || arho == rho_prime) continue;
        // a nu - nu = t (rho' - a rho')
        Vec d = sub(anu, nu), e = sub(rho_prime, arho);
        std::optional<Q> t;
        bool ok = true;
        for (size_t i = 0; i < d.size() && ok; ++i) {
            if (e[i] == 0) {
                if (d[i] != 0) ok = false;
                continue;
            }
            Q ti = d[i] / e[i];
            if (t && *t != ti) ok = false;
            t = ti;
        }
        if (!ok || !t || *t <= 0) continue;
        if (!best || *t < *best) best = *t;
    }
    return best ? *best / 2 : Q(1);
}

Vec PositiveSystemData::lambda_t(const Q& t) const {
    // mu + 2 t rho(g(nu_+)) + nu + t eps rho'
    Vec mu = sub(mu_plus, scale(Q(2), rho_nu_plus));
    Vec nu = sub(nu_plus, scale(epsilon, rho_prime));
    return add(add(mu, scale(2 * t, rho_nu_plus)), add(nu, scale(t * epsilon, rho_prime)));
}

std::vector<Mat> real_automorphisms(const RootSystemView& s) {
    std::vector<Mat> out;
    for (const auto& a : s.datum->automorphisms())
        if (a * s.sigma == s.sigma * a) out.push_back(a);
    return out;
}

bool stabilizer_identity(const ParamTilde& pt, const PositiveSystemData& psd, const Q& t) {
    Vec lt = psd.lambda_t(t);
    for (const auto& a : real_automorphisms(*pt.sys)) {
        bool left = a * lt == lt;
        bool right = a * pt.lambda == pt.lambda && a * psd.rho_f == psd.rho_f && a * psd.rho_prime == psd.rho_prime;
        if (left != right) return false;
    }
    return true;
}

PositiveSystemData build_positive_system(const ParamTilde& pt, const AChamber& a) {
    const RootSystemView& s = *pt.sys;
    PositiveSystemData p;
    p.rho_f = pt.rho_f();
    auto sub_roots = stabilizer_subsystem(pt);
    if (a.roots != sub_roots || a.signs.size() != sub_roots.size())
        fail(Errc::NotAChamber, "a-chamber does not belong to g(lambda)(i rho_F+)");
    if (s.t_part(a.point) != zeros(s.dim) && !sub_roots.empty())
        fail(Errc::NotAChamber, "a-chamber point is not hyperbolic");
    for (size_t k = 0; k < sub_roots.size(); ++k)
        if (sgn(s.pairing(a.point, sub_roots[k])) != a.signs[k]) fail(Errc::NotAChamber, "a-chamber point off its chamber");
    p.a_chamber = a;

    std::vector<int> sub_pos;
    for (size_t k = 0; k < sub_roots.size(); ++k)
        sub_pos.push_back(a.signs[k] > 0 ? sub_roots[k] : s.negative_of(sub_roots[k]));
    p.rho_prime = half_sum(s, sub_pos);

    Vec mu = pt.mu(), nu = pt.nu();
    p.epsilon = epsilon_for(*s.datum, nu, p.rho_prime);
    p.nu_plus = add(nu, scale(p.epsilon, p.rho_prime));

    // R+(g(nu_+)) from mu, then rho_F+
    std::vector<int> gnu_pos;
    for (int i = 0; i < s.npos; ++i) {
        if (s.pairing(p.nu_plus, i) != 0) continue;
        int sg = sgn(s.pairing(mu, i));
        if (sg == 0) sg = sgn(s.pairing(p.rho_f, i));
        ensure(sg != 0, "root of g(nu_+) vanishing on mu and rho_F+");
        gnu_pos.push_back(sg > 0 ? i : s.negative_of(i));
    }
    p.rho_nu_plus = half_sum(s, gnu_pos);
    ensure(s.a_part(p.rho_nu_plus) == zeros(s.dim), "rho of g(nu_+) is not elliptic");
    p.mu_plus = add(mu, scale(Q(2), p.rho_nu_plus));
    p.lambda_plus = add(p.mu_plus, p.nu_plus);

    std::set<int> gnu_set(gnu_pos.begin(), gnu_pos.end());
    for (int i = 0; i < s.npos; ++i) {
        int sg = sgn(s.pairing(p.nu_plus, i));
        if (sg == 0) sg = gnu_set.count(i) ? 1 : -1;
        p.rplus_g_h.push_back(sg > 0 ? i : s.negative_of(i));
    }
    std::sort(p.rplus_g_h.begin(), p.rplus_g_h.end());
    p.rho_g_h = half_sum(s, p.rplus_g_h);

    for (int i = 0; i < s.npos; ++i) {
        int sg = sgn(s.pairing(nu, i));
        if (sg == 0) sg = sgn(s.pairing(mu, i));
        if (sg == 0) sg = sgn(s.pairing(p.rho_f, i));
        if (sg != 0) p.rplus_lambdatilde.push_back(sg > 0 ? i : s.negative_of(i));
    }
    std::sort(p.rplus_lambdatilde.begin(), p.rplus_lambdatilde.end());
    p.rplus_lambdatilde_aplus = p.rplus_lambdatilde;
    for (int i : sub_pos) p.rplus_lambdatilde_aplus.push_back(i);
    std::sort(p.rplus_lambdatilde_aplus.begin(), p.rplus_lambdatilde_aplus.end());

    std::vector<int> can;
    for (int i : p.rplus_lambdatilde)
        if (s.pairing(nu, i) == 0) can.push_back(i);
    p.rho_can = half_sum(s, can);
    p.lambda_can = add(add(mu, scale(Q(2), p.rho_can)), nu);

    // invariants
    ensure(static_cast<int>(p.rplus_lambdatilde_aplus.size()) == s.npos, "R+ for (lambda~, a+) is not a positive system");
    for (int i = 0; i < s.num_roots(); ++i) ensure(!vanishes_on(s, p.lambda_plus, i), "lambda_+ is not regular");
    std::vector<int> gcan;
    for (int i = 0; i < s.npos; ++i)
        if (vanishes_on(s, p.lambda_can, i)) gcan.push_back(i);
    ensure(gcan == sub_roots, "g(lambda_can) differs from g(lambda)(i rho_F+)");
    ensure(stabilizer_identity(pt, p, Q(1)) && stabilizer_identity(pt, p, frac(1, 2)), "stabilizer identity fails");
    return p;
}

PositiveSystemData build_positive_system(const ParamTilde& pt) {
    auto chambers = enumerate_a_chambers(*pt.sys, stabilizer_subsystem(pt));
    return build_positive_system(pt, chambers.front());
}

bool is_integral_regG(const ParamTilde& pt) {
    const RootSystemView& s = *pt.sys;
    if (!s.has_kernel_lattice) fail(Errc::Unsupported, "no kernel lattice for " + s.name);
    std::vector<int> pos;
    for (int i = 0; i < s.npos; ++i) pos.push_back(i);
    Vec shifted = add(s.t_part(pt.lambda), half_sum(s, pos));
    for (const auto& z : s.kernel_lattice)
        if (dot(shifted, z).get_den() != 1) return false;
    return true;
}

ParamFlags classify_param(const ParamTilde& pt) {
    const RootSystemView& s = *pt.sys;
    ParamFlags f;
    f.in_reg = is_regular_chamber(pt);
    bool no_real = true, all_imag = true, all_nc = true;
    for (int i : centralizer_roots(s, pt.lambda)) {
        if (s.labels[i] == RootLabel::Real) no_real = false;
        if (!is_imaginary(s.labels[i])) all_imag = false;
        if (s.labels[i] != RootLabel::ImaginaryNoncompact) all_nc = false;
    }
    f.in_fond = f.in_reg && no_real;
    f.in_I = f.in_fond && all_imag;
    f.in_Inc = f.in_fond && all_nc;
    f.integral = s.has_kernel_lattice && is_integral_regG(pt);
    f.in_regG = f.in_reg && f.integral;
    return f;
}

bool EllipticPoint::is_identity_map() const { return gamma == Mat::identity(gamma.rows); }

EllipticPoint identity_point(int dim) {
    EllipticPoint e;
    e.gamma = Mat::identity(dim);
    e.h = zeros(dim);
    return e;
}

EllipticPoint parse_elliptic(const GroupEntry& g, const CartanFrame& f, const std::string& spec) {
    const RootDatum& rd = f.rd();
    EllipticPoint e = identity_point(rd.dim());
    e.label = spec.empty() ? "id" : spec;
    std::stringstream ss(spec);
    std::string part;
    while (std::getline(ss, part, ';')) {
        auto b = part.find_first_not_of(' ');
        if (b == std::string::npos) continue;
        part = part.substr(b, part.find_last_not_of(' ') - b + 1);
        if (part == "id") continue;
        if (part.rfind("h=", 0) == 0) {
            // entries are multiples of pi; an explicit "pi" suffix is accepted
            std::string text = part.substr(2);
            for (auto at = text.find("pi"); at != std::string::npos; at = text.find("pi")) text.erase(at, 2);
            Vec h = parse_vector(text);
            if (static_cast<int>(h.size()) != rd.dim()) fail(Errc::Usage, "elliptic h needs " + std::to_string(rd.dim()) + " entries");
            e.h = add(e.h, h);
        } else if (part.rfind("w=", 0) == 0) {
            e.gamma = e.gamma * signed_map_matrix(rd, part.substr(2));
        } else {
            bool found = false;
            for (const auto& a : g.automorphisms)
                if (a.name == part) {
                    e.gamma = e.gamma * a.matrix;
                    found = true;
                }
            if (!found) fail(Errc::Usage, "unknown elliptic component '" + part + "'");
        }
    }
    check_elliptic(view_of(f), e);
    return e;
}

void check_elliptic(const RootSystemView& s, const EllipticPoint& e) {
    if (e.gamma.rows != s.dim || static_cast<int>(e.h.size()) != s.dim) fail(Errc::Usage, "elliptic point of wrong dimension");
    if (e.gamma * s.sigma != s.sigma * e.gamma) fail(Errc::Usage, "elliptic root map does not commute with sigma");
    for (const auto& r : s.roots)
        if (s.index_of(e.gamma * r) < 0) fail(Errc::Usage, "elliptic root map does not permute roots");
    // hyperbolic part of h: exp(i pi h_a) lies in G only on integral combinations of real coroots
    Vec ha = scale(frac(1, 2), add(e.h, transpose(s.sigma) * e.h));
    if (is_zero(ha)) return;
    std::vector<Vec> real_coroots;
    for (int i = 0; i < s.npos; ++i)
        if (s.labels[i] == RootLabel::Real) real_coroots.push_back(s.coroots[i]);
    auto basis = row_basis(real_coroots, s.dim);
    if (basis.empty()) fail(Errc::Usage, "elliptic point has a hyperbolic part");
    Mat b = columns(basis, s.dim);
    Vec c;
    if (!solve(b, ha, c) || b * c != ha) fail(Errc::Usage, "elliptic point has a hyperbolic part");
    for (const auto& x : c)
        if (x.get_den() != 1) fail(Errc::Usage, "hyperbolic part not in the lattice of real coroots");
}

EllipticPoint conjugate_point(const EllipticPoint& e, const Mat& a) {
    EllipticPoint out;
    out.label = e.label + "^a";
    out.gamma = a * e.gamma * inverse(a);
    out.h = transpose(inverse(a)) * e.h;
    return out;
}

RootSystemView centralizer_view(const RootSystemView& s, const EllipticPoint& e) {
    check_elliptic(s, e);
    RootSystemView c;
    c.group = s.group;
    c.name = s.name + "(e)";
    c.dim = s.dim;
    c.sigma = s.sigma;
    c.form = s.form;
    std::vector<Vec> pos_roots, pos_coroots;
    std::vector<RootLabel> pos_labels;
    std::vector<int> pos_source;
    if (e.is_identity_map()) {
        for (int i = 0; i < s.npos; ++i) {
            if (e.phase(s.roots[i]).get_den() != 1 || e.phase(s.roots[i]).get_num() % 2 != 0) continue;
            pos_roots.push_back(s.roots[i]);
            pos_coroots.push_back(s.coroots[i]);
            pos_labels.push_back(s.labels[i]);
            pos_source.push_back(s.source_root[i]);
        }
        c.ambient = s.ambient;
        c.kernel_lattice = s.kernel_lattice;
        c.has_kernel_lattice = s.has_kernel_lattice;
    } else {
        std::vector<bool> done(s.num_roots(), false);
        for (int i = 0; i < s.num_roots(); ++i) {
            if (done[i]) continue;
            std::vector<int> orbit;
            int j = i;
            do {
                orbit.push_back(j);
                done[j] = true;
                j = s.index_of(e.gamma * s.roots[j]);
            } while (j != i);
            for (size_t x = 0; x < orbit.size(); ++x)
                for (size_t y = x + 1; y < orbit.size(); ++y)
                    if (dot(s.roots[orbit[x]], s.form * s.roots[orbit[y]]) != 0)
                        fail(Errc::Unsupported, "root orbit of the elliptic point is not orthogonal");
            Q total = 0;
            Vec mean = zeros(s.dim), co = zeros(s.dim);
            for (int k : orbit) {
                total += e.phase(s.roots[k]);
                mean = add(mean, s.roots[k]);
                co = add(co, s.coroots[k]);
            }
            if (total.get_den() != 1 || total.get_num() % 2 != 0) continue;
            mean = scale(Q(1) / Q(static_cast<long>(orbit.size())), mean);
            if (!is_lex_positive(mean)) continue;
            Vec smean = s.sigma * mean;
            RootLabel lab;
            if (smean == mean) {
                lab = RootLabel::Real;
            } else if (smean == neg(mean)) {
                lab = s.labels[orbit[0]];
                for (int k : orbit)
                    if (s.labels[k] != lab) fail(Errc::Unsupported, "folded imaginary root from mixed labels");
                if (!is_imaginary(lab)) fail(Errc::Unsupported, "folded imaginary root from complex roots");
            } else {
                lab = RootLabel::Complex;
            }
            pos_roots.push_back(mean);
            pos_coroots.push_back(co);
            pos_labels.push_back(lab);
            pos_source.push_back(s.source_root[*std::min_element(orbit.begin(), orbit.end())]);
        }
        c.ambient = kernel_within(e.gamma - Mat::identity(s.dim), s.ambient, s.dim);
    }
    c.npos = static_cast<int>(pos_roots.size());
    c.roots = pos_roots;
    c.coroots = pos_coroots;
    c.labels = pos_labels;
    c.source_root = pos_source;
    for (int i = 0; i < c.npos; ++i) {
        c.roots.push_back(neg(pos_roots[i]));
        c.coroots.push_back(neg(pos_coroots[i]));
        c.labels.push_back(pos_labels[i]);
        c.source_root.push_back(s.negative_of(pos_source[i]));
    }
    c.datum = std::make_shared<RootDatum>(RootDatum::subsystem(s.dim, s.form, pos_roots, pos_coroots));
    return c;
}

bool fixes_param(const EllipticPoint& e, const ParamTilde& pt) {
    return e.gamma * pt.lambda == pt.lambda && e.gamma * pt.rho_f() == pt.rho_f();
}

std::optional<AChamber> stable_a_chamber(const ParamTilde& pt, const EllipticPoint& e) {
    const RootSystemView& s = *pt.sys;
    for (const auto& c : enumerate_a_chambers(s, stabilizer_subsystem(pt))) {
        Vec x = e.gamma * c.point;
        bool same = true;
        for (size_t k = 0; k < c.roots.size() && same; ++k)
            if (sgn(s.pairing(x, c.roots[k])) != c.signs[k]) same = false;
        if (same) return c;
    }
    return std::nullopt;
}

ParamTilde descend_at_e(const ParamTilde& pt, const EllipticPoint& e) {
    check_elliptic(*pt.sys, e);
    if (!fixes_param(e, pt)) fail(Errc::NotFixed, "the elliptic point does not fix the parameter");
    if (!stable_a_chamber(pt, e)) fail(Errc::NoStableChamber, "no a-chamber of g(lambda)(i rho_F+) is stable under e");
    auto ge = std::make_shared<RootSystemView>(centralizer_view(*pt.sys, e));
    Vec rho = pt.rho_f();
    auto imag = imaginary_roots_of(*ge, pt.lambda);
    Signs signs;
    for (int i : imag) {
        int sg = sgn(ge->pairing(rho, i));
        ensure(sg != 0, "rho_F+ is singular for an imaginary root of g(e)(lambda)");
        signs.push_back(sg);
    }
    return make_param(ge, pt.lambda, signs);
}

std::vector<Mat> weyl_of(const RootSystemView& s, const std::vector<int>& positive_roots) {
    std::vector<Mat> gens;
    for (int i : positive_roots) gens.push_back(reflection_matrix(s.roots[i], s.coroots[i]));
    return generate_group(gens, s.dim);
}

FiberCount count_descent_fiber(const ParamTilde& pt, const EllipticPoint& e) {
    if (!classify_param(pt).in_I) fail(Errc::DescentUndefined, "the parameter is not in the I-set");
    ParamTilde d;
    try {
        d = descend_at_e(pt, e);
    } catch (const Error& err) {
        if (err.code() == Errc::NoStableChamber || err.code() == Errc::NotFixed)
            fail(Errc::DescentUndefined, std::string("descent does not exist: ") + err.what());
        throw;
    }
    const RootSystemView& s = *pt.sys;
    FiberCount out;
    for (const auto& ch : enumerate_chambers(s, pt.lambda)) {
        ParamTilde other = make_param(pt.sys, pt.lambda, ch.fplus);
        if (!fixes_param(e, other) || !stable_a_chamber(other, e)) continue;
        ParamTilde od = descend_at_e(other, e);
        if (od.fplus != d.fplus) continue;
        ++out.chamber_fiber;
        if (classify_param(other).in_I) ++out.enumerated;
    }
    for (const auto& w : weyl_of(s, centralizer_roots(s, pt.lambda)))
        if (w * e.gamma == e.gamma * w) ++out.w_commutant;
    out.w_centralizer = static_cast<long>(weyl_of(*d.sys, centralizer_roots(*d.sys, pt.lambda)).size());
    out.formula_integral = out.w_commutant % out.w_centralizer == 0;
    out.formula = out.w_commutant / out.w_centralizer;
    return out;
}

OrbitSupportDescriptor support_orbits_ssInc(const ParamTilde& pt, const GroupEntry& g, const CartanFrame& f) {
    const RootSystemView& s = *pt.sys;
    auto roots = centralizer_roots(s, pt.lambda);
    for (size_t x = 0; x < roots.size(); ++x) {
        if (s.labels[roots[x]] != RootLabel::ImaginaryNoncompact)
            fail(Errc::UnsupportedStabilizer, "g(lambda) is not a product of sl(2,R) factors");
        for (size_t y = x + 1; y < roots.size(); ++y)
            if (dot(s.roots[roots[x]], s.form * s.roots[roots[y]]) != 0)
                fail(Errc::UnsupportedStabilizer, "g(lambda) is not a product of sl(2,R) factors");
    }
    OrbitSupportDescriptor d;
    d.lambda = pt.lambda;
    d.factor_roots = roots;
    d.half_cones = pt.fplus;
    std::vector<Mat> maps = f.realized_weyl;
    for (const auto& a : g.automorphisms)
        if (a.matrix * f.sigma == f.sigma * a.matrix)
            for (const auto& w : f.realized_weyl) maps.push_back(a.matrix * w);
    d.orbit_key = d.half_cones;
    Vec rho = pt.rho_f();
    for (const auto& w : maps) {
        if (w * pt.lambda != pt.lambda) continue;
        Vec r = w * rho;
        Signs sg;
        for (int i : roots) sg.push_back(sgn(s.pairing(r, i)));
        if (sign_order(sg, d.orbit_key)) d.orbit_key = sg;
    }
    return d;
}

ParamTilde act_on_param(const Mat& a, const ParamTilde& pt) {
    Vec lam = a * pt.lambda;
    Vec rho = a * pt.rho_f();
    auto imag = imaginary_roots_of(*pt.sys, lam);
    Signs sg;
    for (int i : imag) sg.push_back(sgn(pt.sys->pairing(rho, i)));
    return make_param(pt.sys, lam, sg);
}

}  // namespace orbitlab
