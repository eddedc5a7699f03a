#include "orbitlab/metaplectic.hpp"

#include "orbitlab/errors.hpp"

#include <algorithm>
#include <map>
#include <set>

namespace orbitlab {

namespace {

bool is_integer(const Q& q) { return q.get_den() == 1; }

Cyc half_phase(const Q& reduced) { return Cyc::exp_i_pi(reduced / 2); }

int sign_pow(long k) { return (k % 2 == 0) ? 1 : -1; }

// (unreduced - reduced) / 2: the number of 2pi shifts away from the canonical window
long shifts(const Q& theta) {
    Q k = (theta - reduce_angle(theta)) / 2;
    return k.get_num().get_si();
}

}  // namespace

int orientation_of_lift(const LiftGenerator& g) {
    int s = 1;
    for (const auto& [a, n] : g.alpha) {
        if (n < 0 || !in_two_pi_z(a) || a == 0) fail(Errc::MalformedGenerator, "alpha part " + to_string(a) + " not in 2Z \\ {0}");
        Q half = a / 2;
        if (n % 2 != 0 && half.get_num().get_si() % 2 != 0) s = -s;
    }
    for (const auto& [b, n] : g.beta) {
        if (n < 0 || in_two_pi_z(b)) fail(Errc::MalformedGenerator, "beta part " + to_string(b) + " lies in 2Z");
        if (n % 2 != 0 && sin_sign(b / 2) < 0) s = -s;
    }
    return s;
}

int orientation_of_inf(const std::vector<Q>& betas) {
    int s = 1;
    for (const auto& b : betas) {
        if (b == 0) fail(Errc::ZeroAngle, "zero angle in an infinitesimal block");
        s *= sgn(b);
    }
    return s;
}

int SemisimpleElement::dim() const {
    int d = 0;
    for (const auto& p : pieces) d += p.dim();
    return d;
}

std::vector<Q> elliptic_angles(const SymplecticPiece& p) {
    if (p.kind == PieceKind::ComplexQuad) return {reduce_angle(p.angle), reduce_angle(-p.angle)};
    return {reduce_angle(p.angle)};
}

void check_element(const SemisimpleElement& x) {
    for (const auto& p : x.pieces) {
        if (p.scale <= 0) fail(Errc::NonSemisimple, "scale must be positive");
        switch (p.kind) {
            case PieceKind::Plane:
                if (p.scale != 1) fail(Errc::NonSemisimple, "a plane piece is elliptic");
                break;
            case PieceKind::RealPair:
                if (!is_integer(p.angle)) fail(Errc::NonSemisimple, "real pair needs a sign eps = +-1");
                if (p.scale <= 1) fail(Errc::NonSemisimple, "real pair needs scale > 1");
                break;
            case PieceKind::ComplexQuad:
                if (is_integer(p.angle)) fail(Errc::NonSemisimple, "complex quadruple needs a non-real rotation");
                if (p.scale <= 1) fail(Errc::NonSemisimple, "complex quadruple needs scale > 1");
                break;
        }
        auto ell = elliptic_angles(p);
        if (p.generator.size() != ell.size()) fail(Errc::MalformedGenerator, "wrong number of generator angles");
        for (size_t k = 0; k < ell.size(); ++k)
            if (!in_two_pi_z(p.generator[k] - ell[k]))
                fail(Errc::MalformedGenerator, "generator angle " + to_string(p.generator[k]) + " does not exponentiate to the element");
    }
}

SemisimpleElement canonical_lift(const SemisimpleElement& x) {
    SemisimpleElement c = x;
    for (auto& p : c.pieces) p.generator = elliptic_angles(p);
    return c;
}

SemisimpleElement other_lift(const SemisimpleElement& x) {
    SemisimpleElement c = x;
    if (!c.pieces.empty()) c.pieces[0].generator[0] += 2;
    return c;
}

LiftGenerator lift_generator(const SemisimpleElement& x) {
    check_element(x);
    LiftGenerator g;
    for (const auto& p : x.pieces)
        for (const auto& t : p.generator) {
            // E = Rot(-t) in (P, Q), Rot(t) in (Q, P)
            Q b = p.reversed ? t : Q(-t);
            if (in_two_pi_z(b)) {
                if (b != 0) g.alpha.emplace_back(b, 1);
            } else {
                g.beta.emplace_back(b, 1);
            }
        }
    return g;
}

int orientation_ratio(const SemisimpleElement& x) {
    int s = orientation_of_lift(lift_generator(x));
    for (const auto& p : x.pieces)
        for (const auto& t : p.generator)
            if (p.reversed && !in_two_pi_z(t)) s = -s;  // Q ^ P = -O(B)
    return s;
}

int sheet_of(const SemisimpleElement& x) { return orientation_ratio(x) * orientation_ratio(canonical_lift(x)); }

Cyc delta_fn(const SemisimpleElement& x) {
    Cyc d(orientation_ratio(x));
    for (const auto& p : x.pieces)
        for (const auto& t : elliptic_angles(p)) d *= half_phase(t);
    return d;
}

Cyc phi_fn(const SemisimpleElement& x) {
    int ratio = orientation_ratio(x);
    Cyc denom(1);
    int moved_half = 0;
    for (const auto& p : x.pieces) {
        Q a = reduce_angle(p.angle);
        switch (p.kind) {
            case PieceKind::Plane:
                if (a == 0) break;
                ++moved_half;
                denom *= Cyc(sin_sign(a / 2)) * Cyc::i() * Cyc::exp_i_pi(-a / 2) * (Cyc(1) - Cyc::exp_i_pi(a));
                break;
            case PieceKind::RealPair: {
                if (a != 0) ++moved_half;
                Q eps = (a == 0) ? Q(1) : Q(-1);
                Q v = 1 - eps * p.scale * p.scale;
                denom *= Cyc(Q(abs(v) / p.scale));
                break;
            }
            case PieceKind::ComplexQuad: {
                moved_half += 2;
                Cyc z = Cyc(Q(p.scale * p.scale)) * Cyc::exp_i_pi(a);
                denom *= (Cyc(1) - z) * (Cyc(1) - z.conj()) / Cyc(Q(p.scale * p.scale));
                break;
            }
        }
    }
    // i^{-moved_half}
    Cyc ipow = Cyc::exp_i_pi(frac(-moved_half, 2));
    return Cyc(ratio) * ipow / denom;
}

LagrangianData lagrangian_data(const SemisimpleElement& x, const std::vector<PieceLagrangian>& L) {
    check_element(x);
    if (L.size() != x.pieces.size()) fail(Errc::Usage, "one Lagrangian choice per piece");
    LagrangianData out;
    std::map<Q, EigenSignature> sig;
    auto add_sig = [&](const Q& angle, int p, int q) {
        Q a = reduce_angle(angle);
        auto& e = sig[a];
        e.angle = a;
        e.p += p;
        e.q += q;
    };
    for (size_t k = 0; k < L.size(); ++k) {
        const auto& p = x.pieces[k];
        const auto& l = L[k];
        Q a = reduce_angle(p.angle);
        Q s = p.scale;
        switch (p.kind) {
            case PieceKind::Plane: {
                if (l.choice == 0 || l.choice == 1) {
                    Q z = l.choice == 0 ? a : reduce_angle(-a);
                    int neg = l.choice;
                    out.eigen.push_back({Q(1), z});
                    add_sig(z, 1 - neg, neg);
                    if (z != 0) {
                        out.sig.q_L += neg;
                        out.sig.q_L_elliptic += neg;
                    }
                } else if (l.choice == 2) {
                    if (!is_integer(a)) fail(Errc::Usage, "a real line is stable only where the element is +-1");
                    if (l.a.is_zero() && l.b.is_zero()) fail(Errc::Usage, "zero line");
                    // i B(v, conj v) for v = aP + bQ is i(a conj b - b conj a)
                    Cyc h = Cyc::i() * (l.a * l.b.conj() - l.b * l.a.conj());
                    if (!h.is_rational()) fail(Errc::Usage, "hermitian value not real");
                    int hs = sgn(h.rational_value());
                    out.eigen.push_back({Q(1), a});
                    add_sig(a, hs > 0 ? 1 : 0, hs < 0 ? 1 : 0);
                    if (a != 0 && hs < 0) {
                        out.sig.q_L += 1;
                        out.sig.q_L_elliptic += 1;
                    }
                } else {
                    fail(Errc::Usage, "plane Lagrangian choice out of range");
                }
                break;
            }
            case PieceKind::RealPair: {
                if (l.choice != 0 && l.choice != 1) fail(Errc::Usage, "real pair Lagrangian choice out of range");
                if (l.choice == 0) {
                    out.eigen.push_back({s, a});
                    if (a == 0) out.sig.n_L += 1;
                } else {
                    out.eigen.push_back({Q(1 / s), a});
                }
                add_sig(a, 0, 0);
                break;
            }
            case PieceKind::ComplexQuad: {
                Q na = reduce_angle(-a);
                switch (l.choice) {
                    case 0:
                        out.eigen.push_back({s, a});
                        out.eigen.push_back({s, na});
                        add_sig(a, 0, 0);
                        add_sig(na, 0, 0);
                        break;
                    case 1:
                        out.eigen.push_back({Q(1 / s), a});
                        out.eigen.push_back({Q(1 / s), na});
                        add_sig(a, 0, 0);
                        add_sig(na, 0, 0);
                        break;
                    case 2:
                    case 3: {
                        Q z = l.choice == 2 ? a : na;
                        out.eigen.push_back({s, z});
                        out.eigen.push_back({Q(1 / s), z});
                        add_sig(z, 1, 1);
                        out.sig.q_L += 1;
                        out.sig.q_L_elliptic += 1;
                        break;
                    }
                    default:
                        fail(Errc::Usage, "complex quadruple Lagrangian choice out of range");
                }
                break;
            }
        }
    }
    for (auto& [a, e] : sig) out.sig.eigen_sig.push_back(e);
    return out;
}

Cyc rho_lagrangian(const SemisimpleElement& x, const LagrangianData& L) {
    int qsum = 0;
    for (const auto& e : L.sig.eigen_sig) {
        if (e.p < 0 || e.q < 0) fail(Errc::InconsistentSignature, "negative signature count");
        if (e.angle != 0) qsum += e.q;
    }
    if (qsum != L.sig.q_L_elliptic) fail(Errc::InconsistentSignature, "q_L(x_e) differs from the sum of the q_z");
    if (2 * static_cast<int>(L.eigen.size()) != x.dim()) fail(Errc::InconsistentSignature, "L is not half-dimensional");
    Cyc r(sign_pow(L.sig.q_L_elliptic) * orientation_ratio(x));
    for (const auto& e : L.eigen) r *= Cyc(e.root_modulus) * half_phase(reduce_angle(e.angle));
    return r;
}

Cyc det_one_minus(const LagrangianData& L) {
    Cyc d(1);
    for (const auto& e : L.eigen) {
        if (e.root_modulus == 1 && reduce_angle(e.angle) == 0) continue;
        Cyc z = Cyc(Q(e.root_modulus * e.root_modulus)) * Cyc::exp_i_pi(e.angle);
        d *= Cyc(1) - z;
    }
    return d;
}

IdentityCheck check_identities(const SemisimpleElement& x, const std::vector<PieceLagrangian>& L) {
    IdentityCheck out;
    auto data = lagrangian_data(x, L);
    Cyc phi = phi_fn(x);
    Cyc rho = rho_lagrangian(x, data);
    Cyc det = det_one_minus(data);
    Cyc rhs = Cyc(sign_pow(data.sig.n_L + data.sig.q_L)) * rho / det;
    out.prop_b = (phi == rhs);

    Q modulus = 1;
    for (const auto& e : data.eigen) modulus *= e.root_modulus;
    Cyc unit = rho / Cyc(modulus);
    Cyc expect = delta_fn(x);
    for (const auto& e : data.sig.eigen_sig) expect *= Cyc::exp_i_pi(e.angle * e.q);
    out.prop_c = (unit == expect);

    if (x.pieces.empty()) {
        out.sheet_linear = true;
    } else {
        auto y = other_lift(x);
        auto ydata = lagrangian_data(y, L);
        out.sheet_linear = orientation_ratio(y) == -orientation_ratio(x) && delta_fn(y) == -delta_fn(x) &&
                           phi_fn(y) == -phi && rho_lagrangian(y, ydata) == -rho;
    }
    if (!out.prop_b) out.detail += "Phi=" + phi.str() + " rhs=" + rhs.str() + "; ";
    if (!out.prop_c) out.detail += "rho/|rho|=" + unit.str() + " expected=" + expect.str() + "; ";
    if (!out.sheet_linear) out.detail += "sheet flip not linear; ";
    return out;
}

MetaplecticCase random_case(std::mt19937_64& rng, int max_dim, int max_den) {
    auto uni = [&](long lo, long hi) { return std::uniform_int_distribution<long>(lo, hi)(rng); };
    // denominators dividing 24 keep every product inside one small cyclotomic field
    std::vector<long> dens;
    for (long d : {1, 2, 3, 4, 6, 8, 12, 24})
        if (d <= std::max(1, max_den)) dens.push_back(d);
    auto rand_angle = [&]() -> Q {
        long d = dens[uni(0, static_cast<long>(dens.size()) - 1)];
        return frac(uni(-2 * d, 2 * d), d);
    };
    auto rand_scale = [&]() -> Q {
        long d = uni(1, 4);
        return frac(d + uni(1, 3 * d), d);
    };
    auto gauss = [&]() -> Cyc { return Cyc(uni(-2, 2)) + Cyc(uni(-2, 2)) * Cyc::i(); };

    MetaplecticCase c;
    int dim = 2 * static_cast<int>(uni(0, max_dim / 2));
    int left = dim;
    while (left >= 2) {
        SymplecticPiece p;
        PieceLagrangian l;
        long kind = uni(0, 9);
        if (kind >= 7 && left >= 4) {
            p.kind = PieceKind::ComplexQuad;
            do p.angle = rand_angle();
            while (is_integer(p.angle));
            p.scale = rand_scale();
            l.choice = static_cast<int>(uni(0, 3));
        } else if (kind >= 5) {
            p.kind = PieceKind::RealPair;
            p.angle = uni(0, 1);
            p.scale = rand_scale();
            l.choice = static_cast<int>(uni(0, 1));
        } else {
            p.kind = PieceKind::Plane;
            p.angle = uni(0, 3) == 0 ? Q(uni(-2, 2)) : rand_angle();
            if (is_integer(p.angle) && uni(0, 1) == 0) {
                l.choice = 2;
                do {
                    l.a = gauss();
                    l.b = gauss();
                } while (l.a.is_zero() && l.b.is_zero());
            } else {
                l.choice = static_cast<int>(uni(0, 1));
            }
        }
        for (const auto& t : elliptic_angles(p)) p.generator.push_back(t + 2 * uni(-1, 1));
        p.reversed = uni(0, 1) == 1;
        left -= p.dim();
        c.x.pieces.push_back(p);
        c.L.push_back(l);
    }
    return c;
}

CorpusReport run_corpus(std::uint64_t seed, int cases) {
    std::mt19937_64 rng(seed);
    CorpusReport r;
    for (int k = 0; k < cases; ++k) {
        auto c = random_case(rng);
        auto chk = check_identities(c.x, c.L);
        ++r.cases;
        r.prop_b_pass += chk.prop_b;
        r.prop_c_pass += chk.prop_c;
        r.sheet_pass += chk.sheet_linear;
        if (!chk.detail.empty()) r.failures.push_back("case " + std::to_string(k) + ": " + chk.detail);
    }
    return r;
}

// ---- root line model ---------------------------------------------------------------

namespace {

struct RootAction {
    std::vector<int> perm;
    std::vector<Q> phase;
};

RootAction action_of(const RootSystemView& s, const EllipticPoint& e) {
    check_elliptic(s, e);
    RootAction a;
    for (int i = 0; i < s.num_roots(); ++i) {
        int j = s.index_of(e.gamma * s.roots[i]);
        if (j < 0) fail(Errc::Usage, "root map does not preserve the roots");
        a.perm.push_back(j);
        a.phase.push_back(e.phase(s.roots[i]));
    }
    return a;
}

// index of -sigma(alpha)
int partner(const RootSystemView& s, int i) {
    int j = s.index_of(neg(s.sigma * s.roots[i]));
    if (j < 0) fail(Errc::Usage, "sigma does not preserve the roots");
    return j;
}

// orbit of a root under the root map, in order
std::vector<int> orbit_of(const RootAction& a, int i) {
    std::vector<int> o{i};
    for (int j = a.perm[i]; j != i; j = a.perm[j]) o.push_back(j);
    return o;
}

Q orbit_angle(const RootAction& a, const std::vector<int>& o) {
    Q u = 0;
    for (int j : o) u += a.phase[j];
    return u;
}

// reduced angles of the m-th roots of exp(i pi u)
std::vector<Q> root_angles(const Q& u, int m) {
    std::vector<Q> out;
    for (int j = 0; j < m; ++j) out.push_back(reduce_angle((u + 2 * j) / m));
    return out;
}

Cyc half_product(const Q& u, int m) {
    Cyc c(1);
    for (const auto& t : root_angles(u, m)) c *= half_phase(t);
    return c;
}

int moved_count(const Q& u, int m) {
    int n = 0;
    for (const auto& t : root_angles(u, m)) n += (t != 0);
    return n;
}

void require_regular(const RootSystemView& s, const Vec& lambda, int i) {
    if (vanishes_on(s, lambda, i < s.npos ? i : s.negative_of(i)))
        fail(Errc::DegenerateInput, "B_lambda is degenerate on a root block");
}

// The positive vectors of i B_lambda(v, conj v) on g/h, grouped into orbits of the root
// map: imaginary lines of positive sign, and one line per class {alpha, -sigma alpha}.
std::vector<std::vector<int>> positive_orbits(const RootSystemView& s, const Vec& lambda, const RootAction& a) {
    std::vector<std::vector<int>> out;
    std::vector<bool> seen(s.num_roots(), false);
    for (int i = 0; i < s.num_roots(); ++i) {
        if (seen[i]) continue;
        require_regular(s, lambda, i);
        if (is_imaginary(s.labels[i < s.npos ? i : i - s.npos])) {
            auto o = orbit_of(a, i);
            for (int j : o) seen[j] = true;
            if (line_form_sign(s, lambda, i) > 0) out.push_back(o);
            continue;
        }
        // class of i is {i, partner(i)}; the orbit of its classes
        auto o = orbit_of(a, i);
        int p = partner(s, i);
        if (p != i && std::find(o.begin(), o.end(), p) != o.end())
            fail(Errc::Unsupported, "root map exchanges alpha and -conj(alpha) within an orbit");
        for (int j : o) {
            seen[j] = true;
            int pj = partner(s, j);
            seen[pj] = true;
            if (!in_two_pi_z(a.phase[j] - a.phase[pj]))
                fail(Errc::Unsupported, "the element is not elliptic on a complex root block");
        }
        out.push_back(o);
    }
    return out;
}

}  // namespace

LiftedElliptic iota_lift(int dim) { return {identity_point(dim), -1}; }

int line_form_sign(const RootSystemView& s, const Vec& lambda, int alpha) {
    int pos = alpha < s.npos ? alpha : s.negative_of(alpha);
    RootLabel lab = s.labels[pos];
    if (!is_imaginary(lab)) fail(Errc::Usage, "the hermitian form is isotropic on a non-imaginary root line");
    int sg = sgn(s.pairing(lambda, alpha));
    if (sg == 0) fail(Errc::DegenerateInput, "lambda vanishes on the root");
    return lab == RootLabel::ImaginaryCompact ? -sg : sg;
}

int exp_path_sheet(const RootSystemView& s, const Vec& lambda, const Vec& h) {
    EllipticPoint e = identity_point(s.dim);
    e.h = h;
    if (transpose(s.sigma) * h != neg(h)) fail(Errc::Usage, "exp path needs h in the compact part");
    auto a = action_of(s, e);
    long k = 0;
    for (const auto& o : positive_orbits(s, lambda, a)) k += shifts(a.phase[o[0]]);
    return sign_pow(k);
}

Cyc delta_on_roots(const RootSystemView& s, const Vec& lambda, const LiftedElliptic& e) {
    auto a = action_of(s, e.point);
    Cyc d(e.sheet);
    for (const auto& o : positive_orbits(s, lambda, a)) d *= half_product(orbit_angle(a, o), static_cast<int>(o.size()));
    return d;
}

Cyc rho_on_lagrangian_roots(const RootSystemView& s, const Vec& lambda, const std::vector<int>& positive,
                            const LiftedElliptic& e) {
    auto a = action_of(s, e.point);
    std::set<int> P(positive.begin(), positive.end());
    if (static_cast<int>(P.size()) != s.npos) fail(Errc::Usage, "not a positive system");
    for (int i : P) {
        if (P.count(s.negative_of(i))) fail(Errc::Usage, "not a positive system");
        if (!P.count(a.perm[i])) fail(Errc::NotInStabilizer, "the element does not preserve the Lagrangian");
        require_regular(s, lambda, i);
    }
    Cyc r(e.sheet);
    long q = 0;
    std::set<int> seen, seen_pairs;
    for (int i : P) {
        if (seen.count(i)) continue;
        auto o = orbit_of(a, i);
        for (int j : o) seen.insert(j);
        int m = static_cast<int>(o.size());
        Q u = orbit_angle(a, o);
        r *= half_product(u, m);
        int pos = i < s.npos ? i : i - s.npos;
        if (is_imaginary(s.labels[pos])) {
            if (line_form_sign(s, lambda, i) < 0) q += moved_count(u, m);
        } else if (s.labels[pos] == RootLabel::Complex && P.count(partner(s, i)) && !seen_pairs.count(i)) {
            if (std::find(o.begin(), o.end(), partner(s, i)) != o.end())
                fail(Errc::Unsupported, "root map exchanges alpha and -conj(alpha) within an orbit");
            // each eigenvalue of the pair of orbits spans a (1,1) block
            for (int j : o) {
                seen_pairs.insert(j);
                seen_pairs.insert(partner(s, j));
            }
            q += moved_count(u, m);
        }
    }
    return Cyc(sign_pow(q)) * r;
}

Cyc rho_on_stabilizer_cover(const ParamTilde& pt, const PositiveSystemData& psd, const LiftedElliptic& e) {
    const auto& s = *pt.sys;
    if (e.point.gamma * psd.lambda_plus != psd.lambda_plus)
        fail(Errc::NotInStabilizer, "the element does not fix lambda_+");
    auto a = action_of(s, e.point);
    std::set<int> P(psd.rplus_g_h.begin(), psd.rplus_g_h.end());
    for (int i : P)
        if (!P.count(a.perm[i])) fail(Errc::NotInStabilizer, "the element does not preserve R+");
    Vec nu = s.a_part(psd.nu_plus);

    Cyc r = delta_on_roots(s, psd.lambda_plus, e);
    std::set<int> seen;
    for (int i : P) {
        if (seen.count(i)) continue;
        int pos = i < s.npos ? i : i - s.npos;
        RootLabel lab = s.labels[pos];
        auto o = orbit_of(a, i);
        int m = static_cast<int>(o.size());
        Q u = orbit_angle(a, o);
        if (lab == RootLabel::ImaginaryCompact) {
            for (int j : o) seen.insert(j);
            r *= Cyc(sign_pow(m - 1)) * Cyc::exp_i_pi(u);
        } else if (lab == RootLabel::Complex && s.pairing(nu, i) == 0 && P.count(partner(s, i))) {
            int p = partner(s, i);
            if (std::find(o.begin(), o.end(), p) != o.end())
                fail(Errc::Unsupported, "root map exchanges beta and -conj(beta) within an orbit");
            for (int j : o) {
                seen.insert(j);
                seen.insert(partner(s, j));
            }
            r *= Cyc(sign_pow(m - 1)) * Cyc::exp_i_pi(u);
        } else {
            seen.insert(i);
        }
    }
    return r;
}

int form_orientation(const RootSystemView& s, const Vec& lambda, const std::vector<int>& roots) {
    int o = 1;
    for (int i : roots) {
        int pos = i < s.npos ? i : i - s.npos;
        if (s.labels[pos] == RootLabel::Complex) continue;
        int sg = sgn(s.pairing(lambda, pos));
        if (sg == 0) fail(Errc::DegenerateInput, "B_lambda is degenerate on a root block");
        o *= sg;
    }
    return o;
}

int root_line_orientation(const RootSystemView& s, const Vec& lambda, const LiftedElliptic& e,
                          const std::vector<int>& excluded) {
    auto a = action_of(s, e.point);
    std::set<int> ex;
    for (int i : excluded) ex.insert(i < s.npos ? i : i - s.npos);
    SemisimpleElement x;
    for (const auto& o : positive_orbits(s, lambda, a)) {
        if (ex.count(o[0] < s.npos ? o[0] : o[0] - s.npos)) continue;
        for (const auto& t : root_angles(orbit_angle(a, o), static_cast<int>(o.size()))) {
            SymplecticPiece p;
            p.angle = t;
            p.generator = {t};
            x.pieces.push_back(p);
        }
    }
    if (x.pieces.empty()) return e.sheet;
    return orientation_ratio(e.sheet < 0 ? other_lift(x) : x);
}

std::vector<int> moved_roots(const RootSystemView& s, const EllipticPoint& e, const std::vector<int>& excluded) {
    auto a = action_of(s, e);
    std::set<int> ex;
    for (int i : excluded) ex.insert(i < s.npos ? i : i - s.npos);
    std::vector<int> out;
    for (int i = 0; i < s.npos; ++i) {
        if (ex.count(i)) continue;
        if (a.perm[i] != i || !in_two_pi_z(a.phase[i])) out.push_back(i);
    }
    return out;
}

GammaAlphaData gamma_alpha_data(const ParamTilde& pt, const PositiveSystemData& psd, int alpha) {
    const auto& s = *pt.sys;
    if (alpha < 0 || alpha >= s.num_roots()) fail(Errc::Usage, "root index out of range");
    int pos = alpha < s.npos ? alpha : alpha - s.npos;
    if (s.labels[pos] != RootLabel::Real) fail(Errc::NotRealRoot, "gamma_alpha needs a real root");
    GammaAlphaData g;
    g.alpha = alpha;
    const Vec& root = s.roots[alpha];
    Q twice = 0;
    for (int b = 0; b < s.num_roots(); ++b) {
        Vec sum = add(s.roots[b], s.sigma * s.roots[b]);
        // sum in R_{>0} alpha
        Q c;
        bool found = false, ok = true;
        for (size_t k = 0; k < sum.size() && ok; ++k) {
            if (root[k] == 0) {
                ok = sum[k] == 0;
            } else if (!found) {
                c = sum[k] / root[k];
                found = true;
            } else {
                ok = sum[k] == c * root[k];
            }
        }
        if (ok && found && c > 0) twice += s.pairing(s.roots[b], alpha);
    }
    Q half = twice / 2;
    if (!is_integer(half)) fail(Errc::Unsupported, "n_alpha is not an integer");
    g.n_alpha = static_cast<int>(half.get_num().get_si());
    g.point = identity_point(s.dim);
    g.point.label = "gamma_" + std::to_string(alpha);
    g.point.h = s.coroots[alpha];
    g.lifts[0] = {g.point, 1};
    g.lifts[1] = {g.point, -1};
    for (int k = 0; k < 2; ++k) g.delta[k] = delta_on_roots(s, psd.lambda_plus, g.lifts[k]);
    return g;
}

}  // namespace orbitlab
