#include "orbitlab/characters.hpp"

#include "orbitlab/errors.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <optional>
#include <set>

namespace orbitlab {

namespace {

const cplx I(0.0, 1.0);

struct RootOrbit {
    std::vector<int> roots;
    Q angle;  // sum of the phases along the orbit
};

// orbits of the root map of e on the roots selected by `keep` (a set closed under e)
std::vector<RootOrbit> root_orbits(const RootSystemView& s, const EllipticPoint& e, const std::vector<bool>& keep) {
    std::vector<RootOrbit> out;
    std::vector<bool> seen(s.num_roots(), false);
    for (int i = 0; i < s.num_roots(); ++i) {
        if (seen[i] || !keep[i]) continue;
        RootOrbit o;
        int j = i;
        do {
            seen[j] = true;
            o.roots.push_back(j);
            o.angle += e.phase(s.roots[j]);
            j = s.index_of(e.gamma * s.roots[j]);
            if (j < 0) fail(Errc::Usage, "root map does not preserve the roots");
        } while (j != i);
        out.push_back(o);
    }
    return out;
}

// reduced angles of the m-th roots of exp(i pi u)
std::vector<Q> eigen_angles(const RootOrbit& o) {
    long m = static_cast<long>(o.roots.size());
    std::vector<Q> out;
    for (long j = 0; j < m; ++j) out.push_back(reduce_angle((o.angle + 2 * j) / m));
    return out;
}

int moved_lines(const RootSystemView& s, const EllipticPoint& e, const std::vector<bool>& keep) {
    int n = 0;
    for (const auto& o : root_orbits(s, e, keep))
        for (const auto& t : eigen_angles(o)) n += (t != 0);
    return n;
}

// angles in (0, 2] of the eigenvalues of the root map on V
std::vector<Q> cartan_angles(const Mat& gamma) {
    int n = gamma.rows;
    int order = 1;
    Mat p = gamma;
    while (p != Mat::identity(n)) {
        p = p * gamma;
        if (++order > 64) fail(Errc::Unsupported, "root map of infinite order");
    }
    Eigen::MatrixXd m(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) m(i, j) = to_double(gamma(i, j));
    Eigen::EigenSolver<Eigen::MatrixXd> es(m);
    std::vector<Q> out;
    for (int i = 0; i < n; ++i) {
        double a = std::arg(es.eigenvalues()(i)) / M_PI;  // in (-1, 1]
        long k = std::lround(a * order / 2);
        Q t = reduce_angle_pos(frac(2 * k, order));
        out.push_back(t == 0 ? Q(2) : t);
    }
    return out;
}

bool same_param(const ParamTilde& a, const ParamTilde& b) {
    return a.lambda == b.lambda && a.imag == b.imag && a.fplus == b.fplus;
}

bool param_less(const ParamTilde& a, const ParamTilde& b) {
    if (a.lambda != b.lambda) return a.lambda < b.lambda;
    return a.fplus < b.fplus;
}

// membership of v in the Z-span of gens, by integer echelon form
bool in_lattice(const std::vector<Vec>& gens, const Vec& v) {
    if (is_zero(v)) return true;
    mpz_class den = 1;
    for (const auto& g : gens)
        for (const auto& q : g) den = lcm(den, q.get_den());
    for (const auto& q : v) den = lcm(den, q.get_den());
    auto to_int = [&](const Vec& x) {
        std::vector<mpz_class> out;
        for (const auto& q : x) out.push_back(mpz_class(q * den));
        return out;
    };
    std::vector<std::vector<mpz_class>> rows;
    for (const auto& g : gens) rows.push_back(to_int(g));
    auto target = to_int(v);
    size_t n = v.size();
    size_t r = 0;
    std::vector<std::pair<size_t, size_t>> pivots;
    for (size_t c = 0; c < n && r < rows.size(); ++c) {
        while (true) {
            size_t best = rows.size();
            for (size_t i = r; i < rows.size(); ++i)
                if (rows[i][c] != 0 && (best == rows.size() || abs(rows[i][c]) < abs(rows[best][c]))) best = i;
            if (best == rows.size()) break;
            std::swap(rows[r], rows[best]);
            bool clean = true;
            for (size_t i = r + 1; i < rows.size(); ++i) {
                if (rows[i][c] == 0) continue;
                mpz_class q = rows[i][c] / rows[r][c];
                for (size_t k = 0; k < n; ++k) rows[i][k] -= q * rows[r][k];
                if (rows[i][c] != 0) clean = false;
            }
            if (clean) {
                pivots.push_back({r, c});
                ++r;
                break;
            }
        }
    }
    for (auto [row, c] : pivots) {
        if (target[c] % rows[row][c] != 0) return false;
        mpz_class q = target[c] / rows[row][c];
        for (size_t k = 0; k < n; ++k) target[k] -= q * rows[row][k];
    }
    return std::all_of(target.begin(), target.end(), [](const mpz_class& z) { return z == 0; });
}

// average over the cyclic group generated by the action of the root map on h
Vec fixed_part(const Mat& gamma, const Vec& h) {
    Mat m = transpose(inverse(gamma));
    Vec sum = zeros(static_cast<int>(h.size())), term = h;
    int order = 0;
    do {
        sum = add(sum, term);
        term = m * term;
        ++order;
    } while (term != h && order < 64);
    return scale(Q(1) / order, sum);
}

Cyc i_power(int k) { return Cyc::exp_i_pi(frac(k, 2)); }

void require_scope(const ParamTilde& pt) {
    const auto& f = frame_of(pt);
    if (!f.fundamental || !all_imaginary(f) || !roots_orthogonal(*pt.sys))
        fail(Errc::Unsupported, "characters are evaluated on the fundamental frame of a group with orthogonal roots");
}

}  // namespace

// ---- factors -------------------------------------------------------------------------

KDFactors k_and_D_factors(const RootSystemView& s, const EllipticPoint& e, const TangentPoint& X) {
    check_elliptic(s, e);
    KDFactors out;
    std::vector<bool> all(s.num_roots(), true);
    auto orbits = root_orbits(s, e, all);

    // epsilon_e: eigenvalues of Ad e on the root lines and on the Cartan subalgebra
    Q eps = 2;
    for (const auto& o : orbits)
        for (const auto& t : eigen_angles(o)) {
            Q p = reduce_angle_pos(t);
            if (p != 0) eps = std::min(eps, p);
        }
    for (const auto& t : cartan_angles(e.gamma)) eps = std::min(eps, t);
    out.epsilon = eps;

    bool fixed = transpose(e.gamma) * X.x == X.x;
    bool inside = fixed;
    bool regular = true;
    Cyc D(1);
    cplx k2 = 1;
    int moved = 0;
    for (const auto& o : orbits) {
        const Vec& root = s.roots[o.roots[0]];
        cplx a = root_at(s.sigma, root, X);
        double theta = a.imag();
        if (std::abs(theta) >= to_double(eps) * M_PI) inside = false;
        bool exact_zero = dot(root, X.x) == 0 || X.scale == 0;
        for (const auto& t : eigen_angles(o)) {
            cplx zeta = std::exp(I * (M_PI * to_double(t)));
            if (t == 0) {
                if (exact_zero) {
                    regular = false;
                } else {
                    k2 *= (std::exp(a / 2.0) - std::exp(-a / 2.0)) / a;
                }
                continue;
            }
            ++moved;
            D *= Cyc(1) - Cyc::exp_i_pi(t);
            cplx after = 1.0 - zeta * std::exp(a);
            if (std::abs(after) < 1e-12) regular = false;
            k2 *= after / (1.0 - zeta);
        }
    }
    out.D_exact = D;
    out.D = D.to_complex().real();
    out.d = moved / 2;
    out.X_in_Ve = inside;
    out.regular = regular;
    out.k = std::sqrt(k2);
    return out;
}

int d_stabilizer(const ParamTilde& pt, const EllipticPoint& e) {
    const auto& s = *pt.sys;
    std::vector<bool> keep(s.num_roots(), false);
    for (int i : stabilizer_subsystem(pt)) {
        keep[i] = true;
        keep[s.negative_of(i)] = true;
    }
    return moved_lines(s, e, keep) / 2;
}

// ---- tau ---------------------------------------------------------------------------

std::string value_key(const EllipticPoint& e) {
    std::string k = "gamma=";
    for (int i = 0; i < e.gamma.rows; ++i) k += (i ? ";" : "") + to_string(e.gamma.row(i));
    return k + " h=" + to_string(e.h);
}

void TauChar::set(const EllipticPoint& e, const Cyc& v) { values[value_key(e)] = {e, v}; }

namespace {

// canonical chi at the canonical lift of exp(i pi h), h elliptic
std::optional<Cyc> torus_value(const TauChar& tau, const Vec& h) {
    const auto& s = *tau.param->sys;
    if (transpose(s.sigma) * h != neg(h)) return std::nullopt;
    EllipticPoint t = identity_point(s.dim);
    t.h = h;
    Q phase = dot(add(s.t_part(tau.param->lambda), tau.positive->rho_g_h), h);
    return Cyc::exp_i_pi(phase) / rho_on_stabilizer_cover(*tau.param, *tau.positive, {t, 1});
}

// sheet of (canonical lift of p) x (canonical lift of exp(i pi f)) relative to the
// canonical lift of the product, read on the positive vectors of B_lambda; f is fixed
// by the root map of p
std::optional<int> product_sheet(const RootSystemView& s, const Vec& lambda, const EllipticPoint& p, const Vec& f) {
    auto positive = [&](int i) {
        int pos = i < s.npos ? i : s.negative_of(i);
        return is_imaginary(s.labels[pos]) && line_form_sign(s, lambda, i) > 0;
    };
    Q excess = 0;
    std::vector<bool> seen(s.num_roots(), false);
    for (int i = 0; i < s.num_roots(); ++i) {
        if (seen[i]) continue;
        int pos = i < s.npos ? i : s.negative_of(i);
        if (!is_imaginary(s.labels[pos])) return std::nullopt;
        if (!positive(i)) continue;
        Q u = 0;
        long m = 0;
        int j = i;
        do {
            if (j < 0 || !positive(j)) return std::nullopt;
            seen[j] = true;
            ++m;
            u += p.phase(s.roots[j]);
            j = s.index_of(p.gamma * s.roots[j]);
        } while (j != i);
        Q ut = dot(s.roots[i], f);
        for (long k = 0; k < m; ++k) {
            Q a = (u + 2 * k) / m;
            excess += reduce_angle(a) + reduce_angle(ut) - reduce_angle(Q(a + ut));
        }
    }
    Q half = excess / 2;
    if (half.get_den() != 1) return std::nullopt;
    return half.get_num() % 2 == 0 ? 1 : -1;
}

}  // namespace

Cyc TauChar::value(const LiftedElliptic& e) const {
    auto it = values.find(value_key(e.point));
    if (it != values.end()) return e.sheet > 0 ? it->second.second : -it->second.second;
    if (canonical && e.point.is_identity_map()) {
        if (auto v = torus_value(*this, e.point.h)) return e.sheet > 0 ? *v : -*v;
    }
    if (canonical) {
        // e is conjugate under the torus to p exp(i pi f) with p a listed point and f fixed by its root map
        const auto& s = *param->sys;
        for (const auto& [key, pv] : values) {
            const auto& p = pv.first;
            if (p.gamma != e.point.gamma) continue;
            Vec f = fixed_part(p.gamma, sub(e.point.h, p.h));
            auto tv = torus_value(*this, f);
            auto sh = product_sheet(s, positive->lambda_plus, p, f);
            if (!tv || !sh) continue;
            Cyc v = pv.second * *tv * Cyc(*sh);
            return e.sheet > 0 ? v : -v;
        }
    }
    fail(Errc::MissingGeneratorValue, "no value of tau at " + value_key(e.point));
}

TauChar transport_tau(const TauChar& tau, const Mat& a) {
    TauChar out;
    out.dim = tau.dim;
    out.differential = a * tau.differential;
    if (tau.param) {
        auto moved = act_on_param(a, *tau.param);
        out.differential = moved.lambda;
        out.param = std::make_shared<ParamTilde>(moved);
        out.positive = std::make_shared<PositiveSystemData>(build_positive_system(moved));
    }
    out.canonical = tau.canonical;
    for (const auto& [k, pv] : tau.values) out.set(conjugate_point(pv.first, a), pv.second);
    return out;
}

TauChar chi_canonical(const ParamTilde& pt, const PositiveSystemData& psd) {
    if (!classify_param(pt).in_regG) fail(Errc::NotIntegral, "the parameter is not in the regular integral set");
    TauChar t;
    t.dim = 1;
    t.differential = pt.lambda;
    t.canonical = true;
    t.param = std::make_shared<ParamTilde>(pt);
    t.positive = std::make_shared<PositiveSystemData>(psd);
    return t;
}

bool is_final(const TauChar& tau, const ParamTilde& pt, const PositiveSystemData& psd) {
    const auto& s = *pt.sys;
    for (int i : centralizer_roots(s, pt.lambda)) {
        if (s.labels[i] != RootLabel::Real) continue;
        auto g = gamma_alpha_data(pt, psd, i);
        Cyc v = g.delta[0] * tau.value(g.lifts[0]);
        if (v == Cyc(g.n_alpha % 2 == 0 ? 1 : -1)) return false;
    }
    return true;
}

// ---- contributions -------------------------------------------------------------------

const GroupEntry& group_of(const ParamTilde& pt) {
    const auto& cat = builtin_catalog();
    if (!cat.has(pt.sys->group)) fail(Errc::Unsupported, "parameter is not on a catalog group");
    return cat.group(pt.sys->group);
}

const CartanFrame& frame_of(const ParamTilde& pt) {
    const auto& g = group_of(pt);
    if (g.frame_index(pt.sys->name) < 0) fail(Errc::Unsupported, "parameter is not on a catalog frame");
    return g.frame(pt.sys->name);
}

std::vector<Mat> centralizer_weyl(const CartanFrame& f, const EllipticPoint& e) {
    std::vector<Mat> out;
    for (const auto& w : f.realized_weyl) {
        // representatives of w are defined up to the torus, which moves h by (1 - gamma) c
        auto c = conjugate_point(e, w);
        if (c.gamma != e.gamma) continue;
        std::vector<Vec> lattice;
        for (const auto& k : f.kernel_lattice) lattice.push_back(fixed_part(e.gamma, scale(Q(2), k)));
        if (in_lattice(lattice, fixed_part(e.gamma, sub(c.h, e.h)))) out.push_back(w);
    }
    return out;
}

std::vector<Contribution> enumerate_contributions(const ParamTilde& pt, const EllipticPoint& e) {
    const auto& f = frame_of(pt);
    std::vector<Contribution> items;
    for (const auto& w : f.realized_weyl) {
        ParamTilde p = act_on_param(w, pt);
        if (!fixes_param(e, p)) continue;
        if (std::any_of(items.begin(), items.end(), [&](const Contribution& c) { return same_param(c.lambda_prime, p); }))
            continue;
        ParamTilde d;
        try {
            d = descend_at_e(p, e);
        } catch (const Error& err) {
            if (err.code() == Errc::NoStableChamber || err.code() == Errc::NotFixed) continue;
            throw;
        }
        if (!classify_param(d).in_reg) continue;
        Contribution c;
        c.lambda_prime = p;
        c.conjugator = w;
        c.e_prime = conjugate_point(e, inverse(w));
        c.descended = d;
        items.push_back(c);
    }
    std::sort(items.begin(), items.end(), [](const Contribution& a, const Contribution& b) {
        if (!same_param(a.descended, b.descended)) return param_less(a.descended, b.descended);
        return param_less(a.lambda_prime, b.lambda_prime);
    });

    auto we = centralizer_weyl(f, e);
    std::vector<ParamTilde> reps;
    std::vector<Contribution> out;
    for (auto& c : items) {
        int cls = -1;
        for (size_t r = 0; r < reps.size() && cls < 0; ++r)
            for (const auto& u : we)
                if (same_param(act_on_param(u, reps[r]), c.descended)) {
                    cls = static_cast<int>(r);
                    break;
                }
        if (cls < 0) {
            cls = static_cast<int>(reps.size());
            reps.push_back(c.descended);
        }
        // conjugates of the representative under G(e) are the same term
        if (!same_param(reps[cls], c.descended)) continue;
        c.outer = cls;
        out.push_back(c);
    }
    for (auto& c : out)
        c.orbit_size = std::count_if(out.begin(), out.end(), [&](const Contribution& o) { return o.outer == c.outer; });
    return out;
}

// ---- the character -------------------------------------------------------------------

CharacterEval eval_character(const ParamTilde& pt, const TauChar& tau, const EllipticPoint& e, const TangentPoint& X,
                             CharacterForm form, int sheet) {
    require_scope(pt);
    const auto& s = *pt.sys;
    const auto& f = frame_of(pt);
    CharacterEval out;
    out.factors = k_and_D_factors(s, e, X);
    if (!out.factors.X_in_Ve) fail(Errc::OutsideVe, "X is outside V_e");
    if (!out.factors.regular) fail(Errc::SingularPoint, "e exp X is not regular");

    auto psd = build_positive_system(pt);
    auto excluded = stabilizer_subsystem(pt);
    auto we = centralizer_weyl(f, e);
    auto items = enumerate_contributions(pt, e);

    std::vector<Contribution> terms;
    if (form == CharacterForm::Full) {
        terms = items;
    } else {
        // sum over lambda'_+ in G . lambda_+ fixed by e, matched to the class representatives
        std::vector<Vec> seen;
        for (const auto& w : f.realized_weyl) {
            Vec lp = w * psd.lambda_plus;
            if (std::find(seen.begin(), seen.end(), lp) != seen.end()) continue;
            seen.push_back(lp);
            if (e.gamma * lp != lp) continue;
            ParamTilde p = act_on_param(w, pt);
            ParamTilde d;
            try {
                d = descend_at_e(p, e);
            } catch (const Error& err) {
                if (err.code() == Errc::NoStableChamber || err.code() == Errc::NotFixed) continue;
                throw;
            }
            for (const auto& c : items)
                if (same_param(c.descended, d)) {
                    Contribution t = c;
                    t.lambda_prime = p;
                    t.conjugator = w;
                    t.e_prime = conjugate_point(e, inverse(w));
                    terms.push_back(t);
                    break;
                }
        }
    }

    cplx theta = 0;
    for (const auto& c : terms) {
        ContributionTerm t;
        t.item = c;
        LiftedElliptic lift{c.e_prime, sheet};
        if (form == CharacterForm::Full) {
            auto moved = moved_roots(s, c.e_prime, excluded);
            t.sign = root_line_orientation(s, psd.lambda_plus, lift, excluded) *
                     form_orientation(s, psd.lambda_plus, moved) * form_orientation(s, psd.lambda_can, moved);
            t.d = out.factors.d - d_stabilizer(pt, c.e_prime);
        } else {
            t.sign = root_line_orientation(s, psd.lambda_plus, lift, {});
            t.d = out.factors.d;
        }
        t.trace = tau.value(lift);
        t.summand = Cyc(t.sign) * i_power(-t.d) * t.trace;
        t.transform = factorized_limit_transform(c.descended, we, X);
        t.a_chambers = static_cast<long>(
            enumerate_a_chambers(*c.descended.sys, stabilizer_subsystem(c.descended)).size());
        theta += t.summand.to_complex() * t.transform / static_cast<double>(t.a_chambers);
        out.contributions.push_back(t);
    }
    out.theta = theta / std::sqrt(out.factors.D);
    out.value = out.theta / out.factors.k;
    return out;
}

// ---- identification --------------------------------------------------------------------

std::vector<ParamTilde> orbit_candidates(const GroupEntry& g) {
    const auto& f = g.frames[g.fundamental_index()];
    auto s = std::make_shared<RootSystemView>(view_of(f));
    std::vector<ParamTilde> out;
    int dim = s->dim;
    std::vector<int> c(dim, -8);
    while (true) {
        Vec lambda(dim);
        for (int i = 0; i < dim; ++i) lambda[i] = frac(c[i], 2);
        for (const auto& ch : enumerate_chambers(*s, lambda)) {
            auto pt = make_param(s, lambda, ch.fplus);
            if (!classify_param(pt).in_regG) continue;
            bool known = false;
            for (const auto& o : out) {
                for (const auto& w : f.realized_weyl)
                    if (same_param(act_on_param(w, o), pt)) {
                        known = true;
                        break;
                    }
                if (known) break;
            }
            if (!known) out.push_back(pt);
        }
        int k = 0;
        while (k < dim && ++c[k] > 8) c[k++] = -8;
        if (k == dim) break;
    }
    return out;
}

IdentifiedOrbit identify_orbit(const GroupEntry& g, const std::vector<CharacterSample>& samples, double tol) {
    if (samples.empty()) fail(Errc::Ambiguous, "no samples");
    std::vector<ParamTilde> matches;
    for (const auto& pt : orbit_candidates(g)) {
        auto psd = build_positive_system(pt);
        auto tau = chi_canonical(pt, psd);
        bool ok = true;
        for (const auto& smp : samples) {
            try {
                if (std::abs(eval_character(pt, tau, smp.e, smp.X).value - smp.value) > tol) ok = false;
            } catch (const Error&) {
                ok = false;
            }
            if (!ok) break;
        }
        if (ok) matches.push_back(pt);
    }
    if (matches.empty()) fail(Errc::NoMatch, "no candidate orbit matches the samples");
    if (matches.size() > 1) fail(Errc::Ambiguous, std::to_string(matches.size()) + " candidate orbits match the samples");
    IdentifiedOrbit id;
    id.param = matches.front();
    auto psd = build_positive_system(id.param);
    auto tau = chi_canonical(id.param, psd);
    for (const auto& smp : samples) {
        if (!fixes_param(smp.e, id.param)) {
            id.traces.push_back(Cyc(0));
            continue;
        }
        id.traces.push_back(tau.value({smp.e, 1}));
    }
    return id;
}

}  // namespace orbitlab
