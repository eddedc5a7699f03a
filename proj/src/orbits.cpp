#include "orbitlab/orbits.hpp"

#include "orbitlab/errors.hpp"

#include <Eigen/Dense>
#include <boost/math/quadrature/gauss.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <map>
#include <mutex>
#include <sstream>

namespace orbitlab {

namespace {

const cplx I(0.0, 1.0);
constexpr double kPi = 3.14159265358979323846;

std::string trim(const std::string& s) {
    size_t a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos) return "";
    size_t b = s.find_last_not_of(" \t\r");
    return s.substr(a, b - a + 1);
}

int sign_of(double v) { return v > 0 ? 1 : (v < 0 ? -1 : 0); }

// Gauss-Legendre rule on [-1, 1]
const std::vector<std::pair<double, double>>& legendre_rule() {
    static const std::vector<std::pair<double, double>> rule = [] {
        using G = boost::math::quadrature::gauss<double, 30>;
        std::vector<std::pair<double, double>> r;
        const auto& x = G::abscissa();
        const auto& w = G::weights();
        for (size_t k = 0; k < x.size(); ++k) {
            r.emplace_back(x[k], w[k]);
            if (x[k] != 0) r.emplace_back(-x[k], w[k]);
        }
        return r;
    }();
    return rule;
}

// composite Gauss-Legendre on [a, b] with `panels` panels
template <class F>
cplx integrate(F f, double a, double b, int panels) {
    cplx sum = 0;
    double h = (b - a) / panels;
    for (int p = 0; p < panels; ++p) {
        double lo = a + p * h;
        for (const auto& [x, w] : legendre_rule()) sum += w * f(lo + (x + 1) * h / 2);
    }
    return sum * (h / 2);
}

Vec x_t_part(const Mat& sigma, const Vec& x) { return scale(frac(1, 2), sub(x, transpose(sigma) * x)); }
Vec x_a_part(const Mat& sigma, const Vec& x) { return scale(frac(1, 2), add(x, transpose(sigma) * x)); }

std::uint64_t fnv1a(const std::string& s) {
    std::uint64_t h = 1469598103934665603ULL;
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    return h;
}

std::string key_string(const CalibrationKey& k) {
    return k.group + "/" + k.lambda_frame + "/" + k.lambda_chamber + "/" + k.x_frame + "/" + k.x_chamber;
}

// x minus its components along the coroots of the given roots
Vec central_part(const std::vector<Vec>& roots, const std::vector<Vec>& coroots, const Vec& x) {
    Vec z = x;
    for (size_t j = 0; j < roots.size(); ++j) z = sub(z, scale(dot(roots[j], x) / 2, coroots[j]));
    return z;
}

int index_of_map(const std::vector<Mat>& maps, const Mat& m) {
    for (size_t i = 0; i < maps.size(); ++i)
        if (maps[i] == m) return static_cast<int>(i);
    return -1;
}

long stabilizer_size(const std::vector<Mat>& maps, const Vec& v) {
    long n = 0;
    for (const auto& w : maps) n += (w * v == v);
    return n;
}

std::string format_double(double v) {
    if (v == 0) return "0";
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

}  // namespace

// ---- Pfaffian -----------------------------------------------------------------------

double PfaffianValue::value() const { return std::sqrt(to_double(value_squared)); }

std::vector<int> pfaffian_subalgebra(const RootSystemView& s, const Vec& lambda) {
    Vec mu = s.t_part(lambda);
    std::vector<int> out;
    for (int i = 0; i < s.npos; ++i)
        if (is_imaginary(s.labels[i]) && s.pairing(mu, i) == 0) out.push_back(i);
    return out;
}

PfaffianValue pfaffian_abs(const RootSystemView& s, const Vec& lambda, const std::vector<int>& m_roots) {
    Vec mu = s.t_part(lambda);
    Vec nu = s.a_part(lambda);
    PfaffianValue p;
    p.value_squared = 1;
    for (int i = 0; i < s.npos; ++i) {
        if (std::find(m_roots.begin(), m_roots.end(), i) != m_roots.end()) continue;
        Q a = s.pairing(mu, i);
        Q b = s.pairing(nu, i);
        p.value_squared *= a * a + b * b;
    }
    return p;
}

PfaffianValue pfaffian_abs(const RootSystemView& s, const Vec& lambda) {
    return pfaffian_abs(s, lambda, pfaffian_subalgebra(s, lambda));
}

// ---- evaluation on Cartan subalgebras --------------------------------------------------

cplx root_at(const Mat& x_sigma, const Vec& root, const TangentPoint& X) {
    double t = to_double(dot(root, x_t_part(x_sigma, X.x)));
    double a = to_double(dot(root, x_a_part(x_sigma, X.x)));
    return X.scale * cplx(a, t);
}

cplx form_at(const Mat& lambda_sigma, const Vec& lambda, const Mat& w, const Mat& x_sigma, const TangentPoint& X) {
    Vec lt = w * scale(frac(1, 2), sub(lambda, lambda_sigma * lambda));
    Vec la = w * scale(frac(1, 2), add(lambda, lambda_sigma * lambda));
    Vec xt = x_t_part(x_sigma, X.x);
    Vec xa = x_a_part(x_sigma, X.x);
    Q re = dot(lt, xt) + dot(la, xa);
    Q im = dot(la, xt) - dot(lt, xa);
    return X.scale * cplx(to_double(re), to_double(im));
}

bool roots_orthogonal(const RootSystemView& s) {
    for (int i = 0; i < s.npos; ++i)
        for (int j = i + 1; j < s.npos; ++j)
            if (dot(s.roots[i], s.form * s.roots[j]) != 0) return false;
    return true;
}

bool all_imaginary(const CartanFrame& f) {
    return std::all_of(f.labels.begin(), f.labels.end(), [](RootLabel l) { return is_imaginary(l); });
}

Signs lambda_chamber(const CartanFrame& f, const Vec& lambda) {
    const auto& rd = f.rd();
    Signs out;
    for (int i = 0; i < rd.num_positive(); ++i) {
        int sg = sgn(rd.pairing(lambda, i));
        if (sg == 0) fail(Errc::DegenerateInput, "lambda is singular");
        out.push_back(sg);
    }
    return out;
}

Signs x_chamber(const CartanFrame& f, const TangentPoint& X) {
    if (!all_imaginary(f)) fail(Errc::MissingCalibration, "X must lie in an elliptic Cartan subalgebra");
    if (X.scale == 0) fail(Errc::SingularX, "X is zero");
    const auto& rd = f.rd();
    Signs out;
    Vec xt = x_t_part(f.sigma, X.x);
    for (int i = 0; i < rd.num_positive(); ++i) {
        int sg = sgn(dot(rd.root(i), xt));
        if (sg == 0) fail(Errc::SingularX, "a root vanishes on X");
        out.push_back(X.scale > 0 ? sg : -sg);
    }
    return out;
}

// ---- quadrature -------------------------------------------------------------------------

namespace quadrature {

cplx compact_factor(double n, double theta) {
    double r = std::abs(n) / 2;
    if (r == 0) return 0;
    // torus axis in a tilted position so both angles matter
    const double axis[3] = {1.0 / 3, 2.0 / 3, 2.0 / 3};
    const int nphi = 96;
    auto slice = [&](double u) -> cplx {
        double rho = std::sqrt(std::max(0.0, 1 - u * u));
        cplx s = 0;
        for (int k = 0; k < nphi; ++k) {
            double phi = 2 * kPi * k / nphi;
            double h = rho * std::cos(phi) * axis[0] + rho * std::sin(phi) * axis[1] + u * axis[2];
            s += std::exp(I * (r * theta * h));
        }
        return s * (2 * kPi / nphi);
    };
    // Liouville density on the sphere of radius r: r du dphi / 2 pi
    return integrate(slice, -1.0, 1.0, 4) * (r / (2 * kPi));
}

cplx noncompact_factor(double n, double theta) {
    double r = std::abs(n) / 2;
    if (r == 0) return 0;
    // height y = r cosh s on the sheet through lambda, y(X) = theta' y; the
    // Liouville density is dy. The ray y = r + i kappa t makes the integral converge.
    double tp = theta * (n > 0 ? 1 : -1);
    double kappa = tp > 0 ? 1 : -1;
    double T = 40 / std::abs(tp);
    auto f = [&](double t) -> cplx { return std::exp(I * tp * cplx(r, kappa * t)) * (I * kappa); };
    return integrate(f, 0.0, T, 40);
}

cplx hyperbolic_factor(double nu, double theta) {
    (void)nu;
    // the height on the one-sheeted hyperboloid is uniformly distributed on R; a
    // Gaussian cutoff exp(-eps h^2) regularizes the oscillatory integral
    const double eps = 2e-4;
    const double L = std::sqrt(40 / eps);
    auto f = [&](double h) -> cplx { return std::cos(theta * h) * std::exp(-eps * h * h); };
    return integrate(f, -L, L, static_cast<int>(2 * L));
}

}  // namespace quadrature

std::vector<Vec> component_representatives(const CartanFrame& lf, const Vec& lambda) {
    auto s = view_of(lf);
    std::vector<int> w0_roots;
    for (int i = 0; i < s.npos; ++i)
        if (s.labels[i] == RootLabel::Real || s.labels[i] == RootLabel::ImaginaryCompact) w0_roots.push_back(i);
    auto w0 = weyl_of(s, w0_roots);
    std::vector<Vec> reps;
    for (const auto& w : lf.realized_weyl) {
        Vec mu = w * lambda;
        bool known = false;
        for (const auto& r : reps)
            for (const auto& v : w0)
                if (v * r == mu) known = true;
        if (!known) reps.push_back(mu);
    }
    return reps;
}

cplx component_quadrature(const CartanFrame& lf, const Vec& lambda, const CartanFrame& xf, const TangentPoint& X) {
    auto s = view_of(lf);
    if (!roots_orthogonal(s)) fail(Errc::MissingCalibration, "orbit models cover orthogonal roots only");
    x_chamber(xf, X);
    const auto& rd = lf.rd();
    std::vector<Vec> roots, coroots;
    cplx value = 1;
    for (int j = 0; j < rd.num_positive(); ++j) {
        roots.push_back(rd.root(j));
        coroots.push_back(rd.coroot(j));
        double theta = X.scale * to_double(dot(rd.root(j), X.x));
        double n = to_double(rd.pairing(lambda, j));
        switch (lf.labels[j]) {
            case RootLabel::ImaginaryCompact: value *= quadrature::compact_factor(n, theta); break;
            case RootLabel::ImaginaryNoncompact: value *= quadrature::noncompact_factor(n, theta); break;
            case RootLabel::Real: value *= quadrature::hyperbolic_factor(n, theta); break;
            case RootLabel::Complex: fail(Errc::MissingCalibration, "no model for complex roots");
        }
    }
    TangentPoint Z{central_part(roots, coroots, X.x), X.scale};
    return value * std::exp(I * form_at(lf.sigma, lambda, Mat::identity(rd.dim()), xf.sigma, Z));
}

cplx orbit_quadrature(const GroupEntry& g, const CartanFrame& lf, const Vec& lambda, const CartanFrame& xf,
                      const TangentPoint& X) {
    (void)g;
    cplx sum = 0;
    for (const auto& mu : component_representatives(lf, lambda)) sum += component_quadrature(lf, mu, xf, X);
    return sum;
}

// ---- calibration store -------------------------------------------------------------------

CalibrationStore CalibrationStore::parse(const std::string& text) {
    CalibrationStore st;
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    bool versioned = false;
    CalibrationTable* cur = nullptr;
    auto err = [&](const std::string& m) { fail(Errc::ParseError, "calibration line " + std::to_string(lineno) + ": " + m); };
    while (std::getline(in, line)) {
        ++lineno;
        std::string t = trim(line);
        if (t.empty() || t[0] == '#') continue;
        if (t == "[table]") {
            st.tables_.emplace_back();
            cur = &st.tables_.back();
            continue;
        }
        auto eq = t.find('=');
        if (eq == std::string::npos) err("expected key = value");
        std::string k = trim(t.substr(0, eq));
        std::string v = trim(t.substr(eq + 1));
        if (k == "version") {
            if (v != "1") err("unsupported version " + v);
            versioned = true;
            continue;
        }
        if (!cur) err("entry outside a table");
        if (k == "group") cur->key.group = v;
        else if (k == "lambda_frame") cur->key.lambda_frame = v;
        else if (k == "lambda_chamber") cur->key.lambda_chamber = v;
        else if (k == "x_frame") cur->key.x_frame = v;
        else if (k == "x_chamber") cur->key.x_chamber = v;
        else if (k == "provenance") cur->provenance = v;
        else if (k == "residual") cur->residual = std::stod(v);
        else if (k == "samples") cur->samples = std::stoi(v);
        else if (k == "w") {
            auto bar = v.find('|');
            if (bar == std::string::npos) err("w entry needs a root map");
            std::istringstream ws(v.substr(0, bar));
            int idx;
            double re, im;
            std::string flag;
            if (!(ws >> idx >> re >> im >> flag)) err("malformed w entry");
            if (idx != static_cast<int>(cur->coeffs.size())) err("w entries out of order");
            if (flag != "exact" && flag != "approx") err("flag must be exact or approx");
            cur->coeffs.emplace_back(re, im);
            cur->exact.push_back(flag == "exact");
            cur->maps.push_back(trim(v.substr(bar + 1)));
        } else {
            err("unknown key " + k);
        }
    }
    if (!st.tables_.empty() && !versioned) fail(Errc::ParseError, "calibration file has no version line");
    return st;
}

CalibrationStore CalibrationStore::load(const std::string& path) {
    std::ifstream f(path);
    if (!f) return {};
    std::stringstream ss;
    ss << f.rdbuf();
    return parse(ss.str());
}

std::string CalibrationStore::serialize() const {
    std::ostringstream o;
    o << "# orbitlab calibration store: coefficients c_w of orbit Fourier transforms,\n"
         "# fitted against quadrature on explicit orbit models. Append only.\n"
         "version = 1\n";
    for (const auto& t : tables_) {
        o << "\n[table]\n";
        o << "group = " << t.key.group << "\n";
        o << "lambda_frame = " << t.key.lambda_frame << "\n";
        o << "lambda_chamber = " << t.key.lambda_chamber << "\n";
        o << "x_frame = " << t.key.x_frame << "\n";
        o << "x_chamber = " << t.key.x_chamber << "\n";
        o << "provenance = " << t.provenance << "\n";
        o << "samples = " << t.samples << "\n";
        char buf[64];
        std::snprintf(buf, sizeof buf, "%.3e", t.residual);
        o << "residual = " << buf << "\n";
        for (size_t w = 0; w < t.coeffs.size(); ++w)
            o << "w = " << w << " " << format_double(t.coeffs[w].real()) << " " << format_double(t.coeffs[w].imag())
              << " " << (t.exact[w] ? "exact" : "approx") << " | " << t.maps[w] << "\n";
    }
    return o.str();
}

const CalibrationTable* CalibrationStore::find(const CalibrationKey& k) const {
    for (const auto& t : tables_)
        if (t.key == k) return &t;
    return nullptr;
}

bool CalibrationStore::add(const CalibrationTable& t) {
    if (find(t.key)) return false;
    tables_.push_back(t);
    return true;
}

std::string default_calibration_path() {
    if (const char* p = std::getenv("ORBITLAB_CALIBRATION")) return p;
    return std::string(ORBITLAB_DATA_DIR) + "/calibration.txt";
}

const CalibrationStore& default_calibration() {
    static const CalibrationStore store = CalibrationStore::load(default_calibration_path());
    return store;
}

// ---- calibration --------------------------------------------------------------------

std::vector<Mat> exponent_group(const GroupEntry& g, const CartanFrame& lf, const CartanFrame& xf) {
    const auto& rd = *g.datum;
    std::vector<Mat> gens;
    for (int i : rd.simple_roots()) gens.push_back(rd.reflection(i));
    for (const auto& m : lf.weyl_gens) gens.push_back(m);
    for (const auto& m : xf.weyl_gens) gens.push_back(m);
    return generate_group(gens, rd.dim());
}

bool calibratable(const GroupEntry& g) {
    const auto& f = g.frames[g.fundamental_index()];
    return all_imaginary(f) && roots_orthogonal(view_of(f));
}

SamplePair sample_pair(const GroupEntry& g, const CartanFrame& lf, const Signs& lc, const CartanFrame& xf,
                       const Signs& xc, std::mt19937_64& rng) {
    const auto& rd = *g.datum;
    int k = rd.rank_ss();
    if (rd.num_positive() != k) fail(Errc::MissingCalibration, "sampling covers orthogonal roots only");
    SamplePair p;
    // lambda with a nontrivial stabilizer in W(G,h) spans fewer G0-orbits; skip those
    do {
        p.lambda = zeros(rd.dim());
        p.X.x = zeros(rd.dim());
        for (int j = 0; j < k; ++j) {
            p.lambda[j] = lc[j] * frac(1 + static_cast<long>(rng() % 12), 4);
            p.X.x[j] = xc[j] * frac(1 + static_cast<long>(rng() % 16), 8);
        }
        for (int j = k; j < rd.dim(); ++j) {
            p.lambda[j] = frac(static_cast<long>(rng() % 9) - 4, 4);
            p.X.x[j] = frac(static_cast<long>(rng() % 9) - 4, 8);
        }
    } while (stabilizer_size(lf.realized_weyl, p.lambda) > 1);
    if (lambda_chamber(lf, p.lambda) != lc || x_chamber(xf, p.X) != xc)
        fail(Errc::MissingCalibration, "sample left the requested chambers");
    return p;
}

cplx exponential_sum(const GroupEntry& g, const CartanFrame& lf, const Vec& lambda, const CartanFrame& xf,
                     const TangentPoint& X, const CalibrationTable& t) {
    const auto& rd = *g.datum;
    cplx num = 0;
    for (size_t w = 0; w < t.coeffs.size(); ++w) {
        if (t.coeffs[w] == cplx(0)) continue;
        Mat m = signed_map_matrix(rd, t.maps[w]);
        num += t.coeffs[w] * std::exp(I * form_at(lf.sigma, lambda, m, xf.sigma, X));
    }
    cplx den = 1;
    for (int j = 0; j < rd.num_positive(); ++j) den *= root_at(xf.sigma, rd.root(j), X);
    return num / den;
}

double held_out_residual(const GroupEntry& g, const CalibrationTable& t, int pairs, std::uint64_t seed) {
    const auto& lf = g.frame(t.key.lambda_frame);
    const auto& xf = g.frame(t.key.x_frame);
    Signs lc = parse_signs(t.key.lambda_chamber);
    Signs xc = parse_signs(t.key.x_chamber);
    std::mt19937_64 rng(seed ^ fnv1a(key_string(t.key)) ^ 0x5bd1e995ULL);
    double worst = 0;
    for (int s = 0; s < pairs; ++s) {
        auto p = sample_pair(g, lf, lc, xf, xc, rng);
        cplx model = exponential_sum(g, lf, p.lambda, xf, p.X, t);
        cplx quad = orbit_quadrature(g, lf, p.lambda, xf, p.X);
        worst = std::max(worst, std::abs(model - quad));
    }
    return worst;
}

CalibrationTable calibrate_table(const GroupEntry& g, const CartanFrame& lf, const Signs& lc, const CartanFrame& xf,
                                 const Signs& xc, const CalibrationOptions& opt) {
    const auto& rd = *g.datum;
    CalibrationTable t;
    t.key = {g.name, lf.name, signs_string(lc), xf.name, signs_string(xc)};
    auto maps = exponent_group(g, lf, xf);
    for (const auto& m : maps) t.maps.push_back(signed_map_tokens(rd, m));

    std::mt19937_64 rng(opt.seed ^ fnv1a(key_string(t.key)));
    int n = static_cast<int>(maps.size());
    Eigen::MatrixXcd A(opt.samples, n);
    Eigen::VectorXcd b(opt.samples);
    for (int s = 0; s < opt.samples; ++s) {
        auto p = sample_pair(g, lf, lc, xf, xc, rng);
        cplx den = 1;
        for (int j = 0; j < rd.num_positive(); ++j) den *= root_at(xf.sigma, rd.root(j), p.X);
        for (int w = 0; w < n; ++w) A(s, w) = std::exp(I * form_at(lf.sigma, p.lambda, maps[w], xf.sigma, p.X)) / den;
        b(s) = orbit_quadrature(g, lf, p.lambda, xf, p.X);
    }
    Eigen::VectorXcd c = A.colPivHouseholderQr().solve(b);
    for (int w = 0; w < n; ++w) {
        // rationalize onto quarter-integer Gaussian values
        cplx v = c(w);
        cplx r(std::round(v.real() * 4) / 4, std::round(v.imag() * 4) / 4);
        bool exact = std::abs(v.real() - r.real()) < 1e-9 && std::abs(v.imag() - r.imag()) < 1e-9;
        t.coeffs.push_back(exact ? r : v);
        t.exact.push_back(exact);
    }
    t.samples = opt.samples;
    t.provenance = "calibrated against orbit quadrature, seed " + std::to_string(opt.seed);
    t.residual = held_out_residual(g, t, opt.held_out, opt.seed + 1);
    return t;
}

std::vector<CalibrationTable> calibrate_group(const GroupEntry& g, const CalibrationOptions& opt) {
    if (!calibratable(g)) fail(Errc::MissingCalibration, g.name + " is outside the orbit models");
    const auto& rd = *g.datum;
    int k = rd.num_positive();
    std::vector<Signs> chambers;
    for (int mask = 0; mask < (1 << k); ++mask) {
        Signs s;
        for (int j = 0; j < k; ++j) s.push_back((mask >> j) & 1 ? -1 : 1);
        chambers.push_back(s);
    }
    std::vector<CalibrationTable> out;
    for (const auto& lf : g.frames)
        for (const auto& xf : g.frames) {
            if (!all_imaginary(xf)) continue;
            for (const auto& lc : chambers)
                for (const auto& xc : chambers) out.push_back(calibrate_table(g, lf, lc, xf, xc, opt));
        }
    return out;
}

std::vector<std::string> weyl_constraint_violations(const GroupEntry& g, const CalibrationStore& store) {
    const auto& rd = *g.datum;
    int np = rd.num_positive();
    std::vector<std::string> out;
    // image chamber of a sign vector under a root permutation: signs of v^-1 alpha_j
    auto moved = [&](const Signs& c, const Mat& v) {
        auto perm = rd.permutation_of(inverse(v));
        Signs r;
        for (int j = 0; j < np; ++j) r.push_back(perm[j] < np ? c[perm[j]] : -c[perm[j] - np]);
        return r;
    };
    auto same = [](const CalibrationTable& a, int i, const CalibrationTable& b, int j, const cplx& f) {
        if (!a.exact[i] || !b.exact[j]) return std::abs(a.coeffs[i] - f * b.coeffs[j]) < 1e-9;
        return a.coeffs[i] == f * b.coeffs[j];
    };
    for (const auto& t : store.tables()) {
        if (t.key.group != g.name) continue;
        const auto& lf = g.frame(t.key.lambda_frame);
        const auto& xf = g.frame(t.key.x_frame);
        std::vector<Mat> maps;
        for (const auto& m : t.maps) maps.push_back(signed_map_matrix(rd, m));
        Signs lc = parse_signs(t.key.lambda_chamber);
        Signs xc = parse_signs(t.key.x_chamber);
        for (const auto& v : xf.realized_weyl) {
            CalibrationKey k = t.key;
            k.x_chamber = signs_string(moved(xc, v));
            const auto* u = store.find(k);
            if (!u) {
                out.push_back("missing table " + key_string(k));
                continue;
            }
            auto perm = rd.permutation_of(v);
            int eps = 1;
            for (int j = 0; j < np; ++j)
                if (perm[j] >= np) eps = -eps;
            Mat vinv = inverse(v);
            for (size_t w = 0; w < maps.size(); ++w) {
                int j = index_of_map(maps, vinv * maps[w]);
                if (j < 0 || !same(*u, static_cast<int>(w), t, j, cplx(eps)))
                    out.push_back("x-slot constraint fails on " + key_string(t.key) + " w=" + std::to_string(w));
            }
        }
        for (const auto& v : lf.realized_weyl) {
            CalibrationKey k = t.key;
            // chamber of v lambda: signs of <lambda, (v^-1 alpha)^vee>
            k.lambda_chamber = signs_string(moved(lc, v));
            const auto* u = store.find(k);
            if (!u) {
                out.push_back("missing table " + key_string(k));
                continue;
            }
            for (size_t w = 0; w < maps.size(); ++w) {
                int j = index_of_map(maps, maps[w] * v);
                if (j < 0 || !same(*u, static_cast<int>(w), t, j, cplx(1)))
                    out.push_back("lambda-slot constraint fails on " + key_string(t.key) + " w=" + std::to_string(w));
            }
        }
    }
    return out;
}

// ---- transforms ------------------------------------------------------------------------

cplx orbit_fourier_transform(const GroupEntry& g, const CartanFrame& lf, const Vec& lambda, const CartanFrame& xf,
                             const TangentPoint& X, const CalibrationStore& store) {
    Signs xc = x_chamber(xf, X);
    Signs lc = lambda_chamber(lf, lambda);
    CalibrationKey k{g.name, lf.name, signs_string(lc), xf.name, signs_string(xc)};
    const auto* t = store.find(k);
    if (!t) fail(Errc::MissingCalibration, "no table for " + key_string(k));
    return exponential_sum(g, lf, lambda, xf, X, *t) / static_cast<double>(stabilizer_size(lf.realized_weyl, lambda));
}

cplx limit_transform(const ParamTilde& pt, const PositiveSystemData& psd, const TangentPoint& X,
                     const CalibrationStore& store) {
    const auto& cat = builtin_catalog();
    if (!cat.has(pt.sys->group)) fail(Errc::MissingCalibration, "unknown group " + pt.sys->group);
    const auto& g = cat.group(pt.sys->group);
    if (g.frame_index(pt.sys->name) < 0) fail(Errc::MissingCalibration, "parameter is not on a catalog frame");
    const auto& lf = g.frame(pt.sys->name);
    const auto& xf = g.frames[g.fundamental_index()];
    Signs xc = x_chamber(xf, X);
    if (!is_regular_chamber(pt) || !classify_param(pt).in_reg) return 0;
    Signs lc = lambda_chamber(lf, psd.lambda_plus);
    CalibrationKey k{g.name, lf.name, signs_string(lc), xf.name, signs_string(xc)};
    const auto* t = store.find(k);
    if (!t) fail(Errc::MissingCalibration, "no table for " + key_string(k));
    // the exponential sum at lambda_t counts G . lambda_t |W(G,h)(lambda_t)| times
    return exponential_sum(g, lf, pt.lambda, xf, X, *t) /
           static_cast<double>(stabilizer_size(lf.realized_weyl, psd.lambda_plus));
}

cplx factorized_limit_transform(const ParamTilde& pt, const std::vector<Mat>& weyl, const TangentPoint& X,
                                const CalibrationStore& store) {
    const auto& s = *pt.sys;
    if (!roots_orthogonal(s)) fail(Errc::MissingCalibration, "orbit models cover orthogonal roots only");
    for (int i = 0; i < s.npos; ++i)
        if (!is_imaginary(s.labels[i])) fail(Errc::MissingCalibration, "factorized transforms need imaginary roots");
    if (X.scale == 0) fail(Errc::SingularX, "X is zero");
    for (int i = 0; i < s.npos; ++i)
        if (dot(s.roots[i], X.x) == 0) fail(Errc::SingularX, "a root vanishes on X");
    if (!is_regular_chamber(pt) || !classify_param(pt).in_reg) return 0;

    std::vector<int> compact;
    for (int i = 0; i < s.npos; ++i)
        if (s.labels[i] == RootLabel::ImaginaryCompact) compact.push_back(i);
    auto w0 = weyl_of(s, compact);
    std::vector<std::pair<Vec, Vec>> reps;
    Vec rho = pt.rho_f();
    for (const auto& w : weyl) {
        std::pair<Vec, Vec> p{w * pt.lambda, w * rho};
        bool known = false;
        for (const auto& r : reps)
            for (const auto& v : w0)
                if (v * r.first == p.first && v * r.second == p.second) known = true;
        if (!known) reps.push_back(p);
    }

    auto rank_one = [&](RootLabel lab, int lsign, int xsign) {
        CalibrationKey k{lab == RootLabel::ImaginaryCompact ? "su2" : "sl2R", "compact", lsign > 0 ? "+" : "-",
                         "compact", xsign > 0 ? "+" : "-"};
        const auto* t = store.find(k);
        if (!t) fail(Errc::MissingCalibration, "no table for " + key_string(k));
        cplx c[2] = {0, 0};
        for (size_t w = 0; w < t->maps.size(); ++w) {
            if (t->maps[w] == "+0") c[0] = t->coeffs[w];
            else if (t->maps[w] == "-0") c[1] = t->coeffs[w];
        }
        return std::pair<cplx, cplx>{c[0], c[1]};
    };

    std::vector<Vec> roots, coroots;
    for (int i = 0; i < s.npos; ++i) {
        roots.push_back(s.roots[i]);
        coroots.push_back(s.coroots[i]);
    }
    TangentPoint Z{central_part(roots, coroots, X.x), X.scale};
    cplx total = 0;
    for (const auto& [mu, r] : reps) {
        cplx v = std::exp(I * form_at(s.sigma, mu, Mat::identity(s.dim), s.sigma, Z));
        for (int j = 0; j < s.npos; ++j) {
            Q n = s.pairing(mu, j);
            int lsign = sgn(n) != 0 ? sgn(n) : sgn(s.pairing(r, j));
            double theta = X.scale * to_double(dot(s.roots[j], X.x));
            auto [cp, cm] = rank_one(s.labels[j], lsign, sign_of(theta));
            double u0 = to_double(n) * theta / 2;
            v *= (cp * std::exp(I * u0) + cm * std::exp(-I * u0)) / (I * theta);
        }
        total += v;
    }
    auto psd = build_positive_system(pt);
    double ratio = static_cast<double>(stabilizer_size(weyl, psd.lambda_t(frac(1, 2)))) /
                   static_cast<double>(stabilizer_size(weyl, psd.lambda_plus));
    return ratio * total;
}

}  // namespace orbitlab
