#include "orbitlab/rootdata.hpp"

#include "orbitlab/errors.hpp"

#include <algorithm>
#include <deque>
#include <numeric>
#include <set>

namespace orbitlab {

namespace {

constexpr long kWeylGuard = 1000000;

bool valid_factor(const SimpleFactor& f) {
    if (f.series == "A") return f.rank >= 1;
    if (f.series == "B" || f.series == "C") return f.rank >= 2;
    if (f.series == "D") return f.rank >= 4;
    if (f.series == "G") return f.rank == 2;
    if (f.series == "F") return f.rank == 4;
    return false;
}

// Bourbaki numbering, entry (i,j) = <alpha_i, alpha_j^vee>
Mat factor_cartan(const SimpleFactor& f) {
    int n = f.rank;
    Mat c(n, n);
    for (int i = 0; i < n; ++i) c(i, i) = 2;
    auto link = [&](int i, int j, int cij, int cji) {
        c(i, j) = cij;
        c(j, i) = cji;
    };
    if (f.series == "A") {
        for (int i = 0; i + 1 < n; ++i) link(i, i + 1, -1, -1);
    } else if (f.series == "B") {
        for (int i = 0; i + 2 < n; ++i) link(i, i + 1, -1, -1);
        link(n - 2, n - 1, -2, -1);
    } else if (f.series == "C") {
        for (int i = 0; i + 2 < n; ++i) link(i, i + 1, -1, -1);
        link(n - 2, n - 1, -1, -2);
    } else if (f.series == "D") {
        for (int i = 0; i + 2 < n; ++i) link(i, i + 1, -1, -1);
        link(n - 3, n - 1, -1, -1);
    } else if (f.series == "G") {
        link(0, 1, -1, -3);
    } else if (f.series == "F") {
        link(0, 1, -1, -1);
        link(1, 2, -2, -1);
        link(2, 3, -1, -1);
    }
    return c;
}

// (alpha_i, alpha_i)/2 with long roots of squared length 2
std::vector<Q> factor_half_lengths(const SimpleFactor& f) {
    int n = f.rank;
    std::vector<Q> d(n, Q(1));
    if (f.series == "B") d[n - 1] = frac(1, 2);
    if (f.series == "C")
        for (int i = 0; i + 1 < n; ++i) d[i] = frac(1, 2);
    if (f.series == "G") d[0] = frac(1, 3);
    if (f.series == "F") d[2] = d[3] = frac(1, 2);
    return d;
}

long factorial(int n) {
    long r = 1;
    for (int i = 2; i <= n; ++i) r *= i;
    return r;
}

}  // namespace

long weyl_order_of(const SimpleFactor& f) {
    if (f.series == "A") return factorial(f.rank + 1);
    if (f.series == "B" || f.series == "C") return (1L << f.rank) * factorial(f.rank);
    if (f.series == "D") return (1L << (f.rank - 1)) * factorial(f.rank);
    if (f.series == "G") return 12;
    if (f.series == "F") return 1152;
    return 0;
}

long root_count_of(const SimpleFactor& f) {
    long n = f.rank;
    if (f.series == "A") return n * (n + 1);
    if (f.series == "B" || f.series == "C") return 2 * n * n;
    if (f.series == "D") return 2 * n * (n - 1);
    if (f.series == "G") return 12;
    if (f.series == "F") return 48;
    return 0;
}

std::vector<SimpleFactor> parse_factors(const std::string& raw) {
    std::vector<SimpleFactor> out;
    std::string s;
    for (char c : raw)
        if (!std::isspace(static_cast<unsigned char>(c))) s += c;
    if (s.empty() || s == "none") return out;
    size_t pos = 0;
    while (pos < s.size()) {
        size_t next = s.find('x', pos);
        std::string tok = s.substr(pos, next == std::string::npos ? std::string::npos : next - pos);
        pos = next == std::string::npos ? s.size() : next + 1;
        if (tok.size() < 2 || !std::isupper(static_cast<unsigned char>(tok[0])))
            fail(Errc::UnsupportedSeries, "bad factor '" + tok + "'");
        SimpleFactor f;
        f.series = tok.substr(0, 1);
        try {
            f.rank = std::stoi(tok.substr(1));
        } catch (...) {
            fail(Errc::UnsupportedSeries, "bad factor '" + tok + "'");
        }
        out.push_back(f);
    }
    return out;
}

std::string factors_string(const std::vector<SimpleFactor>& f) {
    std::string s;
    for (size_t i = 0; i < f.size(); ++i) {
        if (i) s += "x";
        s += f[i].series + std::to_string(f[i].rank);
    }
    return s.empty() ? "none" : s;
}

RootDatum RootDatum::build(const std::vector<SimpleFactor>& factors, int rank_center) {
    int rank_ss = 0;
    for (const auto& f : factors) {
        if (!valid_factor(f)) fail(Errc::UnsupportedSeries, f.series + std::to_string(f.rank));
        rank_ss += f.rank;
    }
    if (rank_center < 0) fail(Errc::RankTooLarge, "negative center rank");
    if (rank_ss + rank_center > 8) fail(Errc::RankTooLarge, std::to_string(rank_ss + rank_center));

    RootDatum rd;
    rd.factors_ = factors;
    rd.rank_ss_ = rank_ss;
    rd.rank_center_ = rank_center;
    rd.dim_ = rank_ss + rank_center;

    Mat c(rank_ss, rank_ss);
    std::vector<Q> d(rank_ss);
    std::vector<int> simple_factor(rank_ss);
    int off = 0;
    for (size_t fi = 0; fi < factors.size(); ++fi) {
        Mat cf = factor_cartan(factors[fi]);
        auto df = factor_half_lengths(factors[fi]);
        for (int i = 0; i < factors[fi].rank; ++i) {
            d[off + i] = df[i];
            simple_factor[off + i] = static_cast<int>(fi);
            for (int j = 0; j < factors[fi].rank; ++j) c(off + i, off + j) = cf(i, j);
        }
        off += factors[fi].rank;
    }
    rd.cartan_ = c;

    // weight form: D (C^T)^{-1} on the semisimple block, identity on the center
    Mat form = Mat::identity(rd.dim_);
    if (rank_ss > 0) {
        Mat dm(rank_ss, rank_ss);
        for (int i = 0; i < rank_ss; ++i) dm(i, i) = d[i];
        Mat m = dm * inverse(transpose(c));
        for (int i = 0; i < rank_ss; ++i)
            for (int j = 0; j < rank_ss; ++j) form(i, j) = m(i, j);
    }
    rd.form_ = form;

    // positive roots by reflection closure in simple-root coordinates
    std::set<std::vector<int>> seen;
    std::deque<std::vector<int>> todo;
    for (int i = 0; i < rank_ss; ++i) {
        std::vector<int> e(rank_ss, 0);
        e[i] = 1;
        seen.insert(e);
        todo.push_back(e);
    }
    while (!todo.empty()) {
        auto b = todo.front();
        todo.pop_front();
        for (int i = 0; i < rank_ss; ++i) {
            long p = 0;
            for (int j = 0; j < rank_ss; ++j) p += static_cast<long>(b[j]) * c(j, i).get_num().get_si();
            auto r = b;
            r[i] -= static_cast<int>(p);
            bool pos = std::all_of(r.begin(), r.end(), [](int x) { return x >= 0; });
            bool nz = std::any_of(r.begin(), r.end(), [](int x) { return x != 0; });
            if (pos && nz && !seen.count(r)) {
                seen.insert(r);
                todo.push_back(r);
            }
        }
    }
    std::vector<std::vector<int>> pos(seen.begin(), seen.end());
    std::sort(pos.begin(), pos.end(), [](const auto& x, const auto& y) {
        int hx = std::accumulate(x.begin(), x.end(), 0), hy = std::accumulate(y.begin(), y.end(), 0);
        if (hx != hy) return hx < hy;
        return x > y;
    });
    rd.npos_ = static_cast<int>(pos.size());
    for (int sign : {1, -1}) {
        for (const auto& b : pos) {
            Vec w = zeros(rd.dim_);
            for (int k = 0; k < rank_ss; ++k) {
                Q s = 0;
                for (int j = 0; j < rank_ss; ++j) s += b[j] * c(j, k);
                w[k] = sign * s;
            }
            std::vector<int> sc = b;
            for (auto& x : sc) x *= sign;
            rd.roots_.push_back(w);
            rd.simple_coords_.push_back(sc);
            int fi = -1;
            for (int j = 0; j < rank_ss; ++j)
                if (b[j] != 0) fi = simple_factor[j];
            rd.root_factor_.push_back(fi);
        }
    }
    rd.finish();

    long expected = 0;
    for (const auto& f : factors) expected += root_count_of(f);
    if (expected != rd.num_roots()) fail(Errc::UnsupportedSeries, "root count mismatch");
    return rd;
}

RootDatum RootDatum::subsystem(int dim, const Mat& form, std::vector<Vec> positive_roots,
                               std::vector<Vec> positive_coroots) {
    RootDatum rd;
    rd.dim_ = dim;
    rd.form_ = form;
    rd.npos_ = static_cast<int>(positive_roots.size());
    rd.roots_ = positive_roots;
    rd.coroots_ = positive_coroots;
    for (const auto& r : positive_roots) rd.roots_.push_back(neg(r));
    for (const auto& r : positive_coroots) rd.coroots_.push_back(neg(r));
    auto span = row_basis(positive_roots, dim);
    rd.rank_ss_ = static_cast<int>(span.size());
    rd.rank_center_ = dim - rd.rank_ss_;
    rd.finish();
    return rd;
}

void RootDatum::finish() {
    if (coroots_.empty()) {
        for (const auto& r : roots_) {
            Vec mr = form_ * r;
            Q len = dot(r, mr);
            coroots_.push_back(scale(Q(2) / len, mr));
        }
    }
    for (size_t i = 0; i < roots_.size(); ++i) index_[roots_[i]] = static_cast<int>(i);
    // simple roots: positive roots that are not a sum of two positive roots
    simple_.clear();
    for (int i = 0; i < npos_; ++i) {
        bool decomposable = false;
        for (int j = 0; j < npos_ && !decomposable; ++j) {
            if (j == i) continue;
            Vec rest = sub(roots_[i], roots_[j]);
            auto it = index_.find(rest);
            if (it != index_.end() && it->second < npos_) decomposable = true;
        }
        if (!decomposable) simple_.push_back(i);
    }
}

const Vec& RootDatum::root(int i) const {
    if (i < 0 || i >= num_roots()) fail(Errc::NotARoot, "root index " + std::to_string(i));
    return roots_[i];
}

const Vec& RootDatum::coroot(int i) const {
    if (i < 0 || i >= num_roots()) fail(Errc::NotARoot, "root index " + std::to_string(i));
    return coroots_[i];
}

int RootDatum::index_of(const Vec& v) const {
    auto it = index_.find(v);
    return it == index_.end() ? -1 : it->second;
}

int RootDatum::height(int i) const {
    if (simple_coords_.empty()) return is_positive(i) ? 1 : -1;
    return std::accumulate(simple_coords_[i].begin(), simple_coords_[i].end(), 0);
}

Q RootDatum::pairing(const Vec& lambda, int alpha) const { return dot(lambda, coroot(alpha)); }

Q RootDatum::form_pair(const Vec& a, const Vec& b) const { return dot(a, form_ * b); }

Mat RootDatum::reflection(int alpha) const {
    const Vec& r = root(alpha);
    const Vec& c = coroot(alpha);
    Mat m = Mat::identity(dim_);
    for (int i = 0; i < dim_; ++i)
        for (int j = 0; j < dim_; ++j) m(i, j) -= r[i] * c[j];
    return m;
}

Vec RootDatum::reflect(int alpha, const Vec& v) const {
    return sub(v, scale(pairing(v, alpha), root(alpha)));
}

Vec RootDatum::rho() const {
    Vec s = zeros(dim_);
    for (int i = 0; i < npos_; ++i) s = add(s, roots_[i]);
    return scale(frac(1, 2), s);
}

std::vector<int> RootDatum::permutation_of(const Mat& m) const {
    std::vector<int> perm(roots_.size());
    for (size_t i = 0; i < roots_.size(); ++i) {
        int j = index_of(m * roots_[i]);
        if (j < 0) return {};
        perm[i] = j;
    }
    return perm;
}

int RootDatum::weyl_order_formula() const {
    if (factors_.empty() && npos_ > 0) return -1;
    long p = 1;
    for (const auto& f : factors_) {
        p *= weyl_order_of(f);
        if (p > kWeylGuard) return static_cast<int>(kWeylGuard + 1);
    }
    return static_cast<int>(p);
}

const std::vector<WeylElement>& RootDatum::weyl_group() const {
    std::lock_guard<std::mutex> lock(*weyl_mu_);
    if (weyl_) return *weyl_;
    long bound = weyl_order_formula();
    if (bound > kWeylGuard) fail(Errc::GroupTooLarge, "Weyl group order exceeds 10^6");
    std::vector<Mat> gens;
    std::vector<std::vector<int>> gen_perm;
    for (int s : simple_) {
        gens.push_back(reflection(s));
        gen_perm.push_back(permutation_of(gens.back()));
    }
    auto out = std::make_shared<std::vector<WeylElement>>();
    std::map<std::vector<int>, int> seen;
    WeylElement id;
    id.matrix = Mat::identity(dim_);
    id.root_perm.resize(roots_.size());
    std::iota(id.root_perm.begin(), id.root_perm.end(), 0);
    id.length = 0;
    seen[id.root_perm] = 0;
    out->push_back(id);
    for (size_t head = 0; head < out->size(); ++head) {
        for (size_t g = 0; g < gens.size(); ++g) {
            const WeylElement& w = (*out)[head];
            std::vector<int> perm(roots_.size());
            for (size_t i = 0; i < perm.size(); ++i) perm[i] = gen_perm[g][w.root_perm[i]];
            if (seen.count(perm)) continue;
            WeylElement nw;
            nw.matrix = gens[g] * w.matrix;
            nw.root_perm = perm;
            nw.length = w.length + 1;
            seen[perm] = static_cast<int>(out->size());
            out->push_back(std::move(nw));
            if (static_cast<long>(out->size()) > kWeylGuard)
                fail(Errc::GroupTooLarge, "Weyl group order exceeds 10^6");
        }
    }
    weyl_ = out;
    return *weyl_;
}

std::vector<Mat> RootDatum::diagram_automorphisms() const {
    std::vector<Mat> out;
    int n = static_cast<int>(simple_.size());
    std::vector<int> p(n);
    std::iota(p.begin(), p.end(), 0);
    do {
        // candidate: simple root simple_[i] goes to simple_[p[i]]
        bool ok = true;
        for (int i = 0; i < n && ok; ++i)
            for (int j = 0; j < n && ok; ++j)
                if (pairing(roots_[simple_[i]], simple_[j]) != pairing(roots_[simple_[p[i]]], simple_[p[j]]))
                    ok = false;
        if (!ok) continue;
        // linear map fixing the orthogonal complement of the root span
        std::vector<Vec> src, dst;
        for (int i = 0; i < n; ++i) {
            src.push_back(roots_[simple_[i]]);
            dst.push_back(roots_[simple_[p[i]]]);
        }
        Mat rows = Mat::from_rows(src);
        Mat fm = form_;
        // complement: vectors orthogonal to all roots under the form
        std::vector<Vec> comp = n ? nullspace(rows * fm) : std::vector<Vec>{};
        if (n == 0)
            for (int i = 0; i < dim_; ++i) {
                Vec e = zeros(dim_);
                e[i] = 1;
                comp.push_back(e);
            }
        std::vector<Vec> s_all = src, d_all = dst;
        for (const auto& v : comp) {
            s_all.push_back(v);
            d_all.push_back(v);
        }
        Mat sm = transpose(Mat::from_rows(s_all)), dmat = transpose(Mat::from_rows(d_all));
        out.push_back(dmat * inverse(sm));
    } while (std::next_permutation(p.begin(), p.end()));
    return out;
}

std::vector<Mat> RootDatum::automorphisms() const {
    std::vector<Mat> out;
    std::set<std::vector<int>> seen;
    for (const auto& d : diagram_automorphisms())
        for (const auto& w : weyl_group()) {
            Mat m = w.matrix * d;
            auto perm = permutation_of(m);
            if (seen.insert(perm).second) out.push_back(m);
        }
    return out;
}

}  // namespace orbitlab
