#include "orbitlab/realform.hpp"

#include "orbitlab/errors.hpp"

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

namespace orbitlab {

const char* label_token(RootLabel l) {
    switch (l) {
    case RootLabel::Real: return "R";
    case RootLabel::ImaginaryCompact: return "IC";
    case RootLabel::ImaginaryNoncompact: return "IN";
    case RootLabel::Complex: return "C";
    }
    return "?";
}

bool is_imaginary(RootLabel l) {
    return l == RootLabel::ImaginaryCompact || l == RootLabel::ImaginaryNoncompact;
}

Vec CartanFrame::t_part(const Vec& v) const { return scale(frac(1, 2), sub(v, sigma * v)); }
Vec CartanFrame::a_part(const Vec& v) const { return scale(frac(1, 2), add(v, sigma * v)); }
Vec CartanFrame::sigma_coroot(const Vec& z) const { return transpose(sigma) * z; }

int GroupEntry::frame_index(const std::string& frame_name) const {
    for (size_t i = 0; i < frames.size(); ++i)
        if (frames[i].name == frame_name) return static_cast<int>(i);
    return -1;
}

const CartanFrame& GroupEntry::frame(const std::string& frame_name) const {
    int i = frame_index(frame_name);
    if (i < 0) fail(Errc::Usage, "group " + name + " has no frame '" + frame_name + "'");
    return frames[i];
}

int GroupEntry::fundamental_index() const {
    for (size_t i = 0; i < frames.size(); ++i)
        if (frames[i].fundamental) return static_cast<int>(i);
    return -1;
}

int GroupEntry::split_index() const {
    for (size_t i = 0; i < frames.size(); ++i)
        if (frames[i].split) return static_cast<int>(i);
    return -1;
}

const GroupEntry& Catalog::group(const std::string& name) const {
    for (const auto& g : groups)
        if (g.name == name) return g;
    fail(Errc::Usage, "unknown group '" + name + "'");
}

bool Catalog::has(const std::string& name) const {
    return std::any_of(groups.begin(), groups.end(), [&](const auto& g) { return g.name == name; });
}

std::vector<Mat> generate_group(const std::vector<Mat>& gens, int dim, size_t bound) {
    std::vector<Mat> out{Mat::identity(dim)};
    std::set<Mat> seen{out[0]};
    for (size_t head = 0; head < out.size(); ++head)
        for (const auto& g : gens) {
            Mat m = g * out[head];
            if (seen.insert(m).second) {
                out.push_back(m);
                if (out.size() > bound) fail(Errc::GroupTooLarge, "generated group too large");
            }
        }
    return out;
}

namespace {

std::vector<std::string> split_ws(const std::string& s) {
    std::istringstream is(s);
    std::vector<std::string> out;
    std::string t;
    while (is >> t) out.push_back(t);
    return out;
}

std::vector<std::string> split_on(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : s) {
        if (c == sep) {
            out.push_back(cur);
            cur.clear();
        } else {
            cur += c;
        }
    }
    out.push_back(cur);
    return out;
}

std::string trim(const std::string& s) {
    size_t a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos) return "";
    size_t b = s.find_last_not_of(" \t\r");
    return s.substr(a, b - a + 1);
}

struct RawSection {
    std::string kind;
    int line = 0;
    std::map<std::string, std::string> fields;
};

const std::map<std::string, std::set<std::string>> kAllowed = {
    {"group", {"name", "factors", "center_rank", "connected"}},
    {"frame", {"name", "labels", "sigma", "kernel_lattice", "automorphisms"}},
    {"automorphism", {"name", "automorphisms"}},
};

const std::set<std::string> kKnownFields = {"name",  "factors",        "center_rank", "labels",
                                            "sigma", "kernel_lattice", "connected",   "automorphisms"};

std::string req(const RawSection& s, const std::string& key) {
    auto it = s.fields.find(key);
    if (it == s.fields.end())
        fail(Errc::ParseError, "line " + std::to_string(s.line) + ": [" + s.kind + "] missing field '" + key + "'");
    return it->second;
}

RootLabel parse_label(const std::string& t, int line) {
    if (t == "R") return RootLabel::Real;
    if (t == "IC") return RootLabel::ImaginaryCompact;
    if (t == "IN") return RootLabel::ImaginaryNoncompact;
    if (t == "C") return RootLabel::Complex;
    fail(Errc::ParseError, "line " + std::to_string(line) + ": bad label token '" + t + "'");
}

std::vector<Mat> parse_maps(const RootDatum& rd, const std::string& value) {
    std::vector<Mat> out;
    for (const auto& part : split_on(value, ';')) {
        if (trim(part).empty()) continue;
        out.push_back(signed_map_matrix(rd, part));
    }
    return out;
}

void build_frame(CartanFrame& f, const RawSection& s) {
    const RootDatum& rd = *f.datum;
    int p = rd.num_positive();
    auto toks = split_ws(req(s, "labels"));
    if (static_cast<int>(toks.size()) != p)
        fail(Errc::ParseError, "line " + std::to_string(s.line) + ": expected " + std::to_string(p) + " labels");
    f.labels.resize(rd.num_roots());
    for (int i = 0; i < p; ++i) f.labels[i] = f.labels[i + p] = parse_label(toks[i], s.line);

    f.sigma = signed_map_matrix(rd, req(s, "sigma"));
    const std::string who = f.group + "/" + f.name;
    if (f.sigma * f.sigma != Mat::identity(rd.dim())) fail(Errc::InconsistentFrame, who + ": sigma is not an involution");
    if (transpose(f.sigma) * rd.form() * f.sigma != rd.form())
        fail(Errc::InconsistentFrame, who + ": sigma does not preserve the form");
    f.sigma_perm = rd.permutation_of(f.sigma);
    for (int i = 0; i < rd.num_roots(); ++i) {
        int j = f.sigma_perm[i];
        RootLabel l = f.labels[i];
        bool ok = (l == RootLabel::Real) == (j == i) && is_imaginary(l) == (j == rd.negative_of(i));
        if (!ok) fail(Errc::InconsistentFrame, who + ": label of root " + std::to_string(i) + " disagrees with sigma");
    }
    // compactness is a Z/2 grading on the imaginary roots
    for (int a = 0; a < rd.num_roots(); ++a)
        for (int b = 0; b < rd.num_roots(); ++b) {
            if (!f.is_imaginary_root(a) || !f.is_imaginary_root(b)) continue;
            int c = rd.index_of(add(rd.root(a), rd.root(b)));
            if (c < 0) continue;
            int ga = f.labels[a] == RootLabel::ImaginaryNoncompact;
            int gb = f.labels[b] == RootLabel::ImaginaryNoncompact;
            int gc = f.labels[c] == RootLabel::ImaginaryNoncompact;
            if ((ga + gb) % 2 != gc) fail(Errc::InconsistentFrame, who + ": compactness labels are not a grading");
        }

    Mat plus = f.sigma + Mat::identity(rd.dim());
    f.dim_t = static_cast<int>(nullspace(plus).size());
    f.dim_a = rd.dim() - f.dim_t;

    std::string kl = trim(req(s, "kernel_lattice"));
    if (!kl.empty())
        for (const auto& row : split_on(kl, ';')) {
            Vec v = parse_vector(row);
            if (static_cast<int>(v.size()) != rd.dim())
                fail(Errc::ParseError, "line " + std::to_string(s.line) + ": kernel_lattice row has wrong length");
            f.kernel_lattice.push_back(v);
        }
    if (static_cast<int>(f.kernel_lattice.size()) != f.dim_t)
        fail(Errc::InconsistentFrame, who + ": kernel lattice rank differs from dim t");
    if (static_cast<int>(row_basis(f.kernel_lattice, rd.dim()).size()) != f.dim_t)
        fail(Errc::InconsistentFrame, who + ": kernel lattice vectors are dependent");
    for (const auto& z : f.kernel_lattice)
        if (f.sigma_coroot(z) != neg(z)) fail(Errc::InconsistentFrame, who + ": kernel lattice not in t");

    f.weyl_gens = parse_maps(rd, req(s, "automorphisms"));
    for (const auto& g : f.weyl_gens) {
        if (g * f.sigma != f.sigma * g) fail(Errc::InconsistentFrame, who + ": Weyl generator does not commute with sigma");
        auto perm = rd.permutation_of(g);
        for (int i = 0; i < rd.num_roots(); ++i)
            if (f.labels[perm[i]] != f.labels[i]) fail(Errc::InconsistentFrame, who + ": Weyl generator moves labels");
    }
    f.realized_weyl = generate_group(f.weyl_gens, rd.dim());
    f.fundamental = std::none_of(f.labels.begin(), f.labels.end(), [](RootLabel l) { return l == RootLabel::Real; });
}

void compute_center(GroupEntry& g) {
    int fi = g.fundamental_index();
    const CartanFrame& f = g.frames[fi];
    const RootDatum& rd = *g.datum;
    int n = f.dim_t;
    if (n > 3) return;
    const int steps = 8;  // coefficients k/4 in [0, 2)
    std::vector<int> c(n, 0);
    while (true) {
        Vec h = zeros(rd.dim());
        for (int i = 0; i < n; ++i) h = add(h, scale(frac(c[i], 4), f.kernel_lattice[i]));
        bool central = true;
        for (int a = 0; a < rd.num_roots() && central; ++a) {
            Q v = dot(rd.root(a), h);
            if (v.get_den() != 1 || v.get_num() % 2 != 0) central = false;
        }
        if (central) g.center_elements.push_back(h);
        int k = 0;
        while (k < n && ++c[k] == steps) c[k++] = 0;
        if (k == n) break;
    }
}

}  // namespace

Mat signed_map_matrix(const RootDatum& rd, const std::string& tokens) {
    auto toks = split_ws(tokens);
    int p = rd.num_positive();
    int rc = rd.rank_center();
    if (static_cast<int>(toks.size()) != p + rc)
        fail(Errc::ParseError, "expected " + std::to_string(p + rc) + " tokens in '" + tokens + "'");
    std::vector<int> target(p), sign(p);
    for (int j = 0; j < p; ++j) {
        const std::string& t = toks[j];
        if (t.size() < 2 || (t[0] != '+' && t[0] != '-') || !std::isdigit(static_cast<unsigned char>(t[1])))
            fail(Errc::ParseError, "bad root token '" + t + "'");
        sign[j] = t[0] == '+' ? 1 : -1;
        target[j] = std::stoi(t.substr(1));
        if (target[j] >= p) fail(Errc::ParseError, "root token out of range '" + t + "'");
    }
    std::vector<Vec> basis, images;
    for (int s : rd.simple_roots()) {
        basis.push_back(rd.root(s));
        images.push_back(scale(Q(sign[s]), rd.root(target[s])));
    }
    int ss = rd.rank_ss();
    for (int k = 0; k < rc; ++k) {
        const std::string& t = toks[p + k];
        if (t.size() < 3 || (t[0] != '+' && t[0] != '-') || t[1] != 'c')
            fail(Errc::ParseError, "bad central token '" + t + "'");
        int tk = std::stoi(t.substr(2));
        if (tk >= rc) fail(Errc::ParseError, "central token out of range '" + t + "'");
        Vec e = zeros(rd.dim()), img = zeros(rd.dim());
        e[ss + k] = 1;
        img[ss + tk] = t[0] == '+' ? 1 : -1;
        basis.push_back(e);
        images.push_back(img);
    }
    Mat b = transpose(Mat::from_rows(basis)), im = transpose(Mat::from_rows(images));
    Mat m = im * inverse(b);
    for (int j = 0; j < p; ++j)
        if (m * rd.root(j) != scale(Q(sign[j]), rd.root(target[j])))
            fail(Errc::InconsistentFrame, "signed map '" + tokens + "' is not linear on roots");
    return m;
}

std::string signed_map_tokens(const RootDatum& rd, const Mat& m) {
    std::string s;
    int p = rd.num_positive();
    for (int j = 0; j < p; ++j) {
        int k = rd.index_of(m * rd.root(j));
        if (k < 0) fail(Errc::InconsistentFrame, "map does not permute roots");
        if (j) s += " ";
        s += (rd.is_positive(k) ? "+" : "-") + std::to_string(rd.positive_index(k));
    }
    int ss = rd.rank_ss();
    for (int c = 0; c < rd.rank_center(); ++c) {
        Vec e = zeros(rd.dim());
        e[ss + c] = 1;
        Vec img = m * e;
        int tgt = -1, sg = 0;
        for (int k = 0; k < rd.rank_center(); ++k)
            if (img[ss + k] != 0) {
                tgt = k;
                sg = sgn(img[ss + k]);
            }
        s += std::string(" ") + (sg > 0 ? "+c" : "-c") + std::to_string(tgt);
    }
    return s;
}

bool frames_conjugate(const RootDatum& rd, const Mat& sigma, const std::vector<RootLabel>& labels,
                      const Mat& target_sigma, const std::vector<RootLabel>& target_labels, Mat* w_out) {
    for (const auto& w : rd.weyl_group()) {
        if (w.matrix * sigma != target_sigma * w.matrix) continue;
        bool ok = true;
        for (int i = 0; i < rd.num_roots() && ok; ++i)
            if (target_labels[w.root_perm[i]] != labels[i]) ok = false;
        if (!ok) continue;
        if (w_out) *w_out = w.matrix;
        return true;
    }
    return false;
}

RootLabel classify_root(const CartanFrame& frame, int alpha) {
    if (alpha < 0 || alpha >= frame.rd().num_roots()) fail(Errc::NotARoot, std::to_string(alpha));
    return frame.labels[alpha];
}

FrameProperties frame_properties(const CartanFrame& frame) {
    FrameProperties p;
    p.fundamental = frame.fundamental;
    p.split = frame.split;
    p.no_imaginary = std::none_of(frame.labels.begin(), frame.labels.end(), is_imaginary);
    return p;
}

CayleyResult cayley_transform(const GroupEntry& g, int frame_idx, int alpha) {
    const CartanFrame& f = g.frames.at(frame_idx);
    const RootDatum& rd = f.rd();
    if (classify_root(f, alpha) != RootLabel::ImaginaryNoncompact)
        fail(Errc::WrongLabel, "Cayley transform needs a noncompact imaginary root");
    CayleyResult r;
    r.sigma = rd.reflection(alpha) * f.sigma;
    auto perm = rd.permutation_of(r.sigma);
    r.labels.resize(rd.num_roots());
    for (int b = 0; b < rd.num_roots(); ++b) {
        if (perm[b] == b) {
            r.labels[b] = RootLabel::Real;
        } else if (perm[b] == rd.negative_of(b)) {
            // new imaginary roots are old imaginary roots orthogonal to alpha
            if (!f.is_imaginary_root(b) || rd.pairing(rd.root(b), alpha) != 0)
                fail(Errc::InconsistentFrame, "unexpected imaginary root after Cayley transform");
            bool flip = rd.index_of(add(rd.root(b), rd.root(alpha))) >= 0 ||
                        rd.index_of(sub(rd.root(b), rd.root(alpha))) >= 0;
            RootLabel old = f.labels[b];
            r.labels[b] = flip ? (old == RootLabel::ImaginaryCompact ? RootLabel::ImaginaryNoncompact
                                                                     : RootLabel::ImaginaryCompact)
                               : old;
        } else {
            r.labels[b] = RootLabel::Complex;
        }
    }
    r.dim_t = static_cast<int>(nullspace(r.sigma + Mat::identity(rd.dim())).size());
    for (size_t k = 0; k < g.frames.size(); ++k) {
        Mat w;
        if (frames_conjugate(rd, r.sigma, r.labels, g.frames[k].sigma, g.frames[k].labels, &w)) {
            r.matched_frame = static_cast<int>(k);
            r.conjugator = w;
            return r;
        }
    }
    // conjugacy through the component group
    for (const auto& a : g.automorphisms) {
        auto pa = rd.permutation_of(a.matrix);
        Mat s2 = a.matrix * r.sigma * inverse(a.matrix);
        std::vector<RootLabel> l2(rd.num_roots());
        for (int i = 0; i < rd.num_roots(); ++i) l2[pa[i]] = r.labels[i];
        for (size_t k = 0; k < g.frames.size(); ++k) {
            Mat w;
            if (frames_conjugate(rd, s2, l2, g.frames[k].sigma, g.frames[k].labels, &w)) {
                r.matched_frame = static_cast<int>(k);
                r.conjugator = w * a.matrix;
                return r;
            }
        }
    }
    return r;
}

Catalog load_catalog(const std::string& text) {
    std::vector<RawSection> sections;
    std::istringstream is(text);
    std::string line;
    int lineno = 0;
    bool saw_version = false;
    while (std::getline(is, line)) {
        ++lineno;
        auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']') fail(Errc::ParseError, "line " + std::to_string(lineno) + ": bad section header");
            RawSection s;
            s.kind = line.substr(1, line.size() - 2);
            s.line = lineno;
            if (!kAllowed.count(s.kind))
                fail(Errc::ParseError, "line " + std::to_string(lineno) + ": unknown section [" + s.kind + "]");
            sections.push_back(s);
            continue;
        }
        auto eq = line.find('=');
        if (eq == std::string::npos) fail(Errc::ParseError, "line " + std::to_string(lineno) + ": expected key = value");
        std::string key = trim(line.substr(0, eq)), value = trim(line.substr(eq + 1));
        if (sections.empty()) {
            if (key != "version") fail(Errc::ParseError, "line " + std::to_string(lineno) + ": field outside a section");
            if (value != "1") fail(Errc::ParseError, "line " + std::to_string(lineno) + ": unsupported version " + value);
            saw_version = true;
            continue;
        }
        RawSection& s = sections.back();
        if (!kKnownFields.count(key))
            fail(Errc::ParseError, "line " + std::to_string(lineno) + ": unknown field '" + key + "'");
        if (!kAllowed.at(s.kind).count(key))
            fail(Errc::ParseError, "line " + std::to_string(lineno) + ": field '" + key + "' not allowed in [" + s.kind + "]");
        if (s.fields.count(key)) fail(Errc::ParseError, "line " + std::to_string(lineno) + ": duplicate field '" + key + "'");
        s.fields[key] = value;
    }
    if (!saw_version) fail(Errc::ParseError, "line 1: missing version");
    if (sections.empty()) fail(Errc::ParseError, "line " + std::to_string(lineno) + ": no groups");

    Catalog cat;
    for (const auto& s : sections) {
        if (s.kind == "group") {
            GroupEntry g;
            g.name = req(s, "name");
            g.factors = parse_factors(req(s, "factors"));
            try {
                g.center_rank = std::stoi(req(s, "center_rank"));
            } catch (const std::invalid_argument&) {
                fail(Errc::ParseError, "line " + std::to_string(s.line) + ": bad center_rank");
            }
            std::string conn = req(s, "connected");
            if (conn != "true" && conn != "false") fail(Errc::ParseError, "line " + std::to_string(s.line) + ": bad connected");
            g.connected = conn == "true";
            g.datum = std::make_shared<RootDatum>(RootDatum::build(g.factors, g.center_rank));
            if (cat.has(g.name)) fail(Errc::ParseError, "line " + std::to_string(s.line) + ": duplicate group " + g.name);
            cat.groups.push_back(g);
            continue;
        }
        if (cat.groups.empty()) fail(Errc::ParseError, "line " + std::to_string(s.line) + ": section before any [group]");
        GroupEntry& g = cat.groups.back();
        if (s.kind == "frame") {
            CartanFrame f;
            f.datum = g.datum;
            f.group = g.name;
            f.name = req(s, "name");
            build_frame(f, s);
            g.frames.push_back(f);
        } else {
            OuterAutomorphism a;
            a.name = req(s, "name");
            auto maps = parse_maps(*g.datum, req(s, "automorphisms"));
            if (maps.size() != 1) fail(Errc::ParseError, "line " + std::to_string(s.line) + ": one map per [automorphism]");
            a.matrix = maps[0];
            g.automorphisms.push_back(a);
        }
    }

    for (auto& g : cat.groups) {
        if (g.frames.empty()) fail(Errc::InconsistentFrame, g.name + ": no frames");
        int min_t = g.frames[0].dim_t;
        for (const auto& f : g.frames) min_t = std::min(min_t, f.dim_t);
        int nfund = 0, nsplit = 0;
        for (auto& f : g.frames) {
            f.split = f.dim_t == min_t;
            nfund += f.fundamental;
            nsplit += f.split;
        }
        if (nfund != 1 || nsplit != 1) fail(Errc::InconsistentFrame, g.name + ": need exactly one fundamental and one split frame");
        for (size_t k = 0; k < g.frames.size(); ++k) {
            auto& f = g.frames[k];
            for (int a = 0; a < f.rd().num_positive(); ++a) {
                if (f.labels[a] != RootLabel::ImaginaryNoncompact) continue;
                auto r = cayley_transform(g, static_cast<int>(k), a);
                if (r.matched_frame < 0)
                    fail(Errc::InconsistentFrame, g.name + "/" + f.name + ": Cayley image not in catalog");
                if (std::find(f.cayley_neighbors.begin(), f.cayley_neighbors.end(), r.matched_frame) ==
                    f.cayley_neighbors.end())
                    f.cayley_neighbors.push_back(r.matched_frame);
            }
        }
        compute_center(g);
    }
    return cat;
}

Catalog load_catalog_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) fail(Errc::ParseError, "cannot open " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return load_catalog(ss.str());
}

std::string builtin_catalog_path() {
    if (const char* env = std::getenv("ORBITLAB_CATALOG")) return env;
    return std::string(ORBITLAB_DATA_DIR) + "/catalog.txt";
}

const Catalog& builtin_catalog() {
    static const Catalog cat = load_catalog_file(builtin_catalog_path());
    return cat;
}

}  // namespace orbitlab
