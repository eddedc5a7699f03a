#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "orbitlab/errors.hpp"
#include "orbitlab/realform.hpp"

#include <Eigen/Dense>

#include <complex>
#include <map>

using namespace orbitlab;

namespace {

const Catalog& cat() { return builtin_catalog(); }

// weights of a faithful representation, fundamental-weight plus central coordinates
const std::map<std::string, std::vector<Vec>> kFaithfulWeights = {
    {"su2", {{Q(1)}, {Q(-1)}}},
    {"sl2R", {{Q(1)}, {Q(-1)}}},
    {"psl2R", {{Q(2)}, {Q(0)}, {Q(-2)}}},
    {"gl2R", {{Q(1), Q(1)}, {Q(-1), Q(1)}}},
    {"sl3R", {{Q(1), Q(0)}, {Q(-1), Q(1)}, {Q(0), Q(-1)}}},
    {"sp4R", {{Q(1), Q(0)}, {Q(-1), Q(1)}, {Q(-1), Q(0)}, {Q(1), Q(-1)}}},
    {"su2xsu2_swap", {{Q(1), Q(0)}, {Q(-1), Q(0)}, {Q(0), Q(1)}, {Q(0), Q(-1)}}},
    {"sl2Rsq_swap", {{Q(1), Q(0)}, {Q(-1), Q(0)}, {Q(0), Q(1)}, {Q(0), Q(-1)}}},
};

// exp(2 pi i H_z) on the faithful representation, diagonal in a weight basis
bool exponentiates_to_one(const std::vector<Vec>& weights, const Vec& z) {
    Eigen::VectorXcd d(weights.size());
    for (size_t i = 0; i < weights.size(); ++i)
        d[i] = std::exp(std::complex<double>(0, 2 * M_PI * dot(weights[i], z).get_d()));
    return (d.array() - 1.0).abs().maxCoeff() < 1e-12;
}

// Z-span membership for a small lattice basis
bool in_lattice(const std::vector<Vec>& basis, const Vec& v) {
    if (basis.empty()) return is_zero(v);
    Mat b = transpose(Mat::from_rows(basis));
    Vec sol;
    if (!solve(b, v, sol)) return false;
    if (b * sol != v) return false;
    for (const auto& x : sol)
        if (x.get_den() != 1) return false;
    return true;
}

}  // namespace

TEST_CASE("built-in catalog entries") {
    for (const char* g : {"su2", "sl2R", "psl2R", "gl2R", "sl3R", "sp4R", "su2xsu2_swap", "sl2Rsq_swap"})
        CHECK(cat().has(g));
    CHECK(cat().group("sl2R").frames.size() == 2);
    CHECK(cat().group("sp4R").frames.size() == 4);
}

TEST_CASE("parse errors") {
    CHECK_THROWS_AS(load_catalog(""), Error);
    try {
        load_catalog("");
    } catch (const Error& e) {
        CHECK(e.code() == Errc::ParseError);
    }
    const std::string head = "version = 1\n[group]\nname = x\nfactors = A1\ncenter_rank = 0\nconnected = true\n";
    try {
        load_catalog(head + "[frame]\nname = f\nlabels = IN\nsigma = -0\nkernel_lattice = 1\nautomorphisms =\ncolor = red\n");
        FAIL("accepted unknown field");
    } catch (const Error& e) {
        CHECK(e.code() == Errc::ParseError);
    }
    try {
        load_catalog(head + "[frame]\nname = f\nlabels = R\nsigma = -0\nkernel_lattice = 1\nautomorphisms =\n");
        FAIL("accepted inconsistent label");
    } catch (const Error& e) {
        CHECK(e.code() == Errc::InconsistentFrame);
    }
    try {
        load_catalog(head + "[frame]\nname = f\nlabels = IN\nsigma = -0\nkernel_lattice =\nautomorphisms =\n");
        FAIL("accepted missing lattice");
    } catch (const Error& e) {
        CHECK(e.code() == Errc::InconsistentFrame);
    }
}

TEST_CASE("classify_root examples") {
    const auto& sl2 = cat().group("sl2R");
    CHECK(classify_root(sl2.frame("split"), 0) == RootLabel::Real);
    CHECK(classify_root(sl2.frame("compact"), 0) == RootLabel::ImaginaryNoncompact);
    CHECK(classify_root(cat().group("su2").frame("compact"), 0) == RootLabel::ImaginaryCompact);
    CHECK_THROWS_AS(classify_root(sl2.frame("split"), 7), Error);
}

TEST_CASE("compactness agrees with the 2x2 block test") {
    // X = E; the conjugation of su(2) sends E to -F, that of su(1,1) sends E to F.
    Eigen::Matrix2d E, F;
    E << 0, 1, 0, 0;
    F << 0, 0, 1, 0;
    auto trace_sq = [](const Eigen::Matrix2d& m) { return (m * m).trace(); };
    double su2 = trace_sq(E - F), su11 = trace_sq(E + F);
    CHECK(su2 < 0);
    CHECK(su11 > 0);
    // compact imaginary iff the trace form is negative on X + conj(X)
    CHECK((classify_root(cat().group("su2").frame("compact"), 0) == RootLabel::ImaginaryCompact) == (su2 < 0));
    CHECK((classify_root(cat().group("sl2R").frame("compact"), 0) == RootLabel::ImaginaryNoncompact) == (su11 > 0));
}

TEST_CASE("kernel lattices match exponentiation in faithful representations") {
    for (const auto& g : cat().groups) {
        const auto& weights = kFaithfulWeights.at(g.name);
        for (const auto& f : g.frames) {
            // every listed vector exponentiates to 1
            for (const auto& z : f.kernel_lattice) CHECK(exponentiates_to_one(weights, z));
            // brute force: small-denominator points of t exponentiating to 1 lie in the lattice
            auto tbasis = nullspace(transpose(f.sigma) + Mat::identity(f.rd().dim()));
            REQUIRE(static_cast<int>(tbasis.size()) == f.dim_t);
            if (f.dim_t == 0) continue;
            std::vector<int> c(f.dim_t, -8);
            while (true) {
                Vec z = zeros(f.rd().dim());
                for (int i = 0; i < f.dim_t; ++i) z = add(z, scale(frac(c[i], 4), tbasis[i]));
                if (exponentiates_to_one(weights, z)) CHECK_MESSAGE(in_lattice(f.kernel_lattice, z), g.name << "/" << f.name);
                int k = 0;
                while (k < f.dim_t && ++c[k] > 8) c[k++] = -8;
                if (k == f.dim_t) break;
            }
        }
    }
}

TEST_CASE("frame invariants") {
    for (const auto& g : cat().groups) {
        const auto& rd = *g.datum;
        int nfund = 0, nsplit = 0;
        for (const auto& f : g.frames) {
            CHECK(f.dim_t + f.dim_a == rd.dim());
            CHECK(f.sigma * f.sigma == Mat::identity(rd.dim()));
            for (int a = 0; a < rd.num_roots(); ++a)
                for (int b = 0; b < rd.num_roots(); ++b)
                    CHECK(rd.form_pair(f.sigma * rd.root(a), f.sigma * rd.root(b)) == rd.form_pair(rd.root(a), rd.root(b)));
            nfund += f.fundamental;
            nsplit += f.split;
        }
        CHECK(nfund == 1);
        CHECK(nsplit == 1);
    }
}

TEST_CASE("frame_properties examples") {
    CHECK(frame_properties(cat().group("su2").frame("compact")).fundamental);
    auto p = frame_properties(cat().group("sl2R").frame("split"));
    CHECK(p.no_imaginary);
    CHECK_FALSE(p.fundamental);
    CHECK(p.split);
    const auto& sl3 = cat().group("sl3R");
    const auto& fund = sl3.frames[sl3.fundamental_index()];
    CHECK(fund.dim_t == 1);
    CHECK(frame_properties(fund).fundamental);
    int nin = 0, nc = 0;
    for (int a = 0; a < 3; ++a) {
        nin += fund.labels[a] == RootLabel::ImaginaryNoncompact;
        nc += fund.labels[a] == RootLabel::Complex;
    }
    CHECK(nin == 1);
    CHECK(nc == 2);
}

TEST_CASE("Cayley transform examples") {
    const auto& sl2 = cat().group("sl2R");
    auto r = cayley_transform(sl2, sl2.frame_index("compact"), 0);
    CHECK(r.matched_frame == sl2.frame_index("split"));
    CHECK(r.labels[0] == RootLabel::Real);
    const auto& sp4 = cat().group("sp4R");
    int f0 = sp4.fundamental_index();
    auto rl = cayley_transform(sp4, f0, 3);  // long root 2e1
    CHECK(rl.labels[3] == RootLabel::Real);
    CHECK(rl.dim_t == 1);
    CHECK(sp4.frames[rl.matched_frame].dim_a == 1);
    CHECK(sp4.frames[rl.matched_frame].name == "long_cayley");
    auto rs = cayley_transform(sp4, f0, 2);  // short root e1+e2
    CHECK(sp4.frames[rs.matched_frame].name == "short_cayley");
    CHECK_THROWS_AS(cayley_transform(sp4, f0, 0), Error);
    try {
        cayley_transform(cat().group("su2"), 0, 0);
    } catch (const Error& e) {
        CHECK(e.code() == Errc::WrongLabel);
    }
}

TEST_CASE("Cayley closure reaches every frame") {
    for (const auto& g : cat().groups) {
        std::vector<bool> seen(g.frames.size(), false);
        std::vector<int> todo{g.fundamental_index()};
        seen[todo[0]] = true;
        while (!todo.empty()) {
            int k = todo.back();
            todo.pop_back();
            const auto& f = g.frames[k];
            for (int a = 0; a < f.rd().num_positive(); ++a) {
                if (f.labels[a] != RootLabel::ImaginaryNoncompact) continue;
                auto r = cayley_transform(g, k, a);
                REQUIRE(r.matched_frame >= 0);
                CHECK(r.dim_t == f.dim_t - 1);
                if (!seen[r.matched_frame]) {
                    seen[r.matched_frame] = true;
                    todo.push_back(r.matched_frame);
                }
            }
        }
        for (bool s : seen) CHECK_MESSAGE(s, g.name);
    }
}

TEST_CASE("component group preserves labels up to conjugacy") {
    for (const auto& g : cat().groups) {
        const auto& rd = *g.datum;
        for (const auto& a : g.automorphisms) {
            auto perm = rd.permutation_of(a.matrix);
            REQUIRE(!perm.empty());
            for (const auto& f : g.frames) {
                Mat s2 = a.matrix * f.sigma * inverse(a.matrix);
                std::vector<RootLabel> l2(rd.num_roots());
                for (int i = 0; i < rd.num_roots(); ++i) l2[perm[i]] = f.labels[i];
                bool found = false;
                for (const auto& h : g.frames) {
                    // conjugate inside W, or through the automorphism itself
                    if (frames_conjugate(rd, s2, l2, h.sigma, h.labels, nullptr)) found = true;
                    for (const auto& b : g.automorphisms) {
                        auto pb = rd.permutation_of(b.matrix);
                        Mat s3 = b.matrix * s2 * inverse(b.matrix);
                        std::vector<RootLabel> l3(rd.num_roots());
                        for (int i = 0; i < rd.num_roots(); ++i) l3[pb[i]] = l2[i];
                        if (frames_conjugate(rd, s3, l3, h.sigma, h.labels, nullptr)) found = true;
                    }
                }
                CHECK_MESSAGE(found, g.name << "/" << f.name << " under " << a.name);
            }
        }
    }
}

TEST_CASE("realized Weyl groups") {
    CHECK(cat().group("sl2R").frame("compact").realized_weyl.size() == 1);
    CHECK(cat().group("sl2R").frame("split").realized_weyl.size() == 2);
    CHECK(cat().group("gl2R").frame("compact").realized_weyl.size() == 2);
    CHECK(cat().group("su2xsu2_swap").frame("compact").realized_weyl.size() == 8);
    CHECK(cat().group("sl2Rsq_swap").frame("compact").realized_weyl.size() == 2);
    CHECK(cat().group("sp4R").frame("split").realized_weyl.size() == 8);
    CHECK(cat().group("sl3R").frame("split").realized_weyl.size() == 6);
}

TEST_CASE("center elements") {
    CHECK(cat().group("su2").center_elements.size() == 2);
    CHECK(cat().group("sl2R").center_elements.size() == 2);
    CHECK(cat().group("psl2R").center_elements.size() == 1);
    CHECK(cat().group("sp4R").center_elements.size() == 2);
}

TEST_CASE("signed map round trip") {
    for (const auto& g : cat().groups)
        for (const auto& f : g.frames) {
            auto toks = signed_map_tokens(*g.datum, f.sigma);
            CHECK(signed_map_matrix(*g.datum, toks) == f.sigma);
        }
}
