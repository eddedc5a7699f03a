#pragma once

#include "orbitlab/rational.hpp"

#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <vector>

namespace orbitlab {

struct SimpleFactor {
    std::string series;  // A, B, C, D, G2, F4
    int rank = 0;
};

std::vector<SimpleFactor> parse_factors(const std::string& s);  // "A1xA1", "C2", "" for none
std::string factors_string(const std::vector<SimpleFactor>& f);

struct WeylElement {
    Mat matrix;                 // action on weight coordinates
    std::vector<int> root_perm; // root i goes to root_perm[i]
    int length = 0;
};

// Roots live in fundamental-weight coordinates followed by central
// coordinates. Coroots live in simple-coroot coordinates followed by the
// dual central coordinates, so <lambda, coroot> is a plain dot product.
class RootDatum {
public:
    static RootDatum build(const std::vector<SimpleFactor>& factors, int rank_center);

    // Sub-root system inside the same ambient space. Roots are listed as
    // positives first, then their negatives in the same order.
    static RootDatum subsystem(int dim, const Mat& form, std::vector<Vec> positive_roots,
                               std::vector<Vec> positive_coroots);

    int rank_ss() const { return rank_ss_; }
    int rank_center() const { return rank_center_; }
    int dim() const { return dim_; }
    const std::vector<SimpleFactor>& factors() const { return factors_; }
    const Mat& cartan() const { return cartan_; }
    const Mat& form() const { return form_; }

    int num_roots() const { return static_cast<int>(roots_.size()); }
    int num_positive() const { return npos_; }
    const Vec& root(int i) const;
    const Vec& coroot(int i) const;
    const std::vector<Vec>& roots() const { return roots_; }
    int negative_of(int i) const { return i < npos_ ? i + npos_ : i - npos_; }
    bool is_positive(int i) const { return i < npos_; }
    int positive_index(int i) const { return i < npos_ ? i : i - npos_; }
    const std::vector<int>& simple_roots() const { return simple_; }
    // -1 when v is not a root
    int index_of(const Vec& v) const;
    // factor index of a root, -1 for subsystems
    int factor_of(int i) const { return root_factor_.empty() ? -1 : root_factor_[i]; }
    int height(int i) const;

    Q pairing(const Vec& lambda, int alpha) const;  // <lambda, alpha^vee>
    Q form_pair(const Vec& a, const Vec& b) const;   // (a, b)
    Mat reflection(int alpha) const;
    Vec reflect(int alpha, const Vec& v) const;
    Vec rho() const;
    std::vector<int> permutation_of(const Mat& m) const;  // empty if m does not permute roots

    const std::vector<WeylElement>& weyl_group() const;
    int weyl_order_formula() const;  // product of standard orders, capped
    // diagram automorphisms of the semisimple part, identity on the center
    std::vector<Mat> diagram_automorphisms() const;
    // all root-system automorphisms acting on V: W composed with diagram automorphisms
    std::vector<Mat> automorphisms() const;

private:
    RootDatum() = default;
    void finish();

    int rank_ss_ = 0;
    int rank_center_ = 0;
    int dim_ = 0;
    std::vector<SimpleFactor> factors_;
    Mat cartan_;
    Mat form_;
    std::vector<Vec> roots_;
    std::vector<Vec> coroots_;
    std::vector<std::vector<int>> simple_coords_;
    std::vector<int> root_factor_;
    std::vector<int> simple_;
    int npos_ = 0;
    std::map<Vec, int> index_;

    // lazily generated, shared between copies
    std::shared_ptr<std::mutex> weyl_mu_ = std::make_shared<std::mutex>();
    mutable std::shared_ptr<const std::vector<WeylElement>> weyl_;
};

long weyl_order_of(const SimpleFactor& f);
long root_count_of(const SimpleFactor& f);

}  // namespace orbitlab
