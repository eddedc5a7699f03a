#pragma once

#include "orbitlab/rootdata.hpp"

#include <memory>
#include <string>
#include <vector>

namespace orbitlab {

enum class RootLabel { Real, ImaginaryCompact, ImaginaryNoncompact, Complex };

const char* label_token(RootLabel l);
bool is_imaginary(RootLabel l);

// A conjugacy class of Cartan subalgebras. The conjugation sigma acts on the
// weight space V; its -1 eigenspace is i t*, its +1 eigenspace is a*.
struct CartanFrame {
    std::shared_ptr<const RootDatum> datum;
    std::string group;
    std::string name;
    std::vector<RootLabel> labels;  // every root, negatives carry the same label
    std::vector<int> sigma_perm;    // index of sigma(alpha)
    Mat sigma;
    int dim_t = 0;
    int dim_a = 0;
    std::vector<Vec> kernel_lattice;  // coroot coordinates, basis of Ker exp on T0 over 2 pi i
    std::vector<Mat> weyl_gens;       // generators of the realized Weyl group W(G,h)
    std::vector<Mat> realized_weyl;   // its elements, identity first
    std::vector<int> cayley_neighbors;
    bool fundamental = false;
    bool split = false;

    const RootDatum& rd() const { return *datum; }
    Vec t_part(const Vec& v) const;  // (1 - sigma)/2
    Vec a_part(const Vec& v) const;  // (1 + sigma)/2
    // sigma on coroot coordinates
    Vec sigma_coroot(const Vec& z) const;
    bool is_imaginary_root(int i) const { return is_imaginary(labels[i]); }
};

struct OuterAutomorphism {
    std::string name;
    Mat matrix;
};

struct GroupEntry {
    std::string name;
    std::vector<SimpleFactor> factors;
    int center_rank = 0;
    bool connected = true;
    std::shared_ptr<const RootDatum> datum;
    std::vector<CartanFrame> frames;
    std::vector<OuterAutomorphism> automorphisms;
    // central elements exp(i pi h) of the fundamental frame, h in coroot coordinates
    std::vector<Vec> center_elements;

    int frame_index(const std::string& frame_name) const;  // -1 when absent
    const CartanFrame& frame(const std::string& frame_name) const;
    int fundamental_index() const;
    int split_index() const;
};

struct Catalog {
    std::vector<GroupEntry> groups;
    const GroupEntry& group(const std::string& name) const;
    bool has(const std::string& name) const;
};

Catalog load_catalog(const std::string& text);
Catalog load_catalog_file(const std::string& path);
// data/catalog.txt unless ORBITLAB_CATALOG points elsewhere; parsed once
const Catalog& builtin_catalog();
std::string builtin_catalog_path();

RootLabel classify_root(const CartanFrame& frame, int alpha);

struct FrameProperties {
    bool fundamental = false;
    bool split = false;
    bool no_imaginary = false;
};
FrameProperties frame_properties(const CartanFrame& frame);

struct CayleyResult {
    Mat sigma;                      // conjugation after the transform
    std::vector<RootLabel> labels;  // labels after the transform
    int dim_t = 0;
    int matched_frame = -1;         // catalog frame isomorphic to the image
    Mat conjugator;                 // w with w sigma w^-1 = sigma of the matched frame
};
CayleyResult cayley_transform(const GroupEntry& g, int frame, int alpha);

// Signed root map tokens "+3 -0 +c0" into a matrix on V. Throws ParseError.
Mat signed_map_matrix(const RootDatum& rd, const std::string& tokens);
// Inverse: tokens of a matrix that maps positive roots to signed roots.
std::string signed_map_tokens(const RootDatum& rd, const Mat& m);

// Search w in W(datum) with w sigma w^-1 = target_sigma and matching labels.
bool frames_conjugate(const RootDatum& rd, const Mat& sigma, const std::vector<RootLabel>& labels,
                      const Mat& target_sigma, const std::vector<RootLabel>& target_labels, Mat* w_out);

// closure of a finite generating set of linear maps, identity first
std::vector<Mat> generate_group(const std::vector<Mat>& gens, int dim, size_t bound = 100000);

}  // namespace orbitlab
