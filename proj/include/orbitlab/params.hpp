#pragma once

#include "orbitlab/realform.hpp"

#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace orbitlab {

// Roots of a reductive algebra relative to a Cartan subalgebra, written in the
// coordinates of an ambient catalog frame. Catalog frames give a view of
// themselves; centralizers g(e) give folded views living in the gamma-fixed
// subspace.
struct RootSystemView {
    std::string group;
    std::string name;
    int dim = 0;
    Mat sigma;
    Mat form;
    std::vector<Vec> roots;    // positives first, negative of i at i + npos
    std::vector<Vec> coroots;  // coroot coordinates
    std::vector<RootLabel> labels;
    int npos = 0;
    std::vector<Vec> ambient;  // basis of the subspace carrying the Cartan, empty for all of V
    std::vector<Vec> kernel_lattice;
    bool has_kernel_lattice = false;
    std::shared_ptr<const RootDatum> datum;  // same roots, for Weyl groups and automorphisms
    std::vector<int> source_root;  // catalog root index (first member of the folded orbit)

    int num_roots() const { return static_cast<int>(roots.size()); }
    int negative_of(int i) const { return i < npos ? i + npos : i - npos; }
    Q pairing(const Vec& v, int i) const { return dot(v, coroots[i]); }
    Vec t_part(const Vec& v) const;
    Vec a_part(const Vec& v) const;
    bool in_ambient(const Vec& v) const;
    int index_of(const Vec& root) const;
    Vec reflect(int i, const Vec& v) const;
};

RootSystemView view_of(const CartanFrame& f);

// lambda(H_alpha) = 0: both the elliptic and the hyperbolic pairing vanish
bool vanishes_on(const RootSystemView& s, const Vec& lambda, int alpha);

// positive indices of the roots of g(lambda), and of its imaginary roots
std::vector<int> centralizer_roots(const RootSystemView& s, const Vec& lambda);
std::vector<int> imaginary_roots_of(const RootSystemView& s, const Vec& lambda);

using Signs = std::vector<int>;  // +1 / -1
std::string signs_string(const Signs& s);
Signs parse_signs(const std::string& s);  // "+-+" ; "" for the empty chamber

struct ParamTilde {
    std::shared_ptr<const RootSystemView> sys;
    Vec lambda;               // elliptic part in t_part, hyperbolic part in a_part
    std::vector<int> imag;    // imaginary roots of g(lambda), positive indices
    Signs fplus;              // sign of F+ on each entry of imag

    Vec mu() const { return sys->t_part(lambda); }  // i mu
    Vec nu() const { return sys->a_part(lambda); }
    Vec rho_f() const;
};

// Validates lambda and the sign vector. DegenerateInput / NotAChamber.
ParamTilde make_param(std::shared_ptr<const RootSystemView> sys, const Vec& lambda, const Signs& fplus);

struct ChamberInfo {
    Signs fplus;
    bool regular = false;
    Vec rho;  // rho_F+
};
// Sorted by sign vector, + before -.
std::vector<ChamberInfo> enumerate_chambers(const RootSystemView& s, const Vec& lambda);
bool is_regular_chamber(const ParamTilde& pt);

// simple roots of a positive subset that is a positive system of a closed subsystem
std::vector<int> simple_of(const RootSystemView& s, const std::vector<int>& positive);

// Chambers of the restricted roots of a root subset on the hyperbolic part.
struct AChamber {
    std::vector<int> roots;  // positive indices of the subsystem
    Signs signs;             // sign on each entry of roots
    Vec point;               // interior rational point in a*
};
std::vector<AChamber> enumerate_a_chambers(const RootSystemView& s, const std::vector<int>& subsystem);
// roots of g(lambda)(i rho_F+), positive indices
std::vector<int> stabilizer_subsystem(const ParamTilde& pt);

struct PositiveSystemData {
    Q epsilon;
    Vec rho_f;
    Vec rho_prime;    // rho of g(lambda)(i rho_F+) for the a-chamber
    Vec nu_plus;
    Vec rho_nu_plus;  // rho of g(nu_+)
    Vec mu_plus;      // i mu_+
    Vec lambda_plus;
    Vec rho_can;
    Vec lambda_can;
    Vec rho_g_h;      // half sum of rplus_g_h
    std::vector<int> rplus_g_h;
    std::vector<int> rplus_lambdatilde;
    std::vector<int> rplus_lambdatilde_aplus;
    AChamber a_chamber;

    Vec lambda_t(const Q& t) const;
};

PositiveSystemData build_positive_system(const ParamTilde& pt, const AChamber& a);
PositiveSystemData build_positive_system(const ParamTilde& pt);  // first a-chamber
// automorphisms of the root system commuting with sigma
std::vector<Mat> real_automorphisms(const RootSystemView& s);
// {a : a lambda_t = lambda_t} == {a : a fixes lambda, F+ and the a-chamber}
bool stabilizer_identity(const ParamTilde& pt, const PositiveSystemData& psd, const Q& t);
// exact step of the epsilon choice
Q epsilon_for(const RootDatum& rd, const Vec& nu, const Vec& rho_prime);

bool is_integral_regG(const ParamTilde& pt);

struct ParamFlags {
    bool in_reg = false;
    bool in_fond = false;
    bool in_I = false;
    bool in_Inc = false;
    bool in_regG = false;
    bool integral = false;
};
ParamFlags classify_param(const ParamTilde& pt);

// Elliptic element e = gamma exp(E), acting on the root line of alpha by
// exp(i pi <alpha, h>) followed by the root map gamma.
struct EllipticPoint {
    std::string label = "id";
    Mat gamma;  // action on V, commutes with sigma
    Vec h;      // coroot coordinates
    bool is_identity_map() const;
    // angle of alpha over pi, before the root map
    Q phase(const Vec& root) const { return dot(root, h); }
};

EllipticPoint identity_point(int dim);
// "id", "h=1/2,1", "swap", "swap;h=0,1/2", "w=<signed map>;h=..." for the given frame
EllipticPoint parse_elliptic(const GroupEntry& g, const CartanFrame& f, const std::string& spec);
// Validates the point against a frame (root map, commutation with sigma, hyperbolic part).
void check_elliptic(const RootSystemView& s, const EllipticPoint& e);
// Conjugate by an automorphism a of V: a e a^-1.
EllipticPoint conjugate_point(const EllipticPoint& e, const Mat& a);

// Centralizer g(e) relative to h(e), as a view in the coordinates of s.
RootSystemView centralizer_view(const RootSystemView& s, const EllipticPoint& e);

bool fixes_param(const EllipticPoint& e, const ParamTilde& pt);
std::optional<AChamber> stable_a_chamber(const ParamTilde& pt, const EllipticPoint& e);

ParamTilde descend_at_e(const ParamTilde& pt, const EllipticPoint& e);

struct FiberCount {
    int enumerated = 0;     // parameters of the fiber in the I-set
    int chamber_fiber = 0;  // chambers of g(lambda) whose rho lies in F+[e]
    long w_commutant = 0;   // |W(g(lambda))(Ad e)|
    long w_centralizer = 0; // |W(g(e)(lambda))|
    bool formula_integral = false;
    long formula = 0;
};
FiberCount count_descent_fiber(const ParamTilde& pt, const EllipticPoint& e);

// Weyl group of a set of roots of a view, as matrices on V
std::vector<Mat> weyl_of(const RootSystemView& s, const std::vector<int>& positive_roots);

struct OrbitSupportDescriptor {
    Vec lambda;
    std::vector<int> factor_roots;  // positive roots of g(lambda), one per sl2 factor
    Signs half_cones;
    Signs orbit_key;  // minimum of half_cones over the realized Weyl group
};
// The realized Weyl group of the frame and the component automorphisms commuting
// with sigma identify descriptors of conjugate parameters.
OrbitSupportDescriptor support_orbits_ssInc(const ParamTilde& pt, const GroupEntry& g, const CartanFrame& f);

// Action of a root-system automorphism on parameters; the image lives on the same view.
ParamTilde act_on_param(const Mat& a, const ParamTilde& pt);

}  // namespace orbitlab
