#pragma once

#include "orbitlab/cyclotomic.hpp"
#include "orbitlab/params.hpp"

#include <cstdint>
#include <random>
#include <string>
#include <utility>
#include <vector>

namespace orbitlab {

// Angles are rational multiples of pi throughout: the value q stands for q*pi.

// Generator of a lift in the block form Rot(alpha_1), ..., Rot(beta_q) with
// Rot(b) = [[0,-b],[b,0]]. alpha parts lie in 2Z \ {0}, beta parts outside 2Z.
struct LiftGenerator {
    std::vector<std::pair<Q, int>> alpha;
    std::vector<std::pair<Q, int>> beta;
};

int orientation_of_lift(const LiftGenerator& g);  // MalformedGenerator
int orientation_of_inf(const std::vector<Q>& betas);  // ZeroAngle

// A semisimple symplectic element, split into invariant pieces each written in a
// symplectic basis (P, Q) with B(P, Q) = 1.
enum class PieceKind {
    Plane,        // x = x_e acts on P + iQ by exp(i pi angle)
    RealPair,     // x P = eps s^2 P, x Q = eps s^-2 Q, eps = exp(i pi angle), angle in {0, 1}
    ComplexQuad,  // x = s^2 R on U = <P1, P2>, s^-2 R on U* = <Q1, Q2>, R rotation by psi = angle
};

struct SymplecticPiece {
    PieceKind kind = PieceKind::Plane;
    Q angle;
    Q scale = 1;  // s > 1 for the hyperbolic kinds
    // unreduced generator angles on the positive vectors of the piece, congruent mod 2
    // to the elliptic eigenvalues there (one entry, two for ComplexQuad)
    std::vector<Q> generator;
    bool reversed = false;  // generator read in the basis (Q, P): Rot(theta) with orientation Q ^ P

    int dim() const { return kind == PieceKind::ComplexQuad ? 4 : 2; }
};

struct SemisimpleElement {
    std::vector<SymplecticPiece> pieces;
    int dim() const;
};

// Elliptic angles of x_e on the positive vectors, reduced to (-2, 0].
std::vector<Q> elliptic_angles(const SymplecticPiece& p);
// The canonical lift of the same element: all generator angles reduced.
SemisimpleElement canonical_lift(const SemisimpleElement& x);
// Flip the sheet by shifting one generator angle by 2.
SemisimpleElement other_lift(const SemisimpleElement& x);
void check_element(const SemisimpleElement& x);  // MalformedGenerator / NonSemisimple

LiftGenerator lift_generator(const SemisimpleElement& x);
// O(x_e hat) / O(B) on (1 - x_e) V
int orientation_ratio(const SemisimpleElement& x);
int sheet_of(const SemisimpleElement& x);  // relative to the canonical lift

Cyc delta_fn(const SemisimpleElement& x);
Cyc phi_fn(const SemisimpleElement& x);

// Lagrangian of V_C stable under x, chosen piece by piece.
//  Plane: 0 = C(P+iQ), 1 = C(P-iQ), 2 = the line C(aP + bQ) (only when x = +-1 there)
//  RealPair: 0 = CP, 1 = CQ
//  ComplexQuad: 0 = U_C, 1 = U*_C, 2 = <u, u*>, 3 = <u bar, u* bar>, u = P1 - iP2, u* = Q1 - iQ2
struct PieceLagrangian {
    int choice = 0;
    Cyc a = 1;
    Cyc b = 0;
};

struct EigenSignature {
    Q angle;  // eigenvalue exp(i pi angle) of x_e on L, angle in (-2, 0]
    int p = 0;
    int q = 0;
};

struct LagrangianEigen {
    Q root_modulus;  // sqrt(r)
    Q angle;         // (-2, 0]
};

struct LagrangianSignature {
    int n_L = 0;           // eigenvalues of x on L in ]1, +inf[
    int q_L = 0;           // negative count of i B(v, w bar) on (1 - x) L
    int q_L_elliptic = 0;  // same for x_e
    std::vector<EigenSignature> eigen_sig;
};

struct LagrangianData {
    LagrangianSignature sig;
    std::vector<LagrangianEigen> eigen;  // eigenvalues of x on L
};

LagrangianData lagrangian_data(const SemisimpleElement& x, const std::vector<PieceLagrangian>& L);
Cyc rho_lagrangian(const SemisimpleElement& x, const LagrangianData& L);  // InconsistentSignature
// det(1 - x)_{(1 - x) L}
Cyc det_one_minus(const LagrangianData& L);

struct IdentityCheck {
    bool prop_b = false;
    bool prop_c = false;
    bool sheet_linear = false;
    std::string detail;
};
IdentityCheck check_identities(const SemisimpleElement& x, const std::vector<PieceLagrangian>& L);

struct MetaplecticCase {
    SemisimpleElement x;
    std::vector<PieceLagrangian> L;
};
// random configuration of dimension <= max_dim, angle denominators dividing 24 and <= max_den
MetaplecticCase random_case(std::mt19937_64& rng, int max_dim = 8, int max_den = 12);

struct CorpusReport {
    int cases = 0;
    int prop_b_pass = 0;
    int prop_c_pass = 0;
    int sheet_pass = 0;
    std::vector<std::string> failures;
    bool ok() const { return prop_b_pass == cases && prop_c_pass == cases && sheet_pass == cases; }
};
CorpusReport run_corpus(std::uint64_t seed, int cases);

// ---- root line model of g/h ----------------------------------------------------

// Lift of an elliptic element to the double cover attached to g/h. The sheet is
// relative to the canonical lift (generator angles in (-2, 0] on positive vectors).
struct LiftedElliptic {
    EllipticPoint point;
    int sheet = 1;
};
LiftedElliptic iota_lift(int dim);

// sign of i B_lambda(X, conj X) on the line of an imaginary root
int line_form_sign(const RootSystemView& s, const Vec& lambda, int alpha);

// Sheet of exp(E) for the torus element with gamma = id and h elliptic.
int exp_path_sheet(const RootSystemView& s, const Vec& lambda, const Vec& h);

Cyc delta_on_roots(const RootSystemView& s, const Vec& lambda, const LiftedElliptic& e);
// Direct value of rho_L for L = sum of the root lines in `positive` (a positive system
// stable under e), with the form B_lambda.
Cyc rho_on_lagrangian_roots(const RootSystemView& s, const Vec& lambda, const std::vector<int>& positive,
                            const LiftedElliptic& e);
// Orbit-product formula for rho_{lambda_+} on the stabilizer cover. NotInStabilizer.
Cyc rho_on_stabilizer_cover(const ParamTilde& pt, const PositiveSystemData& psd, const LiftedElliptic& e);

// Orientation of B_lambda on the root blocks listed (positive indices), relative to
// the reference orientation built from the standard positive roots.
int form_orientation(const RootSystemView& s, const Vec& lambda, const std::vector<int>& roots);
// O(e hat) / O(B_lambda) on (1 - Ad e) of the root lines outside `excluded`, with the
// lift read in the root line model of lambda. Both sheets are distinguished even when
// no line is moved.
int root_line_orientation(const RootSystemView& s, const Vec& lambda, const LiftedElliptic& e,
                          const std::vector<int>& excluded);
// positive indices of roots outside `excluded` whose block is moved by Ad e
std::vector<int> moved_roots(const RootSystemView& s, const EllipticPoint& e, const std::vector<int>& excluded);

struct GammaAlphaData {
    int alpha = -1;
    int n_alpha = 0;
    EllipticPoint point;  // exp(pi (X_alpha - X_-alpha)) as an elliptic descriptor
    LiftedElliptic lifts[2];
    Cyc delta[2];  // delta_{lambda_+} at the two lifts
};
GammaAlphaData gamma_alpha_data(const ParamTilde& pt, const PositiveSystemData& psd, int alpha);  // NotRealRoot

}  // namespace orbitlab
