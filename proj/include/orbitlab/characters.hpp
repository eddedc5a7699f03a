#pragma once

#include "orbitlab/cyclotomic.hpp"
#include "orbitlab/metaplectic.hpp"
#include "orbitlab/orbits.hpp"

#include <map>
#include <memory>
#include <string>
#include <vector>

namespace orbitlab {

// ---- factors attached to an elliptic point ---------------------------------------

struct KDFactors {
    cplx k = 1;         // k_e(X), real and positive on V_e
    Cyc D_exact = 1;    // det(1 - Ad e) on (1 - Ad e)(g/j)
    double D = 1;
    int d = 0;          // half the dimension of (1 - Ad e)(g/j)
    Q epsilon = 2;      // epsilon_e / pi
    bool X_in_Ve = false;
    bool regular = false;  // e exp X regular
};

// s is a catalog frame whose roots carry X; X must be fixed by the root map of e
// for X_in_Ve to hold.
KDFactors k_and_D_factors(const RootSystemView& s, const EllipticPoint& e, const TangentPoint& X);

// d_e of g(lambda)(i rho_F+): moved root lines of the stabilizer subsystem, halved
int d_stabilizer(const ParamTilde& pt, const EllipticPoint& e);

// ---- characters of the stabilizer cover -------------------------------------------

// A one-dimensional character of the double cover of G(lambda tilde). On lifts of
// torus points it is given by the canonical formula when `canonical` is set; other
// values come from `values`, keyed by value_key(point), at sheet +1.
struct TauChar {
    int dim = 1;
    Vec differential;
    bool canonical = false;
    std::shared_ptr<const ParamTilde> param;
    std::shared_ptr<const PositiveSystemData> positive;
    std::map<std::string, std::pair<EllipticPoint, Cyc>> values;

    void set(const EllipticPoint& e, const Cyc& v);  // value at the sheet +1 lift
    Cyc value(const LiftedElliptic& e) const;        // MissingGeneratorValue
};

std::string value_key(const EllipticPoint& e);

// a . tau for an automorphism a of V, as a character of the cover for a . pt
TauChar transport_tau(const TauChar& tau, const Mat& a);

// chi with chi(iota) = -1 and differential i lambda on h. NotIntegral outside the
// regular integral set.
TauChar chi_canonical(const ParamTilde& pt, const PositiveSystemData& psd);

// (delta tau)(gamma_alpha) != (-1)^{n_alpha} for every real root of g(lambda)
bool is_final(const TauChar& tau, const ParamTilde& pt, const PositiveSystemData& psd);

// ---- the sum over orbits ------------------------------------------------------------

// Frame of the catalog carrying a parameter.
const GroupEntry& group_of(const ParamTilde& pt);
const CartanFrame& frame_of(const ParamTilde& pt);

// W(G(e), h): realized Weyl elements w with w e w^-1 = e
std::vector<Mat> centralizer_weyl(const CartanFrame& f, const EllipticPoint& e);

struct Contribution {
    ParamTilde lambda_prime;  // w lambda tilde
    Mat conjugator;           // w
    EllipticPoint e_prime;    // w^-1 e w, fixes lambda tilde
    ParamTilde descended;     // lambda tilde'[e], equal to the class representative
    int outer = 0;            // index of the G(e)-class
    long orbit_size = 0;      // number of w lambda tilde in the class with this exact descent
};

// One entry per lambda tilde' = w lambda tilde fixed by e whose descent is the chosen
// representative of its G(e)-class; representatives in lexicographic order.
std::vector<Contribution> enumerate_contributions(const ParamTilde& pt, const EllipticPoint& e);

enum class CharacterForm { Full, Plus };

struct ContributionTerm {
    Contribution item;
    int sign = 1;       // +-_{e' hat}
    int d = 0;          // exponent of i^{-d}
    Cyc trace = 1;      // tr tau(e' hat)
    Cyc summand = 1;    // sign i^{-d} trace
    cplx transform = 0; // limit transform of the descended parameter
    long a_chambers = 1;
};

struct CharacterEval {
    cplx value = 0;  // trace at e exp X
    cplx theta = 0;  // k_e(X) times the trace
    KDFactors factors;
    std::vector<ContributionTerm> contributions;
};

// OutsideVe, SingularPoint, Unsupported, MissingCalibration, MissingGeneratorValue.
// `sheet` selects the lift of every e' used in the sum.
CharacterEval eval_character(const ParamTilde& pt, const TauChar& tau, const EllipticPoint& e, const TangentPoint& X,
                             CharacterForm form = CharacterForm::Full, int sheet = 1);

// ---- recovering the orbit ----------------------------------------------------------

struct CharacterSample {
    EllipticPoint e;
    TangentPoint X;
    cplx value;
};

struct IdentifiedOrbit {
    ParamTilde param;
    std::vector<Cyc> traces;  // tr tau at the canonical lift of each sample's e
};

// Candidates: lambda on the fundamental frame with coordinates in (1/2)Z inside
// [-4, 4], every chamber, integral, one per G-conjugacy class. Ambiguous, NoMatch.
IdentifiedOrbit identify_orbit(const GroupEntry& g, const std::vector<CharacterSample>& samples, double tol = 1e-6);
std::vector<ParamTilde> orbit_candidates(const GroupEntry& g);

}  // namespace orbitlab
