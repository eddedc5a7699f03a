#pragma once

#include "orbitlab/params.hpp"

#include <complex>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

namespace orbitlab {

using cplx = std::complex<double>;

// ---- Pfaffian factor ------------------------------------------------------------

struct PfaffianValue {
    Q value_squared;
    double value() const;
};

// Roots of m = z_{g(mu)}(a): the imaginary roots on which mu vanishes (positive indices).
std::vector<int> pfaffian_subalgebra(const RootSystemView& s, const Vec& lambda);
// prod over roots outside m of |lambda(H_alpha)|
PfaffianValue pfaffian_abs(const RootSystemView& s, const Vec& lambda, const std::vector<int>& m_roots);
PfaffianValue pfaffian_abs(const RootSystemView& s, const Vec& lambda);

// ---- points of a Cartan subalgebra ------------------------------------------------

// X = scale * x, x in coroot coordinates of a frame. The elliptic part of x is
// (1 - sigma^T)/2 x and alpha(X) = i <alpha, x_t> + <alpha, x_a>.
struct TangentPoint {
    Vec x;
    double scale = 1.0;
};

cplx root_at(const Mat& x_sigma, const Vec& root, const TangentPoint& X);
// (w L)(X) with L = -i lambda_t + lambda_a, parts taken with lambda_sigma
cplx form_at(const Mat& lambda_sigma, const Vec& lambda, const Mat& w, const Mat& x_sigma, const TangentPoint& X);

bool roots_orthogonal(const RootSystemView& s);
bool all_imaginary(const CartanFrame& f);

Signs lambda_chamber(const CartanFrame& f, const Vec& lambda);     // DegenerateInput on a wall
Signs x_chamber(const CartanFrame& f, const TangentPoint& X);       // SingularX, MissingCalibration

// ---- quadrature on the rank one models ---------------------------------------------

namespace quadrature {
// Liouville measure omega / 2 pi, orbit through lambda with <lambda, coroot> = n, alpha(X) = i theta.
cplx compact_factor(double n, double theta);     // sphere in su(2)*
cplx noncompact_factor(double n, double theta);  // one sheet of a two-sheeted hyperboloid in sl(2,R)*
cplx hyperbolic_factor(double nu, double theta); // one-sheeted hyperboloid, X elliptic
}  // namespace quadrature

// G0-orbit representatives of W(G,h) lambda: quotient by reflections in real and
// compact imaginary roots.
std::vector<Vec> component_representatives(const CartanFrame& lf, const Vec& lambda);
// Fourier transform of G0 . lambda by quadrature
cplx component_quadrature(const CartanFrame& lf, const Vec& lambda, const CartanFrame& xf, const TangentPoint& X);
// Fourier transform of G . lambda: sum over the G0-orbits it contains
cplx orbit_quadrature(const GroupEntry& g, const CartanFrame& lf, const Vec& lambda, const CartanFrame& xf,
                      const TangentPoint& X);

// ---- calibration store ------------------------------------------------------------

struct CalibrationKey {
    std::string group;
    std::string lambda_frame;
    std::string lambda_chamber;
    std::string x_frame;
    std::string x_chamber;
    auto operator<=>(const CalibrationKey&) const = default;
};

struct CalibrationTable {
    CalibrationKey key;
    std::vector<std::string> maps;  // exponent group as signed root maps, identity first
    std::vector<cplx> coeffs;
    std::vector<bool> exact;
    std::string provenance;
    double residual = 0;
    int samples = 0;
};

class CalibrationStore {
public:
    static CalibrationStore parse(const std::string& text);
    static CalibrationStore load(const std::string& path);  // empty store when the file is absent
    std::string serialize() const;
    const CalibrationTable* find(const CalibrationKey& k) const;
    bool add(const CalibrationTable& t);  // false when the key is already present
    const std::vector<CalibrationTable>& tables() const { return tables_; }

private:
    std::vector<CalibrationTable> tables_;
};

std::string default_calibration_path();  // ORBITLAB_CALIBRATION or data/calibration.txt
const CalibrationStore& default_calibration();

// W(datum) together with the realized Weyl groups of both frames
std::vector<Mat> exponent_group(const GroupEntry& g, const CartanFrame& lf, const CartanFrame& xf);

struct SamplePair {
    Vec lambda;
    TangentPoint X;
};
SamplePair sample_pair(const GroupEntry& g, const CartanFrame& lf, const Signs& lc, const CartanFrame& xf,
                       const Signs& xc, std::mt19937_64& rng);

struct CalibrationOptions {
    int samples = 40;
    int held_out = 20;
    std::uint64_t seed = 20240601;
};
CalibrationTable calibrate_table(const GroupEntry& g, const CartanFrame& lf, const Signs& lc, const CartanFrame& xf,
                                 const Signs& xc, const CalibrationOptions& opt);
// every frame pair the model covers; MissingCalibration when the group is outside it
std::vector<CalibrationTable> calibrate_group(const GroupEntry& g, const CalibrationOptions& opt);
bool calibratable(const GroupEntry& g);

cplx exponential_sum(const GroupEntry& g, const CartanFrame& lf, const Vec& lambda, const CartanFrame& xf,
                     const TangentPoint& X, const CalibrationTable& t);
// max |exponential sum - quadrature| over fresh sample pairs
double held_out_residual(const GroupEntry& g, const CalibrationTable& t, int pairs, std::uint64_t seed);

// Violations of c^{v Gamma}_w eps(v) = c^Gamma_{v^-1 w} and c^{u Lambda}_w = c^Lambda_{w u}.
std::vector<std::string> weyl_constraint_violations(const GroupEntry& g, const CalibrationStore& store);

// ---- orbit transforms ------------------------------------------------------------

// MissingCalibration, SingularX, DegenerateInput (lambda singular)
cplx orbit_fourier_transform(const GroupEntry& g, const CartanFrame& lf, const Vec& lambda, const CartanFrame& xf,
                             const TangentPoint& X, const CalibrationStore& store = default_calibration());

// Limit of |W(G,h)(lambda_t)| / |W(G,h)(lambda_+)| beta_hat(G . lambda_t) at t = 0, X on the
// fundamental frame. Zero outside the regular set.
cplx limit_transform(const ParamTilde& pt, const PositiveSystemData& psd, const TangentPoint& X,
                     const CalibrationStore& store = default_calibration());

// Same limit for a parameter of a root system view whose roots are orthogonal and
// imaginary (a centralizer g(e)), assembled from the rank one tables. `weyl` is the
// realized Weyl group W(G(e), h) acting on V; X lies in the view's Cartan.
cplx factorized_limit_transform(const ParamTilde& pt, const std::vector<Mat>& weyl, const TangentPoint& X,
                                const CalibrationStore& store = default_calibration());

}  // namespace orbitlab
