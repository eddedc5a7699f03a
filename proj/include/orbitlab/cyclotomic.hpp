#pragma once

#include "orbitlab/rational.hpp"

#include <complex>
#include <string>
#include <vector>

namespace orbitlab {

// Element of Q(zeta_N), stored as coefficients of 1, z, ..., z^{phi(N)-1}
// reduced modulo the N-th cyclotomic polynomial.
class Cyc {
public:
    Cyc() : n_(1), c_{Q(0)} {}
    Cyc(const Q& q) : n_(1), c_{q} {}  // NOLINT implicit from rationals
    Cyc(long v) : n_(1), c_{Q(v)} {}   // NOLINT

    static Cyc zeta(int n, long k);
    // exp(i*pi*q)
    static Cyc exp_i_pi(const Q& q);
    static Cyc i();

    int conductor() const { return n_; }
    const std::vector<Q>& coeffs() const { return c_; }

    Cyc lifted(int m) const;  // same element in Q(zeta_m), n_ | m

    Cyc operator+(const Cyc& o) const;
    Cyc operator-(const Cyc& o) const;
    Cyc operator*(const Cyc& o) const;
    Cyc operator/(const Cyc& o) const;
    Cyc operator-() const;
    Cyc& operator+=(const Cyc& o) { return *this = *this + o; }
    Cyc& operator*=(const Cyc& o) { return *this = *this * o; }
    bool operator==(const Cyc& o) const;
    bool operator!=(const Cyc& o) const { return !(*this == o); }

    Cyc conj() const;
    Cyc inverse() const;
    bool is_zero() const;
    bool is_rational() const;
    Q rational_value() const;  // requires is_rational()
    std::complex<double> to_complex() const;
    std::string str() const;

private:
    int n_;
    std::vector<Q> c_;
};

int euler_phi(int n);
const std::vector<long>& cyclotomic_poly(int n);  // monic, ascending coefficients

}  // namespace orbitlab
