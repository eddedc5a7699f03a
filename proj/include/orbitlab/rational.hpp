#pragma once

#include <gmpxx.h>

#include <string>
#include <vector>

namespace orbitlab {

using Q = mpq_class;
using Vec = std::vector<Q>;

// canonical n/d; the two-argument mpq_class constructor does not reduce
inline Q frac(long n, long d) {
    Q q(n, d);
    q.canonicalize();
    return q;
}

Q parse_rational(const std::string& s);
// comma separated rationals, "p/q" entries allowed
Vec parse_vector(const std::string& s);
std::string to_string(const Q& q);
std::string to_string(const Vec& v);

Q dot(const Vec& a, const Vec& b);
Vec add(const Vec& a, const Vec& b);
Vec sub(const Vec& a, const Vec& b);
Vec scale(const Q& s, const Vec& v);
Vec neg(const Vec& v);
bool is_zero(const Vec& v);
Vec zeros(int n);
int sgn(const Q& q);
double to_double(const Q& q);

// dense row-major rational matrix
struct Mat {
    int rows = 0;
    int cols = 0;
    std::vector<Q> a;

    Mat() = default;
    Mat(int r, int c) : rows(r), cols(c), a(static_cast<size_t>(r) * c) {}

    Q& operator()(int i, int j) { return a[static_cast<size_t>(i) * cols + j]; }
    const Q& operator()(int i, int j) const { return a[static_cast<size_t>(i) * cols + j]; }

    static Mat identity(int n);
    static Mat from_rows(const std::vector<Vec>& rows);
    Vec row(int i) const;
    Vec col(int j) const;

    bool operator==(const Mat& o) const;
    bool operator!=(const Mat& o) const { return !(*this == o); }
    bool operator<(const Mat& o) const { return a < o.a; }
};

Mat operator*(const Mat& x, const Mat& y);
Vec operator*(const Mat& x, const Vec& v);
Mat operator-(const Mat& x, const Mat& y);
Mat operator+(const Mat& x, const Mat& y);
Mat transpose(const Mat& x);
Mat inverse(const Mat& x);  // throws std::domain_error when singular
int rank(const Mat& x);
// basis of {v : x v = 0}
std::vector<Vec> nullspace(const Mat& x);
// basis of the row span, echelon form
std::vector<Vec> row_basis(const std::vector<Vec>& rows, int dim);
bool in_span(const std::vector<Vec>& basis, const Vec& v, int dim);
// solve x v = b for one solution, false when inconsistent
bool solve(const Mat& x, const Vec& b, Vec& out);

// Angles are rational multiples of pi: the value q stands for q*pi.
// Reduce into the window (-2, 0].
Q reduce_angle(const Q& q);
// Reduce into [0, 2).
Q reduce_angle_pos(const Q& q);
// exact sign of sin(q*pi)
int sin_sign(const Q& q);
// true when q*pi lies in 2*pi*Z
bool in_two_pi_z(const Q& q);
Q floor_q(const Q& q);

}  // namespace orbitlab
