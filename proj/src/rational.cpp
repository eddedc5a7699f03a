#include "orbitlab/rational.hpp"

#include "orbitlab/errors.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace orbitlab {

Q parse_rational(const std::string& raw) {
    std::string s;
    for (char c : raw)
        if (!std::isspace(static_cast<unsigned char>(c))) s += c;
    if (s.empty()) fail(Errc::Usage, "empty rational");
    if (s[0] == '+') s = s.substr(1);
    auto dotpos = s.find('.');
    if (dotpos != std::string::npos) {
        // decimal literal, read exactly
        bool negative = !s.empty() && s[0] == '-';
        std::string body = negative ? s.substr(1) : s;
        dotpos = body.find('.');
        std::string ip = body.substr(0, dotpos), fp = body.substr(dotpos + 1);
        for (char c : ip + fp)
            if (!std::isdigit(static_cast<unsigned char>(c))) fail(Errc::Usage, "bad rational '" + raw + "'");
        std::string digits = ip + fp;
        if (digits.empty()) fail(Errc::Usage, "bad rational '" + raw + "'");
        mpz_class num(digits, 10);
        mpz_class den = 1;
        for (size_t i = 0; i < fp.size(); ++i) den *= 10;
        Q q(num, den);
        q.canonicalize();
        return negative ? Q(-q) : q;
    }
    for (char c : s)
        if (!(std::isdigit(static_cast<unsigned char>(c)) || c == '/' || c == '-'))
            fail(Errc::Usage, "bad rational '" + raw + "'");
    Q q;
    if (q.set_str(s, 10) != 0) fail(Errc::Usage, "bad rational '" + raw + "'");
    if (q.get_den() == 0) fail(Errc::Usage, "zero denominator in '" + raw + "'");
    q.canonicalize();
    return q;
}

Vec parse_vector(const std::string& s) {
    Vec out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) out.push_back(parse_rational(item));
    if (out.empty()) fail(Errc::Usage, "empty vector");
    return out;
}

std::string to_string(const Q& q) { return q.get_str(); }

std::string to_string(const Vec& v) {
    std::string s;
    for (size_t i = 0; i < v.size(); ++i) {
        if (i) s += ",";
        s += v[i].get_str();
    }
    return s;
}

Q dot(const Vec& a, const Vec& b) {
    Q s = 0;
    for (size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

Vec add(const Vec& a, const Vec& b) {
    Vec r(a.size());
    for (size_t i = 0; i < a.size(); ++i) r[i] = a[i] + b[i];
    return r;
}

Vec sub(const Vec& a, const Vec& b) {
    Vec r(a.size());
    for (size_t i = 0; i < a.size(); ++i) r[i] = a[i] - b[i];
    return r;
}

Vec scale(const Q& s, const Vec& v) {
    Vec r(v.size());
    for (size_t i = 0; i < v.size(); ++i) r[i] = s * v[i];
    return r;
}

Vec neg(const Vec& v) { return scale(Q(-1), v); }

bool is_zero(const Vec& v) {
    for (const auto& x : v)
        if (x != 0) return false;
    return true;
}

Vec zeros(int n) { return Vec(static_cast<size_t>(n), Q(0)); }

int sgn(const Q& q) { return ::sgn(q); }

double to_double(const Q& q) { return q.get_d(); }

Mat Mat::identity(int n) {
    Mat m(n, n);
    for (int i = 0; i < n; ++i) m(i, i) = 1;
    return m;
}

Mat Mat::from_rows(const std::vector<Vec>& rows) {
    if (rows.empty()) return Mat();
    Mat m(static_cast<int>(rows.size()), static_cast<int>(rows[0].size()));
    for (int i = 0; i < m.rows; ++i)
        for (int j = 0; j < m.cols; ++j) m(i, j) = rows[i][j];
    return m;
}

Vec Mat::row(int i) const {
    Vec r(cols);
    for (int j = 0; j < cols; ++j) r[j] = (*this)(i, j);
    return r;
}

Vec Mat::col(int j) const {
    Vec c(rows);
    for (int i = 0; i < rows; ++i) c[i] = (*this)(i, j);
    return c;
}

bool Mat::operator==(const Mat& o) const { return rows == o.rows && cols == o.cols && a == o.a; }

Mat operator*(const Mat& x, const Mat& y) {
    Mat r(x.rows, y.cols);
    for (int i = 0; i < x.rows; ++i)
        for (int k = 0; k < x.cols; ++k) {
            const Q& v = x(i, k);
            if (v == 0) continue;
            for (int j = 0; j < y.cols; ++j) r(i, j) += v * y(k, j);
        }
    return r;
}

Vec operator*(const Mat& x, const Vec& v) {
    Vec r(x.rows);
    for (int i = 0; i < x.rows; ++i) {
        Q s = 0;
        for (int j = 0; j < x.cols; ++j) s += x(i, j) * v[j];
        r[i] = s;
    }
    return r;
}

Mat operator-(const Mat& x, const Mat& y) {
    Mat r = x;
    for (size_t i = 0; i < r.a.size(); ++i) r.a[i] -= y.a[i];
    return r;
}

Mat operator+(const Mat& x, const Mat& y) {
    Mat r = x;
    for (size_t i = 0; i < r.a.size(); ++i) r.a[i] += y.a[i];
    return r;
}

Mat transpose(const Mat& x) {
    Mat r(x.cols, x.rows);
    for (int i = 0; i < x.rows; ++i)
        for (int j = 0; j < x.cols; ++j) r(j, i) = x(i, j);
    return r;
}

Mat inverse(const Mat& x) {
    int n = x.rows;
    Mat m = x, inv = Mat::identity(n);
    for (int c = 0; c < n; ++c) {
        int p = -1;
        for (int r = c; r < n; ++r)
            if (m(r, c) != 0) { p = r; break; }
        if (p < 0) throw std::domain_error("singular matrix");
        if (p != c)
            for (int j = 0; j < n; ++j) {
                std::swap(m(p, j), m(c, j));
                std::swap(inv(p, j), inv(c, j));
            }
        Q piv = m(c, c);
        for (int j = 0; j < n; ++j) {
            m(c, j) /= piv;
            inv(c, j) /= piv;
        }
        for (int r = 0; r < n; ++r) {
            if (r == c || m(r, c) == 0) continue;
            Q f = m(r, c);
            for (int j = 0; j < n; ++j) {
                m(r, j) -= f * m(c, j);
                inv(r, j) -= f * inv(c, j);
            }
        }
    }
    return inv;
}

namespace {

// reduced row echelon form in place, returns pivot columns
std::vector<int> rref(Mat& m) {
    std::vector<int> pivots;
    int r = 0;
    for (int c = 0; c < m.cols && r < m.rows; ++c) {
        int p = -1;
        for (int i = r; i < m.rows; ++i)
            if (m(i, c) != 0) { p = i; break; }
        if (p < 0) continue;
        if (p != r)
            for (int j = 0; j < m.cols; ++j) std::swap(m(p, j), m(r, j));
        Q piv = m(r, c);
        for (int j = 0; j < m.cols; ++j) m(r, j) /= piv;
        for (int i = 0; i < m.rows; ++i) {
            if (i == r || m(i, c) == 0) continue;
            Q f = m(i, c);
            for (int j = 0; j < m.cols; ++j) m(i, j) -= f * m(r, j);
        }
        pivots.push_back(c);
        ++r;
    }
    return pivots;
}

}  // namespace

int rank(const Mat& x) {
    Mat m = x;
    return static_cast<int>(rref(m).size());
}

std::vector<Vec> nullspace(const Mat& x) {
    Mat m = x;
    auto piv = rref(m);
    std::vector<bool> is_piv(x.cols, false);
    for (int p : piv) is_piv[p] = true;
    std::vector<Vec> out;
    for (int f = 0; f < x.cols; ++f) {
        if (is_piv[f]) continue;
        Vec v = zeros(x.cols);
        v[f] = 1;
        for (size_t i = 0; i < piv.size(); ++i) v[piv[i]] = -m(static_cast<int>(i), f);
        out.push_back(v);
    }
    return out;
}

std::vector<Vec> row_basis(const std::vector<Vec>& rows, int dim) {
    if (rows.empty()) return {};
    Mat m(static_cast<int>(rows.size()), dim);
    for (int i = 0; i < m.rows; ++i)
        for (int j = 0; j < dim; ++j) m(i, j) = rows[i][j];
    auto piv = rref(m);
    std::vector<Vec> out;
    for (size_t i = 0; i < piv.size(); ++i) out.push_back(m.row(static_cast<int>(i)));
    return out;
}

bool in_span(const std::vector<Vec>& basis, const Vec& v, int dim) {
    auto b = row_basis(basis, dim);
    auto with = basis;
    with.push_back(v);
    return row_basis(with, dim).size() == b.size();
}

bool solve(const Mat& x, const Vec& b, Vec& out) {
    Mat aug(x.rows, x.cols + 1);
    for (int i = 0; i < x.rows; ++i) {
        for (int j = 0; j < x.cols; ++j) aug(i, j) = x(i, j);
        aug(i, x.cols) = b[i];
    }
    auto piv = rref(aug);
    if (!piv.empty() && piv.back() == x.cols) return false;
    out = zeros(x.cols);
    for (size_t i = 0; i < piv.size(); ++i) out[piv[i]] = aug(static_cast<int>(i), x.cols);
    return true;
}

Q floor_q(const Q& q) {
    mpz_class f;
    mpz_fdiv_q(f.get_mpz_t(), q.get_num_mpz_t(), q.get_den_mpz_t());
    return Q(f);
}

Q reduce_angle_pos(const Q& q) {
    Q r = q - 2 * floor_q(q / 2);
    return r;
}

Q reduce_angle(const Q& q) {
    Q r = reduce_angle_pos(q);  // [0,2)
    if (r > 0) r -= 2;          // (-2,0)
    return r;
}

int sin_sign(const Q& q) {
    Q r = reduce_angle_pos(q);
    if (r == 0 || r == 1) return 0;
    return r < 1 ? 1 : -1;
}

bool in_two_pi_z(const Q& q) { return reduce_angle_pos(q) == 0; }

}  // namespace orbitlab
