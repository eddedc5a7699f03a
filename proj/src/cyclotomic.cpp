#include "orbitlab/cyclotomic.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace orbitlab {

int euler_phi(int n) {
    int r = n;
    for (int p = 2; p * p <= n; ++p)
        if (n % p == 0) {
            while (n % p == 0) n /= p;
            r -= r / p;
        }
    if (n > 1) r -= r / n;
    return r;
}

namespace {

std::vector<long> poly_div_exact(std::vector<long> num, const std::vector<long>& den) {
    // both ascending, den monic
    int dn = static_cast<int>(den.size()) - 1;
    int nn = static_cast<int>(num.size()) - 1;
    std::vector<long> q(static_cast<size_t>(nn - dn + 1), 0);
    for (int k = nn - dn; k >= 0; --k) {
        long coef = num[k + dn];
        q[k] = coef;
        for (int j = 0; j <= dn; ++j) num[k + j] -= coef * den[j];
    }
    return q;
}

}  // namespace

const std::vector<long>& cyclotomic_poly(int n) {
    static std::map<int, std::vector<long>> cache;
    static std::recursive_mutex mu;
    std::lock_guard<std::recursive_mutex> lock(mu);
    auto it = cache.find(n);
    if (it != cache.end()) return it->second;
    std::vector<long> p(static_cast<size_t>(n) + 1, 0);
    p[0] = -1;
    p[n] = 1;
    for (int d = 1; d < n; ++d)
        if (n % d == 0) p = poly_div_exact(p, cyclotomic_poly(d));
    return cache[n] = p;
}

namespace {

std::vector<Q> reduce_mod(std::vector<Q> a, int n) {
    const auto& phi = cyclotomic_poly(n);
    int d = static_cast<int>(phi.size()) - 1;
    for (int k = static_cast<int>(a.size()) - 1; k >= d; --k) {
        if (a[k] == 0) continue;
        Q coef = a[k];
        for (int j = 0; j <= d; ++j) a[k - d + j] -= coef * phi[j];
    }
    a.resize(d, Q(0));
    return a;
}

}  // namespace

Cyc Cyc::zeta(int n, long k) {
    Cyc r;
    r.n_ = n;
    long kk = ((k % n) + n) % n;
    std::vector<Q> a(static_cast<size_t>(std::max<long>(kk + 1, euler_phi(n))), Q(0));
    a[kk] = 1;
    r.c_ = reduce_mod(a, n);
    return r;
}

Cyc Cyc::exp_i_pi(const Q& q) {
    Q r = q;
    r.canonicalize();
    long num = r.get_num().get_si();
    long den = r.get_den().get_si();
    return zeta(static_cast<int>(2 * den), num);
}

Cyc Cyc::i() { return zeta(4, 1); }

Cyc Cyc::lifted(int m) const {
    if (m == n_) return *this;
    if (m % n_) throw std::logic_error("conductor does not divide target");
    int step = m / n_;
    std::vector<Q> a(static_cast<size_t>(step) * c_.size() + 1, Q(0));
    for (size_t k = 0; k < c_.size(); ++k) a[k * step] = c_[k];
    Cyc r;
    r.n_ = m;
    r.c_ = reduce_mod(a, m);
    return r;
}

Cyc Cyc::operator+(const Cyc& o) const {
    int m = std::lcm(n_, o.n_);
    Cyc x = lifted(m), y = o.lifted(m);
    for (size_t k = 0; k < x.c_.size(); ++k) x.c_[k] += y.c_[k];
    return x;
}

Cyc Cyc::operator-() const {
    Cyc x = *this;
    for (auto& v : x.c_) v = -v;
    return x;
}

Cyc Cyc::operator-(const Cyc& o) const { return *this + (-o); }

Cyc Cyc::operator*(const Cyc& o) const {
    int m = std::lcm(n_, o.n_);
    Cyc x = lifted(m), y = o.lifted(m);
    std::vector<Q> a(x.c_.size() + y.c_.size(), Q(0));
    for (size_t i = 0; i < x.c_.size(); ++i) {
        if (x.c_[i] == 0) continue;
        for (size_t j = 0; j < y.c_.size(); ++j) a[i + j] += x.c_[i] * y.c_[j];
    }
    Cyc r;
    r.n_ = m;
    r.c_ = reduce_mod(a, m);
    return r;
}

bool Cyc::operator==(const Cyc& o) const {
    int m = std::lcm(n_, o.n_);
    return lifted(m).c_ == o.lifted(m).c_;
}

Cyc Cyc::conj() const {
    std::vector<Q> a(static_cast<size_t>(n_), Q(0));
    for (size_t k = 0; k < c_.size(); ++k) a[(n_ - static_cast<int>(k)) % n_] += c_[k];
    Cyc r;
    r.n_ = n_;
    r.c_ = reduce_mod(a, n_);
    return r;
}

Cyc Cyc::inverse() const {
    if (is_zero()) throw std::domain_error("inverse of zero");
    int d = static_cast<int>(c_.size());
    // columns: this * z^j
    Mat m(d, d);
    for (int j = 0; j < d; ++j) {
        Cyc col = *this * zeta(n_, j);
        col = col.lifted(n_);
        for (int i = 0; i < d; ++i) m(i, j) = col.c_[i];
    }
    Vec e = zeros(d);
    e[0] = 1;
    Vec sol;
    if (!solve(m, e, sol)) throw std::domain_error("non-invertible cyclotomic");
    Cyc r;
    r.n_ = n_;
    r.c_ = sol;
    return r;
}

Cyc Cyc::operator/(const Cyc& o) const { return *this * o.inverse(); }

bool Cyc::is_zero() const {
    for (const auto& v : c_)
        if (v != 0) return false;
    return true;
}

bool Cyc::is_rational() const {
    for (size_t k = 1; k < c_.size(); ++k)
        if (c_[k] != 0) return false;
    return true;
}

Q Cyc::rational_value() const {
    if (!is_rational()) throw std::domain_error("not rational");
    return c_.empty() ? Q(0) : c_[0];
}

std::complex<double> Cyc::to_complex() const {
    std::complex<double> s = 0;
    for (size_t k = 0; k < c_.size(); ++k) {
        if (c_[k] == 0) continue;
        double ang = 2.0 * M_PI * static_cast<double>(k) / n_;
        s += c_[k].get_d() * std::complex<double>(std::cos(ang), std::sin(ang));
    }
    return s;
}

std::string Cyc::str() const {
    std::ostringstream os;
    bool first = true;
    for (size_t k = 0; k < c_.size(); ++k) {
        if (c_[k] == 0) continue;
        if (!first) os << " + ";
        first = false;
        os << c_[k].get_str();
        if (k) os << "*z" << n_ << "^" << k;
    }
    if (first) os << "0";
    return os.str();
}

}  // namespace orbitlab
