#include "stokeskit/cmatrix.hpp"

#include <cmath>

#include "stokeskit/errors.hpp"

namespace stokeskit {

CMatrix CMatrix::identity(int n) {
    CMatrix m(n, n);
    for (int i = 0; i < n; ++i) m.at(i, i) = 1.0;
    return m;
}

CMatrix CMatrix::operator*(const CMatrix& o) const {
    if (cols_ != o.rows_) throw math_error("matrix product size mismatch");
    CMatrix out(rows_, o.cols_);
    for (int i = 0; i < rows_; ++i)
        for (int k = 0; k < cols_; ++k) {
            std::complex<double> v = at(i, k);
            if (v == 0.0) continue;
            for (int j = 0; j < o.cols_; ++j) out.at(i, j) += v * o.at(k, j);
        }
    return out;
}

CMatrix CMatrix::operator*(std::complex<double> s) const {
    CMatrix out = *this;
    for (auto& v : out.a_) v *= s;
    return out;
}

CMatrix CMatrix::operator-(const CMatrix& o) const {
    CMatrix out(rows_, cols_);
    for (std::size_t k = 0; k < a_.size(); ++k) out.a_[k] = a_[k] - o.a_[k];
    return out;
}

CMatrix CMatrix::operator+(const CMatrix& o) const {
    CMatrix out(rows_, cols_);
    for (std::size_t k = 0; k < a_.size(); ++k) out.a_[k] = a_[k] + o.a_[k];
    return out;
}

CMatrix CMatrix::transpose() const {
    CMatrix out(cols_, rows_);
    for (int i = 0; i < rows_; ++i)
        for (int j = 0; j < cols_; ++j) out.at(j, i) = at(i, j);
    return out;
}

CMatrix CMatrix::adjoint() const {
    CMatrix out(cols_, rows_);
    for (int i = 0; i < rows_; ++i)
        for (int j = 0; j < cols_; ++j) out.at(j, i) = std::conj(at(i, j));
    return out;
}

std::complex<double> CMatrix::det() const {
    if (rows_ != cols_) throw math_error("determinant of a non-square matrix");
    CMatrix lu = *this;
    int n = rows_;
    std::complex<double> d = 1.0;
    for (int c = 0; c < n; ++c) {
        int p = c;
        for (int r = c + 1; r < n; ++r)
            if (std::abs(lu.at(r, c)) > std::abs(lu.at(p, c))) p = r;
        if (std::abs(lu.at(p, c)) == 0.0) return 0.0;
        if (p != c) {
            for (int j = 0; j < n; ++j) std::swap(lu.at(p, j), lu.at(c, j));
            d = -d;
        }
        d *= lu.at(c, c);
        for (int r = c + 1; r < n; ++r) {
            std::complex<double> f = lu.at(r, c) / lu.at(c, c);
            for (int j = c; j < n; ++j) lu.at(r, j) -= f * lu.at(c, j);
        }
    }
    return d;
}

CMatrix CMatrix::inverse() const {
    if (rows_ != cols_) throw math_error("inverse of a non-square matrix");
    int n = rows_;
    CMatrix lu = *this;
    CMatrix inv = identity(n);
    for (int c = 0; c < n; ++c) {
        int p = c;
        for (int r = c + 1; r < n; ++r)
            if (std::abs(lu.at(r, c)) > std::abs(lu.at(p, c))) p = r;
        if (std::abs(lu.at(p, c)) < 1e-300) throw math_error("singular matrix");
        if (p != c)
            for (int j = 0; j < n; ++j) {
                std::swap(lu.at(p, j), lu.at(c, j));
                std::swap(inv.at(p, j), inv.at(c, j));
            }
        std::complex<double> piv = lu.at(c, c);
        for (int j = 0; j < n; ++j) {
            lu.at(c, j) /= piv;
            inv.at(c, j) /= piv;
        }
        for (int r = 0; r < n; ++r) {
            if (r == c) continue;
            std::complex<double> f = lu.at(r, c);
            if (f == 0.0) continue;
            for (int j = 0; j < n; ++j) {
                lu.at(r, j) -= f * lu.at(c, j);
                inv.at(r, j) -= f * inv.at(c, j);
            }
        }
    }
    return inv;
}

std::vector<std::complex<double>> CMatrix::char_poly() const {
    if (rows_ != cols_) throw math_error("characteristic polynomial of a non-square matrix");
    int n = rows_;
    std::vector<std::complex<double>> c(n);
    CMatrix m = identity(n);
    for (int k = 1; k <= n; ++k) {
        m = (*this) * m;
        std::complex<double> ck = -m.trace() / static_cast<double>(k);
        c[n - k] = ck;
        for (int i = 0; i < n; ++i) m.at(i, i) += ck;
    }
    return c;
}

std::complex<double> CMatrix::trace() const {
    std::complex<double> t = 0.0;
    for (int i = 0; i < rows_ && i < cols_; ++i) t += at(i, i);
    return t;
}

double CMatrix::norm_inf() const {
    double m = 0.0;
    for (const auto& v : a_) m = std::max(m, std::abs(v));
    return m;
}

bool CMatrix::close_to(const CMatrix& o, double tol) const {
    if (rows_ != o.rows_ || cols_ != o.cols_) return false;
    for (std::size_t k = 0; k < a_.size(); ++k)
        if (std::abs(a_[k] - o.a_[k]) > tol) return false;
    return true;
}

} // namespace stokeskit
