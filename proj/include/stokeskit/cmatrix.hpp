#pragma once

#include <complex>
#include <vector>

namespace stokeskit {

// Dense complex matrix, sized for desk-scale Stokes data (rank <= 4 or so).
class CMatrix {
public:
    CMatrix() = default;
    CMatrix(int rows, int cols) : rows_(rows), cols_(cols), a_(rows * cols) {}

    static CMatrix identity(int n);

    int rows() const { return rows_; }
    int cols() const { return cols_; }

    std::complex<double>& at(int i, int j) { return a_[i * cols_ + j]; }
    const std::complex<double>& at(int i, int j) const { return a_[i * cols_ + j]; }

    CMatrix operator*(const CMatrix& o) const;
    CMatrix operator*(std::complex<double> s) const;
    CMatrix operator-(const CMatrix& o) const;
    CMatrix operator+(const CMatrix& o) const;

    CMatrix transpose() const;
    CMatrix adjoint() const;

    std::complex<double> det() const;
    CMatrix inverse() const; // throws math_error on singular input

    // Monic characteristic polynomial coefficients c_0..c_{n-1} with
    // p(t) = t^n + c_{n-1} t^{n-1} + ... + c_0 (Faddeev-LeVerrier).
    std::vector<std::complex<double>> char_poly() const;

    std::complex<double> trace() const;
    double norm_inf() const; // max |entry|

    bool close_to(const CMatrix& o, double tol) const;

private:
    int rows_ = 0;
    int cols_ = 0;
    std::vector<std::complex<double>> a_;
};

} // namespace stokeskit
