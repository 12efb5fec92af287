// SPDX-License-Identifier: Apache-2.0
//
// Complex vector/matrix primitives shared by every module. Row-major dense
// storage; sizes in this library stay at desk scale (N <= 256).

#pragma once

#include <cmath>
#include <complex>
#include <cstddef>
#include <stdexcept>
#include <vector>

namespace ofdmest::num {

using cplx = std::complex<double>;
using CVec = std::vector<cplx>;

inline constexpr double kPi = 3.14159265358979323846;

class CMat {
  public:
    CMat() = default;
    CMat(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols) {}

    static CMat identity(std::size_t n) {
        CMat m(n, n);
        for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
        return m;
    }

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }

    cplx& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
    const cplx& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

    cplx* data() { return data_.data(); }
    const cplx* data() const { return data_.data(); }

    CVec col(std::size_t j) const {
        CVec c(rows_);
        for (std::size_t i = 0; i < rows_; ++i) c[i] = (*this)(i, j);
        return c;
    }

    void set_col(std::size_t j, const CVec& c) {
        for (std::size_t i = 0; i < rows_; ++i) (*this)(i, j) = c[i];
    }

    bool operator==(const CMat& o) const {
        return rows_ == o.rows_ && cols_ == o.cols_ && data_ == o.data_;
    }

  private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<cplx> data_;
};

inline CMat adjoint(const CMat& a) {
    CMat r(a.cols(), a.rows());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j) r(j, i) = std::conj(a(i, j));
    return r;
}

inline CMat matmul(const CMat& a, const CMat& b) {
    if (a.cols() != b.rows()) throw std::invalid_argument("matmul: dimension mismatch");
    CMat r(a.rows(), b.cols());
    for (std::size_t i = 0; i < a.rows(); ++i) {
        for (std::size_t k = 0; k < a.cols(); ++k) {
            const cplx aik = a(i, k);
            if (aik == cplx{}) continue;
            for (std::size_t j = 0; j < b.cols(); ++j) r(i, j) += aik * b(k, j);
        }
    }
    return r;
}

inline CVec matvec(const CMat& a, const CVec& x) {
    if (a.cols() != x.size()) throw std::invalid_argument("matvec: dimension mismatch");
    CVec r(a.rows());
    for (std::size_t i = 0; i < a.rows(); ++i) {
        cplx acc = 0.0;
        for (std::size_t j = 0; j < a.cols(); ++j) acc += a(i, j) * x[j];
        r[i] = acc;
    }
    return r;
}

inline CMat add(const CMat& a, const CMat& b) {
    if (a.rows() != b.rows() || a.cols() != b.cols())
        throw std::invalid_argument("add: dimension mismatch");
    CMat r(a.rows(), a.cols());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j) r(i, j) = a(i, j) + b(i, j);
    return r;
}

inline CMat sub(const CMat& a, const CMat& b) {
    if (a.rows() != b.rows() || a.cols() != b.cols())
        throw std::invalid_argument("sub: dimension mismatch");
    CMat r(a.rows(), a.cols());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j) r(i, j) = a(i, j) - b(i, j);
    return r;
}

inline CMat scaled(const CMat& a, cplx s) {
    CMat r(a.rows(), a.cols());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j) r(i, j) = a(i, j) * s;
    return r;
}

inline double fro_norm(const CMat& a) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j) s += std::norm(a(i, j));
    return std::sqrt(s);
}

inline double vec_norm(const CVec& x) {
    double s = 0.0;
    for (const cplx& v : x) s += std::norm(v);
    return std::sqrt(s);
}

/// x^H y
inline cplx vdot(const CVec& x, const CVec& y) {
    if (x.size() != y.size()) throw std::invalid_argument("vdot: dimension mismatch");
    cplx acc = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) acc += std::conj(x[i]) * y[i];
    return acc;
}

inline bool all_finite(const CVec& x) {
    for (const cplx& v : x)
        if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) return false;
    return true;
}

inline bool all_finite(const CMat& a) {
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j)
            if (!std::isfinite(a(i, j).real()) || !std::isfinite(a(i, j).imag())) return false;
    return true;
}

/// Relative Hermitian deviation ||A - A^H|| / ||A||.
inline double hermitian_deviation(const CMat& a) {
    if (a.rows() != a.cols()) return 1.0;
    double num = 0.0, den = 0.0;
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j) {
            num += std::norm(a(i, j) - std::conj(a(j, i)));
            den += std::norm(a(i, j));
        }
    if (den == 0.0) return 0.0;
    return std::sqrt(num / den);
}

} // namespace ofdmest::num
