#pragma once

#include <complex>
#include <vector>

#include "conduche/errors.hpp"
#include "conduche/rational.hpp"

namespace conduche {

inline Scalar conjugate(const Scalar& s) { return s.conj(); }
inline std::complex<double> conjugate(const std::complex<double>& s) { return std::conj(s); }

/// Dense matrix over an exact or floating scalar; just enough linear algebra
/// for representation checking.
template <typename T>
class Mat {
public:
    Mat() = default;
    Mat(size_t rows, size_t cols) : rows_(rows), cols_(cols), data_(rows * cols, T(0)) {}

    static Mat identity(size_t n) {
        Mat m(n, n);
        for (size_t i = 0; i < n; ++i) m.at(i, i) = T(1);
        return m;
    }

    size_t rows() const { return rows_; }
    size_t cols() const { return cols_; }
    T& at(size_t i, size_t j) { return data_[i * cols_ + j]; }
    const T& at(size_t i, size_t j) const { return data_[i * cols_ + j]; }

    friend Mat operator+(const Mat& a, const Mat& b) {
        a.require_same_shape(b);
        Mat out(a.rows_, a.cols_);
        for (size_t i = 0; i < a.data_.size(); ++i) out.data_[i] = a.data_[i] + b.data_[i];
        return out;
    }

    friend Mat operator-(const Mat& a, const Mat& b) {
        a.require_same_shape(b);
        Mat out(a.rows_, a.cols_);
        for (size_t i = 0; i < a.data_.size(); ++i) out.data_[i] = a.data_[i] - b.data_[i];
        return out;
    }

    friend Mat operator*(const Mat& a, const Mat& b) {
        if (a.cols_ != b.rows_) fail(Errc::dimension_mismatch, "matrix product shapes disagree");
        Mat out(a.rows_, b.cols_);
        for (size_t i = 0; i < a.rows_; ++i)
            for (size_t k = 0; k < a.cols_; ++k) {
                const T& aik = a.at(i, k);
                if (aik == T(0)) continue;
                for (size_t j = 0; j < b.cols_; ++j) out.at(i, j) += aik * b.at(k, j);
            }
        return out;
    }

    friend bool operator==(const Mat& a, const Mat& b) {
        return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.data_ == b.data_;
    }

    Mat adjoint() const {
        Mat out(cols_, rows_);
        for (size_t i = 0; i < rows_; ++i)
            for (size_t j = 0; j < cols_; ++j) out.at(j, i) = conjugate(at(i, j));
        return out;
    }

    bool is_zero() const {
        for (const auto& v : data_)
            if (!(v == T(0))) return false;
        return true;
    }

private:
    void require_same_shape(const Mat& o) const {
        if (rows_ != o.rows_ || cols_ != o.cols_)
            fail(Errc::dimension_mismatch, "matrix shapes disagree");
    }

    size_t rows_ = 0, cols_ = 0;
    std::vector<T> data_;
};

using ScalarMatrix = Mat<Scalar>;
using ComplexMatrix = Mat<std::complex<double>>;

/// Largest entry magnitude of a - b, evaluated in floating point (diagnostic
/// only; exact comparisons use operator==).
double max_abs_deviation(const ScalarMatrix& a, const ScalarMatrix& b);
double max_abs_deviation(const ComplexMatrix& a, const ComplexMatrix& b);

ComplexMatrix to_complex(const ScalarMatrix& m);

}  // namespace conduche
