#include "conduche/matrix.hpp"

#include <algorithm>
#include <cmath>

namespace conduche {

double max_abs_deviation(const ScalarMatrix& a, const ScalarMatrix& b) {
    if (a.rows() != b.rows() || a.cols() != b.cols())
        fail(Errc::dimension_mismatch, "matrix shapes disagree");
    double mx = 0;
    for (size_t i = 0; i < a.rows(); ++i)
        for (size_t j = 0; j < a.cols(); ++j)
            mx = std::max(mx, std::sqrt((a.at(i, j) - b.at(i, j)).abs2_double()));
    return mx;
}

double max_abs_deviation(const ComplexMatrix& a, const ComplexMatrix& b) {
    if (a.rows() != b.rows() || a.cols() != b.cols())
        fail(Errc::dimension_mismatch, "matrix shapes disagree");
    double mx = 0;
    for (size_t i = 0; i < a.rows(); ++i)
        for (size_t j = 0; j < a.cols(); ++j) mx = std::max(mx, std::abs(a.at(i, j) - b.at(i, j)));
    return mx;
}

ComplexMatrix to_complex(const ScalarMatrix& m) {
    ComplexMatrix out(m.rows(), m.cols());
    for (size_t i = 0; i < m.rows(); ++i)
        for (size_t j = 0; j < m.cols(); ++j)
            out.at(i, j) = {m.at(i, j).re.to_double(), m.at(i, j).im.to_double()};
    return out;
}

}  // namespace conduche
