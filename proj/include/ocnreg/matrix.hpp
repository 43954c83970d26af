#pragma once

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <vector>

namespace ocnreg {

using Vec = std::vector<double>;

/**
 * @brief Dense row-major matrix, sized once at construction.
 *
 * Only what the solver stack needs: element access, symmetric fill
 * and a matrix-vector product. Networks here stay small (a few
 * hundred channels), so dense storage is not a concern.
 */
class Matrix {
public:
    Matrix() = default;

    Matrix(std::size_t rows, std::size_t cols, double fill = 0.0)
        : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

    static Matrix identity(std::size_t n) {
        Matrix m(n, n);
        for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
        return m;
    }

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }

    double& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
    double operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

    Vec multiply(const Vec& x) const {
        if (x.size() != cols_) throw std::invalid_argument("matrix-vector size mismatch");
        Vec y(rows_, 0.0);
        for (std::size_t i = 0; i < rows_; ++i) {
            double acc = 0.0;
            const double* row = &data_[i * cols_];
            for (std::size_t j = 0; j < cols_; ++j) acc += row[j] * x[j];
            y[i] = acc;
        }
        return y;
    }

    double max_abs_asymmetry() const {
        double worst = 0.0;
        for (std::size_t i = 0; i < rows_; ++i)
            for (std::size_t j = i + 1; j < cols_; ++j)
                worst = std::max(worst, std::fabs((*this)(i, j) - (*this)(j, i)));
        return worst;
    }

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<double> data_;
};

inline double infinity_norm(const Vec& x) {
    double m = 0.0;
    for (double v : x) m = std::max(m, std::fabs(v));
    return m;
}

inline double mean(const Vec& x) {
    if (x.empty()) throw std::invalid_argument("mean of empty vector");
    double s = 0.0;
    for (double v : x) s += v;
    return s / static_cast<double>(x.size());
}

inline double min_element(const Vec& x) {
    if (x.empty()) throw std::invalid_argument("min of empty vector");
    double m = x[0];
    for (double v : x) m = std::min(m, v);
    return m;
}

inline double max_element(const Vec& x) {
    if (x.empty()) throw std::invalid_argument("max of empty vector");
    double m = x[0];
    for (double v : x) m = std::max(m, v);
    return m;
}

}  // namespace ocnreg
