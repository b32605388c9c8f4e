#pragma once

#include <cassert>
#include <cstddef>
#include <span>
#include <vector>

namespace cgpc {

// Dense row-major matrix of doubles. Feature blocks here are tiny
// (hundreds of values), so this stays deliberately minimal.
class Matrix {
public:
    Matrix() : rows_(0), cols_(0) {}
    Matrix(int rows, int cols, double fill = 0.0)
        : rows_(rows), cols_(cols),
          data_(static_cast<std::size_t>(rows) * static_cast<std::size_t>(cols), fill) {}

    int rows() const { return rows_; }
    int cols() const { return cols_; }
    std::size_t size() const { return data_.size(); }

    double& at(int r, int c) {
        assert(r >= 0 && r < rows_ && c >= 0 && c < cols_);
        return data_[static_cast<std::size_t>(r) * cols_ + c];
    }
    double at(int r, int c) const {
        assert(r >= 0 && r < rows_ && c >= 0 && c < cols_);
        return data_[static_cast<std::size_t>(r) * cols_ + c];
    }

    std::span<const double> row(int r) const {
        assert(r >= 0 && r < rows_);
        return {data_.data() + static_cast<std::size_t>(r) * cols_,
                static_cast<std::size_t>(cols_)};
    }

    // Row-major view of the whole matrix.
    std::span<const double> flat() const { return {data_.data(), data_.size()}; }
    std::span<double> flat_mut() { return {data_.data(), data_.size()}; }

    static Matrix from_row(std::span<const double> values) {
        Matrix m(1, static_cast<int>(values.size()));
        for (std::size_t i = 0; i < values.size(); ++i) m.data_[i] = values[i];
        return m;
    }

    static Matrix from_flat(int rows, int cols, std::span<const double> values) {
        assert(values.size() == static_cast<std::size_t>(rows) * cols);
        Matrix m(rows, cols);
        for (std::size_t i = 0; i < values.size(); ++i) m.data_[i] = values[i];
        return m;
    }

    friend bool operator==(const Matrix& a, const Matrix& b) {
        return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.data_ == b.data_;
    }

private:
    int rows_;
    int cols_;
    std::vector<double> data_;
};

} // namespace cgpc
