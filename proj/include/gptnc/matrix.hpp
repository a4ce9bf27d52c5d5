#pragma once

#include "gptnc/rational.hpp"

#include <cstddef>
#include <optional>
#include <vector>

namespace gptnc {

/// Dense row-major matrix of exact rationals. Linear maps V -> W are stored
/// as dim(W) x dim(V) matrices acting on column vectors.
class Matrix {
public:
    Matrix() = default;
    Matrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols) {}

    static Matrix identity(std::size_t n);
    static Matrix from_rows(const std::vector<Vector>& rows, std::size_t cols_if_empty = 0);
    static Matrix from_columns(const std::vector<Vector>& cols, std::size_t rows_if_empty = 0);

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }

    Rational& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
    const Rational& operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

    Vector row(std::size_t r) const;
    Vector col(std::size_t c) const;
    std::vector<Vector> row_list() const;

    Matrix transpose() const;
    Vector apply(const Vector& v) const;

    friend Matrix operator*(const Matrix& a, const Matrix& b);
    friend Matrix operator+(const Matrix& a, const Matrix& b);
    friend Matrix operator-(const Matrix& a, const Matrix& b);
    friend bool operator==(const Matrix& a, const Matrix& b) = default;

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<Rational> data_;
};

/// Reduced row echelon form with the pivot column of each nonzero row.
struct Echelon {
    Matrix rref;
    std::vector<std::size_t> pivots;
};

Echelon row_reduce(Matrix m);

std::size_t rank(const Matrix& m);
std::size_t rank(const std::vector<Vector>& rows, std::size_t dim);

/// Basis (as rows) of {x : m x = 0}.
std::vector<Vector> null_space(const Matrix& m);

/// Basis of span(rows), chosen as a subset of the inputs (greedy, first-fit).
std::vector<std::size_t> independent_subset(const std::vector<Vector>& rows, std::size_t dim);

std::optional<Matrix> inverse(const Matrix& m);

/// Some x with a x = b, or nullopt when inconsistent.
std::optional<Vector> solve(const Matrix& a, const Vector& b);

/// Some X with X a = b (rows of X solved independently), or nullopt.
std::optional<Matrix> solve_left(const Matrix& a, const Matrix& b);

} // namespace gptnc
