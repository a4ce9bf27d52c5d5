#include "gptnc/matrix.hpp"

#include "gptnc/errors.hpp"

#include <utility>

namespace gptnc {

Matrix Matrix::identity(std::size_t n) {
    Matrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1;
    return m;
}

Matrix Matrix::from_rows(const std::vector<Vector>& rows, std::size_t cols_if_empty) {
    std::size_t cols = rows.empty() ? cols_if_empty : rows.front().size();
    Matrix m(rows.size(), cols);
    for (std::size_t r = 0; r < rows.size(); ++r) {
        if (rows[r].size() != cols) throw DimensionMismatch("ragged matrix rows");
        for (std::size_t c = 0; c < cols; ++c) m(r, c) = rows[r][c];
    }
    return m;
}

Matrix Matrix::from_columns(const std::vector<Vector>& cols, std::size_t rows_if_empty) {
    return from_rows(cols, rows_if_empty).transpose();
}

Vector Matrix::row(std::size_t r) const {
    return Vector(data_.begin() + static_cast<std::ptrdiff_t>(r * cols_),
                  data_.begin() + static_cast<std::ptrdiff_t>((r + 1) * cols_));
}

Vector Matrix::col(std::size_t c) const {
    Vector v(rows_);
    for (std::size_t r = 0; r < rows_; ++r) v[r] = (*this)(r, c);
    return v;
}

std::vector<Vector> Matrix::row_list() const {
    std::vector<Vector> out;
    out.reserve(rows_);
    for (std::size_t r = 0; r < rows_; ++r) out.push_back(row(r));
    return out;
}

Matrix Matrix::transpose() const {
    Matrix t(cols_, rows_);
    for (std::size_t r = 0; r < rows_; ++r)
        for (std::size_t c = 0; c < cols_; ++c) t(c, r) = (*this)(r, c);
    return t;
}

Vector Matrix::apply(const Vector& v) const {
    if (v.size() != cols_) throw DimensionMismatch("matrix-vector product");
    Vector out(rows_);
    for (std::size_t r = 0; r < rows_; ++r) {
        Rational s = 0;
        for (std::size_t c = 0; c < cols_; ++c)
            if (sgn(v[c]) != 0 && sgn((*this)(r, c)) != 0) s += (*this)(r, c) * v[c];
        out[r] = s;
    }
    return out;
}

Matrix operator*(const Matrix& a, const Matrix& b) {
    if (a.cols_ != b.rows_) throw DimensionMismatch("matrix product");
    Matrix out(a.rows_, b.cols_);
    for (std::size_t i = 0; i < a.rows_; ++i)
        for (std::size_t k = 0; k < a.cols_; ++k) {
            const Rational& aik = a(i, k);
            if (sgn(aik) == 0) continue;
            for (std::size_t j = 0; j < b.cols_; ++j)
                if (sgn(b(k, j)) != 0) out(i, j) += aik * b(k, j);
        }
    return out;
}

Matrix operator+(const Matrix& a, const Matrix& b) {
    if (a.rows_ != b.rows_ || a.cols_ != b.cols_) throw DimensionMismatch("matrix sum");
    Matrix out = a;
    for (std::size_t i = 0; i < out.data_.size(); ++i) out.data_[i] += b.data_[i];
    return out;
}

Matrix operator-(const Matrix& a, const Matrix& b) {
    if (a.rows_ != b.rows_ || a.cols_ != b.cols_) throw DimensionMismatch("matrix difference");
    Matrix out = a;
    for (std::size_t i = 0; i < out.data_.size(); ++i) out.data_[i] -= b.data_[i];
    return out;
}

Echelon row_reduce(Matrix m) {
    Echelon e;
    std::size_t lead_row = 0;
    for (std::size_t c = 0; c < m.cols() && lead_row < m.rows(); ++c) {
        std::size_t p = lead_row;
        while (p < m.rows() && sgn(m(p, c)) == 0) ++p;
        if (p == m.rows()) continue;
        if (p != lead_row)
            for (std::size_t k = 0; k < m.cols(); ++k) std::swap(m(p, k), m(lead_row, k));
        Rational inv = 1 / m(lead_row, c);
        for (std::size_t k = c; k < m.cols(); ++k) m(lead_row, k) *= inv;
        for (std::size_t r = 0; r < m.rows(); ++r) {
            if (r == lead_row || sgn(m(r, c)) == 0) continue;
            Rational f = m(r, c);
            for (std::size_t k = c; k < m.cols(); ++k)
                if (sgn(m(lead_row, k)) != 0) m(r, k) -= f * m(lead_row, k);
        }
        e.pivots.push_back(c);
        ++lead_row;
    }
    e.rref = std::move(m);
    return e;
}

std::size_t rank(const Matrix& m) { return row_reduce(m).pivots.size(); }

std::size_t rank(const std::vector<Vector>& rows, std::size_t dim) {
    return rank(Matrix::from_rows(rows, dim));
}

std::vector<Vector> null_space(const Matrix& m) {
    Echelon e = row_reduce(m);
    std::vector<bool> is_pivot(m.cols(), false);
    for (auto p : e.pivots) is_pivot[p] = true;
    std::vector<Vector> basis;
    for (std::size_t free = 0; free < m.cols(); ++free) {
        if (is_pivot[free]) continue;
        Vector v(m.cols());
        v[free] = 1;
        for (std::size_t r = 0; r < e.pivots.size(); ++r) v[e.pivots[r]] = -e.rref(r, free);
        basis.push_back(std::move(v));
    }
    return basis;
}

std::vector<std::size_t> independent_subset(const std::vector<Vector>& rows, std::size_t dim) {
    // Incremental elimination against a growing echelon basis.
    std::vector<Vector> basis;
    std::vector<std::size_t> pivot_of;
    std::vector<std::size_t> chosen;
    for (std::size_t i = 0; i < rows.size(); ++i) {
        if (rows[i].size() != dim) throw DimensionMismatch("independent_subset");
        Vector v = rows[i];
        for (std::size_t b = 0; b < basis.size(); ++b) {
            if (sgn(v[pivot_of[b]]) == 0) continue;
            Rational f = v[pivot_of[b]];
            for (std::size_t k = 0; k < dim; ++k)
                if (sgn(basis[b][k]) != 0) v[k] -= f * basis[b][k];
        }
        std::size_t p = 0;
        while (p < dim && sgn(v[p]) == 0) ++p;
        if (p == dim) continue;
        Rational inv = 1 / v[p];
        for (auto& x : v) x *= inv;
        for (std::size_t b = 0; b < basis.size(); ++b) {
            if (sgn(basis[b][p]) == 0) continue;
            Rational f = basis[b][p];
            for (std::size_t k = 0; k < dim; ++k)
                if (sgn(v[k]) != 0) basis[b][k] -= f * v[k];
        }
        basis.push_back(std::move(v));
        pivot_of.push_back(p);
        chosen.push_back(i);
        if (basis.size() == dim) break;
    }
    return chosen;
}

std::optional<Matrix> inverse(const Matrix& m) {
    if (m.rows() != m.cols()) return std::nullopt;
    std::size_t n = m.rows();
    Matrix aug(n, 2 * n);
    for (std::size_t r = 0; r < n; ++r) {
        for (std::size_t c = 0; c < n; ++c) aug(r, c) = m(r, c);
        aug(r, n + r) = 1;
    }
    Echelon e = row_reduce(std::move(aug));
    if (e.pivots.size() < n || e.pivots[n - 1] != n - 1) return std::nullopt;
    Matrix inv(n, n);
    for (std::size_t r = 0; r < n; ++r)
        for (std::size_t c = 0; c < n; ++c) inv(r, c) = e.rref(r, n + c);
    return inv;
}

std::optional<Vector> solve(const Matrix& a, const Vector& b) {
    if (b.size() != a.rows()) throw DimensionMismatch("solve");
    Matrix aug(a.rows(), a.cols() + 1);
    for (std::size_t r = 0; r < a.rows(); ++r) {
        for (std::size_t c = 0; c < a.cols(); ++c) aug(r, c) = a(r, c);
        aug(r, a.cols()) = b[r];
    }
    Echelon e = row_reduce(std::move(aug));
    if (!e.pivots.empty() && e.pivots.back() == a.cols()) return std::nullopt;
    Vector x(a.cols());
    for (std::size_t r = 0; r < e.pivots.size(); ++r) x[e.pivots[r]] = e.rref(r, a.cols());
    return x;
}

std::optional<Matrix> solve_left(const Matrix& a, const Matrix& b) {
    // X a = b  <=>  a^T X^T = b^T, column by column.
    if (a.cols() != b.cols()) throw DimensionMismatch("solve_left");
    Matrix at = a.transpose();
    Matrix x(b.rows(), a.rows());
    for (std::size_t r = 0; r < b.rows(); ++r) {
        auto sol = solve(at, b.row(r));
        if (!sol) return std::nullopt;
        for (std::size_t c = 0; c < a.rows(); ++c) x(r, c) = (*sol)[c];
    }
    return x;
}

} // namespace gptnc
