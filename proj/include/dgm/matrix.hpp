#pragma once

#include <cstddef>
#include <initializer_list>
#include <string>
#include <vector>

#include "dgm/error.hpp"
#include "dgm/scalar.hpp"

namespace dgm {

class Vector {
public:
    Vector(Field f, std::size_t n) : f_(f), v_(n, Scalar::zero(f)) {}
    Vector(Field f, std::vector<Scalar> v) : f_(f), v_(std::move(v)) {
        for (const auto& s : v_)
            if (s.field() != f_) throw FieldMismatch();
    }

    static Vector unit(Field f, std::size_t n, std::size_t i) {
        Vector e(f, n);
        e[i] = Scalar::one(f);
        return e;
    }
    static Vector from_ints(Field f, std::initializer_list<long long> xs) {
        std::vector<Scalar> v;
        for (long long x : xs) v.emplace_back(f, x);
        return Vector(f, std::move(v));
    }

    Field field() const { return f_; }
    std::size_t size() const { return v_.size(); }
    Scalar& operator[](std::size_t i) { return v_[i]; }
    const Scalar& operator[](std::size_t i) const { return v_[i]; }
    const std::vector<Scalar>& entries() const { return v_; }

    bool is_zero() const {
        for (const auto& s : v_)
            if (!s.is_zero()) return false;
        return true;
    }

    Vector& operator+=(const Vector& o) {
        same_shape(o);
        for (std::size_t i = 0; i < v_.size(); ++i)
            if (!o.v_[i].is_zero()) v_[i] += o.v_[i];
        return *this;
    }
    Vector& operator-=(const Vector& o) {
        same_shape(o);
        for (std::size_t i = 0; i < v_.size(); ++i)
            if (!o.v_[i].is_zero()) v_[i] -= o.v_[i];
        return *this;
    }
    Vector operator+(const Vector& o) const { Vector r = *this; return r += o; }
    Vector operator-(const Vector& o) const { Vector r = *this; return r -= o; }
    Vector operator-() const {
        Vector r = *this;
        for (auto& s : r.v_) s = -s;
        return r;
    }
    Vector operator*(const Scalar& c) const {
        Vector r = *this;
        for (auto& s : r.v_) s = s * c;
        return r;
    }
    /// this += c * o
    void axpy(const Scalar& c, const Vector& o) {
        same_shape(o);
        if (c.is_zero()) return;
        for (std::size_t i = 0; i < v_.size(); ++i)
            if (!o.v_[i].is_zero()) v_[i] += c * o.v_[i];
    }

    bool operator==(const Vector& o) const { return f_ == o.f_ && v_ == o.v_; }
    bool operator!=(const Vector& o) const { return !(*this == o); }

    Vector slice(std::size_t from, std::size_t n) const {
        return Vector(f_, std::vector<Scalar>(v_.begin() + from, v_.begin() + from + n));
    }
    void append(const Vector& o) { v_.insert(v_.end(), o.v_.begin(), o.v_.end()); }

    std::string to_string() const {
        std::string s = "(";
        for (std::size_t i = 0; i < v_.size(); ++i) s += (i ? "," : "") + v_[i].to_string();
        return s + ")";
    }

private:
    void same_shape(const Vector& o) const {
        if (f_ != o.f_) throw FieldMismatch();
        if (v_.size() != o.v_.size()) throw DimensionMismatch("vector lengths differ");
    }

    Field f_;
    std::vector<Scalar> v_;
};

/// Dense row-major matrix over one field.
class Matrix {
public:
    Matrix(Field f, std::size_t rows, std::size_t cols)
        : f_(f), r_(rows), c_(cols), a_(rows * cols, Scalar::zero(f)) {}

    static Matrix identity(Field f, std::size_t n) {
        Matrix m(f, n, n);
        for (std::size_t i = 0; i < n; ++i) m(i, i) = Scalar::one(f);
        return m;
    }
    static Matrix from_columns(Field f, std::size_t rows, const std::vector<Vector>& cols) {
        Matrix m(f, rows, cols.size());
        for (std::size_t j = 0; j < cols.size(); ++j) {
            if (cols[j].size() != rows) throw DimensionMismatch("column length mismatch");
            for (std::size_t i = 0; i < rows; ++i) m(i, j) = cols[j][i];
        }
        return m;
    }
    static Matrix from_rows(Field f, std::size_t cols, const std::vector<Vector>& rows) {
        Matrix m(f, rows.size(), cols);
        for (std::size_t i = 0; i < rows.size(); ++i) {
            if (rows[i].size() != cols) throw DimensionMismatch("row length mismatch");
            for (std::size_t j = 0; j < cols; ++j) m(i, j) = rows[i][j];
        }
        return m;
    }
    static Matrix from_ints(Field f, std::initializer_list<std::initializer_list<long long>> rows) {
        const std::size_t nr = rows.size();
        const std::size_t nc = nr ? rows.begin()->size() : 0;
        Matrix m(f, nr, nc);
        std::size_t i = 0;
        for (const auto& row : rows) {
            if (row.size() != nc) throw DimensionMismatch("ragged matrix literal");
            std::size_t j = 0;
            for (long long x : row) m(i, j++) = Scalar(f, x);
            ++i;
        }
        return m;
    }

    Field field() const { return f_; }
    std::size_t rows() const { return r_; }
    std::size_t cols() const { return c_; }

    Scalar& operator()(std::size_t i, std::size_t j) { return a_[i * c_ + j]; }
    const Scalar& operator()(std::size_t i, std::size_t j) const { return a_[i * c_ + j]; }

    Vector column(std::size_t j) const {
        Vector v(f_, r_);
        for (std::size_t i = 0; i < r_; ++i) v[i] = (*this)(i, j);
        return v;
    }
    Vector row(std::size_t i) const {
        return Vector(f_, std::vector<Scalar>(a_.begin() + i * c_, a_.begin() + (i + 1) * c_));
    }
    void set_column(std::size_t j, const Vector& v) {
        if (v.size() != r_) throw DimensionMismatch("column length mismatch");
        for (std::size_t i = 0; i < r_; ++i) (*this)(i, j) = v[i];
    }
    void swap_rows(std::size_t i, std::size_t k) {
        if (i == k) return;
        for (std::size_t j = 0; j < c_; ++j) std::swap(a_[i * c_ + j], a_[k * c_ + j]);
    }

    bool is_zero() const {
        for (const auto& s : a_)
            if (!s.is_zero()) return false;
        return true;
    }

    Matrix operator*(const Matrix& o) const {
        if (f_ != o.f_) throw FieldMismatch();
        if (c_ != o.r_) throw DimensionMismatch("matrix product shape mismatch");
        Matrix m(f_, r_, o.c_);
        for (std::size_t i = 0; i < r_; ++i)
            for (std::size_t k = 0; k < c_; ++k) {
                const Scalar& x = (*this)(i, k);
                if (x.is_zero()) continue;
                for (std::size_t j = 0; j < o.c_; ++j)
                    if (!o(k, j).is_zero()) m(i, j) += x * o(k, j);
            }
        return m;
    }
    Vector operator*(const Vector& v) const {
        if (f_ != v.field()) throw FieldMismatch();
        if (c_ != v.size()) throw DimensionMismatch("matrix-vector shape mismatch");
        Vector out(f_, r_);
        for (std::size_t k = 0; k < c_; ++k) {
            if (v[k].is_zero()) continue;
            for (std::size_t i = 0; i < r_; ++i)
                if (!(*this)(i, k).is_zero()) out[i] += (*this)(i, k) * v[k];
        }
        return out;
    }
    Matrix operator+(const Matrix& o) const {
        check_same(o);
        Matrix m = *this;
        for (std::size_t i = 0; i < a_.size(); ++i) m.a_[i] += o.a_[i];
        return m;
    }
    Matrix operator-(const Matrix& o) const {
        check_same(o);
        Matrix m = *this;
        for (std::size_t i = 0; i < a_.size(); ++i) m.a_[i] -= o.a_[i];
        return m;
    }
    Matrix operator*(const Scalar& c) const {
        Matrix m = *this;
        for (auto& s : m.a_) s = s * c;
        return m;
    }
    Matrix transpose() const {
        Matrix m(f_, c_, r_);
        for (std::size_t i = 0; i < r_; ++i)
            for (std::size_t j = 0; j < c_; ++j) m(j, i) = (*this)(i, j);
        return m;
    }

    Matrix block(std::size_t r0, std::size_t c0, std::size_t nr, std::size_t nc) const {
        Matrix m(f_, nr, nc);
        for (std::size_t i = 0; i < nr; ++i)
            for (std::size_t j = 0; j < nc; ++j) m(i, j) = (*this)(r0 + i, c0 + j);
        return m;
    }
    void set_block(std::size_t r0, std::size_t c0, const Matrix& b) {
        for (std::size_t i = 0; i < b.r_; ++i)
            for (std::size_t j = 0; j < b.c_; ++j) (*this)(r0 + i, c0 + j) = b(i, j);
    }

    /// Select rows and columns by index lists.
    Matrix submatrix(const std::vector<std::size_t>& rs, const std::vector<std::size_t>& cs) const {
        Matrix m(f_, rs.size(), cs.size());
        for (std::size_t i = 0; i < rs.size(); ++i)
            for (std::size_t j = 0; j < cs.size(); ++j) m(i, j) = (*this)(rs[i], cs[j]);
        return m;
    }

    static Matrix hstack(const Matrix& a, const Matrix& b) {
        if (a.r_ != b.r_) throw DimensionMismatch("hstack row mismatch");
        Matrix m(a.f_, a.r_, a.c_ + b.c_);
        m.set_block(0, 0, a);
        m.set_block(0, a.c_, b);
        return m;
    }
    static Matrix vstack(const Matrix& a, const Matrix& b) {
        if (a.c_ != b.c_) throw DimensionMismatch("vstack column mismatch");
        Matrix m(a.f_, a.r_ + b.r_, a.c_);
        m.set_block(0, 0, a);
        m.set_block(a.r_, 0, b);
        return m;
    }

    bool operator==(const Matrix& o) const {
        return f_ == o.f_ && r_ == o.r_ && c_ == o.c_ && a_ == o.a_;
    }
    bool operator!=(const Matrix& o) const { return !(*this == o); }

private:
    void check_same(const Matrix& o) const {
        if (f_ != o.f_) throw FieldMismatch();
        if (r_ != o.r_ || c_ != o.c_) throw DimensionMismatch("matrix shapes differ");
    }

    Field f_;
    std::size_t r_, c_;
    std::vector<Scalar> a_;
};

}  // namespace dgm
