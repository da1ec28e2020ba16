#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "secrep/field.hpp"

namespace secrep {

using FpVec = std::vector<Fp>;

/// Dense row-major matrix with every entry in one prime field.
class Matrix {
public:
    Matrix(PrimeField field, std::size_t rows, std::size_t cols);
    static Matrix identity(PrimeField field, std::size_t n);

    std::size_t rows() const noexcept { return rows_; }
    std::size_t cols() const noexcept { return cols_; }
    PrimeField field() const noexcept { return field_; }

    Fp& at(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
    const Fp& at(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

    FpVec row(std::size_t r) const;
    FpVec col(std::size_t c) const;
    Matrix transpose() const;
    Matrix columns(const std::vector<std::size_t>& which) const;

    friend Matrix operator*(const Matrix& a, const Matrix& b);
    friend bool operator==(const Matrix& a, const Matrix& b);
    friend bool operator!=(const Matrix& a, const Matrix& b) { return !(a == b); }

private:
    PrimeField field_;
    std::size_t rows_, cols_;
    std::vector<Fp> data_;
};

/// Row vector times matrix; the encode orientation (x * G).
FpVec operator*(const FpVec& row, const Matrix& m);

/// Entry (i, j) = points[j]^i, i in [0, rows). No restriction on the points.
Matrix power_matrix(const std::vector<Fp>& points, std::size_t rows);

/// Power matrix over distinct non-zero evaluation points.
Matrix vandermonde(const std::vector<Fp>& alphas, std::size_t rows);

/// Solves A x = b. Underdetermined systems resolve free variables to zero,
/// so the result is deterministic. Inconsistent systems yield nullopt.
std::optional<FpVec> solve_linear(const Matrix& A, const FpVec& b);

/// Multi-RHS variant: solves A X = B column by column with one elimination.
/// nullopt if any column is inconsistent.
std::optional<Matrix> solve_linear(const Matrix& A, const Matrix& B);

std::size_t rank(Matrix a);

}  // namespace secrep
