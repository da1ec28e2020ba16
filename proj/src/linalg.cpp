#include "secrep/linalg.hpp"

#include <stdexcept>
#include <string>

namespace secrep {

Matrix::Matrix(PrimeField field, std::size_t rows, std::size_t cols)
    : field_(field), rows_(rows), cols_(cols), data_(rows * cols, Fp(0, field)) {}

Matrix Matrix::identity(PrimeField field, std::size_t n) {
    Matrix m(field, n, n);
    for (std::size_t i = 0; i < n; ++i) m.at(i, i) = Fp(1, field);
    return m;
}

FpVec Matrix::row(std::size_t r) const {
    FpVec out;
    out.reserve(cols_);
    for (std::size_t c = 0; c < cols_; ++c) out.push_back(at(r, c));
    return out;
}

FpVec Matrix::col(std::size_t c) const {
    FpVec out;
    out.reserve(rows_);
    for (std::size_t r = 0; r < rows_; ++r) out.push_back(at(r, c));
    return out;
}

Matrix Matrix::transpose() const {
    Matrix out(field_, cols_, rows_);
    for (std::size_t r = 0; r < rows_; ++r)
        for (std::size_t c = 0; c < cols_; ++c) out.at(c, r) = at(r, c);
    return out;
}

Matrix Matrix::columns(const std::vector<std::size_t>& which) const {
    Matrix out(field_, rows_, which.size());
    for (std::size_t j = 0; j < which.size(); ++j) {
        if (which[j] >= cols_) throw std::out_of_range("column index out of range");
        for (std::size_t r = 0; r < rows_; ++r) out.at(r, j) = at(r, which[j]);
    }
    return out;
}

Matrix operator*(const Matrix& a, const Matrix& b) {
    if (a.field() != b.field()) throw FieldMismatch();
    if (a.cols() != b.rows()) throw std::invalid_argument("matrix product: inner dimensions differ");
    Matrix out(a.field(), a.rows(), b.cols());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t k = 0; k < a.cols(); ++k) {
            const Fp aik = a.at(i, k);
            if (aik.is_zero()) continue;
            for (std::size_t j = 0; j < b.cols(); ++j) out.at(i, j) += aik * b.at(k, j);
        }
    return out;
}

bool operator==(const Matrix& a, const Matrix& b) {
    if (a.field() != b.field() || a.rows() != b.rows() || a.cols() != b.cols()) return false;
    for (std::size_t i = 0; i < a.data_.size(); ++i)
        if (a.data_[i] != b.data_[i]) return false;
    return true;
}

FpVec operator*(const FpVec& row, const Matrix& m) {
    if (row.size() != m.rows()) throw std::invalid_argument("row * matrix: dimension mismatch");
    FpVec out(m.cols(), Fp(0, m.field()));
    for (std::size_t k = 0; k < row.size(); ++k) {
        const Fp x = row[k];
        if (x.field() != m.field()) throw FieldMismatch();
        if (x.is_zero()) continue;
        for (std::size_t j = 0; j < m.cols(); ++j) out[j] += x * m.at(k, j);
    }
    return out;
}

Matrix power_matrix(const std::vector<Fp>& points, std::size_t rows) {
    if (points.empty()) throw std::invalid_argument("power matrix needs at least one point");
    const PrimeField f = points.front().field();
    Matrix m(f, rows, points.size());
    for (std::size_t j = 0; j < points.size(); ++j) {
        Fp acc(1, f);  // 0^0 = 1
        for (std::size_t i = 0; i < rows; ++i) {
            m.at(i, j) = acc;
            acc *= points[j];
        }
    }
    return m;
}

Matrix vandermonde(const std::vector<Fp>& alphas, std::size_t rows) {
    if (rows < 1) throw std::invalid_argument("vandermonde needs at least one row");
    for (std::size_t i = 0; i < alphas.size(); ++i) {
        if (alphas[i].is_zero())
            throw std::invalid_argument("vandermonde: evaluation point 0 at index " + std::to_string(i));
        for (std::size_t j = 0; j < i; ++j)
            if (alphas[i] == alphas[j])
                throw std::invalid_argument("vandermonde: repeated evaluation point " +
                                            std::to_string(alphas[i].value()));
    }
    return power_matrix(alphas, rows);
}

namespace {

// Reduced row echelon form of [A | B] in place; returns the pivot column of
// each row (relative to A) in elimination order.
std::vector<std::size_t> rref(Matrix& a, Matrix* b) {
    const PrimeField f = a.field();
    std::vector<std::size_t> pivots;
    std::size_t pr = 0;
    for (std::size_t pc = 0; pc < a.cols() && pr < a.rows(); ++pc) {
        std::size_t sel = pr;
        while (sel < a.rows() && a.at(sel, pc).is_zero()) ++sel;
        if (sel == a.rows()) continue;
        if (sel != pr) {
            for (std::size_t c = 0; c < a.cols(); ++c) std::swap(a.at(sel, c), a.at(pr, c));
            if (b)
                for (std::size_t c = 0; c < b->cols(); ++c) std::swap(b->at(sel, c), b->at(pr, c));
        }
        const Fp inv = inverse(a.at(pr, pc));
        for (std::size_t c = pc; c < a.cols(); ++c) a.at(pr, c) *= inv;
        if (b)
            for (std::size_t c = 0; c < b->cols(); ++c) b->at(pr, c) *= inv;
        for (std::size_t r = 0; r < a.rows(); ++r) {
            if (r == pr) continue;
            const Fp factor = a.at(r, pc);
            if (factor.is_zero()) continue;
            for (std::size_t c = pc; c < a.cols(); ++c) a.at(r, c) -= factor * a.at(pr, c);
            if (b)
                for (std::size_t c = 0; c < b->cols(); ++c) b->at(r, c) -= factor * b->at(pr, c);
        }
        pivots.push_back(pc);
        ++pr;
    }
    (void)f;
    return pivots;
}

}  // namespace

std::optional<Matrix> solve_linear(const Matrix& A, const Matrix& B) {
    if (A.rows() != B.rows()) throw std::invalid_argument("solve_linear: dimension mismatch");
    if (A.field() != B.field()) throw FieldMismatch();
    Matrix a = A;
    Matrix b = B;
    const std::vector<std::size_t> pivots = rref(a, &b);
    // rows below the pivot rows are all-zero in a; a non-zero rhs there means
    // the system is inconsistent
    for (std::size_t r = pivots.size(); r < a.rows(); ++r)
        for (std::size_t c = 0; c < b.cols(); ++c)
            if (!b.at(r, c).is_zero()) return std::nullopt;
    Matrix x(A.field(), A.cols(), B.cols());  // free variables stay zero
    for (std::size_t r = 0; r < pivots.size(); ++r)
        for (std::size_t c = 0; c < b.cols(); ++c) x.at(pivots[r], c) = b.at(r, c);
    return x;
}

std::optional<FpVec> solve_linear(const Matrix& A, const FpVec& b) {
    if (A.rows() != b.size()) throw std::invalid_argument("solve_linear: dimension mismatch");
    Matrix rhs(A.field(), b.size(), 1);
    for (std::size_t i = 0; i < b.size(); ++i) {
        if (b[i].field() != A.field()) throw FieldMismatch();
        rhs.at(i, 0) = b[i];
    }
    const std::optional<Matrix> x = solve_linear(A, rhs);
    if (!x) return std::nullopt;
    return x->col(0);
}

std::size_t rank(Matrix a) { return rref(a, nullptr).size(); }

}  // namespace secrep
