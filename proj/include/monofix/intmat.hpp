#ifndef MONOFIX_INTMAT_HPP
#define MONOFIX_INTMAT_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "monofix/errors.hpp"

namespace monofix {

// Dense integer matrix, sizes up to ~6x6. Entries are kept in int64 with
// overflow-checked products; the algorithms here pivot on minimal elements
// so growth stays tame for the matrix sizes this project uses.
class IntMat {
public:
    IntMat() : rows_(0), cols_(0) {}
    IntMat(int rows, int cols) : rows_(rows), cols_(cols), a_(static_cast<size_t>(rows * cols), 0) {}

    static IntMat identity(int n);
    static IntMat from_rows(const std::vector<std::vector<long long>>& rows);

    int rows() const { return rows_; }
    int cols() const { return cols_; }
    long long& at(int r, int c) { return a_[static_cast<size_t>(r * cols_ + c)]; }
    long long at(int r, int c) const { return a_[static_cast<size_t>(r * cols_ + c)]; }

    bool operator==(const IntMat& o) const { return rows_ == o.rows_ && cols_ == o.cols_ && a_ == o.a_; }
    bool operator!=(const IntMat& o) const { return !(*this == o); }
    bool operator<(const IntMat& o) const { return a_ < o.a_; } // for set keys

    IntMat operator*(const IntMat& o) const;
    IntMat transpose() const;
    long long det() const;        // fraction-free, square only
    bool is_identity() const;
    // inverse of a matrix with det +-1
    IntMat unimodular_inverse() const;

    std::string str() const;

private:
    int rows_, cols_;
    std::vector<long long> a_;
};

// U*A*V = D diagonal with d1 | d2 | ..., U and V unimodular.
struct SmithResult {
    IntMat U, D, V;
};
SmithResult smith_normal_form(const IntMat& A);

// Column-style Hermite normal form of the lattice spanned by the columns of
// A: returns H with columns forming a canonical basis (lower-triangular-ish,
// positive pivots, entries right of a pivot reduced). Zero columns dropped.
IntMat hnf_columns(const IntMat& A);

} // namespace monofix

#endif
