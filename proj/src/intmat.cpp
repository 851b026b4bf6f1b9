#include "monofix/intmat.hpp"

#include <algorithm>
#include <cstdlib>
#include <sstream>

namespace monofix {

namespace {

long long mul_checked(long long a, long long b) {
    long long r;
    require(!__builtin_mul_overflow(a, b, &r), "IntegerOverflow", "integer matrix overflow");
    return r;
}

long long add_checked(long long a, long long b) {
    long long r;
    require(!__builtin_add_overflow(a, b, &r), "IntegerOverflow", "integer matrix overflow");
    return r;
}

} // namespace

IntMat IntMat::identity(int n) {
    IntMat m(n, n);
    for (int i = 0; i < n; ++i) m.at(i, i) = 1;
    return m;
}

IntMat IntMat::from_rows(const std::vector<std::vector<long long>>& rows) {
    IntMat m(static_cast<int>(rows.size()), rows.empty() ? 0 : static_cast<int>(rows[0].size()));
    for (int r = 0; r < m.rows(); ++r) {
        require(static_cast<int>(rows[static_cast<size_t>(r)].size()) == m.cols(), "BadMatrix",
                "ragged matrix rows");
        for (int c = 0; c < m.cols(); ++c) m.at(r, c) = rows[static_cast<size_t>(r)][static_cast<size_t>(c)];
    }
    return m;
}

IntMat IntMat::operator*(const IntMat& o) const {
    require(cols_ == o.rows_, "BadMatrix", "matrix product shape mismatch");
    IntMat r(rows_, o.cols_);
    for (int i = 0; i < rows_; ++i)
        for (int j = 0; j < o.cols_; ++j) {
            long long s = 0;
            for (int k = 0; k < cols_; ++k) s = add_checked(s, mul_checked(at(i, k), o.at(k, j)));
            r.at(i, j) = s;
        }
    return r;
}

IntMat IntMat::transpose() const {
    IntMat r(cols_, rows_);
    for (int i = 0; i < rows_; ++i)
        for (int j = 0; j < cols_; ++j) r.at(j, i) = at(i, j);
    return r;
}

long long IntMat::det() const {
    require(rows_ == cols_, "BadMatrix", "determinant of non-square matrix");
    int n = rows_;
    if (n == 0) return 1;
    // Bareiss fraction-free elimination
    IntMat m = *this;
    long long prev = 1;
    long long sign = 1;
    for (int k = 0; k < n - 1; ++k) {
        if (m.at(k, k) == 0) {
            int p = -1;
            for (int r = k + 1; r < n; ++r)
                if (m.at(r, k) != 0) {
                    p = r;
                    break;
                }
            if (p < 0) return 0;
            for (int c = 0; c < n; ++c) std::swap(m.at(k, c), m.at(p, c));
            sign = -sign;
        }
        for (int i = k + 1; i < n; ++i)
            for (int j = k + 1; j < n; ++j) {
                long long v = mul_checked(m.at(i, j), m.at(k, k)) -
                              mul_checked(m.at(i, k), m.at(k, j));
                m.at(i, j) = v / prev;
            }
        prev = m.at(k, k);
    }
    return sign * m.at(n - 1, n - 1);
}

bool IntMat::is_identity() const {
    if (rows_ != cols_) return false;
    for (int i = 0; i < rows_; ++i)
        for (int j = 0; j < cols_; ++j)
            if (at(i, j) != (i == j ? 1 : 0)) return false;
    return true;
}

IntMat IntMat::unimodular_inverse() const {
    long long d = det();
    require(d == 1 || d == -1, "NotUnimodular", "matrix is not unimodular");
    int n = rows_;
    // adjugate via cofactors (n <= 6)
    IntMat inv(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            IntMat sub(n - 1, n - 1);
            for (int r = 0, rr = 0; r < n; ++r) {
                if (r == i) continue;
                for (int c = 0, cc = 0; c < n; ++c) {
                    if (c == j) continue;
                    sub.at(rr, cc++) = at(r, c);
                }
                ++rr;
            }
            long long cof = sub.det();
            if ((i + j) & 1) cof = -cof;
            inv.at(j, i) = cof * d; // divide by det = multiply, since det = +-1
        }
    return inv;
}

std::string IntMat::str() const {
    std::ostringstream os;
    os << "[";
    for (int i = 0; i < rows_; ++i) {
        os << (i ? ",[" : "[");
        for (int j = 0; j < cols_; ++j) os << (j ? "," : "") << at(i, j);
        os << "]";
    }
    os << "]";
    return os.str();
}

SmithResult smith_normal_form(const IntMat& A) {
    int m = A.rows(), n = A.cols();
    SmithResult res{IntMat::identity(m), A, IntMat::identity(n)};
    IntMat& U = res.U;
    IntMat& D = res.D;
    IntMat& V = res.V;

    auto swap_rows = [&](int i, int j) {
        for (int c = 0; c < n; ++c) std::swap(D.at(i, c), D.at(j, c));
        for (int c = 0; c < m; ++c) std::swap(U.at(i, c), U.at(j, c));
    };
    auto swap_cols = [&](int i, int j) {
        for (int r = 0; r < m; ++r) std::swap(D.at(r, i), D.at(r, j));
        for (int r = 0; r < n; ++r) std::swap(V.at(r, i), V.at(r, j));
    };
    auto add_row = [&](int dst, int src, long long f) {
        for (int c = 0; c < n; ++c) D.at(dst, c) = add_checked(D.at(dst, c), mul_checked(f, D.at(src, c)));
        for (int c = 0; c < m; ++c) U.at(dst, c) = add_checked(U.at(dst, c), mul_checked(f, U.at(src, c)));
    };
    auto add_col = [&](int dst, int src, long long f) {
        for (int r = 0; r < m; ++r) D.at(r, dst) = add_checked(D.at(r, dst), mul_checked(f, D.at(r, src)));
        for (int r = 0; r < n; ++r) V.at(r, dst) = add_checked(V.at(r, dst), mul_checked(f, V.at(r, src)));
    };
    auto negate_row = [&](int i) {
        for (int c = 0; c < n; ++c) D.at(i, c) = -D.at(i, c);
        for (int c = 0; c < m; ++c) U.at(i, c) = -U.at(i, c);
    };

    int nmin = std::min(m, n);
    for (int s = 0; s < nmin; ++s) {
        for (;;) {
            // find minimal nonzero |entry| in the trailing block
            int pr = -1, pc = -1;
            long long best = 0;
            for (int r = s; r < m; ++r)
                for (int c = s; c < n; ++c) {
                    long long v = std::llabs(D.at(r, c));
                    if (v != 0 && (pr < 0 || v < best)) {
                        best = v;
                        pr = r;
                        pc = c;
                    }
                }
            if (pr < 0) break; // all zero
            if (pr != s) swap_rows(s, pr);
            if (pc != s) swap_cols(s, pc);
            bool dirty = false;
            for (int r = s + 1; r < m; ++r)
                if (D.at(r, s) != 0) {
                    add_row(r, s, -(D.at(r, s) / D.at(s, s)));
                    if (D.at(r, s) != 0) dirty = true;
                }
            for (int c = s + 1; c < n; ++c)
                if (D.at(s, c) != 0) {
                    add_col(c, s, -(D.at(s, c) / D.at(s, s)));
                    if (D.at(s, c) != 0) dirty = true;
                }
            if (dirty) continue;
            // divisibility of the trailing block by the pivot
            bool divides = true;
            int br = -1;
            for (int r = s + 1; r < m && divides; ++r)
                for (int c = s + 1; c < n; ++c)
                    if (D.at(r, c) % D.at(s, s) != 0) {
                        divides = false;
                        br = r;
                        break;
                    }
            if (divides) break;
            add_row(s, br, 1); // pull the offending row up and redo
        }
        if (s < nmin && D.at(s, s) < 0) negate_row(s);
    }
    return res;
}

IntMat hnf_columns(const IntMat& A) {
    // row HNF of the transpose, transposed back
    IntMat B = A.transpose(); // rows = generators of the lattice
    int m = B.rows(), n = B.cols();
    int pivot_row = 0;
    std::vector<int> pivot_cols;
    for (int col = 0; col < n && pivot_row < m; ++col) {
        // Euclid down the column
        for (;;) {
            int best = -1;
            long long bv = 0;
            for (int r = pivot_row; r < m; ++r) {
                long long v = std::llabs(B.at(r, col));
                if (v != 0 && (best < 0 || v < bv)) {
                    best = r;
                    bv = v;
                }
            }
            if (best < 0) break;
            if (best != pivot_row)
                for (int c = 0; c < n; ++c) std::swap(B.at(pivot_row, c), B.at(best, c));
            bool clean = true;
            for (int r = pivot_row + 1; r < m; ++r)
                if (B.at(r, col) != 0) {
                    long long f = B.at(r, col) / B.at(pivot_row, col);
                    for (int c = 0; c < n; ++c)
                        B.at(r, c) = add_checked(B.at(r, c), mul_checked(-f, B.at(pivot_row, c)));
                    if (B.at(r, col) != 0) clean = false;
                }
            if (clean) break;
        }
        if (B.at(pivot_row, col) == 0) continue;
        if (B.at(pivot_row, col) < 0)
            for (int c = 0; c < n; ++c) B.at(pivot_row, c) = -B.at(pivot_row, c);
        // reduce entries above the pivot into [0, pivot)
        for (int r = 0; r < pivot_row; ++r) {
            long long p = B.at(pivot_row, col);
            long long f = B.at(r, col) >= 0 ? B.at(r, col) / p
                                            : -((-B.at(r, col) + p - 1) / p);
            if (f != 0)
                for (int c = 0; c < n; ++c)
                    B.at(r, c) = add_checked(B.at(r, c), mul_checked(-f, B.at(pivot_row, c)));
        }
        pivot_cols.push_back(col);
        ++pivot_row;
    }
    IntMat H(pivot_row, n);
    for (int r = 0; r < pivot_row; ++r)
        for (int c = 0; c < n; ++c) H.at(r, c) = B.at(r, c);
    return H.transpose();
}

} // namespace monofix
