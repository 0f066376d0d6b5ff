#pragma once

#include "toda/matrix.hpp"

#include <algorithm>
#include <optional>
#include <string>
#include <vector>

namespace toda {

// ---------------------------------------------------------------------------
// Field elimination (Q or F_p)
// ---------------------------------------------------------------------------

// In-place reduced row echelon form. Returns pivot columns.
inline std::vector<int> rref(const Ring& R, Mat& M) {
    assert(R.is_field());
    std::vector<int> pivots;
    int r = 0;
    for (int c = 0; c < M.cols && r < M.rows; ++c) {
        int p = -1;
        for (int i = r; i < M.rows; ++i)
            if (M(i, c) != 0) { p = i; break; }
        if (p < 0) continue;
        if (p != r)
            for (int j = 0; j < M.cols; ++j) std::swap(M(p, j), M(r, j));
        Rat inv = R.inv(M(r, c));
        for (int j = c; j < M.cols; ++j) M(r, j) = R.mul(inv, M(r, j));
        for (int i = 0; i < M.rows; ++i) {
            if (i == r || M(i, c) == 0) continue;
            Rat f = M(i, c);
            for (int j = c; j < M.cols; ++j) M(i, j) = R.sub(M(i, j), R.mul(f, M(r, j)));
        }
        pivots.push_back(c);
        ++r;
    }
    return pivots;
}

inline int rank(const Ring& R, Mat M) {
    if (R.is_field()) return (int)rref(R, M).size();
    // Over Z the rank equals the rational rank.
    Ring Q = Ring::rationals();
    return (int)rref(Q, M).size();
}

// Solve A X = B over a field. Returns std::nullopt if inconsistent.
inline std::optional<Mat> field_solve(const Ring& R, const Mat& A, const Mat& B) {
    assert(A.rows == B.rows);
    Mat M = hstack(A, B);
    auto piv = rref(R, M);
    for (int c : piv)
        if (c >= A.cols) return std::nullopt;
    Mat X(A.cols, B.cols);
    for (size_t r = 0; r < piv.size(); ++r)
        for (int j = 0; j < B.cols; ++j) X(piv[r], j) = M((int)r, A.cols + j);
    return X;
}

// Basis of the kernel of A over a field, as matrix columns.
inline Mat field_nullspace(const Ring& R, Mat A) {
    auto piv = rref(R, A);
    std::vector<char> is_piv(A.cols, 0);
    for (int c : piv) is_piv[c] = 1;
    std::vector<int> free_cols;
    for (int c = 0; c < A.cols; ++c)
        if (!is_piv[c]) free_cols.push_back(c);
    Mat K(A.cols, (int)free_cols.size());
    for (size_t f = 0; f < free_cols.size(); ++f) {
        int fc = free_cols[f];
        K(fc, (int)f) = 1;
        for (size_t r = 0; r < piv.size(); ++r) K(piv[r], (int)f) = R.neg(A((int)r, fc));
    }
    return K;
}

// ---------------------------------------------------------------------------
// Smith normal form over Z
// ---------------------------------------------------------------------------

struct SmithDecomposition {
    Mat U, D, V;  // U*M*V = D, U and V unimodular, D diagonal with d1 | d2 | ...

    std::vector<Int> diagonal() const {
        std::vector<Int> d;
        int n = std::min(D.rows, D.cols);
        for (int i = 0; i < n; ++i) d.push_back(D(i, i).get_num());
        return d;
    }
    int rank() const {
        int r = 0;
        for (auto& d : diagonal())
            if (d != 0) ++r;
        return r;
    }
};

namespace detail {

inline void swap_rows(Mat& M, int i, int j) {
    for (int c = 0; c < M.cols; ++c) std::swap(M(i, c), M(j, c));
}
inline void swap_cols(Mat& M, int i, int j) {
    for (int r = 0; r < M.rows; ++r) std::swap(M(r, i), M(r, j));
}
// row_i += q * row_j
inline void add_row(Mat& M, int i, int j, const Rat& q) {
    for (int c = 0; c < M.cols; ++c) M(i, c) += q * M(j, c);
}
inline void add_col(Mat& M, int i, int j, const Rat& q) {
    for (int r = 0; r < M.rows; ++r) M(r, i) += q * M(r, j);
}

}  // namespace detail

inline SmithDecomposition smith_normal_form(const Mat& M0) {
    using namespace detail;
    Mat M = M0;
    for (auto& x : M.a)
        if (x.get_den() != 1) throw std::invalid_argument("smith_normal_form: non-integer entry");
    Mat U = Mat::identity(M.rows), V = Mat::identity(M.cols);
    int n = std::min(M.rows, M.cols);
    for (int t = 0; t < n; ++t) {
        // locate a minimal nonzero entry in the trailing submatrix
        auto find_pivot = [&]() -> std::pair<int, int> {
            int bi = -1, bj = -1;
            for (int i = t; i < M.rows; ++i)
                for (int j = t; j < M.cols; ++j)
                    if (M(i, j) != 0 &&
                        (bi < 0 || abs(M(i, j).get_num()) < abs(M(bi, bj).get_num()))) {
                        bi = i;
                        bj = j;
                    }
            return {bi, bj};
        };
        bool done = false;
        while (!done) {
            auto [bi, bj] = find_pivot();
            if (bi < 0) { done = true; break; }  // trailing block is zero
            if (bi != t) { swap_rows(M, t, bi); swap_rows(U, t, bi); }
            if (bj != t) { swap_cols(M, t, bj); swap_cols(V, t, bj); }
            bool clean = true;
            for (int i = t + 1; i < M.rows; ++i) {
                if (M(i, t) == 0) continue;
                Int q;
                mpz_tdiv_q(q.get_mpz_t(), M(i, t).get_num().get_mpz_t(),
                           M(t, t).get_num().get_mpz_t());
                add_row(M, i, t, Rat(-q));
                add_row(U, i, t, Rat(-q));
                if (M(i, t) != 0) clean = false;
            }
            for (int j = t + 1; j < M.cols; ++j) {
                if (M(t, j) == 0) continue;
                Int q;
                mpz_tdiv_q(q.get_mpz_t(), M(t, j).get_num().get_mpz_t(),
                           M(t, t).get_num().get_mpz_t());
                add_col(M, j, t, Rat(-q));
                add_col(V, j, t, Rat(-q));
                if (M(t, j) != 0) clean = false;
            }
            if (!clean) continue;  // smaller remainders appeared; repeat
            // pivot must divide the rest of the submatrix for the divisor chain
            bool divides = true;
            for (int i = t + 1; i < M.rows && divides; ++i)
                for (int j = t + 1; j < M.cols && divides; ++j)
                    if (M(i, j) != 0 &&
                        !mpz_divisible_p(M(i, j).get_num().get_mpz_t(),
                                         M(t, t).get_num().get_mpz_t())) {
                        add_row(M, t, i, Rat(1));
                        add_row(U, t, i, Rat(1));
                        divides = false;
                    }
            if (divides) done = true;
        }
        if (M(t, t) < 0) {
            for (int c = 0; c < M.cols; ++c) M(t, c) = -M(t, c);
            for (int c = 0; c < U.cols; ++c) U(t, c) = -U(t, c);
        }
    }
    return {U, M, V};
}

// Basis of the integer kernel of M, a saturated sublattice, as matrix columns.
inline Mat zkernel(const Mat& M) {
    auto s = smith_normal_form(M);
    int n = std::min(s.D.rows, s.D.cols);
    std::vector<int> free_cols;
    for (int j = 0; j < M.cols; ++j)
        if (j >= n || s.D(j, j) == 0) free_cols.push_back(j);
    Mat K(M.cols, (int)free_cols.size());
    for (size_t f = 0; f < free_cols.size(); ++f)
        for (int i = 0; i < M.cols; ++i) K(i, (int)f) = s.V(i, free_cols[f]);
    return K;
}

// Solve A X = B over the integers. Returns std::nullopt if no integral solution.
inline std::optional<Mat> zsolve(const Mat& A, const Mat& B) {
    assert(A.rows == B.rows);
    auto s = smith_normal_form(A);
    Ring Z = Ring::integers();
    Mat Y = mul(Z, s.U, B);
    Mat Xp(A.cols, B.cols);
    int n = std::min(A.rows, A.cols);
    for (int i = 0; i < A.rows; ++i) {
        Int d = (i < n) ? s.D(i, i).get_num() : Int(0);
        for (int j = 0; j < B.cols; ++j) {
            if (d == 0) {
                if (Y(i, j) != 0) return std::nullopt;
            } else {
                if (!mpz_divisible_p(Y(i, j).get_num().get_mpz_t(), d.get_mpz_t()))
                    return std::nullopt;
                Xp(i, j) = Y(i, j) / Rat(d);
            }
        }
    }
    return mul(Z, s.V, Xp);
}

// Ring-dispatched solve / kernel.
inline std::optional<Mat> solve_linear(const Ring& R, const Mat& A, const Mat& B) {
    return R.is_field() ? field_solve(R, A, B) : zsolve(A, B);
}
inline Mat kernel(const Ring& R, const Mat& A) {
    return R.is_field() ? field_nullspace(R, A) : zkernel(A);
}

// ---------------------------------------------------------------------------
// Finitely presented quotients  R^n / colspan(Rel)
// ---------------------------------------------------------------------------

// Presentation of a quotient of R^n by a column span. Provides a canonical
// form for coset representatives, so equality in the quotient is literal
// vector equality of canonical coordinates.
struct GroupPres {
    Ring ring;
    int n = 0;
    Mat rel;                  // the relation columns (kept for membership tests)
    int free_rank = 0;
    std::vector<Int> torsion;  // invariant factors > 1 (Z case only)

    // Z case: y = U x; torsion coords are y_i mod d_i, free coords are trailing y_i.
    Mat U;
    std::vector<int> tor_idx, free_idx;
    // field case: rref'd relation rows and their pivot columns.
    Mat rrows;
    std::vector<int> pivots;

    static GroupPres quotient(const Ring& R, int n, const Mat& rel_cols) {
        GroupPres P;
        P.ring = R;
        P.n = n;
        P.rel = rel_cols;
        assert(rel_cols.rows == n || rel_cols.cols == 0);
        if (P.rel.rows != n) P.rel = Mat::zero(n, 0);
        if (R.is_field()) {
            Mat rows = P.rel.transpose();
            P.pivots = rref(R, rows);
            P.rrows = rows;
            P.free_rank = n - (int)P.pivots.size();
        } else {
            auto s = smith_normal_form(P.rel);
            P.U = s.U;
            int m = std::min(s.D.rows, s.D.cols);
            for (int i = 0; i < n; ++i) {
                Int d = (i < m) ? s.D(i, i).get_num() : Int(0);
                if (d == 0) {
                    P.free_idx.push_back(i);
                } else if (d != 1) {
                    P.tor_idx.push_back(i);
                    P.torsion.push_back(d);
                }
            }
            P.free_rank = (int)P.free_idx.size();
        }
        return P;
    }

    int canon_len() const { return (int)torsion.size() + free_rank; }

    // Canonical coordinates of the class of x.
    std::vector<Rat> canon(const std::vector<Rat>& x) const {
        assert((int)x.size() == n);
        std::vector<Rat> out;
        if (ring.is_field()) {
            std::vector<Rat> v = x;
            std::vector<char> is_piv(n, 0);
            for (size_t r = 0; r < pivots.size(); ++r) {
                int p = pivots[r];
                is_piv[p] = 1;
                if (v[p] != 0) {
                    Rat f = v[p];
                    for (int j = 0; j < n; ++j) v[j] = ring.sub(v[j], ring.mul(f, rrows((int)r, j)));
                }
            }
            for (int j = 0; j < n; ++j)
                if (!is_piv[j]) out.push_back(v[j]);
        } else {
            std::vector<Rat> y = apply(ring, U, x);
            for (size_t k = 0; k < tor_idx.size(); ++k) {
                Int v = y[tor_idx[k]].get_num() % torsion[k];
                if (v < 0) v += torsion[k];
                out.push_back(Rat(v));
            }
            for (int i : free_idx) out.push_back(y[i]);
        }
        return out;
    }

    bool is_zero_class(const std::vector<Rat>& x) const {
        for (auto& c : canon(x))
            if (c != 0) return false;
        return true;
    }

    // Is x in the subgroup of the quotient generated by the columns of G
    // (G given in ambient coordinates)?
    bool in_subgroup(const Mat& G, const std::vector<Rat>& x) const {
        Mat A = hstack(G, rel);
        Mat b(n, 1);
        for (int i = 0; i < n; ++i) b(i, 0) = x[i];
        return solve_linear(ring, A, b).has_value();
    }

    std::string describe() const {
        std::string s;
        auto app = [&](const std::string& part) {
            if (!s.empty()) s += " + ";
            s += part;
        };
        if (free_rank > 0)
            app(ring.name() + (free_rank > 1 ? "^" + std::to_string(free_rank) : ""));
        for (auto& d : torsion) app("Z/" + d.get_str());
        if (s.empty()) s = "0";
        return s;
    }
};

}  // namespace toda
