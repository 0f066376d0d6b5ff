#pragma once

#include "toda/ring.hpp"

#include <cassert>
#include <initializer_list>
#include <ostream>
#include <vector>

namespace toda {

// Dense matrix with exact rational entries, row-major.
struct Mat {
    int rows = 0, cols = 0;
    std::vector<Rat> a;

    Mat() = default;
    Mat(int r, int c) : rows(r), cols(c), a((size_t)r * c, Rat(0)) {}

    static Mat identity(int n) {
        Mat m(n, n);
        for (int i = 0; i < n; ++i) m(i, i) = 1;
        return m;
    }
    static Mat zero(int r, int c) { return Mat(r, c); }

    static Mat from_rows(std::initializer_list<std::initializer_list<long>> rr) {
        Mat m((int)rr.size(), rr.size() ? (int)rr.begin()->size() : 0);
        int i = 0;
        for (auto& row : rr) {
            int j = 0;
            for (long v : row) m(i, j++) = v;
            ++i;
        }
        return m;
    }

    Rat& operator()(int i, int j) {
        assert(i >= 0 && i < rows && j >= 0 && j < cols);
        return a[(size_t)i * cols + j];
    }
    const Rat& operator()(int i, int j) const {
        assert(i >= 0 && i < rows && j >= 0 && j < cols);
        return a[(size_t)i * cols + j];
    }

    bool is_zero() const {
        for (auto& x : a)
            if (x != 0) return false;
        return true;
    }

    bool operator==(const Mat& o) const { return rows == o.rows && cols == o.cols && a == o.a; }
    bool operator!=(const Mat& o) const { return !(*this == o); }

    Mat transpose() const {
        Mat t(cols, rows);
        for (int i = 0; i < rows; ++i)
            for (int j = 0; j < cols; ++j) t(j, i) = (*this)(i, j);
        return t;
    }

    std::vector<Rat> col(int j) const {
        std::vector<Rat> v((size_t)rows);
        for (int i = 0; i < rows; ++i) v[i] = (*this)(i, j);
        return v;
    }

    void set_col(int j, const std::vector<Rat>& v) {
        assert((int)v.size() == rows);
        for (int i = 0; i < rows; ++i) (*this)(i, j) = v[i];
    }
};

inline Mat mul(const Ring& R, const Mat& A, const Mat& B) {
    assert(A.cols == B.rows);
    Mat C(A.rows, B.cols);
    for (int i = 0; i < A.rows; ++i)
        for (int k = 0; k < A.cols; ++k) {
            const Rat& x = A(i, k);
            if (x == 0) continue;
            for (int j = 0; j < B.cols; ++j)
                if (B(k, j) != 0) C(i, j) += x * B(k, j);
        }
    for (auto& x : C.a) x = R.canon(x);
    return C;
}

inline Mat add(const Ring& R, const Mat& A, const Mat& B) {
    assert(A.rows == B.rows && A.cols == B.cols);
    Mat C(A.rows, A.cols);
    for (size_t i = 0; i < C.a.size(); ++i) C.a[i] = R.add(A.a[i], B.a[i]);
    return C;
}

inline Mat sub(const Ring& R, const Mat& A, const Mat& B) {
    assert(A.rows == B.rows && A.cols == B.cols);
    Mat C(A.rows, A.cols);
    for (size_t i = 0; i < C.a.size(); ++i) C.a[i] = R.sub(A.a[i], B.a[i]);
    return C;
}

inline Mat scale(const Ring& R, const Rat& c, const Mat& A) {
    Mat C(A.rows, A.cols);
    for (size_t i = 0; i < C.a.size(); ++i) C.a[i] = R.mul(c, A.a[i]);
    return C;
}

inline Mat neg(const Ring& R, const Mat& A) { return scale(R, Rat(-1), A); }

inline std::vector<Rat> apply(const Ring& R, const Mat& A, const std::vector<Rat>& v) {
    assert((int)v.size() == A.cols);
    std::vector<Rat> w((size_t)A.rows, Rat(0));
    for (int i = 0; i < A.rows; ++i) {
        Rat s = 0;
        for (int j = 0; j < A.cols; ++j)
            if (A(i, j) != 0 && v[j] != 0) s += A(i, j) * v[j];
        w[i] = R.canon(s);
    }
    return w;
}

// [A | B] side by side.
inline Mat hstack(const Mat& A, const Mat& B) {
    assert(A.rows == B.rows);
    Mat C(A.rows, A.cols + B.cols);
    for (int i = 0; i < A.rows; ++i) {
        for (int j = 0; j < A.cols; ++j) C(i, j) = A(i, j);
        for (int j = 0; j < B.cols; ++j) C(i, A.cols + j) = B(i, j);
    }
    return C;
}

inline Mat vstack(const Mat& A, const Mat& B) {
    assert(A.cols == B.cols);
    Mat C(A.rows + B.rows, A.cols);
    for (int i = 0; i < A.rows; ++i)
        for (int j = 0; j < A.cols; ++j) C(i, j) = A(i, j);
    for (int i = 0; i < B.rows; ++i)
        for (int j = 0; j < A.cols; ++j) C(A.rows + i, j) = B(i, j);
    return C;
}

inline std::ostream& operator<<(std::ostream& os, const Mat& m) {
    os << "[";
    for (int i = 0; i < m.rows; ++i) {
        if (i) os << "; ";
        for (int j = 0; j < m.cols; ++j) {
            if (j) os << ", ";
            os << m(i, j).get_str();
        }
    }
    return os << "]";
}

}  // namespace toda
