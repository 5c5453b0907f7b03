#pragma once
// Small dense linear algebra over the multiprecision scalars: row-major
// matrices with the handful of operations the project needs (partial-pivot LU
// solves for the bimoment systems, 3x3 spectra via Cardano, rank probes for
// the string-equation matrices).  Deliberately minimal; no expression graphs.

#include <array>
#include <stdexcept>
#include <vector>

#include "scalar.hpp"

namespace pearceylab::numerics {

template <class T>
struct Matrix {
    long rows = 0, cols = 0;
    std::vector<T> a;

    Matrix() = default;
    Matrix(long r, long c) : rows(r), cols(c), a(static_cast<size_t>(r * c)) {}

    T& operator()(long i, long j) { return a[static_cast<size_t>(i * cols + j)]; }
    const T& operator()(long i, long j) const { return a[static_cast<size_t>(i * cols + j)]; }

    static Matrix identity(long n) {
        Matrix m(n, n);
        for (long i = 0; i < n; ++i) m(i, i) = T(1);
        return m;
    }

    Matrix& operator+=(const Matrix& o) {
        for (size_t k = 0; k < a.size(); ++k) a[k] += o.a[k];
        return *this;
    }
    Matrix& operator-=(const Matrix& o) {
        for (size_t k = 0; k < a.size(); ++k) a[k] -= o.a[k];
        return *this;
    }
    Matrix& operator*=(const T& s) {
        for (auto& x : a) x *= s;
        return *this;
    }

    friend Matrix operator+(Matrix l, const Matrix& r) { return l += r; }
    friend Matrix operator-(Matrix l, const Matrix& r) { return l -= r; }
    friend Matrix operator*(Matrix l, const T& s) { return l *= s; }
    friend Matrix operator*(const T& s, Matrix r) { return r *= s; }

    friend Matrix operator*(const Matrix& l, const Matrix& r) {
        Matrix m(l.rows, r.cols);
        for (long i = 0; i < l.rows; ++i)
            for (long k = 0; k < l.cols; ++k) {
                const T& lik = l(i, k);
                for (long j = 0; j < r.cols; ++j) m(i, j) += lik * r(k, j);
            }
        return m;
    }
};

template <class T>
Real max_abs(const Matrix<T>& m) {
    Real mx(0);
    for (const auto& x : m.a) mx = (std::max)(mx, Real(abs(x)));
    return mx;
}

template <class T>
Matrix<T> commutator(const Matrix<T>& a, const Matrix<T>& b) {
    return a * b - b * a;
}

// Solves A X = B by Gaussian elimination with partial pivoting.  A is copied;
// the determinant rides along for free.  ok=false on a numerically singular
// pivot (magnitude zero at working precision).
template <class T>
struct LinearSolve {
    Matrix<T> x;
    T det{};
    bool ok = false;
};

template <class T>
LinearSolve<T> lu_solve(Matrix<T> A, Matrix<T> B) {
    LinearSolve<T> out;
    const long n = A.rows;
    if (A.cols != n || B.rows != n) throw std::invalid_argument("lu_solve: shape");
    out.det = T(1);
    for (long col = 0; col < n; ++col) {
        long piv = col;
        Real best = abs(A(col, col));
        for (long i = col + 1; i < n; ++i) {
            Real m = abs(A(i, col));
            if (m > best) { best = m; piv = i; }
        }
        if (best == 0) { out.det = T(0); return out; }
        if (piv != col) {
            for (long j = col; j < n; ++j) std::swap(A(col, j), A(piv, j));
            for (long j = 0; j < B.cols; ++j) std::swap(B(col, j), B(piv, j));
            out.det = -out.det;
        }
        out.det *= A(col, col);
        for (long i = col + 1; i < n; ++i) {
            const T f = A(i, col) / A(col, col);
            for (long j = col + 1; j < n; ++j) A(i, j) -= f * A(col, j);
            for (long j = 0; j < B.cols; ++j) B(i, j) -= f * B(col, j);
        }
    }
    out.x = Matrix<T>(n, B.cols);
    for (long i = n - 1; i >= 0; --i)
        for (long j = 0; j < B.cols; ++j) {
            T s = B(i, j);
            for (long k = i + 1; k < n; ++k) s -= A(i, k) * out.x(k, j);
            out.x(i, j) = s / A(i, i);
        }
    out.ok = true;
    return out;
}

// Roots of z^3 + a2 z^2 + a1 z + a0 = 0 by Cardano in complex arithmetic.
inline std::array<Complex, 3> cubic_roots(const Complex& a2, const Complex& a1,
                                          const Complex& a0) {
    const Complex shift = a2 / 3;
    const Complex p = a1 - a2 * a2 / 3;
    const Complex q = a0 - a1 * a2 / 3 + 2 * a2 * a2 * a2 / 27;
    const Complex disc = sqrt(q * q / 4 + p * p * p / 27);
    Complex u = -q / 2 + disc;
    if (abs(u) < abs(-q / 2 - disc)) u = -q / 2 - disc;  // larger branch for stability
    std::array<Complex, 3> roots;
    if (abs(u) == 0) {
        roots.fill(-shift);  // triple root
        return roots;
    }
    const Complex cr = pow(u, Real(1) / 3);
    const Real half = Real(1) / 2;
    const Complex omega(-half, sqrt(Real(3)) / 2);
    Complex w(1, 0);
    for (int k = 0; k < 3; ++k) {
        const Complex uk = cr * w;
        roots[static_cast<size_t>(k)] = uk - p / (3 * uk) - shift;
        w *= omega;
    }
    return roots;
}

// Eigenvalues of a 3x3 complex matrix through its characteristic polynomial.
inline std::array<Complex, 3> eigenvalues_3x3(const Matrix<Complex>& m) {
    const Complex tr = m(0, 0) + m(1, 1) + m(2, 2);
    const Matrix<Complex> m2 = m * m;
    const Complex tr2 = m2(0, 0) + m2(1, 1) + m2(2, 2);
    Complex det = m(0, 0) * (m(1, 1) * m(2, 2) - m(1, 2) * m(2, 1)) -
                  m(0, 1) * (m(1, 0) * m(2, 2) - m(1, 2) * m(2, 0)) +
                  m(0, 2) * (m(1, 0) * m(2, 1) - m(1, 1) * m(2, 0));
    return cubic_roots(-tr, (tr * tr - tr2) / 2, -det);
}

// Pivot count of row elimination at a relative threshold: pivots below
// rel_tol times the largest entry of the input count as zero.
template <class T>
long numerical_rank(Matrix<T> m, const Real& rel_tol) {
    const Real scale = max_abs(m);
    if (scale == 0) return 0;
    const Real thresh = rel_tol * scale;
    long rank = 0;
    for (long col = 0; col < m.cols && rank < m.rows; ++col) {
        long piv = -1;
        Real best = thresh;
        for (long i = rank; i < m.rows; ++i) {
            const Real a = abs(m(i, col));
            if (a > best) { best = a; piv = i; }
        }
        if (piv < 0) continue;
        if (piv != rank)
            for (long j = 0; j < m.cols; ++j) std::swap(m(rank, j), m(piv, j));
        for (long i = rank + 1; i < m.rows; ++i) {
            const T f = m(i, col) / m(rank, col);
            for (long j = col; j < m.cols; ++j) m(i, j) -= f * m(rank, j);
        }
        ++rank;
    }
    return rank;
}

// Largest 2x2 minor relative to the squared entry scale: ~0 iff rank <= 1.
template <class T>
Real rank_one_defect(const Matrix<T>& m) {
    const Real scale = max_abs(m);
    if (scale == 0) return Real(0);
    Real worst(0);
    for (long i = 0; i < m.rows; ++i)
        for (long k = i + 1; k < m.rows; ++k)
            for (long j = 0; j < m.cols; ++j)
                for (long l = j + 1; l < m.cols; ++l) {
                    Real minor = abs(m(i, j) * m(k, l) - m(i, l) * m(k, j));
                    worst = (std::max)(worst, minor);
                }
    return worst / (scale * scale);
}

}  // namespace pearceylab::numerics
