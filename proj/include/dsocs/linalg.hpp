#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <initializer_list>
#include <vector>

#include "dsocs/errors.hpp"

namespace dsocs {

using Vec = std::vector<double>;
using VecFn = std::function<Vec(const Vec&)>;

/// Dense row-major matrix. Everything in this library is small (a few
/// rows/columns), so no attempt is made at blocking or views.
class Mat {
public:
    Mat() = default;
    Mat(std::size_t rows, std::size_t cols, double fill = 0.0)
        : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

    static Mat identity(std::size_t n) {
        Mat m(n, n);
        for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
        return m;
    }

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }

    double& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
    double operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

    Vec col(std::size_t j) const {
        Vec c(rows_);
        for (std::size_t i = 0; i < rows_; ++i) c[i] = (*this)(i, j);
        return c;
    }

    Mat transposed() const {
        Mat t(cols_, rows_);
        for (std::size_t i = 0; i < rows_; ++i)
            for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
        return t;
    }

    const std::vector<double>& data() const { return data_; }

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<double> data_;
};

inline double inf_norm(const Vec& v) {
    double m = 0.0;
    for (double x : v) m = std::max(m, std::abs(x));
    return m;
}

inline double inf_norm(const Mat& a) {
    double m = 0.0;
    for (double x : a.data()) m = std::max(m, std::abs(x));
    return m;
}

inline double norm2(const Vec& v) {
    double s = 0.0;
    for (double x : v) s += x * x;
    return std::sqrt(s);
}

inline double dot(const Vec& a, const Vec& b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

inline Vec operator+(Vec a, const Vec& b) {
    for (std::size_t i = 0; i < a.size(); ++i) a[i] += b[i];
    return a;
}

inline Vec operator-(Vec a, const Vec& b) {
    for (std::size_t i = 0; i < a.size(); ++i) a[i] -= b[i];
    return a;
}

inline Vec operator*(double s, Vec a) {
    for (double& x : a) x *= s;
    return a;
}

inline Vec operator-(Vec a) {
    for (double& x : a) x = -x;
    return a;
}

inline Vec matvec(const Mat& a, const Vec& x) {
    Vec y(a.rows(), 0.0);
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j) y[i] += a(i, j) * x[j];
    return y;
}

inline Mat matmul(const Mat& a, const Mat& b) {
    Mat c(a.rows(), b.cols());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t k = 0; k < a.cols(); ++k) {
            const double aik = a(i, k);
            for (std::size_t j = 0; j < b.cols(); ++j) c(i, j) += aik * b(k, j);
        }
    return c;
}

inline bool all_finite(const Vec& v) {
    return std::all_of(v.begin(), v.end(), [](double x) { return std::isfinite(x); });
}

/// Solves A x = b by Gaussian elimination with partial pivoting.
/// Throws SingularMatrixError when a pivot falls below
/// 1e-14 times the largest row norm of A.
inline Vec linear_solve(Mat a, Vec b) {
    const std::size_t n = a.rows();
    if (a.cols() != n || b.size() != n)
        throw DimensionError("linear_solve: need square A and matching b");

    double max_row_norm = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        double r = 0.0;
        for (std::size_t j = 0; j < n; ++j) r += std::abs(a(i, j));
        max_row_norm = std::max(max_row_norm, r);
    }
    const double pivot_floor = 1e-14 * max_row_norm;

    for (std::size_t k = 0; k < n; ++k) {
        std::size_t p = k;
        for (std::size_t i = k + 1; i < n; ++i)
            if (std::abs(a(i, k)) > std::abs(a(p, k))) p = i;
        if (std::abs(a(p, k)) <= pivot_floor)
            throw SingularMatrixError("linear_solve: pivot below 1e-14 * max row norm");
        if (p != k) {
            for (std::size_t j = k; j < n; ++j) std::swap(a(p, j), a(k, j));
            std::swap(b[p], b[k]);
        }
        for (std::size_t i = k + 1; i < n; ++i) {
            const double f = a(i, k) / a(k, k);
            a(i, k) = 0.0;
            for (std::size_t j = k + 1; j < n; ++j) a(i, j) -= f * a(k, j);
            b[i] -= f * b[k];
        }
    }

    Vec x(n);
    for (std::size_t i = n; i-- > 0;) {
        double s = b[i];
        for (std::size_t j = i + 1; j < n; ++j) s -= a(i, j) * x[j];
        x[i] = s / a(i, i);
    }
    return x;
}

/// Central-difference Jacobian of f at x: entry (i,j) =
/// (f_i(x + eps e_j) - f_i(x - eps e_j)) / (2 eps).
inline Mat fd_jacobian(const VecFn& f, const Vec& x, double eps) {
    Vec xp = x, xm = x;
    Mat jac;
    for (std::size_t j = 0; j < x.size(); ++j) {
        xp[j] = x[j] + eps;
        xm[j] = x[j] - eps;
        const Vec fp = f(xp);
        const Vec fm = f(xm);
        if (jac.rows() == 0) jac = Mat(fp.size(), x.size());
        for (std::size_t i = 0; i < fp.size(); ++i) jac(i, j) = (fp[i] - fm[i]) / (2.0 * eps);
        xp[j] = x[j];
        xm[j] = x[j];
    }
    return jac;
}

/// Central-difference gradient of a scalar function.
inline Vec fd_gradient(const std::function<double(const Vec&)>& f, const Vec& x, double eps) {
    Vec g(x.size());
    Vec xp = x, xm = x;
    for (std::size_t j = 0; j < x.size(); ++j) {
        xp[j] = x[j] + eps;
        xm[j] = x[j] - eps;
        g[j] = (f(xp) - f(xm)) / (2.0 * eps);
        xp[j] = x[j];
        xm[j] = x[j];
    }
    return g;
}

/// Eigenvalues/vectors of a symmetric matrix by cyclic Jacobi rotations.
/// Columns of the returned "vectors" matrix are the eigenvectors, sorted
/// by decreasing eigenvalue.
struct SymEigen {
    Vec values;
    Mat vectors;
};

inline SymEigen jacobi_eigen_sym(Mat a) {
    const std::size_t n = a.rows();
    Mat v = Mat::identity(n);
    for (int sweep = 0; sweep < 60; ++sweep) {
        double off = 0.0;
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = i + 1; j < n; ++j) off += a(i, j) * a(i, j);
        if (off < 1e-300) break;
        for (std::size_t p = 0; p < n; ++p)
            for (std::size_t q = p + 1; q < n; ++q) {
                if (a(p, q) == 0.0) continue;
                const double theta = (a(q, q) - a(p, p)) / (2.0 * a(p, q));
                const double t = (theta >= 0 ? 1.0 : -1.0) /
                                 (std::abs(theta) + std::sqrt(theta * theta + 1.0));
                const double c = 1.0 / std::sqrt(t * t + 1.0);
                const double s = t * c;
                for (std::size_t k = 0; k < n; ++k) {
                    const double akp = a(k, p), akq = a(k, q);
                    a(k, p) = c * akp - s * akq;
                    a(k, q) = s * akp + c * akq;
                }
                for (std::size_t k = 0; k < n; ++k) {
                    const double apk = a(p, k), aqk = a(q, k);
                    a(p, k) = c * apk - s * aqk;
                    a(q, k) = s * apk + c * aqk;
                }
                for (std::size_t k = 0; k < n; ++k) {
                    const double vkp = v(k, p), vkq = v(k, q);
                    v(k, p) = c * vkp - s * vkq;
                    v(k, q) = s * vkp + c * vkq;
                }
            }
    }
    SymEigen out;
    out.values.resize(n);
    for (std::size_t i = 0; i < n; ++i) out.values[i] = a(i, i);
    std::vector<std::size_t> order(n);
    for (std::size_t i = 0; i < n; ++i) order[i] = i;
    std::sort(order.begin(), order.end(),
              [&](std::size_t i, std::size_t j) { return out.values[i] > out.values[j]; });
    SymEigen sorted;
    sorted.values.resize(n);
    sorted.vectors = Mat(n, n);
    for (std::size_t j = 0; j < n; ++j) {
        sorted.values[j] = out.values[order[j]];
        for (std::size_t i = 0; i < n; ++i) sorted.vectors(i, j) = v(i, order[j]);
    }
    return sorted;
}

/// Singular values of a (possibly rectangular) matrix, descending, via the
/// eigenvalues of A^T A or A A^T, whichever is smaller.
inline Vec singular_values(const Mat& a) {
    const bool tall = a.rows() >= a.cols();
    const Mat g = tall ? matmul(a.transposed(), a) : matmul(a, a.transposed());
    SymEigen e = jacobi_eigen_sym(g);
    Vec s(e.values.size());
    for (std::size_t i = 0; i < s.size(); ++i) s[i] = std::sqrt(std::max(0.0, e.values[i]));
    return s;
}

/// Orthonormal basis (columns) of the null space of A, using the relative
/// singular-value threshold rel_tol * sigma_max.
inline Mat null_space_basis(const Mat& a, double rel_tol = 1e-9) {
    const std::size_t n = a.cols();
    const Mat g = matmul(a.transposed(), a);
    SymEigen e = jacobi_eigen_sym(g);
    const double sigma_max = std::sqrt(std::max(0.0, e.values.empty() ? 0.0 : e.values[0]));
    const double thresh = rel_tol * sigma_max;
    std::vector<std::size_t> keep;
    for (std::size_t j = 0; j < n; ++j) {
        const double sigma = std::sqrt(std::max(0.0, e.values[j]));
        if (sigma <= thresh) keep.push_back(j);
    }
    Mat basis(n, keep.size());
    for (std::size_t k = 0; k < keep.size(); ++k)
        for (std::size_t i = 0; i < n; ++i) basis(i, k) = e.vectors(i, keep[k]);
    return basis;
}

} // namespace dsocs
