#pragma once

// Dense complex matrix helpers shared by the verification modules.

#include <algorithm>
#include <functional>
#include <initializer_list>
#include <span>
#include <vector>

#include <Eigen/Dense>
#include <unsupported/Eigen/KroneckerProduct>

#include "qosc/qcore.hpp"

namespace qosc {

using Matrix = Eigen::MatrixXcd;

inline double max_abs(const Matrix& m)
{
    return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff();
}

inline bool is_diagonal(const Matrix& m, double tol = 0.0)
{
    if (m.rows() != m.cols()) return false;
    for (Eigen::Index i = 0; i < m.rows(); ++i)
        for (Eigen::Index j = 0; j < m.cols(); ++j)
            if (i != j && std::abs(m(i, j)) > tol) return false;
    return true;
}

/// Applies f entrywise to the diagonal of a diagonal matrix. Non-diagonal input is
/// rejected: functions of N are only ever needed on diagonal images.
inline Matrix diag_apply(const Matrix& m, const std::function<cplx(cplx)>& f)
{
    if (!is_diagonal(m)) throw Error("diag_apply: matrix is not diagonal");
    Matrix out = Matrix::Zero(m.rows(), m.cols());
    for (Eigen::Index i = 0; i < m.rows(); ++i) out(i, i) = f(m(i, i));
    return out;
}

inline Matrix diag_of(std::span<const cplx> values)
{
    const auto n = static_cast<Eigen::Index>(values.size());
    Matrix out = Matrix::Zero(n, n);
    for (Eigen::Index i = 0; i < n; ++i) out(i, i) = values[static_cast<std::size_t>(i)];
    return out;
}

inline Matrix identity(Eigen::Index d) { return Matrix::Identity(d, d); }

inline Matrix kron(const Matrix& left, const Matrix& right)
{
    return Eigen::kroneckerProduct(left, right).eval();
}

inline Matrix commutator(const Matrix& x, const Matrix& y) { return x * y - y * x; }

/// Permutation P on C^d (x) C^d with P (u (x) v) = v (x) u.
inline Matrix swap_operator(Eigen::Index d)
{
    Matrix p = Matrix::Zero(d * d, d * d);
    for (Eigen::Index i = 0; i < d; ++i)
        for (Eigen::Index j = 0; j < d; ++j) p(j * d + i, i * d + j) = 1.0;
    return p;
}

/// Adjoint with respect to the hermitian form diag(signature): G^{-1} M^dagger G.
/// An empty signature means the identity form.
inline Matrix metric_adjoint(const Matrix& m, std::span<const int> signature = {})
{
    Matrix adj = m.adjoint();
    if (signature.empty()) return adj;
    for (Eigen::Index i = 0; i < adj.rows(); ++i)
        for (Eigen::Index j = 0; j < adj.cols(); ++j)
            adj(i, j) *= double(signature[std::size_t(i)] * signature[std::size_t(j)]);
    return adj;
}

/// Tensor-product signature for the form G (x) G.
inline std::vector<int> kron_signature(std::span<const int> a, std::span<const int> b)
{
    if (a.empty() && b.empty()) return {};
    std::vector<int> out;
    out.reserve(a.size() * b.size());
    for (int x : a)
        for (int y : b) out.push_back(x * y);
    return out;
}

/// max|defect| / max(1, product of operand max-norms).
inline double relative_residual(const Matrix& defect, std::initializer_list<double> operand_norms)
{
    double scale = 1.0;
    for (double n : operand_norms) scale *= n;
    return max_abs(defect) / std::max(1.0, scale);
}

} // namespace qosc
