// SPDX-License-Identifier: Apache-2.0
//
// csitl - Monte Carlo link-level simulator for CSIT-limited multi-antenna systems
// Copyright (C) 2026 The csitl Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#ifndef CSITL_LINALG_HPP
#define CSITL_LINALG_HPP

#include <Eigen/Dense>

#include <complex>
#include <stdexcept>
#include <string>

namespace csitl
{

using cd = std::complex<double>;
using CVector = Eigen::VectorXcd;
using CMatrix = Eigen::MatrixXcd;

inline bool is_hermitian(const CMatrix &a, double tol)
{
    if (a.rows() != a.cols())
        return false;
    return (a - a.adjoint()).cwiseAbs().maxCoeff() <= tol;
}

inline double min_eigenvalue(const CMatrix &a)
{
    Eigen::SelfAdjointEigenSolver<CMatrix> es(a, Eigen::EigenvaluesOnly);
    return es.eigenvalues()(0);
}

inline double max_eigenvalue(const CMatrix &a)
{
    Eigen::SelfAdjointEigenSolver<CMatrix> es(a, Eigen::EigenvaluesOnly);
    return es.eigenvalues()(a.rows() - 1);
}

/**
 * Hermitian PSD square root via eigendecomposition. Eigenvalues in
 * [-clip_tol, 0) are clipped to zero; anything more negative throws.
 */
inline CMatrix hermitian_sqrt(const CMatrix &a, double clip_tol = 1e-9)
{
    Eigen::SelfAdjointEigenSolver<CMatrix> es(a);
    if (es.info() != Eigen::Success)
        throw std::runtime_error("hermitian_sqrt: eigendecomposition failed");
    Eigen::VectorXd ev = es.eigenvalues();
    for (Eigen::Index i = 0; i < ev.size(); ++i)
    {
        if (ev(i) < -clip_tol)
            throw std::domain_error("hermitian_sqrt: matrix is not PSD (eigenvalue " + std::to_string(ev(i)) + ")");
        ev(i) = ev(i) > 0.0 ? std::sqrt(ev(i)) : 0.0;
    }
    const CMatrix &v = es.eigenvectors();
    return v * ev.cast<cd>().asDiagonal() * v.adjoint();
}

/// Unit-norm eigenvector of the largest eigenvalue of a Hermitian matrix.
inline CVector dominant_eigenvector(const CMatrix &a)
{
    Eigen::SelfAdjointEigenSolver<CMatrix> es(a);
    return es.eigenvectors().col(a.rows() - 1);
}

/**
 * Principal generalized eigenvector of the pencil (a, b) with b Hermitian
 * positive definite: maximizes x^H a x / x^H b x. Returned with unit norm.
 */
inline CVector principal_generalized_eigenvector(const CMatrix &a, const CMatrix &b)
{
    Eigen::LLT<CMatrix> llt(b);
    if (llt.info() != Eigen::Success)
        throw std::domain_error("principal_generalized_eigenvector: b is not positive definite");
    // L^-1 a L^-H
    const CMatrix l_inv = llt.matrixL().solve(CMatrix::Identity(b.rows(), b.cols()));
    CMatrix c = l_inv * a * l_inv.adjoint();
    c = 0.5 * (c + c.adjoint()).eval();
    const CVector y = dominant_eigenvector(c);
    CVector x = llt.matrixU().solve(y);
    return x / x.norm();
}

} // namespace csitl

#endif // CSITL_LINALG_HPP
