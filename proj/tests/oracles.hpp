#pragma once

// Independent reference implementations used only by the tests. The Lindblad
// oracle exponentiates the full superoperator; the entropy oracle builds the
// reduced density matrix by brute force from an explicit outer product.

#include <Eigen/Dense>
#include <unsupported/Eigen/MatrixFunctions>
#include <vector>

#include "boseq/density.hpp"
#include "boseq/dynamics.hpp"

namespace oracles {

inline Eigen::MatrixXcd kron(const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b) {
    Eigen::MatrixXcd out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index i = 0; i < a.rows(); ++i)
        for (Eigen::Index j = 0; j < a.cols(); ++j)
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    return out;
}

/// vec(rho) convention: column-stacking, vec(A rho B) = (B^T kron A) vec(rho).
inline Eigen::MatrixXcd lindblad_superoperator(const boseq::LindbladSpec& spec,
                                               Eigen::Index dim) {
    const Eigen::MatrixXcd id = Eigen::MatrixXcd::Identity(dim, dim);
    Eigen::MatrixXcd sop = Eigen::MatrixXcd::Zero(dim * dim, dim * dim);
    if (spec.hamiltonian) {
        const Eigen::MatrixXcd& h = spec.hamiltonian->matrix();
        sop += -boseq::cplx(0.0, 1.0) * (kron(id, h) - kron(h.transpose(), id));
    }
    for (const boseq::Operator& op : spec.couplings) {
        const Eigen::MatrixXcd& a = op.matrix();
        const Eigen::MatrixXcd ad = kron(id, a) - kron(a.transpose(), id);
        sop -= spec.gamma * ad * ad;  // -Gamma [A,[A,rho]] in vec form
    }
    return sop;
}

inline boseq::DensityMatrix evolve_exact(const boseq::DensityMatrix& rho,
                                         const boseq::LindbladSpec& spec, double t) {
    const Eigen::Index dim = rho.dim();
    const Eigen::MatrixXcd sop = lindblad_superoperator(spec, dim);
    Eigen::VectorXcd v(dim * dim);
    for (Eigen::Index j = 0; j < dim; ++j)
        for (Eigen::Index i = 0; i < dim; ++i) v[j * dim + i] = rho.mat(i, j);
    const Eigen::MatrixXcd prop = (t * sop).exp();
    const Eigen::VectorXcd w = prop * v;
    boseq::DensityMatrix out;
    out.mat.resize(dim, dim);
    for (Eigen::Index j = 0; j < dim; ++j)
        for (Eigen::Index i = 0; i < dim; ++i) out.mat(i, j) = w[j * dim + i];
    return out;
}

/// Site-1 entropy of a two-site pure state, via the explicit outer product.
inline double entropy_brute_force(const boseq::RegisterState& state) {
    const Eigen::Index d = state.site_dim();
    Eigen::MatrixXcd psi(d, d);
    for (Eigen::Index k1 = 0; k1 < d; ++k1)
        for (Eigen::Index k2 = 0; k2 < d; ++k2) psi(k1, k2) = state.amps[k1 * d + k2];
    const Eigen::MatrixXcd rho1 = psi * psi.adjoint();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(rho1);
    double entropy = 0.0;
    for (Eigen::Index i = 0; i < d; ++i) {
        const double lambda = solver.eigenvalues()[i];
        if (lambda > 1e-12) entropy -= lambda * std::log2(lambda);
    }
    return entropy;
}

}  // namespace oracles
