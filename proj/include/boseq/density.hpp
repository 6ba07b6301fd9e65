#pragma once

#include <Eigen/Dense>

#include "boseq/spin.hpp"
#include "boseq/types.hpp"

namespace boseq {

struct DensityMatrix {
    Eigen::MatrixXcd mat;

    Eigen::Index dim() const { return mat.rows(); }
    cplx trace() const { return mat.trace(); }
    double hermiticity_dev() const { return (mat - mat.adjoint()).cwiseAbs().maxCoeff(); }

    /// Throws when Hermiticity (1e-10) or unit trace (1e-10) is violated.
    void validate() const;

    static DensityMatrix pure(const Eigen::VectorXcd& psi);
    static DensityMatrix pure(const RegisterState& state) { return pure(state.amps); }
};

}  // namespace boseq
