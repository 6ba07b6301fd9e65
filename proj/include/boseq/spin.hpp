#pragma once

#include <Eigen/Dense>
#include <memory>
#include <utility>
#include <vector>

#include "boseq/types.hpp"

namespace boseq {

enum class Axis { X, Y, Z };

char axis_name(Axis a);
Axis axis_from_char(char c);

/// One bosonic qubit: N bosons over two modes, amplitudes over |k> (k bosons in
/// mode a, N-k in mode b). S^z|k> = (2k-N)|k>.
struct QubitAmplitudes {
    int n_bosons = 1;
    Eigen::VectorXcd amps;  // length N+1
};

/// |alpha,beta>> with amps[k] = sqrt(C(N,k)) alpha^k beta^(N-k).
QubitAmplitudes coherent_qubit_state(cplx alpha, cplx beta, int n_bosons);

/// M bosonic qubits, site 1 slowest-varying: index = sum_s k_s (N+1)^(M-s).
struct RegisterState {
    int n_bosons = 1;
    int n_sites = 1;
    Eigen::VectorXcd amps;

    Eigen::Index dim() const { return amps.size(); }
    Eigen::Index site_dim() const { return n_bosons + 1; }
    double norm() const;

    static RegisterState product(const std::vector<QubitAmplitudes>& qubits);
};

/// Phase-invariant overlap |<psi|phi>|.
double fidelity(const RegisterState& a, const RegisterState& b);
double fidelity(const Eigen::VectorXcd& a, const Eigen::VectorXcd& b);

/// Immutable square complex matrix with a cached eigendecomposition. Copies
/// share the underlying storage, so the cache is keyed on operator identity.
class Operator {
public:
    struct Eig {
        Eigen::VectorXd values;
        Eigen::MatrixXcd vectors;
    };

    Operator() = default;
    explicit Operator(Eigen::MatrixXcd m, bool hermitian_hint = false);

    Eigen::Index dim() const;
    const Eigen::MatrixXcd& matrix() const;
    bool hermitian_hint() const;
    bool is_diagonal() const;

    /// Self-adjoint eigendecomposition, computed once per operator instance.
    /// Throws NonHermitianError when the matrix is not Hermitian.
    const Eig& eig() const;

    Operator scaled(cplx factor) const;

private:
    struct Impl;
    std::shared_ptr<Impl> impl_;
};

Operator identity_operator(Eigen::Index dim);
Operator spin_operator(Axis axis, int n_bosons);

/// Kronecker placement of a site operator into the M-site register space.
Operator embed(const Operator& op, int site, int n_sites, int n_bosons);

struct AxisSite {
    Axis axis;
    int site;  // 1-based
};

/// Product of single-site spin operators on distinct sites, embedded.
Operator operator_product(const std::vector<AxisSite>& factors, int n_sites, int n_bosons);

/// sum_i coeff_i * op_i (all dims equal).
Operator operator_sum(const std::vector<std::pair<double, Operator>>& terms);

cplx expectation(const RegisterState& state, const Operator& op);

/// (<S^2> - <S>^2) / N^2 for the given axis and site.
double spin_variance(const RegisterState& state, Axis axis, int site);

/// Post-select `site` on outcome |k>; returns renormalized state and outcome
/// probability. Throws ZeroProbabilityError below 1e-14.
std::pair<RegisterState, double> project_site(const RegisterState& state, int site, int k);

double binomial(int n, int k);

}  // namespace boseq
