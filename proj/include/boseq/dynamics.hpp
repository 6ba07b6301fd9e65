#pragma once

#include <Eigen/Dense>
#include <optional>
#include <string>
#include <vector>

#include "boseq/density.hpp"
#include "boseq/spin.hpp"

namespace boseq {

/// e^{-iHt}|psi>. Diagonal H takes an exact phase-multiplication path;
/// otherwise the operator's cached eigendecomposition is used.
RegisterState evolve_unitary(const RegisterState& state, const Operator& hamiltonian, double t);
Eigen::VectorXcd evolve_unitary(const Eigen::VectorXcd& psi, const Operator& hamiltonian,
                                double t);

/// d(rho)/dt = -i[H,rho] - Gamma sum_n [A_n,[A_n,rho]], the double-commutator
/// form taken literally (couplings need not be Hermitian).
struct LindbladSpec {
    double gamma = 0.0;
    std::vector<Operator> couplings;
    std::optional<Operator> hamiltonian;

    void validate(Eigen::Index state_dim) const;
    bool hermitian_couplings() const;
};

double default_lindblad_dt(const LindbladSpec& spec, double t_total);

/// Fixed-step classical 4th-order integration of the generator above.
DensityMatrix evolve_lindblad(const DensityMatrix& rho, const LindbladSpec& spec, double t,
                              double dt);
DensityMatrix evolve_lindblad(const DensityMatrix& rho, const LindbladSpec& spec, double t);

/// Sampled observables over one time grid; columns share the grid.
struct Trajectory {
    std::vector<double> times;
    std::vector<std::string> labels;
    std::vector<std::vector<cplx>> columns;

    const std::vector<cplx>& column(const std::string& label) const;
    void validate() const;
};

/// Integrates once, sampling Tr(O rho) for each observable at every grid time.
Trajectory lindblad_trajectory(const DensityMatrix& rho0, const LindbladSpec& spec,
                               const std::vector<double>& t_grid,
                               const std::vector<std::pair<std::string, Operator>>& observables,
                               double dt);

/// Least-squares slope of log|value| vs t, sign-flipped to a decay rate.
double correlator_decay_rate(const std::vector<double>& times, const std::vector<cplx>& values);
double correlator_decay_rate(const Trajectory& traj, std::size_t column = 0);

/// Two-mode Fock space per site with n_a + n_b <= N (particle loss enlarges the
/// fixed-N register shell). Site states ordered by total boson number, then n_a.
struct LossSpace {
    int n_bosons = 1;
    int n_sites = 1;
    std::vector<std::pair<int, int>> site_states;  // (n_a, n_b)

    Eigen::Index site_dim() const { return static_cast<Eigen::Index>(site_states.size()); }
    Eigen::Index dim() const;

    Eigen::MatrixXcd mode_annihilation_site(char mode) const;  // 'a' or 'b'
    Operator mode_annihilation(char mode, int site) const;     // embedded
    Operator spin(Axis axis, int site) const;                  // Schwinger op, shell-wise

    /// Register state on the fixed-N shell, embedded into this space.
    Eigen::VectorXcd embed_register(const RegisterState& state) const;

    static LossSpace make(int n_bosons, int n_sites);
};

/// Couplings a_n, b_n for the listed sites, on the enlarged space.
LindbladSpec particle_loss_couplings(const LossSpace& space, const std::vector<int>& sites,
                                     double gamma);

}  // namespace boseq
