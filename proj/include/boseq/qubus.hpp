#pragma once

#include <Eigen/Dense>
#include <array>
#include <vector>

#include "boseq/spin.hpp"
#include "boseq/types.hpp"

namespace boseq {

struct BusParams {
    double omega0 = 0.0;  // site transition energy
    double omega = 0.0;   // photon energy
    double g = 0.0;       // site-bus coupling
    double Omega = 0.0;   // pulse amplitude (constant per segment)
    int n_bosons = 1;
    int photon_cutoff = 2;
    double t_final = 0.0;

    double delta() const { return omega0 - omega; }
    /// True when delta < 5 g sqrt(N), outside the adiabatic-elimination regime.
    bool weak_detuning() const;
    void validate() const;
};

/// Two sites, three modes (a,b,c) per site with n_a+n_b+n_c = N, plus a photon
/// register 0..cutoff. Site states are lexicographic in (n_a, n_b); the flat
/// index is (site1 * site_dim + site2) * photon_levels + n_photon.
struct BusSpace {
    int n_bosons = 1;
    int photon_cutoff = 2;
    std::vector<std::array<int, 3>> site_states;

    Eigen::Index site_dim() const { return static_cast<Eigen::Index>(site_states.size()); }
    Eigen::Index photon_levels() const { return photon_cutoff + 1; }
    Eigen::Index dim() const { return site_dim() * site_dim() * photon_levels(); }

    /// Index of the c-empty site state (k, N-k, 0).
    Eigen::Index register_site_index(int k) const;

    /// Two-site register state placed with c empty and photon vacuum.
    Eigen::VectorXcd embed_register(const RegisterState& state) const;

    /// Projection back onto the register subspace; second value is the leaked
    /// population 1 - |projection|^2. The projected state is renormalized.
    std::pair<Eigen::VectorXcd, double> project_register(const Eigen::VectorXcd& phi) const;

    /// Total population in the top photon level.
    double cutoff_population(const Eigen::VectorXcd& phi) const;

    static BusSpace make(int n_bosons, int photon_cutoff);
};

/// H = (w0/2) sum F^z_n + w p'p + g sum(F^-_n p' + F^+_n p) + W sum(c'_n a_n + h.c.)
/// on the BusSpace layout above, with F^z = c'c - b'b and F^+ = c'b.
Operator build_bus_hamiltonian(const BusParams& params);

/// (g^2 Omega / delta^2)(S+_1 S-_2 + S-_1 S+_2) on the two-site register space.
Operator effective_hamiltonian(const BusParams& params);

/// Effective model in the same frame as the full one: exchange term plus the
/// free site phases -(w0/2)((N-k1)+(N-k2)) that the register states accumulate.
Operator effective_with_free_phases(const BusParams& params);

struct CompareResult {
    double fidelity = 0.0;
    double photon_leak = 0.0;
};

/// Evolves `initial` under the full Hamiltonian for time t, projects back, and
/// scores against the effective model. Throws CutoffError when the top photon
/// level holds more than 1e-3 of the final state.
CompareResult compare_effective(const BusParams& params, const RegisterState& initial, double t);

struct PulseSegment {
    double amplitude = 0.0;  // Omega during the segment
    double duration = 0.0;
};

/// Symmetric piecewise-constant ramp: n_steps up, a hold at `amplitude`, and
/// n_steps down, with total duration t_total and ramp time t_ramp per side.
std::vector<PulseSegment> ramped_pulse(double amplitude, double t_total, double t_ramp,
                                       int n_steps);

/// As compare_effective, but Omega follows the segment schedule in both models.
CompareResult compare_effective_segments(const BusParams& params,
                                         const std::vector<PulseSegment>& segments,
                                         const RegisterState& initial);

/// True exchange coupling, read off the splitting of the near-degenerate
/// |N,N-1> / |N-1,N> doublet of the full Hamiltonian: J = gap / (8N).
double measure_exchange_coupling(const BusParams& params);

/// Fixed-point iteration on Omega so the measured coupling at this detuning
/// equals the printed g^2 Omega / delta^2.
double calibrate_pulse(const BusParams& params, int iterations = 4);

struct BusSweepRow {
    double delta = 0.0;
    double infidelity = 0.0;
    double photon_leak = 0.0;
};

/// The bus-validity experiment: delta_p = 3 g sqrt(N), omega0 = 2 delta_p,
/// Omega calibrated at 50 g sqrt(N), then one exchange half-period per listed
/// delta multiplier with a ramped pulse. Register starts in |N, N-1>.
std::vector<BusSweepRow> run_bus_sweep(int n_bosons, double g,
                                       const std::vector<double>& delta_multipliers,
                                       int photon_cutoff = 3);

}  // namespace boseq
