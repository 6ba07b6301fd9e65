#pragma once

#include <string>
#include <vector>

#include "boseq/dynamics.hpp"
#include "boseq/spin.hpp"

namespace boseq {

/// e^{-i Sz1 Sz2 t} |1/sqrt2,1/sqrt2>>^{x2} in closed form:
/// amp(k1,k2) = sqrt(C(N,k1) C(N,k2)) 2^{-N} e^{-i (N-2k1)(N-2k2) t}.
RegisterState entangler_closed_form(int n_bosons, double t);

struct EntanglerResult {
    Trajectory trajectory;     // site-1 entropy, raw and normalized
    RegisterState gate_state;  // state at the gate time pi/4N
    double gate_time = 0.0;
};

EntanglerResult run_entangler(int n_bosons, const std::vector<double>& t_grid);

struct CnotResult {
    RegisterState final_state;
    QubitAmplitudes site1_given_k0;  // control outcome k2 = 0
    QubitAmplitudes site1_given_kN;  // control outcome k2 = N
    double fidelity_plus = 0.0;      // |<+1/sqrt2,1/sqrt2| site1_given_k0>|
    double fidelity_minus = 0.0;     // |<-1/sqrt2,1/sqrt2| site1_given_kN>|
};

/// Entangled pair followed by N Sz1 - N Sz2 + N^2 for pi/4N; conditioning the
/// second site on k2 in {0, N} flips the first between |+-1/sqrt2, 1/sqrt2>>.
CnotResult run_cnot_analogue(int n_bosons);

enum class OracleKind { CONST0, CONST1, BAL01, BAL10 };

std::string oracle_name(OracleKind kind);
OracleKind oracle_from_name(const std::string& name);
bool oracle_balanced(OracleKind kind);

/// The two-site oracle Hamiltonian: 0, 2N Sz2, Sz1 Sz2 + N Sz2 - N^2, or its
/// sign-flipped balanced partner.
Operator deutsch_oracle(OracleKind kind, int n_bosons);

/// Oracle time at which the two classifications separate deterministically.
double deutsch_default_time(int n_bosons);

struct DeutschResult {
    std::string classification;  // "constant" or "balanced"
    double overlap_plus = 0.0;   // against |1/sqrt2, +1/sqrt2>> on site 1
    double overlap_minus = 0.0;  // against |1/sqrt2, -1/sqrt2>> on site 1
    RegisterState final_state;
};

/// Prepares |1/sqrt2,1/sqrt2>>|1,0>>, applies the oracle for t_oracle, and
/// scores site 1 against the two reference states. Throws
/// AmbiguousOutcomeError unless exactly one overlap exceeds 0.99.
DeutschResult run_deutsch(OracleKind kind, int n_bosons, double t_oracle);
DeutschResult run_deutsch(OracleKind kind, int n_bosons);

/// N^2 prod_n (1 + Sx_n/N)/2 + N^2 prod_n (1 + s_n Sz_n/N)/2 with s_n = +-1
/// from the solution bits (1 -> +1).
Operator build_grover_hamiltonian(int n_sites, int n_bosons, const std::vector<int>& solution);

struct GroverResult {
    Trajectory trajectory;  // columns sz_over_N_site1..M
    double t_peak = 0.0;
    double omega_est = 0.0;         // pi / (2 t_peak)
    double omega_commutator = 0.0;  // sqrt(d2<Sz/N>(0)/dt2 / 2)
};

double grover_default_t_max(int n_sites, int n_bosons);

/// Evolves the all-plus product state and tracks <Sz_n>/N per site; the peak is
/// refined by 3-point quadratic interpolation. Throws NoPeakError when no
/// interior maximum exists on the grid.
GroverResult run_grover(int n_sites, int n_bosons, double t_max, int steps);

}  // namespace boseq
