#include "boseq/algolab.hpp"

#include <cmath>

#include "boseq/entanglement.hpp"

namespace boseq {

namespace {

const double kPi = std::acos(-1.0);

QubitAmplitudes plus_state(int n) { return coherent_qubit_state(1 / std::sqrt(2.0), 1 / std::sqrt(2.0), n); }

QubitAmplitudes site1_after(const RegisterState& state, int k2) {
    const Eigen::Index d = state.site_dim();
    QubitAmplitudes q;
    q.n_bosons = state.n_bosons;
    q.amps.resize(d);
    for (Eigen::Index k1 = 0; k1 < d; ++k1) q.amps[k1] = state.amps[k1 * d + k2];
    const double n = q.amps.norm();
    if (n < 1e-7) throw ZeroProbabilityError("conditioning outcome has vanishing probability");
    q.amps /= n;
    return q;
}

double qubit_fidelity(const QubitAmplitudes& a, const QubitAmplitudes& b) {
    return std::abs(a.amps.dot(b.amps));
}

}  // namespace

RegisterState entangler_closed_form(int n_bosons, double t) {
    const int n = n_bosons;
    RegisterState state;
    state.n_bosons = n;
    state.n_sites = 2;
    const Eigen::Index d = n + 1;
    state.amps.resize(d * d);
    const double scale = std::pow(2.0, -n);
    for (Eigen::Index k1 = 0; k1 < d; ++k1)
        for (Eigen::Index k2 = 0; k2 < d; ++k2) {
            const double phase = -double(n - 2 * k1) * double(n - 2 * k2) * t;
            state.amps[k1 * d + k2] =
                std::sqrt(binomial(n, int(k1)) * binomial(n, int(k2))) * scale *
                std::polar(1.0, phase);
        }
    return state;
}

EntanglerResult run_entangler(int n_bosons, const std::vector<double>& t_grid) {
    if (n_bosons < 1) throw ArgumentError("n_bosons must be >= 1");
    EntanglerResult result;
    result.trajectory = entropy_trajectory(n_bosons, t_grid);
    result.gate_time = kPi / (4.0 * n_bosons);
    const auto plus = plus_state(n_bosons);
    const Operator zz = operator_product({{Axis::Z, 1}, {Axis::Z, 2}}, 2, n_bosons);
    result.gate_state =
        evolve_unitary(RegisterState::product({plus, plus}), zz, result.gate_time);
    return result;
}

CnotResult run_cnot_analogue(int n_bosons) {
    const int n = n_bosons;
    const double t = kPi / (4.0 * n);
    const auto plus = plus_state(n);
    const Operator zz = operator_product({{Axis::Z, 1}, {Axis::Z, 2}}, 2, n);
    RegisterState state = evolve_unitary(RegisterState::product({plus, plus}), zz, t);

    const Operator h = operator_sum({{double(n), operator_product({{Axis::Z, 1}}, 2, n)},
                                     {-double(n), operator_product({{Axis::Z, 2}}, 2, n)},
                                     {double(n) * n, identity_operator(state.dim())}});
    CnotResult result;
    result.final_state = evolve_unitary(state, h, t);
    result.site1_given_k0 = site1_after(result.final_state, 0);
    result.site1_given_kN = site1_after(result.final_state, n);
    const double s = 1.0 / std::sqrt(2.0);
    result.fidelity_plus = qubit_fidelity(coherent_qubit_state(s, s, n), result.site1_given_k0);
    result.fidelity_minus = qubit_fidelity(coherent_qubit_state(-s, s, n), result.site1_given_kN);
    return result;
}

std::string oracle_name(OracleKind kind) {
    switch (kind) {
        case OracleKind::CONST0: return "CONST0";
        case OracleKind::CONST1: return "CONST1";
        case OracleKind::BAL01: return "BAL01";
        case OracleKind::BAL10: return "BAL10";
    }
    throw ArgumentError("invalid oracle kind");
}

OracleKind oracle_from_name(const std::string& name) {
    if (name == "CONST0") return OracleKind::CONST0;
    if (name == "CONST1") return OracleKind::CONST1;
    if (name == "BAL01") return OracleKind::BAL01;
    if (name == "BAL10") return OracleKind::BAL10;
    throw ArgumentError("unknown oracle '" + name + "'");
}

bool oracle_balanced(OracleKind kind) {
    return kind == OracleKind::BAL01 || kind == OracleKind::BAL10;
}

Operator deutsch_oracle(OracleKind kind, int n_bosons) {
    const int n = n_bosons;
    const Eigen::Index dim = Eigen::Index(n + 1) * (n + 1);
    const Operator z2 = operator_product({{Axis::Z, 2}}, 2, n);
    const Operator zz = operator_product({{Axis::Z, 1}, {Axis::Z, 2}}, 2, n);
    switch (kind) {
        case OracleKind::CONST0:
            return Operator(Eigen::MatrixXcd::Zero(dim, dim), true);
        case OracleKind::CONST1:
            return z2.scaled(2.0 * n);
        case OracleKind::BAL01:
            return operator_sum(
                {{1.0, zz}, {double(n), z2}, {-double(n) * n, identity_operator(dim)}});
        case OracleKind::BAL10:
            return operator_sum(
                {{-1.0, zz}, {double(n), z2}, {-double(n) * n, identity_operator(dim)}});
    }
    throw ArgumentError("invalid oracle kind");
}

double deutsch_default_time(int n_bosons) { return kPi / (2.0 * n_bosons); }

DeutschResult run_deutsch(OracleKind kind, int n_bosons, double t_oracle) {
    if (t_oracle <= 0.0) throw ArgumentError("oracle time must be positive");
    const int n = n_bosons;
    const double s = 1.0 / std::sqrt(2.0);
    const RegisterState initial =
        RegisterState::product({plus_state(n), coherent_qubit_state(1.0, 0.0, n)});

    DeutschResult result;
    result.final_state = evolve_unitary(initial, deutsch_oracle(kind, n), t_oracle);

    const auto second = coherent_qubit_state(1.0, 0.0, n);
    const RegisterState ref_plus = RegisterState::product({coherent_qubit_state(s, s, n), second});
    const RegisterState ref_minus =
        RegisterState::product({coherent_qubit_state(s, -s, n), second});
    result.overlap_plus = fidelity(result.final_state, ref_plus);
    result.overlap_minus = fidelity(result.final_state, ref_minus);

    const bool plus_wins = result.overlap_plus >= 0.99 && result.overlap_minus < 0.99;
    const bool minus_wins = result.overlap_minus >= 0.99 && result.overlap_plus < 0.99;
    if (!plus_wins && !minus_wins)
        throw AmbiguousOutcomeError(
            "overlaps " + std::to_string(result.overlap_plus) + " / " +
            std::to_string(result.overlap_minus) + " do not separate; check the oracle time");
    result.classification = plus_wins ? "constant" : "balanced";
    return result;
}

DeutschResult run_deutsch(OracleKind kind, int n_bosons) {
    return run_deutsch(kind, n_bosons, deutsch_default_time(n_bosons));
}

Operator build_grover_hamiltonian(int n_sites, int n_bosons,
                                  const std::vector<int>& solution) {
    if (n_sites < 1) throw ArgumentError("n_sites must be >= 1");
    if (int(solution.size()) != n_sites)
        throw ArgumentError("solution must list one bit per site");
    const int n = n_bosons;
    Eigen::Index dim = 1;
    for (int s = 0; s < n_sites; ++s) dim *= n + 1;
    check_dim_cap(dim);

    auto projector_product = [&](Axis axis, bool use_signs) {
        Eigen::MatrixXcd prod = Eigen::MatrixXcd::Identity(dim, dim);
        for (int site = 1; site <= n_sites; ++site) {
            const double sign = use_signs ? (solution[site - 1] ? 1.0 : -1.0) : 1.0;
            const Eigen::MatrixXcd local =
                0.5 * (Eigen::MatrixXcd::Identity(n + 1, n + 1) +
                       (sign / n) * spin_operator(axis, n).matrix());
            prod = prod * embed(Operator(local, true), site, n_sites, n).matrix();
        }
        return prod;
    };
    const double n2 = double(n) * n;
    Eigen::MatrixXcd h =
        n2 * (projector_product(Axis::X, false) + projector_product(Axis::Z, true));
    return Operator(std::move(h), true);
}

double grover_default_t_max(int n_sites, int n_bosons) {
    return 1.5 * kPi * std::sqrt(std::pow(2.0, n_sites)) / n_bosons;
}

GroverResult run_grover(int n_sites, int n_bosons, double t_max, int steps) {
    if (steps < 100) throw ArgumentError("steps must be >= 100");
    if (t_max <= 0.0) throw ArgumentError("t_max must be positive");
    const int n = n_bosons;
    const Operator h = build_grover_hamiltonian(n_sites, n_bosons,
                                                std::vector<int>(n_sites, 1));
    std::vector<QubitAmplitudes> qubits(n_sites, plus_state(n));
    const RegisterState initial = RegisterState::product(qubits);

    std::vector<Operator> sz;
    for (int site = 1; site <= n_sites; ++site)
        sz.push_back(operator_product({{Axis::Z, site}}, n_sites, n));

    GroverResult result;
    Trajectory& traj = result.trajectory;
    traj.columns.resize(n_sites);
    for (int site = 1; site <= n_sites; ++site)
        traj.labels.push_back("sz_over_N_site" + std::to_string(site));
    for (int i = 0; i < steps; ++i) {
        const double t = t_max * i / (steps - 1);
        traj.times.push_back(t);
        const RegisterState psi = evolve_unitary(initial, h, t);
        for (int site = 0; site < n_sites; ++site)
            traj.columns[site].push_back(expectation(psi, sz[site]) / double(n));
    }
    traj.validate();

    const std::vector<cplx>& v = traj.columns[0];
    std::size_t peak = 0;
    for (std::size_t i = 1; i + 1 < v.size(); ++i)
        if (v[i].real() >= v[i - 1].real() && v[i].real() >= v[i + 1].real()) {
            peak = i;
            break;
        }
    if (peak == 0) throw NoPeakError("no interior maximum of <Sz>/N on [0, t_max]");
    const double dt = traj.times[1] - traj.times[0];
    const double ym = v[peak - 1].real(), y0 = v[peak].real(), yp = v[peak + 1].real();
    const double denom = ym - 2.0 * y0 + yp;
    result.t_peak = traj.times[peak] +
                    (std::abs(denom) > 1e-15 ? 0.5 * dt * (ym - yp) / denom : 0.0);
    result.omega_est = kPi / (2.0 * result.t_peak);

    const Eigen::MatrixXcd& hm = h.matrix();
    const Eigen::MatrixXcd a = sz[0].matrix() / double(n);
    const Eigen::MatrixXcd comm2 = hm * (hm * a - a * hm) - (hm * a - a * hm) * hm;
    const double d2 = -std::real(cplx(initial.amps.adjoint() * comm2 * initial.amps));
    if (d2 <= 0.0) throw NoPeakError("non-positive initial curvature of <Sz>/N");
    result.omega_commutator = std::sqrt(d2 / 2.0);
    return result;
}

}  // namespace boseq
