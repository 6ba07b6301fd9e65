#include "boseq/dynamics.hpp"

#include <algorithm>
#include <cmath>

#include "boseq/kernels.hpp"

namespace boseq {

void DensityMatrix::validate() const {
    if (mat.rows() != mat.cols()) throw DimensionError("density matrix must be square");
    if (hermiticity_dev() > 1e-10)
        throw NonHermitianError("density matrix not Hermitian, dev = " +
                                std::to_string(hermiticity_dev()));
    if (std::abs(trace() - 1.0) > 1e-10)
        throw NormalizationError("density matrix trace != 1");
}

DensityMatrix DensityMatrix::pure(const Eigen::VectorXcd& psi) {
    DensityMatrix rho;
    rho.mat = psi * psi.adjoint();
    return rho;
}

Eigen::VectorXcd evolve_unitary(const Eigen::VectorXcd& psi, const Operator& hamiltonian,
                                double t) {
    if (hamiltonian.dim() != psi.size())
        throw DimensionError("evolve_unitary: dimension mismatch");
    Eigen::VectorXcd out = psi;
    if (hamiltonian.is_diagonal()) {
        const auto diag = hamiltonian.matrix().diagonal();
        if (diag.imag().cwiseAbs().maxCoeff() > 1e-10)
            throw NonHermitianError("diagonal Hamiltonian with complex entries");
        Eigen::VectorXcd phases(diag.size());
        for (Eigen::Index i = 0; i < diag.size(); ++i)
            phases[i] = std::polar(1.0, -diag[i].real() * t);
        kernels::cmul_inplace(out.data(), phases.data(), out.size());
        return out;
    }
    const auto& eig = hamiltonian.eig();
    Eigen::VectorXcd coeffs = eig.vectors.adjoint() * out;
    for (Eigen::Index i = 0; i < coeffs.size(); ++i)
        coeffs[i] *= std::polar(1.0, -eig.values[i] * t);
    return eig.vectors * coeffs;
}

RegisterState evolve_unitary(const RegisterState& state, const Operator& hamiltonian, double t) {
    RegisterState out = state;
    out.amps = evolve_unitary(state.amps, hamiltonian, t);
    return out;
}

void LindbladSpec::validate(Eigen::Index state_dim) const {
    if (gamma < 0.0) throw ArgumentError("gamma must be >= 0");
    for (const auto& a : couplings)
        if (a.dim() != state_dim) throw DimensionError("coupling dimension mismatch");
    if (hamiltonian && hamiltonian->dim() != state_dim)
        throw DimensionError("hamiltonian dimension mismatch");
}

bool LindbladSpec::hermitian_couplings() const {
    for (const auto& a : couplings)
        if (!a.hermitian_hint()) return false;
    return true;
}

double default_lindblad_dt(const LindbladSpec& spec, double t_total) {
    double dt = t_total / 1000.0;
    if (spec.gamma > 0.0) dt = std::min(dt, 1e-2 / spec.gamma);
    return dt;
}

namespace {

Eigen::MatrixXcd lindblad_rhs(const Eigen::MatrixXcd& rho, const LindbladSpec& spec) {
    Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(rho.rows(), rho.cols());
    if (spec.hamiltonian) {
        const auto& h = spec.hamiltonian->matrix();
        out.noalias() -= cplx(0, 1) * (h * rho - rho * h);
    }
    for (const auto& c : spec.couplings) {
        const auto& a = c.matrix();
        const Eigen::MatrixXcd ar = a * rho;
        // [A,[A,rho]] = A A rho - 2 A rho A + rho A A
        out.noalias() -= spec.gamma * (a * ar - 2.0 * ar * a + rho * a * a);
    }
    return out;
}

void rk4_step(Eigen::MatrixXcd& rho, const LindbladSpec& spec, double h) {
    const Eigen::MatrixXcd k1 = lindblad_rhs(rho, spec);
    const Eigen::MatrixXcd k2 = lindblad_rhs(rho + 0.5 * h * k1, spec);
    const Eigen::MatrixXcd k3 = lindblad_rhs(rho + 0.5 * h * k2, spec);
    const Eigen::MatrixXcd k4 = lindblad_rhs(rho + h * k3, spec);
    rho += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
}

struct Integrator {
    Eigen::MatrixXcd rho;
    const LindbladSpec& spec;
    double dt;

    void advance(double duration) {
        if (duration <= 0.0) return;
        const int steps = std::max(1, static_cast<int>(std::ceil(duration / dt - 1e-12)));
        const double h = duration / steps;
        for (int i = 0; i < steps; ++i) rk4_step(rho, spec, h);
    }
};

void check_step(const LindbladSpec& spec, double dt) {
    if (dt <= 0.0) throw StepSizeError("dt must be > 0");
    if (spec.gamma * dt > 1e-2 + 1e-15)
        throw StepSizeError("Gamma*dt = " + std::to_string(spec.gamma * dt) +
                            " exceeds 1e-2; reduce dt");
}

}  // namespace

DensityMatrix evolve_lindblad(const DensityMatrix& rho, const LindbladSpec& spec, double t,
                              double dt) {
    spec.validate(rho.dim());
    check_step(spec, dt);
    const cplx tr0 = rho.trace();
    Integrator integ{rho.mat, spec, dt};
    integ.advance(t);
    DensityMatrix out{std::move(integ.rho)};
    if (std::abs(out.trace() - tr0) > 1e-8)
        throw Error("lindblad integration lost trace: drift " +
                    std::to_string(std::abs(out.trace() - tr0)));
    if (spec.hermitian_couplings() && (!spec.hamiltonian || spec.hamiltonian->hermitian_hint()) &&
        out.hermiticity_dev() > 1e-8)
        throw Error("lindblad integration lost Hermiticity");
    return out;
}

DensityMatrix evolve_lindblad(const DensityMatrix& rho, const LindbladSpec& spec, double t) {
    return evolve_lindblad(rho, spec, t, default_lindblad_dt(spec, t));
}

const std::vector<cplx>& Trajectory::column(const std::string& label) const {
    for (std::size_t i = 0; i < labels.size(); ++i)
        if (labels[i] == label) return columns[i];
    throw ArgumentError("no trajectory column named '" + label + "'");
}

void Trajectory::validate() const {
    for (std::size_t i = 1; i < times.size(); ++i)
        if (times[i] <= times[i - 1]) throw ArgumentError("trajectory times must increase");
    for (const auto& c : columns)
        if (c.size() != times.size()) throw ArgumentError("trajectory column length mismatch");
}

Trajectory lindblad_trajectory(const DensityMatrix& rho0, const LindbladSpec& spec,
                               const std::vector<double>& t_grid,
                               const std::vector<std::pair<std::string, Operator>>& observables,
                               double dt) {
    spec.validate(rho0.dim());
    check_step(spec, dt);
    Trajectory traj;
    traj.times = t_grid;
    for (const auto& [label, op] : observables) {
        traj.labels.push_back(label);
        traj.columns.emplace_back();
    }
    Integrator integ{rho0.mat, spec, dt};
    double now = 0.0;
    for (double t : t_grid) {
        if (t < now) throw ArgumentError("t_grid must be non-decreasing from 0");
        integ.advance(t - now);
        now = t;
        for (std::size_t j = 0; j < observables.size(); ++j)
            traj.columns[j].push_back((observables[j].second.matrix() * integ.rho).trace());
    }
    traj.validate();
    return traj;
}

double correlator_decay_rate(const std::vector<double>& times, const std::vector<cplx>& values) {
    if (times.size() != values.size()) throw DimensionError("times/values length mismatch");
    if (times.size() < 10) throw FitError("need at least 10 samples");
    const std::size_t n = times.size();
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < n; ++i) {
        const double mag = std::abs(values[i]);
        if (mag < 1e-13) throw FitError("magnitude underflow at t = " + std::to_string(times[i]));
        const double y = std::log(mag);
        sx += times[i];
        sy += y;
        sxx += times[i] * times[i];
        sxy += times[i] * y;
    }
    const double denom = n * sxx - sx * sx;
    if (denom == 0.0) throw FitError("degenerate time grid");
    const double slope = (n * sxy - sx * sy) / denom;
    return -slope;
}

double correlator_decay_rate(const Trajectory& traj, std::size_t column) {
    if (column >= traj.columns.size()) throw ArgumentError("no such trajectory column");
    return correlator_decay_rate(traj.times, traj.columns[column]);
}

LossSpace LossSpace::make(int n_bosons, int n_sites) {
    if (n_bosons < 1 || n_sites < 1) throw ArgumentError("need N >= 1 and M >= 1");
    LossSpace sp;
    sp.n_bosons = n_bosons;
    sp.n_sites = n_sites;
    for (int tot = 0; tot <= n_bosons; ++tot)
        for (int na = 0; na <= tot; ++na) sp.site_states.emplace_back(na, tot - na);
    return sp;
}

Eigen::Index LossSpace::dim() const {
    Eigen::Index d = 1;
    for (int s = 0; s < n_sites; ++s) d *= site_dim();
    return d;
}

Eigen::MatrixXcd LossSpace::mode_annihilation_site(char mode) const {
    if (mode != 'a' && mode != 'b') throw ArgumentError("mode must be 'a' or 'b'");
    const Eigen::Index d = site_dim();
    auto index_of = [&](int na, int nb) -> Eigen::Index {
        for (Eigen::Index i = 0; i < d; ++i)
            if (site_states[i] == std::pair<int, int>{na, nb}) return i;
        return -1;
    };
    Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(d, d);
    for (Eigen::Index i = 0; i < d; ++i) {
        auto [na, nb] = site_states[i];
        if (mode == 'a' && na > 0) m(index_of(na - 1, nb), i) = std::sqrt(double(na));
        if (mode == 'b' && nb > 0) m(index_of(na, nb - 1), i) = std::sqrt(double(nb));
    }
    return m;
}

namespace {
Eigen::MatrixXcd kron_loss(const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b) {
    Eigen::MatrixXcd out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index i = 0; i < a.rows(); ++i)
        for (Eigen::Index j = 0; j < a.cols(); ++j)
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    return out;
}

Eigen::MatrixXcd embed_site_matrix(const Eigen::MatrixXcd& m, int site, int n_sites,
                                   Eigen::Index site_dim) {
    Eigen::Index left = 1, right = 1;
    for (int s = 1; s < site; ++s) left *= site_dim;
    for (int s = site + 1; s <= n_sites; ++s) right *= site_dim;
    return kron_loss(Eigen::MatrixXcd::Identity(left, left),
                     kron_loss(m, Eigen::MatrixXcd::Identity(right, right)));
}
}  // namespace

Operator LossSpace::mode_annihilation(char mode, int site) const {
    if (site < 1 || site > n_sites) throw DimensionError("site out of range");
    return Operator(embed_site_matrix(mode_annihilation_site(mode), site, n_sites, site_dim()),
                    false);
}

Operator LossSpace::spin(Axis axis, int site) const {
    const Eigen::MatrixXcd a = mode_annihilation_site('a');
    const Eigen::MatrixXcd b = mode_annihilation_site('b');
    Eigen::MatrixXcd m;
    switch (axis) {
        case Axis::X: m = a.adjoint() * b + b.adjoint() * a; break;
        case Axis::Y: m = cplx(0, -1) * a.adjoint() * b + cplx(0, 1) * b.adjoint() * a; break;
        case Axis::Z: m = a.adjoint() * a - b.adjoint() * b; break;
    }
    return Operator(embed_site_matrix(m, site, n_sites, site_dim()), true);
}

Eigen::VectorXcd LossSpace::embed_register(const RegisterState& state) const {
    if (state.n_bosons != n_bosons || state.n_sites != n_sites)
        throw DimensionError("register does not match loss space");
    const Eigen::Index d = site_dim();
    auto shell_index = [&](int k) -> Eigen::Index {
        for (Eigen::Index i = 0; i < d; ++i)
            if (site_states[i] == std::pair<int, int>{k, n_bosons - k}) return i;
        throw DimensionError("shell state missing");
    };
    Eigen::VectorXcd out = Eigen::VectorXcd::Zero(dim());
    const Eigen::Index reg_site = state.site_dim();
    for (Eigen::Index i = 0; i < state.dim(); ++i) {
        Eigen::Index rem = i, full = 0;
        for (int s = n_sites - 1; s >= 0; --s) {
            const int k = static_cast<int>(rem % reg_site);
            rem /= reg_site;
            Eigen::Index stride = 1;
            for (int q = s + 1; q < n_sites; ++q) stride *= d;
            full += shell_index(k) * stride;
        }
        out[full] = state.amps[i];
    }
    return out;
}

LindbladSpec particle_loss_couplings(const LossSpace& space, const std::vector<int>& sites,
                                     double gamma) {
    LindbladSpec spec;
    spec.gamma = gamma;
    for (int s : sites) {
        spec.couplings.push_back(space.mode_annihilation('a', s));
        spec.couplings.push_back(space.mode_annihilation('b', s));
    }
    return spec;
}

}  // namespace boseq
