#include "boseq/qubus.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "boseq/dynamics.hpp"

namespace boseq {

namespace {

Eigen::MatrixXcd kron(const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b) {
    Eigen::MatrixXcd out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index i = 0; i < a.rows(); ++i)
        for (Eigen::Index j = 0; j < a.cols(); ++j)
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    return out;
}

/// create^dag destroy within the fixed-N three-mode site space (modes 0=a,1=b,2=c).
Eigen::MatrixXcd site_bilinear(const BusSpace& space, int create, int destroy) {
    const Eigen::Index d = space.site_dim();
    std::map<std::array<int, 3>, Eigen::Index> idx;
    for (Eigen::Index i = 0; i < d; ++i) idx[space.site_states[i]] = i;
    Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(d, d);
    for (Eigen::Index i = 0; i < d; ++i) {
        std::array<int, 3> n = space.site_states[i];
        if (n[destroy] == 0) continue;
        double amp = std::sqrt(double(n[destroy]));
        n[destroy] -= 1;
        amp *= std::sqrt(double(n[create] + 1));
        n[create] += 1;
        m(idx.at(n), i) = amp;
    }
    return m;
}

Eigen::MatrixXcd site_number(const BusSpace& space, int mode) {
    const Eigen::Index d = space.site_dim();
    Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(d, d);
    for (Eigen::Index i = 0; i < d; ++i) m(i, i) = double(space.site_states[i][mode]);
    return m;
}

Eigen::MatrixXcd free_register_phases(int n_bosons, double omega0) {
    const Eigen::Index dr = n_bosons + 1;
    Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(dr * dr, dr * dr);
    for (Eigen::Index k1 = 0; k1 < dr; ++k1)
        for (Eigen::Index k2 = 0; k2 < dr; ++k2) {
            const Eigen::Index i = k1 * dr + k2;
            m(i, i) = -(omega0 / 2.0) * double((n_bosons - k1) + (n_bosons - k2));
        }
    return m;
}

Eigen::MatrixXcd exchange_matrix(int n_bosons) {
    const Eigen::MatrixXcd sx = spin_operator(Axis::X, n_bosons).matrix();
    const Eigen::MatrixXcd sy = spin_operator(Axis::Y, n_bosons).matrix();
    const cplx i1(0.0, 1.0);
    const Eigen::MatrixXcd sp = sx + i1 * sy;
    const Eigen::MatrixXcd sm = sx - i1 * sy;
    return kron(sp, sm) + kron(sm, sp);
}

}  // namespace

bool BusParams::weak_detuning() const {
    return delta() < 5.0 * g * std::sqrt(double(n_bosons));
}

void BusParams::validate() const {
    if (photon_cutoff < 1) throw CutoffError("photon_cutoff must be >= 1");
    if (n_bosons < 1) throw ArgumentError("n_bosons must be >= 1");
    if (delta() <= 0.0) throw ArgumentError("detuning omega0 - omega must be positive");
}

BusSpace BusSpace::make(int n_bosons, int photon_cutoff) {
    if (photon_cutoff < 1) throw CutoffError("photon_cutoff must be >= 1");
    BusSpace space;
    space.n_bosons = n_bosons;
    space.photon_cutoff = photon_cutoff;
    for (int na = 0; na <= n_bosons; ++na)
        for (int nb = 0; nb <= n_bosons - na; ++nb)
            space.site_states.push_back({na, nb, n_bosons - na - nb});
    check_dim_cap(space.dim());
    return space;
}

Eigen::Index BusSpace::register_site_index(int k) const {
    const std::array<int, 3> target{k, n_bosons - k, 0};
    for (Eigen::Index i = 0; i < site_dim(); ++i)
        if (site_states[i] == target) return i;
    throw DimensionError("register occupation out of range");
}

Eigen::VectorXcd BusSpace::embed_register(const RegisterState& state) const {
    if (state.n_sites != 2) throw DimensionError("bus register must have two sites");
    if (state.n_bosons != n_bosons) throw DimensionError("boson number mismatch");
    const Eigen::Index d3 = site_dim();
    const Eigen::Index pl = photon_levels();
    const Eigen::Index dr = state.site_dim();
    Eigen::VectorXcd phi = Eigen::VectorXcd::Zero(dim());
    for (Eigen::Index k1 = 0; k1 < dr; ++k1)
        for (Eigen::Index k2 = 0; k2 < dr; ++k2) {
            const Eigen::Index i =
                (register_site_index(int(k1)) * d3 + register_site_index(int(k2))) * pl;
            phi[i] = state.amps[k1 * dr + k2];
        }
    return phi;
}

std::pair<Eigen::VectorXcd, double> BusSpace::project_register(
    const Eigen::VectorXcd& phi) const {
    const Eigen::Index d3 = site_dim();
    const Eigen::Index pl = photon_levels();
    const Eigen::Index dr = n_bosons + 1;
    Eigen::VectorXcd proj(dr * dr);
    for (Eigen::Index k1 = 0; k1 < dr; ++k1)
        for (Eigen::Index k2 = 0; k2 < dr; ++k2) {
            const Eigen::Index i =
                (register_site_index(int(k1)) * d3 + register_site_index(int(k2))) * pl;
            proj[k1 * dr + k2] = phi[i];
        }
    const double kept = proj.squaredNorm();
    if (kept < 1e-14) throw ZeroProbabilityError("no population left on the register subspace");
    return {proj / std::sqrt(kept), 1.0 - kept};
}

double BusSpace::cutoff_population(const Eigen::VectorXcd& phi) const {
    const Eigen::Index pl = photon_levels();
    double pop = 0.0;
    for (Eigen::Index i = pl - 1; i < phi.size(); i += pl) pop += std::norm(phi[i]);
    return pop;
}

Operator build_bus_hamiltonian(const BusParams& params) {
    params.validate();
    const BusSpace space = BusSpace::make(params.n_bosons, params.photon_cutoff);
    const Eigen::Index d3 = space.site_dim();
    const Eigen::Index pl = space.photon_levels();

    const Eigen::MatrixXcd fz = site_number(space, 2) - site_number(space, 1);
    const Eigen::MatrixXcd fp = site_bilinear(space, 2, 1);  // c'b
    const Eigen::MatrixXcd fm = fp.adjoint();
    const Eigen::MatrixXcd pul = site_bilinear(space, 2, 0);  // c'a
    const Eigen::MatrixXcd id3 = Eigen::MatrixXcd::Identity(d3, d3);

    Eigen::MatrixXcd p = Eigen::MatrixXcd::Zero(pl, pl);
    for (Eigen::Index n = 1; n < pl; ++n) p(n - 1, n) = std::sqrt(double(n));
    const Eigen::MatrixXcd pdag = p.adjoint();
    const Eigen::MatrixXcd idp = Eigen::MatrixXcd::Identity(pl, pl);

    auto k3 = [&](const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b,
                  const Eigen::MatrixXcd& c) { return kron(kron(a, b), c); };

    Eigen::MatrixXcd h = (params.omega0 / 2.0) * (k3(fz, id3, idp) + k3(id3, fz, idp));
    h += params.omega * k3(id3, id3, pdag * p);
    h += params.g * (k3(fm, id3, pdag) + k3(id3, fm, pdag) + k3(fp, id3, p) + k3(id3, fp, p));
    h += params.Omega * (k3(pul, id3, idp) + k3(id3, pul, idp) + k3(pul.adjoint(), id3, idp) +
                         k3(id3, pul.adjoint(), idp));
    return Operator(std::move(h), true);
}

Operator effective_hamiltonian(const BusParams& params) {
    params.validate();
    const double j = params.g * params.g * params.Omega / (params.delta() * params.delta());
    return Operator(j * exchange_matrix(params.n_bosons), true);
}

Operator effective_with_free_phases(const BusParams& params) {
    params.validate();
    const double j = params.g * params.g * params.Omega / (params.delta() * params.delta());
    return Operator(
        j * exchange_matrix(params.n_bosons) + free_register_phases(params.n_bosons, params.omega0),
        true);
}

CompareResult compare_effective(const BusParams& params, const RegisterState& initial, double t) {
    std::vector<PulseSegment> one{{params.Omega, t}};
    return compare_effective_segments(params, one, initial);
}

std::vector<PulseSegment> ramped_pulse(double amplitude, double t_total, double t_ramp,
                                       int n_steps) {
    if (n_steps < 1) throw ArgumentError("ramp needs at least one step");
    if (t_total <= 2.0 * t_ramp) throw ArgumentError("pulse shorter than its ramps");
    std::vector<PulseSegment> segs;
    const double dt = t_ramp / n_steps;
    for (int i = 1; i <= n_steps; ++i) segs.push_back({amplitude * i / n_steps, dt});
    segs.push_back({amplitude, t_total - 2.0 * t_ramp});
    for (int i = n_steps; i >= 1; --i) segs.push_back({amplitude * i / n_steps, dt});
    return segs;
}

CompareResult compare_effective_segments(const BusParams& params,
                                         const std::vector<PulseSegment>& segments,
                                         const RegisterState& initial) {
    params.validate();
    const BusSpace space = BusSpace::make(params.n_bosons, params.photon_cutoff);

    std::map<double, Operator> full_by_amp;
    std::map<double, Operator> eff_by_amp;
    for (const PulseSegment& seg : segments) {
        if (seg.duration < 0.0) throw ArgumentError("negative segment duration");
        if (full_by_amp.count(seg.amplitude)) continue;
        BusParams p = params;
        p.Omega = seg.amplitude;
        full_by_amp.emplace(seg.amplitude, build_bus_hamiltonian(p));
        eff_by_amp.emplace(seg.amplitude, effective_with_free_phases(p));
    }

    Eigen::VectorXcd phi = space.embed_register(initial);
    Eigen::VectorXcd psi = initial.amps;
    for (const PulseSegment& seg : segments) {
        phi = evolve_unitary(phi, full_by_amp.at(seg.amplitude), seg.duration);
        psi = evolve_unitary(psi, eff_by_amp.at(seg.amplitude), seg.duration);
    }

    const double cutoff_pop = space.cutoff_population(phi);
    if (cutoff_pop > 1e-3)
        throw CutoffError("photon population " + std::to_string(cutoff_pop) +
                          " at the cutoff level; raise photon_cutoff");

    auto [proj, leak] = space.project_register(phi);
    CompareResult result;
    result.fidelity = fidelity(psi, proj);
    result.photon_leak = leak;
    return result;
}

double measure_exchange_coupling(const BusParams& params) {
    params.validate();
    const int n = params.n_bosons;
    const BusSpace space = BusSpace::make(n, params.photon_cutoff);
    const Eigen::Index d3 = space.site_dim();
    const Eigen::Index pl = space.photon_levels();
    const Operator h = build_bus_hamiltonian(params);

    auto flat = [&](int k1, int k2) {
        return (space.register_site_index(k1) * d3 + space.register_site_index(k2)) * pl;
    };
    const Eigen::Index ia = flat(n, n - 1);
    const Eigen::Index ib = flat(n - 1, n);

    const Operator::Eig& eig = h.eig();
    std::vector<std::pair<double, Eigen::Index>> weight;
    for (Eigen::Index m = 0; m < eig.values.size(); ++m)
        weight.push_back(
            {std::norm(eig.vectors(ia, m)) + std::norm(eig.vectors(ib, m)), m});
    std::sort(weight.begin(), weight.end(),
              [](const auto& a, const auto& b) { return a.first > b.first; });
    const double gap = std::abs(eig.values[weight[0].second] - eig.values[weight[1].second]);
    return gap / (8.0 * n);
}

double calibrate_pulse(const BusParams& params, int iterations) {
    params.validate();
    const double delta = params.delta();
    const double target = params.g * params.g / (delta * delta);
    double omega_amp = 0.125 * params.omega0;
    for (int i = 0; i < iterations; ++i) {
        BusParams p = params;
        p.Omega = omega_amp;
        const double j = measure_exchange_coupling(p);
        omega_amp = target / (j / (omega_amp * omega_amp));
    }
    return omega_amp;
}

std::vector<BusSweepRow> run_bus_sweep(int n_bosons, double g,
                                       const std::vector<double>& delta_multipliers,
                                       int photon_cutoff) {
    const double sn = std::sqrt(double(n_bosons));
    const double delta_p = 3.0 * g * sn;
    const double omega0 = 2.0 * delta_p;

    BusParams cal;
    cal.n_bosons = n_bosons;
    cal.g = g;
    cal.photon_cutoff = photon_cutoff;
    cal.omega0 = omega0;
    cal.omega = omega0 - 50.0 * g * sn;
    const double omega_amp = calibrate_pulse(cal);

    const double t_ramp = 40.0 / delta_p;
    const int n_steps = 16;

    QubitAmplitudes top;
    top.n_bosons = n_bosons;
    top.amps = Eigen::VectorXcd::Zero(n_bosons + 1);
    top.amps[n_bosons] = 1.0;
    QubitAmplitudes next = top;
    next.amps.setZero();
    next.amps[n_bosons - 1] = 1.0;
    const RegisterState initial = RegisterState::product({top, next});

    std::vector<BusSweepRow> rows;
    for (double mult : delta_multipliers) {
        const double delta = mult * g * sn;
        BusParams p = cal;
        p.omega = omega0 - delta;
        p.Omega = omega_amp;
        const double j_printed = g * g * omega_amp / (delta * delta);
        const double t_half = M_PI / (8.0 * j_printed * n_bosons);
        p.t_final = t_half;
        const auto segs = ramped_pulse(omega_amp, t_half, t_ramp, n_steps);
        const CompareResult r = compare_effective_segments(p, segs, initial);
        rows.push_back({delta, 1.0 - r.fidelity, r.photon_leak});
    }
    return rows;
}

}  // namespace boseq
