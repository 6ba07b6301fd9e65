#include "boseq/entanglement.hpp"

#include <algorithm>
#include <cmath>

namespace boseq {

void BipartitionSpec::validate(int n_sites) const {
    if (keep_sites.empty()) throw ArgumentError("keep_sites must be non-empty");
    std::vector<int> sorted = keep_sites;
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
        throw DuplicateSiteError("duplicate site in bipartition");
    if (sorted.front() < 1 || sorted.back() > n_sites)
        throw DimensionError("bipartition site out of range");
    if (static_cast<int>(keep_sites.size()) == n_sites)
        throw ArgumentError("bipartition must trace out at least one site");
}

std::vector<int> BipartitionSpec::traced_sites(int n_sites) const {
    std::vector<int> out;
    for (int s = 1; s <= n_sites; ++s)
        if (std::find(keep_sites.begin(), keep_sites.end(), s) == keep_sites.end())
            out.push_back(s);
    return out;
}

DensityMatrix reduced_density(const RegisterState& state, const BipartitionSpec& spec) {
    spec.validate(state.n_sites);
    const Eigen::Index d = state.site_dim();
    const int m = state.n_sites;

    std::vector<Eigen::Index> stride(m + 1);  // stride[site], 1-based
    Eigen::Index s = 1;
    for (int site = m; site >= 1; --site) {
        stride[site] = s;
        s *= d;
    }
    const auto traced = spec.traced_sites(m);

    auto offsets = [&](const std::vector<int>& sites) {
        Eigen::Index count = 1;
        for (std::size_t i = 0; i < sites.size(); ++i) count *= d;
        std::vector<Eigen::Index> off(count, 0);
        for (Eigen::Index idx = 0; idx < count; ++idx) {
            Eigen::Index rem = idx;
            for (auto it = sites.rbegin(); it != sites.rend(); ++it) {
                off[idx] += (rem % d) * stride[*it];
                rem /= d;
            }
        }
        return off;
    };
    const auto keep_off = offsets(spec.keep_sites);
    const auto traced_off = offsets(traced);

    const Eigen::Index kd = static_cast<Eigen::Index>(keep_off.size());
    DensityMatrix rho;
    rho.mat = Eigen::MatrixXcd::Zero(kd, kd);
    for (Eigen::Index i = 0; i < kd; ++i)
        for (Eigen::Index j = 0; j < kd; ++j) {
            cplx acc = 0.0;
            for (const Eigen::Index e : traced_off)
                acc += state.amps[keep_off[i] + e] * std::conj(state.amps[keep_off[j] + e]);
            rho.mat(i, j) = acc;
        }
    return rho;
}

double von_neumann_entropy(const DensityMatrix& rho) {
    if (rho.hermiticity_dev() > 1e-10)
        throw NonHermitianError("entropy requires a Hermitian density matrix");
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(rho.mat);
    double entropy = 0.0;
    for (Eigen::Index i = 0; i < solver.eigenvalues().size(); ++i) {
        double lambda = solver.eigenvalues()[i];
        if (lambda < -1e-8)
            throw NegativeEigenvalueError("eigenvalue " + std::to_string(lambda) +
                                          " below -1e-8");
        if (lambda <= 1e-12) continue;
        entropy -= lambda * std::log2(lambda);
    }
    return entropy;
}

Trajectory entropy_trajectory(int n_bosons, const std::vector<double>& t_grid) {
    const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
    const auto plus = coherent_qubit_state(inv_sqrt2, inv_sqrt2, n_bosons);
    const RegisterState initial = RegisterState::product({plus, plus});
    const Operator zz = operator_product({{Axis::Z, 1}, {Axis::Z, 2}}, 2, n_bosons);
    const double emax = std::log2(double(n_bosons) + 1.0);

    Trajectory traj;
    traj.times = t_grid;
    traj.labels = {"entropy_bits", "entropy_norm"};
    traj.columns.resize(2);
    for (double t : t_grid) {
        const RegisterState evolved = evolve_unitary(initial, zz, t);
        const double e = von_neumann_entropy(reduced_density(evolved, {{1}}));
        traj.columns[0].push_back(e);
        traj.columns[1].push_back(e / emax);
    }
    traj.validate();
    return traj;
}

}  // namespace boseq
