#pragma once

#include <vector>

#include "boseq/density.hpp"
#include "boseq/dynamics.hpp"
#include "boseq/spin.hpp"

namespace boseq {

struct BipartitionSpec {
    std::vector<int> keep_sites;  // 1-based, ordered

    void validate(int n_sites) const;
    std::vector<int> traced_sites(int n_sites) const;
};

/// Partial trace over the complement of keep_sites, by index grouping on the
/// site-major layout (no outer product is formed).
DensityMatrix reduced_density(const RegisterState& state, const BipartitionSpec& spec);

/// -sum lambda log2 lambda; eigenvalues below 1e-12 contribute zero, negatives
/// above -1e-8 are clipped, anything lower throws NegativeEigenvalueError.
double von_neumann_entropy(const DensityMatrix& rho);

/// Site-1 entropy of e^{-i Sz1 Sz2 t} |1/sqrt2,1/sqrt2>>^{x2}, raw bits and
/// normalized by log2(N+1). Columns: "entropy_bits", "entropy_norm".
Trajectory entropy_trajectory(int n_bosons, const std::vector<double>& t_grid);

}  // namespace boseq
