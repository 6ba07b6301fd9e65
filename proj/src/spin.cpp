#include "boseq/spin.hpp"

#include <cmath>
#include <mutex>
#include <optional>

#include "boseq/kernels.hpp"

namespace boseq {

char axis_name(Axis a) {
    switch (a) {
        case Axis::X: return 'x';
        case Axis::Y: return 'y';
        case Axis::Z: return 'z';
    }
    return '?';
}

Axis axis_from_char(char c) {
    switch (c) {
        case 'x':
        case 'X': return Axis::X;
        case 'y':
        case 'Y': return Axis::Y;
        case 'z':
        case 'Z': return Axis::Z;
    }
    throw ArgumentError(std::string("unknown axis '") + c + "'");
}

double binomial(int n, int k) {
    if (k < 0 || k > n) return 0.0;
    double r = 1.0;
    for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
    return r;
}

QubitAmplitudes coherent_qubit_state(cplx alpha, cplx beta, int n_bosons) {
    if (n_bosons < 1) throw ArgumentError("n_bosons must be >= 1");
    const double nrm = std::norm(alpha) + std::norm(beta);
    if (std::abs(nrm - 1.0) >= kInputNormTol)
        throw NormalizationError("|alpha|^2 + |beta|^2 = " + std::to_string(nrm) + ", expected 1");
    QubitAmplitudes q;
    q.n_bosons = n_bosons;
    q.amps.resize(n_bosons + 1);
    for (int k = 0; k <= n_bosons; ++k)
        q.amps[k] = std::sqrt(binomial(n_bosons, k)) * std::pow(alpha, k) *
                    std::pow(beta, n_bosons - k);
    // pow(0,0) conventions leave this exactly normalized already; renormalize the
    // residual rounding anyway
    q.amps /= std::sqrt(kernels::sqnorm(q.amps.data(), q.amps.size()));
    return q;
}

double RegisterState::norm() const { return std::sqrt(kernels::sqnorm(amps.data(), amps.size())); }

RegisterState RegisterState::product(const std::vector<QubitAmplitudes>& qubits) {
    if (qubits.empty()) throw ArgumentError("empty register");
    RegisterState s;
    s.n_bosons = qubits.front().n_bosons;
    s.n_sites = static_cast<int>(qubits.size());
    for (const auto& q : qubits)
        if (q.n_bosons != s.n_bosons) throw DimensionError("mixed boson numbers in register");
    const Eigen::Index d = s.n_bosons + 1;
    Eigen::Index dim = 1;
    for (int i = 0; i < s.n_sites; ++i) dim *= d;
    check_dim_cap(static_cast<std::size_t>(dim));
    s.amps = qubits.front().amps;
    for (std::size_t i = 1; i < qubits.size(); ++i) {
        Eigen::VectorXcd next(s.amps.size() * d);
        for (Eigen::Index j = 0; j < s.amps.size(); ++j)
            next.segment(j * d, d) = s.amps[j] * qubits[i].amps;
        s.amps = std::move(next);
    }
    return s;
}

double fidelity(const Eigen::VectorXcd& a, const Eigen::VectorXcd& b) {
    if (a.size() != b.size()) throw DimensionError("fidelity: size mismatch");
    return std::abs(kernels::cdot(a.data(), b.data(), a.size()));
}

double fidelity(const RegisterState& a, const RegisterState& b) { return fidelity(a.amps, b.amps); }

struct Operator::Impl {
    Eigen::MatrixXcd mat;
    bool hermitian_hint = false;
    bool diagonal = false;
    std::once_flag eig_once;
    std::optional<Eig> eig;
};

Operator::Operator(Eigen::MatrixXcd m, bool hermitian_hint) : impl_(std::make_shared<Impl>()) {
    if (m.rows() != m.cols()) throw DimensionError("operator must be square");
    impl_->mat = std::move(m);
    impl_->hermitian_hint = hermitian_hint;
    const auto& a = impl_->mat;
    if (hermitian_hint) {
        const double dev = (a - a.adjoint()).cwiseAbs().maxCoeff();
        if (dev >= kInternalTol)
            throw NonHermitianError("hermitian_hint set but ||A - A^dag||_max = " +
                                    std::to_string(dev));
    }
    impl_->diagonal = a.cwiseAbs().sum() - a.diagonal().cwiseAbs().sum() == 0.0;
}

Eigen::Index Operator::dim() const { return impl_ ? impl_->mat.rows() : 0; }
const Eigen::MatrixXcd& Operator::matrix() const {
    if (!impl_) throw ArgumentError("empty operator");
    return impl_->mat;
}
bool Operator::hermitian_hint() const { return impl_ && impl_->hermitian_hint; }
bool Operator::is_diagonal() const { return impl_ && impl_->diagonal; }

const Operator::Eig& Operator::eig() const {
    if (!impl_) throw ArgumentError("empty operator");
    std::call_once(impl_->eig_once, [this] {
        const auto& a = impl_->mat;
        const double dev = (a - a.adjoint()).cwiseAbs().maxCoeff();
        if (dev > 1e-10)
            throw NonHermitianError("eigendecomposition requires Hermitian operator, dev = " +
                                    std::to_string(dev));
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(a);
        impl_->eig = Eig{solver.eigenvalues(), solver.eigenvectors()};
    });
    if (!impl_->eig) throw NonHermitianError("eigendecomposition failed previously");
    return *impl_->eig;
}

Operator Operator::scaled(cplx factor) const {
    const bool herm = hermitian_hint() && factor.imag() == 0.0;
    return Operator(matrix() * factor, herm);
}

Operator identity_operator(Eigen::Index dim) {
    return Operator(Eigen::MatrixXcd::Identity(dim, dim), true);
}

Operator spin_operator(Axis axis, int n_bosons) {
    if (n_bosons < 1) throw ArgumentError("n_bosons must be >= 1");
    const int d = n_bosons + 1;
    Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(d, d);
    switch (axis) {
        case Axis::Z:
            for (int k = 0; k < d; ++k) m(k, k) = 2.0 * k - n_bosons;
            break;
        case Axis::X:
            // a†b + b†a on |k> = |k bosons in a>
            for (int k = 0; k + 1 < d; ++k) {
                const double amp = std::sqrt(double(k + 1) * (n_bosons - k));
                m(k + 1, k) = amp;
                m(k, k + 1) = amp;
            }
            break;
        case Axis::Y:
            for (int k = 0; k + 1 < d; ++k) {
                const double amp = std::sqrt(double(k + 1) * (n_bosons - k));
                m(k + 1, k) = cplx(0, -amp);
                m(k, k + 1) = cplx(0, amp);
            }
            break;
    }
    return Operator(std::move(m), true);
}

namespace {
Eigen::MatrixXcd kron(const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b) {
    Eigen::MatrixXcd out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index i = 0; i < a.rows(); ++i)
        for (Eigen::Index j = 0; j < a.cols(); ++j)
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    return out;
}
}  // namespace

Operator embed(const Operator& op, int site, int n_sites, int n_bosons) {
    const Eigen::Index d = n_bosons + 1;
    if (op.dim() != d)
        throw DimensionError("site operator dim " + std::to_string(op.dim()) +
                             " does not match N+1 = " + std::to_string(d));
    if (site < 1 || site > n_sites)
        throw DimensionError("site " + std::to_string(site) + " out of range 1.." +
                             std::to_string(n_sites));
    Eigen::Index left = 1, right = 1;
    for (int s = 1; s < site; ++s) left *= d;
    for (int s = site + 1; s <= n_sites; ++s) right *= d;
    check_dim_cap(static_cast<std::size_t>(left * d * right));
    Eigen::MatrixXcd m = kron(Eigen::MatrixXcd::Identity(left, left),
                              kron(op.matrix(), Eigen::MatrixXcd::Identity(right, right)));
    return Operator(std::move(m), op.hermitian_hint());
}

Operator operator_product(const std::vector<AxisSite>& factors, int n_sites, int n_bosons) {
    for (std::size_t i = 0; i < factors.size(); ++i)
        for (std::size_t j = i + 1; j < factors.size(); ++j)
            if (factors[i].site == factors[j].site)
                throw DuplicateSiteError("site " + std::to_string(factors[i].site) +
                                         " repeated within a product term");
    const Eigen::Index d = n_bosons + 1;
    Eigen::Index dim = 1;
    for (int s = 0; s < n_sites; ++s) dim *= d;
    check_dim_cap(static_cast<std::size_t>(dim));
    Eigen::MatrixXcd m = Eigen::MatrixXcd::Identity(dim, dim);
    for (const auto& f : factors) {
        if (f.site < 1 || f.site > n_sites)
            throw DimensionError("site " + std::to_string(f.site) + " out of range");
        m = m * embed(spin_operator(f.axis, n_bosons), f.site, n_sites, n_bosons).matrix();
    }
    // distinct sites and real entries per factor keep the product Hermitian
    const bool herm = (m - m.adjoint()).cwiseAbs().maxCoeff() < kInternalTol;
    return Operator(std::move(m), herm);
}

Operator operator_sum(const std::vector<std::pair<double, Operator>>& terms) {
    if (terms.empty()) throw ArgumentError("empty operator sum");
    const Eigen::Index dim = terms.front().second.dim();
    Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(dim, dim);
    bool herm = true;
    for (const auto& [coeff, op] : terms) {
        if (!std::isfinite(coeff)) throw ArgumentError("non-finite coefficient");
        if (op.dim() != dim) throw DimensionError("operator_sum: dimension mismatch");
        m += coeff * op.matrix();
        herm = herm && op.hermitian_hint();
    }
    return Operator(std::move(m), herm);
}

cplx expectation(const RegisterState& state, const Operator& op) {
    if (op.dim() != state.dim()) throw DimensionError("expectation: dimension mismatch");
    const Eigen::VectorXcd hpsi = op.matrix() * state.amps;
    return kernels::cdot(state.amps.data(), hpsi.data(), hpsi.size());
}

double spin_variance(const RegisterState& state, Axis axis, int site) {
    const Operator s = embed(spin_operator(axis, state.n_bosons), site, state.n_sites,
                             state.n_bosons);
    const Eigen::VectorXcd spsi = s.matrix() * state.amps;
    const double mean = kernels::cdot(state.amps.data(), spsi.data(), spsi.size()).real();
    const double second = kernels::sqnorm(spsi.data(), spsi.size());
    const double n = state.n_bosons;
    return (second - mean * mean) / (n * n);
}

std::pair<RegisterState, double> project_site(const RegisterState& state, int site, int k) {
    if (site < 1 || site > state.n_sites) throw DimensionError("site out of range");
    if (k < 0 || k > state.n_bosons) throw ArgumentError("outcome k out of range 0..N");
    const Eigen::Index d = state.site_dim();
    Eigen::Index stride = 1;
    for (int s = site + 1; s <= state.n_sites; ++s) stride *= d;
    RegisterState out = state;
    for (Eigen::Index i = 0; i < out.dim(); ++i)
        if ((i / stride) % d != k) out.amps[i] = 0.0;
    const double prob = kernels::sqnorm(out.amps.data(), out.amps.size());
    if (prob < 1e-14)
        throw ZeroProbabilityError("outcome k=" + std::to_string(k) + " on site " +
                                   std::to_string(site) + " has vanishing probability");
    out.amps /= std::sqrt(prob);
    return {std::move(out), prob};
}

}  // namespace boseq
