#include "qreplica/linalg.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <string>

#include "qreplica/errors.hpp"

namespace qreplica {

namespace {

std::size_t initial_max_dim() {
    if (const char* env = std::getenv("QREPLICA_MAX_DIM"); env != nullptr && *env != '\0') {
        char* end = nullptr;
        const unsigned long long parsed = std::strtoull(env, &end, 10);
        if (end != env && *end == '\0' && parsed > 0) {
            return static_cast<std::size_t>(parsed);
        }
    }
    return kDefaultMaxDim;
}

std::atomic<std::size_t>& max_dim_storage() {
    static std::atomic<std::size_t> value{initial_max_dim()};
    return value;
}

bool all_finite(std::span<const Complex> values) {
    return std::all_of(values.begin(), values.end(),
                       [](const Complex& z) { return std::isfinite(z.real()) && std::isfinite(z.imag()); });
}

double squared_norm(std::span<const Complex> values) {
    double sum = 0.0;
    for (const auto& z : values) {
        sum += std::norm(z);
    }
    return sum;
}

void check_operator_capacity(std::size_t dim) {
    if (dim > max_dim() || dim > kMaxOperatorEntries / std::max<std::size_t>(dim, 1)) {
        throw CapacityError("operator dimension " + std::to_string(dim) + " exceeds dense capacity");
    }
}

}  // namespace

std::size_t max_dim() { return max_dim_storage().load(std::memory_order_relaxed); }

void set_max_dim(std::size_t dim) {
    if (dim == 0) {
        throw ContractError("max_dim must be positive");
    }
    max_dim_storage().store(dim, std::memory_order_relaxed);
}

std::size_t checked_dim_product(std::size_t a, std::size_t b) {
    if (a != 0 && b > std::numeric_limits<std::size_t>::max() / a) {
        throw CapacityError("dimension product overflows");
    }
    const std::size_t product = a * b;
    if (product > max_dim()) {
        throw CapacityError("dimension " + std::to_string(product) + " exceeds MAX_DIM " + std::to_string(max_dim()));
    }
    return product;
}

// ---------------------------------------------------------------------------
// StateVector

StateVector::StateVector(std::vector<Complex> amps) : amps_(std::move(amps)) {
    if (amps_.empty()) {
        throw ContractError("state dimension must be at least 1");
    }
    if (amps_.size() > max_dim()) {
        throw CapacityError("state dimension " + std::to_string(amps_.size()) + " exceeds MAX_DIM");
    }
    if (!all_finite(amps_)) {
        throw ContractError("state has non-finite amplitude");
    }
    const double n = std::sqrt(squared_norm(amps_));
    if (std::abs(n - 1.0) > kNormTol) {
        throw ContractError("state is not normalized (norm " + std::to_string(n) + ")");
    }
}

StateVector StateVector::basis(std::size_t dim, std::size_t index) {
    if (index >= dim) {
        throw ContractError("basis index " + std::to_string(index) + " out of range for dim " + std::to_string(dim));
    }
    std::vector<Complex> amps(dim);
    amps[index] = 1.0;
    return StateVector(std::move(amps));
}

StateVector StateVector::normalized(std::vector<Complex> amps) {
    if (!all_finite(amps)) {
        throw ContractError("state has non-finite amplitude");
    }
    const double n = std::sqrt(squared_norm(amps));
    if (n == 0.0) {
        throw ContractError("cannot normalize the zero vector");
    }
    for (auto& z : amps) {
        z /= n;
    }
    return StateVector(std::move(amps));
}

double StateVector::norm() const { return std::sqrt(squared_norm(amps_)); }

// ---------------------------------------------------------------------------
// Operator

Operator::Operator(std::size_t dim, std::vector<Complex> entries) : dim_(dim), entries_(std::move(entries)) {
    if (dim_ == 0) {
        throw ContractError("operator dimension must be at least 1");
    }
    check_operator_capacity(dim_);
    if (entries_.size() != dim_ * dim_) {
        throw ContractError("operator entry count " + std::to_string(entries_.size()) + " does not match dim " +
                            std::to_string(dim_));
    }
    if (!all_finite(entries_)) {
        throw ContractError("operator has non-finite entry");
    }
}

Operator::Operator(std::initializer_list<std::initializer_list<Complex>> rows) : dim_(rows.size()) {
    if (dim_ == 0) {
        throw ContractError("operator dimension must be at least 1");
    }
    entries_.reserve(dim_ * dim_);
    for (const auto& row : rows) {
        if (row.size() != dim_) {
            throw ContractError("operator rows must form a square matrix");
        }
        entries_.insert(entries_.end(), row.begin(), row.end());
    }
    if (!all_finite(entries_)) {
        throw ContractError("operator has non-finite entry");
    }
}

Operator Operator::identity(std::size_t dim) {
    check_operator_capacity(dim);
    std::vector<Complex> entries(dim * dim);
    for (std::size_t i = 0; i < dim; ++i) {
        entries[i * dim + i] = 1.0;
    }
    return Operator(dim, std::move(entries));
}

double Operator::unitarity_residual() const {
    double worst = 0.0;
    for (std::size_t i = 0; i < dim_; ++i) {
        for (std::size_t j = 0; j < dim_; ++j) {
            Complex sum = 0.0;
            for (std::size_t k = 0; k < dim_; ++k) {
                sum += std::conj(entries_[k * dim_ + i]) * entries_[k * dim_ + j];
            }
            if (i == j) {
                sum -= 1.0;
            }
            worst = std::max(worst, std::abs(sum));
        }
    }
    return worst;
}

Operator Operator::adjoint() const {
    std::vector<Complex> out(entries_.size());
    for (std::size_t i = 0; i < dim_; ++i) {
        for (std::size_t j = 0; j < dim_; ++j) {
            out[j * dim_ + i] = std::conj(entries_[i * dim_ + j]);
        }
    }
    return Operator(dim_, std::move(out));
}

Operator Operator::scaled(Complex factor) const {
    std::vector<Complex> out(entries_);
    for (auto& z : out) {
        z *= factor;
    }
    return Operator(dim_, std::move(out));
}

Operator operator*(const Operator& lhs, const Operator& rhs) {
    if (lhs.dim_ != rhs.dim_) {
        throw ContractError("operator product dimension mismatch");
    }
    const std::size_t n = lhs.dim_;
    std::vector<Complex> out(n * n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t k = 0; k < n; ++k) {
            const Complex a = lhs.entries_[i * n + k];
            if (a == Complex{}) {
                continue;
            }
            for (std::size_t j = 0; j < n; ++j) {
                out[i * n + j] += a * rhs.entries_[k * n + j];
            }
        }
    }
    return Operator(n, std::move(out));
}

void require_unitary(const Operator& op, const char* what) {
    const double residual = op.unitarity_residual();
    if (residual > kUnitaryTol) {
        throw ContractError(std::string(what) + " is not unitary (residual " + std::to_string(residual) + ")");
    }
}

// ---------------------------------------------------------------------------
// Products and metrics

StateVector tensor_state(const StateVector& a, const StateVector& b) {
    const std::size_t dim = checked_dim_product(a.dim(), b.dim());
    std::vector<Complex> amps(dim);
    for (std::size_t i = 0; i < a.dim(); ++i) {
        for (std::size_t j = 0; j < b.dim(); ++j) {
            amps[i * b.dim() + j] = a[i] * b[j];
        }
    }
    return StateVector(std::move(amps));
}

Operator tensor_op(const Operator& a, const Operator& b) {
    const std::size_t dim = checked_dim_product(a.dim(), b.dim());
    check_operator_capacity(dim);
    const std::size_t nb = b.dim();
    std::vector<Complex> entries(dim * dim);
    for (std::size_t ar = 0; ar < a.dim(); ++ar) {
        for (std::size_t ac = 0; ac < a.dim(); ++ac) {
            const Complex scale = a(ar, ac);
            if (scale == Complex{}) {
                continue;
            }
            for (std::size_t br = 0; br < nb; ++br) {
                for (std::size_t bc = 0; bc < nb; ++bc) {
                    entries[(ar * nb + br) * dim + (ac * nb + bc)] = scale * b(br, bc);
                }
            }
        }
    }
    return Operator(dim, std::move(entries));
}

StateVector apply(const Operator& op, const StateVector& state) {
    if (op.dim() != state.dim()) {
        throw ContractError("apply: operator dim " + std::to_string(op.dim()) + " != state dim " +
                            std::to_string(state.dim()));
    }
    const std::size_t n = op.dim();
    std::vector<Complex> out(n);
    const auto entries = op.entries();
    for (std::size_t i = 0; i < n; ++i) {
        Complex sum = 0.0;
        for (std::size_t j = 0; j < n; ++j) {
            sum += entries[i * n + j] * state[j];
        }
        out[i] = sum;
    }
    return StateVector(std::move(out));
}

Complex inner_product(const StateVector& a, const StateVector& b) {
    if (a.dim() != b.dim()) {
        throw ContractError("inner product dimension mismatch");
    }
    Complex sum = 0.0;
    for (std::size_t i = 0; i < a.dim(); ++i) {
        sum += std::conj(a[i]) * b[i];
    }
    return sum;
}

double fidelity(const StateVector& a, const StateVector& b) { return std::norm(inner_product(a, b)); }

double unchecked_phase_distance(const Operator& a, const Operator& b) {
    if (a.dim() != b.dim()) {
        throw ContractError("operator distance dimension mismatch");
    }
    const auto ea = a.entries();
    const auto eb = b.entries();
    Complex trace = 0.0;
    for (std::size_t i = 0; i < ea.size(); ++i) {
        trace += std::conj(ea[i]) * eb[i];
    }
    const double magnitude = std::abs(trace);
    const Complex phase = magnitude > 0.0 ? trace / magnitude : Complex(1.0);
    double sum = 0.0;
    for (std::size_t i = 0; i < ea.size(); ++i) {
        sum += std::norm(ea[i] * phase - eb[i]);
    }
    return std::sqrt(sum / (2.0 * static_cast<double>(a.dim())));
}

double phase_invariant_distance(const Operator& a, const Operator& b) {
    if (a.dim() != b.dim()) {
        throw ContractError("operator distance dimension mismatch");
    }
    require_unitary(a, "distance argument");
    require_unitary(b, "distance argument");
    return unchecked_phase_distance(a, b);
}

// ---------------------------------------------------------------------------
// Random sampling

Operator haar_unitary(std::size_t dim, Rng& rng) {
    std::normal_distribution<double> gauss(0.0, 1.0);
    // Columns of a Gaussian matrix, orthonormalised in order (modified
    // Gram-Schmidt, two passes for stability).
    std::vector<std::vector<Complex>> cols(dim, std::vector<Complex>(dim));
    for (auto& col : cols) {
        for (auto& z : col) {
            const double re = gauss(rng);
            const double im = gauss(rng);
            z = Complex(re, im);
        }
    }
    for (std::size_t c = 0; c < dim; ++c) {
        for (int pass = 0; pass < 2; ++pass) {
            for (std::size_t p = 0; p < c; ++p) {
                Complex proj = 0.0;
                for (std::size_t r = 0; r < dim; ++r) {
                    proj += std::conj(cols[p][r]) * cols[c][r];
                }
                for (std::size_t r = 0; r < dim; ++r) {
                    cols[c][r] -= proj * cols[p][r];
                }
            }
        }
        const double n = std::sqrt(squared_norm(cols[c]));
        for (auto& z : cols[c]) {
            z /= n;
        }
    }
    std::vector<Complex> entries(dim * dim);
    for (std::size_t r = 0; r < dim; ++r) {
        for (std::size_t c = 0; c < dim; ++c) {
            entries[r * dim + c] = cols[c][r];
        }
    }
    return Operator(dim, std::move(entries));
}

StateVector haar_state(std::size_t dim, Rng& rng) {
    std::normal_distribution<double> gauss(0.0, 1.0);
    std::vector<Complex> amps(dim);
    for (auto& z : amps) {
        const double re = gauss(rng);
        const double im = gauss(rng);
        z = Complex(re, im);
    }
    return StateVector::normalized(std::move(amps));
}

}  // namespace qreplica
