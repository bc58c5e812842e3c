#pragma once

#include <complex>
#include <cstddef>
#include <initializer_list>
#include <random>
#include <span>
#include <vector>

namespace qreplica {

using Complex = std::complex<double>;
using Rng = std::mt19937_64;

// Normalization slack for StateVector, and max-entry slack of A^dagger A - I.
inline constexpr double kNormTol = 1e-10;
inline constexpr double kUnitaryTol = 1e-10;

inline constexpr std::size_t kDefaultMaxDim = std::size_t{1} << 20;
// Hard ceiling on dense operator storage (dim * dim entries), independent of
// the state limit.
inline constexpr std::size_t kMaxOperatorEntries = std::size_t{1} << 26;

/// Largest dense state dimension. Initialised from QREPLICA_MAX_DIM on first
/// use, otherwise kDefaultMaxDim.
std::size_t max_dim();
void set_max_dim(std::size_t dim);

/// a * b, throwing CapacityError on overflow or when the product exceeds
/// max_dim().
std::size_t checked_dim_product(std::size_t a, std::size_t b);

/// Normalized complex amplitude vector. Construction fails unless every
/// amplitude is finite and the 2-norm is within kNormTol of one.
class StateVector {
public:
    explicit StateVector(std::vector<Complex> amps);

    static StateVector basis(std::size_t dim, std::size_t index);
    /// Rescales to unit norm; rejects the zero vector.
    static StateVector normalized(std::vector<Complex> amps);

    std::size_t dim() const { return amps_.size(); }
    std::span<const Complex> amps() const { return amps_; }
    const Complex& operator[](std::size_t i) const { return amps_[i]; }
    double norm() const;

private:
    std::vector<Complex> amps_;
};

/// Dense square complex matrix, row-major. Unitarity is certified on demand
/// through unitarity_residual() rather than stored.
class Operator {
public:
    Operator(std::size_t dim, std::vector<Complex> entries);
    Operator(std::initializer_list<std::initializer_list<Complex>> rows);

    static Operator identity(std::size_t dim);

    std::size_t dim() const { return dim_; }
    std::span<const Complex> entries() const { return entries_; }
    const Complex& operator()(std::size_t row, std::size_t col) const { return entries_[row * dim_ + col]; }

    /// max_ij |(A^dagger A - I)_ij|
    double unitarity_residual() const;
    bool is_unitary(double tol = kUnitaryTol) const { return unitarity_residual() <= tol; }

    Operator adjoint() const;
    Operator scaled(Complex factor) const;

    friend Operator operator*(const Operator& lhs, const Operator& rhs);
    friend bool operator==(const Operator&, const Operator&) = default;

private:
    std::size_t dim_;
    std::vector<Complex> entries_;
};

/// Throws ContractError naming `what` if `op` fails the unitarity check.
void require_unitary(const Operator& op, const char* what);

/// a (x) b with the first factor as the most significant index.
StateVector tensor_state(const StateVector& a, const StateVector& b);
/// Kronecker product, ordered consistently with tensor_state.
Operator tensor_op(const Operator& a, const Operator& b);

/// Matrix-vector product. The result must come out normalized, which holds
/// for every unitary `op`.
StateVector apply(const Operator& op, const StateVector& state);

/// <a|b>
Complex inner_product(const StateVector& a, const StateVector& b);
/// |<a|b>|^2
double fidelity(const StateVector& a, const StateVector& b);

/// sqrt(max(0, 1 - |tr(A^dagger B)| / dim)); zero exactly on phase-equivalent
/// pairs. Both arguments must be unitary.
double phase_invariant_distance(const Operator& a, const Operator& b);

/// phase_invariant_distance without the unitarity checks, for hot loops.
/// Evaluated as ||A - e^{i phi} B||_F / sqrt(2 dim) with phi = arg tr(A^dagger B),
/// which equals the trace form for unitaries and keeps full relative precision
/// near zero.
double unchecked_phase_distance(const Operator& a, const Operator& b);

/// Haar-distributed unitary: Gram-Schmidt QR of a complex Gaussian matrix,
/// which leaves R with a positive real diagonal.
Operator haar_unitary(std::size_t dim, Rng& rng);
/// Normalized complex Gaussian vector, uniform on the unit sphere.
StateVector haar_state(std::size_t dim, Rng& rng);

}  // namespace qreplica
