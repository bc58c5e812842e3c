#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>

#include "qreplica/basis_ops.hpp"
#include "qreplica/errors.hpp"
#include "qreplica/linalg.hpp"
#include "test_support.hpp"

using namespace qreplica;
using qreplica::testing::max_abs_diff;

TEST_CASE("tensor_state orders the first factor as the slow index") {
    const StateVector s = tensor_state(StateVector::basis(2, 0), StateVector::basis(2, 1));
    CHECK(s.dim() == 4);
    CHECK(s[1] == Complex(1.0));
    CHECK(std::abs(s[0]) + std::abs(s[2]) + std::abs(s[3]) == 0.0);

    const double r = 1.0 / std::sqrt(2.0);
    const StateVector plus({r, r});
    const StateVector sup = tensor_state(plus, StateVector::basis(2, 0));
    CHECK(max_abs_diff(sup, StateVector({r, 0.0, r, 0.0})) < 1e-15);

    const StateVector nine = tensor_state(StateVector::basis(3, 2), StateVector::basis(3, 1));
    CHECK(nine.dim() == 9);
    CHECK(nine[7] == Complex(1.0));
}

TEST_CASE("tensor_op basics") {
    CHECK(tensor_op(Operator::identity(2), Operator::identity(2)) == Operator::identity(4));

    const Operator x_i = tensor_op(qreplica::testing::pauli_x(), Operator::identity(2));
    const StateVector out = apply(x_i, StateVector::basis(4, 0));
    CHECK(out[2] == Complex(1.0));  // |00> -> |10>
}

TEST_CASE("mixed-product law against an index-formula oracle") {
    Rng rng(11);
    for (int trial = 0; trial < 20; ++trial) {
        const Operator a = haar_unitary(3, rng);
        const Operator b = haar_unitary(3, rng);
        const StateVector x = haar_state(3, rng);
        const StateVector y = haar_state(3, rng);

        // (A (x) B)_{(i,j),(k,l)} = A_ik B_jl applied to x_k y_l
        std::vector<Complex> expected(9);
        for (std::size_t i = 0; i < 3; ++i) {
            for (std::size_t j = 0; j < 3; ++j) {
                for (std::size_t k = 0; k < 3; ++k) {
                    for (std::size_t l = 0; l < 3; ++l) {
                        expected[i * 3 + j] += a(i, k) * b(j, l) * x[k] * y[l];
                    }
                }
            }
        }
        const StateVector lhs = apply(tensor_op(a, b), tensor_state(x, y));
        const StateVector rhs = tensor_state(apply(a, x), apply(b, y));
        CHECK(max_abs_diff(lhs.amps(), expected) < 1e-12);
        CHECK(max_abs_diff(lhs, rhs) < 1e-12);
    }
}

TEST_CASE("apply") {
    Rng rng(3);
    const StateVector psi = haar_state(5, rng);
    CHECK(max_abs_diff(apply(Operator::identity(5), psi), psi) == 0.0);
    CHECK(apply(cyclic_shift(3), StateVector::basis(3, 2))[0] == Complex(1.0));

    SUBCASE("dimension mismatch") {
        CHECK_THROWS_AS(apply(Operator::identity(3), psi), ContractError);
    }
    SUBCASE("non-unitary output is rejected") {
        const Operator scale = Operator::identity(5).scaled(2.0);
        CHECK_THROWS_AS(apply(scale, psi), ContractError);
    }
}

TEST_CASE("unitaries preserve the norm") {
    Rng rng(7);
    for (std::size_t dim = 2; dim <= 8; ++dim) {
        for (int trial = 0; trial < 100; ++trial) {
            const Operator u = haar_unitary(dim, rng);
            REQUIRE(u.is_unitary());
            const StateVector out = apply(u, haar_state(dim, rng));
            CHECK(std::abs(out.norm() - 1.0) < 1e-12);
        }
    }
}

TEST_CASE("fidelity") {
    Rng rng(5);
    const StateVector psi = haar_state(4, rng);
    CHECK(fidelity(psi, psi) == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(fidelity(StateVector::basis(2, 0), StateVector::basis(2, 1)) == 0.0);
    const double r = 1.0 / std::sqrt(2.0);
    CHECK(fidelity(StateVector({r, r}), StateVector::basis(2, 0)) == doctest::Approx(0.5).epsilon(1e-15));
    CHECK_THROWS_AS(fidelity(psi, StateVector::basis(2, 0)), ContractError);

    for (int trial = 0; trial < 200; ++trial) {
        const std::size_t dim = 2 + static_cast<std::size_t>(trial % 7);
        const StateVector a = haar_state(dim, rng);
        const StateVector b = haar_state(dim, rng);
        const double ab = fidelity(a, b);
        CHECK(ab == doctest::Approx(fidelity(b, a)).epsilon(1e-14));
        CHECK(ab >= 0.0);
        CHECK(ab <= 1.0 + 1e-12);
    }
}

TEST_CASE("phase_invariant_distance") {
    Rng rng(9);
    const Operator u = haar_unitary(3, rng);
    CHECK(phase_invariant_distance(u, u) == 0.0);
    for (double phi : {0.3, 1.0, std::numbers::pi, -2.5}) {
        CHECK(phase_invariant_distance(u, u.scaled(std::polar(1.0, phi))) < 1e-14);
    }
    CHECK(phase_invariant_distance(Operator::identity(2), qreplica::testing::pauli_x()) ==
          doctest::Approx(1.0).epsilon(1e-15));
    CHECK_THROWS_AS(phase_invariant_distance(u, Operator::identity(3).scaled(0.5)), ContractError);

    SUBCASE("agrees with the trace formula") {
        for (int trial = 0; trial < 50; ++trial) {
            const Operator a = haar_unitary(4, rng);
            const Operator b = haar_unitary(4, rng);
            Complex trace = 0.0;
            for (std::size_t i = 0; i < 16; ++i) {
                trace += std::conj(a.entries()[i]) * b.entries()[i];
            }
            const double formula = std::sqrt(std::max(0.0, 1.0 - std::abs(trace) / 4.0));
            CHECK(phase_invariant_distance(a, b) == doctest::Approx(formula).epsilon(1e-12));
        }
    }

    SUBCASE("triangle sanity") {
        for (int trial = 0; trial < 200; ++trial) {
            const std::size_t dim = 2 + static_cast<std::size_t>(trial % 4);
            const Operator a = haar_unitary(dim, rng);
            const Operator b = haar_unitary(dim, rng);
            const Operator c = haar_unitary(dim, rng);
            CHECK(phase_invariant_distance(a, c) <=
                  phase_invariant_distance(a, b) + phase_invariant_distance(b, c) + 1e-9);
        }
    }
}

TEST_CASE("state and operator validation") {
    CHECK_THROWS_AS(StateVector(std::vector<Complex>{}), ContractError);
    CHECK_THROWS_AS(StateVector({1.0, 1.0}), ContractError);
    CHECK_THROWS_AS(StateVector({std::nan(""), 0.0}), ContractError);
    CHECK_THROWS_AS(StateVector::normalized({0.0, 0.0}), ContractError);
    CHECK_THROWS_AS(StateVector::basis(2, 2), ContractError);
    CHECK_THROWS_AS(Operator(2, std::vector<Complex>(3)), ContractError);
    CHECK_THROWS_AS(Operator(0, {}), ContractError);
    CHECK_THROWS_AS((Operator{{1.0, 0.0}, {0.0}}), ContractError);
    CHECK_FALSE(Operator::identity(2).scaled(1.1).is_unitary());
}

TEST_CASE("capacity limit") {
    const std::size_t saved = max_dim();
    set_max_dim(8);
    CHECK_THROWS_AS(tensor_state(StateVector::basis(4, 0), StateVector::basis(4, 0)), CapacityError);
    CHECK_NOTHROW(tensor_state(StateVector::basis(2, 0), StateVector::basis(4, 0)));
    CHECK_THROWS_AS(tensor_op(Operator::identity(3), Operator::identity(3)), CapacityError);
    CHECK_THROWS_AS(checked_dim_product(~std::size_t{0}, 2), CapacityError);
    set_max_dim(saved);
    CHECK_THROWS_AS(set_max_dim(0), ContractError);
}

TEST_CASE("haar sampling is reproducible") {
    Rng a(42);
    Rng b(42);
    CHECK(haar_unitary(4, a) == haar_unitary(4, b));
    Rng c(42);
    CHECK(haar_unitary(6, c).unitarity_residual() < 1e-13);
}
