#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <type_traits>

#include "qreplica/basis_ops.hpp"
#include "qreplica/errors.hpp"
#include "test_support.hpp"

using namespace qreplica;
using qreplica::testing::dense_mv;
using qreplica::testing::max_abs_diff;

namespace {

// sum_l |l><l| (x) U_l assembled entry by entry.
Operator projector_sum(std::span<const Operator> blocks) {
    const std::size_t n = blocks.size();
    const std::size_t m = blocks.front().dim();
    std::vector<Complex> entries(n * m * n * m);
    for (std::size_t l = 0; l < n; ++l) {
        for (std::size_t i = 0; i < m; ++i) {
            for (std::size_t j = 0; j < m; ++j) {
                entries[(l * m + i) * (n * m) + (l * m + j)] = blocks[l](i, j);
            }
        }
    }
    return Operator(n * m, std::move(entries));
}

StateVector ket(std::size_t n, std::size_t a, std::size_t m, std::size_t b) {
    return tensor_state(StateVector::basis(n, a), StateVector::basis(m, b));
}

}  // namespace

TEST_CASE("cyclic_shift") {
    CHECK(cyclic_shift(2) == (Operator{{0.0, 1.0}, {1.0, 0.0}}));
    CHECK(apply(cyclic_shift(3), StateVector::basis(3, 2))[0] == Complex(1.0));
    for (std::size_t n = 2; n <= 8; ++n) {
        Operator power = Operator::identity(n);
        for (std::size_t i = 0; i < n; ++i) {
            power = cyclic_shift(n) * power;
        }
        CHECK(power == Operator::identity(n));
    }
    CHECK_THROWS_AS(cyclic_shift(0), ContractError);
}

TEST_CASE("shift_power") {
    CHECK(shift_power(4, 0) == Operator::identity(4));
    CHECK(apply(shift_power(5, 3), StateVector::basis(5, 4))[2] == Complex(1.0));
    CHECK(shift_power(5, -2) == shift_power(5, 3));
    CHECK(shift_power(5, 12) == shift_power(5, 2));
    for (std::size_t n = 1; n <= 6; ++n) {
        Operator repeated = Operator::identity(n);
        for (std::int64_t a = 0; a < static_cast<std::int64_t>(n); ++a) {
            CHECK(shift_power(n, a) == repeated);
            repeated = cyclic_shift(n) * repeated;
            for (std::int64_t b = 0; b < static_cast<std::int64_t>(n); ++b) {
                CHECK(shift_power(n, a) * shift_power(n, b) == shift_power(n, (a + b) % static_cast<std::int64_t>(n)));
            }
        }
    }
    CHECK_THROWS_AS(shift_power(0, 1), ContractError);
}

TEST_CASE("cloner copies basis states and only basis states") {
    for (std::size_t n = 2; n <= 8; ++n) {
        const ControlledOperator c = cloner(n);
        CHECK(c.control_dim() == n);
        CHECK(c.target_dim() == n);
        for (std::size_t k = 0; k < n; ++k) {
            CHECK(fidelity(apply_controlled(c, ket(n, k, n, 0)), ket(n, k, n, k)) >= 1.0 - 1e-12);
            for (std::size_t j = 0; j < n; ++j) {
                CHECK(fidelity(apply_controlled(c, ket(n, k, n, j)), ket(n, k, n, (k + j) % n)) >= 1.0 - 1e-12);
            }
        }
    }

    SUBCASE("superposition becomes a Bell state") {
        const double r = 1.0 / std::sqrt(2.0);
        const StateVector plus({r, r});
        const StateVector out = apply_controlled(cloner(2), tensor_state(plus, StateVector::basis(2, 0)));
        CHECK(max_abs_diff(out, StateVector({r, 0.0, 0.0, r})) < 1e-15);
        // 2x2 amplitude matrix of a product state has zero determinant.
        CHECK(std::abs(out[0] * out[3] - out[1] * out[2]) == doctest::Approx(0.5));
        CHECK(fidelity(out, tensor_state(plus, plus)) == doctest::Approx(0.5));
    }

    SUBCASE("basis outputs are n orthogonal states") {
        for (std::size_t n = 2; n <= 6; ++n) {
            std::vector<StateVector> outs;
            for (std::size_t l = 0; l < n; ++l) {
                outs.push_back(apply_controlled(cloner(n), ket(n, l, n, 0)));
            }
            for (std::size_t a = 0; a < n; ++a) {
                for (std::size_t b = a + 1; b < n; ++b) {
                    CHECK(fidelity(outs[a], outs[b]) < 1e-12);
                }
            }
        }
    }
}

TEST_CASE("no-cloning boundary on Haar-random inputs") {
    Rng rng(2024);
    for (std::size_t n = 2; n <= 5; ++n) {
        const ControlledOperator c = cloner(n);
        const Operator dense = projector_sum(c.blocks());
        for (int trial = 0; trial < 200; ++trial) {
            const StateVector psi = haar_state(n, rng);
            const StateVector input = tensor_state(psi, StateVector::basis(n, 0));
            const StateVector out = apply_controlled(c, input);

            std::vector<Complex> analytic(n * n);
            for (std::size_t k = 0; k < n; ++k) {
                analytic[k * n + k] = psi[k];
            }
            CHECK(max_abs_diff(out.amps(), analytic) < 1e-12);
            CHECK(max_abs_diff(dense_mv(dense, input.amps()), analytic) < 1e-12);

            double peak = 0.0;
            for (const auto& z : psi.amps()) {
                peak = std::max(peak, std::norm(z));
            }
            if (peak < 1.0 - 1e-6) {
                CHECK(fidelity(out, tensor_state(psi, psi)) < 1.0 - 1e-6);
            }
        }
    }
}

TEST_CASE("conditional_dynamics") {
    Rng rng(17);

    SUBCASE("identity blocks act as identity") {
        const ControlledOperator d = conditional_dynamics({Operator::identity(3), Operator::identity(3)});
        for (std::size_t a = 0; a < 2; ++a) {
            for (std::size_t b = 0; b < 3; ++b) {
                CHECK(max_abs_diff(apply_controlled(d, ket(2, a, 3, b)), ket(2, a, 3, b)) == 0.0);
            }
        }
        CHECK(densify(d) == Operator::identity(6));
    }

    SUBCASE("shift powers reproduce the cloner") {
        for (std::size_t n = 1; n <= 5; ++n) {
            std::vector<Operator> blocks;
            for (std::size_t l = 0; l < n; ++l) {
                blocks.push_back(shift_power(n, static_cast<std::int64_t>(l)));
            }
            CHECK(densify(conditional_dynamics(blocks)) == densify(cloner(n)));
        }
    }

    SUBCASE("programmable action with non-orthogonal outputs") {
        const std::vector<Operator> blocks{haar_unitary(3, rng), haar_unitary(3, rng)};
        const ControlledOperator d = conditional_dynamics(blocks);
        const StateVector out = apply_controlled(d, ket(2, 1, 3, 0));
        const StateVector expected = tensor_state(StateVector::basis(2, 1), apply(blocks[1], StateVector::basis(3, 0)));
        CHECK(max_abs_diff(out, expected) < 1e-12);
        CHECK(max_abs_diff(out.amps(), dense_mv(projector_sum(blocks), ket(2, 1, 3, 0).amps())) < 1e-12);
        const double overlap =
            fidelity(apply(blocks[0], StateVector::basis(3, 0)), apply(blocks[1], StateVector::basis(3, 0)));
        CHECK(overlap > 0.0);
        CHECK(overlap < 1.0);
    }

    SUBCASE("errors") {
        CHECK_THROWS_AS(conditional_dynamics({}), ContractError);
        CHECK_THROWS_AS(conditional_dynamics({Operator::identity(2), Operator::identity(3)}), ContractError);
        CHECK_THROWS_AS(conditional_dynamics({Operator::identity(2).scaled(2.0)}), ContractError);
    }
}

TEST_CASE("apply_controlled") {
    Rng rng(23);
    CHECK(fidelity(apply_controlled(cloner(4), ket(4, 3, 4, 0)), ket(4, 3, 4, 3)) == doctest::Approx(1.0));

    SUBCASE("control factor of a product input is untouched") {
        std::vector<Operator> blocks;
        for (int l = 0; l < 3; ++l) {
            blocks.push_back(haar_unitary(2, rng));
        }
        const ControlledOperator d = conditional_dynamics(blocks);
        for (std::size_t l = 0; l < 3; ++l) {
            const StateVector target = haar_state(2, rng);
            const StateVector out = apply_controlled(d, tensor_state(StateVector::basis(3, l), target));
            CHECK(max_abs_diff(out, tensor_state(StateVector::basis(3, l), apply(blocks[l], target))) < 1e-12);
        }
    }

    SUBCASE("structured equals dense for n * m <= 64") {
        for (int trial = 0; trial < 60; ++trial) {
            const std::size_t n = 1 + static_cast<std::size_t>(trial % 8);
            const std::size_t m = 1 + static_cast<std::size_t>((trial / 8) % 8);
            std::vector<Operator> blocks;
            for (std::size_t l = 0; l < n; ++l) {
                blocks.push_back(haar_unitary(m, rng));
            }
            const ControlledOperator d = conditional_dynamics(blocks);
            const StateVector joint = haar_state(n * m, rng);
            const StateVector structured = apply_controlled(d, joint);
            CHECK(max_abs_diff(structured, apply(densify(d), joint)) < 1e-12);
            CHECK(max_abs_diff(structured.amps(), dense_mv(projector_sum(blocks), joint.amps())) < 1e-12);
        }
    }

    CHECK_THROWS_AS(apply_controlled(cloner(3), StateVector::basis(8, 0)), ContractError);
}

TEST_CASE("densify") {
    const Operator cnot{{1.0, 0.0, 0.0, 0.0}, {0.0, 1.0, 0.0, 0.0}, {0.0, 0.0, 0.0, 1.0}, {0.0, 0.0, 1.0, 0.0}};
    CHECK(densify(cloner(2)) == cnot);

    Rng rng(29);
    std::vector<Operator> blocks;
    for (int l = 0; l < 4; ++l) {
        blocks.push_back(haar_unitary(3, rng));
    }
    CHECK(densify(conditional_dynamics(blocks)).unitarity_residual() < 1e-12);
}

TEST_CASE("program count is fixed by construction") {
    static_assert(!std::is_default_constructible_v<ControlledOperator>);
    static_assert(!std::is_constructible_v<ControlledOperator, std::vector<Operator>>);
    const ControlledOperator d = conditional_dynamics({Operator::identity(2), Operator::identity(2), Operator::identity(2)});
    CHECK(d.control_dim() == d.blocks().size());
    CHECK(d.joint_dim() == 6);
}
