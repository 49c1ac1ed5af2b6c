#include <doctest.h>

#include <cmath>
#include <map>

#include "su11/algebra.hpp"

using namespace su11;

namespace {
const Complex kI(0.0, 1.0);
}

TEST_CASE("exotic generators are Hermitian") {
    const auto space = make_space(3, 5);
    const ExoticRealization ex = exotic_realization(space, 0, 1, 2);
    CHECK(max_abs(ex.kx - ex.kx.adjoint()) == 0.0);
    CHECK(max_abs(ex.ky - ex.ky.adjoint()) == 0.0);
    CHECK(max_abs(ex.kz - ex.kz.adjoint()) == 0.0);
    CHECK(ex.safe_bound == 2);
}

TEST_CASE("exotic closure and structure constants") {
    const auto space = make_space(3, 5);
    const ExoticRealization ex = exotic_realization(space, 0, 1, 2);
    CHECK(ex.closure_residual < 1e-9);

    // Hand-derived commutators: [Kx,Ky] = a2^dag a1 - a1^dag a2 = -i Kz, and cyclic.
    const int b = ex.safe_bound;
    CHECK(max_abs_restricted(commutator(ex.kx, ex.ky) + kI * ex.kz, b) < 1e-12);
    CHECK(max_abs_restricted(commutator(ex.ky, ex.kz) - kI * ex.kx, b) < 1e-12);
    CHECK(max_abs_restricted(commutator(ex.kz, ex.kx) - kI * ex.ky, b) < 1e-12);
    CHECK(std::abs(ex.structure[0][1][2] + kI) < 1e-10);
    CHECK(std::abs(ex.structure[1][2][0] - kI) < 1e-10);
    CHECK(std::abs(ex.structure[2][0][1] - kI) < 1e-10);
    CHECK(std::abs(ex.structure[0][1][0]) < 1e-10);
    CHECK(std::abs(ex.structure[1][0][2] - kI) < 1e-10);

    CHECK(closure_residuals(ex.realization, b).max() < 1e-9);
    CHECK_THROWS_AS(exotic_realization(make_space(2, 5), 0, 1, 1), DomainError);
}

TEST_CASE("diagonalizer maps Kz to the photon difference") {
    const auto space = make_space(3, 6);
    const ExoticRealization ex = exotic_realization(space, 0, 1, 2);
    const LinearOperator u = exotic_diagonalizer(space, 0, 1);
    const LinearOperator target = number_operator(space, 1) - number_operator(space, 0);
    CHECK(max_abs_restricted(u * ex.kz * u.adjoint() - target, 3) < 1e-9);
}

TEST_CASE("exotic Casimir spectrum") {
    const auto space = make_space(3, 6);
    const ExoticRealization ex = exotic_realization(space, 0, 1, 2);
    const int bound = 2;
    const ExoticSpectrum spec = exotic_casimir_spectrum(ex, bound);

    // Combinatorial oracle for the block and the rotated Kz multiplicities.
    std::map<int, int> expected;
    std::size_t count = 0;
    for (int n1 = 0; n1 <= bound; ++n1) {
        for (int n2 = 0; n1 + n2 <= bound; ++n2) {
            for (int nb = 0; n1 + n2 + nb <= bound; ++nb) {
                ++expected[n2 - n1];
                ++count;
            }
        }
    }
    CHECK(spec.block_dimension == count);
    CHECK(spec.block_dimension == 10);
    std::map<int, int> seen;
    for (double e : spec.rotated_kz_eigenvalues) {
        const long rounded = std::lround(e);
        CHECK(std::abs(e - static_cast<double>(rounded)) < 1e-9);
        ++seen[static_cast<int>(rounded)];
    }
    CHECK(seen == expected);
    CHECK(seen.begin()->first == -2);
    CHECK(seen.rbegin()->first == 2);
    CHECK(spec.casimir_eigenvalues.size() == count);
    CHECK(spec.max_imaginary < 1e-9);
    CHECK(spec.rotated_casimir_deviation < 1e-9);
}
