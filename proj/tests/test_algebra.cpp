#include <doctest.h>

#include <cmath>
#include <numeric>

#include "su11/algebra.hpp"

using namespace su11;

namespace {

const double kInvSqrt2 = 1.0 / std::sqrt(2.0);

std::vector<int> iota_modes(int first, int count) {
    std::vector<int> m(static_cast<std::size_t>(count));
    std::iota(m.begin(), m.end(), first);
    return m;
}

// (A^dag)^n |0> / sqrt(n!) by repeated sparse application.
StateVector ladder_oracle(const SpacePtr& space, const PseudoBoson& pseudo, int n) {
    const LinearOperator up = pseudo_creation(space, pseudo);
    StateVector psi = StateVector::vacuum(space);
    for (int j = 1; j <= n; ++j) {
        psi = apply(up, psi);
        psi = StateVector(space, psi.amplitudes() / std::sqrt(static_cast<double>(j)));
    }
    return psi;
}

StateVector from_terms(const SpacePtr& space,
                       const std::vector<std::pair<Occupations, Complex>>& terms) {
    DenseVector v = DenseVector::Zero(static_cast<Eigen::Index>(space->dimension()));
    for (const auto& [occ, amp] : terms) {
        v[static_cast<Eigen::Index>(*space->index_of(occ))] += amp;
    }
    return {space, v};
}

double distance(const StateVector& x, const StateVector& y) {
    return (x.amplitudes() - y.amplitudes()).cwiseAbs().maxCoeff();
}

}  // namespace

TEST_CASE("irrep labels from occupations") {
    const WeightLabel vac = irrep_labels_from_occupations(0, 0);
    CHECK(vac.irrep.two_k == 1);
    CHECK(vac.two_mu == 1);
    CHECK(vac.irrep.branch == Branch::APlus);

    const WeightLabel x = irrep_labels_from_occupations(3, 1);
    CHECK(x.k() == 1.5);
    CHECK(x.mu() == 2.5);
    CHECK(x.irrep.branch == Branch::APlus);

    const WeightLabel y = irrep_labels_from_occupations(1, 3);
    CHECK(y.k() == 1.5);
    CHECK(y.mu() == 2.5);
    CHECK(y.irrep.branch == Branch::BPlus);

    for (int na = 0; na < 6; ++na) {
        for (int nb = 0; nb < 6; ++nb) {
            const WeightLabel l = irrep_labels_from_occupations(na, nb);
            CHECK_NOTHROW(validate(l));
            CHECK(pseudo_occupations(l) == std::pair{na, nb});
        }
    }
    CHECK(to_string(Branch::APlus) == "A");
    CHECK(to_string(Branch::BPlus) == "B");
}

TEST_CASE("label validation") {
    CHECK_THROWS_AS(validate(WeightLabel{IrrepLabel{0, Branch::APlus}, 1}), DomainError);
    CHECK_THROWS_AS(validate(WeightLabel{IrrepLabel{3, Branch::APlus}, 1}), DomainError);
    CHECK_THROWS_AS(validate(WeightLabel{IrrepLabel{3, Branch::APlus}, 4}), DomainError);
    CHECK_THROWS_AS(validate(WeightLabel{IrrepLabel{1, Branch::BPlus}, 3}), DomainError);
    CHECK_NOTHROW(validate(WeightLabel{IrrepLabel{2, Branch::BPlus}, 4}));
}

TEST_CASE("pseudo-boson chain coefficients") {
    const auto r2 = pseudo_boson_chain(iota_modes(0, 2));
    CHECK(std::abs(r2.coefficients[0] - kInvSqrt2) < 1e-15);
    CHECK(std::abs(r2.coefficients[1] + kInvSqrt2) < 1e-15);

    const auto r3 = pseudo_boson_chain(iota_modes(0, 3));
    CHECK(std::abs(r3.coefficients[0] - kInvSqrt2) < 1e-15);
    CHECK(std::abs(r3.coefficients[1] + 0.5) < 1e-15);
    CHECK(std::abs(r3.coefficients[2] - 0.5) < 1e-15);

    for (int r = 2; r <= 12; ++r) {
        CHECK(std::abs(pseudo_boson_chain(iota_modes(0, r)).norm_squared() - 1.0) < 1e-14);
    }
    const auto single = pseudo_boson_chain_or_mode(iota_modes(4, 1));
    CHECK(single.modes == std::vector<int>{4});
    CHECK(single.coefficients[0] == Complex(1.0));
    CHECK_THROWS_AS(pseudo_boson_chain(iota_modes(0, 1)), DomainError);
    CHECK_THROWS_AS(make_pseudo_boson({0, 1}, {1.0, 1.0}), DomainError);
    CHECK_THROWS_AS(make_pseudo_boson({0, 0}, {kInvSqrt2, kInvSqrt2}), DomainError);
}

TEST_CASE("pseudo-boson canonical commutator") {
    const int d = 5;
    const auto space = make_space(3, d);
    const auto pa = pseudo_boson_chain(iota_modes(0, 3));
    const LinearOperator a = pseudo_annihilation(space, pa);
    const LinearOperator c = commutator(a, a.adjoint()) - LinearOperator::identity(space);
    // Every mode at most d - 2.
    double worst = 0.0;
    for (std::size_t i = 0; i < space->dimension(); ++i) {
        for (std::size_t j = 0; j < space->dimension(); ++j) {
            const auto oi = space->occupations(i);
            const auto oj = space->occupations(j);
            if (*std::max_element(oi.begin(), oi.end()) > d - 2) continue;
            if (*std::max_element(oj.begin(), oj.end()) > d - 2) continue;
            worst = std::max(worst, std::abs(c.entry(i, j)));
        }
    }
    CHECK(worst < 1e-14);
}

TEST_CASE("two-mode realization") {
    const auto space = make_space(2, 6);
    const Realization real = two_mode_realization(space, 0, 1);
    const auto vac = StateVector::vacuum(space);
    CHECK(apply(real.k_plus, vac).amplitude(Occupations{1, 1}) == Complex(1.0));

    const auto s20 = StateVector::basis(space, Occupations{2, 0});
    const DenseVector cas = apply(real.casimir, s20).amplitudes();
    CHECK((cas - 0.75 * s20.amplitudes()).cwiseAbs().maxCoeff() < 1e-12);

    const auto s10 = StateVector::basis(space, Occupations{1, 0});
    const DenseVector k0 = apply(real.k_zero, s10).amplitudes();
    CHECK((k0 - s10.amplitudes()).cwiseAbs().maxCoeff() < 1e-12);

    CHECK(max_abs(real.k_minus - real.k_plus.adjoint()) == 0.0);
    CHECK(closure_residuals(real, 3).max() < 1e-10);
}

TEST_CASE("pseudo-two-mode realization") {
    const auto space = make_space(4, 5);
    const auto pa = pseudo_boson_chain(iota_modes(0, 2));
    const auto pb = pseudo_boson_chain(iota_modes(2, 2));
    const Realization real = pseudo_two_mode_realization(space, pa, pb);

    // 1/2 (|10> - |01>)_a (x) (|10> - |01>)_b
    const StateVector oracle = from_terms(space, {{{1, 0, 1, 0}, 0.5},
                                                  {{1, 0, 0, 1}, -0.5},
                                                  {{0, 1, 1, 0}, -0.5},
                                                  {{0, 1, 0, 1}, 0.5}});
    CHECK(distance(apply(real.k_plus, StateVector::vacuum(space)), oracle) < 1e-15);
    CHECK(max_abs(real.k_minus - real.k_plus.adjoint()) == 0.0);
    CHECK(closure_residuals(real, space->cutoff() - 3).max() < 1e-10);

    const Complex eta(0.25, -0.4);
    const LinearOperator gen = eta * real.k_minus + std::conj(eta) * real.k_plus;
    LinearOperator diff = number_operator(space, 0) + number_operator(space, 1) -
                          number_operator(space, 2) - number_operator(space, 3);
    CHECK(commutator(diff, gen).nonzeros() == 0);
    const LinearOperator pseudo_diff =
        pseudo_number_operator(space, pa) - pseudo_number_operator(space, pb);
    CHECK(max_abs_restricted(commutator(pseudo_diff, gen), space->cutoff() - 3) < 1e-14);

    CHECK(max_abs_restricted(real.casimir - photon_difference_casimir(space, pa, pb), 2) < 1e-12);
    CHECK_THROWS_AS(pseudo_two_mode_realization(space, pa, pa), DomainError);
}

TEST_CASE("pseudo-number states") {
    const auto space = make_space(2, 5);
    const auto pa = pseudo_boson_chain(iota_modes(0, 2));

    const auto n0 = pseudo_number_state(space, 0, pa);
    CHECK(distance(n0.expansion, StateVector::vacuum(space)) == 0.0);

    const auto n1 = pseudo_number_state(space, 1, pa);
    CHECK(distance(n1.expansion, from_terms(space, {{{1, 0}, kInvSqrt2}, {{0, 1}, -kInvSqrt2}})) <
          1e-15);

    const auto n2 = pseudo_number_state(space, 2, pa);
    CHECK(distance(n2.expansion,
                   from_terms(space, {{{2, 0}, 0.5}, {{1, 1}, -kInvSqrt2}, {{0, 2}, 0.5}})) < 1e-15);

    for (int r : {2, 3}) {
        const auto sp = make_space(r, 6);
        const auto p = pseudo_boson_chain(iota_modes(0, r));
        std::vector<StateVector> states;
        for (int n = 0; n <= 4; ++n) {
            const auto s = pseudo_number_state(sp, n, p);
            CHECK(s.expansion.is_normalized());
            CHECK(distance(s.expansion, ladder_oracle(sp, p, n)) < 1e-13);
            states.push_back(s.expansion);
        }
        for (std::size_t i = 0; i < states.size(); ++i) {
            for (std::size_t j = 0; j < states.size(); ++j) {
                CHECK(std::abs(states[i].inner(states[j]) - (i == j ? 1.0 : 0.0)) < 1e-12);
            }
        }
    }
    CHECK_THROWS_AS(pseudo_number_state(space, 5, pa), CapacityError);
    CHECK_THROWS_AS(pseudo_number_state(make_space(2, 5, 3), 4, pa), CapacityError);
}

TEST_CASE("weight states") {
    const auto space = make_space(3, 6);
    const auto pa = pseudo_boson_chain(iota_modes(0, 2));
    const auto pb = pseudo_boson_chain_or_mode(iota_modes(2, 1));

    const auto vac = weight_state(space, irrep_labels_from_occupations(0, 0), pa, pb);
    CHECK(distance(vac.expansion, StateVector::vacuum(space)) == 0.0);

    const WeightLabel k1{IrrepLabel{2, Branch::APlus}, 2};
    const auto w = weight_state(space, k1, pa, pb);
    CHECK(distance(w.expansion,
                   from_terms(space, {{{1, 0, 0}, kInvSqrt2}, {{0, 1, 0}, -kInvSqrt2}})) < 1e-15);

    const Realization real = pseudo_two_mode_realization(space, pa, pb);
    const WeightLabel target{IrrepLabel{1, Branch::APlus}, 3};
    const auto up = weight_state(space, target, pa, pb);
    CHECK(std::abs(up.expansion.inner(apply(real.k_plus, vac.expansion)) - 1.0) < 1e-14);

    // Weight states are K0 and Casimir eigenstates.
    for (const auto& ws : weight_basis(space, pa, pb, 4)) {
        const double k = ws.label.k();
        const double mu = ws.label.mu();
        const DenseVector& v = ws.expansion.amplitudes();
        CHECK((apply(real.k_zero, ws.expansion).amplitudes() - mu * v).cwiseAbs().maxCoeff() < 1e-10);
        CHECK((apply(real.casimir, ws.expansion).amplitudes() - k * (k - 1.0) * v)
                  .cwiseAbs()
                  .maxCoeff() < 1e-10);
    }
}

TEST_CASE("branches are orthogonal") {
    const auto space = make_space(4, 5);
    const auto pa = pseudo_boson_chain(iota_modes(0, 2));
    const auto pb = pseudo_boson_chain(iota_modes(2, 2));
    for (int two_k = 2; two_k <= 4; ++two_k) {
        for (int m = 0; m < 2; ++m) {
            const int two_mu = two_k + 2 * m;
            const auto a = weight_state(space, {IrrepLabel{two_k, Branch::APlus}, two_mu}, pa, pb);
            const auto b = weight_state(space, {IrrepLabel{two_k, Branch::BPlus}, two_mu}, pa, pb);
            CHECK(std::abs(a.expansion.inner(b.expansion)) < 1e-12);
            const auto [na, nb] = pseudo_occupations(a.label);
            CHECK(pseudo_occupations(b.label) == std::pair{nb, na});
        }
    }
}

TEST_CASE("weight basis ordering and Gram matrix") {
    const auto space = make_space(3, 6);
    const auto pa = pseudo_boson_chain(iota_modes(0, 2));
    const auto pb = pseudo_boson_chain_or_mode(iota_modes(2, 1));
    const auto basis = weight_basis(space, pa, pb, 4);
    // Pairs (nA, nB) with nA + nB <= 4.
    CHECK(basis.size() == 15);
    for (std::size_t i = 1; i < basis.size(); ++i) {
        const auto& p = basis[i - 1].label;
        const auto& q = basis[i].label;
        const auto key = [](const WeightLabel& l) {
            return std::tuple{l.irrep.two_k, l.irrep.branch == Branch::BPlus, l.two_mu};
        };
        CHECK(key(p) < key(q));
    }
    for (std::size_t i = 0; i < basis.size(); ++i) {
        for (std::size_t j = 0; j < basis.size(); ++j) {
            CHECK(std::abs(basis[i].expansion.inner(basis[j].expansion) - (i == j ? 1.0 : 0.0)) <
                  1e-10);
        }
    }
}

TEST_CASE("decomposition") {
    const auto space = make_space(3, 6);
    const auto pa = pseudo_boson_chain(iota_modes(0, 2));
    const auto pb = pseudo_boson_chain_or_mode(iota_modes(2, 1));

    const Decomposition vac = decompose(StateVector::vacuum(space), pa, pb);
    REQUIRE(vac.terms.size() == 1);
    CHECK(vac.terms[0].label == irrep_labels_from_occupations(0, 0));
    CHECK(std::abs(vac.terms[0].amplitude - 1.0) < 1e-15);
    CHECK(vac.residual_norm < 1e-15);

    const StateVector psi = StateVector::basis(space, Occupations{1, 0, 0});
    const Decomposition d = decompose(psi, pa, pb);
    REQUIRE(d.terms.size() == 1);
    CHECK(d.terms[0].label == WeightLabel{IrrepLabel{2, Branch::APlus}, 2});
    CHECK(std::abs(d.terms[0].amplitude - kInvSqrt2) < 1e-15);
    CHECK(std::abs(d.residual_norm - kInvSqrt2) < 1e-15);

    // Brute-force projection oracle: orthonormalize the weight states with a QR
    // factorization and project.
    const auto basis = weight_basis(space, pa, pb, space->max_total_photons());
    DenseMatrix cols(static_cast<Eigen::Index>(space->dimension()),
                     static_cast<Eigen::Index>(basis.size()));
    for (std::size_t i = 0; i < basis.size(); ++i) {
        cols.col(static_cast<Eigen::Index>(i)) = basis[i].expansion.amplitudes();
    }
    Eigen::HouseholderQR<DenseMatrix> qr(cols);
    const DenseMatrix q = qr.householderQ() * DenseMatrix::Identity(cols.rows(), cols.cols());
    DenseVector mixed = DenseVector::Zero(static_cast<Eigen::Index>(space->dimension()));
    for (std::size_t i = 0; i < space->dimension(); ++i) {
        mixed[static_cast<Eigen::Index>(i)] = Complex(std::cos(0.7 * i), std::sin(1.3 * i));
    }
    mixed.normalize();
    const StateVector arbitrary(space, mixed);
    const double projected = (q.adjoint() * mixed).norm();
    const Decomposition da = decompose(arbitrary, pa, pb);
    double captured = 0.0;
    for (const auto& t : da.terms) captured += std::norm(t.amplitude);
    CHECK(std::abs(std::sqrt(captured) - projected) < 1e-12);
    CHECK(std::abs(da.residual_norm - std::sqrt(1.0 - projected * projected)) < 1e-10);
}

TEST_CASE("pseudo-squeezed vacuum stays in the k = 1/2 irrep") {
    const auto space = make_space(3, 10);
    const auto pa = pseudo_boson_chain(iota_modes(0, 2));
    const auto pb = pseudo_boson_chain_or_mode(iota_modes(2, 1));
    const Realization real = pseudo_two_mode_realization(space, pa, pb);
    const Complex eta(0.3, 0.2);
    const LinearOperator gen =
        Complex(0.0, -0.5) * (eta * real.k_minus + std::conj(eta) * real.k_plus);
    const StateVector out = expm_apply(gen, StateVector::vacuum(space));
    const Decomposition d = decompose(out, pa, pb);
    for (const auto& t : d.terms) {
        CHECK(t.label.irrep.two_k == 1);
    }
    CHECK(d.residual_norm < 1e-9);
}
