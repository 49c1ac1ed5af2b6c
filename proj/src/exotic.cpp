#include <algorithm>
#include <cmath>
#include <numbers>

#include <Eigen/Eigenvalues>
#include <Eigen/QR>

#include "su11/algebra.hpp"

namespace su11 {

namespace {

constexpr Complex kI(0.0, 1.0);

DenseMatrix block(const LinearOperator& op, const std::vector<std::size_t>& indices) {
    const auto n = static_cast<Eigen::Index>(indices.size());
    DenseMatrix out = DenseMatrix::Zero(n, n);
    const DenseMatrix full = op.dense();
    for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index j = 0; j < n; ++j) {
            out(i, j) = full(static_cast<Eigen::Index>(indices[static_cast<std::size_t>(i)]),
                             static_cast<Eigen::Index>(indices[static_cast<std::size_t>(j)]));
        }
    }
    return out;
}

DenseVector flatten(const DenseMatrix& m) {
    return Eigen::Map<const DenseVector>(m.data(), m.size());
}

void require_three_modes(const FockSpace& space, int a1, int a2, int b1) {
    if (space.num_modes() != 3) {
        throw DomainError("exotic realization needs a three-mode space");
    }
    for (int m : {a1, a2, b1}) {
        if (m < 0 || m > 2) {
            throw DomainError("exotic realization: mode index out of range");
        }
    }
    if (a1 == a2 || a1 == b1 || a2 == b1) {
        throw DomainError("exotic realization: modes must be distinct");
    }
}

std::vector<double> hermitian_eigenvalues(const DenseMatrix& m, double& max_imag) {
    const DenseMatrix anti = 0.5 * (m - m.adjoint());
    max_imag = std::max(max_imag, anti.cwiseAbs().maxCoeff());
    const DenseMatrix herm = 0.5 * (m + m.adjoint());
    Eigen::SelfAdjointEigenSolver<DenseMatrix> solver(herm, Eigen::EigenvaluesOnly);
    if (solver.info() != Eigen::Success) {
        throw NumericalError("exotic spectrum: eigensolver failed");
    }
    const Eigen::VectorXd values = solver.eigenvalues();
    return {values.data(), values.data() + values.size()};
}

}  // namespace

ExoticRealization exotic_realization(const SpacePtr& space, int a1, int a2, int b1,
                                     std::optional<int> safe_bound) {
    require_three_modes(*space, a1, a2, b1);
    const int bound = safe_bound.value_or(space->cutoff() - 3);
    if (bound < 0) {
        throw DomainError("exotic realization: cutoff too small for a safe block");
    }
    const LinearOperator x1 = annihilation(space, a1);
    const LinearOperator x2 = annihilation(space, a2);
    const LinearOperator y = annihilation(space, b1);

    const LinearOperator t_x = x1 * y;
    const LinearOperator t_y = x2 * y;
    const LinearOperator hop = x2.adjoint() * x1;

    const LinearOperator kx(space, (-kI * (t_x - t_x.adjoint())).matrix(), true);
    const LinearOperator ky(space, (-kI * (t_y - t_y.adjoint())).matrix(), true);
    const LinearOperator kz(space, (kI * (hop - hop.adjoint())).matrix(), true);

    // Fit [K_i, K_j] = sum_l f_ijl K_l on the safe block by least squares.
    const auto indices = safe_indices(*space, bound);
    const std::array<const LinearOperator*, 3> gens{&kx, &ky, &kz};
    DenseMatrix basis(static_cast<Eigen::Index>(indices.size() * indices.size()), 3);
    for (int l = 0; l < 3; ++l) {
        basis.col(l) = flatten(block(*gens[static_cast<std::size_t>(l)], indices));
    }
    const auto solver = basis.completeOrthogonalDecomposition();

    StructureConstants f{};
    double residual = 0.0;
    for (int i = 0; i < 3; ++i) {
        for (int j = i + 1; j < 3; ++j) {
            const DenseVector target = flatten(block(
                commutator(*gens[static_cast<std::size_t>(i)], *gens[static_cast<std::size_t>(j)]),
                indices));
            const DenseVector coeffs = solver.solve(target);
            residual = std::max(residual, (target - basis * coeffs).cwiseAbs().maxCoeff());
            for (int l = 0; l < 3; ++l) {
                f[i][j][l] = coeffs[l];
                f[j][i][l] = -coeffs[l];
            }
        }
    }

    // With [K_x, K_y] = -i sigma K_z, the pair K0 = sigma K_z, K+- = K_x +- i K_y
    // obeys the standard su(1,1) relations.
    const double sigma = (f[0][1][2].imag() <= 0.0) ? 1.0 : -1.0;
    LinearOperator k_zero(space, (Complex(sigma) * kz).matrix(), true);
    LinearOperator k_plus = kx + kI * ky;
    LinearOperator k_minus = kx - kI * ky;
    LinearOperator casimir = k_zero * k_zero - 0.5 * (k_plus * k_minus + k_minus * k_plus);
    casimir = LinearOperator(space, casimir.matrix(), true);

    return ExoticRealization{
        kx,
        ky,
        kz,
        f,
        residual,
        bound,
        Realization{std::move(k_plus), std::move(k_minus), std::move(k_zero), std::move(casimir),
                    ExoticProvenance{a1, a2, b1}},
    };
}

LinearOperator exotic_diagonalizer(const SpacePtr& space, int a1, int a2) {
    const LinearOperator hop = creation(space, a2) * annihilation(space, a1);
    return expm(hop + hop.adjoint(), kI * (std::numbers::pi / 4.0));
}

LinearOperator printed_rotated_casimir(const SpacePtr& space, int a1, int a2, int b1) {
    const LinearOperator n1 = number_operator(space, a1);
    const LinearOperator n2 = number_operator(space, a2);
    const LinearOperator nb = number_operator(space, b1);
    const LinearOperator one = LinearOperator::identity(space);
    const LinearOperator diff = n2 - n1;
    const LinearOperator sum = n2 + n1;
    const LinearOperator lower = annihilation(space, a2) * annihilation(space, a1) *
                                 annihilation(space, b1) * annihilation(space, b1);
    LinearOperator out = diff * diff - 2.0 * ((sum + one) * nb) - (sum + 2.0 * one) +
                         (2.0 * kI) * (lower.adjoint() - lower);
    return {space, out.matrix(), true};
}

ExoticSpectrum exotic_casimir_spectrum(const ExoticRealization& realization, int photon_bound) {
    const LinearOperator& kz = realization.kz;
    const SpacePtr& space = kz.space();
    const auto& prov = std::get<ExoticProvenance>(realization.realization.provenance);

    ExoticSpectrum out;
    out.photon_bound = photon_bound;
    const auto indices = safe_indices(*space, photon_bound);
    out.block_dimension = indices.size();

    out.casimir_eigenvalues =
        hermitian_eigenvalues(block(realization.realization.casimir, indices), out.max_imaginary);

    const LinearOperator u = exotic_diagonalizer(space, prov.a1, prov.a2);
    const LinearOperator ud = u.adjoint();
    out.rotated_kz_eigenvalues = hermitian_eigenvalues(block(u * kz * ud, indices), out.max_imaginary);

    const LinearOperator rotated = u * realization.realization.casimir * ud;
    const LinearOperator printed = printed_rotated_casimir(space, prov.a1, prov.a2, prov.b1);
    out.rotated_casimir_deviation = max_abs_restricted(rotated - printed, photon_bound);
    return out;
}

}  // namespace su11
