#pragma once

#include <complex>
#include <cstddef>
#include <memory>
#include <optional>
#include <span>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/SparseCore>

#include "su11/errors.hpp"

namespace su11 {

using Complex = std::complex<double>;
using SparseMatrix = Eigen::SparseMatrix<Complex>;
using DenseMatrix = Eigen::MatrixXcd;
using DenseVector = Eigen::VectorXcd;
using Occupations = std::vector<int>;

inline constexpr std::size_t kDefaultMaxDimension = 10'000'000;

/// Capacity limit for new spaces; SU11_MAX_DIM overrides the default.
std::size_t default_max_dimension();

/// Truncated multimode Fock space with per-mode occupations 0..cutoff-1 and an
/// optional cap on the total photon number. Basis vectors are ordered
/// lexicographically in their occupation vectors, mode 0 most significant.
class FockSpace {
public:
    FockSpace(int num_modes, int cutoff, std::optional<int> total_photon_cap,
              std::size_t max_dimension);

    int num_modes() const { return num_modes_; }
    int cutoff() const { return cutoff_; }
    std::optional<int> total_photon_cap() const { return cap_; }
    std::size_t dimension() const { return dimension_; }

    Occupations occupations(std::size_t index) const;
    int occupation(std::size_t index, int mode) const;
    int total_photons(std::size_t index) const;

    /// Dense index of an occupation vector, or nullopt when it lies outside the
    /// truncated space.
    std::optional<std::size_t> index_of(std::span<const int> occupations) const;

    /// Largest total photon number representable in this space.
    int max_total_photons() const;

    bool operator==(const FockSpace& other) const {
        return num_modes_ == other.num_modes_ && cutoff_ == other.cutoff_ && cap_ == other.cap_;
    }

private:
    int num_modes_;
    int cutoff_;
    std::optional<int> cap_;
    std::size_t dimension_ = 0;
    // Flattened occupation table, only populated for capped spaces. Uncapped
    // spaces use mixed-radix arithmetic directly.
    std::vector<int> table_;
};

using SpacePtr = std::shared_ptr<const FockSpace>;

SpacePtr make_space(int num_modes, int cutoff, std::optional<int> total_photon_cap = std::nullopt,
                    std::size_t max_dimension = default_max_dimension());

/// Sparse complex operator on a Fock space.
///
/// Entries are kept with exact structural sparsity: arithmetic results drop
/// entries that are exactly zero and nothing else, unless `pruned` is called
/// with a positive floor.
class LinearOperator {
public:
    LinearOperator(SpacePtr space, SparseMatrix matrix, bool hermitian_hint = false);

    static LinearOperator zero(SpacePtr space);
    static LinearOperator identity(SpacePtr space);

    const SpacePtr& space() const { return space_; }
    const SparseMatrix& matrix() const { return matrix_; }
    bool hermitian_hint() const { return hermitian_hint_; }
    std::size_t dimension() const { return space_->dimension(); }
    std::size_t nonzeros() const { return static_cast<std::size_t>(matrix_.nonZeros()); }

    Complex entry(std::size_t row, std::size_t col) const;
    LinearOperator adjoint() const;
    LinearOperator pruned(double floor) const;
    DenseMatrix dense() const;

    friend LinearOperator operator+(const LinearOperator& x, const LinearOperator& y);
    friend LinearOperator operator-(const LinearOperator& x, const LinearOperator& y);
    friend LinearOperator operator*(const LinearOperator& x, const LinearOperator& y);
    friend LinearOperator operator*(Complex s, const LinearOperator& x);
    friend LinearOperator operator-(const LinearOperator& x);

private:
    SpacePtr space_;
    SparseMatrix matrix_;
    bool hermitian_hint_;
};

class StateVector {
public:
    StateVector(SpacePtr space, DenseVector amplitudes);

    static StateVector zero(SpacePtr space);
    static StateVector basis(SpacePtr space, std::span<const int> occupations);
    static StateVector vacuum(SpacePtr space);

    const SpacePtr& space() const { return space_; }
    const DenseVector& amplitudes() const { return amplitudes_; }
    double norm() const { return amplitudes_.norm(); }
    bool is_normalized(double tol = 1e-12) const { return std::abs(norm() - 1.0) <= tol; }
    Complex amplitude(std::span<const int> occupations) const;

    /// <this|other>
    Complex inner(const StateVector& other) const;

private:
    SpacePtr space_;
    DenseVector amplitudes_;
};

void require_same_space(const FockSpace& x, const FockSpace& y);

LinearOperator annihilation(const SpacePtr& space, int mode);
LinearOperator creation(const SpacePtr& space, int mode);
LinearOperator number_operator(const SpacePtr& space, int mode);

LinearOperator commutator(const LinearOperator& x, const LinearOperator& y);

/// exp(scale * g) by scaling and squaring around a Taylor core. The series is
/// cut once its remainder bound in the scaled 1-norm drops below 1e-13.
LinearOperator expm(const LinearOperator& g, Complex scale = 1.0);

/// exp(scale * g) applied to the columns of `x` without forming the
/// exponential: the time step is split until each piece has 1-norm <= 2
/// and each piece is summed as a Taylor series to the same remainder bound.
DenseMatrix expm_apply(const LinearOperator& g, const DenseMatrix& x, Complex scale = 1.0);
StateVector expm_apply(const LinearOperator& g, const StateVector& psi, Complex scale = 1.0);

StateVector apply(const LinearOperator& op, const StateVector& psi);

/// Zero every row and column whose basis state carries more than
/// `max_total_photons` photons.
LinearOperator restrict(const LinearOperator& op, int max_total_photons);

/// Dense indices of basis states with total photons <= bound.
std::vector<std::size_t> safe_indices(const FockSpace& space, int max_total_photons);

/// Max absolute entry of `op` over the total-photon <= bound block.
double max_abs_restricted(const LinearOperator& op, int max_total_photons);
double max_abs(const LinearOperator& op);
double one_norm(const SparseMatrix& m);

}  // namespace su11
