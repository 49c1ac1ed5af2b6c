#pragma once

#include <array>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "su11/fock.hpp"

namespace su11 {

// ---------------------------------------------------------------------------
// Labels. Half-integers are stored doubled so comparisons stay exact.

/// APlus: n_A >= n_B (includes the k = 1/2 diagonal). BPlus: n_B > n_A.
enum class Branch { APlus, BPlus };

struct IrrepLabel {
    int two_k = 1;
    Branch branch = Branch::APlus;

    double k() const { return two_k / 2.0; }
    bool operator==(const IrrepLabel&) const = default;
};

struct WeightLabel {
    IrrepLabel irrep;
    int two_mu = 1;

    double k() const { return irrep.k(); }
    double mu() const { return two_mu / 2.0; }
    bool operator==(const WeightLabel&) const = default;
};

/// Throws DomainError unless 2k >= 1, mu - k is a nonnegative integer, and
/// BPlus is only used with k > 1/2.
void validate(const WeightLabel& label);

/// k = (|n_a - n_b| + 1)/2, mu = (n_a + n_b + 1)/2; ties go to APlus.
WeightLabel irrep_labels_from_occupations(int n_a, int n_b);

/// Inverse of irrep_labels_from_occupations: the (n_A, n_B) pair behind a label.
std::pair<int, int> pseudo_occupations(const WeightLabel& label);

std::string to_string(Branch branch);

// ---------------------------------------------------------------------------
// Pseudo-bosons A = sum_l c_l a_l over a subset of modes.

struct PseudoBoson {
    std::vector<int> modes;
    std::vector<Complex> coefficients;

    double norm_squared() const;
    std::size_t size() const { return modes.size(); }
};

/// Validates distinct modes, matching lengths and unit norm (to 1e-14).
PseudoBoson make_pseudo_boson(std::vector<int> modes, std::vector<Complex> coefficients);

/// Chain coefficients produced by a ladder of 50:50 splitters:
/// c_l = (-1)^(l-1)/sqrt(2^l) for l < r and c_r = (-1)^(r-1)/sqrt(2^(r-1)).
/// Requires r = modes.size() >= 2.
PseudoBoson pseudo_boson_chain(std::span<const int> modes);

/// Same chain, but r = 1 gives the bare mode (coefficient 1).
PseudoBoson pseudo_boson_chain_or_mode(std::span<const int> modes);

LinearOperator pseudo_annihilation(const SpacePtr& space, const PseudoBoson& pseudo);
LinearOperator pseudo_creation(const SpacePtr& space, const PseudoBoson& pseudo);
LinearOperator pseudo_number_operator(const SpacePtr& space, const PseudoBoson& pseudo);

// ---------------------------------------------------------------------------
// Realizations.

struct TwoModeProvenance {
    int mode_a;
    int mode_b;
};
struct PseudoTwoModeProvenance {
    std::vector<int> a_modes;
    std::vector<int> b_modes;
};
struct ExoticProvenance {
    int a1;
    int a2;
    int b1;
};
using Provenance = std::variant<TwoModeProvenance, PseudoTwoModeProvenance, ExoticProvenance>;

struct Realization {
    LinearOperator k_plus;
    LinearOperator k_minus;
    LinearOperator k_zero;
    /// K0^2 - (K+K- + K-K+)/2, assembled from the generator matrices.
    LinearOperator casimir;
    Provenance provenance;
};

/// K+ = a^dag b^dag, K- = a b, K0 = (a^dag a + b b^dag)/2.
Realization two_mode_realization(const SpacePtr& space, int mode_a, int mode_b);

/// K- = A B, K+ = A^dag B^dag, K0 = (N_A + N_B + 1)/2 for pseudo-bosons on
/// disjoint mode sets.
Realization pseudo_two_mode_realization(const SpacePtr& space, const PseudoBoson& pseudo_a,
                                        const PseudoBoson& pseudo_b);

/// (1/4)[(N_A - N_B)^2 - 1], the closed form of the Casimir.
LinearOperator photon_difference_casimir(const SpacePtr& space, const PseudoBoson& pseudo_a,
                                         const PseudoBoson& pseudo_b);

struct ClosureResiduals {
    double zero_plus = 0.0;   ///< |[K0,K+] - K+|
    double zero_minus = 0.0;  ///< |[K0,K-] + K-|
    double minus_plus = 0.0;  ///< |[K-,K+] - 2K0|

    double max() const { return std::max({zero_plus, zero_minus, minus_plus}); }
};

/// Max-entry residuals of the su(1,1) commutation relations on the
/// total-photon <= safe_bound block.
ClosureResiduals closure_residuals(const Realization& r, int safe_bound);

// ---------------------------------------------------------------------------
// Pseudo-number states and the weight basis.

enum class Side { A, B };

struct PseudoNumberState {
    int n = 0;
    Side side = Side::A;
    StateVector expansion;
};

/// |n} = (A^dag)^n |0> / sqrt(n!) expanded over the occupation vectors that
/// partition n among the pseudo-boson's modes. Throws CapacityError when n
/// photons do not fit in one mode (or exceed the total cap).
PseudoNumberState pseudo_number_state(const SpacePtr& space, int n, const PseudoBoson& pseudo,
                                      Side side = Side::A);

struct WeightState {
    WeightLabel label;
    StateVector expansion;
};

/// |k, mu> = |n_A} (x) |n_B}, with (n_A, n_B) read off the label and branch.
WeightState weight_state(const SpacePtr& space, const WeightLabel& label,
                         const PseudoBoson& pseudo_a, const PseudoBoson& pseudo_b);

/// Every weight state whose pseudo-occupations fit the space and whose total
/// photon number is at most `photon_bound`, ordered by (2k, branch, 2mu).
std::vector<WeightState> weight_basis(const SpacePtr& space, const PseudoBoson& pseudo_a,
                                      const PseudoBoson& pseudo_b, int photon_bound);

struct DecompositionTerm {
    WeightLabel label;
    Complex amplitude;
};

struct Decomposition {
    std::vector<DecompositionTerm> terms;
    /// Norm of the component outside the span of the constructed weight
    /// states: the norm of psi minus its projection onto them.
    double residual_norm = 0.0;
};

/// Projects psi onto the weight basis up to `photon_bound` (defaults to the
/// largest representable total). Terms with an exactly zero amplitude are
/// dropped.
Decomposition decompose(const StateVector& psi, const PseudoBoson& pseudo_a,
                        const PseudoBoson& pseudo_b, std::optional<int> photon_bound = std::nullopt);

// ---------------------------------------------------------------------------
// Three-mode realization with Cartesian generators
//   K_x = -i(a1 b1 - a1^dag b1^dag), K_y = -i(a2 b1 - a2^dag b1^dag),
//   K_z =  i(a2^dag a1 - a2 a1^dag).

/// structure[i][j][l] is the coefficient of K_l in [K_i, K_j], indices x, y, z.
using StructureConstants = std::array<std::array<std::array<Complex, 3>, 3>, 3>;

struct ExoticRealization {
    LinearOperator kx;
    LinearOperator ky;
    LinearOperator kz;
    StructureConstants structure;
    /// Worst least-squares residual of a pairwise commutator against the
    /// generator span, on the safe block used to fit the constants.
    double closure_residual = 0.0;
    int safe_bound = 0;
    /// K0 = K_z, K+- = K_x +- i sigma K_y with sigma fixed by the fitted
    /// [K_x, K_y] coefficient; casimir = K_z^2 - K_x^2 - K_y^2.
    Realization realization;
};

ExoticRealization exotic_realization(const SpacePtr& space, int a1, int a2, int b1,
                                     std::optional<int> safe_bound = std::nullopt);

/// exp[i pi/4 (a2^dag a1 + a2 a1^dag)].
LinearOperator exotic_diagonalizer(const SpacePtr& space, int a1, int a2);

/// The rotated Casimir written out term by term:
///   (N2 - N1)^2 - 2(N2 + N1 + 1) Nb - (N2 + N1 + 2) + 2i(a2^dag a1^dag b1^dag^2 - a2 a1 b1^2).
LinearOperator printed_rotated_casimir(const SpacePtr& space, int a1, int a2, int b1);

struct ExoticSpectrum {
    int photon_bound = 0;
    std::size_t block_dimension = 0;
    std::vector<double> casimir_eigenvalues;
    std::vector<double> rotated_kz_eigenvalues;
    /// Largest imaginary part seen while symmetrizing the blocks.
    double max_imaginary = 0.0;
    /// max |U K^2 U^dag - printed form| on the block.
    double rotated_casimir_deviation = 0.0;
};

/// Eigenvalues of the Casimir and of U K_z U^dag on the total-photon <= bound
/// block. Reported for inspection; no series classification is attempted.
ExoticSpectrum exotic_casimir_spectrum(const ExoticRealization& realization, int photon_bound);

}  // namespace su11
