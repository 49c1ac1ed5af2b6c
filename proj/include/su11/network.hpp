#pragma once

#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "su11/algebra.hpp"
#include "su11/fock.hpp"

namespace su11 {

/// A mode on the upper (a) or lower (b) side of a network, 0-based within its
/// side. Global Fock-space modes are a_0..a_{r-1}, b_0..b_{s-1} in that order.
struct ModeRef {
    Side side = Side::A;
    int index = 0;

    bool operator==(const ModeRef&) const = default;
};

/// exp[theta (x^dag y e^{i phi} - x y^dag e^{-i phi}) / 2] on modes (x, y).
struct Beamsplitter {
    double theta = 0.0;
    double phi = 0.0;

    bool operator==(const Beamsplitter&) const = default;
};

/// exp[-i (eta x y + eta^* x^dag y^dag) / 2] on modes (x, y).
struct TwoModeSqueezer {
    Complex eta;

    bool operator==(const TwoModeSqueezer&) const = default;
};

struct Element {
    std::variant<Beamsplitter, TwoModeSqueezer> kind;
    ModeRef first;
    ModeRef second;

    bool is_squeezer() const { return std::holds_alternative<TwoModeSqueezer>(kind); }
    bool operator==(const Element&) const = default;
};

/// Elements are listed in time order: elements[0] acts first, so the compiled
/// unitary is U_{n-1} ... U_1 U_0.
struct NetworkSpec {
    int num_a_modes = 1;
    int num_b_modes = 1;
    std::vector<Element> elements;

    int num_modes() const { return num_a_modes + num_b_modes; }
    int global_mode(const ModeRef& m) const {
        return m.side == Side::A ? m.index : num_a_modes + m.index;
    }
    bool operator==(const NetworkSpec&) const = default;
};

/// Throws DomainError on out-of-range modes, repeated modes in one element or
/// non-finite parameters.
void validate_spec(const NetworkSpec& spec);

/// Heisenberg-picture mode map of a passive chain on one side:
/// U a_l U^dag = sum_m matrix(l, m) a_m.
struct PassiveTransform {
    DenseMatrix matrix;

    /// max |V V^dag - I|
    double unitarity_error() const;
};

struct PseudoSqueezerForm {
    int num_a_modes = 1;
    int num_b_modes = 1;
    PseudoBoson pseudo_a;  ///< over global a-mode indices
    PseudoBoson pseudo_b;  ///< over global b-mode indices
    Complex eta;
    /// The original beamsplitters, in time order.
    std::vector<Element> trailing_passive;
};

struct Reducibility {
    bool reducible = false;
    /// Element that breaks the pseudo-squeezer shape, when one exists.
    std::optional<std::size_t> obstruction;
    std::string reason;
};

// Generators (anti-Hermitian; the element unitary is expm of the generator).
LinearOperator beamsplitter_generator(const SpacePtr& space, double theta, double phi, int mode_i,
                                      int mode_j);
LinearOperator squeezer_generator(const SpacePtr& space, Complex eta, int mode_i, int mode_j);
/// -i (eta A B + eta^* A^dag B^dag) / 2
LinearOperator pseudo_squeezer_generator(const SpacePtr& space, Complex eta,
                                         const PseudoBoson& pseudo_a, const PseudoBoson& pseudo_b);

LinearOperator element_generator(const NetworkSpec& spec, const Element& element,
                                 const SpacePtr& space);

/// One unitary per element, in time order.
std::vector<LinearOperator> element_unitaries(const NetworkSpec& spec, const SpacePtr& space);

LinearOperator compile(const NetworkSpec& spec, const SpacePtr& space);

/// Same as apply(compile(spec, space), psi) without forming the product.
StateVector evolve(const NetworkSpec& spec, const StateVector& psi);

PassiveTransform passive_transform(std::span<const Element> beamsplitters, Side side,
                                   int num_side_modes);

Reducibility classify(const NetworkSpec& spec);
std::optional<PseudoSqueezerForm> reduce(const NetworkSpec& spec);

/// exp(pseudo-squeezer generator) times the compiled trailing chain, i.e.
/// the right-hand side of the commutation through the passive chain.
LinearOperator compile_reduced(const PseudoSqueezerForm& form, const SpacePtr& space);

// ---------------------------------------------------------------------------
// Identity checks. Every deviation is the max absolute entry difference on
// the total-photon <= safe_bound block.

/// One factor of a product: either a plain operator or the exponential of a
/// generator, applied to vectors without forming it.
struct Factor {
    LinearOperator op;
    bool exponentiate = false;

    static Factor multiply(LinearOperator op) { return {std::move(op), false}; }
    static Factor exponential(LinearOperator generator) { return {std::move(generator), true}; }
};

/// Element exponentials of `spec`, in time order.
std::vector<Factor> network_factors(const NetworkSpec& spec, const SpacePtr& space);
/// Trailing passive chain, then the pseudo-squeezer exponential.
std::vector<Factor> reduced_factors(const PseudoSqueezerForm& form, const SpacePtr& space);

/// Applies `factors` (time order) to the safe columns and keeps the safe rows.
DenseMatrix restricted_product(std::span<const Factor> factors, int safe_bound);

double block_deviation(std::span<const Factor> lhs, std::span<const Factor> rhs, int safe_bound);

/// The 50:50 splitter with theta = pi/2, phi = +-pi on (x, y).
Element balanced_splitter(ModeRef x, ModeRef y, bool plus = true);

/// Squeezer on (a_1, b_1) followed by the splitter ladders
/// B+(a2,a1), B+(a3,a2), ..., then B-(b2,b1), B-(b3,b2), ...
NetworkSpec multimode_chain(int r, int s, Complex eta);

/// Squeezer on the unnormalized combination a1 - a2:
///   -i (xi (a1 - a2) b1 + xi^* (a1^dag - a2^dag) b1^dag) / 2.
/// With xi = sqrt(2) i eta this is the pseudo-squeezer on A = (a1 - a2)/sqrt(2)
/// at 2 i eta.
LinearOperator three_mode_squeezer_generator(const SpacePtr& space, Complex xi, int a1, int a2,
                                             int b1);

/// Three-mode space layout: mode 0 = a1, 1 = a2, 2 = b1.
/// Checks B+_{a2 a1} S_{a1 b1}(2 i eta) = S_{a2 a1 b1}(sqrt(2) i eta) B+_{a2 a1}.
double verify_three_mode_identity(Complex eta, const SpacePtr& space, int safe_bound);

struct MultimodeDeviation {
    double generator = 0.0;
    double unitary = 0.0;
};

/// Generator level: U G_sq U^dag against the pseudo-squeezer generator, with U
/// the passive chain. Unitary level: compile(chain) against compile_reduced.
MultimodeDeviation verify_multimode_identity(int r, int s, Complex eta, const SpacePtr& space,
                                             int safe_bound);

/// The network operator exp[(eta/sqrt2) cosh(s/2)(a1 b1 - h.c.)
///   + (eta/sqrt2) sinh(s/2)(a2^dag a1 - a2 a1^dag) - (eta/sqrt2)(a2 b1 - h.c.)].
LinearOperator exotic_network_operator(const SpacePtr& space, double eta, double s_prime);
/// The exponent of exotic_network_operator.
LinearOperator exotic_network_generator(const SpacePtr& space, double eta, double s_prime);

/// S_{a2 b1}(i s) S_{a2 a1 b1}(sqrt(2) i eta) against exotic_network_operator(eta, s) S_{a2 b1}(i s),
/// on the three-mode layout above.
double verify_exotic_identity(double eta, double s_prime, const SpacePtr& space, int safe_bound);

}  // namespace su11
