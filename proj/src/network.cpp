#include "su11/network.hpp"

#include <cmath>
#include <numbers>

namespace su11 {

namespace {

constexpr Complex kI(0.0, 1.0);

bool mode_in_range(const NetworkSpec& spec, const ModeRef& m) {
    const int count = m.side == Side::A ? spec.num_a_modes : spec.num_b_modes;
    return m.index >= 0 && m.index < count;
}

void require_modes(const FockSpace& space, int needed, const char* what) {
    if (space.num_modes() != needed) {
        throw DomainError(std::string(what) + ": space has " + std::to_string(space.num_modes()) +
                          " modes, expected " + std::to_string(needed));
    }
}

}  // namespace

void validate_spec(const NetworkSpec& spec) {
    if (spec.num_a_modes < 1 || spec.num_b_modes < 1) {
        throw DomainError("network needs at least one a-mode and one b-mode");
    }
    for (std::size_t i = 0; i < spec.elements.size(); ++i) {
        const Element& e = spec.elements[i];
        const std::string where = "element " + std::to_string(i);
        if (!mode_in_range(spec, e.first) || !mode_in_range(spec, e.second)) {
            throw DomainError(where + ": mode out of range");
        }
        if (e.first == e.second) {
            throw DomainError(where + ": modes must be distinct");
        }
        if (const auto* bs = std::get_if<Beamsplitter>(&e.kind)) {
            if (!std::isfinite(bs->theta) || !std::isfinite(bs->phi)) {
                throw DomainError(where + ": non-finite beamsplitter angle");
            }
        } else {
            const auto& sq = std::get<TwoModeSqueezer>(e.kind);
            if (!std::isfinite(std::abs(sq.eta))) {
                throw DomainError(where + ": non-finite squeezing parameter");
            }
        }
    }
}

double PassiveTransform::unitarity_error() const {
    const auto n = matrix.rows();
    return (matrix * matrix.adjoint() - DenseMatrix::Identity(n, n)).cwiseAbs().maxCoeff();
}

// ---------------------------------------------------------------------------
// Generators

LinearOperator beamsplitter_generator(const SpacePtr& space, double theta, double phi, int mode_i,
                                      int mode_j) {
    if (mode_i == mode_j) {
        throw DomainError("beamsplitter: modes must be distinct");
    }
    const LinearOperator hop = creation(space, mode_i) * annihilation(space, mode_j);
    const Complex phase = std::polar(1.0, phi);
    return (theta / 2.0) * (phase * hop - std::conj(phase) * hop.adjoint());
}

LinearOperator squeezer_generator(const SpacePtr& space, Complex eta, int mode_i, int mode_j) {
    if (mode_i == mode_j) {
        throw DomainError("squeezer: modes must be distinct");
    }
    const LinearOperator lower = annihilation(space, mode_i) * annihilation(space, mode_j);
    return (-kI / 2.0) * (eta * lower + std::conj(eta) * lower.adjoint());
}

LinearOperator pseudo_squeezer_generator(const SpacePtr& space, Complex eta,
                                         const PseudoBoson& pseudo_a, const PseudoBoson& pseudo_b) {
    const LinearOperator lower =
        pseudo_annihilation(space, pseudo_a) * pseudo_annihilation(space, pseudo_b);
    return (-kI / 2.0) * (eta * lower + std::conj(eta) * lower.adjoint());
}

LinearOperator element_generator(const NetworkSpec& spec, const Element& element,
                                 const SpacePtr& space) {
    const int i = spec.global_mode(element.first);
    const int j = spec.global_mode(element.second);
    if (const auto* bs = std::get_if<Beamsplitter>(&element.kind)) {
        return beamsplitter_generator(space, bs->theta, bs->phi, i, j);
    }
    return squeezer_generator(space, std::get<TwoModeSqueezer>(element.kind).eta, i, j);
}

std::vector<LinearOperator> element_unitaries(const NetworkSpec& spec, const SpacePtr& space) {
    validate_spec(spec);
    require_modes(*space, spec.num_modes(), "compile");
    std::vector<LinearOperator> out;
    out.reserve(spec.elements.size());
    for (const Element& e : spec.elements) {
        out.push_back(expm(element_generator(spec, e, space)));
    }
    return out;
}

LinearOperator compile(const NetworkSpec& spec, const SpacePtr& space) {
    LinearOperator total = LinearOperator::identity(space);
    for (const LinearOperator& u : element_unitaries(spec, space)) {
        total = u * total;
    }
    return total;
}

StateVector evolve(const NetworkSpec& spec, const StateVector& psi) {
    StateVector out = psi;
    for (const Factor& f : network_factors(spec, psi.space())) {
        out = expm_apply(f.op, out);
    }
    return out;
}

// ---------------------------------------------------------------------------
// Passive transforms and reduction

PassiveTransform passive_transform(std::span<const Element> beamsplitters, Side side,
                                   int num_side_modes) {
    if (num_side_modes < 1) {
        throw DomainError("passive_transform: need at least one mode");
    }
    const auto n = static_cast<Eigen::Index>(num_side_modes);
    DenseMatrix total = DenseMatrix::Identity(n, n);
    for (const Element& e : beamsplitters) {
        const auto* bs = std::get_if<Beamsplitter>(&e.kind);
        if (bs == nullptr) {
            throw DomainError("passive_transform: squeezers are not passive");
        }
        if (e.first.side != side || e.second.side != side) {
            throw DomainError("passive_transform: beamsplitter leaves the requested side");
        }
        const int i = e.first.index;
        const int j = e.second.index;
        if (i < 0 || j < 0 || i >= num_side_modes || j >= num_side_modes || i == j) {
            throw DomainError("passive_transform: bad mode pair");
        }
        // U x U^dag = cos(t/2) x - e^{i phi} sin(t/2) y
        // U y U^dag = e^{-i phi} sin(t/2) x + cos(t/2) y
        const double c = std::cos(bs->theta / 2.0);
        const double s = std::sin(bs->theta / 2.0);
        const Complex phase = std::polar(1.0, bs->phi);
        DenseMatrix step = DenseMatrix::Identity(n, n);
        step(i, i) = c;
        step(i, j) = -phase * s;
        step(j, i) = std::conj(phase) * s;
        step(j, j) = c;
        // Later elements act on the images of earlier ones.
        total = total * step;
    }
    return PassiveTransform{std::move(total)};
}

Reducibility classify(const NetworkSpec& spec) {
    validate_spec(spec);
    Reducibility out;
    if (spec.elements.empty()) {
        out.reason = "network has no squeezer";
        return out;
    }
    const Element& head = spec.elements.front();
    if (!head.is_squeezer()) {
        out.obstruction = 0;
        out.reason = "first element is not a two-mode squeezer";
        return out;
    }
    if (head.first.side == head.second.side) {
        out.obstruction = 0;
        out.reason = "squeezer does not couple an a-mode to a b-mode";
        return out;
    }
    for (std::size_t i = 1; i < spec.elements.size(); ++i) {
        const Element& e = spec.elements[i];
        if (e.is_squeezer()) {
            out.obstruction = i;
            out.reason = "additional squeezer after the first";
            return out;
        }
        if (e.first.side != e.second.side) {
            out.obstruction = i;
            out.reason = "beamsplitter mixes a-modes and b-modes";
            return out;
        }
    }
    out.reducible = true;
    return out;
}

std::optional<PseudoSqueezerForm> reduce(const NetworkSpec& spec) {
    if (!classify(spec).reducible) {
        return std::nullopt;
    }
    const Element& head = spec.elements.front();
    const ModeRef a_mode = head.first.side == Side::A ? head.first : head.second;
    const ModeRef b_mode = head.first.side == Side::A ? head.second : head.first;

    std::vector<Element> a_chain;
    std::vector<Element> b_chain;
    std::vector<Element> trailing(spec.elements.begin() + 1, spec.elements.end());
    for (const Element& e : trailing) {
        (e.first.side == Side::A ? a_chain : b_chain).push_back(e);
    }
    const DenseMatrix va = passive_transform(a_chain, Side::A, spec.num_a_modes).matrix;
    const DenseMatrix vb = passive_transform(b_chain, Side::B, spec.num_b_modes).matrix;

    PseudoSqueezerForm form;
    form.num_a_modes = spec.num_a_modes;
    form.num_b_modes = spec.num_b_modes;
    for (int m = 0; m < spec.num_a_modes; ++m) {
        form.pseudo_a.modes.push_back(m);
        form.pseudo_a.coefficients.push_back(va(a_mode.index, m));
    }
    for (int m = 0; m < spec.num_b_modes; ++m) {
        form.pseudo_b.modes.push_back(spec.num_a_modes + m);
        form.pseudo_b.coefficients.push_back(vb(b_mode.index, m));
    }
    form.eta = std::get<TwoModeSqueezer>(head.kind).eta;
    form.trailing_passive = std::move(trailing);
    return form;
}

LinearOperator compile_reduced(const PseudoSqueezerForm& form, const SpacePtr& space) {
    const NetworkSpec passive{form.num_a_modes, form.num_b_modes, form.trailing_passive};
    const LinearOperator squeeze =
        expm(pseudo_squeezer_generator(space, form.eta, form.pseudo_a, form.pseudo_b));
    return squeeze * compile(passive, space);
}

// ---------------------------------------------------------------------------
// Identity checks

std::vector<Factor> network_factors(const NetworkSpec& spec, const SpacePtr& space) {
    validate_spec(spec);
    require_modes(*space, spec.num_modes(), "network_factors");
    std::vector<Factor> out;
    out.reserve(spec.elements.size());
    for (const Element& e : spec.elements) {
        out.push_back(Factor::exponential(element_generator(spec, e, space)));
    }
    return out;
}

std::vector<Factor> reduced_factors(const PseudoSqueezerForm& form, const SpacePtr& space) {
    const NetworkSpec passive{form.num_a_modes, form.num_b_modes, form.trailing_passive};
    std::vector<Factor> out = network_factors(passive, space);
    out.push_back(Factor::exponential(
        pseudo_squeezer_generator(space, form.eta, form.pseudo_a, form.pseudo_b)));
    return out;
}

DenseMatrix restricted_product(std::span<const Factor> factors, int safe_bound) {
    if (factors.empty()) {
        throw DomainError("restricted_product: no factors");
    }
    const SpacePtr& space = factors.front().op.space();
    const auto indices = safe_indices(*space, safe_bound);
    const auto dim = static_cast<Eigen::Index>(space->dimension());
    const auto n = static_cast<Eigen::Index>(indices.size());
    DenseMatrix columns = DenseMatrix::Zero(dim, n);
    for (Eigen::Index c = 0; c < n; ++c) {
        columns(static_cast<Eigen::Index>(indices[static_cast<std::size_t>(c)]), c) = 1.0;
    }
    for (const Factor& f : factors) {
        require_same_space(*space, *f.op.space());
        if (f.exponentiate) {
            columns = expm_apply(f.op, columns);
        } else {
            columns = f.op.matrix() * columns;
        }
    }
    DenseMatrix out(n, n);
    for (Eigen::Index r = 0; r < n; ++r) {
        out.row(r) = columns.row(static_cast<Eigen::Index>(indices[static_cast<std::size_t>(r)]));
    }
    return out;
}

double block_deviation(std::span<const Factor> lhs, std::span<const Factor> rhs, int safe_bound) {
    return (restricted_product(lhs, safe_bound) - restricted_product(rhs, safe_bound))
        .cwiseAbs()
        .maxCoeff();
}

Element balanced_splitter(ModeRef x, ModeRef y, bool plus) {
    const double phi = plus ? std::numbers::pi : -std::numbers::pi;
    return Element{Beamsplitter{std::numbers::pi / 2.0, phi}, x, y};
}

NetworkSpec multimode_chain(int r, int s, Complex eta) {
    if (r < 1 || s < 1) {
        throw DomainError("multimode_chain: r and s must be >= 1");
    }
    NetworkSpec spec{r, s, {}};
    spec.elements.push_back(Element{TwoModeSqueezer{eta}, {Side::A, 0}, {Side::B, 0}});
    for (int l = 1; l < r; ++l) {
        spec.elements.push_back(balanced_splitter({Side::A, l}, {Side::A, l - 1}, true));
    }
    for (int l = 1; l < s; ++l) {
        spec.elements.push_back(balanced_splitter({Side::B, l}, {Side::B, l - 1}, false));
    }
    return spec;
}

LinearOperator three_mode_squeezer_generator(const SpacePtr& space, Complex xi, int a1, int a2,
                                             int b1) {
    const LinearOperator lower =
        (annihilation(space, a1) - annihilation(space, a2)) * annihilation(space, b1);
    return (-kI / 2.0) * (xi * lower + std::conj(xi) * lower.adjoint());
}

double verify_three_mode_identity(Complex eta, const SpacePtr& space, int safe_bound) {
    require_modes(*space, 3, "verify_three_mode_identity");
    const Factor splitter = Factor::exponential(
        beamsplitter_generator(space, std::numbers::pi / 2.0, std::numbers::pi, 1, 0));
    const Factor squeeze = Factor::exponential(squeezer_generator(space, 2.0 * kI * eta, 0, 2));
    const Factor three_mode = Factor::exponential(
        three_mode_squeezer_generator(space, std::sqrt(2.0) * kI * eta, 0, 1, 2));
    const std::vector<Factor> lhs{squeeze, splitter};
    const std::vector<Factor> rhs{splitter, three_mode};
    return block_deviation(lhs, rhs, safe_bound);
}

MultimodeDeviation verify_multimode_identity(int r, int s, Complex eta, const SpacePtr& space,
                                             int safe_bound) {
    const NetworkSpec spec = multimode_chain(r, s, eta);
    require_modes(*space, spec.num_modes(), "verify_multimode_identity");
    const std::vector<Factor> units = network_factors(spec, space);

    std::vector<int> a_modes(static_cast<std::size_t>(r));
    std::vector<int> b_modes(static_cast<std::size_t>(s));
    for (int l = 0; l < r; ++l) a_modes[static_cast<std::size_t>(l)] = l;
    for (int l = 0; l < s; ++l) b_modes[static_cast<std::size_t>(l)] = r + l;
    const PseudoBoson pa = pseudo_boson_chain_or_mode(a_modes);
    const PseudoBoson pb = pseudo_boson_chain_or_mode(b_modes);
    const LinearOperator pseudo_gen = pseudo_squeezer_generator(space, eta, pa, pb);

    MultimodeDeviation out;
    // U G U^dag with U the passive chain: undo the chain, apply G, redo it.
    std::vector<Factor> conjugated;
    for (std::size_t i = units.size(); i-- > 1;) {
        conjugated.push_back(Factor::exponential(-units[i].op));
    }
    conjugated.push_back(Factor::multiply(units.front().op));
    conjugated.insert(conjugated.end(), units.begin() + 1, units.end());
    const std::vector<Factor> target{Factor::multiply(pseudo_gen)};
    out.generator = block_deviation(conjugated, target, safe_bound);

    std::vector<Factor> rhs(units.begin() + 1, units.end());
    rhs.push_back(Factor::exponential(pseudo_gen));
    out.unitary = block_deviation(units, rhs, safe_bound);
    return out;
}

LinearOperator exotic_network_generator(const SpacePtr& space, double eta, double s_prime) {
    require_modes(*space, 3, "exotic_network_generator");
    const LinearOperator a1 = annihilation(space, 0);
    const LinearOperator a2 = annihilation(space, 1);
    const LinearOperator b1 = annihilation(space, 2);
    const LinearOperator pair1 = a1 * b1;
    const LinearOperator pair2 = a2 * b1;
    const LinearOperator hop = a2.adjoint() * a1;
    const double w = eta / std::sqrt(2.0);
    const LinearOperator gen = (w * std::cosh(s_prime / 2.0)) * (pair1 - pair1.adjoint()) +
                               (w * std::sinh(s_prime / 2.0)) * (hop - hop.adjoint()) -
                               Complex(w) * (pair2 - pair2.adjoint());
    return gen;
}

LinearOperator exotic_network_operator(const SpacePtr& space, double eta, double s_prime) {
    return expm(exotic_network_generator(space, eta, s_prime));
}

double verify_exotic_identity(double eta, double s_prime, const SpacePtr& space, int safe_bound) {
    require_modes(*space, 3, "verify_exotic_identity");
    const Factor three_mode = Factor::exponential(
        three_mode_squeezer_generator(space, std::sqrt(2.0) * kI * eta, 0, 1, 2));
    const Factor extra = Factor::exponential(squeezer_generator(space, kI * s_prime, 1, 2));
    const Factor network = Factor::exponential(exotic_network_generator(space, eta, s_prime));
    const std::vector<Factor> lhs{three_mode, extra};
    const std::vector<Factor> rhs{extra, network};
    return block_deviation(lhs, rhs, safe_bound);
}

}  // namespace su11
