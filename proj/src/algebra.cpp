#include "su11/algebra.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>

namespace su11 {

// ---------------------------------------------------------------------------
// Labels

void validate(const WeightLabel& label) {
    const int two_k = label.irrep.two_k;
    if (two_k < 1) {
        throw DomainError("weight label: 2k must be a positive integer");
    }
    const int diff = label.two_mu - two_k;
    if (diff < 0 || diff % 2 != 0) {
        throw DomainError("weight label: mu - k must be a nonnegative integer");
    }
    if (label.irrep.branch == Branch::BPlus && two_k < 2) {
        throw DomainError("weight label: k = 1/2 only occurs on the APlus branch");
    }
}

WeightLabel irrep_labels_from_occupations(int n_a, int n_b) {
    if (n_a < 0 || n_b < 0) {
        throw DomainError("irrep_labels_from_occupations: occupations must be nonnegative");
    }
    WeightLabel label;
    label.irrep.two_k = std::abs(n_a - n_b) + 1;
    label.irrep.branch = (n_b > n_a) ? Branch::BPlus : Branch::APlus;
    label.two_mu = n_a + n_b + 1;
    return label;
}

std::pair<int, int> pseudo_occupations(const WeightLabel& label) {
    validate(label);
    // n_major = k + mu - 1, n_minor = mu - k
    const int major = (label.irrep.two_k + label.two_mu - 2) / 2;
    const int minor = (label.two_mu - label.irrep.two_k) / 2;
    if (label.irrep.branch == Branch::APlus) {
        return {major, minor};
    }
    return {minor, major};
}

std::string to_string(Branch branch) { return branch == Branch::APlus ? "A" : "B"; }

// ---------------------------------------------------------------------------
// Pseudo-bosons

double PseudoBoson::norm_squared() const {
    double total = 0.0;
    for (const Complex& c : coefficients) {
        total += std::norm(c);
    }
    return total;
}

namespace {

void require_distinct(std::span<const int> modes, const char* what) {
    std::set<int> seen(modes.begin(), modes.end());
    if (seen.size() != modes.size()) {
        throw DomainError(std::string(what) + ": mode indices must be distinct");
    }
}

void require_modes_in(const FockSpace& space, const PseudoBoson& pseudo) {
    for (int m : pseudo.modes) {
        if (m < 0 || m >= space.num_modes()) {
            throw DomainError("pseudo-boson mode " + std::to_string(m) + " out of range");
        }
    }
}

void require_disjoint(const PseudoBoson& a, const PseudoBoson& b) {
    for (int m : a.modes) {
        if (std::find(b.modes.begin(), b.modes.end(), m) != b.modes.end()) {
            throw DomainError("pseudo-bosons must act on disjoint mode sets");
        }
    }
}

}  // namespace

PseudoBoson make_pseudo_boson(std::vector<int> modes, std::vector<Complex> coefficients) {
    if (modes.empty() || modes.size() != coefficients.size()) {
        throw DomainError("pseudo-boson: need one coefficient per mode");
    }
    require_distinct(modes, "pseudo-boson");
    PseudoBoson out{std::move(modes), std::move(coefficients)};
    if (std::abs(out.norm_squared() - 1.0) > 1e-14) {
        throw DomainError("pseudo-boson: coefficients must have unit norm");
    }
    return out;
}

PseudoBoson pseudo_boson_chain(std::span<const int> modes) {
    const int r = static_cast<int>(modes.size());
    if (r < 2) {
        throw DomainError("pseudo_boson_chain: r must be >= 2");
    }
    require_distinct(modes, "pseudo_boson_chain");
    // |c_l|^2 = 2^-l for l < r and 2^-(r-1) for l = r. Over the common
    // denominator 2^(r-1) the numerators are 2^(r-1-l) and 1, which sum to
    // 2^(r-1) exactly.
    std::vector<Complex> coefficients;
    coefficients.reserve(modes.size());
    for (int l = 1; l <= r; ++l) {
        const int power = (l < r) ? l : r - 1;
        const double sign = ((l - 1) % 2 == 0) ? 1.0 : -1.0;
        coefficients.emplace_back(sign / std::sqrt(std::ldexp(1.0, power)), 0.0);
    }
    return PseudoBoson{std::vector<int>(modes.begin(), modes.end()), std::move(coefficients)};
}

PseudoBoson pseudo_boson_chain_or_mode(std::span<const int> modes) {
    if (modes.size() == 1) {
        return PseudoBoson{{modes[0]}, {Complex(1.0, 0.0)}};
    }
    return pseudo_boson_chain(modes);
}

LinearOperator pseudo_annihilation(const SpacePtr& space, const PseudoBoson& pseudo) {
    require_modes_in(*space, pseudo);
    LinearOperator out = LinearOperator::zero(space);
    for (std::size_t l = 0; l < pseudo.size(); ++l) {
        out = out + pseudo.coefficients[l] * annihilation(space, pseudo.modes[l]);
    }
    return out;
}

LinearOperator pseudo_creation(const SpacePtr& space, const PseudoBoson& pseudo) {
    return pseudo_annihilation(space, pseudo).adjoint();
}

LinearOperator pseudo_number_operator(const SpacePtr& space, const PseudoBoson& pseudo) {
    const LinearOperator a = pseudo_annihilation(space, pseudo);
    LinearOperator n = a.adjoint() * a;
    return {space, n.matrix(), true};
}

// ---------------------------------------------------------------------------
// Realizations

namespace {

LinearOperator assemble_casimir(const LinearOperator& k_plus, const LinearOperator& k_minus,
                                const LinearOperator& k_zero) {
    LinearOperator c = k_zero * k_zero - 0.5 * (k_plus * k_minus + k_minus * k_plus);
    return {c.space(), c.matrix(), true};
}

}  // namespace

Realization two_mode_realization(const SpacePtr& space, int mode_a, int mode_b) {
    if (mode_a == mode_b) {
        throw DomainError("two_mode_realization: modes must be distinct");
    }
    const LinearOperator a = annihilation(space, mode_a);
    const LinearOperator b = annihilation(space, mode_b);
    const LinearOperator ad = a.adjoint();
    const LinearOperator bd = b.adjoint();
    LinearOperator k_plus = ad * bd;
    LinearOperator k_minus = a * b;
    LinearOperator k_zero = 0.5 * (ad * a + b * bd);
    k_zero = LinearOperator(space, k_zero.matrix(), true);
    LinearOperator casimir = assemble_casimir(k_plus, k_minus, k_zero);
    return Realization{std::move(k_plus), std::move(k_minus), std::move(k_zero), std::move(casimir),
                       TwoModeProvenance{mode_a, mode_b}};
}

Realization pseudo_two_mode_realization(const SpacePtr& space, const PseudoBoson& pseudo_a,
                                        const PseudoBoson& pseudo_b) {
    require_disjoint(pseudo_a, pseudo_b);
    const LinearOperator a = pseudo_annihilation(space, pseudo_a);
    const LinearOperator b = pseudo_annihilation(space, pseudo_b);
    const LinearOperator ad = a.adjoint();
    const LinearOperator bd = b.adjoint();
    LinearOperator k_minus = a * b;
    LinearOperator k_plus = ad * bd;
    LinearOperator k_zero = 0.5 * (ad * a + bd * b + LinearOperator::identity(space));
    k_zero = LinearOperator(space, k_zero.matrix(), true);
    LinearOperator casimir = assemble_casimir(k_plus, k_minus, k_zero);
    return Realization{std::move(k_plus), std::move(k_minus), std::move(k_zero), std::move(casimir),
                       PseudoTwoModeProvenance{pseudo_a.modes, pseudo_b.modes}};
}

LinearOperator photon_difference_casimir(const SpacePtr& space, const PseudoBoson& pseudo_a,
                                         const PseudoBoson& pseudo_b) {
    const LinearOperator diff =
        pseudo_number_operator(space, pseudo_a) - pseudo_number_operator(space, pseudo_b);
    LinearOperator c = 0.25 * (diff * diff - LinearOperator::identity(space));
    return {space, c.matrix(), true};
}

ClosureResiduals closure_residuals(const Realization& r, int safe_bound) {
    ClosureResiduals out;
    out.zero_plus = max_abs_restricted(commutator(r.k_zero, r.k_plus) - r.k_plus, safe_bound);
    out.zero_minus = max_abs_restricted(commutator(r.k_zero, r.k_minus) + r.k_minus, safe_bound);
    out.minus_plus =
        max_abs_restricted(commutator(r.k_minus, r.k_plus) - 2.0 * r.k_zero, safe_bound);
    return out;
}

// ---------------------------------------------------------------------------
// Pseudo-number states

namespace {

struct LocalTerm {
    Occupations counts;  // one entry per pseudo-boson mode
    Complex amplitude;
};

void compositions(int remaining, std::size_t part, Occupations& current,
                  std::vector<Occupations>& out) {
    if (part + 1 == current.size()) {
        current[part] = remaining;
        out.push_back(current);
        return;
    }
    for (int n = remaining; n >= 0; --n) {
        current[part] = n;
        compositions(remaining - n, part + 1, current, out);
    }
}

// n!/prod n_l! as a running product of binomials.
double multinomial(const Occupations& counts) {
    double value = 1.0;
    int used = 0;
    for (int k : counts) {
        for (int j = 1; j <= k; ++j) {
            value *= static_cast<double>(used + j) / static_cast<double>(j);
        }
        used += k;
    }
    return value;
}

// Expansion coefficients C = sqrt(n!/prod n_l!) prod c_l^(n_l).
std::vector<LocalTerm> pseudo_number_terms(int n, const PseudoBoson& pseudo) {
    std::vector<Occupations> parts;
    Occupations current(pseudo.size(), 0);
    compositions(n, 0, current, parts);
    std::vector<LocalTerm> out;
    out.reserve(parts.size());
    for (auto& counts : parts) {
        Complex amp = std::sqrt(multinomial(counts));
        for (std::size_t l = 0; l < counts.size(); ++l) {
            if (counts[l] > 0) {
                amp *= std::pow(pseudo.coefficients[l], counts[l]);
            }
        }
        if (amp != Complex(0.0, 0.0)) {
            out.push_back({std::move(counts), amp});
        }
    }
    return out;
}

void require_fits(const FockSpace& space, int n) {
    if (n < 0) {
        throw DomainError("pseudo-number state: n must be nonnegative");
    }
    if (n > space.cutoff() - 1) {
        throw CapacityError("pseudo-number state: n = " + std::to_string(n) +
                            " exceeds the per-mode cutoff");
    }
    if (space.total_photon_cap() && n > *space.total_photon_cap()) {
        throw CapacityError("pseudo-number state: n exceeds the total photon cap");
    }
}

}  // namespace

PseudoNumberState pseudo_number_state(const SpacePtr& space, int n, const PseudoBoson& pseudo,
                                      Side side) {
    require_modes_in(*space, pseudo);
    require_fits(*space, n);
    DenseVector amps = DenseVector::Zero(static_cast<Eigen::Index>(space->dimension()));
    Occupations occ(static_cast<std::size_t>(space->num_modes()), 0);
    for (const LocalTerm& term : pseudo_number_terms(n, pseudo)) {
        for (std::size_t l = 0; l < pseudo.size(); ++l) {
            occ[static_cast<std::size_t>(pseudo.modes[l])] = term.counts[l];
        }
        amps[static_cast<Eigen::Index>(*space->index_of(occ))] = term.amplitude;
    }
    return PseudoNumberState{n, side, StateVector(space, std::move(amps))};
}

WeightState weight_state(const SpacePtr& space, const WeightLabel& label,
                         const PseudoBoson& pseudo_a, const PseudoBoson& pseudo_b) {
    require_modes_in(*space, pseudo_a);
    require_modes_in(*space, pseudo_b);
    require_disjoint(pseudo_a, pseudo_b);
    const auto [n_a, n_b] = pseudo_occupations(label);
    require_fits(*space, n_a);
    require_fits(*space, n_b);
    if (space->total_photon_cap() && n_a + n_b > *space->total_photon_cap()) {
        throw CapacityError("weight state: total photons exceed the space cap");
    }
    const auto a_terms = pseudo_number_terms(n_a, pseudo_a);
    const auto b_terms = pseudo_number_terms(n_b, pseudo_b);
    DenseVector amps = DenseVector::Zero(static_cast<Eigen::Index>(space->dimension()));
    Occupations occ(static_cast<std::size_t>(space->num_modes()), 0);
    for (const LocalTerm& ta : a_terms) {
        for (std::size_t l = 0; l < pseudo_a.size(); ++l) {
            occ[static_cast<std::size_t>(pseudo_a.modes[l])] = ta.counts[l];
        }
        for (const LocalTerm& tb : b_terms) {
            for (std::size_t l = 0; l < pseudo_b.size(); ++l) {
                occ[static_cast<std::size_t>(pseudo_b.modes[l])] = tb.counts[l];
            }
            amps[static_cast<Eigen::Index>(*space->index_of(occ))] = ta.amplitude * tb.amplitude;
        }
    }
    return WeightState{label, StateVector(space, std::move(amps))};
}

std::vector<WeightState> weight_basis(const SpacePtr& space, const PseudoBoson& pseudo_a,
                                      const PseudoBoson& pseudo_b, int photon_bound) {
    int n_max = space->cutoff() - 1;
    if (space->total_photon_cap()) {
        n_max = std::min(n_max, *space->total_photon_cap());
        photon_bound = std::min(photon_bound, *space->total_photon_cap());
    }
    std::vector<WeightLabel> labels;
    for (int n_a = 0; n_a <= n_max; ++n_a) {
        for (int n_b = 0; n_b <= n_max && n_a + n_b <= photon_bound; ++n_b) {
            labels.push_back(irrep_labels_from_occupations(n_a, n_b));
        }
    }
    std::sort(labels.begin(), labels.end(), [](const WeightLabel& x, const WeightLabel& y) {
        return std::tuple(x.irrep.two_k, x.irrep.branch, x.two_mu) <
               std::tuple(y.irrep.two_k, y.irrep.branch, y.two_mu);
    });
    std::vector<WeightState> out;
    out.reserve(labels.size());
    for (const WeightLabel& label : labels) {
        out.push_back(weight_state(space, label, pseudo_a, pseudo_b));
    }
    return out;
}

Decomposition decompose(const StateVector& psi, const PseudoBoson& pseudo_a,
                        const PseudoBoson& pseudo_b, std::optional<int> photon_bound) {
    const SpacePtr& space = psi.space();
    const int bound = photon_bound.value_or(space->max_total_photons());
    Decomposition out;
    DenseVector rest = psi.amplitudes();
    for (const WeightState& w : weight_basis(space, pseudo_a, pseudo_b, bound)) {
        const Complex amp = w.expansion.inner(psi);
        if (amp == Complex(0.0, 0.0)) {
            continue;
        }
        rest -= amp * w.expansion.amplitudes();
        out.terms.push_back({w.label, amp});
    }
    out.residual_norm = rest.norm();
    return out;
}

}  // namespace su11
