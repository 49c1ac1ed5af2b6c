#include "su11/report.hpp"

#include <charconv>
#include <cmath>
#include <numeric>

namespace su11 {

std::string_view tool_version() { return SU11_VERSION; }

void RunConfig::validate() const {
    if (cutoff < 2) {
        throw DomainError("cutoff must be >= 2");
    }
    if (safe_bound < 0 || safe_bound > cutoff - 2) {
        throw DomainError("safe bound must lie in [0, cutoff - 2]");
    }
}

double RunConfig::tolerance(const std::string& check, double fallback) const {
    if (auto it = tolerance_overrides.find(check); it != tolerance_overrides.end()) {
        return it->second;
    }
    if (auto it = tolerance_overrides.find("*"); it != tolerance_overrides.end()) {
        return it->second;
    }
    return fallback;
}

Json to_json(const RunConfig& config) {
    Json tol = Json::object();
    for (const auto& [name, value] : config.tolerance_overrides) {
        tol[name] = value;
    }
    return Json{{"cutoff", config.cutoff},
                {"safe_bound", config.safe_bound},
                {"input", config.input},
                {"output", config.output_path ? Json(*config.output_path) : Json(nullptr)},
                {"tolerance_overrides", tol}};
}

Json to_json(Complex z) { return Json::array({z.real(), z.imag()}); }

Json to_json(const circuit::SourceSpan& span) {
    return Json{{"line", span.line},
                {"column_begin", span.column_begin},
                {"column_end", span.column_end}};
}

Json to_json(const circuit::ParseError& error) {
    return Json{{"kind", std::string(circuit::to_string(error.kind))},
                {"span", to_json(error.span)},
                {"message", error.message}};
}

Json to_json(const Decomposition& d) {
    Json terms = Json::array();
    for (const auto& t : d.terms) {
        terms.push_back(Json{{"two_k", t.label.irrep.two_k},
                             {"two_mu", t.label.two_mu},
                             {"branch", to_string(t.label.irrep.branch)},
                             {"amplitude", to_json(t.amplitude)}});
    }
    return Json{{"terms", terms}, {"residual_norm", d.residual_norm}};
}

Json to_json(const PseudoBoson& pseudo) {
    Json out = Json::array();
    for (const Complex& c : pseudo.coefficients) {
        out.push_back(to_json(c));
    }
    return out;
}

Json to_json(const Check& check) {
    return Json{{"name", check.name},
                {"max_deviation", check.max_deviation},
                {"tolerance", check.tolerance},
                {"pass", check.pass}};
}

Json report_header(const RunConfig& config) {
    return Json{{"tool", std::string(kToolName)},
                {"version", std::string(tool_version())},
                {"config", to_json(config)}};
}

// ---------------------------------------------------------------------------
// States

StateVector parse_input_state(const SpacePtr& space, std::string_view descriptor) {
    if (descriptor == "vacuum") {
        return StateVector::vacuum(space);
    }
    Occupations occ;
    std::size_t pos = 0;
    while (pos <= descriptor.size()) {
        const std::size_t comma = descriptor.find(',', pos);
        const std::string_view field = descriptor.substr(
            pos, comma == std::string_view::npos ? std::string_view::npos : comma - pos);
        int value = 0;
        const auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), value);
        if (field.empty() || ec != std::errc() || ptr != field.data() + field.size() || value < 0) {
            throw DomainError("input state: expected 'vacuum' or comma-separated occupations");
        }
        occ.push_back(value);
        if (comma == std::string_view::npos) {
            break;
        }
        pos = comma + 1;
    }
    if (static_cast<int>(occ.size()) != space->num_modes()) {
        throw DomainError("input state: expected " + std::to_string(space->num_modes()) +
                          " occupations");
    }
    return StateVector::basis(space, occ);
}

Json state_to_json(const StateVector& psi) {
    Json basis = Json::array();
    Json amps = Json::array();
    const DenseVector& v = psi.amplitudes();
    for (Eigen::Index i = 0; i < v.size(); ++i) {
        if (v[i] == Complex(0.0, 0.0)) {
            continue;
        }
        basis.push_back(psi.space()->occupations(static_cast<std::size_t>(i)));
        amps.push_back(to_json(v[i]));
    }
    return Json{{"basis", basis}, {"amplitudes", amps}};
}

StateVector state_from_json(const SpacePtr& space, const Json& doc) {
    const Json& basis = doc.at("basis");
    const Json& amps = doc.at("amplitudes");
    if (!basis.is_array() || !amps.is_array() || basis.size() != amps.size()) {
        throw DomainError("state file: 'basis' and 'amplitudes' must be arrays of equal length");
    }
    DenseVector v = DenseVector::Zero(static_cast<Eigen::Index>(space->dimension()));
    for (std::size_t i = 0; i < basis.size(); ++i) {
        const auto occ = basis[i].get<Occupations>();
        if (static_cast<int>(occ.size()) != space->num_modes()) {
            throw DomainError("state file: occupation vector has the wrong length");
        }
        const auto index = space->index_of(occ);
        if (!index) {
            throw CapacityError("state file: basis state outside the truncated space");
        }
        const auto pair = amps[i].get<std::vector<double>>();
        if (pair.size() != 2) {
            throw DomainError("state file: amplitudes must be [re, im] pairs");
        }
        v[static_cast<Eigen::Index>(*index)] += Complex(pair[0], pair[1]);
    }
    return {space, std::move(v)};
}

double boundary_weight(const StateVector& psi) {
    const FockSpace& space = *psi.space();
    double weight = 0.0;
    for (std::size_t i = 0; i < space.dimension(); ++i) {
        const Complex a = psi.amplitudes()[static_cast<Eigen::Index>(i)];
        if (a == Complex(0.0, 0.0)) {
            continue;
        }
        const Occupations occ = space.occupations(i);
        if (std::find(occ.begin(), occ.end(), space.cutoff() - 1) != occ.end()) {
            weight += std::norm(a);
        }
    }
    return weight;
}

// ---------------------------------------------------------------------------
// Suites

namespace {

struct Side2 {
    PseudoBoson a;
    PseudoBoson b;
};

Side2 chain_pair(int r, int s) {
    std::vector<int> am(static_cast<std::size_t>(r));
    std::vector<int> bm(static_cast<std::size_t>(s));
    std::iota(am.begin(), am.end(), 0);
    std::iota(bm.begin(), bm.end(), r);
    return {pseudo_boson_chain_or_mode(am), pseudo_boson_chain_or_mode(bm)};
}

class SuiteRunner {
public:
    explicit SuiteRunner(const RunConfig& config) : config_(config) {}

    void add(std::string name, double deviation, double fallback_tol) {
        Check c;
        c.tolerance = config_.tolerance(name, fallback_tol);
        c.name = std::move(name);
        c.max_deviation = deviation;
        // Zero tolerance means exact equality is required.
        c.pass = std::isfinite(deviation) &&
                 (c.tolerance == 0.0 ? deviation == 0.0 : deviation < c.tolerance);
        checks_.push_back(std::move(c));
    }

    void algebra() {
        const int d = config_.cutoff;
        const int b = config_.safe_bound;
        {
            const auto space = make_space(2, d);
            add("closure.two_mode", closure_residuals(two_mode_realization(space, 0, 1), b).max(),
                1e-10);
        }
        for (auto [r, s] : {std::pair{2, 1}, std::pair{2, 2}, std::pair{3, 2}}) {
            const auto space = make_space(r + s, d);
            const auto [pa, pb] = chain_pair(r, s);
            const Realization real = pseudo_two_mode_realization(space, pa, pb);
            const std::string tag = "_r" + std::to_string(r) + "_s" + std::to_string(s);
            add("closure.pseudo" + tag, closure_residuals(real, b).max(), 1e-10);

            // Photon-difference conservation at generator level, with the
            // side totals (diagonal, so the commutator is structurally exact).
            LinearOperator diff = LinearOperator::zero(space);
            for (int m = 0; m < r; ++m) diff = diff + number_operator(space, m);
            for (int m = 0; m < s; ++m) diff = diff - number_operator(space, r + m);
            const Complex eta(0.3, -0.7);
            const LinearOperator gen = eta * real.k_minus + std::conj(eta) * real.k_plus;
            add("photon_difference.generator" + tag, max_abs(commutator(diff, gen)), 0.0);
        }
        {
            const auto space = make_space(3, d);
            const auto [pa, pb] = chain_pair(2, 1);
            const Realization real = pseudo_two_mode_realization(space, pa, pb);
            add("casimir.closed_form_r2_s1",
                max_abs_restricted(real.casimir - photon_difference_casimir(space, pa, pb), b),
                1e-10);

            const auto basis = weight_basis(space, pa, pb, b);
            double eigen = 0.0;
            double ladder = 0.0;
            double gram = 0.0;
            for (std::size_t i = 0; i < basis.size(); ++i) {
                const auto& w = basis[i];
                const double k = w.label.k();
                const double mu = w.label.mu();
                const DenseVector cw = apply(real.casimir, w.expansion).amplitudes();
                eigen = std::max(eigen,
                                 (cw - k * (k - 1.0) * w.expansion.amplitudes()).cwiseAbs().maxCoeff());
                const StateVector raised = apply(real.k_plus, w.expansion);
                for (std::size_t j = 0; j < basis.size(); ++j) {
                    const auto& t = basis[j];
                    gram = std::max(gram, std::abs(t.expansion.inner(w.expansion) -
                                                   (i == j ? 1.0 : 0.0)));
                    const bool target = t.label.irrep == w.label.irrep && t.label.two_mu == w.label.two_mu + 2;
                    const double expected = target ? std::sqrt((mu + k) * (mu - k + 1.0)) : 0.0;
                    ladder = std::max(ladder, std::abs(t.expansion.inner(raised) - expected));
                }
            }
            add("casimir.eigenvalues_r2_s1", eigen, 1e-10);
            add("ladder.matrix_elements_r2_s1", ladder, 1e-9);
            add("weight_basis.gram_r2_s1", gram, 1e-10);
        }
        for (int r : {2, 3}) {
            const auto space = make_space(r, d);
            std::vector<int> modes(static_cast<std::size_t>(r));
            std::iota(modes.begin(), modes.end(), 0);
            const PseudoBoson pa = pseudo_boson_chain(modes);
            std::vector<StateVector> states;
            for (int n = 0; n <= std::min(4, d - 1); ++n) {
                states.push_back(pseudo_number_state(space, n, pa).expansion);
            }
            double gram = 0.0;
            for (std::size_t i = 0; i < states.size(); ++i) {
                for (std::size_t j = 0; j < states.size(); ++j) {
                    gram = std::max(gram, std::abs(states[i].inner(states[j]) - (i == j ? 1.0 : 0.0)));
                }
            }
            add("pseudo_number.orthonormality_r" + std::to_string(r), gram, 1e-10);
        }
    }

    void network() {
        const int d = config_.cutoff;
        const int b = config_.safe_bound;
        add("network.three_mode_identity", verify_three_mode_identity(0.2, make_space(3, d), b),
            1e-8);
        for (auto [r, s] : {std::pair{2, 2}, std::pair{3, 2}}) {
            const auto dev = verify_multimode_identity(r, s, 0.2, make_space(r + s, d), b);
            const std::string tag = "_r" + std::to_string(r) + "_s" + std::to_string(s);
            add("network.multimode_generator" + tag, dev.generator, 1e-9);
            add("network.multimode_unitary" + tag, dev.unitary, 1e-7);
        }
        for (auto [r, s] : {std::pair{2, 1}, std::pair{2, 2}}) {
            const NetworkSpec spec = multimode_chain(r, s, Complex(0.2, 0.1));
            const auto space = make_space(r + s, d);
            const std::vector<Factor> factors = network_factors(spec, space);
            LinearOperator diff = LinearOperator::zero(space);
            for (int m = 0; m < r; ++m) diff = diff + number_operator(space, m);
            for (int m = 0; m < s; ++m) diff = diff - number_operator(space, r + m);
            std::vector<Factor> diff_then_u{Factor::multiply(diff)};
            diff_then_u.insert(diff_then_u.end(), factors.begin(), factors.end());
            std::vector<Factor> u_then_diff = factors;
            u_then_diff.push_back(Factor::multiply(diff));
            const std::string tag = "_r" + std::to_string(r) + "_s" + std::to_string(s);
            add("network.photon_difference_compiled" + tag,
                block_deviation(u_then_diff, diff_then_u, b), 1e-9);

            const auto form = reduce(spec);
            const double agreement =
                form ? block_deviation(reduced_factors(*form, space), factors, b) : INFINITY;
            add("network.reduce_compile" + tag, agreement, 1e-8);

            std::vector<Element> a_chain(spec.elements.begin() + 1,
                                         spec.elements.begin() + r);
            add("network.passive_unitarity" + tag,
                passive_transform(a_chain, Side::A, r).unitarity_error(), 1e-12);
        }
    }

    void exotic() {
        const int d = config_.cutoff;
        const int b = config_.safe_bound;
        const auto space = make_space(3, d);
        const ExoticRealization ex = exotic_realization(space, 0, 1, 2, b);
        double herm = 0.0;
        for (const LinearOperator* k : {&ex.kx, &ex.ky, &ex.kz}) {
            herm = std::max(herm, max_abs(*k - k->adjoint()));
        }
        add("exotic.hermitian", herm, 0.0);
        add("exotic.closure", ex.closure_residual, 1e-9);
        add("exotic.su11_relations", closure_residuals(ex.realization, b).max(), 1e-9);
        const LinearOperator u = exotic_diagonalizer(space, 0, 1);
        const LinearOperator target = number_operator(space, 1) - number_operator(space, 0);
        add("exotic.diagonalizer", max_abs_restricted(u * ex.kz * u.adjoint() - target, b), 1e-9);
        add("exotic.printed_rotated_casimir",
            exotic_casimir_spectrum(ex, b).rotated_casimir_deviation, 1e-9);
        add("exotic.identity", verify_exotic_identity(0.1, 0.3, space, b), 1e-7);
    }

    std::vector<Check> take() { return std::move(checks_); }

private:
    const RunConfig& config_;
    std::vector<Check> checks_;
};

}  // namespace

std::vector<std::string> suite_names() { return {"algebra", "network", "exotic", "all"}; }

std::vector<Check> run_suite(std::string_view suite, const RunConfig& config) {
    config.validate();
    SuiteRunner runner(config);
    if (suite == "algebra" || suite == "all") runner.algebra();
    if (suite == "network" || suite == "all") runner.network();
    if (suite == "exotic" || suite == "all") runner.exotic();
    if (suite != "algebra" && suite != "network" && suite != "exotic" && suite != "all") {
        throw DomainError("unknown suite '" + std::string(suite) + "'");
    }
    return runner.take();
}

}  // namespace su11
