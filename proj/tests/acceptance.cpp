// Acceptance checks: one PASS/FAIL line per criterion, exit status 1 if any fail.

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <numeric>
#include <random>
#include <sstream>
#include <string>

#include "su11/circuit.hpp"
#include "su11/report.hpp"

using namespace su11;

namespace {

const Complex kI(0.0, 1.0);

struct Outcome {
    bool pass = false;
    std::string detail;
};

std::string fmt(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3e", x);
    return buf;
}

/// "name=value<tol" fragments joined for the detail column.
struct Detail {
    std::string text;
    bool pass = true;

    void below(const std::string& name, double value, double tol) {
        const bool ok = std::isfinite(value) && value < tol;
        pass = pass && ok;
        add(name + "=" + fmt(value) + (ok ? "<" : ">=") + fmt(tol));
    }
    void exact_zero(const std::string& name, double value) {
        const bool ok = value == 0.0;
        pass = pass && ok;
        add(name + "=" + fmt(value) + (ok ? "==0" : "!=0"));
    }
    void require(const std::string& name, bool ok) {
        pass = pass && ok;
        add(name + (ok ? ":ok" : ":FAILED"));
    }
    void add(const std::string& s) { text += (text.empty() ? "" : " ") + s; }
    Outcome done() const { return {pass, text}; }
};

std::vector<int> span_modes(int first, int count) {
    std::vector<int> m(static_cast<std::size_t>(count));
    std::iota(m.begin(), m.end(), first);
    return m;
}

std::pair<PseudoBoson, PseudoBoson> chain_pair(int r, int s) {
    return {pseudo_boson_chain_or_mode(span_modes(0, r)), pseudo_boson_chain_or_mode(span_modes(r, s))};
}

LinearOperator side_difference(const SpacePtr& space, int r, int s) {
    LinearOperator diff = LinearOperator::zero(space);
    for (int m = 0; m < r; ++m) diff = diff + number_operator(space, m);
    for (int m = 0; m < s; ++m) diff = diff - number_operator(space, r + m);
    return diff;
}

NetworkSpec three_mode_primitive() {
    return *circuit::parse("modes a:2 b:1\nsq a1 b1 eta=0.4\nbs a2 a1 theta=pi/2 phi=pi\n").spec;
}

NetworkSpec exotic_network() {
    return *circuit::parse(
                "modes a:2 b:1\nsq a1 b1 eta=0+0.2i\nbs a2 a1 theta=pi/2 phi=pi\nsq a2 b1 eta=0+0.3i\n")
                .spec;
}

const std::vector<std::pair<int, int>> kPseudoShapes{{2, 1}, {2, 2}, {3, 2}};

// 1. su(1,1) closure at d = 6 on total photons <= d - 3.
Outcome closure() {
    const int d = 6;
    Detail out;
    out.below("two_mode", closure_residuals(two_mode_realization(make_space(2, d), 0, 1), d - 3).max(),
              1e-10);
    for (auto [r, s] : kPseudoShapes) {
        const auto [pa, pb] = chain_pair(r, s);
        const auto real = pseudo_two_mode_realization(make_space(r + s, d), pa, pb);
        out.below("pseudo(" + std::to_string(r) + "," + std::to_string(s) + ")",
                  closure_residuals(real, d - 3).max(), 1e-10);
    }
    return out.done();
}

// Weight states with 2k <= 5 and 2mu <= 9 on a space large enough to hold them
// and one extra raising step.
struct LabelRange {
    SpacePtr space;
    Realization real;
    std::vector<WeightState> states;
};

std::vector<LabelRange> label_ranges() {
    const int d = 10;
    std::vector<LabelRange> out;
    const auto add = [&](const SpacePtr& space, const PseudoBoson& pa, const PseudoBoson& pb) {
        LabelRange lr{space, pseudo_two_mode_realization(space, pa, pb), {}};
        for (auto& w : weight_basis(space, pa, pb, 8)) {
            if (w.label.irrep.two_k <= 5 && w.label.two_mu <= 9) lr.states.push_back(std::move(w));
        }
        out.push_back(std::move(lr));
    };
    const auto two = make_space(2, d);
    add(two, PseudoBoson{{0}, {1.0}}, PseudoBoson{{1}, {1.0}});
    {
        const auto [pa, pb] = chain_pair(2, 1);
        add(make_space(3, d), pa, pb);
    }
    {
        const auto [pa, pb] = chain_pair(2, 2);
        add(make_space(4, d), pa, pb);
    }
    return out;
}

// 2. Casimir eigenvalues k(k-1).
Outcome casimir(const std::vector<LabelRange>& ranges) {
    Detail out;
    double worst = 0.0;
    std::size_t count = 0;
    for (const auto& lr : ranges) {
        for (const auto& w : lr.states) {
            const double k = w.label.k();
            const DenseVector diff = apply(lr.real.casimir, w.expansion).amplitudes() -
                                     k * (k - 1.0) * w.expansion.amplitudes();
            worst = std::max(worst, diff.cwiseAbs().maxCoeff());
            ++count;
        }
    }
    out.require("states=" + std::to_string(count), count > 0);
    out.below("eigen_residual", worst, 1e-10);
    return out.done();
}

// 3. Ladder matrix elements and off-target overlaps.
Outcome ladder(const std::vector<LabelRange>& ranges) {
    Detail out;
    double on_target = 0.0;
    double off_target = 0.0;
    for (const auto& lr : ranges) {
        for (const auto& w : lr.states) {
            const double k = w.label.k();
            const double mu = w.label.mu();
            const StateVector raised = apply(lr.real.k_plus, w.expansion);
            for (const auto& t : lr.states) {
                const Complex overlap = t.expansion.inner(raised);
                if (t.label.irrep == w.label.irrep && t.label.two_mu == w.label.two_mu + 2) {
                    on_target = std::max(on_target,
                                         std::abs(overlap - std::sqrt((mu + k) * (mu - k + 1.0))));
                } else {
                    off_target = std::max(off_target, std::abs(overlap));
                }
            }
        }
    }
    out.below("matrix_element", on_target, 1e-9);
    out.below("off_target", off_target, 1e-9);
    return out.done();
}

// 4. Pseudo-number orthonormality for r in {2, 3}.
Outcome orthonormality() {
    Detail out;
    for (int r : {2, 3}) {
        const auto space = make_space(r, 6);
        const auto pa = pseudo_boson_chain(span_modes(0, r));
        std::vector<StateVector> states;
        for (int n = 0; n <= 4; ++n) states.push_back(pseudo_number_state(space, n, pa).expansion);
        double worst = 0.0;
        for (std::size_t i = 0; i < states.size(); ++i) {
            for (std::size_t j = 0; j < states.size(); ++j) {
                worst = std::max(worst, std::abs(states[i].inner(states[j]) - (i == j ? 1.0 : 0.0)));
            }
        }
        out.below("gram_r" + std::to_string(r), worst, 1e-10);
    }
    return out.done();
}

// 5. Multimode identity at d = 6, eta = 0.2, safe bound 3.
Outcome multimode() {
    Detail out;
    for (auto [r, s] : std::vector<std::pair<int, int>>{{2, 2}, {3, 2}}) {
        const auto dev = verify_multimode_identity(r, s, 0.2, make_space(r + s, 6), 3);
        const std::string tag = "(" + std::to_string(r) + "," + std::to_string(s) + ")";
        out.below("generator" + tag, dev.generator, 1e-9);
        out.below("unitary" + tag, dev.unitary, 1e-7);
    }
    return out.done();
}

// 6. Three-mode identity at eta = 0.2, d = 8, safe bound 4.
Outcome three_mode() {
    Detail out;
    out.below("deviation", verify_three_mode_identity(0.2, make_space(3, 8), 4), 1e-8);
    return out.done();
}

// 7. Photon-difference conservation.
Outcome photon_difference() {
    Detail out;
    const int d = 6;
    const int bound = 3;
    std::vector<NetworkSpec> nets{three_mode_primitive()};
    for (auto [r, s] : kPseudoShapes) nets.push_back(multimode_chain(r, s, Complex(0.2, 0.1)));
    double compiled = 0.0;
    for (const auto& spec : nets) {
        if (!reduce(spec)) continue;
        const auto space = make_space(spec.num_modes(), d);
        const auto factors = network_factors(spec, space);
        const LinearOperator diff = side_difference(space, spec.num_a_modes, spec.num_b_modes);
        std::vector<Factor> lhs{Factor::multiply(diff)};
        lhs.insert(lhs.end(), factors.begin(), factors.end());
        std::vector<Factor> rhs = factors;
        rhs.push_back(Factor::multiply(diff));
        compiled = std::max(compiled, block_deviation(lhs, rhs, bound));
    }
    out.below("compiled", compiled, 1e-9);

    double generator = 0.0;
    for (auto [r, s] : kPseudoShapes) {
        const auto space = make_space(r + s, d);
        const auto [pa, pb] = chain_pair(r, s);
        const auto real = pseudo_two_mode_realization(space, pa, pb);
        const Complex eta(0.2, 0.1);
        const LinearOperator gen = eta * real.k_minus + std::conj(eta) * real.k_plus;
        generator = std::max(generator, max_abs(commutator(side_difference(space, r, s), gen)));
    }
    out.exact_zero("generator", generator);
    return out.done();
}

// 8. Exotic realization.
Outcome exotic() {
    Detail out;
    {
        const auto space = make_space(3, 5);
        const auto ex = exotic_realization(space, 0, 1, 2);
        out.below("closure(d=5)", ex.closure_residual, 1e-9);
    }
    {
        const auto space = make_space(3, 6);
        const auto ex = exotic_realization(space, 0, 1, 2);
        const LinearOperator u = exotic_diagonalizer(space, 0, 1);
        const LinearOperator target = number_operator(space, 1) - number_operator(space, 0);
        out.below("diagonalizer", max_abs_restricted(u * ex.kz * u.adjoint() - target, 3), 1e-9);
        out.below("identity", verify_exotic_identity(0.1, 0.3, space, 3), 1e-7);
    }
    return out.done();
}

// 9. Reduction classifier and reduce-compile agreement (d = 8, safe bound 2).
Outcome classifier() {
    Detail out;
    std::vector<std::pair<std::string, NetworkSpec>> reducible{{"primitive", three_mode_primitive()}};
    for (auto [r, s] : std::vector<std::pair<int, int>>{{1, 1}, {2, 1}, {2, 2}, {3, 2}, {4, 3}}) {
        reducible.emplace_back("chain" + std::to_string(r) + std::to_string(s),
                               multimode_chain(r, s, Complex(0.2, 0.0)));
    }
    bool all_reduce = true;
    for (const auto& [name, spec] : reducible) all_reduce = all_reduce && reduce(spec).has_value();
    out.require("reducible", all_reduce);
    out.require("exotic_rejected", !reduce(exotic_network()).has_value());

    double agreement = 0.0;
    for (const auto& [name, spec] : reducible) {
        if (spec.num_modes() > 5) continue;
        const auto form = reduce(spec);
        if (!form) continue;
        const auto space = make_space(spec.num_modes(), 8);
        agreement = std::max(agreement, block_deviation(reduced_factors(*form, space),
                                                        network_factors(spec, space), 2));
    }
    out.below("reduce_compile", agreement, 1e-8);
    return out.done();
}

// 10. Parser round trip and fuzzing.
Outcome parser() {
    Detail out;
    std::size_t files = 0;
    bool round_trip = true;
    for (const auto& entry : std::filesystem::directory_iterator(SU11_CORPUS_DIR)) {
        if (entry.path().extension() != ".qnet") continue;
        ++files;
        std::ifstream in(entry.path(), std::ios::binary);
        std::ostringstream text;
        text << in.rdbuf();
        const auto first = circuit::parse(text.str());
        if (!first.ok()) {
            round_trip = false;
            continue;
        }
        const auto second = circuit::parse(circuit::render(*first.spec));
        round_trip = round_trip && second.ok() && *second.spec == *first.spec;
    }
    out.require("corpus_files=" + std::to_string(files), files == 20);
    out.require("round_trip", round_trip);

    std::mt19937 rng(20240611);
    std::uniform_int_distribution<int> byte(0, 255);
    std::uniform_int_distribution<int> length(0, 128);
    bool structured = true;
    for (int trial = 0; trial < 100000; ++trial) {
        std::string text(static_cast<std::size_t>(length(rng)), '\0');
        for (char& c : text) c = static_cast<char>(byte(rng));
        const auto r = circuit::parse(text);
        if (r.ok() != r.spec.has_value()) structured = false;
        for (const auto& e : r.errors) {
            if (e.message.empty() || e.span.line < 1 || e.span.column_begin < 1 ||
                e.span.column_end < e.span.column_begin) {
                structured = false;
            }
        }
    }
    out.require("fuzz_1e5", structured);
    return out.done();
}

}  // namespace

int main() {
    const auto ranges = label_ranges();
    const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
        {"su(1,1) closure", closure},
        {"Casimir eigenvalues", [&] { return casimir(ranges); }},
        {"ladder matrix elements", [&] { return ladder(ranges); }},
        {"pseudo-number orthonormality", orthonormality},
        {"multimode identity", multimode},
        {"three-mode identity", three_mode},
        {"photon-difference conservation", photon_difference},
        {"exotic realization", exotic},
        {"reduction classifier", classifier},
        {"parser round trip and fuzz", parser},
    };
    int failed = 0;
    int index = 0;
    for (const auto& [name, run] : criteria) {
        ++index;
        Outcome o;
        try {
            o = run();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        std::printf("%s  %2d  %-32s %s\n", o.pass ? "PASS" : "FAIL", index, name.c_str(),
                    o.detail.c_str());
        std::fflush(stdout);
        if (!o.pass) ++failed;
    }
    std::printf("%d/%d criteria passed\n", index - failed, index);
    return failed == 0 ? 0 : 1;
}
