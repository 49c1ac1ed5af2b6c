#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "su11/report.hpp"

namespace py = pybind11;
using namespace su11;

namespace {

NetworkSpec parse_or_throw(const std::string& text) {
    auto result = circuit::parse(text);
    if (!result.ok()) {
        throw py::value_error(to_json(result.errors.front()).dump());
    }
    return *result.spec;
}

std::pair<PseudoBoson, PseudoBoson> chain_pair(int r, int s) {
    std::vector<int> a(static_cast<std::size_t>(r));
    std::vector<int> b(static_cast<std::size_t>(s));
    for (int l = 0; l < r; ++l) a[static_cast<std::size_t>(l)] = l;
    for (int l = 0; l < s; ++l) b[static_cast<std::size_t>(l)] = r + l;
    return {pseudo_boson_chain_or_mode(a), pseudo_boson_chain_or_mode(b)};
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Truncated Fock-space simulator and SU(1,1) network toolkit";
    m.attr("__version__") = std::string(tool_version());

    py::register_exception<CapacityError>(m, "CapacityError", PyExc_MemoryError);
    py::register_exception<DomainError>(m, "DomainError", PyExc_ValueError);
    py::register_exception<NumericalError>(m, "NumericalError", PyExc_ArithmeticError);

    m.def("dimension",
          [](int num_modes, int cutoff) { return make_space(num_modes, cutoff)->dimension(); },
          py::arg("num_modes"), py::arg("cutoff"));

    m.def("basis",
          [](int num_modes, int cutoff) {
              const auto space = make_space(num_modes, cutoff);
              std::vector<Occupations> out;
              out.reserve(space->dimension());
              for (std::size_t i = 0; i < space->dimension(); ++i) out.push_back(space->occupations(i));
              return out;
          },
          py::arg("num_modes"), py::arg("cutoff"));

    m.def("parse",
          [](const std::string& text) {
              const auto result = circuit::parse(text);
              Json doc{{"ok", result.ok()}, {"errors", Json::array()}};
              for (const auto& e : result.errors) doc["errors"].push_back(to_json(e));
              if (result.ok()) doc["canonical"] = circuit::render(*result.spec);
              return doc.dump();
          },
          py::arg("text"), "Parse circuit text; returns a JSON document.");

    m.def("simulate",
          [](const std::string& text, int cutoff, const std::string& input) {
              const NetworkSpec spec = parse_or_throw(text);
              const auto space = make_space(spec.num_modes(), cutoff);
              const StateVector out = evolve(spec, parse_input_state(space, input));
              return DenseVector(out.amplitudes());
          },
          py::arg("text"), py::arg("cutoff") = 6, py::arg("input") = "vacuum",
          "Evolve an input state through a circuit; returns amplitudes in basis order.");

    m.def("reduce",
          [](const std::string& text) {
              const NetworkSpec spec = parse_or_throw(text);
              Json doc;
              if (const auto form = su11::reduce(spec)) {
                  doc = {{"reducible", true},
                         {"pseudo_a", to_json(form->pseudo_a)},
                         {"pseudo_b", to_json(form->pseudo_b)},
                         {"eta", to_json(form->eta)}};
              } else {
                  const Reducibility why = classify(spec);
                  doc = {{"reducible", false}, {"reason", why.reason}};
                  doc["obstruction"] = why.obstruction ? Json(*why.obstruction) : Json(nullptr);
              }
              return doc.dump();
          },
          py::arg("text"));

    m.def("decompose",
          [](const DenseVector& amplitudes, int num_a_modes, int num_b_modes, int cutoff) {
              const auto space = make_space(num_a_modes + num_b_modes, cutoff);
              if (static_cast<std::size_t>(amplitudes.size()) != space->dimension()) {
                  throw DomainError("amplitude count does not match the space dimension");
              }
              const auto [pa, pb] = chain_pair(num_a_modes, num_b_modes);
              return to_json(su11::decompose(StateVector(space, amplitudes), pa, pb)).dump();
          },
          py::arg("amplitudes"), py::arg("num_a_modes"), py::arg("num_b_modes"), py::arg("cutoff"));

    m.def("verify",
          [](const std::string& suite, int cutoff, int safe_bound) {
              RunConfig config;
              config.cutoff = cutoff;
              config.safe_bound = safe_bound;
              config.validate();
              Json list = Json::array();
              for (const Check& c : run_suite(suite, config)) list.push_back(to_json(c));
              return list.dump();
          },
          py::arg("suite") = "all", py::arg("cutoff") = 6, py::arg("safe_bound") = 3);

    m.def("three_mode_identity",
          [](Complex eta, int cutoff, int safe_bound) {
              return verify_three_mode_identity(eta, make_space(3, cutoff), safe_bound);
          },
          py::arg("eta"), py::arg("cutoff"), py::arg("safe_bound"));
}
