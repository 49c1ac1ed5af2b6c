#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <unistd.h>

#include "su11/report.hpp"

namespace {

using su11::Json;

enum ExitCode : int { kOk = 0, kCheckFailure = 1, kParseError = 2, kCapacityError = 3 };

/// Input problems that are not grammar errors but still map to exit code 2.
struct InputError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Thrown when a circuit file fails to parse; carries the structured errors.
struct CircuitParseFailure {
    std::vector<su11::circuit::ParseError> errors;
};

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw InputError("cannot read '" + path + "'");
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

void write_output(const Json& doc, const std::optional<std::string>& path) {
    const std::string text = doc.dump(2) + "\n";
    if (!path) {
        std::cout << text;
        return;
    }
    namespace fs = std::filesystem;
    const fs::path target(*path);
    fs::path tmp = target;
    tmp += ".tmp." + std::to_string(::getpid());
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) {
            throw InputError("cannot write '" + tmp.string() + "'");
        }
        out << text;
        out.flush();
        if (!out) {
            throw InputError("write failed for '" + tmp.string() + "'");
        }
    }
    std::error_code ec;
    fs::rename(tmp, target, ec);
    if (ec) {
        fs::remove(tmp);
        throw InputError("cannot move output into place: " + ec.message());
    }
}

su11::circuit::ParseResult load_circuit(const std::string& path) {
    auto result = su11::circuit::parse(read_file(path));
    if (!result.ok()) {
        throw CircuitParseFailure{result.errors};
    }
    return result;
}

/// Parses --tol entries: "<value>" applies to every check, "<name>=<value>" to one.
std::map<std::string, double> parse_tolerances(const std::vector<std::string>& entries) {
    std::map<std::string, double> out;
    for (const std::string& entry : entries) {
        const auto eq = entry.find('=');
        const std::string name = eq == std::string::npos ? "*" : entry.substr(0, eq);
        const std::string value = eq == std::string::npos ? entry : entry.substr(eq + 1);
        std::size_t used = 0;
        double v = 0.0;
        try {
            v = std::stod(value, &used);
        } catch (const std::exception&) {
            used = 0;
        }
        if (used != value.size() || value.empty() || !(v >= 0.0)) {
            throw InputError("--tol: expected <value> or <check>=<value>, got '" + entry + "'");
        }
        out[name] = v;
    }
    return out;
}

Json with_header(const su11::RunConfig& config, const std::string& command, Json body) {
    Json doc = su11::report_header(config);
    doc["command"] = command;
    for (auto& [key, value] : body.items()) {
        doc[key] = std::move(value);
    }
    return doc;
}

std::pair<su11::PseudoBoson, su11::PseudoBoson> chain_pseudo_bosons(int r, int s) {
    std::vector<int> a(static_cast<std::size_t>(r));
    std::vector<int> b(static_cast<std::size_t>(s));
    for (int l = 0; l < r; ++l) a[static_cast<std::size_t>(l)] = l;
    for (int l = 0; l < s; ++l) b[static_cast<std::size_t>(l)] = r + l;
    return {su11::pseudo_boson_chain_or_mode(a), su11::pseudo_boson_chain_or_mode(b)};
}

int cmd_simulate(const std::string& file, const su11::RunConfig& config) {
    const auto parsed = load_circuit(file);
    const su11::NetworkSpec& spec = *parsed.spec;
    const auto space = su11::make_space(spec.num_modes(), config.cutoff);
    const su11::StateVector input = su11::parse_input_state(space, config.input);
    const su11::StateVector output = su11::evolve(spec, input);
    Json body = su11::state_to_json(output);
    body["norm_leakage"] = su11::boundary_weight(output);
    body["num_a_modes"] = spec.num_a_modes;
    body["num_b_modes"] = spec.num_b_modes;
    write_output(with_header(config, "simulate", std::move(body)), config.output_path);
    return kOk;
}

int cmd_decompose(const std::string& file, const su11::RunConfig& config) {
    Json body;
    std::optional<su11::StateVector> psi;
    su11::PseudoBoson pa;
    su11::PseudoBoson pb;
    if (std::filesystem::path(file).extension() == ".json") {
        Json doc;
        try {
            doc = Json::parse(read_file(file));
            const int r = doc.at("num_a_modes").get<int>();
            const int s = doc.at("num_b_modes").get<int>();
            if (r < 1 || s < 1) {
                throw InputError("state file: num_a_modes and num_b_modes must be >= 1");
            }
            const auto space = su11::make_space(r + s, config.cutoff);
            psi = su11::state_from_json(space, doc);
            std::tie(pa, pb) = chain_pseudo_bosons(r, s);
        } catch (const Json::exception& e) {
            throw InputError(std::string("state file: ") + e.what());
        }
        body["pseudo_source"] = "chain";
    } else {
        const auto parsed = load_circuit(file);
        const su11::NetworkSpec& spec = *parsed.spec;
        const auto space = su11::make_space(spec.num_modes(), config.cutoff);
        psi = su11::evolve(spec, su11::parse_input_state(space, config.input));
        if (const auto form = su11::reduce(spec)) {
            pa = form->pseudo_a;
            pb = form->pseudo_b;
            body["pseudo_source"] = "reduced";
        } else {
            std::tie(pa, pb) = chain_pseudo_bosons(spec.num_a_modes, spec.num_b_modes);
            body["pseudo_source"] = "chain";
        }
    }
    body["pseudo_a"] = su11::to_json(pa);
    body["pseudo_b"] = su11::to_json(pb);
    Json decomposition = su11::to_json(su11::decompose(*psi, pa, pb));
    for (auto& [key, value] : decomposition.items()) {
        body[key] = std::move(value);
    }
    write_output(with_header(config, "decompose", std::move(body)), config.output_path);
    return kOk;
}

int cmd_reduce(const std::string& file, const su11::RunConfig& config) {
    const auto parsed = load_circuit(file);
    const su11::NetworkSpec& spec = *parsed.spec;
    Json body;
    if (const auto form = su11::reduce(spec)) {
        body["reducible"] = true;
        body["pseudo_a"] = su11::to_json(form->pseudo_a);
        body["pseudo_b"] = su11::to_json(form->pseudo_b);
        body["pseudo_a_modes"] = form->pseudo_a.modes;
        body["pseudo_b_modes"] = form->pseudo_b.modes;
        body["eta"] = su11::to_json(form->eta);
    } else {
        const su11::Reducibility why = su11::classify(spec);
        body["reducible"] = false;
        body["obstruction_span"] =
            why.obstruction ? su11::to_json(parsed.element_spans.at(*why.obstruction)) : Json(nullptr);
        body["reason"] = why.reason;
    }
    write_output(with_header(config, "reduce", std::move(body)), config.output_path);
    return kOk;
}

int cmd_verify(const std::string& suite, const su11::RunConfig& config) {
    const std::vector<su11::Check> checks = su11::run_suite(suite, config);
    Json list = Json::array();
    bool all = true;
    for (const su11::Check& c : checks) {
        list.push_back(su11::to_json(c));
        all = all && c.pass;
    }
    Json body{{"suite", suite}, {"checks", list}, {"pass", all}};
    write_output(with_header(config, "verify", std::move(body)), config.output_path);
    return all ? kOk : kCheckFailure;
}

int cmd_parse(const std::string& file, const su11::RunConfig& config) {
    const auto result = su11::circuit::parse(read_file(file));
    Json body;
    body["ok"] = result.ok();
    Json errors = Json::array();
    for (const auto& e : result.errors) {
        errors.push_back(su11::to_json(e));
    }
    body["errors"] = errors;
    if (result.ok()) {
        Json warnings = Json::array();
        for (const auto& w : su11::circuit::validate(*result.spec, result.element_spans)) {
            Json entry{{"message", w.message}};
            entry["span"] = w.span ? su11::to_json(*w.span) : Json(nullptr);
            warnings.push_back(entry);
        }
        body["warnings"] = warnings;
        body["canonical"] = su11::circuit::render(*result.spec);
    }
    write_output(with_header(config, "parse", std::move(body)), config.output_path);
    return result.ok() ? kOk : kParseError;
}

void report_error(const std::string& kind, const std::string& message,
                  const std::vector<su11::circuit::ParseError>& errors = {}) {
    Json doc{{"tool", std::string(su11::kToolName)},
             {"version", std::string(su11::tool_version())},
             {"error", kind},
             {"message", message}};
    if (!errors.empty()) {
        Json list = Json::array();
        for (const auto& e : errors) {
            list.push_back(su11::to_json(e));
        }
        doc["errors"] = list;
    }
    std::cerr << doc.dump(2) << "\n";
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Truncated Fock-space simulator and SU(1,1) network toolkit", "su11net"};
    app.set_version_flag("--version", std::string(su11::tool_version()));
    app.require_subcommand(1);

    su11::RunConfig config;
    std::string out_path;
    std::vector<std::string> tolerances;
    std::string file;
    std::string suite = "all";

    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--cutoff", config.cutoff, "Per-mode cutoff d (occupations 0..d-1)")
            ->capture_default_str();
        sub->add_option("--safe-bound", config.safe_bound,
                        "Total-photon bound of the checked block (<= cutoff - 2)")
            ->capture_default_str();
        sub->add_option("--input", config.input, "'vacuum' or comma-separated occupations")
            ->capture_default_str();
        sub->add_option("--out", out_path, "Write the JSON document here (atomically)");
        sub->add_option("--tol", tolerances, "Tolerance override: <value> or <check>=<value>");
    };

    auto* simulate = app.add_subcommand("simulate", "Run a circuit on an input state");
    auto* decompose = app.add_subcommand("decompose", "Decompose an output or stored state into irreps");
    auto* reduce = app.add_subcommand("reduce", "Reduce a circuit to a pseudo-two-mode squeezer");
    auto* verify = app.add_subcommand("verify", "Run a verification suite");
    auto* parse = app.add_subcommand("parse", "Parse and canonicalize a circuit file");
    for (auto* sub : {simulate, decompose, reduce, parse}) {
        add_common(sub);
        sub->add_option("file", file, "Circuit (.qnet) or, for decompose, a state (.json)")->required();
    }
    add_common(verify);
    verify->add_option("suite", suite, "algebra | network | exotic | all")->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kOk : kParseError;
    }

    try {
        if (!out_path.empty()) {
            config.output_path = out_path;
        }
        config.tolerance_overrides = parse_tolerances(tolerances);
        config.validate();
        if (*simulate) return cmd_simulate(file, config);
        if (*decompose) return cmd_decompose(file, config);
        if (*reduce) return cmd_reduce(file, config);
        if (*verify) return cmd_verify(suite, config);
        if (*parse) return cmd_parse(file, config);
    } catch (const CircuitParseFailure& e) {
        report_error("parse", "circuit file has errors", e.errors);
        return kParseError;
    } catch (const su11::CapacityError& e) {
        report_error("capacity", e.what());
        return kCapacityError;
    } catch (const su11::DomainError& e) {
        report_error("input", e.what());
        return kParseError;
    } catch (const InputError& e) {
        report_error("input", e.what());
        return kParseError;
    } catch (const std::exception& e) {
        report_error("internal", e.what());
        return kCheckFailure;
    }
    return kOk;
}
