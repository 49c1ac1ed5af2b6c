#pragma once

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "su11/algebra.hpp"
#include "su11/circuit.hpp"
#include "su11/network.hpp"

namespace su11 {

using Json = nlohmann::ordered_json;

inline constexpr std::string_view kToolName = "su11net";
std::string_view tool_version();

struct RunConfig {
    int cutoff = 6;
    int safe_bound = 3;
    /// "vacuum" or comma-separated occupations over a1..ar, b1..bs.
    std::string input = "vacuum";
    std::optional<std::string> output_path;
    /// Per-check tolerance overrides; the key "*" applies to every check.
    std::map<std::string, double> tolerance_overrides;

    /// Throws DomainError unless cutoff >= 2 and 0 <= safe_bound <= cutoff - 2.
    void validate() const;
    double tolerance(const std::string& check, double fallback) const;
};

Json to_json(const RunConfig& config);
Json to_json(Complex z);
Json to_json(const circuit::SourceSpan& span);
Json to_json(const circuit::ParseError& error);
Json to_json(const Decomposition& d);
Json to_json(const PseudoBoson& pseudo);

/// Parses an input descriptor into a basis state of `space`.
StateVector parse_input_state(const SpacePtr& space, std::string_view descriptor);

/// {"basis": [[occ...]], "amplitudes": [[re, im]]} over the nonzero amplitudes.
Json state_to_json(const StateVector& psi);
/// Inverse of state_to_json; basis entries must fit `space`.
StateVector state_from_json(const SpacePtr& space, const Json& doc);

/// Weight on basis states where some mode sits at the last retained
/// occupation (cutoff - 1), i.e. where hard truncation acts.
double boundary_weight(const StateVector& psi);

struct Check {
    std::string name;
    double max_deviation = 0.0;
    double tolerance = 0.0;
    bool pass = false;
};

Json to_json(const Check& check);

/// Suites: "algebra", "network", "exotic", "all". Throws DomainError on an
/// unknown suite name.
std::vector<Check> run_suite(std::string_view suite, const RunConfig& config);

std::vector<std::string> suite_names();

/// Common header fields: tool, version and the config echo.
Json report_header(const RunConfig& config);

}  // namespace su11
