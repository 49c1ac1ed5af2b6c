#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "su11/network.hpp"

namespace su11::circuit {

/// 1-based line and inclusive 1-based byte columns.
struct SourceSpan {
    int line = 1;
    int column_begin = 1;
    int column_end = 1;

    bool operator==(const SourceSpan&) const = default;
};

enum class ParseErrorKind {
    UnknownDirective,
    UnknownMode,
    MalformedNumber,
    DuplicateModesDecl,
    ArityMismatch,
    MissingModesDecl,
};

std::string_view to_string(ParseErrorKind kind);

struct ParseError {
    SourceSpan span;
    ParseErrorKind kind;
    std::string message;
};

struct ParseResult {
    /// Set iff `errors` is empty.
    std::optional<NetworkSpec> spec;
    std::vector<ParseError> errors;
    /// Source location of each element of `spec`, same order.
    std::vector<SourceSpan> element_spans;

    bool ok() const { return errors.empty(); }
};

/// Parses the line-oriented `.qnet` format:
///
///     modes a:<r> b:<s>
///     sq <mode> <mode> eta=<complex>
///     bs <mode> <mode> theta=<angle> phi=<angle>
///
/// Modes are a1..ar and b1..bs. Complex values are `x` or `x+yi`/`x-yi`.
/// Angles are a float, `pi`, `pi/<int>` or `<float>*pi`. `#` starts a comment.
/// All errors are collected; the parser never throws on malformed input.
ParseResult parse(std::string_view text);

/// Canonical text for a spec; parse(render(spec)) reproduces it exactly.
std::string render(const NetworkSpec& spec);

struct Warning {
    std::string message;
    std::optional<std::size_t> element;
    std::optional<SourceSpan> span;
};

/// Advisory findings, e.g. that the network does not reduce to a
/// pseudo-two-mode squeezer. `spans` (from ParseResult) attach locations.
std::vector<Warning> validate(const NetworkSpec& spec, const std::vector<SourceSpan>& spans = {});

}  // namespace su11::circuit
