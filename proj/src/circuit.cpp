#include "su11/circuit.hpp"

#include <charconv>
#include <cmath>
#include <numbers>

namespace su11::circuit {

std::string_view to_string(ParseErrorKind kind) {
    switch (kind) {
        case ParseErrorKind::UnknownDirective: return "UnknownDirective";
        case ParseErrorKind::UnknownMode: return "UnknownMode";
        case ParseErrorKind::MalformedNumber: return "MalformedNumber";
        case ParseErrorKind::DuplicateModesDecl: return "DuplicateModesDecl";
        case ParseErrorKind::ArityMismatch: return "ArityMismatch";
        case ParseErrorKind::MissingModesDecl: return "MissingModesDecl";
    }
    return "Unknown";
}

namespace {

struct Token {
    std::string_view text;
    int column = 1;  // 1-based start

    SourceSpan span(int line) const {
        const int width = static_cast<int>(text.size());
        return {line, column, column + (width > 0 ? width - 1 : 0)};
    }
};

bool is_space(char c) { return c == ' ' || c == '\t' || c == '\r' || c == '\v' || c == '\f'; }

std::vector<Token> tokenize(std::string_view line) {
    std::vector<Token> out;
    std::size_t i = 0;
    while (i < line.size()) {
        if (is_space(line[i])) {
            ++i;
            continue;
        }
        const std::size_t start = i;
        while (i < line.size() && !is_space(line[i])) {
            ++i;
        }
        out.push_back({line.substr(start, i - start), static_cast<int>(start) + 1});
    }
    return out;
}

// Unsigned-or-signed float consumed from the front of `s`; rejects inf/nan.
std::optional<double> read_float(std::string_view& s) {
    double value = 0.0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
    if (ec != std::errc() || ptr == s.data() || !std::isfinite(value)) {
        return std::nullopt;
    }
    s.remove_prefix(static_cast<std::size_t>(ptr - s.data()));
    return value;
}

std::optional<double> parse_float(std::string_view s) {
    auto value = read_float(s);
    return (value && s.empty()) ? value : std::nullopt;
}

std::optional<int> parse_int(std::string_view s) {
    int value = 0;
    if (s.empty() || s.front() == '-' || s.front() == '+') {
        return std::nullopt;
    }
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
    if (ec != std::errc() || ptr != s.data() + s.size()) {
        return std::nullopt;
    }
    return value;
}

std::optional<Complex> parse_complex(std::string_view s) {
    const auto re = read_float(s);
    if (!re) {
        return std::nullopt;
    }
    if (s.empty()) {
        return Complex(*re, 0.0);
    }
    const char sign = s.front();
    if (sign != '+' && sign != '-') {
        return std::nullopt;
    }
    s.remove_prefix(1);
    if (s.empty() || s.front() == '+' || s.front() == '-') {
        return std::nullopt;
    }
    const auto im = read_float(s);
    if (!im || s != "i") {
        return std::nullopt;
    }
    return Complex(*re, sign == '-' ? -*im : *im);
}

std::optional<double> parse_angle(std::string_view s) {
    constexpr double pi = std::numbers::pi;
    if (s == "pi") {
        return pi;
    }
    if (s.starts_with("pi/")) {
        const auto div = parse_int(s.substr(3));
        if (!div || *div == 0) {
            return std::nullopt;
        }
        return pi / *div;
    }
    if (s.ends_with("*pi")) {
        const auto factor = parse_float(s.substr(0, s.size() - 3));
        if (!factor) {
            return std::nullopt;
        }
        return *factor * pi;
    }
    return parse_float(s);
}

class Parser {
public:
    ParseResult run(std::string_view text) {
        int line_no = 0;
        std::size_t pos = 0;
        while (pos <= text.size()) {
            const std::size_t end = text.find('\n', pos);
            const std::size_t stop = end == std::string_view::npos ? text.size() : end;
            ++line_no;
            parse_line(text.substr(pos, stop - pos), line_no);
            if (end == std::string_view::npos) {
                break;
            }
            pos = end + 1;
        }
        if (!modes_) {
            error({1, 1, 1}, ParseErrorKind::MissingModesDecl,
                  "missing 'modes a:<r> b:<s>' declaration");
        }
        ParseResult result;
        result.errors = std::move(errors_);
        if (result.errors.empty()) {
            spec_.num_a_modes = modes_->first;
            spec_.num_b_modes = modes_->second;
            result.spec = std::move(spec_);
            result.element_spans = std::move(spans_);
        }
        return result;
    }

private:
    void error(SourceSpan span, ParseErrorKind kind, std::string message) {
        errors_.push_back({span, kind, std::move(message)});
    }

    void parse_line(std::string_view line, int line_no) {
        if (const auto hash = line.find('#'); hash != std::string_view::npos) {
            line = line.substr(0, hash);
        }
        const auto tokens = tokenize(line);
        if (tokens.empty()) {
            return;
        }
        const std::string_view head = tokens.front().text;
        if (head == "modes") {
            parse_modes(tokens, line_no);
        } else if (head == "sq" || head == "bs") {
            if (!modes_ && !reported_missing_) {
                reported_missing_ = true;
                error(tokens.front().span(line_no), ParseErrorKind::MissingModesDecl,
                      "element before the 'modes' declaration");
            }
            parse_element(tokens, line_no);
        } else {
            error(tokens.front().span(line_no), ParseErrorKind::UnknownDirective,
                  "unknown directive '" + std::string(head) + "'");
        }
    }

    // Accepts "a:2" or "a: 2" for each side.
    void parse_modes(const std::vector<Token>& tokens, int line_no) {
        const SourceSpan line_span{line_no, tokens.front().column,
                                   tokens.back().span(line_no).column_end};
        if (seen_modes_) {
            error(line_span, ParseErrorKind::DuplicateModesDecl, "duplicate 'modes' declaration");
            return;
        }
        seen_modes_ = true;
        std::vector<Token> parts;
        for (std::size_t i = 1; i < tokens.size(); ++i) {
            const Token& t = tokens[i];
            if ((t.text == "a:" || t.text == "b:") && i + 1 < tokens.size()) {
                const Token& next = tokens[i + 1];
                const auto len = static_cast<std::size_t>(next.column - t.column) + next.text.size();
                parts.push_back({std::string_view(t.text.data(), len), t.column});
                ++i;
            } else {
                parts.push_back(t);
            }
        }
        if (parts.size() != 2 || !parts[0].text.starts_with("a:") ||
            !parts[1].text.starts_with("b:")) {
            error(line_span, ParseErrorKind::ArityMismatch, "expected 'modes a:<r> b:<s>'");
            return;
        }
        std::optional<int> counts[2];
        for (int k = 0; k < 2; ++k) {
            std::string_view value = parts[static_cast<std::size_t>(k)].text.substr(2);
            while (!value.empty() && is_space(value.front())) {
                value.remove_prefix(1);
            }
            counts[k] = parse_int(value);
            if (!counts[k] || *counts[k] < 1) {
                error(parts[static_cast<std::size_t>(k)].span(line_no),
                      ParseErrorKind::MalformedNumber, "mode count must be a positive integer");
                counts[k].reset();
            }
        }
        if (counts[0] && counts[1]) {
            modes_ = std::pair(*counts[0], *counts[1]);
        }
    }

    std::optional<ModeRef> parse_mode(const Token& t, int line_no) {
        const std::string_view s = t.text;
        if (s.size() < 2 || (s.front() != 'a' && s.front() != 'b')) {
            error(t.span(line_no), ParseErrorKind::UnknownMode,
                  "expected a mode like a1 or b2, got '" + std::string(s) + "'");
            return std::nullopt;
        }
        const auto index = parse_int(s.substr(1));
        if (!index || *index < 1) {
            error(t.span(line_no), ParseErrorKind::UnknownMode,
                  "bad mode index in '" + std::string(s) + "'");
            return std::nullopt;
        }
        const Side side = s.front() == 'a' ? Side::A : Side::B;
        if (modes_) {
            const int count = side == Side::A ? modes_->first : modes_->second;
            if (*index > count) {
                error(t.span(line_no), ParseErrorKind::UnknownMode,
                      "mode '" + std::string(s) + "' is not declared");
                return std::nullopt;
            }
        }
        return ModeRef{side, *index - 1};
    }

    std::optional<std::string_view> keyed(const Token& t, std::string_view key, int line_no) {
        if (!t.text.starts_with(key) || t.text.size() <= key.size() || t.text[key.size()] != '=') {
            error(t.span(line_no), ParseErrorKind::ArityMismatch,
                  "expected '" + std::string(key) + "=<value>'");
            return std::nullopt;
        }
        return t.text.substr(key.size() + 1);
    }

    void parse_element(const std::vector<Token>& tokens, int line_no) {
        const bool squeezer = tokens.front().text == "sq";
        const std::size_t expected = squeezer ? 4 : 5;
        const SourceSpan line_span{line_no, tokens.front().column,
                                   tokens.back().span(line_no).column_end};
        if (tokens.size() != expected) {
            error(line_span, ParseErrorKind::ArityMismatch,
                  squeezer ? "expected 'sq <mode> <mode> eta=<complex>'"
                           : "expected 'bs <mode> <mode> theta=<angle> phi=<angle>'");
            return;
        }
        const auto first = parse_mode(tokens[1], line_no);
        const auto second = parse_mode(tokens[2], line_no);
        bool ok = first && second;
        if (ok && *first == *second) {
            error(line_span, ParseErrorKind::ArityMismatch, "element needs two distinct modes");
            ok = false;
        }
        Element element;
        if (squeezer) {
            const auto raw = keyed(tokens[3], "eta", line_no);
            std::optional<Complex> eta;
            if (raw) {
                eta = parse_complex(*raw);
                if (!eta) {
                    error(tokens[3].span(line_no), ParseErrorKind::MalformedNumber,
                          "malformed complex number '" + std::string(*raw) + "'");
                }
            }
            ok = ok && eta.has_value();
            if (ok) element.kind = TwoModeSqueezer{*eta};
        } else {
            std::optional<double> angles[2];
            const std::string_view keys[2] = {"theta", "phi"};
            for (int k = 0; k < 2; ++k) {
                const Token& t = tokens[static_cast<std::size_t>(3 + k)];
                const auto raw = keyed(t, keys[k], line_no);
                if (!raw) {
                    continue;
                }
                angles[k] = parse_angle(*raw);
                if (!angles[k]) {
                    error(t.span(line_no), ParseErrorKind::MalformedNumber,
                          "malformed angle '" + std::string(*raw) + "'");
                }
            }
            ok = ok && angles[0] && angles[1];
            if (ok) element.kind = Beamsplitter{*angles[0], *angles[1]};
        }
        if (ok) {
            element.first = *first;
            element.second = *second;
            spec_.elements.push_back(element);
            spans_.push_back(line_span);
        }
    }

    NetworkSpec spec_;
    std::vector<SourceSpan> spans_;
    std::vector<ParseError> errors_;
    std::optional<std::pair<int, int>> modes_;
    bool seen_modes_ = false;
    bool reported_missing_ = false;
};

std::string format_double(double v) {
    char buf[64];
    const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, ptr);
}

std::string format_angle(double v) {
    constexpr double pi = std::numbers::pi;
    if (v == pi) {
        return "pi";
    }
    if (v == -pi) {
        return "-1*pi";
    }
    for (int div = 2; div <= 12; ++div) {
        if (v == pi / div) {
            return "pi/" + std::to_string(div);
        }
    }
    return format_double(v);
}

std::string format_mode(const ModeRef& m) {
    return (m.side == Side::A ? "a" : "b") + std::to_string(m.index + 1);
}

}  // namespace

ParseResult parse(std::string_view text) { return Parser{}.run(text); }

std::string render(const NetworkSpec& spec) {
    std::string out = "modes a:" + std::to_string(spec.num_a_modes) +
                      " b:" + std::to_string(spec.num_b_modes) + "\n";
    for (const Element& e : spec.elements) {
        const std::string modes = format_mode(e.first) + " " + format_mode(e.second);
        if (const auto* bs = std::get_if<Beamsplitter>(&e.kind)) {
            out += "bs " + modes + " theta=" + format_angle(bs->theta) +
                   " phi=" + format_angle(bs->phi) + "\n";
        } else {
            const Complex eta = std::get<TwoModeSqueezer>(e.kind).eta;
            const bool negative = std::signbit(eta.imag());
            out += "sq " + modes + " eta=" + format_double(eta.real()) + (negative ? "-" : "+") +
                   format_double(std::abs(eta.imag())) + "i\n";
        }
    }
    return out;
}

std::vector<Warning> validate(const NetworkSpec& spec, const std::vector<SourceSpan>& spans) {
    std::vector<Warning> out;
    const Reducibility r = classify(spec);
    if (!r.reducible) {
        Warning w;
        w.message = "network is not pseudo-squeezer-reducible: " + r.reason;
        w.element = r.obstruction;
        if (r.obstruction && *r.obstruction < spans.size()) {
            w.span = spans[*r.obstruction];
        }
        out.push_back(std::move(w));
    }
    return out;
}

}  // namespace su11::circuit
