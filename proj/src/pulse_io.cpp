#include "bakersim/nmr.hpp"

#include <fmt/format.h>

#include <cerrno>
#include <cstdlib>
#include <sstream>

namespace bakersim {

namespace {

std::string join_labels(const std::array<SpinLabel, 3>& labels) {
    return to_string(labels[0]) + "," + to_string(labels[1]) + "," + to_string(labels[2]);
}

std::array<SpinLabel, 3> split_labels(const std::string& text) {
    std::array<SpinLabel, 3> out{};
    std::istringstream in(text);
    std::string item;
    int k = 0;
    while (std::getline(in, item, ',')) {
        if (k == 3) throw std::invalid_argument("pulse format: relabel needs three spins");
        out[static_cast<std::size_t>(k++)] = parse_spin(item);
    }
    if (k != 3) throw std::invalid_argument("pulse format: relabel needs three spins");
    return out;
}

double parse_number(const std::string& token, int line_no) {
    errno = 0;
    char* end = nullptr;
    const double v = std::strtod(token.c_str(), &end);
    if (token.empty() || end != token.c_str() + token.size() || errno == ERANGE) {
        throw std::invalid_argument(fmt::format("pulse format line {}: bad number '{}'", line_no, token));
    }
    return v;
}

// Value of `key=` inside a comment line, or empty.
std::string header_value(const std::string& line, const std::string& key) {
    std::istringstream in(line);
    std::string word;
    while (in >> word) {
        if (word.rfind(key + "=", 0) == 0) return word.substr(key.size() + 1);
    }
    return {};
}

}  // namespace

std::string format_pulse_sequence(const PulseSequence& seq, FrequencyConvention convention) {
    if (seq.name().find_first_of(" \t\n") != std::string::npos) {
        throw std::invalid_argument("pulse format: sequence name must not contain whitespace");
    }
    std::string out = fmt::format("# name={} convention={} total_delay={:.17g}\n", seq.name(),
                                  to_string(convention), seq.total_delay());
    out += "# execution order: first line runs first\n";
    if (seq.relabel()) {
        out += fmt::format("# relabel before={} after={}\n", join_labels(seq.relabel()->before),
                           join_labels(seq.relabel()->after));
    }
    for (const auto& p : seq.instructions()) {
        if (const auto* x = std::get_if<RotX>(&p)) {
            out += fmt::format("X {} {:.17g}\n", to_string(x->spin), x->angle);
        } else if (const auto* y = std::get_if<RotY>(&p)) {
            out += fmt::format("Y {} {:.17g}\n", to_string(y->spin), y->angle);
        } else {
            out += fmt::format("U {:.17g}\n", std::get<Delay>(p).duration);
        }
    }
    return out;
}

PulseSequence parse_pulse_sequence(std::string_view text) {
    std::istringstream in{std::string(text)};
    std::string line;
    std::string name;
    bool have_header = false;
    std::optional<Relabeling> relabel;
    std::vector<PulseInstruction> instructions;
    int line_no = 0;

    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.find_first_not_of(" \t") == std::string::npos) continue;
        if (line[0] == '#') {
            if (!have_header && line.find("name=") != std::string::npos) {
                name = header_value(line, "name");
                have_header = true;
            } else if (line.rfind("# relabel", 0) == 0) {
                relabel = Relabeling{split_labels(header_value(line, "before")),
                                     split_labels(header_value(line, "after"))};
            }
            continue;
        }
        std::istringstream fields(line);
        std::string op, a, b, extra;
        fields >> op >> a;
        if (op == "U") {
            if (fields >> extra) throw std::invalid_argument(fmt::format("pulse format line {}: trailing text", line_no));
            instructions.push_back(Delay{parse_number(a, line_no)});
        } else if (op == "X" || op == "Y") {
            fields >> b;
            if (fields >> extra) throw std::invalid_argument(fmt::format("pulse format line {}: trailing text", line_no));
            const SpinLabel s = parse_spin(a);
            const double angle = parse_number(b, line_no);
            if (op == "X") {
                instructions.push_back(RotX{s, angle});
            } else {
                instructions.push_back(RotY{s, angle});
            }
        } else {
            throw std::invalid_argument(fmt::format("pulse format line {}: unknown instruction '{}'", line_no, op));
        }
    }
    if (!have_header) throw std::invalid_argument("pulse format: missing '# name=' header");
    return PulseSequence(std::move(name), std::move(instructions), relabel);
}

}  // namespace bakersim
