#include "report.hpp"

#include <iomanip>
#include <ostream>
#include <sstream>

#include "ecl/version.hpp"

namespace ecl::cli {

Section from_verification(const VerificationReport& r) {
    Section s{r.claim, r.pass ? "pass" : "fail", {}, r.elapsed_seconds};
    for (const auto& [k, v] : r.parameters) s.add("param " + k, v);
    for (const auto& [k, v] : r.findings) s.add(k, v);
    if (r.counterexample) s.add("counterexample", *r.counterexample);
    return s;
}

namespace {

// Values are quoted when they would not survive a plain "key: value" read.
std::string quoted(const std::string& v) {
    const bool plain = !v.empty() && v.find_first_of(":#\"\n") == std::string::npos && v.front() != ' ' &&
                       v.back() != ' ' && v.front() != '-';
    if (plain) return v;
    std::string out = "\"";
    for (char c : v) {
        if (c == '"' || c == '\\') out += '\\';
        if (c == '\n') {
            out += "\\n";
            continue;
        }
        out += c;
    }
    return out + "\"";
}

}  // namespace

void Report::print_text(std::ostream& out) const {
    for (const auto& s : sections) {
        out << s.name << ": " << s.status;
        if (s.elapsed_seconds > 0) out << "  (" << std::fixed << std::setprecision(2) << s.elapsed_seconds << " s)";
        out << "\n";
        out.unsetf(std::ios::floatfield);
        for (const auto& [k, v] : s.fields) out << "  " << k << ": " << v << "\n";
    }
    for (const auto& c : cache_notes) out << "cache: " << c << "\n";
}

std::string Report::structured() const {
    std::ostringstream out;
    out << "schema: ecl-report " << kReportSchemaVersion << "\n";
    out << "code-version: " << kCodeVersion << "\n";
    out << "command: " << quoted(command) << "\n";
    out << "parameters:\n";
    for (const auto& [k, v] : parameters) out << "  " << quoted(k) << ": " << quoted(v) << "\n";
    out << "sections:\n";
    for (const auto& s : sections) {
        out << "  - name: " << quoted(s.name) << "\n";
        out << "    status: " << quoted(s.status) << "\n";
        out << "    fields:\n";
        for (const auto& [k, v] : s.fields) out << "      " << quoted(k) << ": " << quoted(v) << "\n";
    }
    return out.str();
}

}  // namespace ecl::cli
