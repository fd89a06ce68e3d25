#pragma once

#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "ecl/suite.hpp"

namespace ecl::cli {

// One block of a report: a claim, a verdict or a lookup result.
struct Section {
    std::string name;
    std::string status;  // "pass", "fail", or a verdict word
    std::vector<std::pair<std::string, std::string>> fields;
    double elapsed_seconds = 0;

    void add(std::string k, std::string v) { fields.emplace_back(std::move(k), std::move(v)); }
};

Section from_verification(const VerificationReport& r);

struct Report {
    std::string command;  // argv joined with spaces
    std::vector<std::pair<std::string, std::string>> parameters;
    std::vector<Section> sections;
    std::vector<std::string> cache_notes;  // stdout only

    // Human-readable text with timings.
    void print_text(std::ostream& out) const;
    // Structured document. Carries no timing or cache state, so identical
    // invocations give identical bytes.
    std::string structured() const;
};

}  // namespace ecl::cli
