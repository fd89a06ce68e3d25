#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "ecl/modring.hpp"

namespace ecl {

// Line-oriented text format shared by user group files and the enumeration cache:
//
//   format ecl-groups 1
//   modulus 32
//   meta <key> <value>        (any number)
//   group <label>
//   order <n>                 (optional, checked on load)
//   gen a,b;c,d               (repeatable; "gens x | y" also accepted)
//
// '#' starts a comment.
struct LabeledGenerators {
    std::string label;
    std::vector<GL2Element> generators;
    std::optional<std::uint64_t> order;
};

struct GroupFile {
    int modulus = 0;
    std::vector<std::pair<std::string, std::string>> meta;
    std::vector<LabeledGenerators> groups;

    static GroupFile parse(std::istream& in);
    static GroupFile load(const std::filesystem::path& path);
    std::string serialize() const;
    // Writes to a temporary sibling and renames over the target.
    void save_atomic(const std::filesystem::path& path) const;

    std::optional<std::string> meta_value(const std::string& key) const;
};

class GroupFileError : public std::runtime_error {
public:
    GroupFileError(int line, const std::string& what);
    int line;
};

// "a,b;c,d | e,f;g,h"
std::vector<GL2Element> parse_generator_list(const std::string& text, int modulus);
std::string format_generator_list(const std::vector<GL2Element>& gens);

}  // namespace ecl
