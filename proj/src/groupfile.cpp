#include "ecl/groupfile.hpp"

#include <fstream>
#include <random>
#include <sstream>

namespace ecl {

GroupFileError::GroupFileError(int line_no, const std::string& what)
    : std::runtime_error("line " + std::to_string(line_no) + ": " + what), line(line_no) {}

namespace {

std::string trim(const std::string& s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string::npos) return {};
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

std::pair<std::string, std::string> split_keyword(const std::string& line) {
    const auto sp = line.find_first_of(" \t");
    if (sp == std::string::npos) return {line, {}};
    return {line.substr(0, sp), trim(line.substr(sp + 1))};
}

}  // namespace

std::vector<GL2Element> parse_generator_list(const std::string& text, int modulus) {
    std::vector<GL2Element> out;
    std::stringstream in(text);
    std::string piece;
    while (std::getline(in, piece, '|')) {
        piece = trim(piece);
        if (!piece.empty()) out.push_back(GL2Element::parse(piece, modulus));
    }
    return out;
}

std::string format_generator_list(const std::vector<GL2Element>& gens) {
    std::string out;
    for (std::size_t i = 0; i < gens.size(); ++i) {
        if (i > 0) out += " | ";
        out += gens[i].str();
    }
    return out;
}

GroupFile GroupFile::parse(std::istream& in) {
    GroupFile file;
    std::string raw;
    int line_no = 0;
    bool saw_format = false;
    while (std::getline(in, raw)) {
        ++line_no;
        if (auto hash = raw.find('#'); hash != std::string::npos) raw.resize(hash);
        const std::string line = trim(raw);
        if (line.empty()) continue;
        auto [word, rest] = split_keyword(line);
        if (!saw_format) {
            if (word != "format" || rest != "ecl-groups 1") {
                throw GroupFileError(line_no, "expected 'format ecl-groups 1'");
            }
            saw_format = true;
            continue;
        }
        try {
            if (word == "modulus") {
                if (file.modulus != 0) throw GroupFileError(line_no, "modulus given twice");
                std::size_t used = 0;
                const int m = std::stoi(rest, &used);
                if (used != rest.size() || m < 2 || m > kModulusCeiling) {
                    throw GroupFileError(line_no, "bad modulus '" + rest + "'");
                }
                file.modulus = m;
            } else if (word == "meta") {
                auto [key, value] = split_keyword(rest);
                if (key.empty()) throw GroupFileError(line_no, "meta needs a key");
                file.meta.emplace_back(key, value);
            } else if (word == "group") {
                if (file.modulus == 0) throw GroupFileError(line_no, "group before modulus");
                if (rest.empty()) throw GroupFileError(line_no, "group needs a label");
                file.groups.push_back({rest, {}, std::nullopt});
            } else if (word == "order") {
                if (file.groups.empty()) throw GroupFileError(line_no, "order outside a group");
                std::size_t used = 0;
                const auto n = std::stoull(rest, &used);
                if (used != rest.size()) throw GroupFileError(line_no, "bad order '" + rest + "'");
                file.groups.back().order = n;
            } else if (word == "gen" || word == "gens") {
                if (file.groups.empty()) throw GroupFileError(line_no, "generator outside a group");
                auto gens = word == "gen"
                                ? std::vector<GL2Element>{GL2Element::parse(rest, file.modulus)}
                                : parse_generator_list(rest, file.modulus);
                auto& target = file.groups.back().generators;
                target.insert(target.end(), gens.begin(), gens.end());
            } else {
                throw GroupFileError(line_no, "unknown keyword '" + word + "'");
            }
        } catch (const GroupFileError&) {
            throw;
        } catch (const std::exception& e) {
            throw GroupFileError(line_no, e.what());
        }
    }
    if (!saw_format) throw GroupFileError(line_no, "empty group file");
    if (file.modulus == 0) throw GroupFileError(line_no, "missing modulus");
    return file;
}

GroupFile GroupFile::load(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open group file " + path.string());
    return parse(in);
}

std::string GroupFile::serialize() const {
    std::ostringstream out;
    out << "format ecl-groups 1\n";
    out << "modulus " << modulus << "\n";
    for (const auto& [k, v] : meta) out << "meta " << k << " " << v << "\n";
    for (const auto& g : groups) {
        out << "group " << g.label << "\n";
        if (g.order) out << "order " << *g.order << "\n";
        for (const auto& x : g.generators) out << "gen " << x.str() << "\n";
    }
    return out.str();
}

void GroupFile::save_atomic(const std::filesystem::path& path) const {
    std::filesystem::create_directories(path.parent_path());
    std::random_device rd;
    auto tmp = path;
    tmp += ".tmp" + std::to_string(rd());
    {
        std::ofstream out(tmp, std::ios::trunc);
        if (!out) throw std::runtime_error("cannot write " + tmp.string());
        out << serialize();
        if (!out.flush()) throw std::runtime_error("write failed for " + tmp.string());
    }
    std::filesystem::rename(tmp, path);
}

std::optional<std::string> GroupFile::meta_value(const std::string& key) const {
    for (const auto& [k, v] : meta) {
        if (k == key) return v;
    }
    return std::nullopt;
}

}  // namespace ecl
