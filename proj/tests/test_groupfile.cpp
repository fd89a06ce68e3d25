#include <doctest.h>

#include <filesystem>
#include <sstream>

#include "ecl/groupfile.hpp"

using namespace ecl;

namespace {

GroupFile parse_text(const std::string& s) {
    std::istringstream in(s);
    return GroupFile::parse(in);
}

int error_line(const std::string& s) {
    try {
        parse_text(s);
    } catch (const GroupFileError& e) {
        return e.line;
    }
    return 0;
}

}  // namespace

TEST_SUITE("groupfile") {
    TEST_CASE("parse and serialize round trip") {
        const std::string text =
            "format ecl-groups 1\n"
            "# comment\n"
            "modulus 4\n"
            "meta source hand-typed\n"
            "group G\n"
            "order 6\n"
            "gen 1,0;3,3\n"
            "gen 3,3;1,0\n"
            "group H\n"
            "gens 1,1;0,3\n";
        const auto f = parse_text(text);
        CHECK(f.modulus == 4);
        REQUIRE(f.groups.size() == 2);
        CHECK(f.groups[0].label == "G");
        CHECK(f.groups[0].order == 6u);
        CHECK(f.groups[0].generators.size() == 2);
        CHECK(f.groups[1].generators == std::vector<GL2Element>{GL2Element(4, 1, 1, 0, 3)});
        CHECK(f.meta_value("source") == "hand-typed");
        const auto again = parse_text(f.serialize());
        CHECK(again.serialize() == f.serialize());
    }

    TEST_CASE("errors carry line numbers") {
        CHECK(error_line("modulus 4\n") == 1);
        CHECK(error_line("format ecl-groups 1\nmodulus 4\ngroup G\ngen 2,0;0,2\n") == 4);
        CHECK(error_line("format ecl-groups 1\nmodulus 4\ngen 1,0;0,1\n") == 3);
        CHECK(error_line("format ecl-groups 1\nmodulus x\n") == 2);
        CHECK(error_line("format ecl-groups 1\nmodulus 4\ngroup G\nfrobnicate\n") == 4);
    }

    TEST_CASE("generator lists") {
        const auto gens = parse_generator_list("1,1;0,1 | 2,0;0,1", 5);
        CHECK(gens.size() == 2);
        CHECK(format_generator_list(gens) == "1,1;0,1 | 2,0;0,1");
    }

    TEST_CASE("atomic save and load") {
        const auto path = std::filesystem::temp_directory_path() / "ecl-groupfile-test.groups";
        GroupFile f;
        f.modulus = 8;
        f.groups.push_back({"X", {GL2Element(8, 5, 0, 0, 5)}, std::nullopt});
        f.save_atomic(path);
        const auto g = GroupFile::load(path);
        CHECK(g.serialize() == f.serialize());
        std::filesystem::remove(path);
        CHECK_THROWS(GroupFile::load(path));
    }
}
