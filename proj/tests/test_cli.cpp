#include <catch2/catch_amalgamated.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <unistd.h>

#include "dgm/cli.hpp"

using namespace dgm;
namespace fs = std::filesystem;

namespace {

struct Result {
    int code;
    std::string out;
    json report;
};

Result run(std::vector<std::string> args) {
    std::ostringstream out, err;
    const int code = cli::run(args, out, err);
    json j;
    try {
        j = json::parse(out.str());
    } catch (const json::parse_error&) {
        j = nullptr;
    }
    return {code, out.str(), j};
}

fs::path scratch(const std::string& name) {
    const fs::path p = fs::temp_directory_path() / ("dgm_test_cli_" + std::to_string(::getpid())) / name;
    fs::remove_all(p);
    fs::create_directories(p);
    return p;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream s;
    s << in.rdbuf();
    return s.str();
}

json strip_seconds(json j) {
    if (j.is_object()) {
        j.erase("seconds");
        for (auto& [k, v] : j.items()) v = strip_seconds(v);
    } else if (j.is_array()) {
        for (auto& v : j) v = strip_seconds(v);
    }
    return j;
}

const json* find_check(const json& report, const std::string& name) {
    if (!report.is_object() || !report.contains("checks")) return nullptr;
    for (const auto& c : report["checks"])
        if (c["name"] == name) return &c;
    return nullptr;
}

// Emits a bundle through the CLI and replays its expected commands.
void replay(const std::vector<std::string>& example_args, const std::string& tag) {
    const fs::path dir = scratch(tag);
    std::vector<std::string> args{"example"};
    args.insert(args.end(), example_args.begin(), example_args.end());
    args.insert(args.end(), {"--emit", dir.string()});
    REQUIRE(run(args).code == 0);
    const json expected = json::parse(slurp(dir / "expected.json"));
    const std::string ws = (dir / "workspace.json").string();
    for (const auto& c : expected["commands"]) {
        std::vector<std::string> a{"-w", ws};
        for (const auto& s : c["args"]) a.push_back(s.get<std::string>());
        INFO(tag << ": " << c["args"].dump());
        const auto r = run(a);
        CHECK(r.code == c["exit"].get<int>());
        for (const auto& ch : c["checks"]) {
            const json* got = find_check(r.report, ch["name"]);
            REQUIRE(got);
            CHECK((*got)["status"] == ch["status"]);
            if (ch.contains("witness"))
                for (const auto& [k, v] : ch["witness"].items()) CHECK((*got)["witness"][k] == v);
        }
    }
}

}  // namespace

TEST_CASE("fixture bundles replay their expected verdicts", "[cli][corpus]") {
    replay({"dual-numbers", "--field", "F2"}, "dual_f2");
    replay({"dual-numbers", "--field", "F3"}, "dual_f3");
    replay({"dual-numbers", "--field", "Q"}, "dual_q");
    replay({"field-extension", "--field", "F2", "--degree", "2"}, "ext_f2");
    replay({"field-extension", "--field", "F3", "--degree", "2"}, "ext_f3");
    for (const char* g : {"Z2", "Z3"})
        for (const char* f : {"F2", "F3", "Q"}) replay({"group-action", "--group", g, "--field", f}, std::string("ga") + g + f);
    replay({"collapse"}, "collapse");
    replay({"compatible", "--first", "dual", "--second", "dual"}, "cmp_dd");
    replay({"compatible", "--first", "k", "--second", "dual"}, "cmp_kd");
    replay({"compatible", "--first", "F4", "--second", "dual"}, "cmp_fd");
}

TEST_CASE("workspace emit -> ingest -> emit is byte-identical", "[cli][io]") {
    for (const auto& b : {corpus::example_dual_numbers(Field::rationals()), corpus::example_field_extension(3, 2),
                          corpus::example_group_action(cyclic_group(3), Field::prime(2)),
                          corpus::example_collapse(Field::prime(5)),
                          corpus::example_compatible("F4", "dual", Field::prime(2))}) {
        INFO(b.name);
        const std::string once = io::emit(b.workspace);
        const std::string twice = io::emit(io::ingest_text(once));
        CHECK(once == twice);
    }
}

TEST_CASE("reports are deterministic apart from timings", "[cli]") {
    const fs::path dir = scratch("determinism");
    REQUIRE(run({"example", "dual-numbers", "--field", "F3", "--emit", dir.string()}).code == 0);
    const std::string ws = (dir / "workspace.json").string();
    for (const std::vector<std::string>& cmd :
         {std::vector<std::string>{"em-hom", "B", "B"}, {"separable", "dual"}, {"exactadj", "dual", "--module", "B"}}) {
        std::vector<std::string> a{"-w", ws};
        a.insert(a.end(), cmd.begin(), cmd.end());
        CHECK(strip_seconds(run(a).report) == strip_seconds(run(a).report));
    }
    const fs::path again = scratch("determinism2");
    REQUIRE(run({"example", "dual-numbers", "--field", "F3", "--emit", again.string()}).code == 0);
    CHECK(slurp(dir / "workspace.json") == slurp(again / "workspace.json"));
    CHECK(slurp(dir / "expected.json") == slurp(again / "expected.json"));
}

TEST_CASE("invalid input exits with code 2 and a typed error", "[cli][errors]") {
    const fs::path dir = scratch("errors");
    REQUIRE(run({"example", "collapse", "--field", "Q", "--emit", dir.string()}).code == 0);
    const std::string text = slurp(dir / "workspace.json");

    auto write = [&](const std::string& name, const std::string& body) {
        const fs::path p = dir / name;
        std::ofstream(p, std::ios::binary) << body;
        return p.string();
    };

    SECTION("division by zero in a scalar") {
        std::string bad = text;
        const auto pos = bad.find("\"1\"");
        REQUIRE(pos != std::string::npos);
        bad.replace(pos, 3, "\"1/0\"");
        const auto r = run({"-w", write("zero.json", bad), "validate"});
        CHECK(r.code == 2);
        CHECK(r.report["error"]["kind"] == "syntax");
        const std::size_t line = 1 + std::count(bad.begin(), bad.begin() + static_cast<long>(pos), '\n');
        CHECK(r.report["error"]["line"] == line);
        CHECK(r.report["error"].contains("location"));
    }
    SECTION("missing file") {
        const auto r = run({"-w", (dir / "absent.json").string(), "validate"});
        CHECK(r.code == 2);
        CHECK(r.report["error"]["kind"] == "io");
    }
    SECTION("truncated JSON") {
        const auto r = run({"-w", write("trunc.json", text.substr(0, text.size() / 2)), "validate"});
        CHECK(r.code == 2);
        CHECK(r.report["error"]["kind"] == "syntax");
        CHECK(r.report["error"].contains("line"));
    }
    SECTION("unknown top-level field") {
        json j = json::parse(text);
        j["surprise"] = 1;
        const auto r = run({"-w", write("unknown.json", j.dump(2)), "validate"});
        CHECK(r.code == 2);
        CHECK(r.report["error"]["kind"] == "validation");
    }
    SECTION("usage errors") {
        CHECK(run({}).code == 2);
        CHECK(run({"separable", "x", "--mode", "sideways"}).report["error"]["kind"] == "usage");
        const auto r = run({"-w", (dir / "workspace.json").string(), "check-monad", "nonexistent"});
        CHECK(r.code == 2);
    }
    SECTION("checks that hold exit with 0") {
        CHECK(run({"-w", (dir / "workspace.json").string(), "bousfield", "L", "eta"}).code == 0);
        CHECK(run({"-w", (dir / "workspace.json").string(), "karoubi", "C", "--idempotent", "a:1"}).code == 0);
    }
}

TEST_CASE("the installed binary agrees with the in-process entry point", "[cli][binary]") {
    const fs::path dir = scratch("binary");
    const std::string exe = DGM_CLI_PATH;
    REQUIRE(fs::exists(exe));
    const std::string emit = "\"" + exe + "\" example group-action --group Z2 --field F2 --emit \"" + dir.string() +
                             "\" > \"" + (dir / "out.txt").string() + "\"";
    REQUIRE(std::system(emit.c_str()) == 0);
    const std::string sep = "\"" + exe + "\" -w \"" + (dir / "workspace.json").string() +
                            "\" separable MG --mode h0 > \"" + (dir / "sep.txt").string() + "\"";
    const int status = std::system(sep.c_str());
    CHECK(WEXITSTATUS(status) == 1);
    const json rep = json::parse(slurp(dir / "sep.txt"));
    CHECK((*find_check(rep, "section"))["status"] == "infeasible");
    const auto in = run({"-w", (dir / "workspace.json").string(), "separable", "MG", "--mode", "h0"});
    CHECK(strip_seconds(in.report) == strip_seconds(rep));
}

TEST_CASE("sign-sensitive reports state their conventions", "[cli]") {
    const fs::path dir = scratch("conventions");
    REQUIRE(run({"example", "dual-numbers", "--field", "F2", "--emit", dir.string()}).code == 0);
    const std::string ws = (dir / "workspace.json").string();
    const auto cone = run({"-w", ws, "cone", "B", "B"});
    REQUIRE(cone.report.contains("conventions"));
    CHECK(cone.report["conventions"].contains("shift"));
    CHECK_FALSE(run({"-w", ws, "check-monad", "dual"}).report.contains("conventions"));
}
