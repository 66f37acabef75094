#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "tsf/cli.hpp"
#include "tsf/foliation.hpp"

using namespace tsf;

namespace {

struct Run {
    int code;
    std::string out, err;
};

Run run(std::vector<std::string> args) {
    std::ostringstream out, err;
    int code = cli::run(args, out, err);
    return {code, out.str(), err.str()};
}

nlohmann::json run_json(std::vector<std::string> args) {
    args.push_back("--format");
    args.push_back("json");
    return nlohmann::json::parse(run(args).out);
}

std::string temp_file(const std::string& name, const std::string& content) {
    auto p = std::filesystem::temp_directory_path() / name;
    std::ofstream(p) << content;
    return p.string();
}

}  // namespace

TEST_CASE("FNV-1a reference values") {
    CHECK(cli::fnv1a64("") == 0xcbf29ce484222325ULL);
    CHECK(cli::fnv1a64("a") == 0xaf63dc4c8601ec8cULL);
    CHECK(cli::fnv1a64("foobar") == 0x85944171f73967e8ULL);
}

TEST_CASE("validate heisenberg5 passes") {
    Run r = run({"validate", "--builder", "heisenberg5"});
    CHECK(r.code == cli::kPass);
    auto j = run_json({"validate", "--builder", "heisenberg5"});
    CHECK(j["verdict"] == "pass");
    CHECK(j["schema_version"] == cli::kSchemaVersion);
    CHECK(j["tool"]["name"] == "tsf");
    CHECK(j["tool"]["version"] == cli::kToolVersion);
    REQUIRE(j["checks"].is_array());
    CHECK_FALSE(j["checks"].empty());
    for (const auto& c : j["checks"]) CHECK(c["failures"] == 0);
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx",
                  static_cast<unsigned long long>(cli::fnv1a64(model_to_json(heisenberg5()).dump())));
    CHECK(j["model"]["hash"] == std::string("fnv1a64:") + buf);
}

TEST_CASE("lefschetz on Kodaira-Thurston fails at k = 1") {
    Run r = run({"lefschetz", "--builder", "kodaira_thurston"});
    CHECK(r.code == cli::kMathFailure);
    auto j = run_json({"lefschetz", "--builder", "kodaira_thurston"});
    CHECK(j["verdict"] == "fail");
    bool found = false;
    for (const auto& d : j["sections"]["lefschetz"])
        if (d["iso"] == false) {
            CHECK(d["k"] == 1);
            CHECK(d["witness_verified"] == true);
            found = true;
        }
    CHECK(found);
    CHECK(run({"lefschetz", "--builder", "heisenberg5"}).code == cli::kPass);
}

TEST_CASE("cohomology of the 4-torus in degree 2 has dimension 6") {
    auto j = run_json({"cohomology", "--builder", "torus2", "--degree", "2"});
    const auto& degs = j["sections"]["cohomology"]["degrees"];
    REQUIRE(degs.size() == 1);
    CHECK(degs[0]["degree"] == 2);
    CHECK(degs[0]["dimension"] == 6);
    auto all = run_json({"cohomology", "--builder", "heisenberg5"});
    std::vector<int> dims;
    for (const auto& d : all["sections"]["cohomology"]["degrees"]) dims.push_back(d["dimension"]);
    // Basic forms avoid e5, and d vanishes on them.
    CHECK(dims == std::vector<int>{1, 4, 6, 4, 1, 0});
}

TEST_CASE("input errors exit with code 2") {
    CHECK(run({"validate", "--builder", "no_such_model"}).code == cli::kInputError);
    CHECK(run({}).code == cli::kInputError);
    CHECK(run({"validate"}).code == cli::kInputError);
    CHECK(run({"validate", "--builder", "torus1", "--format", "xml"}).code == cli::kInputError);
    CHECK(run({"equivariant", "--builder", "torus1_t2"}).code == cli::kInputError);
    CHECK(run({"frobenius", "--builder", "torus1"}).code == cli::kInputError);
    CHECK(run({"validate", "--builder", "torus1", "--model", "x.json"}).code == cli::kInputError);
    CHECK(run({"validate", "--model", "/nonexistent/model.json"}).code == cli::kInputError);

    std::string bad = temp_file("tsf_bad_model.json", "{\n  \"generators\": [\n  ,\n}\n");
    Run r = run({"validate", "--model", bad});
    CHECK(r.code == cli::kInputError);
    CHECK(r.err.find("line 3") != std::string::npos);
    CHECK(r.err.find("column 3") != std::string::npos);
    std::filesystem::remove(bad);
}

TEST_CASE("model files and builders give the same report") {
    std::string path = temp_file("tsf_h5.json", model_to_json(heisenberg5()).dump(2));
    auto a = run_json({"lefschetz", "--model", path});
    auto b = run_json({"lefschetz", "--builder", "heisenberg5"});
    CHECK(a["model"] == b["model"]);
    CHECK(a["sections"] == b["sections"]);
    CHECK(a["checks"] == b["checks"]);
    std::filesystem::remove(path);
}

TEST_CASE("frobenius writes the potential and equivariant runs all checks") {
    auto out = std::filesystem::temp_directory_path() / "tsf_potential.json";
    Run r = run({"frobenius", "--builder", "torus1", "--order", "4", "--out", out.string()});
    CHECK(r.code == cli::kPass);
    std::ifstream in(out);
    auto j = nlohmann::json::parse(in);
    CHECK(j.is_object());
    std::filesystem::remove(out);
    CHECK(run({"frobenius", "--builder", "kodaira_thurston", "--order", "4"}).code == cli::kMathFailure);
    CHECK(run({"equivariant", "--builder", "heisenberg5_reeb", "--cutoff", "3", "--check", "all"}).code ==
          cli::kPass);
    CHECK(run({"ddelta", "--builder", "trunc_linear"}).code == cli::kMathFailure);
}

TEST_CASE("reports are deterministic and text is rendered from JSON") {
    const std::vector<std::vector<std::string>> cmds = {
        {"validate", "--builder", "cosym5"},
        {"ddelta", "--builder", "kodaira_thurston"},
        {"report", "--all", "--builder", "torus1_t2"},
    };
    for (const auto& args : cmds) {
        CAPTURE(args[0]);
        auto a = run_json(args), b = run_json(args);
        a.erase("timing");
        b.erase("timing");
        CHECK(a.dump() == b.dump());
        auto j = run_json(args);
        Run text = run(args);
        CHECK(text.out == cli::render_text(j));
    }
}
