#include <string>

#include "doctest.h"
#include "tsf/foliation.hpp"

using namespace tsf;

namespace {

int binom(int n, int k) {
    if (k < 0 || k > n) return 0;
    int r = 1;
    for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
    return r;
}

std::string error_of(const std::string& text) {
    try {
        model_from_text(text);
    } catch (const DomainError& e) {
        return e.what();
    }
    return "";
}

const char* kTorus2 = R"({
  "name": "t2",
  "generators": [{"name": "e1", "degree": 1}, {"name": "e2", "degree": 1},
                 {"name": "e3", "degree": 1}, {"name": "e4", "degree": 1}],
  "omega": "e1^e2 + e3^e4",
  "chi": "1"
})";

}  // namespace

TEST_CASE("every builder passes validation") {
    for (const auto& name : builder_names()) {
        CAPTURE(name);
        FoliatedModel m = builder(name);
        Report r = validate_model(m);
        for (const auto& c : r.checks) {
            CAPTURE(c.name);
            CHECK(c.ok());
        }
    }
    CHECK_THROWS_AS(builder("klein_bottle"), DomainError);
    CHECK_THROWS_AS(torus(0), DomainError);
}

TEST_CASE("basic subcomplex dimensions") {
    for (int n = 1; n <= 3; ++n) {
        FoliatedModel t = torus(n);
        CHECK(t.n == n);
        for (int k = 0; k <= 2 * n; ++k) CHECK(t.basic.dim(k) == binom(2 * n, k));
    }
    // Forms free of the Reeb direction e5.
    for (const auto& m : {heisenberg5(), cosym5()}) {
        CHECK(m.n == 2);
        CHECK(m.leafwise.size() == 1);
        for (int k = 0; k <= 4; ++k) CHECK(m.basic.dim(k) == binom(4, k));
        CHECK(m.basic.dim(5) == 0);
    }
    FoliatedModel h = heisenberg5();
    CHECK(h.frame().size() == 4);
}

TEST_CASE("truncated polynomial model counts monomials up to the cutoff") {
    FoliatedModel m = trunc_linear(1, 4);
    CHECK(m.n == 1);
    // Polynomials in x, y of degree at most 4.
    CHECK(m.basic.dim(0) == 15);
    CHECK(validate_moment(m).ok());
    REQUIRE(m.action);
    CHECK(m.action->dim == 1);
    CHECK(m.action->abelian());
}

TEST_CASE("JSON round-trip preserves the model") {
    for (const auto& name : builder_names()) {
        CAPTURE(name);
        FoliatedModel m = builder(name);
        nlohmann::json j = model_to_json(m);
        FoliatedModel back = model_from_json(j);
        CHECK(model_to_json(back) == j);
        CHECK(back.n == m.n);
        for (int k : m.basic.degrees()) CHECK(back.basic.dim(k) == m.basic.dim(k));
        CHECK(model_from_text(j.dump(2)).name == m.name);
    }
    FoliatedModel t = model_from_text(kTorus2);
    CHECK(t.n == 2);
    CHECK(validate_model(t).ok());
}

TEST_CASE("syntax errors carry line and column") {
    std::string msg = error_of("{\n  \"generators\": [\n  ,\n}");
    CHECK(msg.find("line 3") != std::string::npos);
    CHECK(msg.find("column 3") != std::string::npos);
    CHECK(error_of("").find("line 1") != std::string::npos);
}

TEST_CASE("schema errors name the offending field") {
    CHECK(error_of(R"({"omega": "0"})").find("generators") != std::string::npos);
    CHECK(error_of(R"({"generators": [{"name": "e1"}], "omega": "0"})").find("/generators/0") != std::string::npos);
    CHECK(error_of(R"({"generators": [{"name": "e1", "degree": 1}], "omega": "e1^e9"})").find("/omega") !=
          std::string::npos);
    CHECK(error_of(R"({"generators": [{"name": "e1", "degree": 1}, {"name": "e2", "degree": 1}],
                       "omega": "e1^e2", "foliation": ["e7"]})")
              .find("/foliation/0") != std::string::npos);
    CHECK(error_of(R"({"generators": [{"name": "e1", "degree": 1}, {"name": "e2", "degree": 1}],
                       "omega": "e1"})") != "");
    CHECK(error_of(R"({"generators": [{"name": "e1", "degree": 1}, {"name": "e2", "degree": 1}],
                       "omega": "e1^e2", "action": {"dimension": 1, "iota": [{}], "lie": [{}]}})")
              .find("/action") != std::string::npos);
    CHECK_THROWS_AS(load_model_file("/nonexistent/model.json"), DomainError);
}

TEST_CASE("validation detects a degenerate or non-closed form") {
    nlohmann::json j = nlohmann::json::parse(kTorus2);
    j["omega"] = "e1^e2";
    Report r = validate_model(model_from_json(j));
    CHECK_FALSE(r.ok());
    CHECK_FALSE(r.find("kernel of omega-contraction equals the leafwise span")->ok());

    // Leafwise direction on which omega does not vanish.
    nlohmann::json h = model_to_json(heisenberg5());
    h["omega"] = "e1^e2 + e3^e5";
    bool rejected = false;
    try {
        rejected = !validate_model(model_from_json(h)).ok();
    } catch (const DomainError&) {
        rejected = true;
    }
    CHECK(rejected);

    nlohmann::json k = model_to_json(kodaira_thurston());
    k["omega"] = "e1^e2 + e3^e4";
    Report rk = validate_model(model_from_json(k));
    CHECK_FALSE(rk.find("d omega = 0")->ok());
}

TEST_CASE("trivial action keeps the model and adds zero data") {
    FoliatedModel m = with_trivial_action(torus(1), 2);
    CHECK(m.name == "torus1_t2");
    REQUIRE(m.action);
    CHECK(m.action->dim == 2);
    CHECK(validate_moment(m).ok());
    CHECK(builder("torus1_t2").action->dim == 2);
}
