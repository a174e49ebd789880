#include <cmath>

#include "doctest.h"
#include "json.hpp"
#include "thfield/harness.hpp"

using namespace thfield;

namespace {

const CheckResult* find(const std::vector<CheckResult>& rs, const std::string& name) {
    for (const auto& r : rs)
        if (r.name == name) return &r;
    return nullptr;
}

}  // namespace

TEST_SUITE("harness") {

TEST_CASE("fractional suite passes at a reduced sweep") {
    FractionalCalcConfig cfg;
    cfg.alphas = {0.5};
    cfg.lambdas = {1.0};
    const auto rs = run_fractional_calculus_suite(cfg);
    CHECK(all_passed(rs));
    const auto* fault = find(rs, "fractional.fault.symbol_detects");
    REQUIRE(fault != nullptr);
    CHECK(fault->status == CheckResult::Status::pass);
    CHECK(find(rs, "fractional.semigroup.fourier") != nullptr);
    CHECK(find(rs, "fractional.bound") != nullptr);
    // results arrive name-sorted
    for (std::size_t i = 1; i < rs.size(); ++i) CHECK(rs[i - 1].name < rs[i].name);
}

TEST_CASE("empty test-function set runs vacuously with warnings") {
    FractionalCalcConfig cfg;
    cfg.test_function_count = 0;
    const auto rs = run_fractional_calculus_suite(cfg);
    CHECK(!rs.empty());
    CHECK(all_passed(rs));  // warn still counts as non-failure
    for (const auto& r : rs) CHECK(r.status == CheckResult::Status::warn);
}

TEST_CASE("field-law suite analytic checks pass") {
    FieldLawConfig cfg;
    cfg.hursts = {0.75};
    cfg.lambdas = {1.0};
    cfg.run_mc = false;
    const auto rs = run_field_law_suite(cfg);
    CHECK(all_passed(rs));
    const auto* stress = find(rs, "fieldlaw.stress.h051");
    REQUIRE(stress != nullptr);
    CHECK(stress->status == CheckResult::Status::warn);  // pass, flagged regime
    CHECK(find(rs, "fieldlaw.cross_oracle") != nullptr);
    CHECK(find(rs, "fieldlaw.scaling") != nullptr);
    CHECK(find(rs, "fieldlaw.sampler.cholesky") == nullptr);  // MC disabled
}

TEST_CASE("wiener suite analytic checks pass") {
    WienerConfig cfg;
    cfg.run_mc = false;
    cfg.smooth_test_functions = 4;
    const auto rs = run_wiener_suite(cfg);
    CHECK(all_passed(rs));
    const auto* gate = find(rs, "wiener.semimartingale.gate");
    REQUIRE(gate != nullptr);
    CHECK(gate->status == CheckResult::Status::warn);
    CHECK(gate->details.find("refused") != std::string::npos);
}

TEST_CASE("report serialization round trips") {
    std::vector<CheckResult> rs{
        {"a.first", CheckResult::Status::pass, 1e-7, 1e-6, "fine"},
        {"b.second", CheckResult::Status::fail, 2.0, 1.0, "said \"no\""},
        {"c.third", CheckResult::Status::warn, 0.0, 0.0, ""},
    };
    CHECK(!all_passed(rs));
    const std::string text = report_to_text(rs);
    CHECK(text.find("[PASS] a.first") != std::string::npos);
    CHECK(text.find("[FAIL] b.second") != std::string::npos);
    CHECK(text.find("[WARN] c.third") != std::string::npos);

    const auto parsed = nlohmann::json::parse(report_to_json(rs));
    REQUIRE(parsed.is_array());
    REQUIRE(parsed.size() == 3);
    CHECK(parsed[0]["name"] == "a.first");
    CHECK(parsed[1]["status"] == "fail");
    CHECK(parsed[1]["details"] == "said \"no\"");
}

}  // TEST_SUITE
