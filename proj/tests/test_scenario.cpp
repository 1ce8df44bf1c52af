#include "qtherm/error.hpp"
#include "qtherm/scenario.hpp"

#include "support.hpp"

#include <json.hpp>

#include <fstream>
#include <sstream>

using namespace qtherm;

namespace {

const char* kTwoPoint = R"(name = "two"
seed = 3

[bath]
kind = "IHB"

[system]
omega_m = 20
theta = 1.2
xi = 4

[couplings]
gamma1 = 1
gamma2 = 1

[sweep]
variable = "T"
min = 1
max = 5
points = 2

[output]
format = "csv"
)";

std::string replace(std::string text, const std::string& from, const std::string& to) {
    const auto at = text.find(from);
    REQUIRE(at != std::string::npos);
    return text.replace(at, from.size(), to);
}

std::string validation_message(const std::string& text) {
    try {
        const auto s = parse_scenario(text, "test.toml");
        s.validate();
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::Validation);
        return e.what();
    }
    FAIL("scenario was accepted");
    return {};
}

std::vector<std::string> data_lines(const std::string& csv) {
    std::vector<std::string> out;
    std::istringstream in(csv);
    for (std::string line; std::getline(in, line);)
        if (!line.empty() && line[0] != '#') out.push_back(line);
    return out;
}

}  // namespace

TEST_CASE("two-point temperature sweep") {
    const auto s = parse_scenario(kTwoPoint);
    CHECK(s.name == "two");
    CHECK(s.seed == 3);
    const auto t = run_sweep(s);
    REQUIRE(t.rows.size() == 2);
    const auto lines = data_lines(to_csv(t));
    CHECK(lines.size() == 3);
    CHECK(lines[0].rfind("theta,xi,omega1,omega2,eps1,eps2,T1,T2,tau11", 0) == 0);
    CHECK(t.rows[0][6].number == 1.0);
    CHECK(t.rows[1][6].number == 5.0);
}

TEST_CASE("parser rejects malformed scenarios") {
    CHECK(validation_message(replace(kTwoPoint, "seed = 3", "seed = 3\nbogus = 1")).find("bogus") != std::string::npos);
    CHECK(validation_message(replace(kTwoPoint, "[output]", "[extra]\n[output]")).find("extra") != std::string::npos);
    CHECK(validation_message(replace(kTwoPoint, "xi = 4", "xi = 4\nxi = 5")).find("xi") != std::string::npos);
    CHECK(validation_message(replace(kTwoPoint, "points = 2", "points = 1")).find("sweep.points") != std::string::npos);
    CHECK(validation_message(replace(kTwoPoint, "points = 2", "points = two")).find("test.toml") != std::string::npos);
    CHECK(validation_message(replace(kTwoPoint, "kind = \"IHB\"", "kind = \"XYZ\"")).find("kind") != std::string::npos);
    CHECK(validation_message(replace(kTwoPoint, "format = \"csv\"", "format = \"xml\"")).find("xml") != std::string::npos);
    CHECK(validation_message(replace(kTwoPoint, "theta = 1.2\n", "")).find("system.theta") != std::string::npos);
    CHECK(validation_message(replace(kTwoPoint, "gamma1 = 1", "gamma1 = -1")).find("gamma1") != std::string::npos);
}

TEST_CASE("non-positive eps2 is rejected with the constraint named") {
    const auto msg = validation_message(replace(kTwoPoint, "xi = 4", "xi = 19"));
    CHECK(msg.find("eps2") != std::string::npos);
    const auto bare = replace(replace(kTwoPoint, "omega_m = 20\ntheta = 1.2", "omega1 = 20\nomega2 = 10"), "xi = 4", "xi = 15");
    CHECK(validation_message(bare).find("eps2") != std::string::npos);
}

TEST_CASE("rendered scenarios parse back to the same scenario") {
    for (const auto& id : figure_ids()) {
        const auto s = figure_scenario(id);
        const auto text = render_scenario(s);
        CHECK(render_scenario(parse_scenario(text)) == text);
    }
    const auto s = parse_scenario(kTwoPoint);
    CHECK(render_scenario(parse_scenario(render_scenario(s))) == render_scenario(s));
}

TEST_CASE("a scenario replicating a figure gives identical output") {
    const auto fig = figure_scenario("fig4");
    const auto copy = parse_scenario(render_scenario(fig));
    CHECK(to_csv(run_sweep(fig, 4)) == to_csv(run_sweep(copy, 1)));
    CHECK(to_json(run_sweep(fig, 2)) == to_json(run_sweep(copy, 3)));
}

TEST_CASE("sweeps are deterministic across thread counts") {
    const auto s = figure_scenario("fig5");
    const auto a = to_csv(run_sweep(s, 1));
    CHECK(a == to_csv(run_sweep(s, 8)));
    CHECK(a == to_csv(run_sweep(s, 3)));
}

TEST_CASE("figure tables") {
    SUBCASE("fig2 covers the admissible theta range") {
        const auto t = run_sweep(figure_scenario("fig2"), 4);
        CHECK(t.rows.size() == 501);
        const auto range = sweep_theta_range(20, 10);
        CHECK(t.rows.front()[0].number == doctest::Approx(range.lo));
        CHECK(t.rows.back()[0].number == doctest::Approx(range.hi));
    }
    SUBCASE("fig5 skips the resonant point") {
        const auto t = run_sweep(figure_scenario("fig5"), 4);
        for (const auto& row : t.rows) {
            CHECK(std::abs(row[0].number - kHalfPi) >= 1e-6);
            CHECK(row[7].text == "CHB");
        }
        bool found = false;
        for (const auto& [k, v] : t.metadata) found = found || k == "excluded";
        CHECK(found);
    }
    SUBCASE("fig4 lists one series per coupling") {
        const auto t = run_sweep(figure_scenario("fig4"), 4);
        CHECK(t.rows.size() == 5 * 400);
        CHECK(t.rows[0][1].number == 2.0);
        CHECK(t.rows[400][1].number == 4.0);
    }
    CHECK_THROWS_AS(figure_scenario("fig9"), Error);
}

TEST_CASE("csv and json output") {
    const auto t = run_sweep(parse_scenario(kTwoPoint));
    const auto csv = to_csv(t);
    CHECK(csv.find("nan") == std::string::npos);
    CHECK(csv.find("inf") == std::string::npos);
    CHECK(csv.rfind("# version = ", 0) == 0);
    CHECK(csv.find("# seed = 3") != std::string::npos);

    const auto j = nlohmann::json::parse(to_json(t));
    CHECK(j["metadata"]["name"] == "two");
    CHECK(j["columns"].size() == t.columns.size());
    CHECK(j["rows"].size() == 2);
    CHECK(j["rows"][0].size() == t.columns.size());

    // every temperature column is followed by a tag
    for (std::size_t c = 0; c < t.columns.size(); ++c) {
        if (t.columns[c].size() > 4 && t.columns[c].substr(t.columns[c].size() - 4) == "_tag") {
            for (const auto& row : t.rows) {
                const auto& tag = row[c].text;
                CHECK((tag == "finite" || tag == "infinite" || tag == "negative" || tag == "undefined"));
                CHECK((row[c - 1].kind == Cell::Kind::Number) == (tag == "finite" || tag == "negative"));
            }
        }
    }
}

TEST_CASE("number formatting round-trips") {
    for (double x : {0.1, 1.0 / 3.0, 1e-300, 123456789.125, -2.5, kHalfPi}) CHECK(std::stod(format_number(x)) == x);
    CHECK(format_number(0.0) == "0");
    CHECK(parse_format("json") == OutputFormat::Json);
    CHECK_THROWS_AS(parse_format("xml"), Error);
}

TEST_CASE("file errors") {
    try {
        load_scenario("/nonexistent/scenario.toml");
        FAIL("expected an io error");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::Io);
    }
    CHECK_THROWS_AS(write_file("/nonexistent/dir/out.csv", "x"), Error);
}
