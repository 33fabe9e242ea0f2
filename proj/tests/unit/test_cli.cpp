#include <doctest.h>

#include "wolffkit/commands.hpp"
#include "wolffkit/errors.hpp"

#include <cmath>

using namespace wolffkit;

namespace {

config::Document doc(const std::string& text) { return config::Document::parse(text, "run.json", "."); }

std::string error_of(const std::string& text, const std::string& command) {
    try {
        const auto d = doc(text);
        cli::run_command(command, d, cli::resolve_settings(d, {}, {}, nullptr));
    } catch (const ConfigError& e) {
        return e.what();
    }
    return "";
}

const char* kPotentials = R"({
  "n": 3,
  "nfunction": {"kind": "power", "p": 2},
  "measures": {"pole": {"kind": "dirac"}},
  "potential": [
    {"id": "offset", "measure": "pole", "x0": [[0.1, 0, 0], [0, 0.3, 0]], "R": [0.2, 0.4], "value": 2.5},
    {"id": "at-atom", "measure": "pole", "x0": [0, 0, 0], "R": 1, "expect": "diverges"},
    {"id": "cloud", "measure": {"kind": "atoms", "atoms": [{"at": [0.2, 0, 0], "mass": 0.5}, {"at": [0, -0.1, 0.1], "mass": 2}]},
     "x0": [[0, 0, 0], [0.05, 0.05, 0.05], [0.3, 0.3, 0]], "R": [0.25, 0.5]}
  ]
})";

}  // namespace

TEST_CASE("settings precedence: flag, config, environment, default") {
    const auto bare = doc(R"({"potential": []})");
    CHECK(cli::resolve_settings(bare, {}, {}, nullptr).tol == 1e-9);
    CHECK(cli::resolve_settings(bare, {}, {}, "1e-6").tol == 1e-6);
    CHECK(cli::resolve_settings(bare, 1e-4, {}, "1e-6").tol == 1e-4);
    const auto with_tol = doc(R"({"tol": 1e-7, "jobs": 3})");
    CHECK(cli::resolve_settings(with_tol, {}, {}, "1e-6").tol == 1e-7);
    CHECK(cli::resolve_settings(with_tol, {}, {}, nullptr).jobs == 3);
    CHECK(cli::resolve_settings(with_tol, {}, 5, nullptr).jobs == 5);

    CHECK_THROWS_AS(cli::resolve_settings(bare, {}, {}, "0"), ConfigError);
    CHECK_THROWS_AS(cli::resolve_settings(bare, {}, {}, "1e-6x"), ConfigError);
    CHECK_THROWS_AS(cli::resolve_settings(bare, -1.0, {}, nullptr), ConfigError);
    CHECK_THROWS_AS(cli::resolve_settings(bare, {}, 0, nullptr), ConfigError);
    CHECK_THROWS_AS(cli::resolve_settings(doc(R"({"tol": 0})"), {}, {}, nullptr), ConfigError);
    CHECK_THROWS_AS(cli::resolve_settings(doc("[1, 2]"), {}, {}, nullptr), ConfigError);
}

TEST_CASE("schema violations name the line, column and pointer") {
    const std::string bad_radius = "{\n  \"n\": 3,\n  \"nfunction\": {\"kind\": \"power\", \"p\": 2},\n"
                                   "  \"potential\": [{\"measure\": {\"kind\": \"dirac\"}, \"x0\": [0, 0, 0], \"R\": 0}]\n}";
    const auto msg = error_of(bad_radius, "potential");
    CHECK(msg.find("run.json:4:") == 0);
    CHECK(msg.find("/potential/0/R") != std::string::npos);

    CHECK(error_of(R"({"n": 3, "nfunction": {"kind": "power", "p": 2},
      "potential": [{"measure": {"kind": "dirac"}, "x0": [0, 0], "R": 1}]})",
                   "potential")
              .find("3 coordinates") != std::string::npos);
    CHECK(error_of(R"({"n": 3, "nfunction": {"kind": "cubic"}, "potential": [{"measure": {"kind": "dirac"}, "x0": [0,0,0], "R": 1}]})",
                   "potential")
              .find("/nfunction/kind") != std::string::npos);
    CHECK(error_of(R"({"n": 3, "nfunction": {"kind": "power", "p": 2}, "measures": {},
      "potential": [{"measure": "missing", "x0": [0,0,0], "R": 1}]})",
                   "potential") != "");
    CHECK(error_of(R"({"n": 3, "nfunction": {"kind": "power", "p": 2},
      "oracle": [{"measure": {"kind": "dirac", "at": [0.1, 0, 0]}, "R_out": 1}]})",
                   "oracle")
              .find("radial about the origin") != std::string::npos);
    CHECK(error_of(R"({"n": 3, "nfunction": {"kind": "power", "p": 2},
      "criteria": [{"criterion": "sobolev"}]})",
                   "criteria")
              .find("unknown criterion") != std::string::npos);
    CHECK(error_of(R"({"n": 3, "nfunction": {"kind": "power", "p": 2},
      "criteria": [{"criterion": "int_div", "expect": "finite"}]})",
                   "criteria")
              .find("expect must be one of") != std::string::npos);
    CHECK(error_of(R"({"n": 3, "nfunction": {"kind": "power", "p": 2}, "potential": [
      {"id": "a", "measure": {"kind": "zero"}, "x0": [0,0,0], "R": 1},
      {"id": "a", "measure": {"kind": "zero"}, "x0": [0,0,0], "R": 1}]})",
                   "potential")
              .find("duplicate instance id") != std::string::npos);
    CHECK(error_of(R"({"potential": []})", "oracle").find("no 'oracle' section") != std::string::npos);
    CHECK(error_of(R"({"potential": {}})", "potential").find("list of instances") != std::string::npos);
    CHECK(error_of("{\"potential\": [}", "potential").find("run.json:1:") == 0);
}

TEST_CASE("a late schema error stops the command before any evaluation") {
    // the first instance would diverge into a long computation if evaluated
    const auto d = doc(R"({"n": 3, "nfunction": {"kind": "power", "p": 2}, "potential": [
      {"measure": {"kind": "uniform_ball", "radius": 1}, "x0": [0,0,0], "R": 1},
      {"measure": {"kind": "zero"}, "x0": [0,0,0], "R": -1}]})");
    CHECK_THROWS_AS(cli::prepare_command("potential", d, {}), ConfigError);
}

TEST_CASE("potential rows and exit codes") {
    const auto d = doc(kPotentials);
    const auto r = cli::run_command("potential", d, {});
    REQUIRE(r.rows.size() == 4 + 1 + 6);
    CHECK(r.exit_code == 1);
    // rows merge by id: at-atom, cloud, offset
    CHECK(r.rows[0].id == "at-atom");
    CHECK(r.rows[0].status == "diverges");
    CHECK(r.rows[0].outcome == report::Outcome::pass);
    CHECK(r.rows[7].id == "offset");
    CHECK(r.rows[7].value == doctest::Approx(2.5).epsilon(1e-8));
    CHECK(r.rows[7].outcome == report::Outcome::pass);
    CHECK(r.rows[9].detail.find("x0=(0 0.3 0)") == 0);
    CHECK(r.rows[9].outcome == report::Outcome::fail);
    CHECK(r.failures == 3);  // only (0.1, 0, 0) with R = 0.2 hits 2.5

    const auto empty = cli::run_command("potential", doc(R"({"potential": []})"), {});
    CHECK(empty.rows.empty());
    CHECK(empty.exit_code == 0);
    const auto missing = cli::run_command("oracle", d, {}, true);
    CHECK(missing.rows.empty());
    CHECK(missing.exit_code == 0);
}

TEST_CASE("reports are identical for serial and parallel runs and across reruns") {
    const auto d = doc(kPotentials);
    const auto serial = report::csv_body(cli::run_command("potential", d, {1e-9, 1}).rows);
    const auto again = report::csv_body(cli::run_command("potential", d, {1e-9, 1}).rows);
    const auto parallel = report::csv_body(cli::run_command("potential", d, {1e-9, 8}).rows);
    CHECK(serial == again);
    CHECK(serial == parallel);
    CHECK(serial.rfind("id,operation,inputs_digest,value,status,error,expected,outcome,detail\n", 0) == 0);
}

TEST_CASE("inputs digest follows the resolved inputs, not their spelling") {
    const auto named = doc(R"({"n": 3, "nfunction": {"kind": "power", "p": 2}, "measures": {"pole": {"kind": "dirac"}},
      "potential": [{"id": "a", "measure": "pole", "x0": [0.1, 0, 0], "R": 0.2}]})");
    const auto inline_ = doc(R"({"n": 3, "nfunction": {"kind": "power", "p": 2},
      "potential": [{"id": "a", "measure": {"kind": "dirac"}, "x0": [0.1, 0, 0], "R": 0.2}]})");
    const auto a = cli::run_command("potential", named, {});
    const auto b = cli::run_command("potential", inline_, {});
    CHECK(a.rows[0].digest == b.rows[0].digest);
    const auto c = cli::run_command("potential", inline_, {1e-6, 1});
    CHECK(a.rows[0].digest != c.rows[0].digest);
}

TEST_CASE("verify-bounds: vacuous rows, skipped poles and the suite bracket") {
    const auto d = doc(R"({"n": 3, "nfunction": {"kind": "power", "p": 2}, "verify_bounds": [
      {"id": "zero", "measure": {"kind": "zero"}, "R_out": 1, "probes": [0.2], "R_sweep": [0.1]},
      {"id": "pole", "measure": {"kind": "dirac"}, "R_out": 1, "probes": [0, 0.1], "R_sweep": [0.05]}]})");
    const auto r = cli::run_command("verify-bounds", d, {});
    REQUIRE(r.rows.size() == 3 + 2);
    CHECK(r.rows[0].id == "pole");
    CHECK(r.rows[0].status == "skipped");
    CHECK(r.rows[0].outcome == report::Outcome::warn);
    CHECK(r.rows[2].id == "zero");
    CHECK(r.rows[2].value == 0.0);
    CHECK(r.rows[2].outcome == report::Outcome::pass);
    CHECK(r.rows[3].operation == "ratio_low");
    CHECK(r.rows[3].status == "vacuous");
    CHECK(r.rows[4].operation == "ratio_up");
    CHECK(r.rows[4].value == doctest::Approx(r.rows[1].value));
    CHECK(r.warnings == 1);
    CHECK(r.exit_code == 0);
}

TEST_CASE("criteria compare verdicts with expectations") {
    const auto d = doc(R"({"n": 3, "nfunction": {"kind": "power", "p": 2}, "criteria": [
      {"id": "m", "criterion": "morrey", "theta": 0.5, "measure": {"kind": "morrey", "theta": 0.5}, "radii": [0.01, 0.1]},
      {"id": "p", "criterion": "hedberg_wolff", "measure": {"kind": "dirac"}, "R": 1, "expect": "diverges"},
      {"id": "t", "criterion": "lorentz", "function": {"steps": [[1, 1]], "tail": {"exponent": -0.6666666666666666}},
       "expect": "violated"},
      {"id": "w", "criterion": "int_div", "expect": "bounded"}]})");
    const auto r = cli::run_command("criteria", d, {});
    REQUIRE(r.rows.size() == 4);
    CHECK(r.rows[0].value == doctest::Approx(1.0).epsilon(1e-6));
    CHECK(r.rows[0].outcome == report::Outcome::pass);
    CHECK(r.rows[1].outcome == report::Outcome::pass);
    CHECK(r.rows[2].status == "violated");
    CHECK(r.rows[3].status == "unbounded");
    CHECK(r.rows[3].outcome == report::Outcome::fail);
    CHECK(r.exit_code == 1);
}

TEST_CASE("an instance tolerance overrides the run tolerance for that instance only") {
    const auto d = doc(R"({"n": 3, "nfunction": {"kind": "power", "p": 2}, "potential": [
      {"id": "a", "measure": {"kind": "dirac"}, "x0": [0.1, 0, 0], "R": 0.2, "tol": 1e-4},
      {"id": "b", "measure": {"kind": "dirac"}, "x0": [0.1, 0, 0], "R": 0.2}]})");
    const auto r = cli::run_command("potential", d, {1e-9, 1});
    const auto loose = cli::run_command("potential", d, {1e-6, 1});
    CHECK(r.rows[0].digest == loose.rows[0].digest);
    CHECK(r.rows[1].digest != loose.rows[1].digest);
    CHECK_THROWS_AS(cli::run_command("potential", doc(R"({"n": 3, "nfunction": {"kind": "power", "p": 2}, "potential": [
      {"measure": {"kind": "dirac"}, "x0": [0.1, 0, 0], "R": 0.2, "tol": 0}]})"), {}),
                    ConfigError);
}
