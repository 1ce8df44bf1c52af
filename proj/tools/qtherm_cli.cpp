// qtherm command-line front end. Talks to the library only through qtherm.h.
//
//   qtherm figure <id> [--out PATH] [--format csv|json]
//   qtherm run <scenario> [--out PATH] [--format csv|json] [--threads N]
//   qtherm verify <suite>
//
// Exit codes: 0 success, 1 validation error, 2 physics error, 3 verification
// failure, 4 I/O error, 5 internal error.

#include "qtherm/qtherm.h"

#include <CLI11.hpp>

#include <cstdio>
#include <string>

namespace {

int exit_code(qtherm_status s) {
    switch (s) {
        case QTHERM_OK: return 0;
        case QTHERM_ERR_VALIDATION:
        case QTHERM_ERR_ARGUMENT: return 1;
        case QTHERM_ERR_PHYSICS: return 2;
        case QTHERM_ERR_VERIFY: return 3;
        case QTHERM_ERR_IO: return 4;
        default: return 5;
    }
}

int report(qtherm_status s) {
    if (s != QTHERM_OK) std::fprintf(stderr, "qtherm: %s\n", qtherm_last_error());
    return exit_code(s);
}

const char* or_null(const std::string& s) { return s.empty() ? nullptr : s.c_str(); }

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Thermalization and entanglement of two coupled two-level systems"};
    app.set_version_flag("--version", std::string(qtherm_version()));
    app.require_subcommand(1);

    std::string figure_id;
    std::string out_path;
    std::string format;
    auto* figure = app.add_subcommand("figure", "Write the data behind one figure");
    figure->add_option("id", figure_id, "fig2, fig3a, fig3b, fig3c, fig3d, fig4 or fig5")->required();
    figure->add_option("--out", out_path, "Output file (default: $QTHERM_OUTPUT_DIR/<id>.<format>)");
    figure->add_option("--format", format, "csv or json")->check(CLI::IsMember({"csv", "json"}));

    std::string scenario_path;
    unsigned threads = 0;
    auto* run = app.add_subcommand("run", "Run a scenario file");
    run->add_option("scenario", scenario_path, "Scenario file")->required();
    run->add_option("--out", out_path, "Output file (default: [output] path, else $QTHERM_OUTPUT_DIR)");
    run->add_option("--format", format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
    run->add_option("--threads", threads, "Worker threads (0 = all cores)")->check(CLI::NonNegativeNumber);

    std::string suite;
    auto* verify = app.add_subcommand("verify", "Run a verification suite and print its JSON report");
    verify->add_option("suite", suite, "oracles, invariants or dynamics")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    if (*figure) return report(qtherm_run_figure(figure_id.c_str(), or_null(out_path), or_null(format)));
    if (*run) return report(qtherm_run_scenario(scenario_path.c_str(), or_null(out_path), or_null(format), threads));

    char* json = nullptr;
    const qtherm_status s = qtherm_run_verify(suite.c_str(), &json);
    if (json) {
        std::fputs(json, stdout);
        qtherm_free_string(json);
    }
    return report(s);
}
