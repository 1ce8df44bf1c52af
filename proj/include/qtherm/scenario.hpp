#pragma once

// Scenario description, strict parser, figure presets and the sweep driver that
// turns a scenario into a table of steady-state observables.

#include "qtherm/rates.hpp"
#include "qtherm/spectrum.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace qtherm {

enum class BathKind { IHB, CHB };
enum class SweepVariable { Theta, T, Xi };
enum class OutputFormat { Csv, Json };

const char* to_string(SweepVariable v) noexcept;
const char* to_string(OutputFormat f) noexcept;
OutputFormat parse_format(const std::string& text);  // Validation on anything but csv / json

struct SweepSpec {
    SweepVariable variable = SweepVariable::Theta;
    double min{};
    double max{};
    std::size_t points{};
};

// Exactly one of the two system forms is set: (omega_m, xi, theta) or
// (omega1, omega2, xi). xi may list several values, giving one series each.
struct SystemSpec {
    std::optional<double> omega_m;
    std::optional<double> theta;
    std::optional<double> omega1;
    std::optional<double> omega2;
    std::vector<double> xi;
};

struct Scenario {
    std::string name = "scenario";
    BathKind bath = BathKind::IHB;
    SystemSpec system;
    // IHB: T1, T2; CHB: T. Absent when the sweep runs over T.
    std::optional<double> T1;
    std::optional<double> T2;
    std::optional<double> T;
    // IHB couplings
    double gamma1 = 1.0;
    double gamma2 = 1.0;
    // CHB couplings gamma_l(eps_i)
    double gamma1_e1 = 1.0;
    double gamma2_e1 = 1.0;
    double gamma1_e2 = 1.0;
    double gamma2_e2 = 1.0;
    double tau33_0 = 0.0;  // dark-sector initial population of lambda_3
    SweepSpec sweep;
    std::optional<std::string> output_path;
    OutputFormat format = OutputFormat::Csv;
    std::uint64_t seed = 0;

    // Throws Validation naming the offending field (for instance "sweep.points")
    // or the violated constraint at the first offending sweep point.
    void validate() const;
};

// Sections: top level (name, seed), [bath] kind tau33_0, [system], [temperatures],
// [couplings], [sweep], [output]. Unknown sections or keys, duplicates and
// malformed values are Validation errors quoting the line.
Scenario parse_scenario(const std::string& text, const std::string& origin = "<scenario>");
Scenario load_scenario(const std::string& path);  // Io when unreadable

// fig2, fig3a, fig3b, fig3c, fig3d, fig4, fig5.
const std::vector<std::string>& figure_ids();
Scenario figure_scenario(const std::string& id);  // Validation for an unknown id

// Canonical scenario text; parse_scenario(render_scenario(s)) reproduces s.
std::string render_scenario(const Scenario& s);

// ---- sweep ----

struct Cell {
    enum class Kind { Number, Missing, Text };
    Kind kind = Kind::Missing;
    double number{};
    std::string text;

    static Cell num(double x) { return {Kind::Number, x, {}}; }
    static Cell missing() { return {}; }
    static Cell str(std::string s) { return {Kind::Text, 0.0, std::move(s)}; }
};

struct Table {
    std::vector<std::pair<std::string, std::string>> metadata;
    std::vector<std::string> columns;
    std::vector<std::vector<Cell>> rows;
};

// Evaluates every sweep point (in parallel over `threads` workers) and returns
// rows ordered by series, then sweep index. Physics errors carry the offending
// point in their message.
Table run_sweep(const Scenario& s, unsigned threads = 1);

std::string format_number(double x);  // shortest round-trip form
std::string to_csv(const Table& t);
std::string to_json(const Table& t);
std::string render(const Table& t, OutputFormat f);

// Writes the text to path (Io on failure).
void write_file(const std::string& path, const std::string& text);

// Directory used when no output path is given: $QTHERM_OUTPUT_DIR, else ".".
std::string default_output_dir();

}  // namespace qtherm
