#include "qtherm/scenario.hpp"

#include "qtherm/entangle.hpp"
#include "qtherm/error.hpp"
#include "qtherm/steady.hpp"
#include "parallel.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

namespace qtherm {

const char* to_string(SweepVariable v) noexcept {
    switch (v) {
        case SweepVariable::Theta: return "theta";
        case SweepVariable::T: return "T";
        case SweepVariable::Xi: return "xi";
    }
    return "?";
}

const char* to_string(OutputFormat f) noexcept {
    return f == OutputFormat::Csv ? "csv" : "json";
}

OutputFormat parse_format(const std::string& text) {
    if (text == "csv") return OutputFormat::Csv;
    if (text == "json") return OutputFormat::Json;
    fail(ErrorKind::Validation, "output.format: expected \"csv\" or \"json\", got \"" + text + "\"");
}

std::string format_number(double x) {
    if (x == 0.0) return "0";  // folds -0
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof(buf), x);
    return std::string(buf, res.ptr);
}

// ---- parser ----

namespace {

struct Value {
    enum class Kind { Number, String, Bool, List };
    Kind kind = Kind::Number;
    double number{};
    std::string text;  // raw token for numbers, contents for strings
    bool flag{};
    std::vector<double> list;
};

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

[[noreturn]] void syntax(const std::string& origin, int line, const std::string& what) {
    fail(ErrorKind::Validation, origin + ":" + std::to_string(line) + ": " + what);
}

std::optional<double> parse_double(const std::string& tok) {
    if (tok.empty()) return std::nullopt;
    const char* first = tok.data();
    if (*first == '+') ++first;
    double x{};
    const auto res = std::from_chars(first, tok.data() + tok.size(), x);
    if (res.ec != std::errc() || res.ptr != tok.data() + tok.size()) return std::nullopt;
    return x;
}

// Removes a trailing comment that is not inside a string.
std::string strip_comment(const std::string& line) {
    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        if (line[i] == '"' && (i == 0 || line[i - 1] != '\\')) quoted = !quoted;
        if (line[i] == '#' && !quoted) return line.substr(0, i);
    }
    return line;
}

Value parse_value(const std::string& raw, const std::string& origin, int line) {
    Value v;
    if (raw.empty()) syntax(origin, line, "missing value");
    if (raw.front() == '"') {
        if (raw.size() < 2 || raw.back() != '"') syntax(origin, line, "unterminated string");
        v.kind = Value::Kind::String;
        for (std::size_t i = 1; i + 1 < raw.size(); ++i) {
            char c = raw[i];
            if (c == '\\') {
                if (i + 2 >= raw.size()) syntax(origin, line, "dangling escape in string");
                c = raw[++i];
                if (c != '"' && c != '\\') syntax(origin, line, "unsupported escape in string");
            } else if (c == '"') {
                syntax(origin, line, "unexpected quote in string");
            }
            v.text.push_back(c);
        }
        return v;
    }
    if (raw == "true" || raw == "false") {
        v.kind = Value::Kind::Bool;
        v.flag = raw == "true";
        return v;
    }
    if (raw.front() == '[') {
        if (raw.back() != ']') syntax(origin, line, "unterminated array");
        v.kind = Value::Kind::List;
        const std::string body = trim(raw.substr(1, raw.size() - 2));
        if (body.empty()) return v;
        std::stringstream ss(body);
        std::string item;
        while (std::getline(ss, item, ',')) {
            const auto x = parse_double(trim(item));
            if (!x) syntax(origin, line, "array entries must be numbers: \"" + trim(item) + "\"");
            v.list.push_back(*x);
        }
        if (body.back() == ',') syntax(origin, line, "trailing comma in array");
        return v;
    }
    const auto x = parse_double(raw);
    if (!x) syntax(origin, line, "cannot parse value \"" + raw + "\"");
    v.number = *x;
    v.text = raw;
    return v;
}

const std::map<std::string, std::set<std::string>>& schema() {
    static const std::map<std::string, std::set<std::string>> s{
        {"", {"name", "seed"}},
        {"bath", {"kind", "tau33_0"}},
        {"system", {"omega_m", "theta", "omega1", "omega2", "xi"}},
        {"temperatures", {"T1", "T2", "T"}},
        {"couplings",
         {"gamma1", "gamma2", "gamma_e1", "gamma_e2", "gamma1_e1", "gamma2_e1", "gamma1_e2", "gamma2_e2"}},
        {"sweep", {"variable", "min", "max", "points"}},
        {"output", {"path", "format"}},
    };
    return s;
}

struct Entry {
    Value value;
    int line{};
};

class Fields {
public:
    Fields(std::map<std::string, Entry> entries, std::string origin)
        : entries_(std::move(entries)), origin_(std::move(origin)) {}

    bool has(const std::string& key) const { return entries_.count(key) != 0; }

    const Entry* find(const std::string& key) const {
        auto it = entries_.find(key);
        return it == entries_.end() ? nullptr : &it->second;
    }

    [[noreturn]] void bad(const std::string& key, const std::string& what) const {
        const Entry* e = find(key);
        const std::string where = e ? origin_ + ":" + std::to_string(e->line) + ": " : origin_ + ": ";
        fail(ErrorKind::Validation, where + key + ": " + what);
    }

    std::optional<double> number(const std::string& key) const {
        const Entry* e = find(key);
        if (!e) return std::nullopt;
        if (e->value.kind != Value::Kind::Number) bad(key, "expected a number");
        if (!std::isfinite(e->value.number)) bad(key, "must be finite");
        return e->value.number;
    }

    std::optional<std::string> string(const std::string& key) const {
        const Entry* e = find(key);
        if (!e) return std::nullopt;
        if (e->value.kind != Value::Kind::String) bad(key, "expected a quoted string");
        return e->value.text;
    }

    std::optional<std::uint64_t> integer(const std::string& key) const {
        const Entry* e = find(key);
        if (!e) return std::nullopt;
        if (e->value.kind != Value::Kind::Number) bad(key, "expected an integer");
        const std::string& tok = e->value.text;
        std::uint64_t n{};
        const auto res = std::from_chars(tok.data(), tok.data() + tok.size(), n);
        if (res.ec != std::errc() || res.ptr != tok.data() + tok.size()) bad(key, "expected a non-negative integer");
        return n;
    }

    std::vector<double> numbers(const std::string& key) const {
        const Entry* e = find(key);
        if (!e) return {};
        if (e->value.kind == Value::Kind::Number) return {*number(key)};
        if (e->value.kind != Value::Kind::List || e->value.list.empty()) {
            bad(key, "expected a number or a non-empty array of numbers");
        }
        return e->value.list;
    }

private:
    std::map<std::string, Entry> entries_;
    std::string origin_;
};

}  // namespace

Scenario parse_scenario(const std::string& text, const std::string& origin) {
    std::map<std::string, Entry> entries;  // "section.key" (top level: "key")
    std::set<std::string> seen_sections;
    std::string section;
    std::istringstream in(text);
    std::string raw_line;
    int line_no = 0;
    while (std::getline(in, raw_line)) {
        ++line_no;
        const std::string line = trim(strip_comment(raw_line));
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']') syntax(origin, line_no, "malformed section header");
            section = trim(line.substr(1, line.size() - 2));
            if (section.empty() || !schema().count(section)) syntax(origin, line_no, "unknown section [" + section + "]");
            if (!seen_sections.insert(section).second) syntax(origin, line_no, "duplicate section [" + section + "]");
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos) syntax(origin, line_no, "expected key = value");
        const std::string key = trim(line.substr(0, eq));
        if (key.empty()) syntax(origin, line_no, "missing key");
        const std::string path = section.empty() ? key : section + "." + key;
        if (!schema().at(section).count(key)) syntax(origin, line_no, "unknown key " + path);
        if (entries.count(path)) syntax(origin, line_no, "duplicate key " + path);
        entries.emplace(path, Entry{parse_value(trim(line.substr(eq + 1)), origin, line_no), line_no});
    }

    const Fields f(std::move(entries), origin);
    Scenario s;
    if (auto v = f.string("name")) s.name = *v;
    if (auto v = f.integer("seed")) s.seed = *v;

    const auto kind = f.string("bath.kind");
    if (!kind) fail(ErrorKind::Validation, origin + ": bath.kind is required (\"IHB\" or \"CHB\")");
    if (*kind == "IHB") {
        s.bath = BathKind::IHB;
    } else if (*kind == "CHB") {
        s.bath = BathKind::CHB;
    } else {
        f.bad("bath.kind", "expected \"IHB\" or \"CHB\"");
    }
    const bool ihb = s.bath == BathKind::IHB;
    if (auto v = f.number("bath.tau33_0")) {
        if (ihb) f.bad("bath.tau33_0", "only meaningful for a common bath");
        s.tau33_0 = *v;
    }

    s.system.omega_m = f.number("system.omega_m");
    s.system.theta = f.number("system.theta");
    s.system.omega1 = f.number("system.omega1");
    s.system.omega2 = f.number("system.omega2");
    s.system.xi = f.numbers("system.xi");

    if (ihb) {
        if (f.has("temperatures.T")) f.bad("temperatures.T", "independent baths take T1 and T2");
        s.T1 = f.number("temperatures.T1");
        s.T2 = f.number("temperatures.T2");
        for (const char* k : {"couplings.gamma_e1", "couplings.gamma_e2", "couplings.gamma1_e1", "couplings.gamma2_e1",
                              "couplings.gamma1_e2", "couplings.gamma2_e2"}) {
            if (f.has(k)) f.bad(k, "independent baths take gamma1 and gamma2");
        }
        if (auto v = f.number("couplings.gamma1")) s.gamma1 = *v;
        if (auto v = f.number("couplings.gamma2")) s.gamma2 = *v;
    } else {
        for (const char* k : {"temperatures.T1", "temperatures.T2"}) {
            if (f.has(k)) f.bad(k, "a common bath takes a single T");
        }
        s.T = f.number("temperatures.T");
        for (const char* k : {"couplings.gamma1", "couplings.gamma2"}) {
            if (f.has(k)) f.bad(k, "a common bath takes gamma_e1/gamma_e2 or gamma<l>_e<i>");
        }
        if (auto v = f.number("couplings.gamma_e1")) {
            for (const char* k : {"couplings.gamma1_e1", "couplings.gamma2_e1"}) {
                if (f.has(k)) f.bad(k, "conflicts with couplings.gamma_e1");
            }
            s.gamma1_e1 = s.gamma2_e1 = *v;
        }
        if (auto v = f.number("couplings.gamma_e2")) {
            for (const char* k : {"couplings.gamma1_e2", "couplings.gamma2_e2"}) {
                if (f.has(k)) f.bad(k, "conflicts with couplings.gamma_e2");
            }
            s.gamma1_e2 = s.gamma2_e2 = *v;
        }
        if (auto v = f.number("couplings.gamma1_e1")) s.gamma1_e1 = *v;
        if (auto v = f.number("couplings.gamma2_e1")) s.gamma2_e1 = *v;
        if (auto v = f.number("couplings.gamma1_e2")) s.gamma1_e2 = *v;
        if (auto v = f.number("couplings.gamma2_e2")) s.gamma2_e2 = *v;
    }

    const auto var = f.string("sweep.variable");
    if (!var) fail(ErrorKind::Validation, origin + ": sweep.variable is required (\"theta\", \"T\" or \"xi\")");
    if (*var == "theta") {
        s.sweep.variable = SweepVariable::Theta;
    } else if (*var == "T") {
        s.sweep.variable = SweepVariable::T;
    } else if (*var == "xi") {
        s.sweep.variable = SweepVariable::Xi;
    } else {
        f.bad("sweep.variable", "expected \"theta\", \"T\" or \"xi\"");
    }
    const auto mn = f.number("sweep.min");
    const auto mx = f.number("sweep.max");
    const auto pts = f.integer("sweep.points");
    if (!mn || !mx || !pts) fail(ErrorKind::Validation, origin + ": sweep.min, sweep.max and sweep.points are required");
    s.sweep.min = *mn;
    s.sweep.max = *mx;
    s.sweep.points = static_cast<std::size_t>(*pts);

    s.output_path = f.string("output.path");
    if (auto v = f.string("output.format")) s.format = parse_format(*v);

    s.validate();
    return s;
}

Scenario load_scenario(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) fail(ErrorKind::Io, "cannot read scenario file " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_scenario(buf.str(), path);
}

// ---- validation ----

namespace {

[[noreturn]] void invalid(const std::string& field, const std::string& what) {
    fail(ErrorKind::Validation, field + ": " + what);
}

void require_nonnegative(const std::optional<double>& v, const std::string& field) {
    if (!v) invalid(field, "is required");
    if (!std::isfinite(*v) || *v < 0.0) invalid(field, "must be a finite value >= 0");
}

void require_positive(double v, const std::string& field) {
    if (!std::isfinite(v) || v <= 0.0) invalid(field, "must be a finite value > 0");
}

struct Point {
    double sweep_value{};
    double xi{};
};

std::vector<double> sweep_values(const Scenario& s) {
    std::vector<double> grid = linear_grid(s.sweep.min, s.sweep.max, s.sweep.points);
    if (s.bath == BathKind::CHB && s.sweep.variable == SweepVariable::Theta) {
        // half-open exclusion window around resonance
        constexpr double window = 1e-6;
        grid.erase(std::remove_if(grid.begin(), grid.end(),
                                  [](double t) { return t >= kHalfPi - window && t < kHalfPi + window; }),
                   grid.end());
    }
    return grid;
}

std::vector<double> xi_series(const Scenario& s) {
    if (s.sweep.variable == SweepVariable::Xi) return {0.0};  // placeholder; xi comes from the sweep
    return s.system.xi;
}

SystemParams point_params(const Scenario& s, double sweep_value, double xi_fixed) {
    const double xi = s.sweep.variable == SweepVariable::Xi ? sweep_value : xi_fixed;
    if (s.system.omega_m) {
        const double theta = s.sweep.variable == SweepVariable::Theta ? sweep_value : *s.system.theta;
        return SystemParams::from_mixing_angle(*s.system.omega_m, xi, theta);
    }
    return SystemParams::create(*s.system.omega1, *s.system.omega2, xi);
}

std::string describe_point(const Scenario& s, double sweep_value, double xi) {
    std::string out = std::string(to_string(s.sweep.variable)) + " = " + format_number(sweep_value);
    if (s.sweep.variable != SweepVariable::Xi) out += ", xi = " + format_number(xi);
    return out;
}

}  // namespace

void Scenario::validate() const {
    const bool angle_form = system.omega_m.has_value() || system.theta.has_value();
    const bool bare_form = system.omega1.has_value() || system.omega2.has_value();
    if (angle_form == bare_form) {
        invalid("system", "give either omega_m and theta, or omega1 and omega2");
    }
    if (angle_form) {
        require_positive(system.omega_m.value_or(NAN), "system.omega_m");
        if (sweep.variable == SweepVariable::Theta) {
            if (system.theta) invalid("system.theta", "must be omitted when sweeping theta");
        } else {
            if (!system.theta) invalid("system.theta", "is required");
            if (!(*system.theta > 0.0 && *system.theta < 2.0 * kHalfPi)) invalid("system.theta", "must lie in (0, pi)");
        }
    } else {
        require_positive(system.omega1.value_or(NAN), "system.omega1");
        require_positive(system.omega2.value_or(NAN), "system.omega2");
        if (sweep.variable == SweepVariable::Theta) invalid("sweep.variable", "a theta sweep needs omega_m in [system]");
    }
    if (sweep.variable == SweepVariable::Xi) {
        if (!system.xi.empty()) invalid("system.xi", "must be omitted when sweeping xi");
    } else {
        if (system.xi.empty()) invalid("system.xi", "is required");
        for (double x : system.xi) {
            if (!std::isfinite(x) || x < 0.0) invalid("system.xi", "entries must be finite and >= 0");
        }
    }

    if (bath == BathKind::IHB) {
        if (sweep.variable == SweepVariable::T) {
            if (T1 || T2) invalid("temperatures", "T1 and T2 must be omitted when sweeping T (T1 = T2 = T)");
        } else {
            require_nonnegative(T1, "temperatures.T1");
            require_nonnegative(T2, "temperatures.T2");
        }
        require_positive(gamma1, "couplings.gamma1");
        require_positive(gamma2, "couplings.gamma2");
    } else {
        if (sweep.variable == SweepVariable::T) {
            if (T) invalid("temperatures.T", "must be omitted when sweeping T");
        } else {
            require_nonnegative(T, "temperatures.T");
        }
        require_positive(gamma1_e1, "couplings.gamma1_e1");
        require_positive(gamma2_e1, "couplings.gamma2_e1");
        require_positive(gamma1_e2, "couplings.gamma1_e2");
        require_positive(gamma2_e2, "couplings.gamma2_e2");
        if (!(tau33_0 >= 0.0 && tau33_0 <= 1.0)) invalid("bath.tau33_0", "must lie in [0, 1]");
    }

    if (sweep.points < 2) invalid("sweep.points", "must be >= 2");
    if (!std::isfinite(sweep.min) || !std::isfinite(sweep.max) || !(sweep.min < sweep.max)) {
        invalid("sweep", "min and max must be finite with min < max");
    }
    if (sweep.variable == SweepVariable::Theta && !(sweep.min > 0.0 && sweep.max < 2.0 * kHalfPi)) {
        invalid("sweep", "theta must stay inside (0, pi)");
    }
    if (sweep.variable != SweepVariable::Theta && sweep.min < 0.0) {
        invalid("sweep.min", std::string(to_string(sweep.variable)) + " must be >= 0");
    }

    const auto grid = sweep_values(*this);
    if (grid.empty()) invalid("sweep", "no points remain after excluding the resonance");
    for (double xi : xi_series(*this)) {
        for (double v : grid) {
            try {
                (void)point_params(*this, v, xi);
            } catch (const Error& e) {
                if (e.kind() != ErrorKind::Positivity && e.kind() != ErrorKind::Validation) throw;
                invalid("system", std::string("eps2 = omega_m - sqrt(dw^2/4 + xi^2) must be > 0 and "
                                              "frequencies positive; violated at ") +
                                      describe_point(*this, v, xi) + " (" + e.what() + ")");
            }
        }
    }
}

// ---- figures ----

const std::vector<std::string>& figure_ids() {
    static const std::vector<std::string> ids{"fig2", "fig3a", "fig3b", "fig3c", "fig3d", "fig4", "fig5"};
    return ids;
}

namespace {

constexpr std::size_t kFigureThetaPoints = 501;

Scenario theta_figure(const std::string& id, BathKind bath, double xi) {
    Scenario s;
    s.name = id;
    s.bath = bath;
    s.system.omega_m = 20.0;
    s.system.xi = {xi};
    const ThetaRange r = sweep_theta_range(20.0, xi);
    s.sweep = SweepSpec{SweepVariable::Theta, r.lo, r.hi, kFigureThetaPoints};
    return s;
}

}  // namespace

Scenario figure_scenario(const std::string& id) {
    if (id == "fig2") {
        Scenario s = theta_figure(id, BathKind::IHB, 10.0);
        s.T1 = 5.0;
        s.T2 = 10.0;
        return s;
    }
    if (id.size() == 5 && id.rfind("fig3", 0) == 0 && id[4] >= 'a' && id[4] <= 'd') {
        Scenario s = theta_figure(id, BathKind::IHB, 0.1);
        s.T1 = 10.0;
        s.T2 = 10.0 - static_cast<double>(id[4] - 'a');
        return s;
    }
    if (id == "fig4") {
        Scenario s;
        s.name = id;
        s.bath = BathKind::IHB;
        s.system.omega_m = 20.0;
        s.system.theta = kHalfPi;
        s.system.xi = {2.0, 4.0, 6.0, 8.0, 10.0};
        s.sweep = SweepSpec{SweepVariable::T, 0.05, 20.0, 400};
        return s;
    }
    if (id == "fig5") {
        Scenario s = theta_figure(id, BathKind::CHB, 0.1);
        s.T = 10.0;
        return s;
    }
    fail(ErrorKind::Validation, "unknown figure id \"" + id + "\" (expected fig2, fig3a..fig3d, fig4 or fig5)");
}

std::string render_scenario(const Scenario& s) {
    std::ostringstream os;
    auto q = [](const std::string& text) {
        std::string out = "\"";
        for (char c : text) {
            if (c == '"' || c == '\\') out.push_back('\\');
            out.push_back(c);
        }
        return out + "\"";
    };
    os << "name = " << q(s.name) << "\n";
    os << "seed = " << s.seed << "\n\n";
    os << "[bath]\nkind = \"" << (s.bath == BathKind::IHB ? "IHB" : "CHB") << "\"\n";
    if (s.bath == BathKind::CHB) os << "tau33_0 = " << format_number(s.tau33_0) << "\n";
    os << "\n[system]\n";
    if (s.system.omega_m) os << "omega_m = " << format_number(*s.system.omega_m) << "\n";
    if (s.system.theta) os << "theta = " << format_number(*s.system.theta) << "\n";
    if (s.system.omega1) os << "omega1 = " << format_number(*s.system.omega1) << "\n";
    if (s.system.omega2) os << "omega2 = " << format_number(*s.system.omega2) << "\n";
    if (!s.system.xi.empty()) {
        os << "xi = ";
        if (s.system.xi.size() == 1) {
            os << format_number(s.system.xi[0]);
        } else {
            os << "[";
            for (std::size_t i = 0; i < s.system.xi.size(); ++i) os << (i ? ", " : "") << format_number(s.system.xi[i]);
            os << "]";
        }
        os << "\n";
    }
    if (s.T1 || s.T2 || s.T) {
        os << "\n[temperatures]\n";
        if (s.T1) os << "T1 = " << format_number(*s.T1) << "\n";
        if (s.T2) os << "T2 = " << format_number(*s.T2) << "\n";
        if (s.T) os << "T = " << format_number(*s.T) << "\n";
    }
    os << "\n[couplings]\n";
    if (s.bath == BathKind::IHB) {
        os << "gamma1 = " << format_number(s.gamma1) << "\ngamma2 = " << format_number(s.gamma2) << "\n";
    } else {
        os << "gamma1_e1 = " << format_number(s.gamma1_e1) << "\ngamma2_e1 = " << format_number(s.gamma2_e1) << "\n"
           << "gamma1_e2 = " << format_number(s.gamma1_e2) << "\ngamma2_e2 = " << format_number(s.gamma2_e2) << "\n";
    }
    os << "\n[sweep]\nvariable = \"" << to_string(s.sweep.variable) << "\"\n"
       << "min = " << format_number(s.sweep.min) << "\nmax = " << format_number(s.sweep.max) << "\n"
       << "points = " << s.sweep.points << "\n";
    os << "\n[output]\n";
    if (s.output_path) os << "path = " << q(*s.output_path) << "\n";
    os << "format = \"" << to_string(s.format) << "\"\n";
    return os.str();
}

// ---- sweep ----

namespace {

void push_temperature(std::vector<Cell>& row, const Temperature& t) {
    if (t.tag == Temperature::Tag::Finite || t.tag == Temperature::Tag::Negative) {
        row.push_back(Cell::num(t.value));
    } else {
        row.push_back(Cell::missing());
    }
    row.push_back(Cell::str(to_string(t.tag)));
}

std::vector<std::string> columns_for(BathKind bath) {
    std::vector<std::string> c{"theta", "xi", "omega1", "omega2", "eps1", "eps2"};
    if (bath == BathKind::IHB) {
        c.insert(c.end(), {"T1", "T2"});
    } else {
        c.insert(c.end(), {"T", "regime"});
    }
    c.insert(c.end(), {"tau11", "tau22", "tau33", "tau44"});
    if (bath == BathKind::IHB) {
        c.insert(c.end(), {"T_eps1", "T_eps1_tag", "T_eps2", "T_eps2_tag"});
    } else {
        c.insert(c.end(), {"T12", "T12_tag", "T13", "T13_tag", "T34", "T34_tag"});
    }
    c.insert(c.end(), {"sigma_z1", "sigma_z2", "T_omega1", "T_omega1_tag", "T_omega2", "T_omega2_tag", "concurrence"});
    return c;
}

std::vector<Cell> evaluate_point(const Scenario& s, double sweep_value, double xi_fixed) {
    const SystemParams params = point_params(s, sweep_value, xi_fixed);
    const EigenBasis basis = build_eigenbasis(params);
    const bool sweep_t = s.sweep.variable == SweepVariable::T;

    std::vector<Cell> row{Cell::num(basis.theta()), Cell::num(params.xi()),   Cell::num(params.omega1()),
                          Cell::num(params.omega2()), Cell::num(basis.eps1), Cell::num(basis.eps2)};
    TemperatureReport r;
    if (s.bath == BathKind::IHB) {
        IhbBathConfig b{sweep_t ? sweep_value : *s.T1, sweep_t ? sweep_value : *s.T2, s.gamma1, s.gamma2};
        r = ihb_report(params, b);
        row.push_back(Cell::num(b.T1));
        row.push_back(Cell::num(b.T2));
    } else {
        ChbBathConfig b{sweep_t ? sweep_value : *s.T, s.gamma1_e1, s.gamma2_e1, s.gamma1_e2, s.gamma2_e2};
        r = chb_report(params, b, s.tau33_0);
        row.push_back(Cell::num(b.T));
        row.push_back(Cell::str(to_string(r.regime)));
    }
    for (double p : r.steady.pop) row.push_back(Cell::num(p));
    for (const auto& [name, t] : r.eigen) push_temperature(row, t);
    row.push_back(Cell::num(r.sigma_z.tls1));
    row.push_back(Cell::num(r.sigma_z.tls2));
    push_temperature(row, r.bare[0]);
    push_temperature(row, r.bare[1]);
    row.push_back(Cell::num(steady_concurrence(r.steady, basis.theta())));
    return row;
}

std::string join_numbers(const std::vector<double>& xs) {
    std::string out;
    for (std::size_t i = 0; i < xs.size(); ++i) out += (i ? " " : "") + format_number(xs[i]);
    return out;
}

std::vector<std::pair<std::string, std::string>> metadata_for(const Scenario& s) {
    std::vector<std::pair<std::string, std::string>> m;
#ifdef QTHERM_VERSION
    m.emplace_back("version", QTHERM_VERSION);
#endif
    m.emplace_back("name", s.name);
    m.emplace_back("bath", s.bath == BathKind::IHB ? "IHB" : "CHB");
    if (s.system.omega_m) m.emplace_back("omega_m", format_number(*s.system.omega_m));
    if (s.system.theta) m.emplace_back("theta", format_number(*s.system.theta));
    if (s.system.omega1) m.emplace_back("omega1", format_number(*s.system.omega1));
    if (s.system.omega2) m.emplace_back("omega2", format_number(*s.system.omega2));
    if (!s.system.xi.empty()) m.emplace_back("xi", join_numbers(s.system.xi));
    if (s.T1) m.emplace_back("T1", format_number(*s.T1));
    if (s.T2) m.emplace_back("T2", format_number(*s.T2));
    if (s.T) m.emplace_back("T", format_number(*s.T));
    if (s.bath == BathKind::IHB) {
        m.emplace_back("gamma1", format_number(s.gamma1));
        m.emplace_back("gamma2", format_number(s.gamma2));
    } else {
        m.emplace_back("gamma1_e1", format_number(s.gamma1_e1));
        m.emplace_back("gamma2_e1", format_number(s.gamma2_e1));
        m.emplace_back("gamma1_e2", format_number(s.gamma1_e2));
        m.emplace_back("gamma2_e2", format_number(s.gamma2_e2));
        m.emplace_back("tau33_0", format_number(s.tau33_0));
    }
    m.emplace_back("sweep", std::string(to_string(s.sweep.variable)) + " " + format_number(s.sweep.min) + " " +
                                format_number(s.sweep.max) + " " + std::to_string(s.sweep.points));
    if (s.bath == BathKind::CHB && s.sweep.variable == SweepVariable::Theta) {
        m.emplace_back("excluded", "theta in [pi/2 - 1e-6, pi/2 + 1e-6)");
    }
    m.emplace_back("seed", std::to_string(s.seed));
    return m;
}

}  // namespace

Table run_sweep(const Scenario& s, unsigned threads) {
    s.validate();
    const auto grid = sweep_values(s);
    const auto series = xi_series(s);

    struct Task {
        double value;
        double xi;
    };
    std::vector<Task> tasks;
    for (double xi : series) {
        for (double v : grid) tasks.push_back({v, xi});
    }

    std::vector<std::vector<Cell>> rows(tasks.size());
    std::vector<std::exception_ptr> errors(tasks.size());
    auto work = [&](std::size_t i) {
        try {
            rows[i] = evaluate_point(s, tasks[i].value, tasks[i].xi);
        } catch (const Error& e) {
            try {
                throw Error(e.kind(), std::string(e.what()) + " (at " + describe_point(s, tasks[i].value, tasks[i].xi) + ")");
            } catch (...) {
                errors[i] = std::current_exception();
            }
        } catch (...) {
            errors[i] = std::current_exception();
        }
    };
    parallel_for(tasks.size(), threads, work);
    for (const auto& e : errors) {
        if (e) std::rethrow_exception(e);
    }

    Table t;
    t.metadata = metadata_for(s);
    t.columns = columns_for(s.bath);
    t.rows = std::move(rows);
    return t;
}

void write_file(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) fail(ErrorKind::Io, "cannot open " + path + " for writing");
    out << text;
    out.flush();
    if (!out) fail(ErrorKind::Io, "failed while writing " + path);
}

std::string default_output_dir() {
    const char* env = std::getenv("QTHERM_OUTPUT_DIR");
    return env && *env ? std::string(env) : std::string(".");
}

}  // namespace qtherm
