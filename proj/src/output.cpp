#include "qtherm/scenario.hpp"

#include <json.hpp>

#include <sstream>

namespace qtherm {

std::string to_csv(const Table& t) {
    std::ostringstream os;
    for (const auto& [key, value] : t.metadata) os << "# " << key << " = " << value << "\n";
    for (std::size_t i = 0; i < t.columns.size(); ++i) os << (i ? "," : "") << t.columns[i];
    os << "\n";
    for (const auto& row : t.rows) {
        for (std::size_t i = 0; i < row.size(); ++i) {
            if (i) os << ',';
            const Cell& c = row[i];
            if (c.kind == Cell::Kind::Number) {
                os << format_number(c.number);
            } else if (c.kind == Cell::Kind::Text) {
                os << c.text;
            }
        }
        os << "\n";
    }
    return os.str();
}

std::string to_json(const Table& t) {
    nlohmann::ordered_json doc;
    doc["metadata"] = nlohmann::ordered_json::object();
    for (const auto& [key, value] : t.metadata) doc["metadata"][key] = value;
    doc["columns"] = t.columns;
    doc["rows"] = nlohmann::ordered_json::array();
    for (const auto& row : t.rows) {
        nlohmann::ordered_json r = nlohmann::ordered_json::array();
        for (const Cell& c : row) {
            if (c.kind == Cell::Kind::Number) {
                r.push_back(c.number);
            } else if (c.kind == Cell::Kind::Text) {
                r.push_back(c.text);
            } else {
                r.push_back(nullptr);
            }
        }
        doc["rows"].push_back(std::move(r));
    }
    return doc.dump(1) + "\n";
}

std::string render(const Table& t, OutputFormat f) {
    return f == OutputFormat::Csv ? to_csv(t) : to_json(t);
}

}  // namespace qtherm
