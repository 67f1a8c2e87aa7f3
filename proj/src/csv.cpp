#include "ksil/csv.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>
#include <vector>

namespace ksil {

namespace {

std::string trim(const std::string& s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string::npos) {
        return {};
    }
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

std::vector<std::string> split_row(const std::string& line) {
    std::vector<std::string> cells;
    std::string cell;
    std::istringstream stream(line);
    while (std::getline(stream, cell, ',')) {
        cells.push_back(trim(cell));
    }
    if (!line.empty() && line.back() == ',') {
        cells.emplace_back();
    }
    return cells;
}

bool parse_number(const std::string& cell, double& out) {
    if (cell.empty()) {
        return false;
    }
    const char* begin = cell.data();
    const char* end = cell.data() + cell.size();
    if (*begin == '+') {
        ++begin;
    }
    const auto [ptr, ec] = std::from_chars(begin, end, out);
    return ec == std::errc() && ptr == end;
}

std::string locate(const std::string& source, std::size_t line, std::size_t column) {
    return source + ": row " + std::to_string(line) + ", column " + std::to_string(column);
}

} // namespace

Dataset parse_csv(const std::string& text, bool has_header, const std::optional<std::string>& label_column, const std::string& source) {
    std::istringstream stream(text);
    std::string line;
    std::size_t line_no = 0;

    std::vector<std::string> header;
    if (has_header) {
        while (std::getline(stream, line)) {
            ++line_no;
            if (!trim(line).empty()) {
                header = split_row(line);
                break;
            }
        }
    }

    std::optional<std::size_t> label_index;
    if (label_column) {
        for (std::size_t c = 0; c < header.size(); ++c) {
            if (header[c] == *label_column) {
                label_index = c;
                break;
            }
        }
        if (!label_index) {
            std::size_t parsed = 0;
            const auto [ptr, ec] = std::from_chars(label_column->data(), label_column->data() + label_column->size(), parsed);
            if (ec != std::errc() || ptr != label_column->data() + label_column->size()) {
                throw Error(ErrorCode::ParseError, source + ": no label column named '" + *label_column + "'");
            }
            label_index = parsed;
        }
    }

    std::vector<std::vector<double>> rows;
    std::vector<std::string> raw_labels;
    std::optional<std::size_t> arity;
    while (std::getline(stream, line)) {
        ++line_no;
        if (trim(line).empty()) {
            continue;
        }
        const auto cells = split_row(line);
        if (!arity) {
            arity = cells.size();
            if (!header.empty() && header.size() != cells.size()) {
                throw Error(ErrorCode::MixedArity, locate(source, line_no, cells.size()) + ": header has " +
                                                       std::to_string(header.size()) + " columns, row has " + std::to_string(cells.size()));
            }
            if (label_index && *label_index >= cells.size()) {
                throw Error(ErrorCode::ParseError, source + ": label column " + std::to_string(*label_index) + " is out of range");
            }
        } else if (cells.size() != *arity) {
            throw Error(ErrorCode::MixedArity, locate(source, line_no, cells.size()) + ": expected " + std::to_string(*arity) +
                                                   " columns, found " + std::to_string(cells.size()));
        }

        std::vector<double> values;
        values.reserve(cells.size());
        for (std::size_t c = 0; c < cells.size(); ++c) {
            if (label_index && c == *label_index) {
                raw_labels.push_back(cells[c]);
                continue;
            }
            double v = 0;
            if (!parse_number(cells[c], v)) {
                throw Error(ErrorCode::ParseError, locate(source, line_no, c + 1) + ": '" + cells[c] + "' is not a number");
            }
            values.push_back(v);
        }
        rows.push_back(std::move(values));
    }

    std::optional<std::vector<Label>> labels;
    if (label_index) {
        std::vector<Label> out;
        bool numeric = true;
        for (const auto& text_label : raw_labels) {
            Label v = 0;
            const auto [ptr, ec] = std::from_chars(text_label.data(), text_label.data() + text_label.size(), v);
            if (ec != std::errc() || ptr != text_label.data() + text_label.size()) {
                numeric = false;
                break;
            }
            out.push_back(v);
        }
        if (!numeric) {
            out.clear();
            std::map<std::string, Label> ids;
            for (const auto& text_label : raw_labels) {
                const auto [it, inserted] = ids.try_emplace(text_label, static_cast<Label>(ids.size()));
                out.push_back(it->second);
            }
        }
        labels = std::move(out);
    }

    return validate_dataset(rows, std::move(labels), source);
}

Dataset load_csv(const std::string& path, bool has_header, const std::optional<std::string>& label_column) {
    std::ifstream in(path);
    if (!in) {
        throw Error(ErrorCode::IoError, "cannot open '" + path + "'");
    }
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return parse_csv(buffer.str(), has_header, label_column, path);
}

std::string format_double(double value) {
    char buf[64];
    for (int precision = 1; precision <= 17; ++precision) {
        std::snprintf(buf, sizeof(buf), "%.*g", precision, value);
        double back = 0;
        std::from_chars(buf, buf + std::char_traits<char>::length(buf), back);
        if (back == value) {
            break;
        }
    }
    return buf;
}

void write_csv(std::ostream& out, const Dataset& data) {
    for (std::size_t j = 0; j < data.dim(); ++j) {
        out << (j ? "," : "") << 'x' << j;
    }
    if (data.labels) {
        out << ",label";
    }
    out << '\n';
    char buf[64];
    for (std::size_t i = 0; i < data.size(); ++i) {
        for (std::size_t j = 0; j < data.dim(); ++j) {
            std::snprintf(buf, sizeof(buf), "%.17g", data.points(i, j));
            out << (j ? "," : "") << buf;
        }
        if (data.labels) {
            out << ',' << (*data.labels)[i];
        }
        out << '\n';
    }
}

void save_csv(const std::string& path, const Dataset& data) {
    std::ofstream out(path);
    if (!out) {
        throw Error(ErrorCode::IoError, "cannot write '" + path + "'");
    }
    write_csv(out, data);
}

} // namespace ksil
