#include <charconv>
#include <fstream>
#include <iomanip>
#include <sstream>

#include "hypervar/errors.hpp"
#include "hypervar/io.hpp"

namespace hypervar::io {

namespace {

std::string trim(const std::string& s) {
    const auto first = s.find_first_not_of(" \t\r\n");
    if (first == std::string::npos) return {};
    const auto last = s.find_last_not_of(" \t\r\n");
    return s.substr(first, last - first + 1);
}

std::ifstream openOrThrow(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InputError("cannot open " + path);
    return in;
}

}  // namespace

std::vector<std::string> splitCsvLine(const std::string& line) {
    std::vector<std::string> fields;
    std::string field;
    std::istringstream ss(line);
    while (std::getline(ss, field, ',')) fields.push_back(trim(field));
    if (!line.empty() && line.back() == ',') fields.emplace_back();
    return fields;
}

double parseNumber(const std::string& field, const std::string& file, std::size_t line) {
    double value = 0.0;
    const char* begin = field.data();
    const char* end = begin + field.size();
    if (begin != end && *begin == '+') ++begin;
    const auto [ptr, ec] = std::from_chars(begin, end, value);
    if (field.empty() || ec != std::errc() || ptr != end)
        throw ParseError(file, line, "not a number: '" + field + "'");
    return value;
}

Matrix readSquareCsv(std::istream& in, const std::string& name) {
    std::vector<std::vector<double>> rows;
    std::string line;
    std::size_t lineNo = 0;
    while (std::getline(in, line)) {
        ++lineNo;
        if (trim(line).empty()) continue;
        std::vector<double> row;
        for (const auto& f : splitCsvLine(line)) row.push_back(parseNumber(f, name, lineNo));
        if (!rows.empty() && row.size() != rows.front().size())
            throw ParseError(name, lineNo, "expected " + std::to_string(rows.front().size()) +
                                               " columns, found " + std::to_string(row.size()));
        rows.push_back(std::move(row));
    }
    if (rows.empty()) throw ParseError(name, lineNo, "empty matrix");
    const std::size_t n = rows.size();
    if (rows.front().size() != n)
        throw ParseError(name, lineNo, "matrix is " + std::to_string(n) + "x" +
                                           std::to_string(rows.front().size()) + ", not square");
    Matrix m(n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) m(i, j) = rows[i][j];
    return m;
}

Matrix readSquareCsv(const std::string& path) {
    auto in = openOrThrow(path);
    return readSquareCsv(in, path);
}

SymmetricMatrix readSymmetricCsv(const std::string& path, bool symmetrize) {
    const Matrix m = readSquareCsv(path);
    if (symmetrize) return SymmetricMatrix::symmetrized(m);
    try {
        return SymmetricMatrix::fromFull(m, 1e-12);
    } catch (const InputError& e) {
        throw InputError(path + ": " + e.what());
    }
}

std::vector<double> readVectorCsv(std::istream& in, const std::string& name) {
    std::vector<double> v;
    std::string line;
    std::size_t lineNo = 0;
    while (std::getline(in, line)) {
        ++lineNo;
        if (trim(line).empty()) continue;
        for (const auto& f : splitCsvLine(line)) v.push_back(parseNumber(f, name, lineNo));
    }
    if (v.empty()) throw ParseError(name, lineNo, "empty vector");
    return v;
}

std::vector<double> readVectorCsv(const std::string& path) {
    auto in = openOrThrow(path);
    return readVectorCsv(in, path);
}

void writeMatrixCsv(std::ostream& out, const Matrix& m) {
    out << std::setprecision(17);
    for (std::size_t i = 0; i < m.size(); ++i) {
        for (std::size_t j = 0; j < m.size(); ++j) out << (j ? "," : "") << m(i, j);
        out << '\n';
    }
}

void writeMatrixCsv(const std::string& path, const Matrix& m) {
    std::ofstream out(path);
    if (!out) throw InputError("cannot write " + path);
    writeMatrixCsv(out, m);
}

}  // namespace hypervar::io
