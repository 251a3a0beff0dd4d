#include "peakbound/codeword_io.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

namespace peakbound {

namespace {

double parse_double(const std::string& tok, long line) {
    try {
        size_t pos = 0;
        double v = std::stod(tok, &pos);
        while (pos < tok.size() && std::isspace(static_cast<unsigned char>(tok[pos]))) ++pos;
        if (pos != tok.size()) throw std::invalid_argument("trailing junk");
        return v;
    } catch (const std::exception&) {
        throw ParseError(line, "cannot parse number '" + tok + "'");
    }
}

} // namespace

CodewordFile read_codeword_file(std::istream& in) {
    CodewordFile file;
    std::string lineStr;
    long lineNo = 0;
    long expected_n = -1;
    bool header_seen = false;
    while (std::getline(in, lineStr)) {
        ++lineNo;
        // strip whitespace
        size_t a = lineStr.find_first_not_of(" \t\r");
        if (a == std::string::npos) continue;
        size_t b = lineStr.find_last_not_of(" \t\r");
        std::string s = lineStr.substr(a, b - a + 1);
        if (s[0] == '#') {
            if (!header_seen) {
                header_seen = true;
                std::istringstream hs(s.substr(1));
                std::string kv;
                while (hs >> kv) {
                    auto eq = kv.find('=');
                    if (eq == std::string::npos) continue;
                    std::string key = kv.substr(0, eq), val = kv.substr(eq + 1);
                    if (key == "n") expected_n = std::stol(val);
                    if (key == "complex") file.complex_entries = (val == "true" || val == "1");
                }
            }
            continue;
        }
        ComplexCodeword row;
        std::istringstream ls(s);
        std::string tok;
        while (std::getline(ls, tok, ',')) {
            size_t c = tok.find(':');
            if (c != std::string::npos) {
                double re = parse_double(tok.substr(0, c), lineNo);
                double im = parse_double(tok.substr(c + 1), lineNo);
                row.emplace_back(re, im);
                file.complex_entries = true;
            } else {
                row.emplace_back(parse_double(tok, lineNo), 0.0);
            }
        }
        if (row.empty()) throw ParseError(lineNo, "empty codeword row");
        if (expected_n >= 0 && static_cast<long>(row.size()) != expected_n)
            throw ParseError(lineNo, "row length " + std::to_string(row.size()) +
                                         " does not match header n=" + std::to_string(expected_n));
        file.rows.push_back(std::move(row));
    }
    if (file.rows.empty()) throw ParseError(lineNo, "no codewords in file");
    return file;
}

CodewordFile read_codeword_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open codeword file: " + path);
    return read_codeword_file(in);
}

void write_codeword_file(std::ostream& out, const std::vector<ComplexCodeword>& rows,
                         bool complex_entries) {
    if (!rows.empty())
        out << "# n=" << rows.front().size() << " complex=" << (complex_entries ? "true" : "false")
            << "\n";
    out.precision(17);
    for (const auto& row : rows) {
        for (size_t k = 0; k < row.size(); ++k) {
            if (k) out << ",";
            if (complex_entries)
                out << row[k].real() << ":" << row[k].imag();
            else
                out << row[k].real();
        }
        out << "\n";
    }
}

void write_codeword_file(const std::string& path, const std::vector<ComplexCodeword>& rows,
                         bool complex_entries) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open output file: " + path);
    write_codeword_file(out, rows, complex_entries);
}

} // namespace peakbound
