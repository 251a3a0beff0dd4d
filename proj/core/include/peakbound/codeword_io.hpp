#pragma once

// Codeword file format: CSV, one codeword per row, complex entries as
// `re:im` tokens, with an optional leading header row `# n=<n> complex=<bool>`.

#include "peakbound/ofdm_pmepr.hpp"

#include <iosfwd>
#include <string>
#include <vector>

namespace peakbound {

struct CodewordFile {
    bool complex_entries = false;
    std::vector<ComplexCodeword> rows; // real files load with zero imaginary parts
};

struct ParseError : std::runtime_error {
    long line;
    ParseError(long line_, const std::string& what)
        : std::runtime_error("line " + std::to_string(line_) + ": " + what), line(line_) {}
};

CodewordFile read_codeword_file(std::istream& in);
CodewordFile read_codeword_file(const std::string& path);

void write_codeword_file(std::ostream& out, const std::vector<ComplexCodeword>& rows,
                         bool complex_entries);
void write_codeword_file(const std::string& path, const std::vector<ComplexCodeword>& rows,
                         bool complex_entries);

} // namespace peakbound
