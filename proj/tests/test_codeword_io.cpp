#include "peakbound/codeword_io.hpp"

#include <doctest.h>

#include <sstream>

using namespace peakbound;

TEST_CASE("real codeword files round-trip with zero imaginary parts") {
    std::vector<ComplexCodeword> rows{
        {{1.0, 0.0}, {-2.5, 0.0}, {0.25, 0.0}},
        {{0.0, 0.0}, {3.0, 0.0}, {-1.0, 0.0}},
    };
    std::ostringstream out;
    write_codeword_file(out, rows, /*complex_entries=*/false);
    std::istringstream in(out.str());
    CodewordFile f = read_codeword_file(in);
    CHECK_FALSE(f.complex_entries);
    REQUIRE(f.rows.size() == 2);
    for (size_t r = 0; r < rows.size(); ++r)
        for (size_t c = 0; c < rows[r].size(); ++c) {
            CHECK(f.rows[r][c].real() == doctest::Approx(rows[r][c].real()).epsilon(1e-15));
            CHECK(f.rows[r][c].imag() == 0.0);
        }
}

TEST_CASE("complex codeword files round-trip") {
    std::vector<ComplexCodeword> rows{{{1.0, -1.0}, {0.5, 2.0}}, {{-3.0, 0.0}, {0.0, 4.0}}};
    std::ostringstream out;
    write_codeword_file(out, rows, /*complex_entries=*/true);
    std::istringstream in(out.str());
    CodewordFile f = read_codeword_file(in);
    CHECK(f.complex_entries);
    REQUIRE(f.rows.size() == 2);
    for (size_t r = 0; r < rows.size(); ++r)
        for (size_t c = 0; c < rows[r].size(); ++c) {
            CHECK(f.rows[r][c].real() == doctest::Approx(rows[r][c].real()).epsilon(1e-15));
            CHECK(f.rows[r][c].imag() == doctest::Approx(rows[r][c].imag()).epsilon(1e-15));
        }
}

TEST_CASE("mixed re:im tokens parse without a header") {
    std::istringstream in("1:0,0:-1\n0.5:0.5,2:0\n");
    CodewordFile f = read_codeword_file(in);
    REQUIRE(f.rows.size() == 2);
    CHECK(f.rows[0][1].imag() == doctest::Approx(-1.0).epsilon(1e-15));
    CHECK(f.rows[1][0].real() == doctest::Approx(0.5).epsilon(1e-15));
}

TEST_CASE("parse errors carry the offending line number") {
    std::istringstream bad("1,2,3\n1,zebra,3\n");
    try {
        read_codeword_file(bad);
        FAIL("expected ParseError");
    } catch (const ParseError& e) {
        CHECK(e.line == 2);
        CHECK(std::string(e.what()).find("line 2") != std::string::npos);
    }
}

TEST_CASE("rows violating the declared header length are rejected") {
    std::istringstream bad("# n=3 complex=false\n1,2,3\n1,2\n");
    try {
        read_codeword_file(bad);
        FAIL("expected ParseError");
    } catch (const ParseError& e) {
        CHECK(e.line == 3);
    }
}

TEST_CASE("empty input is an error") {
    std::istringstream empty("");
    CHECK_THROWS_AS(read_codeword_file(empty), ParseError);
}

TEST_CASE("missing file reports its path") {
    CHECK_THROWS(read_codeword_file("/nonexistent/peakbound-test.csv"));
}
