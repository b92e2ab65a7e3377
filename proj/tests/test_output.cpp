#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <string>

#include "henonlab/csv.hpp"
#include "henonlab/render.hpp"

using namespace henonlab;

namespace {

namespace fs = std::filesystem;

fs::path fresh_dir(const std::string& name) {
    const fs::path dir = fs::temp_directory_path() / "henonlab-tests" / name;
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

std::string slurp(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    REQUIRE(in.good());
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

std::size_t count_occurrences(const std::string& text, const std::string& needle) {
    std::size_t n = 0;
    for (std::size_t pos = text.find(needle); pos != std::string::npos;
         pos = text.find(needle, pos + needle.size()))
        ++n;
    return n;
}

} // namespace

TEST_CASE("seventeen-digit formatting round-trips doubles exactly") {
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> mantissa(-1.0, 1.0);
    std::uniform_int_distribution<int> exponent(-300, 300);
    for (int i = 0; i < 2000; ++i) {
        const double v = std::ldexp(mantissa(rng), exponent(rng));
        REQUIRE(std::strtod(format_g17(v).c_str(), nullptr) == v);
    }
    REQUIRE(std::strtod(format_g17(0.0).c_str(), nullptr) == 0.0);
    REQUIRE(format_g17(1.0 / 3.0) == "0.33333333333333331");
}

TEST_CASE("tables round-trip through CSV bit for bit") {
    const fs::path dir = fresh_dir("csv");
    std::mt19937_64 rng(13);
    std::uniform_real_distribution<double> value(-1e6, 1e6);
    Table table{{"a", "b", "c"}, {}};
    for (int i = 0; i < 100; ++i) table.rows.push_back({value(rng), value(rng), value(rng)});

    write_table(dir / "table.csv", table, {"meta line one", "k = v"});
    const Table parsed = read_table(dir / "table.csv");
    REQUIRE(parsed.columns == table.columns);
    REQUIRE(parsed.rows == table.rows);
    REQUIRE_FALSE(fs::exists(dir / "table.csv.tmp"));

    SECTION("column lookup") {
        REQUIRE(column_index(parsed, "b") == 1);
        REQUIRE_THROWS_AS(column_index(parsed, "nope"), MissingColumn);
    }
}

TEST_CASE("CSV reader rejects malformed input") {
    const fs::path dir = fresh_dir("csv_bad");
    REQUIRE_THROWS_AS(read_table(dir / "absent.csv"), MalformedCsv);

    auto write_text = [&](const std::string& name, const std::string& text) {
        std::ofstream out(dir / name);
        out << text;
        return dir / name;
    };
    REQUIRE_THROWS_AS(read_table(write_text("short_row.csv", "a,b\n1\n")), MalformedCsv);
    REQUIRE_THROWS_AS(read_table(write_text("bad_field.csv", "a,b\n1,zebra\n")), MalformedCsv);
    REQUIRE_THROWS_AS(read_table(write_text("empty.csv", "")), MalformedCsv);
    REQUIRE_NOTHROW(read_table(write_text("comments.csv", "# note\na,b\n1,2\n")));
}

TEST_CASE("scatter rendering") {
    const fs::path dir = fresh_dir("render");

    SECTION("one row produces one mark with labeled axes") {
        Table table{{"x2", "p2"}, {{0.25, -0.1}}};
        write_table(dir / "one.csv", table);
        render_scatter(dir / "one.csv", "x2", "p2", dir / "one.svg", "single point");
        const std::string svg = slurp(dir / "one.svg");
        REQUIRE(count_occurrences(svg, "<circle") == 1);
        REQUIRE(svg.find(">x2</text>") != std::string::npos);
        REQUIRE(svg.find(">p2</text>") != std::string::npos);
        REQUIRE(svg.find("single point") != std::string::npos);
        REQUIRE(svg.find("</svg>") != std::string::npos);
    }
    SECTION("many rows produce one mark each") {
        Table table{{"t", "v"}, {}};
        for (int i = 0; i < 64; ++i)
            table.rows.push_back({static_cast<double>(i), std::sin(0.3 * i)});
        write_table(dir / "series.csv", table);
        render_scatter(dir / "series.csv", "t", "v", dir / "series.svg");
        REQUIRE(count_occurrences(slurp(dir / "series.svg"), "<circle") == 64);
    }
    SECTION("missing columns and empty data are reported, with no partial file") {
        Table table{{"a", "b"}, {}};
        write_table(dir / "empty.csv", table);
        REQUIRE_THROWS_AS(render_scatter(dir / "empty.csv", "a", "nope", dir / "out1.svg"),
                          MissingColumn);
        REQUIRE_THROWS_AS(render_scatter(dir / "empty.csv", "a", "b", dir / "out2.svg"),
                          EmptyData);
        REQUIRE_FALSE(fs::exists(dir / "out1.svg"));
        REQUIRE_FALSE(fs::exists(dir / "out2.svg"));
        REQUIRE_FALSE(fs::exists(dir / "out1.svg.tmp"));
        REQUIRE_FALSE(fs::exists(dir / "out2.svg.tmp"));
    }
}
