#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>

#include "ffst/errors.hpp"
#include "ffst/table.hpp"

using namespace ffst;

TEST_CASE("numbers round trip through text") {
    for (double x : {0.0, 1.0, -2.5, 0.1, 1.0 / 3.0, 6.02214076e23, -1e-300, 0.087315349789123456})
        CHECK(std::stod(format_number(x)) == x);
    CHECK(format_number(0.1) == "0.1");
    CHECK(format_number(std::nan("")) == "nan");
}

TEST_CASE("csv round trip") {
    Table t;
    t.add("t", {0.0, 0.5, 1.0});
    t.add("value", {1.0 / 3.0, -2.0, std::nan("")});
    CHECK(to_csv(t) == "t,value\n0,0.3333333333333333\n0.5,-2\n1,nan\n");
    CHECK_THROWS_AS(t.add("short", {1.0}), DomainError);
    auto path = (std::filesystem::temp_directory_path() / "ffst_table_test.csv").string();
    write_csv(path, t);
    auto back = read_csv(path);
    CHECK(back.columns == t.columns);
    CHECK(back.column("value")[0] == 1.0 / 3.0);
    CHECK(std::isnan(back.column("value")[2]));
    CHECK_THROWS_AS(back.column("missing"), DomainError);
    std::ofstream(path) << "a,b\n1,2\n3\n";
    CHECK_THROWS_AS(read_csv(path), DomainError);
    std::ofstream(path) << "a\nx1\n";
    CHECK_THROWS_AS(read_csv(path), DomainError);
    std::filesystem::remove(path);
}
