#include <doctest.h>

#include <filesystem>

#include "helpers.hpp"
#include "ssikit/error.hpp"
#include "ssikit/util.hpp"

using namespace ssikit;
using testing::TempDir;

TEST_CASE("fmt_num is stable and compact") {
    CHECK(fmt_num(0.35) == "0.35");
    CHECK(fmt_num(0.0) == "0");
    CHECK(fmt_num(-0.0) == "0");
    CHECK(fmt_num(1.0) == "1");
    CHECK(fmt_num(0.4390243902439024) == "0.439024");
    CHECK(fmt_num(-0.67) == "-0.67");
}

TEST_CASE("split keeps empty fields") {
    auto parts = split("a,,c", ',');
    REQUIRE(parts.size() == 3);
    CHECK(parts[1].empty());
    CHECK(split("lone", ',').size() == 1);
}

TEST_CASE("kv parsing skips comments and sections") {
    auto kv = parse_kv("# comment\n[section]\nkey = value \nn=3\n");
    CHECK(kv.at("key") == "value");
    CHECK(kv.at("n") == "3");
    CHECK_THROWS_AS(parse_kv("not a pair\n"), ValidationError);
}

TEST_CASE("atomic_write leaves no temp file and round-trips") {
    TempDir dir("util");
    auto p = dir.file("out.txt");
    atomic_write(p, "hello\n");
    CHECK(read_file(p) == "hello\n");
    CHECK_FALSE(std::filesystem::exists(dir.file("out.txt.tmp")));

    atomic_write(p, "replaced\n");
    CHECK(read_file(p) == "replaced\n");
}

TEST_CASE("checksum is content-determined") {
    TempDir dir("sum");
    atomic_write(dir.file("a"), "payload");
    atomic_write(dir.file("b"), "payload");
    atomic_write(dir.file("c"), "payload!");
    CHECK(file_checksum(dir.file("a")) == file_checksum(dir.file("b")));
    CHECK(file_checksum(dir.file("a")) != file_checksum(dir.file("c")));
    CHECK(file_checksum(dir.file("a")).rfind("fnv1a:", 0) == 0);
}

TEST_CASE("read_file reports missing input as I/O error") {
    CHECK_THROWS_AS(read_file("/nonexistent/path/x"), IoError);
}
