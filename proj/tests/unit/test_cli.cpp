// Copyright 2026 The lqs Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <doctest.h>

#include <json.hpp>

#include <cstdio>
#include <fstream>
#include <sstream>

#include "lqs/cli/cli.hpp"

namespace {

struct Result {
    int code;
    std::string out;
    std::string err;
};

Result lqs_main(std::vector<std::string> args) {
    args.insert(args.begin(), "lqs");
    std::vector<const char*> argv;
    for (const auto& a : args) argv.push_back(a.c_str());
    std::ostringstream out;
    std::ostringstream err;
    int code = lqs::cli::main(static_cast<int>(argv.size()), argv.data(), out, err);
    return {code, out.str(), err.str()};
}

std::string data(const char* name) { return std::string(LQS_TEST_DATA) + "/" + name; }

std::string temp_file(const std::string& name, const std::string& text) {
    std::string path = std::string(TEST_TMP_DIR) + "/" + name;
    std::ofstream(path) << text;
    return path;
}

std::vector<nlohmann::json> records(const std::string& out) {
    std::vector<nlohmann::json> rs;
    std::istringstream in(out);
    std::string line;
    while (std::getline(in, line))
        if (!line.empty()) rs.push_back(nlohmann::json::parse(line));
    return rs;
}

}  // namespace

TEST_CASE("check rejects the escaping qubit program") {
    auto r = lqs_main({"check", data("escaping.qs")});
    CHECK(r.code == 1);
    CHECK(r.err.find("EscapingQubit") != std::string::npos);
    CHECK(r.err.rfind("error:", 0) == 0);

    auto j = lqs_main({"check", data("cloning.qs"), "--format", "json"});
    CHECK(j.code == 1);
    auto rs = records(j.out);
    REQUIRE(rs.size() == 1);
    CHECK(rs[0]["kind"] == "AliasedQubits");
    for (const char* field : {"kind", "file", "line", "col", "message"}) CHECK(rs[0].contains(field));
}

TEST_CASE("check accepts teleport in both forms") {
    CHECK(lqs_main({"check", data("teleport.qs")}).code == 0);
    CHECK(lqs_main({"check", data("teleport.lqs")}).code == 0);
}

TEST_CASE("run on measure of a fresh qubit") {
    auto f = temp_file("fresh.lqs", "new a in meas a\n");
    for (const char* seed : {"0", "1", "12345"}) {
        auto r = lqs_main({"run", f, "--shots", "100", "--seed", seed, "--format", "json"});
        REQUIRE(r.code == 0);
        auto rs = records(r.out);
        REQUIRE(rs.size() == 1);
        CHECK(rs[0]["outcome"] == "ff");
        CHECK(rs[0]["count"] == 100);
        CHECK(rs[0]["probability"] == 1.0);
    }
}

TEST_CASE("run is reproducible") {
    auto f = temp_file("plus.lqs", "-- context: q r\n{H(q); D(I2, X)(q; r); x <- meas q; y <- meas r; ret <x, y>}\n");
    auto a = lqs_main({"run", f, "--shots", "500", "--format", "json"});
    auto b = lqs_main({"run", f, "--shots", "500", "--format", "json"});
    CHECK(a.code == 0);
    CHECK(a.out == b.out);
    for (const auto& rec : records(a.out)) {
        std::string o = rec["outcome"];
        CHECK((o == "<ff, ff>" || o == "<tt, tt>"));
    }
    auto sv = lqs_main({"run", f, "--shots", "500", "--mode", "statevector", "--format", "json"});
    CHECK(sv.code == 0);
}

TEST_CASE("equiv") {
    auto a = temp_file("hh.lqs", "-- context: q\n{H(q); H(q); meas q}\n");
    auto b = temp_file("m.lqs", "-- context: q\nmeas q\n");
    auto c = temp_file("h.lqs", "-- context: q\n{H(q); meas q}\n");
    auto d = temp_file("other.lqs", "-- context: r\nmeas r\n");
    auto yes = lqs_main({"equiv", a, b, "--format", "json"});
    CHECK(yes.code == 0);
    auto rs = records(yes.out);
    REQUIRE(rs.size() == 1);
    CHECK(rs[0]["equivalent"] == true);
    CHECK(rs[0]["max_deviation"].get<double>() < 1e-9);
    CHECK(lqs_main({"equiv", a, c}).code == 1);
    CHECK(lqs_main({"equiv", a, d}).code == 2);
    CHECK(lqs_main({"equiv", a}).code == 2);
}

TEST_CASE("axioms") {
    auto r = lqs_main({"axioms", "--trials", "10", "--format", "json"});
    CHECK(r.code == 0);
    auto rs = records(r.out);
    REQUIRE(rs.size() == 11);
    std::string letters;
    for (const auto& rec : rs) {
        letters += rec["axiom"].get<std::string>();
        CHECK(rec["passed"] == rec["trials"]);
        CHECK(rec["max_deviation"].get<double>() <= 1e-9);
    }
    CHECK(letters == "ABDEFGHIJKL");
    CHECK(lqs_main({"axioms", "--trials", "10", "--format", "json"}).out == r.out);
    CHECK(lqs_main({"axioms", "B", "--trials", "3"}).code == 0);
    CHECK(lqs_main({"axioms", "Q"}).code == 2);
}

TEST_CASE("simplify removes an identity gate") {
    auto f = temp_file("ident.lqs", "-- context: q\n{H(q); H(q); meas q}\n");
    auto r = lqs_main({"simplify", f});
    CHECK(r.code == 0);
    CHECK(r.out.find("H(") == std::string::npos);
    auto g = temp_file("simplified.lqs", r.out);
    CHECK(lqs_main({"equiv", f, g}).code == 0);
}

TEST_CASE("elab prints a reparsable program") {
    auto r = lqs_main({"elab", data("teleport.qs")});
    CHECK(r.code == 0);
    CHECK(r.out.rfind("-- signature: a b m\n", 0) == 0);
    auto f = temp_file("elab.lqs", r.out);
    CHECK(lqs_main({"check", f}).code == 0);
    auto j = lqs_main({"elab", data("teleport.qs"), "--format", "json"});
    auto rs = records(j.out);
    REQUIRE(rs.size() == 1);
    CHECK(rs[0]["instances"].size() == 4);
}

TEST_CASE("usage errors") {
    CHECK(lqs_main({}).code == 2);
    CHECK(lqs_main({"run"}).code == 2);
    CHECK(lqs_main({"run", "/nonexistent/file.lqs"}).code == 2);
    CHECK(lqs_main({"run", data("teleport.lqs"), "--mode", "qpu"}).code == 2);
    CHECK(lqs_main({"--help"}).code == 0);
}
