#include "doctest.h"

#include "hypbif/io.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

using namespace hypbif;

namespace {

std::string slurp(const std::string& path)
{
    std::ifstream is(path, std::ios::binary);
    std::ostringstream os;
    os << is.rdbuf();
    return os.str();
}

}  // namespace

TEST_CASE("config hash")
{
    const json a = {{"N", 3}, {"p", 3.0}};
    const json b = {{"N", 3}, {"p", 3.0}};
    const json c = {{"N", 3}, {"p", 2.0}};
    CHECK(config_hash(a) == config_hash(b));
    CHECK(config_hash(a) != config_hash(c));
    CHECK(config_hash(a).size() == 16);
    CHECK(provenance(a).at("version") == kVersion);
}

TEST_CASE("numerics round trip")
{
    NumericsConfig c;
    c.max_step = 0.002;
    c.shoot_tol = 1e-7;
    NumericsConfig d;
    update_from_json(to_json(c), d);
    CHECK(d.max_step == c.max_step);
    CHECK(d.shoot_tol == c.shoot_tol);
    CHECK(d.grid_points == c.grid_points);

    ModelParams p;
    update_from_json(json{{"N", 2}}, p);
    CHECK(p.N == 2);
    CHECK(p.p == 3.0);
}

TEST_CASE("csv output")
{
    const auto dir = std::filesystem::temp_directory_path() / "hypbif_io_test";
    std::filesystem::create_directories(dir);
    const std::string path = (dir / "t.csv").string();
    const json cfg = {{"N", 3}};
    write_csv(path, cfg, {"r", "a,b"}, {{1.0, 0.1}, {2.0, -3e-20}});
    const std::string text = slurp(path);
    CHECK(text.rfind("# {\"artifact\":\"hypbif\"", 0) == 0);
    CHECK(text.find("r,\"a,b\"\r\n") != std::string::npos);
    CHECK(text.find("1,0.10000000000000001\r\n") != std::string::npos);
    const auto last = text.rfind("2,");
    REQUIRE(last != std::string::npos);
    CHECK(std::stod(text.substr(last + 2)) == -3e-20);

    write_csv(path, cfg, {"r", "a,b"}, {{1.0, 0.1}, {2.0, -3e-20}});
    CHECK(slurp(path) == text);
    std::filesystem::remove_all(dir);
}

TEST_CASE("verdict record")
{
    const json v = verdict("energy_nonincreasing", {{"N", 3}}, true, {{"max_increase", 0.0}});
    CHECK(v.at("lemma") == "energy_nonincreasing");
    CHECK(v.at("verdict") == "holds");
    CHECK(verdict("x", {}, false, {}).at("verdict") == "violated");
}
