#include <doctest.h>

#include "cache.hpp"
#include "commands.hpp"

#include <json.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

using namespace nilhom::cli;
namespace fs = std::filesystem;

namespace {

struct Outcome {
    int code;
    std::string out;
    std::string err;
};

Outcome invoke(std::vector<std::string> args) {
    std::ostringstream out, err;
    int code = run(args, out, err);
    return {code, out.str(), err.str()};
}

fs::path fresh_dir(const std::string& tag) {
    auto dir = fs::temp_directory_path() / ("nilhom-cli-test-" + tag + "-" + std::to_string(::getpid()));
    fs::remove_all(dir);
    return dir;
}

nlohmann::json first_record(const std::string& out) {
    return nlohmann::json::parse(out.substr(0, out.find('\n')));
}

}  // namespace

TEST_CASE("spec examples") {
    auto w = invoke({"witt", "--rank", "2", "--max-degree", "5", "--no-cache"});
    CHECK(w.code == 0);
    CHECK(first_record(w.out)["result"]["dims"] == nlohmann::json({2, 1, 2, 3, 6}));

    auto b = invoke({"betti", "group", "--rank", "2", "--class", "2", "--no-cache"});
    CHECK(b.code == 0);
    CHECK(first_record(b.out)["result"]["betti"] == nlohmann::json({1, 2, 2, 1}));

    auto c = invoke({"coinv", "--expr", "wedge(2,std)", "--rank", "2", "--no-cache"});
    CHECK(c.code == 0);
    auto rec = first_record(c.out);
    CHECK(rec["result"]["coinvariants"] == 0);
    CHECK(rec["params"]["expr"] == "wedge(2, std)");
}

TEST_CASE("record schema") {
    auto r = invoke({"lcs-ranks", "-r", "2", "-c", "3", "--no-cache"});
    auto rec = first_record(r.out);
    for (const char* key : {"command", "params", "result", "elapsed_ms", "schema_version"}) CHECK(rec.contains(key));
    CHECK(rec["elapsed_ms"].is_null());
    CHECK(rec["schema_version"] == kSchemaVersion);
    auto timed = first_record(invoke({"lcs-ranks", "-r", "2", "-c", "3", "--no-cache", "--timing"}).out);
    CHECK(timed["elapsed_ms"].is_number());
}

TEST_CASE("bch output") {
    auto r = invoke({"bch", "-r", "2", "-c", "2", "--no-cache"});
    auto product = first_record(r.out)["result"]["product"];
    CHECK(product == nlohmann::json::parse(
                         R"([{"word":"1","coeff":"1"},{"word":"2","coeff":"1"},{"word":"12","coeff":"1/2"}])"));
    auto custom = invoke({"bch", "-r", "2", "-c", "3", "--x", "1:2,12:1/3", "--y", "2:-1", "--no-cache"});
    CHECK(custom.code == 0);
    CHECK(invoke({"bch", "-r", "2", "-c", "2", "--x", "21", "--no-cache"}).code == 2);
    CHECK(invoke({"bch", "-r", "2", "-c", "2", "--x", "1:1/0", "--no-cache"}).code == 2);
}

TEST_CASE("usage errors exit with 2") {
    CHECK(invoke({}).code == 2);
    CHECK(invoke({"nonsense"}).code == 2);
    CHECK(invoke({"witt", "--rank", "2"}).code == 2);
    CHECK(invoke({"witt", "--rank", "x", "--max-degree", "2"}).code == 2);
    CHECK(invoke({"hall", "-r", "0", "-c", "2", "--no-cache"}).code == 2);
    CHECK(invoke({"coinv", "--expr", "wedge(2,", "-r", "2", "--no-cache"}).code == 2);
    CHECK(invoke({"coinv", "--expr", "std", "-r", "1", "--no-cache"}).code == 2);
    CHECK(invoke({"witt", "-r", "2", "--max-degree", "2", "--format", "xml"}).code == 2);
    auto help = invoke({"--help"});
    CHECK(help.code == 0);
    CHECK(help.out.find("selftest") != std::string::npos);
}

TEST_CASE("csv output has a fixed header") {
    auto r = invoke({"witt", "-r", "3", "--max-degree", "3", "--format", "csv", "--no-cache"});
    CHECK(r.out == "degree,dimension\n1,3\n2,3\n3,8\n");
    auto b = invoke({"betti", "group", "-r", "2", "-c", "2", "--format", "csv", "--no-cache"});
    CHECK(b.out == "degree,betti\n0,1\n1,2\n2,2\n3,1\n");
}

TEST_CASE("cache round trip and corruption") {
    auto dir = fresh_dir("cache");
    std::vector<std::string> args{"hall", "-r", "2", "-c", "4", "--cache-dir", dir.string()};
    auto cold = invoke(args);
    REQUIRE(cold.code == 0);
    REQUIRE(fs::exists(dir));
    std::vector<fs::path> entries(fs::directory_iterator(dir), fs::directory_iterator{});
    REQUIRE(entries.size() == 1);

    auto warm = invoke(args);
    CHECK(warm.out == cold.out);
    CHECK(warm.err.empty());

    // flip one payload byte: the checksum rejects the entry and the result is recomputed
    std::string bytes;
    {
        std::ifstream in(entries[0], std::ios::binary);
        bytes.assign(std::istreambuf_iterator<char>(in), {});
    }
    bytes[bytes.size() / 2] ^= 0x20;
    {
        std::ofstream out(entries[0], std::ios::binary | std::ios::trunc);
        out << bytes;
    }
    auto healed = invoke(args);
    CHECK(healed.out == cold.out);
    CHECK(healed.err.find("discarding") != std::string::npos);
    CHECK(invoke(args).err.empty());

    // truncated file
    fs::resize_file(entries[0], 5);
    CHECK(invoke(args).out == cold.out);
    fs::remove_all(dir);
}

TEST_CASE("entry encoding") {
    auto e = encode_entry("key", "payload");
    CHECK(decode_entry(e, "key") == std::optional<std::string>("payload"));
    CHECK_FALSE(decode_entry(e, "other"));
    auto bumped = e;
    bumped[8] = static_cast<char>(kSchemaVersion + 1);
    CHECK_FALSE(decode_entry(bumped, "key"));
    CHECK_FALSE(decode_entry(e.substr(0, e.size() - 1), "key"));
    CHECK_FALSE(decode_entry(e + "x", "key"));
    CHECK(fnv1a64("") == 0xcbf29ce484222325ULL);
    CHECK(fnv1a64("a") == 0xaf63dc4c8601ec8cULL);
}

TEST_CASE("environment overrides the cache directory") {
    auto dir = fresh_dir("env");
    ::setenv("NILHOM_CACHE_DIR", dir.string().c_str(), 1);
    auto r = invoke({"witt", "-r", "2", "--max-degree", "3", "--cache-dir", (dir / "ignored").string()});
    ::unsetenv("NILHOM_CACHE_DIR");
    CHECK(r.code == 0);
    CHECK(fs::exists(dir));
    CHECK_FALSE(fs::exists(dir / "ignored"));
    fs::remove_all(dir);
}

TEST_CASE("selftest is reproducible across cold and warm cache") {
    auto dir = fresh_dir("selftest");
    std::vector<std::string> args{"selftest", "--cache-dir", dir.string()};
    auto cold = invoke(args);
    auto warm = invoke(args);
    CHECK(cold.code == 0);
    CHECK(warm.code == 0);
    CHECK(cold.out == warm.out);
    CHECK(std::count(cold.out.begin(), cold.out.end(), '\n') == 11);
    fs::remove_all(dir);
}
