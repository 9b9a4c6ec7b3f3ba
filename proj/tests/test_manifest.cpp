#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <llsvn/manifest.hpp>

#include <filesystem>
#include <fstream>

using namespace llsvn;
namespace fs = std::filesystem;

namespace {

fs::path scratch_dir() {
    auto dir = fs::temp_directory_path() / "llsvn_manifest_test";
    fs::create_directories(dir);
    return dir;
}

}  // namespace

TEST_CASE("file digest is content-determined") {
    auto dir = scratch_dir();
    auto a = dir / "a.bin";
    auto b = dir / "b.bin";
    std::string payload(200000, 'x');
    payload[70000] = 'q';
    {
        std::ofstream(a, std::ios::binary) << payload;
        std::ofstream(b, std::ios::binary) << payload;
    }
    CHECK(file_digest(a) == file_digest(b));
    CHECK(file_digest(a) == to_hex(fnv1a64(payload)));
    {
        std::ofstream(b, std::ios::binary) << payload << "y";
    }
    CHECK(file_digest(a) != file_digest(b));
    CHECK_THROWS_AS(file_digest(dir / "missing.bin"), DataError);
    fs::remove_all(dir);
}

TEST_CASE("atomic write replaces the target and leaves no temp file") {
    auto dir = scratch_dir();
    auto p = dir / "sub" / "out.txt";
    write_file_atomic(p, "first");
    write_file_atomic(p, "second");
    std::ifstream in(p);
    std::string got((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    CHECK(got == "second");
    int n_entries = 0;
    for (auto& e : fs::directory_iterator(p.parent_path())) {
        (void)e;
        ++n_entries;
    }
    CHECK(n_entries == 1);
    fs::remove_all(dir);
}

TEST_CASE("manifest round-trips through disk") {
    auto dir = scratch_dir();
    auto input = dir / "trades.csv";
    std::ofstream(input) << "trader_id,timestamp_ms,volume\n";

    RunManifest m;
    m.command = "sweep";
    m.config = {{"sweep", {{"t_in_days", 5}}}};
    m.config_hash = "abc123";
    m.seed = 77;
    m.add_input(input);
    m.outputs = {"cells_w0.csv", "manifest.json"};
    m.wall_ms = 12.5;

    auto path = dir / "manifest.json";
    write_manifest(m, path);
    RunManifest back = load_manifest(path);
    CHECK(back.command == "sweep");
    CHECK(back.version == kVersion);
    CHECK(back.config == m.config);
    CHECK(back.config_hash == "abc123");
    CHECK(back.seed == 77);
    CHECK(back.inputs == m.inputs);
    CHECK(back.outputs == m.outputs);
    CHECK(back.wall_ms == 12.5);
    fs::remove_all(dir);
}

TEST_CASE("manifest loader rejects foreign files") {
    auto dir = scratch_dir();
    auto p = dir / "other.json";
    std::ofstream(p) << "{\"format\": \"something-else\"}";
    CHECK_THROWS_AS(load_manifest(p), ParseError);
    std::ofstream(p) << "{broken";
    CHECK_THROWS_AS(load_manifest(p), ParseError);
    CHECK_THROWS_AS(load_manifest(dir / "absent.json"), DataError);
    CHECK_THROWS_AS(manifest_from_json(nlohmann::json{{"format", "llsvn-manifest"}}), ParseError);
    fs::remove_all(dir);
}
