#include "doctest.h"

#include <filesystem>
#include <random>
#include <sstream>

#include "nmgab/cli.hpp"
#include "nmgab/gab.hpp"
#include "nmgab/io.hpp"

using namespace nmgab;
namespace fs = std::filesystem;

namespace {

struct Run {
    int code = 0;
    std::string out;
    std::string err;
};

Run cli(std::vector<std::string> args) {
    std::ostringstream out, err;
    const int code = run_cli(args, out, err);
    return {code, out.str(), err.str()};
}

struct TempDir {
    fs::path path;
    TempDir() {
        path = fs::temp_directory_path() / ("nmgab_cli_" + std::to_string(std::random_device{}()));
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
    std::string file(const std::string& name) const { return (path / name).string(); }
};

std::string example_h(const TempDir& d) {
    const auto p = d.file("h.txt");
    std::ostringstream s;
    write_h_matrix(s, make_example8());
    write_text_file(p, s.str());
    return p;
}

}  // namespace

TEST_CASE("cli: compile reports core counts and writes a layout") {
    TempDir d;
    const auto h = example_h(d);
    auto r = cli({"compile", h, "--variant", "xor", "--max-iter", "100", "--out", d.file("x.json")});
    CHECK(r.code == kExitOk);
    CHECK(r.out.find("8 cores") != std::string::npos);
    CHECK(fs::exists(d.file("x.json")));
    r = cli({"compile", h, "--variant", "baseline", "--out", d.file("b.json")});
    CHECK(r.code == kExitOk);
    CHECK(r.out.find("9 cores") != std::string::npos);
}

TEST_CASE("cli: malformed inputs exit with the input-error code") {
    TempDir d;
    write_text_file(d.file("bad.txt"), "4 8 2 4\n01101001\n1011x100\n");
    auto r = cli({"compile", d.file("bad.txt")});
    CHECK(r.code == kExitInputError);
    CHECK(r.err.find(":3") != std::string::npos);
    CHECK(cli({"compile", d.file("missing.txt")}).code == kExitInputError);
    CHECK(cli({"compile", example_h(d), "--variant", "fast"}).code == kExitInputError);
    CHECK(cli({"nonsense"}).code == kExitInputError);
    CHECK(cli({}).code == kExitInputError);
}

TEST_CASE("cli: decode 10001100 and a codeword") {
    TempDir d;
    const auto h = example_h(d);
    REQUIRE(cli({"compile", h, "--out", d.file("x.json")}).code == kExitOk);
    write_text_file(d.file("w.txt"), "10001100\n10001101\n");
    const auto r = cli({"decode", d.file("x.json"), d.file("w.txt"), "--trace", d.file("t.csv")});
    CHECK(r.code == kExitOk);
    CHECK(r.out.find("10001101,converged,9") != std::string::npos);
    CHECK(r.out.find("10001101,converged,212") != std::string::npos);
    const auto rep = cli({"report", d.file("t.csv"), "--layout", d.file("x.json")});
    CHECK(rep.code == kExitOk);

    write_text_file(d.file("empty.csv"), "tick,core_x,core_y,neuron_index,label\n");
    const auto empty = cli({"report", d.file("empty.csv")});
    CHECK(empty.code == kExitOk);
    CHECK(empty.out.find("neuron spikes 0") != std::string::npos);
}

TEST_CASE("cli: verify, oracle, dataset and sweep") {
    TempDir d;
    const auto h = example_h(d);
    const auto v = cli({"verify", h, "--max-iter", "1"});
    CHECK(v.code == kExitOk);
    CHECK(v.out.find("2018") != std::string::npos);

    const auto ds = cli({"dataset", h, "--out", d.file("ds.txt")});
    CHECK(ds.code == kExitOk);
    CHECK(read_words_file(d.file("ds.txt"), 8).size() == 288);

    const auto o = cli({"oracle", h, "--words", d.file("ds.txt")});
    CHECK(o.code == kExitOk);
    CHECK(o.out.find("10001101,converged,1") != std::string::npos);

    const auto s = cli({"sweep", "--words", "288", "--iters", "100"});
    CHECK(s.code == kExitOk);
    CHECK(s.out.find("31.39") != std::string::npos);
    CHECK(cli({"sweep", "--iters", "0"}).code == kExitInputError);
}

TEST_CASE("cli: outputs are reproducible") {
    TempDir d;
    const auto h = example_h(d);
    REQUIRE(cli({"compile", h, "--max-iter", "5", "--out", d.file("a.json")}).code == kExitOk);
    REQUIRE(cli({"compile", h, "--max-iter", "5", "--out", d.file("b.json")}).code == kExitOk);
    CHECK(read_text_file(d.file("a.json")) == read_text_file(d.file("b.json")));
    write_text_file(d.file("w.txt"), "10001100\n00000001\n");
    const auto a = cli({"decode", d.file("a.json"), d.file("w.txt"), "--threads", "1"});
    const auto b = cli({"decode", d.file("a.json"), d.file("w.txt"), "--threads", "3"});
    CHECK(a.out == b.out);
}
