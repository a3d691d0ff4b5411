#include "doctest.h"

#include <filesystem>
#include <sstream>

#include "nmgab/compiler.hpp"
#include "nmgab/gab.hpp"
#include "nmgab/io.hpp"

using namespace nmgab;

namespace {

std::optional<std::size_t> h_error_line(const std::string& text) {
    std::istringstream in(text);
    try {
        parse_h_matrix(in, "h.txt");
    } catch (const InputError& e) {
        return e.line();
    }
    return std::nullopt;
}

}  // namespace

TEST_CASE("io: H matrix round-trip") {
    const auto h = make_example8();
    std::ostringstream out;
    write_h_matrix(out, h);
    std::istringstream in(out.str());
    CHECK(parse_h_matrix(in) == h);
}

TEST_CASE("io: H matrix with comments and blank lines") {
    std::istringstream in("# example\n\n4 8 2 4\n01101001\n10110100\n# middle\n00010111\n11001010\n");
    CHECK(parse_h_matrix(in) == make_example8());
}

TEST_CASE("io: malformed H files report the offending line") {
    CHECK(h_error_line("4 8 2\n") == std::optional<std::size_t>{1});
    CHECK(h_error_line("4 8 2 4\n01101001\n1011010\n") == std::optional<std::size_t>{3});
    CHECK(h_error_line("4 8 2 4\n01101001\n10110100\n000101x1\n") == std::optional<std::size_t>{4});
    CHECK(h_error_line("2 4 1 2\n1100\n0011\n1100\n") == std::optional<std::size_t>{4});
    CHECK(h_error_line("4 8 2 4\n01101001\n").has_value());
    CHECK(h_error_line("").has_value());
    // Irregular matrix.
    CHECK(h_error_line("2 4 1 2\n1100\n0110\n").has_value());
    CHECK_THROWS_AS(read_h_file("/nonexistent/h.txt"), InputError);
}

TEST_CASE("io: word lists") {
    std::istringstream in("10001100\n\n# note\n00000000\n");
    const auto w = parse_words(in, 8);
    REQUIRE(w.size() == 2);
    CHECK(to_string(w[0]) == "10001100");
    std::ostringstream out;
    write_words(out, w);
    std::istringstream back(out.str());
    CHECK(parse_words(back, 8) == w);
    std::istringstream bad("1000110\n");
    CHECK_THROWS_AS(parse_words(bad, 8), InputError);
    std::istringstream bad_char("1000110a\n");
    CHECK_THROWS_AS(parse_words(bad_char, 8), InputError);
}

TEST_CASE("io: layout JSON round-trip is the identity") {
    const auto h = make_example8();
    for (auto v : {Variant::xor_integrated, Variant::baseline}) {
        const auto l = compile(h, {37, std::nullopt}, v);
        const auto text = layout_to_json(l);
        const auto back = layout_from_json(text);
        CHECK(back == l);
        CHECK(layout_to_json(back) == text);

        const auto path = std::filesystem::temp_directory_path() / ("nmgab_layout_" + std::string(variant_name(v)) + ".json");
        save_layout(path, l);
        CHECK(load_layout(path) == l);
        std::filesystem::remove(path);
    }
    CHECK_THROWS_AS(layout_from_json("{"), InputError);
    CHECK_THROWS_AS(layout_from_json("{\"version\": 1}"), InputError);
}

TEST_CASE("io: trace CSV round-trip") {
    const auto l = compile(make_example8(), {2, std::nullopt}, Variant::xor_integrated);
    const auto run = run_decoder(l, {parse_bits("10001100")});
    std::ostringstream out;
    write_trace_csv(out, run.trace, l.grid);
    std::istringstream in(out.str());
    const auto rows = parse_trace_csv(in);
    CHECK(rows.size() == run.trace.spikes.size() + run.trace.host.size());
    std::size_t spikes = 0, host = 0;
    for (const auto& r : rows) {
        if (r.core) {
            ++spikes;
            CHECK(r.label == l.grid.at(*r.core).neurons[static_cast<std::size_t>(r.neuron)].label);
        } else {
            ++host;
        }
    }
    CHECK(spikes == run.trace.spikes.size());
    CHECK(host == run.trace.host.size());
    CHECK(out.str().rfind(kVersionHeader, 0) == 0);

    std::istringstream bad("tick,core_x,core_y,neuron_index,label\nx,0,0,0,a\n");
    CHECK_THROWS_AS(parse_trace_csv(bad), InputError);
}

TEST_CASE("io: result formatting") {
    WordResult r;
    CHECK(format_result(r) == "<none>,missing,0");
    r.observed = true;
    r.x_prime = parse_bits("10001101");
    r.converged = true;
    r.output_tick = 9;
    CHECK(format_result(r) == "10001101,converged,9");
    r.converged = false;
    CHECK(format_result(r) == "10001101,failed,9");
}

TEST_CASE("io: sweep CSV") {
    EnergyModel e;
    std::ostringstream out;
    write_sweep_csv(out, sweep({288}, {100}, e, {}));
    CHECK(out.str().find("288,100,87556,59042,,,31.39") != std::string::npos);
}
