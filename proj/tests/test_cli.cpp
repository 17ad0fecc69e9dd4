#include "bakersim/cli.hpp"
#include "bakersim/nmr.hpp"

#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

using namespace bakersim;

namespace {

struct Result {
    int code;
    std::string out;
    std::string err;
};

Result invoke(std::vector<std::string> args) {
    args.insert(args.begin(), "bakersim");
    std::vector<const char*> argv;
    for (const auto& a : args) argv.push_back(a.c_str());
    std::ostringstream out, err;
    const int code = cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
    return {code, out.str(), err.str()};
}

std::vector<std::string> lines(const std::string& text) {
    std::vector<std::string> out;
    std::istringstream in(text);
    for (std::string l; std::getline(in, l);) out.push_back(l);
    return out;
}

std::filesystem::path scratch(const std::string& name) {
    return std::filesystem::temp_directory_path() / ("bakersim_test_" + name);
}

}  // namespace

TEST_CASE("entropy csv") {
    const Result r = invoke({"entropy", "--preset", "fig2", "--steps", "6", "--seed", "1"});
    REQUIRE(r.code == cli::kOk);
    int data = 0, chaotic = 0, header = 0;
    for (const auto& l : lines(r.out)) {
        if (l.rfind("#", 0) == 0) continue;
        if (l == "step,variant,entropy_bits") {
            ++header;
            continue;
        }
        ++data;
        if (l.find(",chaotic,") != std::string::npos) ++chaotic;
    }
    CHECK(header == 1);
    CHECK(data == 14);
    CHECK(chaotic == 7);
    CHECK(r.out.find("# preset=fig2") != std::string::npos);
    CHECK(r.out.find('\r') == std::string::npos);

    const Result again = invoke({"entropy", "--preset", "fig2", "--steps", "6", "--seed", "1"});
    CHECK(again.out == r.out);

    const Result one = invoke({"entropy", "--preset", "fig2", "--map", "regular"});
    CHECK(one.code == cli::kOk);
    CHECK(one.out.find(",chaotic,") == std::string::npos);
}

TEST_CASE("entropy plot data") {
    const Result r = invoke({"entropy", "--preset", "fig2", "--map", "chaotic", "--format", "plot"});
    REQUIRE(r.code == cli::kOk);
    const auto ls = lines(r.out);
    int headers = 0, data = 0;
    for (const auto& l : ls) (l.rfind("#", 0) == 0 ? headers : data)++;
    CHECK(headers == 1);
    CHECK(data == 7);
    const cli::PlotSeries parsed = cli::parse_plot_data(r.out);
    CHECK(parsed.rows.size() == 7);
    CHECK(cli::emit_plot_data(parsed) == r.out);
}

TEST_CASE("plot round trip") {
    cli::PlotSeries s;
    s.meta = {{"preset", "custom"}, {"note", "x"}};
    s.columns = {"a", "b"};
    s.rows = {{0.1, 1.0 / 3.0}, {2.5e-17, -7.125}, {1e300, 0.0}};
    CHECK(cli::parse_plot_data(cli::emit_plot_data(s)) == s);
    cli::PlotSeries empty = s;
    empty.rows.clear();
    CHECK_THROWS_AS(cli::emit_plot_data(empty), std::invalid_argument);
    cli::PlotSeries ragged = s;
    ragged.rows[1].push_back(1.0);
    CHECK_THROWS_AS(cli::emit_plot_data(ragged), std::invalid_argument);
}

TEST_CASE("hyper csv") {
    const Result r = invoke({"hyper", "--preset", "fig5"});
    REQUIRE(r.code == cli::kOk);
    CHECK(r.out.find("delta_s_bits,i_min_bits,provenance") != std::string::npos);
    CHECK(r.out.find("# summary s_max_bits=") != std::string::npos);
    CHECK(r.out.find(",exhaustive") != std::string::npos);
    CHECK(r.out.find(",greedy") != std::string::npos);
    CHECK(invoke({"hyper", "--preset", "fig5"}).out == r.out);

    const Result plot = invoke({"hyper", "--preset", "fig5", "--format", "plot"});
    REQUIRE(plot.code == cli::kOk);
    const cli::PlotSeries s = cli::parse_plot_data(plot.out);
    CHECK(s.columns.size() == 2);
    for (std::size_t i = 1; i < s.rows.size(); ++i) CHECK(s.rows[i][0] > s.rows[i - 1][0]);

    CHECK(invoke({"hyper", "--steps", "4"}).code == cli::kUsageError);
}

TEST_CASE("compile output parses back") {
    const Result r = invoke({"compile", "--sequence", "t_odd"});
    REQUIRE(r.code == cli::kOk);
    CHECK(parse_pulse_sequence(r.out) == t_odd());
    const Result c = invoke({"compile", "--sequence", "t_even", "--convention", "cycles"});
    REQUIRE(c.code == cli::kOk);
    HamiltonianModel cycles;
    cycles.convention = FrequencyConvention::kCycles;
    CHECK(parse_pulse_sequence(c.out) == t_even(cycles));
    CHECK(invoke({"compile", "--sequence", "all"}).code == cli::kOk);
    CHECK(invoke({"compile", "--sequence", "nope"}).code == cli::kUsageError);
}

TEST_CASE("verify") {
    const Result r = invoke({"verify"});
    CHECK(r.code == cli::kOk);
    CHECK(r.out.find("FAIL") == std::string::npos);
}

TEST_CASE("config files and exit codes") {
    const auto path = scratch("cfg.ini");
    {
        std::ofstream f(path);
        f << "# fig3 with a shorter run\npreset = fig3\n; two steps only\nsteps = 2\n";
    }
    const Result ok = invoke({"entropy", "--config", path.string()});
    CHECK(ok.code == cli::kOk);
    CHECK(ok.out.find("# preset=fig3") != std::string::npos);
    CHECK(ok.out.find("# steps=2") != std::string::npos);

    {
        std::ofstream f(path);
        f << "preset = fig2\ncolour = blue\n";
    }
    CHECK(invoke({"entropy", "--config", path.string()}).code == cli::kUsageError);
    {
        std::ofstream f(path);
        f << "steps = 2\nsteps = 3\n";
    }
    CHECK(invoke({"entropy", "--config", path.string()}).code == cli::kUsageError);
    std::filesystem::remove(path);

    CHECK(invoke({"entropy", "--config", scratch("missing.ini").string()}).code == cli::kIoError);
    CHECK(invoke({"entropy", "--out", "/nonexistent-dir/x.csv"}).code == cli::kIoError);
    CHECK(invoke({"entropy", "--bogus"}).code == cli::kUsageError);
    CHECK(invoke({"entropy", "--steps", "zero"}).code == cli::kUsageError);
    CHECK(invoke({"entropy", "--gamma-h", "-3"}).code == cli::kUsageError);
    CHECK(invoke({"entropy", "--preset", "fig9"}).code == cli::kUsageError);
    CHECK(invoke({"frobnicate"}).code == cli::kUsageError);

    const auto out = scratch("out.csv");
    CHECK(invoke({"entropy", "--steps", "2", "--out", out.string()}).code == cli::kOk);
    std::ifstream in(out);
    std::stringstream ss;
    ss << in.rdbuf();
    CHECK(ss.str() == invoke({"entropy", "--steps", "2"}).out);
    std::filesystem::remove(out);

    CHECK(cli::parse_config_text("a = 1\n\n; c\nb=two words\n") ==
          std::vector<std::pair<std::string, std::string>>{{"a", "1"}, {"b", "two words"}});
    CHECK_THROWS_AS(cli::parse_config_text("no equals sign\n"), std::invalid_argument);
}
