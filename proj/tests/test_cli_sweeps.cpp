#include <doctest.h>

#include <charconv>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <limits>
#include <random>
#include <sstream>

#include "ringlaser/config.hpp"
#include "ringlaser/csv.hpp"
#include "ringlaser/error.hpp"
#include "ringlaser/svg.hpp"
#include "ringlaser/sweep.hpp"

using namespace ringlaser;

namespace {

ErrorKind kind_of(const auto& f) {
    try {
        f();
    } catch (const Error& e) {
        return e.kind();
    }
    FAIL("expected an error");
    return ErrorKind::invalid_parameter;
}

std::string message_of(const auto& f) {
    try {
        f();
    } catch (const Error& e) {
        return e.what();
    }
    return {};
}

std::string to_text(const CsvTable& t) {
    const auto dir = std::filesystem::temp_directory_path() / "ringlaser_unit";
    std::filesystem::create_directories(dir);
    const auto path = (dir / "table.csv").string();
    write_csv(path, t);
    std::ifstream in(path, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

} // namespace

TEST_SUITE("cli_sweeps") {

TEST_CASE("default configuration") {
    const SimConfig c = parse_config("");
    CHECK(c.system.n_ring == 5);
    CHECK(c.sweep.n_ring == std::vector<std::size_t>{5});
    CHECK(c.sweep.spacing == std::vector<double>{0.5});
    CHECK(c.sweep.pump_rate == std::vector<double>{0.1});
    CHECK(c.sweep.level == SweepLevel::steady);
    CHECK(c.output.name == "ringlaser");
}

TEST_CASE("configuration keys") {
    const SimConfig c = parse_config(R"(
; comment
[system]
n_ring = 7
spacing = subradiant
pump_rate = 0.25
truncation = 3
subradiant_range = 0.2, 1.0

[solver]
svd_limit = 10

[sweep]
n_ring = 3..5
pump_rate = log(0.01, 10, 4)
level = spectrum

[spectrum]
tau_max = 80
tau_samples = 1025

[map]
plane = xz
offset = 2.5
resolution = 11

[truncation_check]
pump_rate = 0.1, 1
spectrum = yes

[output]
dir = somewhere
name = run
)");
    CHECK(c.system.n_ring == 7);
    CHECK_FALSE(c.system.spacing.has_value());
    CHECK(c.sweep.subradiant);
    CHECK(c.system.truncation.policy == TruncationSetting::Policy::fixed);
    CHECK(c.system.truncation.max_excitations == 3);
    CHECK(c.system.subradiant_range == std::pair<double, double>{0.2, 1.0});
    CHECK(c.solver.svd_limit == 10);
    CHECK(c.sweep.n_ring == std::vector<std::size_t>{3, 4, 5});
    REQUIRE(c.sweep.pump_rate.size() == 4);
    CHECK(c.sweep.pump_rate.front() == 0.01);
    CHECK(c.sweep.pump_rate.back() == 10.0);
    CHECK(c.sweep.pump_rate[1] == doctest::Approx(0.1));
    CHECK(c.sweep.level == SweepLevel::spectrum);
    CHECK(c.spectrum.tau_max == 80.0);
    CHECK(c.spectrum.tau_samples == 1025);
    CHECK(c.map.normal == PlaneNormal::y);
    CHECK(c.map.offset == 2.5);
    CHECK(c.truncation_check.pump_rate == std::vector<double>{0.1, 1.0});
    CHECK(c.truncation_check.spectrum);
    CHECK(c.output.dir == "somewhere");

    const PointOptions o = point_options(c);
    CHECK(o.level == SweepLevel::spectrum);
    CHECK(o.steady.svd_limit == 10);
    CHECK(o.spectrum.tau_max == 80.0);
}

TEST_CASE("shipped presets parse") {
    std::size_t count = 0;
    for (const auto& entry : std::filesystem::directory_iterator(RINGLASER_CONFIG_DIR)) {
        if (entry.path().extension() != ".ini") continue;
        CAPTURE(entry.path().string());
        CHECK_NOTHROW(sweep_points(load_config(entry.path().string())));
        ++count;
    }
    CHECK(count >= 8);
}

TEST_CASE("configuration errors name the key") {
    const std::vector<std::pair<std::string, std::string>> bad{
        {"[system]\nn_ring = 2\n", "system.n_ring"},
        {"[system]\nspacing = -0.5\n", "system.spacing"},
        {"[system]\npump_rate = abc\n", "system.pump_rate"},
        {"[system]\ntruncation = 0\n", "system.truncation"},
        {"[system]\ncolour = red\n", "system.colour"},
        {"[extras]\nx = 1\n", "extras"},
        {"[sweep]\npump_rate = lin(0, 1)\n", "sweep.pump_rate"},
        {"[sweep]\npump_rate = log(0, 1, 5)\n", "sweep.pump_rate"},
        {"[sweep]\nn_ring = 8..3\n", "sweep.n_ring"},
        {"[sweep]\nspacing = ,\n", "sweep.spacing"},
        {"[sweep]\nlevel = everything\n", "sweep.level"},
        {"[map]\nplane = xw\n", "map.plane"},
        {"[map]\nresolution = 1\n", "map"},
        {"[spectrum]\ntau_samples = 2\n", "spectrum.tau_samples"},
        {"[truncation_check]\nspectrum = maybe\n", "truncation_check.spectrum"},
        {"[system\nn_ring = 4\n", "malformed"},
    };
    for (const auto& [text, key] : bad) {
        CAPTURE(text);
        CHECK(kind_of([&] { parse_config(text); }) == ErrorKind::invalid_config);
        CHECK(message_of([&] { parse_config(text); }).find(key) != std::string::npos);
    }
    CHECK(kind_of([] { load_config("/nonexistent/ringlaser.ini"); }) == ErrorKind::invalid_config);
}

TEST_CASE("axis syntax") {
    CHECK(parse_real_axis("0.5") == std::vector<double>{0.5});
    CHECK(parse_real_axis(" 1, 2 ,3 ") == std::vector<double>{1, 2, 3});
    const auto lin = parse_real_axis("lin(0.1, 1.2, 12)");
    REQUIRE(lin.size() == 12);
    CHECK(lin.front() == 0.1);
    CHECK(lin.back() == 1.2);
    CHECK(lin[1] == doctest::Approx(0.2));
    CHECK(parse_real_axis("LIN(2, 3, 1)") == std::vector<double>{2.0});
    CHECK(parse_count_axis("3..6") == std::vector<std::size_t>{3, 4, 5, 6});
    CHECK(parse_count_axis("4, 9") == std::vector<std::size_t>{4, 9});
    CHECK(kind_of([] { parse_real_axis("cube(1, 2, 3)"); }) == ErrorKind::invalid_config);
    CHECK(kind_of([] { parse_real_axis("lin(1, 2, 0)"); }) == ErrorKind::invalid_config);
    CHECK(kind_of([] { parse_count_axis("3.5"); }) == ErrorKind::invalid_config);
}

TEST_CASE("truncation policy") {
    TruncationSetting t;
    CHECK_FALSE(t.resolve(6).max_excitations.has_value());
    CHECK(t.resolve(7).max_excitations == 2u);
    t.policy = TruncationSetting::Policy::full;
    CHECK_FALSE(t.resolve(13).max_excitations.has_value());
    t.policy = TruncationSetting::Policy::fixed;
    t.max_excitations = 5;
    CHECK(t.resolve(4).max_excitations == 4u);
    CHECK(t.resolve(9).max_excitations == 5u);
}

TEST_CASE("number formatting is exact and fixed width") {
    std::mt19937_64 rng(99);
    std::uniform_real_distribution<double> exponent(-300.0, 300.0);
    for (int k = 0; k < 2000; ++k) {
        const double x = (k % 2 ? -1.0 : 1.0) * std::pow(10.0, exponent(rng)) * (1.0 + 1e-3 * k);
        const std::string s = format_double(x);
        double back = 0.0;
        std::from_chars(s.data(), s.data() + s.size(), back);
        CHECK(back == x);
    }
    CHECK(format_double(0.1) == "1.0000000000000001e-01");
    CHECK(format_double(1.0) == "1.0000000000000000e+00");
    CHECK(format_double(std::numeric_limits<double>::quiet_NaN()) == "nan");
    CHECK(format_double(-std::numeric_limits<double>::infinity()) == "-inf");
}

TEST_CASE("csv round trip") {
    CsvTable t;
    t.header = {"a", "b", "tag"};
    t.rows = {{format_double(1.5), format_double(-2.0), "ok"}, {"nan", format_double(3.0), "x;y"}};
    const auto dir = std::filesystem::temp_directory_path() / "ringlaser_unit";
    std::filesystem::create_directories(dir);
    const auto path = (dir / "round.csv").string();
    write_csv(path, t);
    const CsvTable back = read_csv(path);
    CHECK(back.header == t.header);
    CHECK(back.rows == t.rows);
    CHECK(back.column("a")[0] == 1.5);
    CHECK(std::isnan(back.column("a")[1]));
    CHECK(std::isnan(back.column("tag")[0]));
    CHECK(kind_of([&] { back.column_index("missing"); }) == ErrorKind::invalid_parameter);
}

TEST_CASE("sweep grid order") {
    SimConfig c = parse_config("[sweep]\nn_ring = 5, 3\nspacing = 0.6, 0.2\npump_rate = 1, 0.1\n");
    const auto pts = sweep_points(c);
    REQUIRE(pts.size() == 8);
    CHECK(pts.front().n_ring == 3);
    CHECK(pts.front().spacing == 0.2);
    CHECK(pts.front().pump_rate == 0.1);
    CHECK(pts[1].pump_rate == 1.0);
    CHECK(pts[2].spacing == 0.6);
    CHECK(pts.back().n_ring == 5);

    c = parse_config("[system]\nspacing = subradiant\n[sweep]\nn_ring = 4..5\n");
    const auto sub = sweep_points(c);
    REQUIRE(sub.size() == 2);
    CHECK(sub[0].spacing == find_subradiant_distance(4, {0.1, 1.2}).d_star);
    CHECK(sub[1].spacing == resolve_spacing(c, 5));

    c.sweep.pump_rate.clear();
    CHECK(kind_of([&] { sweep_points(c); }) == ErrorKind::invalid_config);
}

TEST_CASE("point evaluation levels and status") {
    PointOptions o;
    o.level = SweepLevel::couplings;
    const SweepRecord a = evaluate_point({4, 0.5, 0.3}, o);
    CHECK(a.status == "ok");
    CHECK(a.gamma_sym == gamma_sym_at(4, 0.5));
    CHECK(std::isnan(a.i_out));
    CHECK(a.basis_dim == 0);

    o.level = SweepLevel::steady;
    const SweepRecord b = evaluate_point({4, 0.5, 0.3}, o);
    CHECK(b.status == "ok");
    CHECK(b.basis_dim == 32);
    CHECK(b.i_out > 0.0);
    CHECK(b.g2_zero > 0.0);
    CHECK(std::isnan(b.fwhm));

    // no pump: steady state is the ground state and g2 is undefined
    const SweepRecord c = evaluate_point({4, 0.5, 0.0}, o);
    CHECK(c.status == "g2:undefined_statistics");
    CHECK(c.i_out == 0.0);
    CHECK(std::isnan(c.g2_zero));

    o.level = SweepLevel::spectrum;
    o.spectrum.tau_max = 1.0;
    o.spectrum.max_extensions = 0;
    const SweepRecord d = evaluate_point({3, 0.5, 0.5}, o);
    CHECK(d.status == "fwhm:window_truncation");
    CHECK(d.i_out > 0.0);

    const SweepRecord e = evaluate_point({2, 0.5, 0.5}, o);
    CHECK(e.status == "invalid_geometry");
}

TEST_CASE("thread count from the environment") {
    ::setenv("RINGLASER_THREADS", "3", 1);
    CHECK(thread_count_from_env() == 3);
    ::setenv("RINGLASER_THREADS", "zero", 1);
    CHECK(kind_of([] { thread_count_from_env(); }) == ErrorKind::invalid_config);
    ::setenv("RINGLASER_THREADS", "0", 1);
    CHECK(kind_of([] { thread_count_from_env(); }) == ErrorKind::invalid_config);
    ::unsetenv("RINGLASER_THREADS");
    CHECK(thread_count_from_env() >= 1);
}

TEST_CASE("sweeps do not depend on the thread count") {
    const SimConfig c = parse_config(
        "[system]\ntruncation = 2\n[sweep]\nn_ring = 3..5\nspacing = 0.3, 0.7\npump_rate = 0.1, 1\n");
    const auto one = run_sweep(c, 1);
    const auto three = run_sweep(c, 3);
    REQUIRE(one.size() == 12);
    CHECK(to_text(records_table(one)) == to_text(records_table(three)));
    CHECK(records_table(one).header.back() == "status");
}

TEST_CASE("truncation comparison") {
    PointOptions o;
    const auto pairs = truncation_comparison(3, 0.5, {0.0, 0.5}, o);
    REQUIRE(pairs.size() == 2);
    // nothing excited on either basis
    CHECK(pairs[0].i_out_deviation == 0.0);
    CHECK(std::isnan(pairs[0].g2_deviation));
    CHECK(pairs[0].full.status == "g2:undefined_statistics");
    CHECK(pairs[1].full.basis_dim == 16);
    CHECK(pairs[1].truncated.basis_dim == 11);
    CHECK(pairs[1].i_out_deviation >= 0.0);
    CHECK(pairs[1].i_out_deviation < 0.2);
    CHECK(truncation_table(pairs).rows.size() == 2);

    CHECK(kind_of([] { truncation_comparison(10, 0.5, {0.1}); }) == ErrorKind::resource_limit);
    CHECK(kind_of([] { truncation_comparison(4, 0.5, {}); }) == ErrorKind::invalid_config);
}

TEST_CASE("heatmap rendering") {
    CsvTable t;
    t.header = {"x", "y", "value"};
    for (int i = 0; i < 3; ++i) {
        for (int j = 0; j < 4; ++j) {
            t.rows.push_back({format_double(i), format_double(j), format_double(i * j + 1.0)});
        }
    }
    HeatmapOptions o;
    o.title = "demo";
    const std::string svg = render_heatmap(t, o);
    CHECK(svg.rfind("<svg", 0) == 0);
    CHECK(svg.find("</svg>") != std::string::npos);
    CHECK(svg.find("demo") != std::string::npos);
    CHECK(render_heatmap(t, o) == svg);
    o.value_column = "nothing";
    CHECK_THROWS_AS(render_heatmap(t, o), Error);
}

}
