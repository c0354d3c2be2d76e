// ringlaser command-line driver

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "ringlaser/config.hpp"
#include "ringlaser/couplings.hpp"
#include "ringlaser/csv.hpp"
#include "ringlaser/error.hpp"
#include "ringlaser/observables.hpp"
#include "ringlaser/reduced.hpp"
#include "ringlaser/spectrum.hpp"
#include "ringlaser/svg.hpp"
#include "ringlaser/sweep.hpp"

using namespace ringlaser;
using nlohmann::json;

namespace {

struct Context {
    SimConfig config;
    std::filesystem::path dir;
    std::vector<std::string> written;

    std::string file(const std::string& kind) const {
        return (dir / (config.output.name + "_" + kind + ".csv")).string();
    }
    void write(const std::string& kind, const CsvTable& table) {
        const std::string path = file(kind);
        write_csv(path, table);
        written.push_back(path);
    }
};

Context open_context(const std::string& config_path, const std::string& out) {
    Context c;
    c.config = load_config(config_path);
    c.dir = out.empty() ? std::filesystem::path(c.config.output.dir) : std::filesystem::path(out);
    std::error_code ec;
    std::filesystem::create_directories(c.dir, ec);
    if (ec) fail(ErrorKind::invalid_config, "cannot create output directory '" + c.dir.string() + "'");
    return c;
}

SweepPoint system_point(const SimConfig& config) {
    return {config.system.n_ring, resolve_spacing(config, config.system.n_ring),
            config.system.pump_rate};
}

void cmd_couplings(Context& c) {
    const SweepPoint p = system_point(c.config);
    const AtomArray array = build_ring_with_center(p.n_ring, p.spacing);
    const CouplingMatrices m = coupling_matrices(array);

    CsvTable atoms;
    atoms.header = {"index", "x", "y", "z", "role"};
    for (std::size_t i = 0; i < array.atom_count(); ++i) {
        const Vec3& r = array.positions[i];
        atoms.rows.push_back({std::to_string(i), format_double(r.x()), format_double(r.y()),
                              format_double(r.z()), i == array.center_index ? "center" : "ring"});
    }
    c.write("atoms", atoms);

    CsvTable t;
    t.header = {"i", "j", "distance", "omega", "gamma"};
    for (Eigen::Index i = 0; i < m.size(); ++i) {
        for (Eigen::Index j = 0; j < m.size(); ++j) {
            const double dist = (array.positions[i] - array.positions[j]).norm();
            t.rows.push_back({std::to_string(i), std::to_string(j), format_double(dist),
                              format_double(m.omega(i, j)), format_double(m.gamma(i, j))});
        }
    }
    c.write("couplings", t);
}

void cmd_reduced(Context& c) {
    const SweepPoint p = system_point(c.config);
    const PointModel m = build_point_model(p, c.config.system.truncation);
    const DensityMatrix rho = steady_state(m.liouvillian, point_options(c.config).steady);
    const ReducedCheck check = reduced_dynamics_check(rho, m.reduced, p.pump_rate);

    CsvTable t;
    t.header = {"n_ring", "spacing", "pump_rate", "gamma_sym", "omega_sym", "gamma_p", "omega_p",
                "cooperativity", "p_sym_reduced", "p_center_reduced", "p_ground_reduced",
                "p_sym_full", "p_center_full", "p_ground_full", "deviation", "gamma_p_effect"};
    std::vector<std::string> row{std::to_string(p.n_ring), format_double(p.spacing),
                                 format_double(p.pump_rate), format_double(m.reduced.gamma_sym),
                                 format_double(m.reduced.omega_sym), format_double(m.reduced.gamma_p),
                                 format_double(m.reduced.omega_p),
                                 format_double(m.reduced.cooperativity)};
    for (double v : check.reduced_populations) row.push_back(format_double(v));
    for (double v : check.full_populations) row.push_back(format_double(v));
    row.push_back(format_double(check.deviation));
    row.push_back(format_double(check.gamma_p_effect));
    t.rows.push_back(row);
    c.write("reduced", t);
}

CsvTable eigenstate_table(const EigenstateDecomposition& d) {
    CsvTable t;
    t.header = {"state", "energy", "population", "overlap_sym", "overlap_center", "dominant"};
    for (Eigen::Index k = 0; k < d.energies.size(); ++k) {
        const bool dominant = k == d.dominant[0] || k == d.dominant[1];
        t.rows.push_back({std::to_string(k), format_double(d.energies(k)),
                          format_double(d.populations(k)), format_double(d.overlaps_sym(k)),
                          format_double(d.overlaps_center(k)), dominant ? "1" : "0"});
    }
    return t;
}

void cmd_steady(Context& c) {
    const SweepPoint p = system_point(c.config);
    PointOptions options = point_options(c.config);
    options.level = SweepLevel::steady;
    const SweepRecord record = evaluate_point(p, options);
    c.write("steady", records_table({record}));
    if (record.status != "ok" && record.status.rfind("g2:", 0) != 0) {
        fail(ErrorKind::convergence, "steady state failed: " + record.status);
    }
    const PointModel m = build_point_model(p, c.config.system.truncation);
    const DensityMatrix rho = steady_state(m.liouvillian, options.steady);
    c.write("eigenstates", eigenstate_table(eigenstate_populations(m.liouvillian.hamiltonian(), rho)));
}

void cmd_evolve(Context& c) {
    const SweepPoint p = system_point(c.config);
    const PointModel m = build_point_model(p, c.config.system.truncation);
    std::vector<double> times(c.config.evolve.steps);
    for (std::size_t k = 0; k < times.size(); ++k) {
        times[k] = c.config.evolve.t_end * static_cast<double>(k + 1) /
                   static_cast<double>(times.size());
    }
    EvolveOptions eo;
    eo.rtol = c.config.solver.rtol;
    eo.atol = c.config.solver.atol;
    const DensityMatrix rho0 = DensityMatrix::ground(m.basis);
    auto states = evolve(m.liouvillian, rho0, times, eo);
    states.insert(states.begin(), rho0);
    times.insert(times.begin(), 0.0);

    CsvTable t;
    t.header = {"t", "trace_error", "hermiticity_error", "min_eigenvalue", "i_out",
                "sym_population", "ground_population", "dominant_1", "dominant_2",
                "max_other_single", "higher_population"};
    CsvTable pops;
    pops.header = {"t", "state", "energy", "population"};
    for (std::size_t k = 0; k < times.size(); ++k) {
        const DensityDiagnostics diag = diagnose(states[k]);
        const auto d = eigenstate_populations(m.liouvillian.hamiltonian(), states[k]);
        double other = 0.0;
        for (Eigen::Index s = 0; s < d.populations.size(); ++s) {
            if (s != d.dominant[0] && s != d.dominant[1]) other = std::max(other, d.populations(s));
            pops.rows.push_back({format_double(times[k]), std::to_string(s),
                                 format_double(d.energies(s)), format_double(d.populations(s))});
        }
        t.rows.push_back({format_double(times[k]), format_double(diag.trace_error),
                          format_double(diag.hermiticity_error), format_double(diag.min_eigenvalue),
                          format_double(output_intensity(states[k], m.couplings)),
                          format_double(symmetric_population(states[k])),
                          format_double(d.ground_population),
                          format_double(d.populations(d.dominant[0])),
                          format_double(d.populations(d.dominant[1])), format_double(other),
                          format_double(d.higher_population)});
    }
    c.write("evolve", t);
    c.write("eigenstate_populations", pops);
}

void cmd_intensity_map(Context& c) {
    const SweepPoint p = system_point(c.config);
    const PointModel m = build_point_model(p, c.config.system.truncation);
    const DensityMatrix rho = steady_state(m.liouvillian, point_options(c.config).steady);
    const IntensityMap map = intensity_map(c.config.map, rho, m.array);

    const char* names[3][2] = {{"y", "z"}, {"x", "z"}, {"x", "y"}};
    const auto axes = names[static_cast<int>(c.config.map.normal)];
    CsvTable t;
    t.header = {axes[0], axes[1], "intensity"};
    for (std::size_t iu = 0; iu < map.u.size(); ++iu) {
        for (std::size_t iv = 0; iv < map.v.size(); ++iv) {
            t.rows.push_back({format_double(map.u[iu]), format_double(map.v[iv]),
                              format_double(map.values(iu, iv))});
        }
    }
    c.write("intensity_map", t);
}

void cmd_spectrum(Context& c) {
    const SweepPoint p = system_point(c.config);
    const PointModel m = build_point_model(p, c.config.system.truncation);
    const PointOptions options = point_options(c.config);
    const DensityMatrix rho = steady_state(m.liouvillian, options.steady);
    const SpectrumResult s = compute_spectrum(m.liouvillian, rho, options.spectrum);

    CsvTable g;
    g.header = {"tau", "g1_re", "g1_im"};
    for (std::size_t k = 0; k < s.tau_grid.size(); ++k) {
        g.rows.push_back({format_double(s.tau_grid[k]), format_double(s.g1_values[k].real()),
                          format_double(s.g1_values[k].imag())});
    }
    c.write("g1", g);
    CsvTable sp;
    sp.header = {"omega", "s"};
    for (std::size_t k = 0; k < s.omega_grid.size(); ++k) {
        sp.rows.push_back({format_double(s.omega_grid[k]), format_double(s.s_values[k])});
    }
    c.write("spectrum", sp);
    CsvTable sum;
    sum.header = {"n_ring", "spacing", "pump_rate", "fwhm", "peak", "fwhm_fit", "fit_residual",
                  "lorentzian", "gamma_sym", "pump_broadened"};
    sum.rows.push_back({std::to_string(p.n_ring), format_double(p.spacing),
                        format_double(p.pump_rate), format_double(s.fwhm), format_double(s.peak),
                        format_double(s.fwhm_fit), format_double(s.fit_residual),
                        s.lorentzian ? "1" : "0", format_double(m.reduced.gamma_sym),
                        format_double(gamma0 + p.pump_rate)});
    c.write("spectrum_summary", sum);
}

void cmd_sweep(Context& c) {
    const auto records = run_sweep(c.config, thread_count_from_env());
    c.write("sweep", records_table(records));
    c.write("sweep_timing", timing_table(records));
}

void cmd_truncation_check(Context& c) {
    const std::size_t n = c.config.system.n_ring;
    PointOptions options = point_options(c.config);
    options.level = c.config.truncation_check.spectrum ? SweepLevel::spectrum : SweepLevel::steady;
    const auto pairs = truncation_comparison(n, resolve_spacing(c.config, n),
                                             c.config.truncation_check.pump_rate, options);
    c.write("truncation", truncation_table(pairs));
}

int report_error(const std::string& subcommand, const std::string& kind,
                 const std::string& message, int code) {
    json j{{"status", "error"}, {"subcommand", subcommand}, {"kind", kind}, {"message", message}};
    std::cerr << j.dump() << "\n";
    return code;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"ringlaser: ring of dipole-coupled atoms around an incoherently pumped atom"};
    app.require_subcommand(1);

    std::string config_path;
    std::string out_dir;
    struct Command {
        const char* name;
        const char* help;
        void (*run)(Context&);
    };
    const std::vector<Command> commands{
        {"couplings", "atom positions and coupling matrices", cmd_couplings},
        {"reduced", "symmetric-subspace parameters and three-state check", cmd_reduced},
        {"steady", "steady-state observables and eigenstate populations", cmd_steady},
        {"evolve", "time evolution from the ground state", cmd_evolve},
        {"intensity-map", "steady-state field intensity on a plane", cmd_intensity_map},
        {"spectrum", "first-order coherence and emission spectrum", cmd_spectrum},
        {"sweep", "observables over an (N, d, nu) grid", cmd_sweep},
        {"truncation-check", "full basis against the two-excitation cut-off", cmd_truncation_check},
    };
    for (const auto& cmd : commands) {
        auto* sub = app.add_subcommand(cmd.name, cmd.help);
        sub->add_option("--config", config_path, "INI configuration file")->required();
        sub->add_option("--out", out_dir, "output directory (overrides [output] dir)");
    }

    std::string csv_path;
    std::string svg_path;
    HeatmapOptions heat;
    auto* svg = app.add_subcommand("svg", "render a CSV grid as an SVG heatmap");
    svg->add_option("--csv", csv_path, "input CSV")->required();
    svg->add_option("--x", heat.x_column, "column for the horizontal axis")->required();
    svg->add_option("--y", heat.y_column, "column for the vertical axis")->required();
    svg->add_option("--value", heat.value_column, "column to color by")->required();
    svg->add_flag("--log", heat.log_scale, "log10 color scale");
    svg->add_option("--title", heat.title, "plot title");
    svg->add_option("--cell", heat.cell_pixels, "pixels per grid cell");
    svg->add_option("--out", svg_path, "output file (default: input with .svg)");

    std::string active = "ringlaser";
    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        return report_error(active, "usage", e.what(), 2);
    }

    try {
        if (svg->parsed()) {
            active = "svg";
            const CsvTable table = read_csv(csv_path);
            if (svg_path.empty()) svg_path = std::filesystem::path(csv_path).replace_extension(".svg").string();
            std::ofstream out(svg_path);
            if (!out) fail(ErrorKind::invalid_config, "cannot write '" + svg_path + "'");
            out << render_heatmap(table, heat);
            std::cout << json{{"status", "ok"}, {"subcommand", active}, {"files", {svg_path}}}.dump()
                      << "\n";
            return 0;
        }
        for (const auto& cmd : commands) {
            if (!app.got_subcommand(cmd.name)) continue;
            active = cmd.name;
            Context c = open_context(config_path, out_dir);
            cmd.run(c);
            std::cout << json{{"status", "ok"}, {"subcommand", active}, {"files", c.written}}.dump()
                      << "\n";
        }
    } catch (const Error& e) {
        const int code = e.kind() == ErrorKind::invalid_config ? 2 : 1;
        return report_error(active, std::string(to_string(e.kind())), e.what(), code);
    } catch (const std::exception& e) {
        return report_error(active, "internal", e.what(), 3);
    }
    return 0;
}
