// cli.cpp - subcommands curve, fig, localized and validate

#include "cli.hpp"

#include <CLI11.hpp>

#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <exception>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <mutex>
#include <optional>
#include <sstream>
#include <thread>

#include "nmcorr/errors.hpp"
#include "nmcorr/measure.hpp"
#include "report.hpp"
#include "svg_plot.hpp"
#include "validate.hpp"

namespace nmcorr::cli {

namespace {

struct UnitFlags {
    double omega0_ghz{10.0};
    double kb_over_hbar{UnitConversion::kCodataKbOverHbar};

    UnitConversion units() const {
        if (!(omega0_ghz > 0.0) || !(kb_over_hbar > 0.0))
            throw std::invalid_argument("--omega0-ghz and --kb-over-hbar must be > 0");
        return UnitConversion{omega0_ghz, kb_over_hbar};
    }
};

struct CurveFlags {
    double s{1.0};
    double eta_rel{0.5};
    double omega_c{5.0};
    std::optional<double> temp_k;
    std::optional<double> theta;
    double n0{1.0};
    double t{0.0};
    double tau_max{200.0};
    std::size_t points{2000};
    bool nprime{false};
    std::string out{"-"};
    std::string svg;
    std::string record;
    UnitFlags units;
};

struct FigFlags {
    int id{1};
    std::string outdir{"."};
    double tau_max{200.0};
    std::size_t points{2000};
    unsigned jobs{0};
    bool svg{false};
    bool nprime{false};
    UnitFlags units;
};

struct LocalizedFlags {
    double s{1.0};
    double eta_rel{1.0};
    double omega_c{5.0};
};

void add_unit_flags(CLI::App* app, UnitFlags& u) {
    app->add_option("--omega0-ghz", u.omega0_ghz, "Mode frequency omega0 in 1e9 rad/s")->capture_default_str();
    app->add_option("--kb-over-hbar", u.kb_over_hbar, "k_B / hbar in rad s^-1 K^-1")->capture_default_str();
}

std::string join(const std::vector<std::string>& args) {
    std::string s = "nmcorr";
    for (const auto& a : args) s += " " + a;
    return s;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

void write_text(const std::string& path, const std::string& text) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw std::invalid_argument("cannot write " + path);
    f << text;
    if (!f) throw std::invalid_argument("write failed for " + path);
}

std::string curve_csv(const MeasureCurve& c, RunRecord rec) {
    rec.route = to_string(c.route);
    std::ostringstream os;
    write_curve_csv(os, c, rec);
    return os.str();
}

Series n_series(const MeasureCurve& c, const std::string& label) { return Series{label, c.tau, c.n_value}; }

int cmd_curve(const CurveFlags& f, const std::vector<std::string>& args, std::ostream& out) {
    const auto t0 = std::chrono::steady_clock::now();
    const UnitConversion units = f.units.units();
    ParameterRecord p;
    p.s = f.s;
    p.eta_rel = f.eta_rel;
    p.omega_c = f.omega_c;
    if (f.theta) {
        p.theta = *f.theta;
    } else {
        p.kelvin = f.temp_k.value_or(0.5);
        if (!(p.kelvin >= 0.0)) throw std::invalid_argument("--temp-k must be >= 0");
        p.theta = units.theta_from_kelvin(p.kelvin);
    }
    p.n0 = f.n0;
    p.t = f.t;
    p.density().validate();
    p.bath().validate();
    p.state().validate();
    if (f.points == 0 || !(f.tau_max > 0.0)) throw std::invalid_argument("--points and --tau-max must be > 0");

    const MeasureCurve c = compute_curve(p, f.tau_max, f.points, f.nprime);

    RunRecord rec;
    rec.command_line = join(args);
    rec.params = p;
    rec.units = units;
    rec.tau_max = f.tau_max;
    rec.points = f.points;
    rec.nprime = f.nprime;
    rec.timestamp = iso_timestamp();
    rec.wall_time_s = seconds_since(t0);
    const std::string csv = curve_csv(c, rec);
    if (f.out == "-")
        out << csv;
    else
        write_text(f.out, csv);

    if (!f.svg.empty()) {
        std::vector<Series> ss{n_series(c, "N")};
        if (c.n_prime) ss.push_back(Series{"N'", c.tau, *c.n_prime});
        ChartSpec spec;
        char title[160];
        std::snprintf(title, sizeof title, "s=%g, eta=%g eta_c, theta=%.4g, n0=%g, t=%g", p.s, p.eta_rel, p.theta,
                      p.n0, p.t);
        spec.title = title;
        write_text(f.svg, render_svg(spec, ss));
    }
    return kOk;
}

int cmd_fig(const FigFlags& f, const std::vector<std::string>& args, std::ostream& out) {
    const UnitConversion units = f.units.units();
    if (f.points == 0 || !(f.tau_max > 0.0)) throw std::invalid_argument("--points and --tau-max must be > 0");
    std::vector<FigurePanel> panels = figure_preset(f.id, units, f.tau_max, f.points);
    for (auto& p : panels) p.sweep.with_nprime = f.nprime;
    std::filesystem::create_directories(f.outdir);

    const std::string cmdline = join(args);
    std::vector<std::vector<std::string>> index_rows(panels.size());
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex mu;

    auto worker = [&] {
        for (std::size_t i = next++; i < panels.size(); i = next++) {
            try {
                const FigurePanel& fp = panels[i];
                const auto t0 = std::chrono::steady_clock::now();
                const auto curves = run_sweep(fp.sweep, SweepOptions{1});
                const double wall = seconds_since(t0);
                std::vector<Series> series;
                for (std::size_t k = 0; k < curves.size(); ++k) {
                    const std::string name = "fig" + std::to_string(fp.figure) + "_" + fp.panel + "_" + fp.labels[k] + ".csv";
                    RunRecord rec;
                    rec.command_line = cmdline;
                    rec.params = curves[k].params;
                    rec.units = units;
                    rec.tau_max = f.tau_max;
                    rec.points = f.points;
                    rec.nprime = f.nprime;
                    rec.timestamp = iso_timestamp();
                    rec.wall_time_s = wall;
                    write_text((std::filesystem::path(f.outdir) / name).string(), curve_csv(curves[k], rec));
                    const auto& pr = curves[k].params;
                    char row[256];
                    std::snprintf(row, sizeof row, "%s,%c,%s,%.9g,%.9g,%.9g,%.9g,%s", name.c_str(), fp.panel,
                                  fp.labels[k].c_str(), pr.s, pr.eta_rel, units.kelvin_from_theta(pr.theta), pr.n0,
                                  to_string(curves[k].route).c_str());
                    index_rows[i].push_back(row);
                    series.push_back(n_series(curves[k], fp.labels[k]));
                }
                if (f.svg) {
                    ChartSpec spec;
                    spec.title = "Figure " + std::to_string(fp.figure) + "(" + fp.panel + "): s=" +
                                 std::to_string(fp.sweep.base.s).substr(0, 3) + ", " + to_string(fp.sweep.axis) +
                                 " sweep";
                    spec.y_label = "N(0, tau)";
                    const std::string name = "fig" + std::to_string(fp.figure) + "_" + fp.panel + ".svg";
                    write_text((std::filesystem::path(f.outdir) / name).string(), render_svg(spec, series));
                }
                std::lock_guard lock(mu);
                out << "panel " << fp.panel << ": " << curves.size() << " curves (" << wall << " s)" << std::endl;
            } catch (...) {
                std::lock_guard lock(mu);
                if (!failure) failure = std::current_exception();
            }
        }
    };
    unsigned jobs = f.jobs ? f.jobs : std::max(1u, std::thread::hardware_concurrency());
    jobs = std::min<unsigned>(jobs, static_cast<unsigned>(panels.size()));
    if (jobs <= 1) {
        worker();
    } else {
        std::vector<std::jthread> pool;
        for (unsigned j = 0; j < jobs; ++j) pool.emplace_back(worker);
    }
    if (failure) std::rethrow_exception(failure);

    std::ostringstream idx;
    idx << "# nmcorr " NMCORR_VERSION "\n# command: " << cmdline << "\n";
    idx << "file,panel,label,s,eta_over_eta_c,temp_k,n0,route\n";
    std::size_t n_files = 0;
    for (const auto& rows : index_rows)
        for (const auto& r : rows) {
            idx << r << '\n';
            ++n_files;
        }
    write_text((std::filesystem::path(f.outdir) / ("fig" + std::to_string(f.id) + "_index.csv")).string(), idx.str());
    out << "wrote " << n_files << " curves to " << f.outdir << std::endl;
    return kOk;
}

int cmd_localized(const LocalizedFlags& f, std::ostream& out) {
    const auto sd = SpectralDensity::with_relative_coupling(f.s, f.eta_rel, f.omega_c);
    sd.validate();
    char buf[160];
    std::snprintf(buf, sizeof buf, "s = %g, omega_c = %g omega0\n", f.s, f.omega_c);
    out << buf;
    std::snprintf(buf, sizeof buf, "eta_c = %.4f\neta = %.6g (%.6g eta_c)\n", critical_coupling(sd), sd.eta,
                  f.eta_rel);
    out << buf;
    const auto mode = localized_mode(sd);
    if (!mode) {
        out << "no localized mode (\xCE\xB7 \xE2\x89\xA4 \xCE\xB7_c)\n";
        return kOk;
    }
    std::snprintf(buf, sizeof buf, "omega_b/omega0 = %.10g\nZ = %.10g\npole residual = %.3e\n", mode->omega_b,
                  mode->residue_z, mode->pole_residual);
    out << buf;
    return kOk;
}

int cmd_validate(bool quick, bool inject, std::ostream& out) {
    fault::set_lamb_shift_sign_flip(inject);
    const auto results = run_validation(quick, out);
    fault::set_lamb_shift_sign_flip(false);
    std::size_t failed = 0;
    for (const auto& r : results) failed += r.pass ? 0 : 1;
    out << (failed ? "FAILED " : "OK ") << results.size() - failed << "/" << results.size() << " checks passed"
        << std::endl;
    return failed ? kValidationFailed : kOk;
}

// Splices the flags stored in a CSV's run record in place of `--record FILE`,
// so that flags given after it still win.
std::vector<std::string> expand_record(const std::vector<std::string>& args) {
    std::vector<std::string> out;
    for (std::size_t i = 0; i < args.size(); ++i) {
        std::string path;
        if (args[i] == "--record") {
            if (i + 1 >= args.size()) throw CLI::ArgumentMismatch("--record needs a file");
            path = args[++i];
        } else if (args[i].rfind("--record=", 0) == 0) {
            path = args[i].substr(9);
        } else {
            out.push_back(args[i]);
            continue;
        }
        for (auto& a : read_record_flags(path)) out.push_back(std::move(a));
    }
    return out;
}

}  // namespace

int run_cli(const std::vector<std::string>& raw_args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Exact and Markov two-time correlators of a damped bosonic mode, and the non-Markovianity N(t, tau)",
                 "nmcorr"};
    app.set_version_flag("--version", NMCORR_VERSION);
    app.require_subcommand(1);
    app.option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);

    CurveFlags cf;
    auto* curve = app.add_subcommand("curve", "N(t, tau) and the coherences on one parameter set, as CSV");
    curve->add_option("--s", cf.s, "Spectral exponent s")->capture_default_str();
    curve->add_option("--eta-rel", cf.eta_rel, "Coupling in units of eta_c")->capture_default_str();
    curve->add_option("--omega-c", cf.omega_c, "Cutoff in units of omega0")->capture_default_str();
    auto* tk = curve->add_option("--temp-k", cf.temp_k, "Temperature in kelvin (default 0.5)");
    auto* th = curve->add_option("--theta", cf.theta, "Temperature as k_B T / (hbar omega0)");
    tk->excludes(th);
    curve->add_option("--n0", cf.n0, "Initial occupation n(0)")->capture_default_str();
    curve->add_option("--t", cf.t, "First time t, units of 1/omega0")->capture_default_str();
    curve->add_option("--tau-max", cf.tau_max, "Largest delay, units of 1/omega0")->capture_default_str();
    curve->add_option("--points", cf.points, "Number of tau intervals")->capture_default_str();
    curve->add_flag("--nprime", cf.nprime, "Add the N' = |1 - C_qrt / C_exact| column");
    curve->add_option("--out,-o", cf.out, "Output CSV ('-' for stdout)")->capture_default_str();
    curve->add_option("--svg", cf.svg, "Also write an SVG chart to this path");
    curve->add_option("--record", cf.record, "Replay the run record of an earlier CSV");
    add_unit_flags(curve, cf.units);

    FigFlags ff;
    auto* fig = app.add_subcommand("fig", "All curves of figure 1, 2 or 3 as CSV files plus an index");
    fig->add_option("id", ff.id, "Figure number")->required()->check(CLI::IsMember({1, 2, 3}));
    fig->add_option("--outdir", ff.outdir, "Output directory")->capture_default_str();
    fig->add_option("--tau-max", ff.tau_max, "Largest delay, units of 1/omega0")->capture_default_str();
    fig->add_option("--points", ff.points, "Number of tau intervals")->capture_default_str();
    fig->add_option("--jobs,-j", ff.jobs, "Worker threads (0 = available parallelism)")->capture_default_str();
    fig->add_flag("--svg", ff.svg, "Also write one SVG chart per panel");
    fig->add_flag("--nprime", ff.nprime, "Add the N' column");
    add_unit_flags(fig, ff.units);

    LocalizedFlags lf;
    auto* loc = app.add_subcommand("localized", "Critical coupling and the localized mode");
    loc->add_option("--s", lf.s, "Spectral exponent s")->capture_default_str();
    loc->add_option("--eta-rel", lf.eta_rel, "Coupling in units of eta_c")->capture_default_str();
    loc->add_option("--omega-c", lf.omega_c, "Cutoff in units of omega0")->capture_default_str();

    bool quick = false, inject = false;
    auto* val = app.add_subcommand("validate", "Run the cross-oracle checks; exit 1 if any fails");
    val->add_flag("--quick", quick, "Cheap subset only");
    val->add_flag("--inject-lamb-sign-error", inject, "Negate the Lamb shift (mutation test)")->group("");

    try {
        std::vector<std::string> args = expand_record(raw_args);
        std::vector<std::string> rev(args.rbegin(), args.rend());
        app.parse(rev);
        if (curve->parsed()) return cmd_curve(cf, raw_args, out);
        if (fig->parsed()) return cmd_fig(ff, raw_args, out);
        if (loc->parsed()) return cmd_localized(lf, out);
        if (val->parsed()) return cmd_validate(quick, inject, out);
        return kUsage;
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kOk : kUsage;
    } catch (const NumericalError& e) {
        err << "numerical failure: " << e.what() << std::endl;
        return kNumerical;
    } catch (const std::invalid_argument& e) {
        err << "invalid input: " << e.what() << std::endl;
        return kUsage;
    } catch (const std::domain_error& e) {
        err << "invalid input: " << e.what() << std::endl;
        return kUsage;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << std::endl;
        return kNumerical;
    }
}

}  // namespace nmcorr::cli
