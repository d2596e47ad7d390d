// Command-line front end: runs the protocol sweeps, waveform traces and
// circuit comparisons, and writes CSV (and optionally SVG) files.

#include "fgstdp/calibration.hpp"
#include "fgstdp/circuit.hpp"
#include "fgstdp/config_io.hpp"
#include "fgstdp/csv.hpp"
#include "fgstdp/errors.hpp"
#include "fgstdp/plot.hpp"
#include "fgstdp/protocols.hpp"

#include <CLI11.hpp>
#include <fmt/format.h>

#include <algorithm>
#include <cstdio>
#include <map>
#include <optional>
#include <string>
#include <vector>

using namespace fgstdp;

namespace {

enum Exit { ok = 0, validation = 1, runtime = 2, io = 3 };

struct Options {
    std::string config;
    std::string mode = "all";
    std::string out;
    bool plot = false;
    bool trace = false;
    unsigned workers = 0;
};

/// Files are collected first and written once every run has finished.
class Outputs {
public:
    explicit Outputs(std::filesystem::path dir) : dir_(std::move(dir)) {}

    void add(const std::string& name, std::string text) { files_[name] = std::move(text); }

    void flush() const {
        ensure_writable_dir(dir_);
        for (const auto& [name, text] : files_) {
            write_text_file(dir_ / name, text);
            fmt::print("wrote {}\n", (dir_ / name).string());
        }
    }

private:
    std::filesystem::path dir_;
    std::map<std::string, std::string> files_;
};

struct Context {
    RunConfig cfg;
    Options opt;
    RunOptions run;

    std::vector<DrainMode> modes() const {
        if (opt.mode == "all") {
            return {DrainMode::doublet_flat, DrainMode::single_pulsed, DrainMode::double_pulsed};
        }
        return {drain_mode_from_string(opt.mode)};
    }

    /// The configured sweep if it is of this kind, else the fallback.
    ProtocolSpec sweep(ProtocolKind kind, ProtocolSpec fallback) const {
        if (cfg.protocol && cfg.protocol->kind == kind) return *cfg.protocol;
        return fallback;
    }
};

std::string mode_tag(DrainMode m) {
    switch (m) {
    case DrainMode::doublet_flat: return "flat";
    case DrainMode::single_pulsed: return "single";
    case DrainMode::double_pulsed: return "double";
    }
    return "?";
}

double x_of(ProtocolKind kind, const ProtocolRow& row, std::size_t index) {
    switch (kind) {
    case ProtocolKind::window: return row.point.dt1 * 1e3;
    case ProtocolKind::quadruplet: return row.point.T * 1e3;
    case ProtocolKind::frequency: return row.point.rho;
    default: return static_cast<double>(index);
    }
}

PlotSpec rows_plot(std::string title, std::string x_label, ProtocolKind kind,
                   const std::vector<ProtocolRow>& rows, bool line) {
    PlotSpec plot{std::move(title), std::move(x_label), "weight change (%)", {}};
    PlotSeries fg{"FG", {}, {}, true, line}, d{"D-STDP", {}, {}, true, line},
        t{"T-STDP", {}, {}, true, line};
    for (std::size_t i = 0; i < rows.size(); ++i) {
        const double x = x_of(kind, rows[i], i);
        fg.x.push_back(x);
        fg.y.push_back(rows[i].dw_fg_pct);
        d.x.push_back(x);
        d.y.push_back(rows[i].dw_dstdp_pct);
        t.x.push_back(x);
        t.y.push_back(rows[i].dw_tstdp_pct);
    }
    plot.series = {fg, d, t};
    return plot;
}

/// Node traces of one repetition of the first point of a sweep.
void add_trace(Outputs& out, const std::string& name, ProtocolSpec spec,
               const WaveformConfig& w, TripletAmplitudeParams amp, const Context& ctx) {
    EngineOptions eo = ctx.run.engine;
    eo.trace_period = 20e-6;
    amp.r = spec.compression_r;
    spec.reps = spec.kind == ProtocolKind::frequency ? std::min(spec.reps, 3) : 1;
    const RunResult res = integrate(build_schedule(spec, 0), w, amp, ctx.cfg.device, eo);
    out.add(name, trace_csv(res.traces));
}

int cmd_window(const Context& ctx) {
    const ProtocolSpec spec = ctx.sweep(ProtocolKind::window, ProtocolSpec::default_window());
    spec.validate();
    const auto rows = run_protocol(spec, ctx.cfg.waveform, ctx.cfg.amplitudes, ctx.cfg.device, {},
                                   ctx.run);
    std::vector<WindowPoint> pts;
    for (const auto& r : rows) pts.push_back({r.point.dt1, r.dw_fg_pct});
    const WindowReport rep = summarize_window(pts);
    const TheoryParams theory;
    std::string text = fmt::format(
        "A+_fg = {:.5f} %\ntau+_fg = {:.4f} ms\nA-_fg = {:.5f} %\ntau-_fg = {:.4f} ms\n"
        "excluded points = {}\nsign changes = {}\ncompression r = tau+ / tau+_fg = {:.4f}\n",
        rep.potentiation.amplitude, rep.potentiation.tau * 1e3, rep.depression.amplitude,
        rep.depression.tau * 1e3, rep.excluded, rep.sign_changes,
        compression_factor(theory.dstdp.tau_plus, rep.potentiation.tau));
    fmt::print("{}", text);

    Outputs out(ctx.cfg.output.dir);
    out.add("window.csv", protocol_csv_header() + protocol_csv_rows(spec.kind, rows));
    out.add("window_fit.txt", std::move(text));
    if (ctx.cfg.output.plot) {
        out.add("window.svg",
                render_svg(rows_plot("Learning window", "dt (ms)", spec.kind, rows, true)));
    }
    if (ctx.cfg.output.trace) {
        add_trace(out, "window_trace.csv", spec, ctx.cfg.waveform,
                  ctx.cfg.amplitudes, ctx);
    }
    out.flush();
    return ok;
}

/// Shared driver for the triplet, quadruplet and frequency commands.
int cmd_sweeps(const Context& ctx, const std::string& name, ProtocolKind setup_kind,
               const std::vector<ProtocolSpec>& specs, const std::string& x_label, bool line) {
    Outputs out(ctx.cfg.output.dir);
    for (const auto& spec : specs) spec.validate();
    for (DrainMode mode : ctx.modes()) {
        const ProtocolSetup setup = protocol_setup(setup_kind, mode, ctx.cfg.waveform, ctx.cfg.amplitudes);
        std::string csv = protocol_csv_header();
        std::vector<PlotSeries> series;
        for (const auto& spec : specs) {
            const auto rows = run_protocol(spec, setup.waveform, setup.amplitudes, ctx.cfg.device,
                                           setup.theory, ctx.run);
            csv += protocol_csv_rows(spec.kind, rows);
            for (const auto& r : rows) {
                fmt::print("{:<7} {:<11} {:<20} fg {:9.4f}  dstdp {:9.4f}  tstdp {:9.4f}\n",
                           mode_tag(mode), to_string(spec.kind), r.point.label(spec.kind),
                           r.dw_fg_pct, r.dw_dstdp_pct, r.dw_tstdp_pct);
            }
            auto plot = rows_plot("", x_label, spec.kind, rows, line);
            for (auto& s : plot.series) {
                if (specs.size() > 1) {
                    s.name += spec.kind == ProtocolKind::frequency
                                  ? fmt::format(" dt={:g}ms", spec.points.front().dt1 * 1e3)
                                  : fmt::format(" {}", to_string(spec.kind));
                }
                series.push_back(std::move(s));
            }
        }
        const std::string tag = mode_tag(mode);
        out.add(fmt::format("{}_{}.csv", name, tag), std::move(csv));
        if (ctx.cfg.output.plot) {
            PlotSpec plot{fmt::format("{} ({})", name, to_string(mode)), x_label, "weight change (%)",
                          std::move(series)};
            out.add(fmt::format("{}_{}.svg", name, tag), render_svg(plot));
        }
        if (ctx.cfg.output.trace) {
            add_trace(out, fmt::format("{}_{}_trace.csv", name, tag), specs.front(),
                      setup.waveform, setup.amplitudes, ctx);
        }
    }
    out.flush();
    return ok;
}

int cmd_waveform(const Context& ctx) {
    SpikeSchedule sched;
    if (ctx.cfg.protocol) {
        sched = build_schedule(*ctx.cfg.protocol, 0);
    } else {
        sched.pre = {10e-3};
        sched.post = {20e-3};
        sched.horizon = 0.35;
    }
    Outputs out(ctx.cfg.output.dir);
    for (DrainMode mode : ctx.modes()) {
        WaveformConfig w = ctx.cfg.waveform;
        w.drain_mode = mode;
        EngineOptions eo = ctx.run.engine;
        eo.trace_period = 20e-6;
        const RunResult res = integrate(sched, w, ctx.cfg.amplitudes, ctx.cfg.device, eo);
        fmt::print("{}: dw = {:.6f} %\n", to_string(mode), res.dw_percent);
        out.add(fmt::format("waveform_{}.csv", mode_tag(mode)), trace_csv(res.traces));
        if (ctx.cfg.output.plot) {
            PlotSpec plot{fmt::format("Control waveforms ({})", to_string(mode)), "t (ms)", "V", {}};
            PlotSeries g{"v_g", {}, {}, false, true}, tn{"v_tun_eff", {}, {}, false, true},
                d{"v_d", {}, {}, false, true}, fg{"v_fg", {}, {}, false, true};
            for (const auto& s : res.traces) {
                for (auto* p : {&g, &tn, &d, &fg}) p->x.push_back(s.t * 1e3);
                g.y.push_back(s.v_g);
                tn.y.push_back(s.v_tun_eff);
                d.y.push_back(s.v_d);
                fg.y.push_back(s.v_fg);
            }
            plot.series = {g, tn, d, fg};
            out.add(fmt::format("waveform_{}.svg", mode_tag(mode)), render_svg(plot));
        }
    }
    out.flush();
    return ok;
}

int cmd_circuit(const Context& ctx) {
    TripletAmplitudeParams amp = ctx.cfg.amplitudes;
    amp.r = 1.0;
    std::vector<double> dt2s;
    for (int ms = 2; ms <= 100; ++ms) dt2s.push_back(ms * 1e-3);

    bool single = false, dbl = false;
    for (DrainMode m : ctx.modes()) {
        if (m == DrainMode::single_pulsed) single = true;
        if (m == DrainMode::double_pulsed) dbl = true;
    }
    if (!single && !dbl) throw ValidationError("circuit: --mode must be single, double or all");

    const double C = 1e-12;
    const WaveformConfig& w = ctx.cfg.waveform;
    Outputs out(ctx.cfg.output.dir);
    std::string report;
    auto emit = [&](const std::string& tag, const std::vector<GeneratorComparison>& rows,
                    const std::string& what) {
        const double err = sup_norm_error(rows);
        report += fmt::format("{}: sup-norm error over [2, 100] ms = {:.6f} V ({} points)\n", what,
                              err, rows.size());
        out.add(fmt::format("circuit_{}.csv", tag), circuit_csv(rows));
        if (ctx.cfg.output.plot) {
            PlotSeries ideal{"ideal", {}, {}, false, true}, emu{"emulated", {}, {}, true, false};
            for (const auto& r : rows) {
                ideal.x.push_back(r.dt2 * 1e3);
                ideal.y.push_back(r.ideal);
                emu.x.push_back(r.dt2 * 1e3);
                emu.y.push_back(r.emulated);
            }
            out.add(fmt::format("circuit_{}.svg", tag),
                    render_svg({what, "dt2 (ms)", "drain increment (V)", {ideal, emu}}));
        }
    };
    if (single) {
        const auto g = ScGeneratorParams::from_targets(amp, C, 2e-3, w.V_d_min, w.V_d_init);
        emit("single", compare_single(dt2s, g, amp), "switched-capacitor generator (single)");
    }
    if (dbl) {
        const auto g = RampGeneratorParams::from_targets(amp, C, w.V_d_min, w.V_d_init);
        emit("double", compare_double(dt2s, g, amp), "ramp generator (double)");
    }
    fmt::print("{}", report);
    out.add("circuit_report.txt", std::move(report));
    out.flush();
    return ok;
}

int cmd_calibrate(const Context& ctx) {
    const CalibrationResult res = calibrate_window({}, ctx.cfg.waveform, ctx.cfg.device);
    std::string text;
    for (const auto& line : res.log) text += line + "\n";
    const auto& rep = res.report;
    text += fmt::format("final: A+ = {:.5f} %, tau+ = {:.4f} ms, A- = {:.5f} %, tau- = {:.4f} ms, "
                        "sign changes = {}, evaluations = {}\n",
                        rep.potentiation.amplitude, rep.potentiation.tau * 1e3,
                        rep.depression.amplitude, rep.depression.tau * 1e3, rep.sign_changes,
                        res.evaluations);
    fmt::print("{}", text);
    Outputs out(ctx.cfg.output.dir);
    out.add("calibration_log.txt", std::move(text));
    out.add("calibrated_device.json", device_to_json(res.params));
    out.flush();
    return ok;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Floating-gate triplet STDP synapse simulator"};
    app.require_subcommand(1);
    app.fallthrough();
    Options opt;
    app.add_option("--config", opt.config, "JSON config file (comments allowed)");
    app.add_option("--mode", opt.mode, "Drain mode")
        ->check(CLI::IsMember({"flat", "single", "double", "all"}));
    app.add_option("--out", opt.out, "Output directory (overrides the config)");
    app.add_flag("--plot", opt.plot, "Also write SVG plots");
    app.add_flag("--trace", opt.trace, "Also write node traces of the first sweep point");
    app.add_option("--workers", opt.workers, "Worker threads (0 = hardware concurrency)");

    std::string chosen;
    for (const char* name : {"window", "triplet", "quadruplet", "frequency", "waveform", "circuit",
                             "calibrate"}) {
        app.add_subcommand(name)->callback([&chosen, name] { chosen = name; });
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return validation;
    }

    try {
        Context ctx;
        ctx.opt = opt;
        ctx.cfg = opt.config.empty() ? RunConfig{} : load_config(opt.config);
        if (!opt.out.empty()) ctx.cfg.output.dir = opt.out;
        ctx.cfg.output.plot = ctx.cfg.output.plot || opt.plot;
        ctx.cfg.output.trace = ctx.cfg.output.trace || opt.trace;
        ctx.cfg.validate();
        ctx.run.workers = opt.workers;

        if (chosen == "window") return cmd_window(ctx);
        if (chosen == "triplet") {
            return cmd_sweeps(ctx, "triplet", ProtocolKind::triplet1,
                              {ctx.sweep(ProtocolKind::triplet1, ProtocolSpec::default_triplet1()),
                               ctx.sweep(ProtocolKind::triplet2, ProtocolSpec::default_triplet2())},
                              "point", false);
        }
        if (chosen == "quadruplet") {
            return cmd_sweeps(ctx, "quadruplet", ProtocolKind::quadruplet,
                              {ctx.sweep(ProtocolKind::quadruplet, ProtocolSpec::default_quadruplet())},
                              "T (ms)", true);
        }
        if (chosen == "frequency") {
            std::vector<ProtocolSpec> specs;
            if (ctx.cfg.protocol && ctx.cfg.protocol->kind == ProtocolKind::frequency) {
                specs = {*ctx.cfg.protocol};
            } else {
                specs = {ProtocolSpec::default_frequency(10e-3), ProtocolSpec::default_frequency(-10e-3)};
            }
            return cmd_sweeps(ctx, "frequency", ProtocolKind::frequency, specs, "rho (Hz)", true);
        }
        if (chosen == "waveform") return cmd_waveform(ctx);
        if (chosen == "circuit") return cmd_circuit(ctx);
        if (chosen == "calibrate") return cmd_calibrate(ctx);
        return validation;
    } catch (const ValidationError& e) {
        fmt::print(stderr, "error: {}\n", e.what());
        return validation;
    } catch (const IoError& e) {
        fmt::print(stderr, "I/O error: {}\n", e.what());
        return io;
    } catch (const std::exception& e) {
        fmt::print(stderr, "error: {}\n", e.what());
        return runtime;
    }
}
