// waveop: numerical laboratory for long-time Schrodinger evolution with
// slowly decaying potentials on the half-line.
//
// Exit codes: 0 success, 2 configuration error, 3 numerical quality failure.

#include <cmath>
#include <cstdio>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "waveop/artifacts.hpp"
#include "waveop/config.hpp"
#include "waveop/evolution.hpp"
#include "waveop/lab.hpp"
#include "waveop/oscillatory.hpp"
#include "waveop/potential.hpp"
#include "waveop/spectral.hpp"
#include "waveop/transforms.hpp"

namespace {

using namespace waveop;
using nlohmann::json;

std::size_t nodes_for_x(const RadialGrid& g, double x) {
    if (x >= g.x_max) return g.n;
    return std::min<std::size_t>(g.n, static_cast<std::size_t>(std::ceil(x / g.h)));
}

std::size_t packet_keep_nodes(const ExperimentConfig& cfg, double t_max) {
    return nodes_for_x(RadialGrid(cfg.x_max, cfg.n), std::min(cfg.x_max, 2.0 * cfg.b * t_max + 150.0));
}

struct RunContext {
    ExperimentConfig cfg;
    std::size_t threads = 0;
    Potential pot;
    BumpPacket packet;

    explicit RunContext(const ExperimentConfig& c, std::size_t th)
        : cfg(c), threads(th), pot(c.make_potential()),
          packet(wave_packet_from_bump(c.a, c.b, pot.grid)) {}
};

void run_verify_free(ArtifactDir& dir, const RunContext& ctx) {
    const auto& cfg = ctx.cfg;
    const Potential zero = Potential::zero(ctx.pot.grid);
    const auto& pk = ctx.packet;
    json rep = dir.base_json();
    bool ok = true;
    auto record = [&](const std::string& name, double value, double tol, bool pass) {
        json c;
        c["value"] = value;
        c["tolerance"] = tol;
        c["pass"] = pass;
        rep["checks"][name] = c;
        ok = ok && pass;
        std::printf("  [%s] %-34s %.3e (tol %.1e)\n", pass ? "ok" : "FAIL", name.c_str(), value, tol);
    };

    const double t_max = *std::max_element(cfg.t_list.begin(), cfg.t_list.end());

    // packet normalization
    record("packet_unit_norm", std::abs(pk.f.norm() - 1.0), 1e-6, std::abs(pk.f.norm() - 1.0) <= 1e-6);

    // wave limit collapses onto the packet
    const auto band = synthesis_band(zero.grid, cfg.a, cfg.b);
    const auto set = EigenfunctionSet::build(zero, band, packet_keep_nodes(cfg, 0.0), ctx.threads);
    const auto sd = make_spectral_data(zero, set, false);
    const auto wl = build_wave_limit(pk, sd, set, ctx.threads);
    WavePacket diff = pk.f;
    for (std::size_t i = 0; i < set.x_keep; ++i) diff.values[i] -= wl.W.values[i];
    const double werr = diff.norm() / pk.f.norm();
    record("wave_limit_collapse", werr, 1e-3, werr <= 1e-3);

    // free evolution unitarity
    const double drift = std::abs(free_evolve(pk.f, t_max).norm() - pk.f.norm());
    record("free_evolution_norm_drift", drift, 1e-10, drift <= 1e-10);

    // dispersive asymptotic error decreasing in t
    double prev = 1e300;
    bool dec = true;
    json errs = json::array();
    for (double t : cfg.t_list) {
        const double e = distance(free_evolve(pk.f, t), dispersive_profile(pk.profile, zero.grid, t)) /
                         pk.f.norm();
        errs.push_back(e);
        dec = dec && (e < prev);
        prev = e;
    }
    rep["dispersive_error"] = errs;
    record("dispersive_error_decreasing", dec ? 1.0 : 0.0, 1.0, dec);

    // modified evolution with q = 0 is the dispersive profile
    const double t_mid = cfg.t_list[cfg.t_list.size() / 2];
    const double mderr = distance(modified_free(pk, zero, t_mid),
                                  dispersive_profile(pk.profile, zero.grid, t_mid));
    record("modified_free_reduces", mderr, 1e-14, mderr <= 1e-14);

    // jm == 1 for the free problem
    double jmerr = 0.0;
    for (double k : {0.5 * (cfg.a + cfg.b), cfg.b}) {
        const auto lim = jost_limit(extract_jost(solve_regular(zero, k), zero), zero.grid);
        jmerr = std::max(jmerr, std::abs(lim.value - cplx{1.0, 0.0}));
    }
    record("free_jost_identity", jmerr, 1e-8, jmerr <= 1e-8);

    rep["pass"] = ok;
    dir.write_json("verify_free.json", rep);
    if (!ok) throw QualityError("verify-free: free-case regression checks failed");
}

void run_spectral_scan(ArtifactDir& dir, const RunContext& ctx) {
    const auto& cfg = ctx.cfg;
    const MomentumGrid kg(cfg.k_min, cfg.k_max, cfg.m);
    const auto set = EigenfunctionSet::build(ctx.pot, kg, 0, ctx.threads);
    const auto sd = make_spectral_data(ctx.pot, set, true);
    std::vector<std::vector<double>> rows;
    rows.reserve(kg.m);
    for (std::size_t j = 0; j < kg.m; ++j)
        rows.push_back({kg.node(j), kg.energy(j), sd.jm[j].real(), sd.jm[j].imag(), sd.mu[j],
                        sd.jm_residual[j]});
    dir.write_csv("spectral.csv", {"k", "E", "re_jm", "im_jm", "mu", "residual"}, rows);

    json bj = dir.base_json();
    bj["theta"] = "full positive axis (no singular part)";
    bj["bound_states"] = json::array();
    for (const auto& bs : sd.bound) {
        json b;
        b["kappa"] = bs.kappa;
        b["energy"] = -bs.kappa * bs.kappa;
        bj["bound_states"].push_back(b);
    }
    dir.write_json("boundstates.json", bj);
    std::printf("  spectral scan: %zu k-nodes, %zu bound state(s)\n", kg.m, sd.bound.size());
}

void run_theorem(ArtifactDir& dir, const RunContext& ctx) {
    const auto& cfg = ctx.cfg;
    const double t_max = *std::max_element(cfg.t_list.begin(), cfg.t_list.end());
    const auto band = synthesis_band(ctx.pot.grid, cfg.a, cfg.b);
    const auto set = EigenfunctionSet::build(ctx.pot, band, packet_keep_nodes(cfg, t_max), ctx.threads);
    const auto sd = make_spectral_data(ctx.pot, set, true);
    const auto rep = cesaro_discrepancy(ctx.packet, ctx.pot, sd, set, cfg.t_list,
                                        cfg.nodes_per_horizon, ctx.threads);

    std::vector<std::vector<double>> rows;
    for (std::size_t i = 0; i < rep.horizons.size(); ++i)
        rows.push_back({rep.horizons[i], rep.cesaro[i], rep.cesaro_dyadic[i]});
    dir.write_csv("theorem.csv", {"T", "cesaro", "cesaro_dyadic"}, rows);

    json j = dir.base_json();
    j["potential"] = {{"family", family_name(ctx.pot.family)},
                      {"c", ctx.pot.params.c},
                      {"alpha", ctx.pot.params.alpha},
                      {"omega", ctx.pot.params.omega},
                      {"v0", ctx.pot.params.v0},
                      {"len", ctx.pot.params.len},
                      {"x0", ctx.pot.params.x0},
                      {"w", ctx.pot.params.w}};
    j["packet"] = {{"a", cfg.a}, {"b", cfg.b}};
    j["grid"] = {{"x_max", cfg.x_max}, {"n", cfg.n}};
    j["synthesis_band"] = {{"k_min", band.k_min}, {"k_max", band.k_max}, {"m", band.m}};
    j["norm_f_sq"] = rep.norm_f_sq;
    j["norm_W_sq"] = rep.norm_W_sq;
    j["unresolved_mass"] = rep.unresolved_mass;
    j["horizons"] = rep.horizons;
    j["cesaro"] = rep.cesaro;
    j["cesaro_dyadic"] = rep.cesaro_dyadic;
    for (std::size_t i = 0; i < rep.horizons.size(); ++i) {
        json curve;
        curve["T"] = rep.horizons[i];
        curve["t"] = rep.t_nodes[i];
        curve["discrepancy"] = rep.discrepancy[i];
        j["curves"].push_back(curve);
    }
    dir.write_json("theorem.json", j);
    if (cfg.svg) dir.write_curve_svg("cesaro.svg", "Cesaro discrepancy vs horizon T", rep.horizons, rep.cesaro);

    for (std::size_t i = 0; i < rep.horizons.size(); ++i)
        std::printf("  T = %7.2f   cesaro = %.6f   dyadic = %.6f\n", rep.horizons[i], rep.cesaro[i],
                    rep.cesaro_dyadic[i]);
}

void run_lemma1(ArtifactDir& dir, const RunContext& ctx) {
    const auto& cfg = ctx.cfg;
    const auto F = bump_smooth_profile(cfg.a, cfg.b);
    const std::vector<double> ts{4.0, 16.0, 64.0, 256.0};
    const std::vector<double> ks{0.5 * cfg.a, cfg.a, 0.5 * (cfg.a + cfg.b)};
    const auto scan = lemma1_scan(F, ts, ks);
    std::vector<std::vector<double>> rows;
    for (const auto& e : scan.entries) rows.push_back({e.t, e.k, e.x, e.lhs, e.bound, e.ratio});
    dir.write_csv("lemma1.csv", {"t", "k", "x", "lhs", "bound", "ratio"}, rows);
    json j = dir.base_json();
    j["t_values"] = scan.t_values;
    j["fitted_per_t"] = scan.fitted;
    j["fitted_constant"] = scan.fitted_constant;
    j["stability"] = scan.stability;
    dir.write_json("lemma1.json", j);
    std::printf("  lemma1: fitted constant %.4f, stability (max/min over t) %.3f\n",
                scan.fitted_constant, scan.stability);
}

void run_stationary_phase(ArtifactDir& dir, const RunContext& ctx) {
    const auto& cfg = ctx.cfg;
    const double k = 0.5 * (cfg.a + cfg.b);
    std::vector<double> ts = cfg.diag_t_list;
    ts.push_back(2.0 * *std::max_element(cfg.diag_t_list.begin(), cfg.diag_t_list.end()));
    const auto rows = stationary_phase_check(ctx.packet, k, ts);
    std::vector<std::vector<double>> out;
    for (const auto& r : rows) out.push_back({r.t, r.value.real(), r.value.imag(), r.error});
    dir.write_csv("stationary_phase.csv", {"t", "re_value", "im_value", "error"}, out);
    json j = dir.base_json();
    j["k"] = k;
    j["limit_modulus"] = std::abs(ctx.packet.profile(k)) * std::sqrt(std::numbers::pi);
    dir.write_json("stationary_phase.json", j);
    for (const auto& r : rows) std::printf("  t = %7.2f   |error| = %.6e\n", r.t, r.error);
}

void run_low_energy(ArtifactDir& dir, const RunContext& ctx) {
    const auto& cfg = ctx.cfg;
    const double delta = cfg.delta_effective();
    const double t_max = *std::max_element(cfg.diag_t_list.begin(), cfg.diag_t_list.end());
    const double k_top = std::min(cfg.k_max, std::max(std::sqrt(delta) * 1.25, 2.0 * cfg.k_min));
    const std::size_t m_low = std::max<std::size_t>(
        16, static_cast<std::size_t>(std::ceil((k_top - cfg.k_min) / MomentumGrid(cfg.k_min, cfg.k_max, cfg.m).spacing())) + 1);
    const MomentumGrid kg_low(cfg.k_min, k_top, m_low);
    const auto set = EigenfunctionSet::build(ctx.pot, kg_low, packet_keep_nodes(cfg, t_max), ctx.threads);
    const auto sd = make_spectral_data(ctx.pot, set, true);

    std::vector<std::vector<double>> rows;
    for (double t : cfg.diag_t_list)
        rows.push_back({t, delta, low_energy_mass(ctx.packet, ctx.pot, sd, set, t, delta, ctx.threads)});
    dir.write_csv("lowenergy.csv", {"t", "delta", "mass"}, rows);

    const auto overlaps = bound_state_overlaps(ctx.packet, ctx.pot, sd, cfg.diag_t_list);
    std::vector<std::vector<double>> orow;
    for (const auto& r : overlaps) orow.push_back({r.t, static_cast<double>(r.j), r.overlap});
    dir.write_csv("overlaps.csv", {"t", "j", "overlap"}, orow);

    // frequency split diagnostic, downsampled
    const auto fs = split_low_high(ctx.pot);
    const std::size_t stride = std::max<std::size_t>(1, ctx.pot.grid.n / 2048);
    std::vector<std::vector<double>> srow;
    for (std::size_t i = 0; i < ctx.pot.grid.n; i += stride)
        srow.push_back({ctx.pot.grid.node(i), ctx.pot.q[i], fs.q1[i], fs.q2[i], fs.v[i]});
    dir.write_csv("split.csv", {"x", "q", "q1", "q2", "v"}, srow);

    json j = dir.base_json();
    j["delta"] = delta;
    j["bound_states"] = sd.bound.size();
    dir.write_json("lowenergy.json", j);
    for (const auto& r : rows) std::printf("  t = %7.2f   mass(delta=%.4f) = %.6e\n", r[0], delta, r[2]);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"waveop: half-line Schrodinger scattering laboratory"};
    app.fallthrough();
    std::string config_path, out_dir = "out", preset = "default";
    std::size_t threads = 0;
    app.add_option("--config", config_path, "configuration file (key = value lines)");
    app.add_option("--out", out_dir, "output directory (written atomically)");
    app.add_option("--threads", threads, "worker threads (0 = auto)");
    app.add_option("--preset", preset, "base preset: default | quick");
    app.set_version_flag("--version", waveop::tool_version);
    app.require_subcommand(1);

    auto* sc_verify = app.add_subcommand("verify-free", "free-case regression suite");
    auto* sc_scan = app.add_subcommand("spectral-scan", "export spectral density and bound states");
    auto* sc_theorem = app.add_subcommand("theorem", "Cesaro discrepancy report");
    auto* sc_lemma = app.add_subcommand("lemma1", "oscillatory tail bound scan");
    auto* sc_stphase = app.add_subcommand("stationary-phase", "stationary phase limit check");
    auto* sc_lowen = app.add_subcommand("low-energy", "low-energy mass and bound-state overlaps");
    auto* sc_all = app.add_subcommand("all", "run every subcommand into one directory");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        waveop::ExperimentConfig cfg = waveop::preset_config(preset);
        if (!config_path.empty()) cfg = waveop::load_config(config_path, cfg);
        const auto bad = cfg.violations();
        if (!bad.empty()) {
            for (const auto& s : bad) std::fprintf(stderr, "config error: %s\n", s.c_str());
            return 2;
        }

        RunContext ctx(cfg, threads);
        std::string name;
        if (sc_verify->parsed()) name = "verify-free";
        else if (sc_scan->parsed()) name = "spectral-scan";
        else if (sc_theorem->parsed()) name = "theorem";
        else if (sc_lemma->parsed()) name = "lemma1";
        else if (sc_stphase->parsed()) name = "stationary-phase";
        else if (sc_lowen->parsed()) name = "low-energy";
        else if (sc_all->parsed()) name = "all";

        waveop::ArtifactDir dir(out_dir, cfg, name);
        std::printf("waveop %s  (config %s)\n", name.c_str(), waveop::config_hash(cfg).c_str());
        if (sc_verify->parsed() || sc_all->parsed()) run_verify_free(dir, ctx);
        if (sc_scan->parsed() || sc_all->parsed()) run_spectral_scan(dir, ctx);
        if (sc_theorem->parsed() || sc_all->parsed()) run_theorem(dir, ctx);
        if (sc_lemma->parsed() || sc_all->parsed()) run_lemma1(dir, ctx);
        if (sc_stphase->parsed() || sc_all->parsed()) run_stationary_phase(dir, ctx);
        if (sc_lowen->parsed() || sc_all->parsed()) run_low_energy(dir, ctx);
        dir.commit();
        std::printf("artifacts written to %s\n", out_dir.c_str());
        return 0;
    } catch (const waveop::QualityError& e) {
        std::fprintf(stderr, "numerical quality failure: %s\n", e.what());
        return 3;
    } catch (const std::invalid_argument& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return 2;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
}
