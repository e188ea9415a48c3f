// Copyright 2026 The snvtune Authors
// SPDX-License-Identifier: Apache-2.0

// Acceptance run: one PASS/FAIL line per criterion, nonzero exit on any failure.

#include "snvtune/commands.hpp"
#include "snvtune/config.hpp"
#include "snvtune/control.hpp"
#include "snvtune/errors.hpp"
#include "snvtune/fit.hpp"
#include "snvtune/geometry.hpp"
#include "snvtune/inhomogeneous.hpp"
#include "snvtune/io.hpp"
#include "snvtune/lineshape.hpp"
#include "snvtune/spectroscopy.hpp"
#include "snvtune/stabilization.hpp"
#include "snvtune/strain.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <functional>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include <unistd.h>

using namespace snvtune;
namespace fs = std::filesystem;

namespace {

const fs::path kSourceDir(SNVTUNE_SOURCE_DIR);
const fs::path kConfigDir = kSourceDir / "configs";

struct Outcome {
    bool pass = false;
    std::string detail;
};

RunConfig default_config() {
    return parse_config(load_config_json(kConfigDir / "default.json"), kConfigDir);
}

std::string fmt(const char* f, double a, double b = 0.0, double c = 0.0) {
    char buf[256];
    std::snprintf(buf, sizeof buf, f, a, b, c);
    return buf;
}

StrainTensor random_tensor(Rng& rng, double scale) {
    std::uniform_real_distribution<double> u(-scale, scale);
    return {u(rng), u(rng), u(rng), u(rng), u(rng), u(rng), Frame::defect};
}

StrainSusceptibilities random_susc(Rng& rng) {
    std::uniform_real_distribution<double> u(-2e6, 2e6);
    return {u(rng), u(rng), u(rng), u(rng)};
}

Outcome eigen_oracle() {
    Rng rng(1);
    std::uniform_real_distribution<double> lam(10.0, 3000.0);
    double worst = 0.0;
    for (int i = 0; i < 1000; ++i) {
        const auto ir = irreducible_components(random_tensor(rng, 1e-3), random_susc(rng));
        const double l = lam(rng);
        Eigen::SelfAdjointEigenSolver<Eigen::Matrix2cd> es(strain_matrix(ir, l));
        const double gap = es.eigenvalues()[1] - es.eigenvalues()[0];
        worst = std::max(worst, std::abs(doublet_splitting(ir, l) - gap) / gap);
    }
    return {worst < 1e-10, fmt("max relative error %.2e over 1000 tensors", worst)};
}

Outcome zero_strain() {
    const auto cfg = default_config();
    const auto& ph = cfg.physics;
    const auto zero = StrainTensor::zero(Frame::defect);
    const auto r = level_response(irreducible_components(zero, ph.ground), irreducible_components(zero, ph.excited),
                                  ph.spin_orbit, ph.nu0_GHz);
    const bool ok = r.delta_g == ph.spin_orbit.lambda_g && r.delta_u == ph.spin_orbit.lambda_u && r.nu_zpl == ph.nu0_GHz;
    return {ok, fmt("delta_g %.6f GHz, delta_u %.6f GHz, nu_zpl %.6f GHz", r.delta_g, r.delta_u, r.nu_zpl)};
}

Outcome rotation_invariants() {
    Rng rng(2);
    double worst = 0.0;
    for (int i = 0; i < 1000; ++i) {
        const StrainTensor t = random_tensor(rng, 1e-3);
        std::normal_distribution<double> n(0.0, 1.0);
        const Eigen::Quaterniond q = Eigen::Quaterniond(n(rng), n(rng), n(rng), n(rng)).normalized();
        const StrainTensor r = rotate_strain(t, RotationMatrix(q.toRotationMatrix()), Frame::defect);
        worst = std::max(worst, std::abs(r.trace() - t.trace()));
        Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> a(t.matrix()), b(r.matrix());
        worst = std::max(worst, (a.eigenvalues() - b.eigenvalues()).cwiseAbs().maxCoeff());
    }
    // Equivalent in-plane defect axes differ by 120 degree turns about the symmetry axis.
    const auto cfg = default_config();
    const auto& ph = cfg.physics;
    double worst_split = 0.0;
    for (int i = 0; i < 1000; ++i) {
        const StrainTensor t = random_tensor(rng, 1e-3);
        for (int k = 1; k <= 2; ++k) {
            const StrainTensor r =
                rotate_strain(t, rotation_about_z(2.0 * std::numbers::pi * k / 3.0), Frame::defect);
            for (const auto* s : {&ph.ground, &ph.excited}) {
                const double lam = s == &ph.ground ? ph.spin_orbit.lambda_g : ph.spin_orbit.lambda_u;
                const double a = doublet_splitting(irreducible_components(t, *s), lam);
                const double b = doublet_splitting(irreducible_components(r, *s), lam);
                worst_split = std::max(worst_split, std::abs(a - b) / a);
            }
        }
    }
    return {worst < 1e-10 && worst_split < 1e-10,
            fmt("max invariant error %.2e, max relative splitting change %.2e", worst, worst_split)};
}

Outcome actuator_calibration() {
    const auto cfg = default_config();
    const auto& g = cfg.device.geometry;
    const BeamPosition top{0.0, 0.0, 0.5 * g.h_waveguide_um};
    const double e75 = strain_at(cfg.device, top, 75.0).xx();
    const BeamPosition inner{0.2 * g.l_waveguide_um, 0.0, 0.25 * g.h_waveguide_um};
    const double ratio = strain_at(cfg.device, inner, 60.0).xx() / strain_at(cfg.device, inner, 30.0).xx();
    const bool ok = std::abs(e75 - 7e-5) < 1e-9 && std::abs(ratio - 4.0) < 1e-10;
    return {ok, fmt("eps_xx(75 V) = %.6e, strain ratio 60 V / 30 V = %.12f", e75, ratio)};
}

Outcome orientation_contrast() {
    const auto cfg = default_config();
    double min_axial = INFINITY, max_transversal = 0.0;
    const double v = cfg.device.calibration.v_max_V;
    bool ratio_ok = true;
    for (int i = 1; i <= 18; ++i) {
        const double V = v * i / 18.0;
        double ax = INFINITY, tr = 0.0;
        for (const auto& e : cfg.emitters) {
            if (e.in_bulk() || std::abs(e.position->x_um) > 1e-9) continue;  // hinge emitters only
            const double s = std::abs(EmitterTuning(e, cfg.device).shift(V));
            if (classify(e.orientation) == OrientationClass::axial) ax = std::min(ax, s);
            else tr = std::max(tr, s);
        }
        ratio_ok = ratio_ok && ax >= 5.0 * tr;
        if (i == 18) {
            min_axial = ax;
            max_transversal = tr;
        }
    }
    const bool ok = ratio_ok && min_axial >= 40.0 && max_transversal > 0.0;
    return {ok, fmt("at v_max: axial %.3f GHz, transversal %.3f GHz, ratio %.2f", min_axial, max_transversal,
                    min_axial / max_transversal)};
}

double slope_of(const std::vector<double>& x, const std::vector<double>& y) {
    const double n = static_cast<double>(x.size());
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        mx += x[i] / n;
        my += y[i] / n;
    }
    double sxy = 0.0, sxx = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxy += (x[i] - mx) * (y[i] - my);
        sxx += (x[i] - mx) * (x[i] - mx);
    }
    return sxy / sxx;
}

Outcome linewidth_closure() {
    const auto cfg = default_config();
    EmitterModel e = cfg.emitter("A1");
    e.broadening_slope_MHz_per_GHz = 3.42;
    const EmitterTuning t(e, cfg.device);
    std::vector<double> shift, fwhm;
    for (int i = 0; i <= 18; ++i) {
        const double V = 5.0 * i;
        const auto scan = simulate_ple(e, cfg.device, V, detuning_grid(t.shift(V), 2.0, 201), 0.05,
                                       derive_seed(cfg.seed, std::uint64_t(i)));
        const auto fit = fit_line(scan, LineShape::lorentzian);
        if (!fit.converged) return {false, fmt("fit failed at %.0f V", V)};
        shift.push_back(std::abs(fit.center_GHz));
        fwhm.push_back(fit.fwhm_MHz);
    }
    const double s = slope_of(shift, fwhm);
    return {std::abs(s - 3.42) / 3.42 < 0.05, fmt("regressed slope %.3f MHz/GHz (set 3.42)", s)};
}

struct FamilyResult {
    std::vector<double> stds;
    double pooled = 0.0;
};

FamilyResult run_family(bool feedback) {
    const auto cfg = default_config();
    StabilizationConfig c = cfg.control;
    c.feedback = feedback;
    c.duration_s = 7.0 * 3600.0;
    const auto& e = cfg.emitter(cfg.stabilize.emitter_id);
    FamilyResult out;
    const int n = std::max(cfg.stabilize.seeds, 10);
    for (int i = 0; i < n; ++i) {
        const auto log = run_stabilization(c, e, cfg.device, derive_seed(cfg.seed, std::uint64_t(i)));
        const double s = summarize(log, c.scan.shape).center_std_GHz;
        out.stds.push_back(s);
        out.pooled += s * s;
    }
    out.pooled = std::sqrt(out.pooled / n);
    return out;
}

Outcome free_running() {
    const auto r = run_family(false);
    const auto [lo, hi] = std::minmax_element(r.stds.begin(), r.stds.end());
    return {std::abs(r.pooled - 1.38) <= 0.15 * 1.38,
            fmt("pooled std over %.0f seeds %.3f GHz (single runs %.2f..", double(r.stds.size()), r.pooled, *lo) +
                fmt("%.2f GHz)", *hi)};
}

Outcome stabilization_ratio() {
    const auto r = run_family(true);
    const double worst = *std::max_element(r.stds.begin(), r.stds.end());
    return {worst <= 1.38 / 12.0,
            fmt("worst of %.0f seeds %.1f MHz, pooled %.1f MHz", double(r.stds.size()), 1e3 * worst, 1e3 * r.pooled)};
}

Outcome lockin() {
    const auto cfg = default_config();
    const auto& e = cfg.emitter("A1");
    const EmitterTuning t(e, cfg.device);
    const LockInConfig li = cfg.control.lockin;
    const double V = solve_operating_voltage(t, cfg.control.target_shift_GHz, 0.0, cfg.device.calibration.v_max_V);
    const EmitterState st(e, t, V, 0.0);
    const double fwhm = 1e-3 * st.fwhm_MHz();

    // Continuous-phase quadrature of the modulated Lorentzian.
    auto signal = [&](double d) {
        const int m = 20000;
        double acc = 0.0;
        for (int i = 0; i < m; ++i) {
            const double ph = 2.0 * std::numbers::pi * (i + 0.5) / m;
            const double res = t.shift(V + li.mod_amp_V * std::sin(ph)) - t.shift(V) + d;
            acc += (e.peak_rate_cps * lorentzian(res, fwhm) + e.background_rate_cps) * std::sin(ph);
        }
        return acc / m * li.probe_duration_s;
    };
    const double h = 1e-4 * fwhm;
    const double sens = (signal(h) - signal(-h)) / (2.0 * h);

    const double at_zero = std::abs(lockin_error(st, st.resonance(), li, nullptr).error);
    double worst_rel = 0.0, worst_oracle = 0.0, worst_odd = 0.0;
    for (double frac : {0.01, 0.05, 0.1, 0.15, 0.2, 0.25}) {
        const double d = frac * fwhm;
        const double plus = lockin_error(st, st.resonance() - d, li, nullptr).error;
        const double minus = lockin_error(st, st.resonance() + d, li, nullptr).error;
        worst_odd = std::max(worst_odd, std::abs(plus + minus) / d);
        worst_rel = std::max({worst_rel, std::abs(plus - d) / d, std::abs(minus + d) / d});
        worst_oracle = std::max(worst_oracle, std::abs(signal(d) / sens - d) / d);
    }
    const bool ok = at_zero < 1e-8 * fwhm && worst_odd < 1e-6 && worst_rel <= 0.2 && worst_oracle <= 0.2;
    return {ok, fmt("|error| at resonance %.1e GHz, max relative error %.2e, oracle linear error %.3f", at_zero,
                    worst_rel, worst_oracle)};
}

Outcome statistics() {
    Rng rng(10);
    double worst = 0.0;
    bool var_ok = true;
    for (double mean : {1.0, 20.0, 400.0}) {
        double s = 0.0, s2 = 0.0;
        const int n = 10000;
        for (int i = 0; i < n; ++i) {
            const double k = static_cast<double>(poisson(rng, mean));
            s += k;
            s2 += k * k;
        }
        const double m = s / n;
        const double r = (s2 - n * m * m) / (n - 1) / m;
        var_ok = var_ok && r >= 0.9 && r <= 1.1;
        worst = std::max(worst, std::abs(r - 1.0));
    }
    const auto cfg = default_config();
    const auto& e = cfg.emitter("A1");
    const EmitterTuning t(e, cfg.device);
    int hits = 0;
    const int trials = 200;
    for (int i = 0; i < trials; ++i) {
        const double V = 60.0;
        const double truth = t.shift(V);
        const auto scan = simulate_ple(e, cfg.device, V, detuning_grid(truth + 0.3, 2.0, 201), 0.05,
                                       derive_seed(cfg.seed + 10, std::uint64_t(i)));
        const auto fit = fit_line(scan, LineShape::lorentzian);
        const double tol = std::max(3.0 * fit.center_stderr_GHz, 1e-3 * effective_linewidth(e, truth) / 20.0);
        if (fit.converged && std::abs(fit.center_GHz - truth) <= tol) ++hits;
    }
    return {var_ok && hits >= 190,
            fmt("max |var/mean - 1| %.3f, center recovered in %.0f/200 scans", worst, double(hits))};
}

Outcome window_statistic() {
    Rng rng(20260101);
    std::uniform_real_distribution<double> u(-50.0, 50.0);
    InhomogeneousSample s;
    for (int i = 0; i < 1000; ++i) s.resonances_GHz.push_back(u(rng));
    const double f = cdf_and_window(s, 40.0).best_fraction;
    const double sigma = std::sqrt(0.4 * 0.6 / 1000.0);
    return {std::abs(f - 0.4) <= 3.0 * sigma, fmt("best fraction %.3f, 3 sigma = %.4f", f, 3.0 * sigma)};
}

bool same_tree(const fs::path& a, const fs::path& b, std::string& why) {
    std::vector<std::string> names;
    for (const auto& entry : fs::directory_iterator(a)) names.push_back(entry.path().filename().string());
    std::size_t count_b = 0;
    for ([[maybe_unused]] const auto& entry : fs::directory_iterator(b)) ++count_b;
    if (names.empty() || names.size() != count_b) {
        why = "file count differs or empty";
        return false;
    }
    for (const auto& n : names) {
        if (!fs::exists(b / n) || read_text(a / n) != read_text(b / n)) {
            why = n + " differs";
            return false;
        }
    }
    return true;
}

Outcome reproducibility() {
    const fs::path root = fs::temp_directory_path() / ("snvtune_acceptance_" + std::to_string(::getpid()));
    fs::remove_all(root);
    const std::string cli = SNVTUNE_CLI_PATH;
    const std::string config = (kConfigDir / "default.json").string();
    const std::vector<std::pair<std::string, std::string>> verbs{
        {"tune-curve", "tune-curve"},
        {"ple", "ple"},
        {"inhomo", "inhomo"},
        {"inhomo-generated", "inhomo --n 500"},
        {"stabilize", "stabilize --seeds 2 --duration 3600"},
        {"stabilize-open", "stabilize --seeds 2 --duration 3600 --no-feedback"},
        {"calibrate-pulse", "calibrate-pulse"},
    };
    std::string failed;
    for (const auto& [name, args] : verbs) {
        for (const char* run : {"a", "b"}) {
            const fs::path out = root / name / run;
            const std::string cmd = "\"" + cli + "\" --config \"" + config + "\" --out \"" + out.string() + "\" " +
                                    args + " > /dev/null 2>&1";
            if (std::system(cmd.c_str()) != 0) {
                failed += name + " (exit status) ";
                break;
            }
        }
        std::string why;
        if (failed.empty() && !same_tree(root / name / "a", root / name / "b", why)) failed += name + ": " + why + " ";
    }
    fs::remove_all(root);
    return {failed.empty(), failed.empty() ? std::to_string(verbs.size()) + " command runs byte-identical" : failed};
}

}  // namespace

int main() {
    const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
        {"eigen-oracle equivalence", eigen_oracle},
        {"zero-strain limit", zero_strain},
        {"rotation invariants", rotation_invariants},
        {"actuator calibration", actuator_calibration},
        {"orientation contrast", orientation_contrast},
        {"linewidth loop closure", linewidth_closure},
        {"free-running calibration", free_running},
        {"stabilization ratio", stabilization_ratio},
        {"lock-in correctness", lockin},
        {"statistics", statistics},
        {"window statistic", window_statistic},
        {"reproducibility", reproducibility},
    };
    int failures = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        const auto t0 = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = criteria[i].second();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        if (!o.pass) ++failures;
        std::printf("%-4s %2zu %-26s %7.1f s  %s\n", o.pass ? "PASS" : "FAIL", i + 1, criteria[i].first.c_str(), secs,
                    o.detail.c_str());
        std::fflush(stdout);
    }
    std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failures, criteria.size());
    return failures == 0 ? 0 : 1;
}
