// Copyright 2026 The snvtune Authors
// SPDX-License-Identifier: Apache-2.0

#include "snvtune/stabilization.hpp"

#include "snvtune/errors.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace snvtune {

void ScanPlan::validate() const {
    if (n_scans < 1) throw DomainError("scan n_scans must be >= 1");
    if (points < 8) throw DomainError("scan points must be >= 8");
    if (!(half_span_GHz > 0.0)) throw DomainError("scan half_span must be > 0");
    if (!(dwell_s > 0.0)) throw DomainError("scan dwell must be > 0");
}

void StabilizationConfig::validate() const {
    drift.validate();
    lockin.validate();
    pid.validate();
    cr.validate();
    scan.validate();
}

double solve_operating_voltage(const EmitterTuning& tuning, double target, double lo, double hi) {
    double f_lo = tuning.shift(lo) - target;
    double f_hi = tuning.shift(hi) - target;
    if (f_lo == 0.0) return lo;
    if (f_hi == 0.0) return hi;
    if ((f_lo > 0.0) == (f_hi > 0.0)) {
        std::ostringstream os;
        os << "target shift " << target << " GHz is outside the tuning range ["
           << std::min(f_lo, f_hi) + target << ", " << std::max(f_lo, f_hi) + target << "] GHz";
        throw SetupError(os.str());
    }
    for (int it = 0; it < 200 && hi - lo > 1e-12; ++it) {
        const double mid = 0.5 * (lo + hi);
        const double f_mid = tuning.shift(mid) - target;
        if ((f_mid > 0.0) == (f_lo > 0.0)) {
            lo = mid;
            f_lo = f_mid;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

namespace {

class Simulation {
public:
    Simulation(const StabilizationConfig& cfg, const EmitterModel& emitter,
               const DeviceModel& device, std::uint64_t seed)
        : cfg_(cfg),
          emitter_(emitter),
          tuning_(emitter, device),
          drift_(cfg.drift),
          drift_rng_(derive_seed(seed, 1)),
          photon_rng_(derive_seed(seed, 2)) {
        setup(device);
    }

    FeedbackLog run() {
        draw_stationary(drift_, drift_rng_);
        return cfg_.feedback ? run_locked() : run_free();
    }

private:
    void setup(const DeviceModel& device) {
        if (!(cfg_.duration_s > 0.0)) throw SetupError("run duration must be > 0 (empty log)");
        try {
            cfg_.validate();
        } catch (const DomainError& e) {
            throw SetupError(e.what());
        }
        const auto& pid = cfg_.pid;
        if (pid.output_min_V < 0.0 || pid.output_max_V > device.calibration.v_max_V) {
            throw SetupError("PID output range must lie within [0, v_max] of the actuator");
        }
        v_op_ = solve_operating_voltage(tuning_, cfg_.target_shift_GHz, pid.output_min_V,
                                        pid.output_max_V);
        const double slope = tuning_.slope(v_op_);
        if (!(std::abs(slope) > 1e-6)) {
            throw SetupError("tuning slope vanishes at the operating point; choose a biased target");
        }
        direction_ = slope < 0.0 ? 1.0 : -1.0;
        frame_s_ = 1.0 / pid.update_rate_Hz;
        const double worst_frame = cfg_.lockin.probe_duration_s +
                                   cfg_.cr.max_attempts * cfg_.cr.probe_duration_s +
                                   cfg_.scan.dwell_s;
        if (cfg_.feedback && worst_frame > frame_s_) {
            throw SetupError("probe + CR + dwell time exceeds the update period");
        }
        const double scan_time = cfg_.scan.points * (cfg_.feedback ? frame_s_ : cfg_.scan.dwell_s);
        if (scan_time * cfg_.scan.n_scans > cfg_.duration_s) {
            throw SetupError("the requested scans do not fit into the run duration");
        }
        grid_ = detuning_grid(0.0, cfg_.scan.half_span_GHz, std::size_t(cfg_.scan.points));
        target_ = cfg_.target_shift_GHz;
    }

    FeedbackLog new_log() const {
        FeedbackLog log;
        log.feedback = cfg_.feedback;
        log.target_GHz = target_;
        log.operating_voltage_V = v_op_;
        log.scan_detunings_GHz = grid_;
        return log;
    }

    double scan_start(int k) const { return cfg_.duration_s * k / cfg_.scan.n_scans; }

    double draw_counts(double mean) {
        return cfg_.sampling == SamplingMode::poisson
                   ? static_cast<double>(poisson(photon_rng_, mean))
                   : mean;
    }

    void advance(double dt) {
        if (dt > 0.0) step_drift(drift_, dt, drift_rng_);
    }

    void finish_scan(FeedbackLog& log, double start, std::vector<double> counts) {
        const FitResult fit = fit_line(grid_, counts, cfg_.scan.shape);
        log.scans.push_back({start, fit.center_GHz, fit.center_stderr_GHz, fit.fwhm_MHz, fit.converged});
        log.scan_counts.push_back(std::move(counts));
    }

    FeedbackLog run_free() {
        FeedbackLog log = new_log();
        const EmitterState base(emitter_, tuning_, v_op_, 0.0);
        double t = 0.0;
        for (int k = 0; k < cfg_.scan.n_scans; ++k) {
            const double start = std::max(t, scan_start(k));
            advance(start - t);
            t = start;
            std::vector<double> counts;
            counts.reserve(grid_.size());
            for (double d : grid_) {
                EmitterState s = base;
                s.set_drift(drift_.state_GHz);
                counts.push_back(draw_counts(s.rate(target_ + d, v_op_) * cfg_.scan.dwell_s));
                advance(cfg_.scan.dwell_s);
                t += cfg_.scan.dwell_s;
            }
            finish_scan(log, start, std::move(counts));
        }
        return log;
    }

    FeedbackLog run_locked() {
        FeedbackLog log = new_log();
        // Acquisition: the line is located before locking, so the loop starts
        // with the resonance on target at whatever the drift currently is.
        double V = v_op_;
        try {
            V = solve_operating_voltage(tuning_, cfg_.target_shift_GHz - drift_.state_GHz,
                                        cfg_.pid.output_min_V, cfg_.pid.output_max_V);
        } catch (const SetupError&) {
            // Out of reach at this instant: start at the nominal point and let the loop pull in.
        }
        PIDState pid;
        pid.bias_V = V;
        pid.output_V = V;
        Rng* lockin_rng = cfg_.sampling == SamplingMode::poisson ? &photon_rng_ : nullptr;

        const auto frames = static_cast<long long>(std::floor(cfg_.duration_s / frame_s_ + 1e-9));
        log.updates.reserve(static_cast<std::size_t>(frames));
        int scan_index = 0;
        bool scanning = false;
        std::size_t point = 0;
        double scan_t0 = 0.0;
        std::vector<double> counts;

        for (long long i = 0; i < frames; ++i) {
            const double t = static_cast<double>(i) * frame_s_;
            double used = 0.0;
            if (!scanning && scan_index < cfg_.scan.n_scans && t >= scan_start(scan_index) - 1e-9) {
                scanning = true;
                point = 0;
                scan_t0 = t;
                counts.assign(grid_.size(), 0.0);
            }

            EmitterState state(emitter_, tuning_, V, drift_.state_GHz);
            UpdateRecord rec;
            rec.time_s = t;
            rec.true_detuning_GHz = state.resonance() - target_;

            const LockInResult li = lockin_error(state, target_, cfg_.lockin, lockin_rng);
            advance(cfg_.lockin.probe_duration_s);
            used += cfg_.lockin.probe_duration_s;
            state.set_drift(drift_.state_GHz);

            const CRCheckResult cr = cr_check(state, cfg_.cr, target_, photon_rng_, &drift_);
            // cr_check drifted the state between attempts; account for the last probe window.
            advance(cfg_.cr.probe_duration_s);
            used += cr.attempts * cfg_.cr.probe_duration_s;
            state.set_drift(drift_.state_GHz);

            if (scanning && cr.passed) {
                counts[point] = draw_counts(state.rate(target_ + grid_[point], V) * cfg_.scan.dwell_s);
                advance(cfg_.scan.dwell_s);
                used += cfg_.scan.dwell_s;
                if (++point == grid_.size()) {
                    scanning = false;
                    ++scan_index;
                    finish_scan(log, scan_t0, std::move(counts));
                    counts.clear();
                }
            }

            if (li.has_information) {
                V = pid_update(pid, direction_ * li.error, cfg_.pid, frame_s_);
            }
            rec.dc_voltage_V = V;
            rec.error_GHz_estimate = li.error;
            rec.cr_pass = cr.passed;
            rec.cr_attempts = cr.attempts;
            log.updates.push_back(rec);

            advance(frame_s_ - used);
        }
        return log;
    }

    const StabilizationConfig& cfg_;
    const EmitterModel& emitter_;
    EmitterTuning tuning_;
    DriftProcess drift_;
    Rng drift_rng_;
    Rng photon_rng_;
    double v_op_ = 0.0;
    double direction_ = 1.0;
    double frame_s_ = 0.2;
    double target_ = 0.0;
    std::vector<double> grid_;
};

double sample_std(const std::vector<double>& v, double& mean) {
    mean = 0.0;
    if (v.empty()) return 0.0;
    for (double x : v) mean += x;
    mean /= static_cast<double>(v.size());
    if (v.size() < 2) return 0.0;
    double ss = 0.0;
    for (double x : v) ss += (x - mean) * (x - mean);
    return std::sqrt(ss / static_cast<double>(v.size() - 1));
}

}  // namespace

FeedbackLog run_stabilization(const StabilizationConfig& cfg, const EmitterModel& emitter,
                              const DeviceModel& device, std::uint64_t seed) {
    return Simulation(cfg, emitter, device, seed).run();
}

StabilizationSummary summarize(const FeedbackLog& log, LineShape shape) {
    StabilizationSummary s;
    s.n_scans = static_cast<int>(log.scans.size());
    std::vector<double> centers, widths;
    for (const auto& scan : log.scans) {
        if (!scan.converged) continue;
        centers.push_back(scan.fitted_center_GHz);
        widths.push_back(scan.fwhm_MHz);
    }
    s.n_converged = static_cast<int>(centers.size());
    s.center_std_GHz = sample_std(centers, s.center_mean_GHz);
    double mean_width = 0.0;
    (void)sample_std(widths, mean_width);
    s.mean_fwhm_MHz = mean_width;

    if (!log.scan_counts.empty()) {
        std::vector<double> summed(log.scan_detunings_GHz.size(), 0.0);
        for (const auto& row : log.scan_counts) {
            for (std::size_t i = 0; i < row.size(); ++i) summed[i] += row[i];
        }
        const FitResult fit = fit_line(log.scan_detunings_GHz, summed, shape);
        if (fit.converged) {
            s.summed_fwhm_MHz = fit.fwhm_MHz;
            s.summed_fwhm_stderr_MHz = fit.fwhm_stderr_MHz;
        }
    }
    if (!log.updates.empty()) {
        const auto passed = std::count_if(log.updates.begin(), log.updates.end(),
                                          [](const UpdateRecord& u) { return u.cr_pass; });
        s.cr_pass_fraction = static_cast<double>(passed) / static_cast<double>(log.updates.size());
    }
    return s;
}

}  // namespace snvtune
