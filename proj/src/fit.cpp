// Copyright 2026 The snvtune Authors
// SPDX-License-Identifier: Apache-2.0

#include "snvtune/fit.hpp"

#include "snvtune/errors.hpp"
#include "snvtune/lineshape.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>
#include <vector>

namespace snvtune {

LineShape parse_line_shape(std::string_view text) {
    if (text == "lorentzian") return LineShape::lorentzian;
    if (text == "voigt") return LineShape::voigt;
    throw InputError("unknown line shape '" + std::string(text) + "' (lorentzian|voigt)");
}

namespace {

constexpr double kMinWidth = 1e-6;   // GHz
constexpr double kWeightFloor = 0.5;  // counts

// Parameter layout. Lorentzian: c, wL, A, B. Voigt: c, wL, wG, A, B.
struct Layout {
    LineShape shape;
    [[nodiscard]] int size() const { return shape == LineShape::voigt ? 5 : 4; }
    [[nodiscard]] int amp() const { return shape == LineShape::voigt ? 3 : 2; }
    [[nodiscard]] int bg() const { return shape == LineShape::voigt ? 4 : 3; }
};

void model(const Layout& lay, const Eigen::VectorXd& p, std::span<const double> x,
           Eigen::VectorXd& mu) {
    mu.resize(static_cast<Eigen::Index>(x.size()));
    if (lay.shape == LineShape::lorentzian) {
        for (std::size_t i = 0; i < x.size(); ++i) {
            mu[Eigen::Index(i)] = p[2] * lorentzian(x[i] - p[0], p[1]) + p[3];
        }
        return;
    }
    const PseudoVoigt pv(p[2], p[1]);
    for (std::size_t i = 0; i < x.size(); ++i) {
        mu[Eigen::Index(i)] = p[3] * pv.unit_peak(x[i] - p[0]) + p[4];
    }
}

void project(const Layout& lay, Eigen::VectorXd& p) {
    p[1] = std::max(p[1], kMinWidth);
    if (lay.shape == LineShape::voigt) p[2] = std::max(p[2], kMinWidth);
    p[lay.amp()] = std::max(p[lay.amp()], 0.0);
    p[lay.bg()] = std::max(p[lay.bg()], 0.0);
}

void jacobian(const Layout& lay, const Eigen::VectorXd& p, std::span<const double> x,
              Eigen::MatrixXd& J) {
    const int n = lay.size();
    J.resize(static_cast<Eigen::Index>(x.size()), n);
    const double width = lay.shape == LineShape::voigt ? PseudoVoigt(p[2], p[1]).fwhm() : p[1];
    Eigen::VectorXd up, down;
    for (int j = 0; j < n; ++j) {
        double scale = 1.0;
        if (j == 0 || j == 1 || (lay.shape == LineShape::voigt && j == 2)) scale = width;
        if (j == lay.amp() || j == lay.bg()) scale = std::max({std::abs(p[j]), 1.0});
        const double h = 1e-6 * scale;
        Eigen::VectorXd pu = p, pd = p;
        pu[j] += h;
        pd[j] -= h;
        model(lay, pu, x, up);
        model(lay, pd, x, down);
        J.col(j) = (up - down) / (2.0 * h);
    }
}

struct Problem {
    Layout lay;
    std::span<const double> x;
    Eigen::VectorXd y;
    Eigen::VectorXd w;
};

double cost(const Problem& pr, const Eigen::VectorXd& p) {
    Eigen::VectorXd mu;
    model(pr.lay, p, pr.x, mu);
    return (pr.w.array() * (pr.y - mu).array().square()).sum();
}

// Weighted Levenberg-Marquardt with fixed weights. Returns false if it stalls.
bool levenberg_marquardt(const Problem& pr, Eigen::VectorXd& p, int& iterations) {
    double lambda = 1e-3;
    double c = cost(pr, p);
    Eigen::MatrixXd J;
    Eigen::VectorXd mu;
    for (int it = 0; it < 200; ++it) {
        ++iterations;
        model(pr.lay, p, pr.x, mu);
        jacobian(pr.lay, p, pr.x, J);
        const Eigen::VectorXd r = pr.y - mu;
        const Eigen::MatrixXd H = J.transpose() * pr.w.asDiagonal() * J;
        const Eigen::VectorXd g = J.transpose() * (pr.w.array() * r.array()).matrix();
        bool improved = false;
        for (int attempt = 0; attempt < 20; ++attempt) {
            Eigen::MatrixXd A = H;
            A.diagonal().array() += lambda * (H.diagonal().array() + 1e-12);
            const Eigen::VectorXd step = A.ldlt().solve(g);
            if (!step.allFinite()) {
                lambda *= 10.0;
                continue;
            }
            Eigen::VectorXd trial = p + step;
            project(pr.lay, trial);
            const double ct = cost(pr, trial);
            if (std::isfinite(ct) && ct <= c) {
                const double rel = (c - ct) / std::max(c, 1e-300);
                const double step_rel =
                    (trial - p).cwiseAbs().maxCoeff() / std::max(1e-12, p.cwiseAbs().maxCoeff());
                p = trial;
                c = ct;
                lambda = std::max(lambda / 3.0, 1e-12);
                improved = true;
                if (rel < 1e-12 || step_rel < 1e-12) return true;
                break;
            }
            lambda *= 4.0;
        }
        if (!improved) return true;  // no descent direction left: local minimum
    }
    return true;
}

double median_spacing(std::span<const double> x) {
    std::vector<double> d;
    for (std::size_t i = 1; i < x.size(); ++i) d.push_back(std::abs(x[i] - x[i - 1]));
    std::nth_element(d.begin(), d.begin() + d.size() / 2, d.end());
    return d[d.size() / 2];
}

}  // namespace

FitResult fit_line(std::span<const double> x, std::span<const double> counts, LineShape shape) {
    if (x.size() != counts.size()) throw InputError("fit_line: x and counts differ in length");
    if (x.size() < 8) throw InputError("fit_line needs at least 8 points");

    const std::size_t n = x.size();
    FitResult out;

    // Background: lower quintile; peak: maximum of a 3-point running mean.
    std::vector<double> sorted(counts.begin(), counts.end());
    std::sort(sorted.begin(), sorted.end());
    const double bg0 = sorted[n / 5];
    std::vector<double> smooth(n);
    for (std::size_t i = 0; i < n; ++i) {
        const std::size_t lo = i == 0 ? 0 : i - 1;
        const std::size_t hi = std::min(n - 1, i + 1);
        double s = 0.0;
        for (std::size_t k = lo; k <= hi; ++k) s += counts[k];
        smooth[i] = s / static_cast<double>(hi - lo + 1);
    }
    const auto peak_it = std::max_element(smooth.begin(), smooth.end());
    const std::size_t ipk = static_cast<std::size_t>(peak_it - smooth.begin());
    const double amp0 = *peak_it - bg0;
    if (!(amp0 > 0.0)) return out;

    const double half = bg0 + 0.5 * amp0;
    std::size_t left = ipk, right = ipk;
    while (left > 0 && smooth[left - 1] > half) --left;
    while (right + 1 < n && smooth[right + 1] > half) ++right;
    const double spacing = median_spacing(x);
    const double w0 = std::max(std::abs(x[right] - x[left]) + spacing, 2.0 * spacing);

    const Layout lay{shape};
    Eigen::VectorXd p(lay.size());
    if (shape == LineShape::lorentzian) {
        p << x[ipk], w0, amp0, bg0;
    } else {
        p << x[ipk], w0 / 1.6, w0 / 1.6, amp0, bg0;
    }

    Problem pr{lay, x, Eigen::VectorXd(Eigen::Index(n)), Eigen::VectorXd(Eigen::Index(n))};
    for (std::size_t i = 0; i < n; ++i) {
        pr.y[Eigen::Index(i)] = counts[i];
        pr.w[Eigen::Index(i)] = 1.0 / std::max(counts[i], 1.0);
    }

    bool ok = true;
    Eigen::VectorXd mu;
    for (int outer = 0; outer < 6; ++outer) {
        const Eigen::VectorXd before = p;
        ok = levenberg_marquardt(pr, p, out.iterations);
        model(lay, p, x, mu);
        pr.w = mu.array().max(kWeightFloor).inverse().matrix();
        const double change = (p - before).cwiseAbs().maxCoeff() /
                              std::max(1e-12, before.cwiseAbs().maxCoeff());
        if (outer > 0 && change < 1e-10) break;
    }

    Eigen::MatrixXd J;
    jacobian(lay, p, x, J);
    const Eigen::MatrixXd fisher = J.transpose() * pr.w.asDiagonal() * J;
    const Eigen::MatrixXd cov = fisher.inverse();

    out.center_GHz = p[0];
    out.lorentzian_fwhm_MHz = 1e3 * p[1];
    out.amplitude = p[lay.amp()];
    out.background = p[lay.bg()];
    out.center_stderr_GHz = std::sqrt(std::max(cov(0, 0), 0.0));
    if (shape == LineShape::voigt) {
        const PseudoVoigt pv(p[2], p[1]);
        out.gaussian_fwhm_MHz = 1e3 * p[2];
        out.fwhm_MHz = 1e3 * pv.fwhm();
        // Propagate the width covariance through the total width.
        Eigen::Vector2d grad;
        const double h1 = 1e-6 * std::max(p[1], 1e-6);
        const double h2 = 1e-6 * std::max(p[2], 1e-6);
        grad[0] = (PseudoVoigt(p[2], p[1] + h1).fwhm() - PseudoVoigt(p[2], p[1] - h1).fwhm()) / (2 * h1);
        grad[1] = (PseudoVoigt(p[2] + h2, p[1]).fwhm() - PseudoVoigt(p[2] - h2, p[1]).fwhm()) / (2 * h2);
        const double var = grad.transpose() * cov.block(1, 1, 2, 2) * grad;
        out.fwhm_stderr_MHz = 1e3 * std::sqrt(std::max(var, 0.0));
    } else {
        out.fwhm_MHz = 1e3 * p[1];
        out.fwhm_stderr_MHz = 1e3 * std::sqrt(std::max(cov(1, 1), 0.0));
    }
    const double chi2 = (pr.w.array() * (pr.y - mu).array().square()).sum();
    out.reduced_chi2 = chi2 / std::max<double>(1.0, static_cast<double>(n) - lay.size());

    const double xmin = std::min(x.front(), x.back());
    const double xmax = std::max(x.front(), x.back());
    out.converged = ok && p.allFinite() && cov.allFinite() && out.fwhm_MHz > 0.0 &&
                    out.amplitude > 0.0 && out.center_GHz >= xmin && out.center_GHz <= xmax;
    return out;
}

FitResult fit_line(const ScanRecord& scan, LineShape shape) {
    std::vector<double> y(scan.counts.begin(), scan.counts.end());
    return fit_line(scan.detunings_GHz, y, shape);
}

double evaluate_line(const FitResult& fit, LineShape shape, double x_GHz) {
    const double dx = x_GHz - fit.center_GHz;
    if (shape == LineShape::lorentzian) {
        return fit.amplitude * lorentzian(dx, 1e-3 * fit.fwhm_MHz) + fit.background;
    }
    const PseudoVoigt pv(1e-3 * fit.gaussian_fwhm_MHz, 1e-3 * fit.lorentzian_fwhm_MHz);
    return fit.amplitude * pv.unit_peak(dx) + fit.background;
}

}  // namespace snvtune
