#include "nvc/dsp/fit.hpp"

#include "nvc/error.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <set>

namespace nvc::dsp {

double FitResult::standard_error(const std::string& name) const {
    return std::sqrt(covariance_diag.at(name));
}

FitResult fit_line(std::span<const Point> points) {
    std::set<double> distinct;
    for (const auto& p : points) {
        distinct.insert(p.x);
    }
    if (distinct.size() < 2) {
        throw ValidationError("fit_line: need at least two distinct x values");
    }
    const auto n = static_cast<double>(points.size());
    double mx = 0.0;
    double my = 0.0;
    for (const auto& p : points) {
        mx += p.x;
        my += p.y;
    }
    mx /= n;
    my /= n;
    double sxx = 0.0;
    double sxy = 0.0;
    for (const auto& p : points) {
        sxx += (p.x - mx) * (p.x - mx);
        sxy += (p.x - mx) * (p.y - my);
    }
    const double slope = sxy / sxx;
    const double intercept = my - slope * mx;
    double rss = 0.0;
    for (const auto& p : points) {
        const double r = p.y - (slope * p.x + intercept);
        rss += r * r;
    }
    const double s2 = points.size() > 2 ? rss / (n - 2.0) : 0.0;

    FitResult out;
    out.parameters = {{"slope", slope}, {"intercept", intercept}};
    out.covariance_diag = {{"slope", s2 / sxx}, {"intercept", s2 * (1.0 / n + mx * mx / sxx)}};
    out.residual_norm = std::sqrt(rss);
    out.iterations = 0;
    return out;
}

ResponseModel ratio_frequency_model() {
    ResponseModel m;
    m.name = "ratio-freq";
    m.parameter_names = {"eps_h", "eps_e"};
    m.value = [](double f, std::span<const double> p) { return p[0] + p[1] * f; };
    m.gradient = [](double f, std::span<const double>, std::span<double> g) {
        g[0] = 1.0;
        g[1] = f;
    };
    m.initial_guess = [](std::span<const Point> pts) -> std::vector<double> {
        std::set<double> xs;
        for (const auto& p : pts) {
            xs.insert(p.x);
        }
        if (xs.size() < 2) {
            double mean = 0.0;
            for (const auto& p : pts) {
                mean += p.y;
            }
            return {mean / static_cast<double>(pts.size()), 0.0};
        }
        const auto line = fit_line(pts);
        return {line.at("intercept"), line.at("slope")};
    };
    return m;
}

ResponseModel attenuation_model() {
    ResponseModel m;
    m.name = "attenuation";
    m.parameter_names = {"h", "f_e"};
    m.value = [](double f, std::span<const double> p) {
        const double x = f / p[1];
        return (1.0 - p[0]) / std::sqrt(1.0 + x * x);
    };
    m.gradient = [](double f, std::span<const double> p, std::span<double> g) {
        const double x = f / p[1];
        const double d = 1.0 + x * x;
        g[0] = -1.0 / std::sqrt(d);
        // d/dfe of (1-h) d^-1/2 with dx/dfe = -x/fe.
        g[1] = (1.0 - p[0]) * x * x / (p[1] * d * std::sqrt(d));
    };
    m.initial_guess = [](std::span<const Point> pts) -> std::vector<double> {
        auto lowest = std::min_element(pts.begin(), pts.end(),
                                       [](const Point& a, const Point& b) { return a.x < b.x; });
        const double h = std::clamp(1.0 - lowest->y, 0.0, 0.9);
        // Corner guess from the point closest to half power.
        double fe = 0.0;
        double best = 1e300;
        for (const auto& p : pts) {
            const double ratio = p.y / (1.0 - h);
            if (ratio > 0.0 && ratio < 1.0 && p.x > 0.0) {
                const double guess = p.x / std::sqrt(1.0 / (ratio * ratio) - 1.0);
                const double dist = std::abs(ratio - std::sqrt(0.5));
                if (dist < best) {
                    best = dist;
                    fe = guess;
                }
            }
        }
        if (!(fe > 0.0)) {
            fe = std::max_element(pts.begin(), pts.end(), [](const Point& a, const Point& b) {
                     return a.x < b.x;
                 })->x;
        }
        return {h, fe};
    };
    // Only (f / f_e)^2 enters the model.
    m.canonical = [](std::span<double> p) { p[1] = std::abs(p[1]); };
    return m;
}

FitResult fit_frequency_response(std::span<const Point> points, const ResponseModel& model,
                                 const FitOptions& options) {
    const std::size_t p = model.parameter_names.size();
    std::vector<bool> fixed = options.fixed;
    fixed.resize(p, false);
    std::vector<std::size_t> free_idx;
    for (std::size_t i = 0; i < p; ++i) {
        if (!fixed[i]) {
            free_idx.push_back(i);
        }
    }
    const std::size_t q = free_idx.size();
    if (points.size() < q + 1) {
        throw ValidationError("fit_frequency_response: need at least (free parameters + 1) points");
    }
    for (const auto& pt : points) {
        if (!(pt.x >= 0.0)) {
            throw ValidationError("fit_frequency_response: frequencies must be >= 0");
        }
    }

    std::vector<double> theta = options.initial ? *options.initial : model.initial_guess(points);
    if (theta.size() != p) {
        throw ValidationError("fit_frequency_response: initial guess has wrong size");
    }

    const std::size_t n = points.size();
    auto residuals = [&](const std::vector<double>& th, Eigen::VectorXd& r) {
        double cost = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            r(static_cast<Eigen::Index>(i)) = points[i].y - model.value(points[i].x, th);
            cost += r(static_cast<Eigen::Index>(i)) * r(static_cast<Eigen::Index>(i));
        }
        return cost;
    };

    Eigen::VectorXd r(n);
    Eigen::MatrixXd jac(n, q);
    std::vector<double> grad(p);
    double cost = residuals(theta, r);
    double lambda = 1e-3;
    bool converged = q == 0;
    int iterations = 0;

    auto fill_jacobian = [&](const std::vector<double>& th) {
        for (std::size_t i = 0; i < n; ++i) {
            model.gradient(points[i].x, th, grad);
            for (std::size_t j = 0; j < q; ++j) {
                jac(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = grad[free_idx[j]];
            }
        }
    };

    while (!converged && iterations < options.max_iterations) {
        ++iterations;
        fill_jacobian(theta);
        const Eigen::MatrixXd jtj = jac.transpose() * jac;
        const Eigen::VectorXd jtr = jac.transpose() * r;

        bool accepted = false;
        Eigen::VectorXd delta;
        for (int attempt = 0; attempt < 30 && !accepted; ++attempt) {
            Eigen::MatrixXd a = jtj;
            for (std::size_t j = 0; j < q; ++j) {
                const auto jj = static_cast<Eigen::Index>(j);
                a(jj, jj) += lambda * (jtj(jj, jj) > 0.0 ? jtj(jj, jj) : 1.0);
            }
            delta = a.ldlt().solve(jtr);
            std::vector<double> trial = theta;
            for (std::size_t j = 0; j < q; ++j) {
                trial[free_idx[j]] += delta(static_cast<Eigen::Index>(j));
            }
            Eigen::VectorXd r_trial(n);
            const double trial_cost = residuals(trial, r_trial);
            if (std::isfinite(trial_cost) && trial_cost <= cost) {
                theta = std::move(trial);
                r = std::move(r_trial);
                cost = trial_cost;
                lambda = std::max(lambda / 10.0, 1e-12);
                accepted = true;
            } else {
                lambda *= 10.0;
            }
        }

        double theta_norm = 0.0;
        for (std::size_t j : free_idx) {
            theta_norm += theta[j] * theta[j];
        }
        theta_norm = std::sqrt(theta_norm);
        const double step = accepted ? delta.norm() : 0.0;
        // No acceptable step after heavy damping means we sit at the minimum.
        if (!accepted || step <= options.tolerance * (theta_norm + 1e-300)) {
            converged = true;
        }
    }

    if (!converged) {
        throw ConvergenceError("fit_frequency_response: no convergence after " +
                                   std::to_string(options.max_iterations) + " iterations",
                               theta, std::sqrt(cost));
    }

    if (model.canonical) {
        model.canonical(theta);
    }

    FitResult out;
    out.iterations = iterations;
    out.residual_norm = std::sqrt(cost);
    for (std::size_t i = 0; i < p; ++i) {
        out.parameters[model.parameter_names[i]] = theta[i];
        out.covariance_diag[model.parameter_names[i]] = 0.0;
    }
    if (q > 0 && n > q) {
        fill_jacobian(theta);
        const Eigen::MatrixXd jtj = jac.transpose() * jac;
        const double s2 = cost / static_cast<double>(n - q);
        const Eigen::MatrixXd cov = jtj.inverse() * s2;
        for (std::size_t j = 0; j < q; ++j) {
            const auto jj = static_cast<Eigen::Index>(j);
            out.covariance_diag[model.parameter_names[free_idx[j]]] = cov(jj, jj);
        }
    }
    return out;
}

} // namespace nvc::dsp
