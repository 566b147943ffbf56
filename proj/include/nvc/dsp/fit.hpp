#pragma once

#include <functional>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace nvc::dsp {

struct Point {
    double x = 0.0;
    double y = 0.0;

    bool operator==(const Point&) const = default;
};

struct FitResult {
    std::map<std::string, double> parameters;
    std::map<std::string, double> covariance_diag;
    double residual_norm = 0.0; ///< sqrt of the residual sum of squares, units of y
    int iterations = 0;

    [[nodiscard]] double at(const std::string& name) const { return parameters.at(name); }
    [[nodiscard]] double standard_error(const std::string& name) const;

    bool operator==(const FitResult&) const = default;
};

/// Ordinary least squares y = slope x + intercept.
FitResult fit_line(std::span<const Point> points);

/// y = model(x; theta) with an analytic gradient.
struct ResponseModel {
    std::string name;
    std::vector<std::string> parameter_names;
    std::function<double(double, std::span<const double>)> value;
    std::function<void(double, std::span<const double>, std::span<double>)> gradient;
    std::function<std::vector<double>(std::span<const Point>)> initial_guess;
    /// Optional: map an equivalent solution onto the reported one (e.g. a sign flip).
    std::function<void(std::span<double>)> canonical;
};

/// eps_h + eps_e f  (parameters "eps_h", "eps_e").
ResponseModel ratio_frequency_model();

/// (1 - h) / sqrt(1 + (f / f_e)^2)  (parameters "h", "f_e").
ResponseModel attenuation_model();

struct FitOptions {
    std::optional<std::vector<double>> initial; ///< overrides the model's guess
    std::vector<bool> fixed;                    ///< per parameter; fixed ones keep their initial value
    int max_iterations = 100;
    double tolerance = 1e-10;                   ///< relative step size for convergence
};

/// Gauss-Newton with Levenberg damping minimising sum (y_i - model(x_i))^2.
/// Throws ConvergenceError (with the last iterate) after max_iterations.
FitResult fit_frequency_response(std::span<const Point> points, const ResponseModel& model,
                                 const FitOptions& options = {});

} // namespace nvc::dsp
