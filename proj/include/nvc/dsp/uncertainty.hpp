#pragma once

namespace nvc::dsp {

/// Time for a noise floor `floor_asd` [T/sqrt(Hz)] to average down to `target` [T],
/// using sigma(t) = d / sqrt(t): t = (d / target)^2.
double required_integration_time(double floor_asd, double target);

/// flux / coefficient, coefficient in T/A.
double flux_to_current(double flux, double coefficient);

} // namespace nvc::dsp
