#include "nvc/dsp/uncertainty.hpp"

#include "nvc/error.hpp"

namespace nvc::dsp {

double required_integration_time(double floor_asd, double target) {
    if (!(floor_asd > 0.0) || !(target > 0.0)) {
        throw ValidationError("required_integration_time: floor and target must be positive");
    }
    const double r = floor_asd / target;
    return r * r;
}

double flux_to_current(double flux, double coefficient) {
    if (!(coefficient > 0.0)) {
        throw ValidationError("flux_to_current: coefficient must be positive");
    }
    return flux / coefficient;
}

} // namespace nvc::dsp
