#pragma once

#include "nvc/dsp/square_wave.hpp"
#include "nvc/sim/config.hpp"
#include "nvc/timeseries.hpp"

#include <complex>
#include <cstdint>
#include <optional>
#include <variant>

namespace nvc::sim {

struct AcDrive {
    double frequency = 67.0; ///< Hz
    double amplitude = 1.0;  ///< A, peak
};

struct DcDrive {
    double amplitude = 1.0; ///< A while on
    dsp::SquareWaveProtocol protocol;
};

using Drive = std::variant<AcDrive, DcDrive>;

struct SimulationOptions {
    std::optional<std::uint64_t> seed; ///< defaults to cfg.seed
    double settle_time = 0.05;         ///< s simulated and discarded before t = 0
    bool noise = true;
};

/// Sensor output for `duration` seconds of `drive`, with t = 0 on the drive's
/// phase reference (AC zero crossing / first rising edge).
///
/// Field = auxiliary offset + residual gap flux + sensor noise; it then goes
/// through the tracker (or straight through in ideal mode) and the readout
/// low-pass. Throws LockLossError if any sample is invalid.
TimeSeries simulate_measurement(const ComparatorConfig& cfg, const Drive& drive, double duration,
                                const SimulationOptions& options = {});

/// Residual flux in the gap from the ratio windings, without offset or noise.
TimeSeries residual_flux(const ComparatorConfig& cfg, const Drive& drive, double duration,
                         double settle_time, std::uint64_t drift_seed);

/// Run a field record through the configured sensor (tracker or ideal) and readout filter.
TimeSeries sensor_chain(const ComparatorConfig& cfg, const TimeSeries& field);

/// Complex output/input response of the sensor chain at `frequency`. Ideal mode
/// uses the filter's closed form; tracker mode measures a noiseless test tone.
std::complex<double> readout_response(const ComparatorConfig& cfg, double frequency);

/// |readout_response|.
double readout_gain(const ComparatorConfig& cfg, double frequency);

/// Exact response of the discrete first-order readout low-pass (cutoff 0 = bypass).
std::complex<double> lowpass_response(double cutoff, double sample_rate, double frequency);
double lowpass_gain(double cutoff, double sample_rate, double frequency);

} // namespace nvc::sim
