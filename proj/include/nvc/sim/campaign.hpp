#pragma once

#include "nvc/sim/report.hpp"
#include "nvc/sim/simulate.hpp"

#include <span>
#include <vector>

namespace nvc::sim {

/// Sweep every (frequency, amplitude) pair; each repeat is an independent window
/// with its own derived seed. Cell failures are recorded, not thrown.
CampaignReport run_ac_campaign(const ComparatorConfig& cfg, std::span<const double> frequencies,
                               std::span<const double> amplitudes, double window, int repeats);

struct AllanOptions {
    /// Run the process this many times faster and relabel tau accordingly.
    /// Noise knees, drift and protocol timing scale together, which leaves the
    /// Allan deviation at the relabelled tau unchanged in distribution.
    double time_compression = 1.0;
    double window = 1.0; ///< s, AC demodulation window (physical)
};

/// One long run, reduced to a per-window (AC) or per-cycle (DC) sequence, then Allan.
/// Empty `taus` selects 10 per decade from the sequence period to duration / 3.
CampaignReport run_allan_campaign(const ComparatorConfig& cfg, const Drive& drive,
                                  double total_duration, std::span<const double> taus,
                                  const AllanOptions& options = {});

CampaignReport run_dc_campaign(const ComparatorConfig& cfg, double current,
                               const dsp::SquareWaveProtocol& proto);

/// AC analysis of a recorded sensor-output series: split into `window`-second
/// windows (0 = one window), demodulate each at f0 and correct for the configured
/// readout response. Amplitudes are unsigned; an external record has no drive
/// phase reference.
CampaignReport analyze_ac_series(const ComparatorConfig& cfg, const TimeSeries& series, double f0,
                                 double amplitude, double window);

/// Square-wave analysis of a recorded series starting on a rising edge.
CampaignReport analyze_dc_series(const ComparatorConfig& cfg, const TimeSeries& series,
                                 double current, const dsp::SquareWaveProtocol& proto);

/// Allan deviation of a recorded series; sigma_A uses K(f0) (f0 = 0 for DC).
CampaignReport analyze_allan_series(const ComparatorConfig& cfg, const TimeSeries& series,
                                    std::span<const double> taus, double f0);

} // namespace nvc::sim
