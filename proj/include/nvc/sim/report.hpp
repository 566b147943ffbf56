#pragma once

#include "nvc/dsp/allan.hpp"
#include "nvc/dsp/fit.hpp"
#include "nvc/dsp/square_wave.hpp"
#include "nvc/sim/config.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace nvc::sim {

/// One (frequency, amplitude) grid point of an AC campaign.
struct AcCell {
    double frequency = 0.0;  ///< Hz
    double amplitude = 0.0;  ///< A
    int repeats = 0;
    double window = 0.0;     ///< s
    double conversion = 0.0; ///< K(f) [T/A]
    double readout_gain = 1.0;
    double flux_mean = 0.0;  ///< T, gap flux amplitude
    double flux_se = 0.0;    ///< T
    double current_mean = 0.0; ///< A, equivalent current difference
    double current_se = 0.0;   ///< A
    double current_sd = 0.0;   ///< A, single-window scatter
    double ratio_error = 0.0;  ///< A/A
    double ratio_error_se = 0.0;
    double injected_ratio_error = 0.0; ///< A/A, model value at this frequency
    std::vector<double> currents;      ///< A, per repeat
    bool negative_ratio_error = false;
    std::string error; ///< empty when the cell succeeded

    bool operator==(const AcCell&) const = default;
};

struct LinearityFit {
    double frequency = 0.0;
    dsp::FitResult fit; ///< current difference [A] vs amplitude [A]

    bool operator==(const LinearityFit&) const = default;
};

struct FrequencyFit {
    double amplitude = 0.0;
    dsp::FitResult fit; ///< ratio error vs frequency, eps_h + eps_e f

    bool operator==(const FrequencyFit&) const = default;
};

struct Spectrum {
    double frequency = 0.0; ///< drive frequency of the cell it came from
    double amplitude = 0.0;
    std::vector<double> frequencies; ///< Hz
    std::vector<double> flux;        ///< T, gap-referred amplitude
    std::vector<double> current;     ///< A, equivalent current difference

    bool operator==(const Spectrum&) const = default;
};

struct AcCampaign {
    std::vector<AcCell> cells;
    std::vector<LinearityFit> linearity;
    std::vector<FrequencyFit> frequency_response;
    std::optional<Spectrum> spectrum;

    bool operator==(const AcCampaign&) const = default;
};

struct DcCampaign {
    double current = 0.0; ///< A
    dsp::SquareWaveProtocol protocol;
    double conversion = 0.0; ///< K(0) [T/A]
    double step = 0.0;       ///< T
    double step_se = 0.0;    ///< T
    double off_mean = 0.0;   ///< T, baseline before re-zeroing
    double current_difference = 0.0;    ///< A
    double current_difference_se = 0.0; ///< A
    double ratio_error = 0.0;           ///< A/A
    double ratio_error_se = 0.0;
    std::vector<double> per_cycle;      ///< T

    bool operator==(const DcCampaign&) const = default;
};

struct AllanCampaign {
    std::string drive;         ///< "ac" or "dc"
    double frequency = 0.0;    ///< Hz, 0 for dc
    double amplitude = 0.0;    ///< A
    double total_duration = 0.0; ///< s, physical
    double time_compression = 1.0;
    double sequence_period = 0.0; ///< s, window (ac) or cycle (dc) length
    double conversion = 0.0;      ///< T/A
    dsp::AllanCurve curve;        ///< sigma in T
    std::vector<double> sigma_current; ///< A
    double min_tau = 0.0;
    double min_sigma = 0.0;         ///< T
    double min_sigma_current = 0.0; ///< A
    std::vector<dsp::DecadeSlope> slopes;

    bool operator==(const AllanCampaign&) const = default;
};

/// A standalone fit of externally supplied points (`nvc fit`).
struct FitReport {
    std::string model;  ///< "ratio-freq" or "line"
    std::string x_unit;
    std::string y_unit;
    std::vector<dsp::Point> points;
    dsp::FitResult fit;

    bool operator==(const FitReport&) const = default;
};

struct Provenance {
    std::uint64_t seed = 0;
    std::string timestamp;
    std::string software_version;

    bool operator==(const Provenance&) const = default;
};

struct CampaignReport {
    std::string kind; ///< "ac", "dc", "allan", "analysis" or "fit"
    ComparatorConfig config;
    std::optional<AcCampaign> ac;
    std::optional<DcCampaign> dc;
    std::optional<AllanCampaign> allan;
    std::optional<FitReport> fit;
    std::vector<std::string> warnings;
    Provenance provenance;

    bool operator==(const CampaignReport&) const = default;
};

/// Version string embedded in reports.
std::string software_version();

} // namespace nvc::sim
