#pragma once

// Plot-ready CSV files, one per figure analogue present in a report:
//   spectrum.csv         frequency_Hz,flux_T,current_A
//   frequency_sweep.csv  frequency_Hz,amplitude_A,ratio_error_A_per_A,ratio_error_se_A_per_A,current_A,current_se_A
//   linearity.csv        amplitude_A,frequency_Hz,current_A,current_se_A
//   allan.csv            tau_s,sigma_T,sigma_A,ci
//   dc_cycles.csv        cycle_start_s,step_T,current_A
// `ci` is the relative 1-sigma confidence of sigma, 1/sqrt(pairs).

#include "nvc/sim/report.hpp"

#include <string>
#include <vector>

namespace nvc::io {

inline constexpr const char* allan_header = "tau_s,sigma_T,sigma_A,ci";

/// Writes every applicable file into `directory` (created if needed) and
/// returns the paths written.
std::vector<std::string> emit_plotdata(const sim::CampaignReport& report,
                                       const std::string& directory);

} // namespace nvc::io
