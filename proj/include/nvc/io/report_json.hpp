#pragma once

// CampaignReport <-> JSON. Every numeric key carries its unit suffix; the
// embedded config uses the same keys as the YAML files. Doubles are written in
// shortest round-trip form, so read(write(r)) == r.

#include "nvc/sim/report.hpp"

#include <string>

namespace nvc::io {

std::string report_to_json(const sim::CampaignReport& report, int indent = 2);
sim::CampaignReport report_from_json(const std::string& text);

void write_report(const sim::CampaignReport& report, const std::string& path);
sim::CampaignReport read_report(const std::string& path);

} // namespace nvc::io
