#include "nvc/sim/report.hpp"

namespace nvc::sim {

std::string software_version() {
    return NVC_VERSION;
}

} // namespace nvc::sim
