#include "nvc/io/plotdata.hpp"

#include "nvc/error.hpp"
#include "nvc/io/csv.hpp"

#include <filesystem>
#include <fstream>

namespace nvc::io {

namespace {

class CsvFile {
public:
    CsvFile(const std::filesystem::path& path, const std::string& header)
        : path_(path.string()), out_(path) {
        if (!out_) {
            throw IoError("cannot write '" + path_ + "'");
        }
        out_ << header << '\n';
    }

    void row(std::initializer_list<double> values) {
        bool first = true;
        for (double v : values) {
            out_ << (first ? "" : ",") << format_double(v);
            first = false;
        }
        out_ << '\n';
    }

    std::string close() {
        out_.close();
        if (!out_) {
            throw IoError("write failed for '" + path_ + "'");
        }
        return path_;
    }

private:
    std::string path_;
    std::ofstream out_;
};

} // namespace

std::vector<std::string> emit_plotdata(const sim::CampaignReport& report,
                                       const std::string& directory) {
    namespace fs = std::filesystem;
    std::error_code ec;
    fs::create_directories(directory, ec);
    if (ec) {
        throw IoError("cannot create directory '" + directory + "': " + ec.message());
    }
    const fs::path dir(directory);
    std::vector<std::string> written;

    if (report.ac) {
        const auto& ac = *report.ac;
        if (ac.spectrum) {
            CsvFile f(dir / "spectrum.csv", "frequency_Hz,flux_T,current_A");
            const auto& s = *ac.spectrum;
            for (std::size_t k = 0; k < s.frequencies.size(); ++k) {
                f.row({s.frequencies[k], s.flux[k], s.current[k]});
            }
            written.push_back(f.close());
        }
        CsvFile sweep(dir / "frequency_sweep.csv",
                      "frequency_Hz,amplitude_A,ratio_error_A_per_A,ratio_error_se_A_per_A,"
                      "current_A,current_se_A");
        CsvFile lin(dir / "linearity.csv", "amplitude_A,frequency_Hz,current_A,current_se_A");
        for (const auto& c : ac.cells) {
            if (!c.error.empty()) {
                continue;
            }
            sweep.row({c.frequency, c.amplitude, c.ratio_error, c.ratio_error_se, c.current_mean,
                       c.current_se});
            lin.row({c.amplitude, c.frequency, c.current_mean, c.current_se});
        }
        written.push_back(sweep.close());
        written.push_back(lin.close());
    }

    if (report.allan) {
        const auto& a = *report.allan;
        CsvFile f(dir / "allan.csv", allan_header);
        for (std::size_t i = 0; i < a.curve.size(); ++i) {
            f.row({a.curve.taus[i], a.curve.sigmas[i], a.sigma_current[i],
                   a.curve.relative_confidence(i)});
        }
        written.push_back(f.close());
    }

    if (report.dc) {
        const auto& dc = *report.dc;
        CsvFile f(dir / "dc_cycles.csv", "cycle_start_s,step_T,current_A");
        const double period = 2.0 * dc.protocol.half_period;
        for (std::size_t i = 0; i < dc.per_cycle.size(); ++i) {
            f.row({static_cast<double>(i) * period, dc.per_cycle[i], dc.per_cycle[i] / dc.conversion});
        }
        written.push_back(f.close());
    }
    return written;
}

} // namespace nvc::io
