// report.cpp - CSV emission with an embedded, replayable run record

#include "report.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "nmcorr/errors.hpp"

namespace nmcorr::cli {

namespace {

std::string exact(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

std::string shortg(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.10g", x);
    return buf;
}

}  // namespace

std::string format_value(double x) {
    if (x == 0.0) x = 0.0;  // drops the sign of -0
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.9g", x);
    return buf;
}

std::string RunRecord::replay_flags() const {
    std::ostringstream os;
    os << "--s " << exact(params.s) << " --eta-rel " << exact(params.eta_rel) << " --omega-c " << exact(params.omega_c);
    if (std::isnan(params.kelvin))
        os << " --theta " << exact(params.theta);
    else
        os << " --temp-k " << exact(params.kelvin);
    os << " --n0 " << exact(params.n0) << " --t " << exact(params.t) << " --tau-max " << exact(tau_max)
       << " --points " << points << " --omega0-ghz " << exact(units.omega0_ghz) << " --kb-over-hbar "
       << exact(units.kb_over_hbar);
    if (nprime) os << " --nprime";
    return os.str();
}

std::vector<std::string> RunRecord::header_lines() const {
    const SpectralDensity sd = params.density();
    const double ns_per_unit = 1.0 / units.omega0_ghz;  // 1/omega0 in ns
    std::vector<std::string> lines;
    lines.push_back("# nmcorr " NMCORR_VERSION);
    lines.push_back("# command: " + command_line);
    lines.push_back("# record: " + replay_flags());
    lines.push_back("# internal units (omega0 = 1): s=" + shortg(params.s) + " eta=" + shortg(sd.eta) +
                    " eta_c=" + shortg(critical_coupling(sd)) + " eta/eta_c=" + shortg(params.eta_rel) +
                    " omega_c=" + shortg(params.omega_c) + " theta=" + shortg(params.theta) +
                    " n0=" + shortg(params.n0) + " t=" + shortg(params.t) + " tau_max=" + shortg(tau_max) +
                    " points=" + std::to_string(points));
    lines.push_back("# user units: omega0=" + shortg(units.omega0_ghz) + "e9 rad/s kB/hbar=" +
                    shortg(units.kb_over_hbar) + " rad/(s K) T=" +
                    shortg(units.kelvin_from_theta(params.theta)) + " K t=" + shortg(params.t * ns_per_unit) +
                    " ns tau_max=" + shortg(tau_max * ns_per_unit) + " ns");
    lines.push_back("# propagator route: " + route);
    lines.push_back("# timestamp: " + timestamp + " wall_time_s=" + shortg(wall_time_s));
    return lines;
}

void write_curve_csv(std::ostream& os, const MeasureCurve& curve, const RunRecord& rec) {
    const bool np = rec.nprime && curve.n_prime.has_value();
    std::ostringstream body;
    for (std::size_t m = 0; m < curve.tau.size(); ++m) {
        const double row[] = {curve.tau[m],         curve.g_exact[m].real(),  curve.g_exact[m].imag(),
                              curve.g_markov[m].real(), curve.g_markov[m].imag(), curve.n_value[m]};
        for (double v : row)
            if (!std::isfinite(v))
                throw NumericalError("write_curve_csv: non-finite value at tau = " + std::to_string(curve.tau[m]));
        body << format_value(row[0]);
        for (int c = 1; c < 6; ++c) body << ',' << format_value(row[c]);
        if (np) {
            const double v = (*curve.n_prime)[m];
            if (!std::isfinite(v)) throw NumericalError("write_curve_csv: non-finite N'");
            body << ',' << format_value(v);
        }
        body << '\n';
    }
    for (const auto& l : rec.header_lines()) os << l << '\n';
    os << kCsvHeader << (np ? ",Nprime" : "") << '\n' << body.str();
}

std::vector<std::string> read_record_flags(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("--record: cannot open " + path);
    const std::string key = "# record: ";
    std::string line;
    while (std::getline(in, line)) {
        if (line.rfind(key, 0) != 0) continue;
        std::istringstream ss(line.substr(key.size()));
        std::vector<std::string> out;
        for (std::string tok; ss >> tok;) out.push_back(tok);
        return out;
    }
    throw std::invalid_argument("--record: no '# record:' line in " + path);
}

std::string iso_timestamp() {
    const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&now, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

}  // namespace nmcorr::cli
