#ifndef XMOM_CLI_HPP
#define XMOM_CLI_HPP

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

namespace xmom {

/// Fully resolved run description. Every run echoes this, with defaults
/// filled in, into its output header; identical configs produce identical
/// output bytes.
struct RunConfig {
    std::string command; // project | xmoment | verify | channel | simulate | identify | sweep

    std::string g1, g2; // function DSL strings
    std::string f = "identity";

    double sigma = 1.0;
    double rho = 0.5;
    int order = 40;
    int nodes = 128;
    std::string engine = "series";

    double sigma_x2 = 1.0;
    double sigma_w2 = 1.0;
    int64_t samples = 1'000'000;
    uint64_t seed = 1;
    uint64_t seed2 = 2;
    int chunks = 1;

    // sweep grid
    std::vector<std::string> grid_functions;
    std::vector<double> grid_sigmas;
    std::vector<double> grid_rhos;

    // channel
    std::string channel_json; // inline JSON or @path
    std::string channel_g1, channel_g2;

    // identify
    std::string mode = "forward"; // forward | inverse | k1 | k2
    int degree = 3;
    std::string data; // dataset path prefix
    std::string score_g = "identity";

    std::string out;              // output path; empty = stdout
    std::string format = "json";  // json | csv (sweep is always csv)

    nlohmann::json to_json() const;
    static RunConfig from_json(const nlohmann::json& j);
};

/// Execute one command: writes artifacts to cfg.out (or `fallback_out` when
/// cfg.out is empty) and returns the exit status: 0 success, 1 precondition
/// error, 2 numerical degeneracy. Errors are emitted as one-line JSON to err.
int run(const RunConfig& cfg, std::ostream& fallback_out, std::ostream& err);

/// 17-significant-digit scientific formatting used for all CSV numerics.
std::string format17(double v);

} // namespace xmom

#endif
