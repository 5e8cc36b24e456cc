#pragma once
// Shared test helpers: independent oracles, CLI invocation, tiny generators.

#include "ratekit/stats.hpp"
#include "ratekit/util.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>
#include <string>
#include <sys/wait.h>
#include <vector>

namespace testsup {

// ---------------------------------------------------------------------------
// Independent Cohen's kappa oracle: builds the full contingency table over
// categories {-1,0,+1} and evaluates p_o / p_e in floating point. This is the
// reference the integer-arithmetic implementation is checked against.
// ---------------------------------------------------------------------------

struct OracleKappa {
    bool degenerate = false;
    double kappa = 0.0;
    double p_o = 0.0;
    double p_e = 0.0;
};

inline OracleKappa oracle_kappa_ternary(const std::vector<int>& a,
                                        const std::vector<int>& b) {
    std::array<std::array<long long, 3>, 3> joint{};
    for (std::size_t i = 0; i < a.size(); ++i) {
        joint[static_cast<std::size_t>(a[i] + 1)][static_cast<std::size_t>(b[i] + 1)]++;
    }
    const double n = static_cast<double>(a.size());
    double p_o = 0.0;
    double p_e = 0.0;
    for (int c = 0; c < 3; ++c) {
        p_o += static_cast<double>(joint[c][c]) / n;
        double row = 0.0;
        double col = 0.0;
        for (int k = 0; k < 3; ++k) {
            row += static_cast<double>(joint[c][k]);
            col += static_cast<double>(joint[k][c]);
        }
        p_e += (row / n) * (col / n);
    }
    OracleKappa result;
    result.p_o = p_o;
    result.p_e = p_e;
    // For n <= 6 the closest non-unit p_e to 1 is (n^2-1)/n^2, so a wide
    // tolerance cleanly separates the degenerate case.
    if (p_e > 1.0 - 1e-9) {
        result.degenerate = true;
        return result;
    }
    result.kappa = (p_o - p_e) / (1.0 - p_e);
    return result;
}

// Sort-based median oracle following the documented rule: odd -> middle,
// even -> midpoint of the two middles, halves truncated toward zero.
inline int oracle_median(std::vector<int> values) {
    std::sort(values.begin(), values.end());
    const std::size_t n = values.size();
    if (n % 2 == 1) return values[n / 2];
    const double mid =
        (static_cast<double>(values[n / 2 - 1]) + static_cast<double>(values[n / 2])) / 2.0;
    return static_cast<int>(std::trunc(mid));
}

// ---------------------------------------------------------------------------
// CLI invocation
// ---------------------------------------------------------------------------

struct CliResult {
    int exit_code = -1;
    std::string out;
    std::string err;
};

inline std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

inline CliResult run_cli(const std::string& args, const std::string& scratch_dir) {
    const std::string out_path = scratch_dir + "/cli.out";
    const std::string err_path = scratch_dir + "/cli.err";
    const std::string cmd = std::string(RATEKIT_BIN_PATH) + " " + args + " > " + out_path +
                            " 2> " + err_path;
    const int raw = std::system(cmd.c_str());
    CliResult result;
    result.exit_code = WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
    result.out = slurp(out_path);
    result.err = slurp(err_path);
    return result;
}

inline bool contains(const std::string& haystack, const std::string& needle) {
    return haystack.find(needle) != std::string::npos;
}

inline bool icontains(const std::string& haystack, const std::string& needle) {
    auto lower = [](std::string s) {
        for (char& c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
        return s;
    };
    return lower(haystack).find(lower(needle)) != std::string::npos;
}

inline std::string source_path(const std::string& rel) {
    return std::string(RATEKIT_SOURCE_DIR) + "/" + rel;
}

inline std::string make_temp_dir(const std::string& tag) {
    std::string tmpl = "/tmp/ratekit_" + tag + "_XXXXXX";
    std::vector<char> buf(tmpl.begin(), tmpl.end());
    buf.push_back('\0');
    const char* dir = mkdtemp(buf.data());
    if (!dir) throw std::runtime_error("mkdtemp failed");
    return dir;
}

} // namespace testsup
