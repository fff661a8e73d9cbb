// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "torus/solvers.hpp"

#include <cstdint>
#include <map>
#include <string>

namespace torus {

inline constexpr const char* kVersion = "0.1.0";
// environment variable overriding the output directory
inline constexpr const char* kOutDirEnv = "TORUS_LAB_OUT";

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct BracketInvalid : std::runtime_error {
    using std::runtime_error::runtime_error;
};

enum class ExperimentKind {
    LpSuite,
    NormSuite,
    ParaproductSuite,
    LinearSuite,
    Simulate,
    ThresholdSearch,
    ScalingCheck,
};

struct ExperimentConfig {
    ExperimentKind kind = ExperimentKind::Simulate;
    int grid = 32;       // points per dimension M
    int dim = 2;         // N
    double mu = 1.0;
    double lambda = 0.0;
    double gamma = 1.4;  // pressure exponent
    std::string viscosity = "constant"; // constant | bd
    double s = 1.0;      // regularity index for norm/paraproduct suites
    double p = 2.0;
    double p1 = 2.0;
    double r = 1.0;
    double eps = 1e-3;   // data amplitude
    double T = 1.0;
    int steps = 100;
    std::uint64_t seed = 0;
    std::string formulation = "effective"; // original | effective
    std::string out = ".";
    std::string format = "csv"; // csv | json

    // flat key=value file; '#' comments; unknown keys rejected
    static ExperimentConfig from_file(const std::string& path);
    // single key=value assignment (shared by the parser and CLI overrides)
    void set(const std::string& key, const std::string& value);
    // throws ConfigError with field-level messages
    void validate() const;

    Formulation formulation_enum() const;
    ViscosityModel model() const;
};

// every verified inequality stores its measured sides and the grid it was
// measured on -- no bare booleans
struct InequalityRecord {
    std::string name;
    double lhs = 0.0;
    double rhs = 0.0;
    double ratio = 0.0; // lhs / rhs
    int grid = 0;
    int dim = 0;
    bool pass = false;
};

struct DiagnosticsReport {
    ExperimentConfig config;
    std::string version = kVersion;
    std::vector<double> times;
    std::vector<double> E;      // cumulative over [0, t]
    std::vector<double> E1;
    std::vector<double> E2;
    std::vector<double> minrho;
    std::vector<std::string> extra_names;
    std::vector<std::vector<double>> extra_columns; // one per extra name
    std::vector<InequalityRecord> checks;
    std::map<std::string, double> scalars;

    bool all_pass() const;
};

DiagnosticsReport run(const ExperimentConfig& cfg);

// trajectory functionals, cumulative over snapshot prefixes
struct FunctionalSeries {
    std::vector<double> times, E, E1, E2, minrho;
};
FunctionalSeries evaluate_functionals(const Trajectory& traj, double p, double p1);

// initial-data value of the E functional (the sup-norm terms at t = 0)
double functional_data_value(const SpectralField& q0, const VectorField& u0, double p,
                             double p1);

struct ThresholdResult {
    double lo = 0.0;
    double hi = 0.0;
    bool failure_found = false;
    int evaluations = 0;
};
ThresholdResult threshold_search(const ExperimentConfig& base);

// serialization ----------------------------------------------------------
std::string report_csv(const DiagnosticsReport& r);
std::string report_json(const DiagnosticsReport& r);
// FNV-1a over the JSON serialization
std::uint64_t report_hash(const DiagnosticsReport& r);
// writes report.<format> into dir (created if absent); returns file path
std::string emit(const DiagnosticsReport& r, const std::string& dir,
                 const std::string& format);

} // namespace torus
