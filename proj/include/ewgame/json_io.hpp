#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "ewgame/bank.hpp"
#include "ewgame/classifier.hpp"
#include "ewgame/dynamics.hpp"
#include "ewgame/game.hpp"
#include "ewgame/harness.hpp"

namespace ewgame::io {

using json = nlohmann::json;

/// "%.17g": enough digits to round-trip any double.
std::string format_double(double x);

/// Parses JSON text; throws ParseError with the parser's message.
json parse_json(const std::string& text);
/// Reads and parses a file; throws ParseError if unreadable or malformed.
json read_json_file(const std::string& path);

/// {"a":..,"b":..,"c":..,"d":..}; rejects missing, non-numeric, NaN or Inf entries.
SymmetricGame game_from_json(const json& j);
json game_to_json(const SymmetricGame& g);

/// {"p1":[x,y],"p2":[x,y]} or {"u1":..,"u2":..}. Rejects pure strategies.
DynState init_from_json(const json& j);
json init_to_json(const DynState& s);

/// Input of the classify and simulate subcommands.
struct RunConfig {
    SymmetricGame game{0.0, 0.0, 0.0, 0.0};
    DynState init{};
    double eta = 0.5;
    std::int64_t horizon = 1'000'000;
};

/// {"game":{..}, "init":{..}, "eta":x, "horizon":n}; eta and horizon optional.
RunConfig run_config_from_json(const json& j);

json prediction_to_json(const RegimePrediction& p);
json verdict_to_json(const LimitVerdict& v);

/// {game, eta, init, verdict, steps, events[], bound_n_max}.
json summary_to_json(const SymmetricGame& game, double eta, const Trajectory& tr);

/// Header t,p11,p12,p21,p22,u1,u2,delta1,delta2,W,V,flip; 17 significant digits.
void write_trajectory_csv(std::ostream& out, const Trajectory& tr);

/// Parsed numeric CSV: header plus rows of cells (empty cells kept as "").
struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;
};
/// Throws ParseError on ragged rows.
CsvTable read_csv(std::istream& in);

struct BankConfig {
    bank::CreditDistribution dist = bank::CreditDistribution::truncated_gaussian(0.5, 0.2);
    bank::BankParams params{};
    bank::ThresholdRule rule = bank::ThresholdRule::Rational;
    double eta = 0.1;
    bank::Weights init1{0.1, 0.5, 0.3, 0.1};
    bank::Weights init2{0.1, 0.3, 0.5, 0.1};
    std::int64_t horizon = 300'000;
};

/// {"dist":{"kind":"trunc_gauss","mu","sigma"} | {"kind":"piecewise_uniform","beta1","beta2"
/// [,"tau_l","tau_h"]}, "gamma_l", "gamma_h", "eta", "init1":[4], "init2":[4], "horizon",
/// "threshold_rule":"rational"|"reciprocal"}. Piecewise-uniform segment edges
/// default to the thresholds.
BankConfig bank_config_from_json(const json& j);

json bank_experiment_to_json(const BankConfig& cfg, const bank::BankExperiment& ex);

/// Header t,w1_0..w1_3,w2_0..w2_3.
void write_bank_csv(std::ostream& out, const bank::BankExperiment& ex);

json run_record_to_json(const RunRecord& r);
json report_to_json(const VerificationReport& r);

}  // namespace ewgame::io
