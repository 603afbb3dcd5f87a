#include "ewgame/cli.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "ewgame/acceptance.hpp"
#include "ewgame/classifier.hpp"
#include "ewgame/dynamics.hpp"
#include "ewgame/equilibria.hpp"
#include "ewgame/errors.hpp"
#include "ewgame/harness.hpp"
#include "ewgame/json_io.hpp"

namespace ewgame {

namespace {

using io::json;

constexpr const char* kSchema = R"(Input schemas
  game      {"a": x, "b": x, "c": x, "d": x}            (finite numbers)
  init      {"p1": [p11, p12], "p2": [p21, p22]}         (strictly mixed)
            or {"u1": x, "u2": x}                        (log-ratios ln(p_i1/p_i2))
  classify / simulate --config FILE:
            {"game": game, "init": init, "eta": x, "horizon": n}
  sweep --config FILE:
            {"seed": n, "count": n, "payoff_range": [lo, hi],     (random games)
             "games": [game, ...],                                 (explicit games)
             "init_source": "random"|"identical"|"equal_opposite"|"explicit",
             "init": init, "etas": [x, ...], "horizon": n, "threads": n}
  verify-ce --config FILE:
            {"game": game, "nu": [nu11, nu12, nu21, nu22]}
  bank --config FILE:
            {"dist": {"kind": "trunc_gauss", "mu": x, "sigma": x}
                   | {"kind": "piecewise_uniform", "beta1": x, "beta2": x},
             "gamma_l": x, "gamma_h": x, "eta": x, "init1": [4], "init2": [4],
             "horizon": n, "threshold_rule": "rational"|"reciprocal"}
Flag shorthands
  --game a,b,c,d   --init p11,p21   --nu n11,n12,n21,n22   --eta x[,x...]
Exit codes: 0 success, 1 prediction mismatch or failed check, 2 usage error
)";

/// Usage error carrying a message; reported with the schema and exit code 2.
class UsageError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

std::vector<double> parse_numbers(const std::string& text, std::size_t expected, const char* flag) {
    std::vector<double> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        std::size_t used = 0;
        double x = 0.0;
        try {
            x = std::stod(item, &used);
        } catch (const std::exception&) {
            throw UsageError(std::string(flag) + ": '" + item + "' is not a number");
        }
        if (used != item.size() || !std::isfinite(x)) {
            throw UsageError(std::string(flag) + ": '" + item + "' is not a finite number");
        }
        out.push_back(x);
    }
    if (expected != 0 && out.size() != expected) {
        throw UsageError(std::string(flag) + " expects " + std::to_string(expected) + " comma-separated numbers");
    }
    if (out.empty()) throw UsageError(std::string(flag) + " expects at least one number");
    return out;
}

SymmetricGame game_from_flag(const std::string& text) {
    const auto v = parse_numbers(text, 4, "--game");
    return SymmetricGame(v[0], v[1], v[2], v[3]);
}

DynState init_from_flag(const std::string& text) {
    const auto v = parse_numbers(text, 2, "--init");
    for (double p : v) {
        if (!(p > 0.0 && p < 1.0)) throw UsageError("--init probabilities must lie strictly inside (0, 1)");
    }
    return DynState::from_strategies(MixedStrategy::from_p1(v[0]), MixedStrategy::from_p1(v[1]));
}

void ensure_dir(const std::string& dir) {
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) throw Error("cannot create output directory " + dir + ": " + ec.message());
}

void write_file(const std::filesystem::path& path, const std::string& content) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw Error("cannot write " + path.string());
    f << content;
}

std::string dump(const json& j) { return j.dump(2) + "\n"; }

/// Options shared by most subcommands.
struct Common {
    std::string config;
    std::string out_dir;
    std::string format = "json";
    std::string game;
    std::string init;
    std::string eta;
    std::int64_t horizon = -1;
    std::uint64_t seed = 0;
    bool seed_given = false;
};

io::RunConfig load_run_config(const Common& c) {
    io::RunConfig cfg;
    if (!c.config.empty()) {
        cfg = io::run_config_from_json(io::read_json_file(c.config));
    } else {
        if (c.game.empty() || c.init.empty()) throw UsageError("provide --config FILE, or both --game and --init");
        cfg.game = game_from_flag(c.game);
        cfg.init = init_from_flag(c.init);
    }
    if (!c.eta.empty()) cfg.eta = parse_numbers(c.eta, 1, "--eta")[0];
    if (c.horizon >= 0) cfg.horizon = c.horizon;
    if (!(cfg.eta > 0.0)) throw UsageError("eta must be > 0");
    if (cfg.horizon < 1) throw UsageError("horizon must be >= 1");
    return cfg;
}

int run_classify(const Common& c, std::ostream& out) {
    const io::RunConfig cfg = load_run_config(c);
    const RegimePrediction p = classify(cfg.game, cfg.init, cfg.eta);
    json j = io::prediction_to_json(p);
    j["game"] = io::game_to_json(cfg.game);
    j["init"] = io::init_to_json(cfg.init);
    j["eta"] = cfg.eta;
    if (!c.out_dir.empty()) {
        ensure_dir(c.out_dir);
        write_file(std::filesystem::path(c.out_dir) / "prediction.json", dump(j));
    }
    out << dump(j);
    return kExitOk;
}

int run_simulate(const Common& c, std::ostream& out) {
    const io::RunConfig cfg = load_run_config(c);
    const RegimePrediction p = classify(cfg.game, cfg.init, cfg.eta);
    const Trajectory tr = simulate(cfg.game, cfg.init, cfg.eta, cfg.horizon);
    const Agreement agreement = check_prediction(p, tr.verdict);
    json summary = io::summary_to_json(cfg.game, cfg.eta, tr);
    summary["prediction"] = io::prediction_to_json(p);
    summary["agreement"] = std::string(to_string(agreement));

    std::ostringstream csv;
    io::write_trajectory_csv(csv, tr);
    if (!c.out_dir.empty()) {
        ensure_dir(c.out_dir);
        write_file(std::filesystem::path(c.out_dir) / "trajectory.csv", csv.str());
        write_file(std::filesystem::path(c.out_dir) / "summary.json", dump(summary));
    }
    out << (c.format == "csv" ? csv.str() : dump(summary));
    return agreement == Agreement::Mismatch ? kExitMismatch : kExitOk;
}

struct SweepFlags {
    bool random = false;
    int count = -1;
};

SweepConfig load_sweep_config(const Common& c, const SweepFlags& f) {
    SweepConfig cfg;
    bool seed_known = c.seed_given;
    if (!c.config.empty()) {
        const json j = io::read_json_file(c.config);
        if (!j.is_object()) throw ParseError("sweep config must be a JSON object");
        if (j.contains("games")) {
            if (!j.at("games").is_array()) throw ParseError("\"games\" must be an array");
            cfg.game_source = SweepConfig::GameSource::Explicit;
            for (const json& g : j.at("games")) cfg.games.push_back(io::game_from_json(g));
        }
        if (j.contains("seed")) {
            if (!j.at("seed").is_number_unsigned()) throw ParseError("\"seed\" must be a non-negative integer");
            cfg.seed = j.at("seed").get<std::uint64_t>();
            seed_known = true;
        }
        if (j.contains("count")) {
            if (!j.at("count").is_number_integer()) throw ParseError("\"count\" must be an integer");
            cfg.count = j.at("count").get<int>();
        }
        if (j.contains("payoff_range")) {
            const json& r = j.at("payoff_range");
            if (!r.is_array() || r.size() != 2 || !r[0].is_number() || !r[1].is_number()) {
                throw ParseError("\"payoff_range\" must be [lo, hi]");
            }
            cfg.payoff_lo = r[0].get<double>();
            cfg.payoff_hi = r[1].get<double>();
        }
        if (j.contains("init")) {
            cfg.init = io::init_from_json(j.at("init"));
            cfg.init_source = SweepConfig::InitSource::Explicit;
        }
        if (j.contains("init_source")) {
            if (!j.at("init_source").is_string()) throw ParseError("\"init_source\" must be a string");
            const std::string s = j.at("init_source").get<std::string>();
            if (s == "random") {
                cfg.init_source = SweepConfig::InitSource::Random;
            } else if (s == "identical") {
                cfg.init_source = SweepConfig::InitSource::Identical;
            } else if (s == "equal_opposite") {
                cfg.init_source = SweepConfig::InitSource::EqualOpposite;
            } else if (s == "explicit") {
                if (!j.contains("init")) throw ParseError("init_source \"explicit\" needs \"init\"");
                cfg.init_source = SweepConfig::InitSource::Explicit;
            } else {
                throw ParseError("unknown init_source \"" + s + "\"");
            }
        }
        if (j.contains("etas")) {
            if (!j.at("etas").is_array()) throw ParseError("\"etas\" must be an array");
            cfg.etas.clear();
            for (const json& e : j.at("etas")) {
                if (!e.is_number()) throw ParseError("\"etas\" must hold numbers");
                cfg.etas.push_back(e.get<double>());
            }
        }
        if (j.contains("horizon")) {
            if (!j.at("horizon").is_number_integer()) throw ParseError("\"horizon\" must be an integer");
            cfg.horizon = j.at("horizon").get<std::int64_t>();
        }
        if (j.contains("threads")) {
            if (!j.at("threads").is_number_unsigned()) throw ParseError("\"threads\" must be a non-negative integer");
            cfg.threads = j.at("threads").get<unsigned>();
        }
    } else if (!f.random && c.game.empty()) {
        throw UsageError("sweep needs --config FILE, --random, or --game");
    }
    if (f.random) cfg.game_source = SweepConfig::GameSource::Random;
    if (!c.game.empty()) {
        cfg.game_source = SweepConfig::GameSource::Explicit;
        cfg.games = {game_from_flag(c.game)};
    }
    if (!c.init.empty()) {
        cfg.init = init_from_flag(c.init);
        cfg.init_source = SweepConfig::InitSource::Explicit;
    }
    if (c.seed_given) cfg.seed = c.seed;
    if (f.count >= 0) cfg.count = f.count;
    if (!c.eta.empty()) cfg.etas = parse_numbers(c.eta, 0, "--eta");
    if (c.horizon >= 0) cfg.horizon = c.horizon;

    const bool needs_seed = cfg.game_source == SweepConfig::GameSource::Random ||
                            cfg.init_source != SweepConfig::InitSource::Explicit;
    if (needs_seed && !seed_known) throw UsageError("random sources need an explicit --seed (or \"seed\" in the config)");
    cfg.record_states = !c.out_dir.empty();
    try {
        cfg.validate();
    } catch (const InvalidParameter& e) {
        throw UsageError(e.what());
    }
    return cfg;
}

int run_sweep_cmd(const Common& c, const SweepFlags& f, std::ostream& out) {
    const SweepConfig cfg = load_sweep_config(c, f);
    const VerificationReport report = run_sweep(cfg);
    const json j = io::report_to_json(report);

    std::ostringstream table;
    table << "index,row,prediction,verdict,agreement,steps,two_flips,one_flips,bound_n_max\n";
    for (const RunRecord& r : report.runs) {
        table << r.index << ',' << to_string(r.prediction.row) << ",\"" << r.prediction.describe() << "\",\""
              << r.verdict.to_string() << "\"," << to_string(r.agreement) << ',' << r.steps << ',' << r.two_flips
              << ',' << r.one_flips << ',' << (r.bound_n_max ? io::format_double(*r.bound_n_max) : "") << '\n';
    }
    if (!c.out_dir.empty()) {
        const std::filesystem::path dir(c.out_dir);
        ensure_dir((dir / "runs").string());
        write_file(dir / "report.json", dump(j));
        write_file(dir / "runs.csv", table.str());
        for (const RunRecord& r : report.runs) {
            if (!r.trajectory) continue;
            char name[32];
            std::snprintf(name, sizeof name, "run_%05zu.csv", r.index);
            std::ostringstream csv;
            io::write_trajectory_csv(csv, *r.trajectory);
            write_file(dir / "runs" / name, csv.str());
        }
    }
    out << (c.format == "csv" ? table.str() : dump(j));
    return report.mismatches() > 0 ? kExitMismatch : kExitOk;
}

int run_verify_ce(const Common& c, const std::string& nu_flag, std::ostream& out) {
    SymmetricGame game(0.0, 0.0, 0.0, 0.0);
    std::vector<double> nu;
    if (!c.config.empty()) {
        const json j = io::read_json_file(c.config);
        if (!j.is_object() || !j.contains("game") || !j.contains("nu")) {
            throw ParseError("verify-ce config needs \"game\" and \"nu\"");
        }
        game = io::game_from_json(j.at("game"));
        const json& n = j.at("nu");
        if (!n.is_array() || n.size() != 4) throw ParseError("\"nu\" must be an array of 4 numbers");
        for (const json& x : n) {
            if (!x.is_number()) throw ParseError("\"nu\" must hold numbers");
            nu.push_back(x.get<double>());
        }
    }
    if (!c.game.empty()) game = game_from_flag(c.game);
    if (!nu_flag.empty()) nu = parse_numbers(nu_flag, 4, "--nu");
    if (nu.empty()) throw UsageError("verify-ce needs --nu n11,n12,n21,n22 (or \"nu\" in --config)");
    if (c.config.empty() && c.game.empty()) throw UsageError("verify-ce needs --game or --config");

    const JointDistribution dist(nu[0], nu[1], nu[2], nu[3]);
    const bool brute = ce_membership_bruteforce(game, dist);
    const bool closed = ce_membership_closed_form(game, dist);
    const auto margins = ce_obedience_margins(game, dist);
    const json j = {
        {"game", io::game_to_json(game)},
        {"sign_regime", std::string(to_string(game.sign_regime()))},
        {"nu", nu},
        {"bruteforce", brute},
        {"closed_form", closed},
        {"obedience_margins", margins},
        {"closed_form_margins", ce_closed_form_margins(game, dist)},
        {"agree", brute == closed},
    };
    out << dump(j);
    return brute == closed ? kExitOk : kExitMismatch;
}

int run_oscillate(const Common& c, double a, const std::string& mode, std::ostream& out) {
    const std::int64_t steps = c.horizon >= 0 ? c.horizon : 1000;
    if (steps < 2) throw UsageError("--horizon must be >= 2 for a period-2 residual");
    const OscillationSetup s = mode == "opposite" ? construct_oscillation_opposite(a) : construct_oscillation_identical(a);
    std::vector<DynState> states{s.init};
    SimulateOptions so;
    so.stop_on_verdict = false;
    so.record_states = false;
    so.on_step = [&](const DynState&, const DynState& next) { states.push_back(next); };
    const Trajectory tr = simulate(s.game, s.init, s.eta, steps, so);
    double residual = 0.0, movement = INFINITY;
    for (std::size_t t = 0; t + 1 < states.size(); ++t) {
        movement = std::min(movement, std::max(std::abs(states[t + 1].u1 - states[t].u1),
                                               std::abs(states[t + 1].u2 - states[t].u2)));
        if (t + 2 < states.size()) {
            residual = std::max({residual, std::abs(states[t + 2].u1 - states[t].u1),
                                 std::abs(states[t + 2].u2 - states[t].u2)});
        }
    }
    const double eta_gamma = s.eta * (std::abs(s.game.eps1()) + std::abs(s.game.eps2()));
    const bool ok = residual < 1e-9 && movement > 0.1 && eta_gamma > 8.0;
    const json j = {
        {"mode", mode},
        {"a", a},
        {"game", io::game_to_json(s.game)},
        {"init", io::init_to_json(s.init)},
        {"eta", s.eta},
        {"eta_gamma", eta_gamma},
        {"steps", tr.steps},
        {"residual", residual},
        {"min_movement", movement},
        {"verdict", io::verdict_to_json(tr.verdict)},
        {"oscillates", ok},
    };
    if (!c.out_dir.empty()) {
        ensure_dir(c.out_dir);
        write_file(std::filesystem::path(c.out_dir) / "oscillation.json", dump(j));
    }
    out << dump(j);
    return ok ? kExitOk : kExitMismatch;
}

int run_bank(const Common& c, std::ostream& out) {
    if (c.config.empty()) throw UsageError("bank needs --config FILE");
    io::BankConfig cfg = io::bank_config_from_json(io::read_json_file(c.config));
    if (!c.eta.empty()) cfg.eta = parse_numbers(c.eta, 1, "--eta")[0];
    if (c.horizon >= 0) cfg.horizon = c.horizon;
    const bank::BankExperiment ex =
        bank::run_bank_experiment(cfg.dist, cfg.params, cfg.init1, cfg.init2, cfg.eta, cfg.horizon);
    json j = io::bank_experiment_to_json(cfg, ex);
    const bank::DominanceReport dom = bank::dominance_check(cfg.dist, cfg.params);
    j["dominance_all_hold"] = dom.all_hold();
    j["dominance_all_strict"] = dom.all_strict();

    std::ostringstream csv;
    io::write_bank_csv(csv, ex);
    if (!c.out_dir.empty()) {
        ensure_dir(c.out_dir);
        write_file(std::filesystem::path(c.out_dir) / "bank.csv", csv.str());
        write_file(std::filesystem::path(c.out_dir) / "bank.json", dump(j));
    }
    out << (c.format == "csv" ? csv.str() : dump(j));
    return kExitOk;
}

int run_verify_all(const Common& c, const std::vector<int>& only, unsigned threads, std::ostream& out) {
    verify::AcceptanceOptions opts;
    opts.seed = c.seed_given ? c.seed : CounterRng::kAcceptanceSeed;
    opts.threads = threads;
    for (int id : only) {
        if (id < 1 || id > verify::kCriterionCount) throw UsageError("--only takes criterion numbers 1..10");
    }
    opts.only = only;
    int passed = 0, total = 0;
    json results = json::array();
    verify::run_acceptance(opts, [&](const verify::CriterionResult& r) {
        out << verify::format_result(r) << '\n' << std::flush;
        ++total;
        passed += r.pass;
        results.push_back({{"id", r.id}, {"title", r.title}, {"pass", r.pass}, {"detail", r.detail}});
    });
    out << passed << '/' << total << " acceptance criteria passed\n";
    if (!c.out_dir.empty()) {
        ensure_dir(c.out_dir);
        const json j = {{"seed", opts.seed}, {"rng", std::string(CounterRng::kAlgorithm)}, {"criteria", results}};
        write_file(std::filesystem::path(c.out_dir) / "acceptance.json", dump(j));
    }
    return passed == total ? kExitOk : kExitMismatch;
}

}  // namespace

int cli_main(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Exponential-weights dynamics on 2x2 symmetric games", "ewgame"};
    app.require_subcommand(1);
    app.footer(kSchema);

    Common c;
    using Adder = std::function<void(CLI::App*)>;
    const Adder add_config = [&](CLI::App* sub) { sub->add_option("--config", c.config, "JSON config file"); };
    const Adder add_out = [&](CLI::App* sub) { sub->add_option("--out", c.out_dir, "Output directory"); };
    const Adder add_format = [&](CLI::App* sub) {
        sub->add_option("--format", c.format, "Output format on stdout")->check(CLI::IsMember({"csv", "json"}));
    };
    const Adder add_game = [&](CLI::App* sub) {
        sub->add_option("--game", c.game, "Payoffs a,b,c,d");
        sub->add_option("--init", c.init, "Initial p11,p21 (probability of theta1 per player)");
    };
    const Adder add_eta = [&](CLI::App* sub) { sub->add_option("--eta", c.eta, "Step size"); };
    const Adder add_horizon = [&](CLI::App* sub) {
        sub->add_option("--horizon", c.horizon, "Maximum number of steps")->check(CLI::NonNegativeNumber);
    };
    const Adder add_seed = [&](CLI::App* sub) {
        sub->add_option("--seed", c.seed, "RNG seed")->each([&](const std::string&) { c.seed_given = true; });
    };

    CLI::App* classify_cmd = app.add_subcommand("classify", "Predict the limit for a game, init and step size");
    for (auto add : {add_config, add_out, add_game, add_eta, add_horizon}) add(classify_cmd);

    CLI::App* simulate_cmd = app.add_subcommand("simulate", "Run the dynamic; trajectory CSV + summary JSON");
    for (auto add : {add_config, add_out, add_format, add_game, add_eta, add_horizon}) add(simulate_cmd);

    SweepFlags sweep_flags;
    CLI::App* sweep_cmd = app.add_subcommand("sweep", "Verify predictions over many runs");
    for (auto add : {add_config, add_out, add_format, add_game, add_eta, add_horizon, add_seed}) add(sweep_cmd);
    sweep_cmd->add_flag("--random", sweep_flags.random, "Draw random games");
    sweep_cmd->add_option("--count", sweep_flags.count, "Number of random games")->check(CLI::PositiveNumber);

    std::string nu_flag;
    CLI::App* ce_cmd = app.add_subcommand("verify-ce", "Closed-form vs brute-force correlated-equilibrium test");
    add_config(ce_cmd);
    ce_cmd->add_option("--game", c.game, "Payoffs a,b,c,d");
    ce_cmd->add_option("--nu", nu_flag, "Joint distribution nu11,nu12,nu21,nu22");

    double osc_a = 1.0;
    std::string osc_mode = "identical";
    CLI::App* osc_cmd = app.add_subcommand("oscillate", "Build and run a period-2 oscillation construction");
    add_out(osc_cmd);
    add_horizon(osc_cmd);
    osc_cmd->add_option("--a", osc_a, "Oscillation amplitude a > 0");
    osc_cmd->add_option("--mode", osc_mode, "identical or opposite")->check(CLI::IsMember({"identical", "opposite"}));

    CLI::App* bank_cmd = app.add_subcommand("bank", "Run the 4-action bank-lending experiment");
    for (auto add : {add_config, add_out, add_format, add_eta, add_horizon}) add(bank_cmd);

    std::vector<int> only;
    unsigned threads = 0;
    CLI::App* all_cmd = app.add_subcommand("verify-all", "Run the full acceptance suite");
    add_out(all_cmd);
    add_seed(all_cmd);
    all_cmd->add_option("--only", only, "Criterion numbers to run")->delimiter(',');
    all_cmd->add_option("--threads", threads, "Worker threads (0 = all cores)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        out << app.help();
        return kExitOk;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n\n" << app.help();
        return kExitUsage;
    }

    try {
        if (*classify_cmd) return run_classify(c, out);
        if (*simulate_cmd) return run_simulate(c, out);
        if (*sweep_cmd) return run_sweep_cmd(c, sweep_flags, out);
        if (*ce_cmd) return run_verify_ce(c, nu_flag, out);
        if (*osc_cmd) return run_oscillate(c, osc_a, osc_mode, out);
        if (*bank_cmd) return run_bank(c, out);
        if (*all_cmd) return run_verify_all(c, only, threads, out);
    } catch (const UsageError& e) {
        err << "usage error: " << e.what() << "\n\n" << kSchema;
        return kExitUsage;
    } catch (const ParseError& e) {
        err << "config error: " << e.what() << "\n\n" << kSchema;
        return kExitUsage;
    } catch (const InvalidParameter& e) {
        err << "invalid parameter: " << e.what() << "\n\n" << kSchema;
        return kExitUsage;
    } catch (const DegenerateGame& e) {
        err << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const Error& e) {
        err << "error: " << e.what() << "\n";
        return kExitMismatch;
    }
    return kExitUsage;
}

int cli_main(int argc, const char* const* argv) { return cli_main(argc, argv, std::cout, std::cerr); }

}  // namespace ewgame
