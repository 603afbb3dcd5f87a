#include "ewgame/json_io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "ewgame/errors.hpp"

namespace ewgame::io {

namespace {

double number_at(const json& j, const char* key) {
    if (!j.is_object() || !j.contains(key)) throw ParseError(std::string("missing field \"") + key + "\"");
    const json& v = j.at(key);
    if (!v.is_number()) throw ParseError(std::string("field \"") + key + "\" must be a number");
    const double x = v.get<double>();
    if (!std::isfinite(x)) throw ParseError(std::string("field \"") + key + "\" must be finite");
    return x;
}

double number_or(const json& j, const char* key, double fallback) {
    return j.contains(key) ? number_at(j, key) : fallback;
}

std::int64_t integer_or(const json& j, const char* key, std::int64_t fallback) {
    if (!j.contains(key)) return fallback;
    const json& v = j.at(key);
    if (!v.is_number_integer()) throw ParseError(std::string("field \"") + key + "\" must be an integer");
    return v.get<std::int64_t>();
}

template <std::size_t N>
std::array<double, N> vector_at(const json& j, const char* key) {
    if (!j.contains(key)) throw ParseError(std::string("missing field \"") + key + "\"");
    const json& v = j.at(key);
    if (!v.is_array() || v.size() != N) {
        throw ParseError(std::string("field \"") + key + "\" must be an array of " + std::to_string(N) + " numbers");
    }
    std::array<double, N> out{};
    for (std::size_t k = 0; k < N; ++k) {
        if (!v[k].is_number()) throw ParseError(std::string("field \"") + key + "\" must hold numbers");
        out[k] = v[k].get<double>();
        if (!std::isfinite(out[k])) throw ParseError(std::string("field \"") + key + "\" must be finite");
    }
    return out;
}

template <typename E>
std::string str(E e) {
    return std::string(to_string(e));
}

std::string cell(double x) { return format_double(x); }

}  // namespace

std::string format_double(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

json parse_json(const std::string& text) {
    try {
        return json::parse(text);
    } catch (const json::parse_error& e) {
        throw ParseError(std::string("malformed JSON: ") + e.what());
    }
}

json read_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_json(ss.str());
}

SymmetricGame game_from_json(const json& j) {
    return SymmetricGame(number_at(j, "a"), number_at(j, "b"), number_at(j, "c"), number_at(j, "d"));
}

json game_to_json(const SymmetricGame& g) {
    return {{"a", g.a()}, {"b", g.b()}, {"c", g.c()}, {"d", g.d()}, {"eps1", g.eps1()}, {"eps2", g.eps2()}};
}

DynState init_from_json(const json& j) {
    if (!j.is_object()) throw ParseError("init must be an object");
    if (j.contains("u1") || j.contains("u2")) return DynState{1, number_at(j, "u1"), number_at(j, "u2")};
    const auto p1 = vector_at<2>(j, "p1");
    const auto p2 = vector_at<2>(j, "p2");
    try {
        return DynState::from_strategies(MixedStrategy(p1[0], p1[1]), MixedStrategy(p2[0], p2[1]));
    } catch (const InvalidParameter& e) {
        throw ParseError(std::string("invalid init: ") + e.what());
    }
}

json init_to_json(const DynState& s) {
    const MixedStrategy a = s.p1(), b = s.p2();
    return {{"t", s.t}, {"u1", s.u1}, {"u2", s.u2}, {"p1", {a.p1(), a.p2()}}, {"p2", {b.p1(), b.p2()}}};
}

RunConfig run_config_from_json(const json& j) {
    if (!j.is_object()) throw ParseError("config must be a JSON object");
    RunConfig cfg;
    if (!j.contains("game")) throw ParseError("missing field \"game\"");
    cfg.game = game_from_json(j.at("game"));
    if (!j.contains("init")) throw ParseError("missing field \"init\"");
    cfg.init = init_from_json(j.at("init"));
    cfg.eta = number_or(j, "eta", cfg.eta);
    cfg.horizon = integer_or(j, "horizon", cfg.horizon);
    return cfg;
}

json prediction_to_json(const RegimePrediction& p) {
    json pure = json::array();
    for (ActionPair pair : p.pure) pure.push_back(to_string(pair));
    json families = json::array();
    for (const MixedFamily& f : p.families) families.push_back(to_string(f));
    json out = {
        {"row", str(p.row)},
        {"predicted", p.describe()},
        {"pure", pure},
        {"strict_mixed", p.strict_mixed},
        {"mixed_families", families},
        {"rate", str(p.rate)},
        {"stationary", p.stationary},
        {"relabeled", p.relabeled},
        {"no_guarantee", p.no_guarantee},
    };
    out["effective_row"] = p.effective_row ? json(str(*p.effective_row)) : json(nullptr);
    out["expected_pair"] = p.expected_pair ? json(to_string(*p.expected_pair)) : json(nullptr);
    out["mixed_profile"] =
        p.mixed_profile ? json::array({p.mixed_profile->p1(), p.mixed_profile->p2()}) : json(nullptr);
    if (p.eta_bound) {
        out["eta_requirement"] = {{"kind", "UpperBound"}, {"value", *p.eta_bound}};
    } else {
        out["eta_requirement"] = {{"kind", "None"}};
    }
    return out;
}

json verdict_to_json(const LimitVerdict& v) {
    static const char* names[] = {"PureNE", "StrictMixedNE", "MixedFamilyNE", "PeriodTwoOscillation", "Undecided"};
    json out = {{"kind", names[static_cast<int>(v.kind)]}, {"label", v.to_string()}, {"residual", v.residual}};
    if (v.kind == VerdictKind::PureNE) out["pair"] = to_string(v.pair);
    if (v.kind == VerdictKind::StrictMixedNE || v.kind == VerdictKind::MixedFamilyNE) {
        out["p1"] = {v.s1.p1(), v.s1.p2()};
        out["p2"] = {v.s2.p1(), v.s2.p2()};
    }
    return out;
}

json summary_to_json(const SymmetricGame& game, double eta, const Trajectory& tr) {
    json events = json::array();
    for (const FlipEvent& e : tr.events) {
        events.push_back({{"t", e.t}, {"kind", str(e.kind)}, {"uhat1", e.uhat1}, {"uhat2", e.uhat2}});
    }
    json out = {
        {"game", game_to_json(game)},
        {"eta", eta},
        {"init", init_to_json(tr.initial)},
        {"verdict", verdict_to_json(tr.verdict)},
        {"steps", tr.steps},
        {"events", events},
        {"two_flips", tr.two_flips},
        {"one_flips", tr.one_flips},
        {"final", init_to_json(tr.final_state)},
    };
    out["bound_n_max"] = nullptr;
    if (game.eps1() < 0.0 && game.eps2() > 0.0) {
        const double w1 = std::abs(tr.initial.u1 - tr.initial.u2);
        if (w1 > 0.0) out["bound_n_max"] = two_flip_bound(game, eta, w1).n_max;
    }
    return out;
}

void write_trajectory_csv(std::ostream& out, const Trajectory& tr) {
    out << "t,p11,p12,p21,p22,u1,u2,delta1,delta2,W,V,flip\n";
    for (const TrajectoryPoint& pt : tr.states) {
        const MixedStrategy a = pt.state.p1(), b = pt.state.p2();
        out << pt.state.t << ',' << cell(a.p1()) << ',' << cell(a.p2()) << ',' << cell(b.p1()) << ','
            << cell(b.p2()) << ',' << cell(pt.state.u1) << ',' << cell(pt.state.u2) << ',' << cell(pt.delta1)
            << ',' << cell(pt.delta2) << ',' << (pt.w ? cell(*pt.w) : "") << ',' << (pt.v ? cell(*pt.v) : "")
            << ',' << (pt.flip ? str(*pt.flip) : "") << '\n';
    }
}

CsvTable read_csv(std::istream& in) {
    const auto split = [](const std::string& line) {
        std::vector<std::string> cells;
        std::string cur;
        for (char ch : line) {
            if (ch == ',') {
                cells.push_back(cur);
                cur.clear();
            } else if (ch != '\r') {
                cur += ch;
            }
        }
        cells.push_back(cur);
        return cells;
    };
    CsvTable t;
    std::string line;
    if (!std::getline(in, line)) throw ParseError("empty CSV");
    t.header = split(line);
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        auto row = split(line);
        if (row.size() != t.header.size()) throw ParseError("ragged CSV row");
        t.rows.push_back(std::move(row));
    }
    return t;
}

BankConfig bank_config_from_json(const json& j) {
    if (!j.is_object()) throw ParseError("bank config must be a JSON object");
    BankConfig cfg;
    if (j.contains("threshold_rule")) {
        if (!j.at("threshold_rule").is_string()) throw ParseError("threshold_rule must be a string");
        cfg.rule = bank::parse_threshold_rule(j.at("threshold_rule").get<std::string>());
    }
    try {
        cfg.params = bank::BankParams::from_rates(number_at(j, "gamma_l"), number_at(j, "gamma_h"), cfg.rule);
        if (j.contains("tau_l")) cfg.params.tau_l = number_at(j, "tau_l");
        if (j.contains("tau_h")) cfg.params.tau_h = number_at(j, "tau_h");
        cfg.params.validate();

        if (!j.contains("dist") || !j.at("dist").is_object()) throw ParseError("missing object \"dist\"");
        const json& d = j.at("dist");
        if (!d.contains("kind") || !d.at("kind").is_string()) throw ParseError("dist.kind must be a string");
        const std::string kind = d.at("kind").get<std::string>();
        if (kind == "trunc_gauss") {
            cfg.dist = bank::CreditDistribution::truncated_gaussian(number_at(d, "mu"), number_at(d, "sigma"));
        } else if (kind == "piecewise_uniform") {
            cfg.dist = bank::CreditDistribution::piecewise_uniform(
                number_at(d, "beta1"), number_at(d, "beta2"), number_or(d, "tau_l", cfg.params.tau_l),
                number_or(d, "tau_h", cfg.params.tau_h));
        } else {
            throw ParseError("dist.kind must be \"trunc_gauss\" or \"piecewise_uniform\"");
        }
    } catch (const InvalidParameter& e) {
        throw ParseError(std::string("invalid bank config: ") + e.what());
    }
    cfg.eta = number_or(j, "eta", cfg.eta);
    if (j.contains("init1")) cfg.init1 = vector_at<4>(j, "init1");
    if (j.contains("init2")) cfg.init2 = vector_at<4>(j, "init2");
    cfg.horizon = integer_or(j, "horizon", cfg.horizon);
    return cfg;
}

json bank_experiment_to_json(const BankConfig& cfg, const bank::BankExperiment& ex) {
    json matrix = json::array();
    for (const auto& row : ex.matrix) matrix.push_back(row);
    return {
        {"dist", cfg.dist.describe()},
        {"threshold_rule", str(cfg.rule)},
        {"params",
         {{"gamma_l", cfg.params.gamma_l},
          {"gamma_h", cfg.params.gamma_h},
          {"tau_l", cfg.params.tau_l},
          {"tau_h", cfg.params.tau_h}}},
        {"eta", cfg.eta},
        {"steps", ex.steps},
        {"utility_matrix", matrix},
        {"reduced_game", game_to_json(ex.reduced)},
        {"sign_regime", str(ex.reduced.sign_regime())},
        {"final1", ex.final1},
        {"final2", ex.final2},
        {"limit1", str(ex.limit1)},
        {"limit2", str(ex.limit2)},
        {"dominated_weight", ex.dominated_weight},
        {"reduced_verdict", verdict_to_json(ex.reduced_verdict)},
        {"agrees_with_reduced", ex.agrees_with_reduced},
    };
}

void write_bank_csv(std::ostream& out, const bank::BankExperiment& ex) {
    out << "t,w1_0,w1_1,w1_2,w1_3,w2_0,w2_1,w2_2,w2_3\n";
    for (const bank::BankRecord& r : ex.records) {
        out << r.t;
        for (double w : r.w1) out << ',' << cell(w);
        for (double w : r.w2) out << ',' << cell(w);
        out << '\n';
    }
}

json run_record_to_json(const RunRecord& r) {
    json out = {
        {"index", r.index},
        {"game", game_to_json(r.game)},
        {"init", init_to_json(r.init)},
        {"eta", r.eta},
        {"row", str(r.prediction.row)},
        {"prediction", r.prediction.describe()},
        {"verdict", r.verdict.to_string()},
        {"agreement", str(r.agreement)},
        {"steps", r.steps},
        {"two_flips", r.two_flips},
        {"one_flips", r.one_flips},
        {"envelopes_hold", r.envelopes_hold},
    };
    out["bound_n_max"] = r.bound_n_max ? json(*r.bound_n_max) : json(nullptr);
    return out;
}

json report_to_json(const VerificationReport& r) {
    json runs = json::array();
    for (const RunRecord& rec : r.runs) runs.push_back(run_record_to_json(rec));
    json rows = json::object();
    for (const auto& [row, counts] : r.per_row) {
        json agreements = json::object();
        for (const auto& [a, n] : counts.agreements) agreements[str(a)] = n;
        rows[str(row)] = {{"runs", counts.runs}, {"agreements", agreements}};
    }
    return {
        {"rng", r.rng_algorithm},
        {"seed", r.seed},
        {"run_count", r.runs.size()},
        {"mismatches", r.mismatches()},
        {"per_row", rows},
        {"runs", runs},
    };
}

}  // namespace ewgame::io
