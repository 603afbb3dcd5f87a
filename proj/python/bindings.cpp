#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "ewgame/bank.hpp"
#include "ewgame/classifier.hpp"
#include "ewgame/dynamics.hpp"
#include "ewgame/equilibria.hpp"
#include "ewgame/errors.hpp"
#include "ewgame/game.hpp"

namespace py = pybind11;
using namespace ewgame;

namespace {

py::dict trajectory_summary(const Trajectory& tr) {
    py::dict d;
    d["verdict"] = tr.verdict.to_string();
    d["steps"] = tr.steps;
    d["two_flips"] = tr.two_flips;
    d["one_flips"] = tr.one_flips;
    d["final_u"] = py::make_tuple(tr.final_state.u1, tr.final_state.u2);
    d["w_nondecreasing"] = tr.w_nondecreasing;
    py::list t, u1, u2;
    for (const TrajectoryPoint& pt : tr.states) {
        t.append(pt.state.t);
        u1.append(pt.state.u1);
        u2.append(pt.state.u2);
    }
    d["t"] = t;
    d["u1"] = u1;
    d["u2"] = u2;
    return d;
}

}  // namespace

PYBIND11_MODULE(_ewgame, m) {
    m.doc() = "Exponential-weights dynamics on 2x2 symmetric games";

    py::register_exception<Error>(m, "EwgameError", PyExc_RuntimeError);
    py::register_exception<InvalidParameter>(m, "InvalidParameter", PyExc_ValueError);
    py::register_exception<DegenerateGame>(m, "DegenerateGame", PyExc_ValueError);
    py::register_exception<WrongRegime>(m, "WrongRegime", PyExc_ValueError);

    py::enum_<Action>(m, "Action").value("Theta1", Action::Theta1).value("Theta2", Action::Theta2);

    py::class_<SymmetricGame>(m, "SymmetricGame")
        .def(py::init<double, double, double, double>(), py::arg("a"), py::arg("b"), py::arg("c"), py::arg("d"))
        .def_static("from_epsilons", &SymmetricGame::from_epsilons, py::arg("eps1"), py::arg("eps2"))
        .def_property_readonly("a", &SymmetricGame::a)
        .def_property_readonly("b", &SymmetricGame::b)
        .def_property_readonly("c", &SymmetricGame::c)
        .def_property_readonly("d", &SymmetricGame::d)
        .def_property_readonly("eps1", &SymmetricGame::eps1)
        .def_property_readonly("eps2", &SymmetricGame::eps2)
        .def_property_readonly("sign_regime", [](const SymmetricGame& g) { return std::string(to_string(g.sign_regime())); })
        .def("relabeled", &SymmetricGame::relabeled)
        .def("__repr__", [](const SymmetricGame& g) {
            return "SymmetricGame(" + std::to_string(g.a()) + ", " + std::to_string(g.b()) + ", " +
                   std::to_string(g.c()) + ", " + std::to_string(g.d()) + ")";
        });

    py::class_<DynState>(m, "DynState")
        .def(py::init([](double u1, double u2, std::int64_t t) { return DynState{t, u1, u2}; }), py::arg("u1"),
             py::arg("u2"), py::arg("t") = 1)
        .def_static(
            "from_probabilities",
            [](double p11, double p21) {
                return DynState::from_strategies(MixedStrategy::from_p1(p11), MixedStrategy::from_p1(p21));
            },
            py::arg("p11"), py::arg("p21"))
        .def_readwrite("t", &DynState::t)
        .def_readwrite("u1", &DynState::u1)
        .def_readwrite("u2", &DynState::u2)
        .def_property_readonly("p11", [](const DynState& s) { return s.p1().p1(); })
        .def_property_readonly("p21", [](const DynState& s) { return s.p2().p1(); });

    m.def("ew_step", [](const SymmetricGame& g, const DynState& s, double eta) { return ew_step(g, s, eta); },
          py::arg("game"), py::arg("state"), py::arg("eta"));

    m.def(
        "classify",
        [](const SymmetricGame& g, const DynState& s, double eta) {
            const RegimePrediction p = classify(g, s, eta);
            py::dict d;
            d["row"] = std::string(to_string(p.row));
            d["predicted"] = p.describe();
            d["rate"] = std::string(to_string(p.rate));
            d["no_guarantee"] = p.no_guarantee;
            if (p.effective_row) d["effective_row"] = std::string(to_string(*p.effective_row));
            if (p.expected_pair) d["expected_pair"] = to_string(*p.expected_pair);
            if (p.eta_bound) d["eta_bound"] = *p.eta_bound;
            return d;
        },
        py::arg("game"), py::arg("init"), py::arg("eta"));

    m.def(
        "simulate",
        [](const SymmetricGame& g, const DynState& s, double eta, std::int64_t horizon) {
            const Trajectory tr = simulate(g, s, eta, horizon);
            py::dict d = trajectory_summary(tr);
            d["agreement"] = std::string(to_string(check_prediction(classify(g, s, eta), tr.verdict)));
            return d;
        },
        py::arg("game"), py::arg("init"), py::arg("eta"), py::arg("horizon") = 1'000'000);

    m.def(
        "symmetric_mixed_equilibrium",
        [](const SymmetricGame& g) {
            const MixedStrategy s = symmetric_mixed_equilibrium(g);
            return py::make_tuple(s.p1(), s.p2());
        },
        py::arg("game"));

    m.def(
        "ce_membership",
        [](const SymmetricGame& g, double n11, double n12, double n21, double n22) {
            const JointDistribution nu(n11, n12, n21, n22);
            return py::make_tuple(ce_membership_closed_form(g, nu), ce_membership_bruteforce(g, nu));
        },
        py::arg("game"), py::arg("nu11"), py::arg("nu12"), py::arg("nu21"), py::arg("nu22"),
        "Returns (closed_form, bruteforce) membership verdicts.");

    m.def(
        "two_flip_bound",
        [](const SymmetricGame& g, double eta, double w1) {
            const TwoFlipBound b = two_flip_bound(g, eta, w1);
            return py::make_tuple(b.n_max, b.beta, b.c);
        },
        py::arg("game"), py::arg("eta"), py::arg("w1"));

    m.def(
        "construct_oscillation",
        [](double a, const std::string& mode) {
            const OscillationSetup s =
                mode == "opposite" ? construct_oscillation_opposite(a) : construct_oscillation_identical(a);
            return py::make_tuple(s.game, s.init, s.eta);
        },
        py::arg("a"), py::arg("mode") = "identical");

    m.def("mixed_limit_ratio_bound", &mixed_limit_ratio_bound, py::arg("eps2"), py::arg("eta"), py::arg("r_j"),
          py::arg("a_cap"));

    m.def(
        "bank_reduced_game",
        [](double mu, double sigma, double gamma_l, double gamma_h) {
            return bank::reduce_to_2x2(bank::CreditDistribution::truncated_gaussian(mu, sigma),
                                       bank::BankParams::from_rates(gamma_l, gamma_h));
        },
        py::arg("mu"), py::arg("sigma"), py::arg("gamma_l"), py::arg("gamma_h"),
        "2x2 reduction of the bank game for a truncated-Gaussian score distribution.");
}
