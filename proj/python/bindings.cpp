#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "ttqi/angular.hpp"
#include "ttqi/errors.hpp"
#include "ttqi/lo_production.hpp"
#include "ttqi/luminosity.hpp"
#include "ttqi/pdf.hpp"
#include "ttqi/phase_space.hpp"
#include "ttqi/spinpair.hpp"
#include "ttqi/tomography.hpp"

namespace py = pybind11;
using namespace ttqi;

namespace {

using EventArray = Eigen::Matrix<double, Eigen::Dynamic, 6, Eigen::RowMajor>;

ColliderConfig make_collider(const std::string& beam, double sqrt_s, double m_top, double alpha_s,
                             const std::string& q_scale, const std::string& pdf) {
    ColliderConfig c;
    if (beam != "pp" && beam != "ppbar") throw Error(ErrorKind::DomainError, "beam must be 'pp' or 'ppbar'");
    c.beam = beam == "pp" ? Beam::PP : Beam::PPBAR;
    c.sqrt_s = sqrt_s;
    c.m_top = m_top;
    c.alpha_s = alpha_s;
    c.q_scale = QScale::parse(q_scale);
    c.pdf = make_pdf(pdf);
    c.validate();
    return c;
}

EventArray to_array(const EventSample& s) {
    EventArray a(static_cast<Eigen::Index>(s.n()), 6);
    for (std::size_t i = 0; i < s.n(); ++i) {
        a.row(i).head<3>() = s.events[i].l_plus.transpose();
        a.row(i).tail<3>() = s.events[i].l_minus.transpose();
    }
    return a;
}

EventSample from_array(const EventArray& a) {
    EventSample s;
    s.events.reserve(a.rows());
    for (Eigen::Index i = 0; i < a.rows(); ++i)
        s.events.push_back({a.row(i).head<3>().transpose(), a.row(i).tail<3>().transpose()});
    return s;
}

py::dict estimate_dict(const StateEstimate& e) {
    py::dict d;
    d["estimate"] = e.estimate;
    d["std_error"] = e.std_error;
    d["d"] = e.d;
    d["d_error"] = e.d_error;
    d["n"] = e.n;
    return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Spin entanglement of top-quark pairs at LO";

    // Messages start with the error kind, e.g. "BelowThreshold: ...".
    py::register_exception<Error>(m, "TtqiError", PyExc_ValueError);

    py::class_<FanoState>(m, "FanoState")
        .def(py::init<>())
        .def(py::init([](double a, const Vec3& bp, const Vec3& bm, const Mat3& c) { return FanoState{a, bp, bm, c}; }),
             py::arg("a") = 1.0, py::arg("bplus"), py::arg("bminus"), py::arg("c"))
        .def_readwrite("a", &FanoState::a)
        .def_readwrite("bplus", &FanoState::bplus)
        .def_readwrite("bminus", &FanoState::bminus)
        .def_readwrite("c", &FanoState::c)
        .def("normalized", &FanoState::normalized)
        .def_static("unpolarized", &FanoState::unpolarized, py::arg("c"))
        .def("__repr__", [](const FanoState& s) {
            return "FanoState(a=" + std::to_string(s.a) + ", |B+|=" + std::to_string(s.bplus.norm()) +
                   ", |B-|=" + std::to_string(s.bminus.norm()) + ", trC=" + std::to_string(s.c.trace()) + ")";
        });

    m.def("density_matrix", [](const FanoState& s) { return assemble_density(s).entries; }, py::arg("state"));
    m.def("from_density_matrix", [](const Mat4c& rho) { return extract_fano({rho, "helicity"}); }, py::arg("rho"));
    m.def("concurrence", [](const FanoState& s) { return concurrence(assemble_density(s)); }, py::arg("state"));
    m.def(
        "peres_horodecki",
        [](const FanoState& s) {
            const PeresHorodecki ph = peres_horodecki(assemble_density(s));
            return py::make_tuple(ph.min_eigenvalue, ph.entangled);
        },
        py::arg("state"));
    m.def("chsh_value", &chsh_value, py::arg("c"));
    m.def("delta_marker", &delta_marker, py::arg("c"));
    m.def(
        "witness",
        [](const Mat3& c) {
            const Witness w = witness_d(c);
            return py::make_tuple(w.d, w.w);
        },
        py::arg("c"));
    m.def(
        "fidelity", [](const FanoState& a, const FanoState& b) { return fidelity(assemble_density(a), assemble_density(b)); },
        py::arg("rho"), py::arg("sigma"));
    m.def(
        "project_physical", [](const FanoState& s) { return extract_fano(project_physical(assemble_density(s))); },
        py::arg("state"));

    py::enum_<PartonChannel>(m, "Channel").value("QQBAR", PartonChannel::QQBAR).value("GG", PartonChannel::GG);

    m.def(
        "r_coeffs",
        [](PartonChannel ch, double beta, double cos_theta, double m_top) {
            return r_coeffs(ch, Kinematics::from_beta(beta, cos_theta, m_top));
        },
        py::arg("channel"), py::arg("beta"), py::arg("cos_theta"), py::arg("m_top") = kDefaultMTop);
    m.def(
        "pair_state",
        [](PartonChannel ch, double beta, double cos_theta, double m_top) {
            return pair_state(ch, Kinematics::from_beta(beta, cos_theta, m_top));
        },
        py::arg("channel"), py::arg("beta"), py::arg("cos_theta"), py::arg("m_top") = kDefaultMTop);
    m.def(
        "critical_beta_ph_gg",
        [](double theta) {
            const BetaPair b = critical_beta_ph_gg(theta);
            return py::make_tuple(b.beta_c1, b.beta_c2);
        },
        py::arg("theta"));
    m.def(
        "critical_beta_ch",
        [](PartonChannel ch, double theta) {
            const BetaPair b = critical_beta_ch(ch, theta);
            return py::make_tuple(b.beta_c1, b.beta_c2);
        },
        py::arg("channel"), py::arg("theta"));
    m.def("beta_of_mass", &beta_of_mass, py::arg("m_tt"), py::arg("m_top") = kDefaultMTop);
    m.def("mass_of_beta", &mass_of_beta, py::arg("beta"), py::arg("m_top") = kDefaultMTop);

    py::class_<AngularAveraged>(m, "AngularAveraged")
        .def_readonly("a_tilde", &AngularAveraged::a_tilde)
        .def_readonly("c_perp", &AngularAveraged::c_perp)
        .def_readonly("c_z", &AngularAveraged::c_z)
        .def_readonly("c_rr", &AngularAveraged::c_rr)
        .def_readonly("c_nn", &AngularAveraged::c_nn)
        .def_readonly("c_kk", &AngularAveraged::c_kk)
        .def("normalized", &AngularAveraged::normalized)
        .def("beam_state", &AngularAveraged::beam_state);
    m.def("angular_avg", &angular_avg, py::arg("channel"), py::arg("beta"));
    m.def("angular_avg_numeric", &angular_avg_numeric, py::arg("channel"), py::arg("beta"));
    m.def("knm", &knm, py::arg("n"), py::arg("m"), py::arg("x"));
    m.def("chsh_angular_avg", &chsh_angular_avg, py::arg("channel"), py::arg("beta"));
    m.def("delta_omega", &delta_omega, py::arg("channel"), py::arg("beta"));
    m.def("mu_omega", &mu_omega, py::arg("channel"), py::arg("beta"));
    m.def(
        "axial_criticals_gg",
        [](double m_top) {
            const AxialCriticals a = axial_criticals_gg(m_top);
            py::dict d;
            d["beta_ph"] = a.beta_ph;
            d["m_ph"] = a.m_ph;
            d["beta_ch"] = a.beta_ch;
            d["m_ch"] = a.m_ch;
            return d;
        },
        py::arg("m_top") = kDefaultMTop);

    m.def(
        "xfx", [](const std::string& pdf, int pid, double x, double q) { return make_pdf(pdf)->xfx(pid, x, q); },
        py::arg("pdf"), py::arg("pid"), py::arg("x"), py::arg("q"));

    py::class_<ColliderConfig>(m, "Collider")
        .def(py::init(&make_collider), py::arg("beam") = "pp", py::arg("sqrt_s") = 13000.0,
             py::arg("m_top") = kDefaultMTop, py::arg("alpha_s") = kDefaultAlphaS, py::arg("q_scale") = "mtt",
             py::arg("pdf") = "toy-v1")
        .def_property_readonly("sqrt_s", [](const ColliderConfig& c) { return c.sqrt_s; })
        .def_property_readonly("beam", [](const ColliderConfig& c) { return std::string(to_string(c.beam)); })
        .def(
            "luminosities",
            [](const ColliderConfig& c, double m) {
                const Luminosities l = luminosities(c, m);
                return py::make_tuple(l.qqbar, l.gg);
            },
            py::arg("m_tt"))
        .def(
            "channel_weights",
            [](const ColliderConfig& c, double m) {
                const ChannelWeights w = channel_weights(c, m);
                return py::make_tuple(w.w_qq, w.w_gg);
            },
            py::arg("m_tt"))
        .def("gluon_fraction", &gluon_fraction)
        .def(
            "mass_integrated_state",
            [](const ColliderConfig& c, double lo, double hi) { return mass_integrated_state(c, {lo, hi}).beam; },
            py::arg("lo"), py::arg("hi"))
        .def("threshold_state", [](const ColliderConfig& c) { return threshold_state(c).beam; })
        .def(
            "delta_high_pt",
            [](const ColliderConfig& c, double m_cut) {
                const HighPtMarkers h = delta_high_pt(c, m_cut);
                return py::make_tuple(h.delta, h.chsh);
            },
            py::arg("m_cut"))
        .def(
            "critical_beta",
            [](const ColliderConfig& c, const std::string& kind) {
                if (kind != "PH" && kind != "CH") throw Error(ErrorKind::DomainError, "kind must be 'PH' or 'CH'");
                return critical_beta_vs_energy(c, kind == "PH" ? SignatureKind::PH : SignatureKind::CH);
            },
            py::arg("kind"))
        .def(
            "tomography_report",
            [](const ColliderConfig& c, double lo, double hi, std::size_t n, std::uint64_t seed) {
                py::gil_scoped_release release;
                return report_to_json(tomography_report(c, {lo, hi}, n, seed));
            },
            py::arg("lo"), py::arg("hi"), py::arg("n"), py::arg("seed"));

    m.def(
        "sample_events",
        [](const FanoState& s, std::size_t n, std::uint64_t seed, double kp, double km) {
            EventSample ev;
            {
                py::gil_scoped_release release;
                ev = sample_events(s, n, seed, DecayConfig{kp, km});
            }
            return to_array(ev);
        },
        py::arg("state"), py::arg("n"), py::arg("seed"), py::arg("kappa_plus") = 1.0, py::arg("kappa_minus") = -1.0);
    m.def(
        "estimate_state",
        [](const EventArray& events, double kp, double km) {
            return estimate_dict(estimate_state(from_array(events), DecayConfig{kp, km}));
        },
        py::arg("events"), py::arg("kappa_plus") = 1.0, py::arg("kappa_minus") = -1.0);
    m.def(
        "dilepton_density",
        [](const FanoState& s, const Vec3& lp, const Vec3& lm, double kp, double km) {
            return dilepton_density(s, lp, lm, DecayConfig{kp, km});
        },
        py::arg("state"), py::arg("l_plus"), py::arg("l_minus"), py::arg("kappa_plus") = 1.0,
        py::arg("kappa_minus") = -1.0);
    m.def(
        "state_report",
        [](const FanoState& s, std::size_t n, std::uint64_t seed) {
            py::gil_scoped_release release;
            return report_to_json(tomography_report(s, n, seed));
        },
        py::arg("state"), py::arg("n"), py::arg("seed"));

    m.attr("__version__") = "0.1.0";
}
