#include "commands.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <iostream>
#include <sstream>

#include "ttqi/angular.hpp"
#include "ttqi/lo_production.hpp"
#include "ttqi/spinpair.hpp"
#include "ttqi/tomography.hpp"

namespace ttqi::cli {

namespace {

constexpr double kBetaMax = 0.999;
constexpr double kNan = std::numeric_limits<double>::quiet_NaN();

std::vector<double> linspace(double lo, double hi, int n) {
    std::vector<double> v(n);
    for (int i = 0; i < n; ++i) v[i] = n == 1 ? lo : lo + (hi - lo) * i / (n - 1);
    v.back() = hi;
    return v;
}

std::vector<double> logspace(double lo, double hi, int n) {
    std::vector<double> v = linspace(std::log(lo), std::log(hi), n);
    for (double& x : v) x = std::exp(x);
    v.front() = lo;
    v.back() = hi;
    return v;
}

int grid_n(const RunSpec& s, int def) { return s.grid_n.value_or(def); }
int grid_m(const RunSpec& s, int def) { return s.grid_m.value_or(def); }

MassWindow parse_range(const std::string& text, const char* flag) {
    const auto colon = text.find(':');
    try {
        if (colon == std::string::npos) throw std::invalid_argument(text);
        std::size_t u1 = 0, u2 = 0;
        const std::string a = text.substr(0, colon), b = text.substr(colon + 1);
        const double lo = std::stod(a, &u1), hi = std::stod(b, &u2);
        if (u1 != a.size() || u2 != b.size()) throw std::invalid_argument(text);
        return {lo, hi};
    } catch (const std::exception&) {
        throw CLI::ValidationError(flag, "expected LO:HI, got '" + text + "'");
    }
}

std::pair<int, int> parse_grid(const std::string& text) {
    const auto x = text.find('x');
    try {
        std::size_t u1 = 0, u2 = 0;
        if (x == std::string::npos) {
            const int n = std::stoi(text, &u1);
            if (u1 != text.size() || n < 2) throw std::invalid_argument(text);
            return {n, n};
        }
        const std::string a = text.substr(0, x), b = text.substr(x + 1);
        const int n = std::stoi(a, &u1), m = std::stoi(b, &u2);
        if (u1 != a.size() || u2 != b.size() || n < 2 || m < 2) throw std::invalid_argument(text);
        return {n, m};
    } catch (const std::exception&) {
        throw CLI::ValidationError("--grid", "expected NxM with N, M >= 2, got '" + text + "'");
    }
}

double concurrence_of(const FanoState& s) { return concurrence(assemble_density(s)); }

FanoState mix(const FanoState& qq, const FanoState& gg, double w_gg) {
    FanoState m;
    m.bplus = (1.0 - w_gg) * qq.bplus + w_gg * gg.bplus;
    m.bminus = (1.0 - w_gg) * qq.bminus + w_gg * gg.bminus;
    m.c = (1.0 - w_gg) * qq.c + w_gg * gg.c;
    return m;
}

Table scan_partonic(const RunSpec& spec, std::optional<PartonChannel> ch) {
    const auto betas = linspace(0.0, kBetaMax, grid_n(spec, 51));
    const auto thetas = linspace(0.0, M_PI, grid_m(spec, 51));
    const bool crit = ch == PartonChannel::GG;
    Table t;
    t.columns = {"beta", "theta", "concurrence", "Delta", "chsh", "entangled", "chsh_violation"};
    if (crit) t.columns.insert(t.columns.end(), {"beta_ph_1", "beta_ph_2", "beta_ch_1", "beta_ch_2"});
    std::vector<BetaPair> ph(thetas.size(), {kNan, kNan}), chp(thetas.size(), {kNan, kNan});
    if (crit) {
        for (std::size_t j = 0; j < thetas.size(); ++j) {
            try {
                ph[j] = critical_beta_ph_gg(thetas[j]);
            } catch (const Error&) {
            }
            try {
                chp[j] = critical_beta_ch(PartonChannel::GG, thetas[j]);
            } catch (const Error&) {
            }
        }
    }
    for (double b : betas) {
        for (std::size_t j = 0; j < thetas.size(); ++j) {
            const Kinematics kin = Kinematics::from_beta(b, std::cos(thetas[j]), spec.m_top);
            FanoState s;
            if (ch) {
                s = pair_state(*ch, kin);
            } else {
                s = mix(pair_state(PartonChannel::QQBAR, kin), pair_state(PartonChannel::GG, kin), *spec.w_gg);
            }
            const double c = concurrence_of(s);
            const double chsh = chsh_value(s.c);
            std::vector<Cell> row = {b,    thetas[j], c, delta_marker(s.c), chsh, peres_horodecki(assemble_density(s)).entangled,
                                     chsh > 2.0};
            if (crit) row.insert(row.end(), {ph[j].beta_c1, ph[j].beta_c2, chp[j].beta_c1, chp[j].beta_c2});
            t.rows.push_back(std::move(row));
        }
    }
    return t;
}

Table scan_hadronic(const RunSpec& spec) {
    const ColliderConfig cfg = collider(spec);
    const double bmax = std::min(kBetaMax, beta_of_mass(cfg.sqrt_s, cfg.m_top));
    const auto betas = linspace(0.0, bmax, grid_n(spec, 51));
    const auto thetas = linspace(0.0, M_PI, grid_m(spec, 51));
    Table t;
    t.columns = {"beta", "theta", "m_tt", "w_gg", "concurrence"};
    for (double b : betas) {
        const double m = std::min(mass_of_beta(b, cfg.m_top), cfg.sqrt_s);
        const Luminosities l = luminosities(cfg, m);
        for (double th : thetas) {
            const Kinematics kin = Kinematics::from_beta(b, std::cos(th), cfg.m_top);
            const FanoState q = r_coeffs(PartonChannel::QQBAR, kin);
            const FanoState g = r_coeffs(PartonChannel::GG, kin);
            const double den = l.qqbar * q.a + l.gg * g.a;
            if (!(den > 0.0)) {
                t.rows.push_back({b, th, m, kNan, kNan});
                continue;
            }
            const double w = l.gg * g.a / den;
            const double c = concurrence_of(mix(q.normalized(), g.normalized(), w));
            t.rows.push_back({b, th, m, w, c});
        }
    }
    return t;
}

}  // namespace

ColliderConfig collider(const RunSpec& spec) {
    ColliderConfig cfg;
    cfg.beam = spec.beam;
    cfg.sqrt_s = spec.sqrt_s;
    cfg.m_top = spec.m_top;
    cfg.alpha_s = spec.alpha_s;
    cfg.q_scale = QScale::parse(spec.q_scale);
    cfg.pdf = make_pdf(spec.pdf);
    cfg.validate();
    return cfg;
}

Table cmd_scan_map(const RunSpec& spec) {
    if (spec.w_gg) return scan_partonic(spec, std::nullopt);
    if (spec.channel == "hadronic") return scan_hadronic(spec);
    return scan_partonic(spec, spec.channel == "qqbar" ? PartonChannel::QQBAR : PartonChannel::GG);
}

Table cmd_observables(const RunSpec& spec) {
    const ColliderConfig cfg = collider(spec);
    const std::string mode = !spec.mode.empty() ? spec.mode : (cfg.beam == Beam::PP ? "threshold" : "high-pt");
    const bool high = mode == "high-pt";
    const MassWindow range = spec.window.value_or(MassWindow{cfg.threshold(), std::min(cfg.sqrt_s, 1000.0)});
    Table t;
    t.columns = {"m_cut", "beta", "C_perp", "C_z", "D", "delta", "Delta", "B_half", "C_rr", "C_nn", "C_kk"};
    for (double m : linspace(range.lo, range.hi, grid_n(spec, 50))) {
        WindowState s;
        double delta_hel = 0.0, chsh = 0.0;
        if (high) {
            s = mass_integrated_state(cfg, {m, cfg.sqrt_s});
            const HighPtMarkers h = delta_high_pt(cfg, m);
            delta_hel = h.delta;
            chsh = h.chsh;
        } else {
            s = m <= cfg.threshold() * (1.0 + 1e-12) ? threshold_state(cfg)
                                                     : mass_integrated_state(cfg, {cfg.threshold(), m});
            delta_hel = delta_marker(s.helicity.c);
            chsh = chsh_value(s.beam.c);
        }
        const double cp = s.beam.c(0, 0), cz = s.beam.c(2, 2);
        t.rows.push_back({m, beta_of_mass(m, cfg.m_top), cp, cz, (2.0 * cp + cz) / 3.0, axial_delta(cp, cz), delta_hel,
                          0.5 * chsh, s.helicity.c(R, R), s.helicity.c(N, N), s.helicity.c(K, K)});
    }
    return t;
}

Table cmd_critical(const RunSpec& spec) {
    RunSpec base = spec;
    const MassWindow range = spec.energies.value_or(MassWindow{1000.0, 100000.0});
    Table t;
    t.columns = {"sqrt_s", "beam", "f_gg", "w_gg_threshold", "beta_c_ph", "beta_c_ch"};
    for (double rs : logspace(range.lo, range.hi, grid_n(spec, 12))) {
        for (Beam beam : {Beam::PP, Beam::PPBAR}) {
            base.beam = beam;
            base.sqrt_s = rs;
            const ColliderConfig cfg = collider(base);
            std::vector<Cell> row = {rs, std::string(to_string(beam)), gluon_fraction(cfg),
                                     channel_weights(cfg, cfg.threshold()).w_gg};
            for (SignatureKind k : {SignatureKind::PH, SignatureKind::CH}) {
                try {
                    row.emplace_back(critical_beta_vs_energy(cfg, k));
                } catch (const Error& e) {
                    if (e.kind() != ErrorKind::NoSignature) throw;
                    row.emplace_back(std::string("nosignature"));
                }
            }
            t.rows.push_back(std::move(row));
        }
    }
    return t;
}

Table cmd_luminosity(const RunSpec& spec) {
    const ColliderConfig cfg = collider(spec);
    const MassWindow range = spec.window.value_or(MassWindow{cfg.threshold(), cfg.sqrt_s});
    Table t;
    t.columns = {"m_tt", "L_qqbar", "L_gg", "w_qq", "w_gg"};
    for (double m : linspace(range.lo, range.hi, grid_n(spec, 50))) {
        const Luminosities l = luminosities(cfg, m);
        double wq = kNan, wg = kNan;
        if (l.qqbar + l.gg > 0.0) {
            const ChannelWeights w = weights_from(l, beta_of_mass(m, cfg.m_top));
            wq = w.w_qq;
            wg = w.w_gg;
        }
        t.rows.push_back({m, l.qqbar, l.gg, wq, wg});
    }
    return t;
}

std::string cmd_tomography(const RunSpec& spec) {
    const ColliderConfig cfg = collider(spec);
    const MassWindow w = spec.window.value_or(MassWindow{cfg.threshold(), std::min(cfg.sqrt_s, 400.0)});
    const TomographyReport r = tomography_report(cfg, w, spec.n, spec.seed);
    if (!spec.events.empty()) {
        std::ostringstream csv;
        write_events_csv(sample_events(r.truth, spec.n, spec.seed), csv);
        atomic_write(spec.events, csv.str());
    }
    if (spec.format == "json") return report_to_json(r);
    Table t;
    t.columns = {"tier", "parameter", "value", "error"};
    for (const auto& tier : r.tiers)
        for (std::size_t i = 0; i < tier.parameters.size(); ++i)
            t.rows.push_back({tier.name, tier.parameters[i], tier.values[i], tier.errors[i]});
    return to_csv(t);
}

std::string render(const RunSpec& spec) {
    if (spec.command == "tomography") return cmd_tomography(spec);
    Table t;
    if (spec.command == "scan-map") t = cmd_scan_map(spec);
    else if (spec.command == "observables") t = cmd_observables(spec);
    else if (spec.command == "critical") t = cmd_critical(spec);
    else if (spec.command == "luminosity") t = cmd_luminosity(spec);
    else throw Error(ErrorKind::DomainError, "unknown command '" + spec.command + "'");
    return spec.format == "json" ? to_json(t, spec.command) : to_csv(t);
}

int exit_code_for(ErrorKind kind) {
    switch (kind) {
        case ErrorKind::ParseError:
        case ErrorKind::UnsupportedFormat:
        case ErrorKind::FlavorUnavailable:
        case ErrorKind::OutOfRange:
        case ErrorKind::IoError:
            return kData;
        case ErrorKind::DomainError:
        case ErrorKind::BelowThreshold:
        case ErrorKind::AboveEnergy:
            return kUsage;
        default:
            return kNumeric;
    }
}

int run(int argc, char** argv) {
    CLI::App app{"Spin entanglement of top-quark pairs: scans, observables and tomography"};
    app.require_subcommand(1);
    app.fallthrough();

    RunSpec spec;
    std::string beam = "pp", grid, window, energies;
    app.add_option("--beam", beam, "Beam type")->check(CLI::IsMember({"pp", "ppbar"}))->capture_default_str();
    app.add_option("--sqrt-s", spec.sqrt_s, "Collider energy in GeV")->capture_default_str();
    app.add_option("--mtop", spec.m_top, "Top mass in GeV")->capture_default_str();
    app.add_option("--alpha-s", spec.alpha_s, "Strong coupling")->capture_default_str();
    app.add_option("--pdf", spec.pdf, "lhagrid1 file or toy-v1[:gluon-only|:quark-only]")->capture_default_str();
    app.add_option("--q-scale", spec.q_scale, "mtt, mtt/2 or fixed:GEV")->capture_default_str();
    app.add_option("--grid", grid, "Resolution NxM (or N)");
    app.add_option("--window", window, "Mass range LO:HI in GeV");
    app.add_option("--n", spec.n, "Number of events")->capture_default_str();
    app.add_option("--seed", spec.seed, "RNG seed")->capture_default_str();
    app.add_option("--format", spec.format, "Output format")->check(CLI::IsMember({"csv", "json"}))->capture_default_str();
    app.add_option("--out", spec.out, "Output path, - for stdout")->capture_default_str();

    auto* scan = app.add_subcommand("scan-map", "Concurrence and CHSH maps over (beta, theta)");
    scan->add_option("--channel", spec.channel, "qqbar, gg or hadronic")
        ->check(CLI::IsMember({"qqbar", "gg", "hadronic"}))
        ->capture_default_str();
    scan->add_option("--w-gg", spec.w_gg, "Constant gg weight of a toy mixture")->check(CLI::Range(0.0, 1.0));
    auto* obs = app.add_subcommand("observables", "Integrated correlations versus the mass cut");
    obs->add_option("--mode", spec.mode, "threshold or high-pt (default by beam)")
        ->check(CLI::IsMember({"threshold", "high-pt"}));
    auto* crit = app.add_subcommand("critical", "Gluon fraction, threshold weight and critical velocities versus sqrt(s)");
    crit->add_option("--energies", energies, "sqrt(s) range LO:HI in GeV (log spaced)");
    auto* tomo = app.add_subcommand("tomography", "Simulated dilepton tomography of a mass window");
    tomo->add_option("--events", spec.events, "Also write the event sample as CSV");
    app.add_subcommand("luminosity", "Luminosities and channel weights versus m_tt");

    try {
        app.parse(argc, argv);
        spec.command = app.get_subcommands().front()->get_name();
        spec.beam = beam == "pp" ? Beam::PP : Beam::PPBAR;
        if (!grid.empty()) {
            const auto [n, m] = parse_grid(grid);
            spec.grid_n = n;
            spec.grid_m = m;
        }
        if (!window.empty()) spec.window = parse_range(window, "--window");
        if (!energies.empty()) spec.energies = parse_range(energies, "--energies");
        if (spec.command == "tomography" && spec.n < 100) throw CLI::ValidationError("--n", "need at least 100 events");
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kOk : kUsage;
    }

    try {
        atomic_write(spec.out, render(spec));
    } catch (const Error& e) {
        std::cerr << "ttqi: " << e.what() << "\n";
        return exit_code_for(e.kind());
    } catch (const std::exception& e) {
        std::cerr << "ttqi: " << e.what() << "\n";
        return kNumeric;
    }
    return kOk;
}

}  // namespace ttqi::cli
