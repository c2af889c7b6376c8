#include "ttqi/tomography.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <functional>
#include <istream>
#include <ostream>
#include <random>
#include <sstream>
#include <thread>

#include "ttqi/errors.hpp"

namespace ttqi {

namespace {

constexpr double kNegativeDensityTol = 1e-12;
constexpr std::size_t kMinSample = 100;

using Vec15 = MomentAccumulator::Vec15;
using Mat15 = MomentAccumulator::Mat15;

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

double uniform01(std::mt19937_64& g) { return static_cast<double>(g() >> 11) * 0x1.0p-53; }

Vec3 unit_vector(std::mt19937_64& g) {
    const double z = 2.0 * uniform01(g) - 1.0;
    const double phi = 2.0 * M_PI * uniform01(g);
    const double s = std::sqrt(std::max(0.0, 1.0 - z * z));
    return {s * std::cos(phi), s * std::sin(phi), z};
}

double bracket(const FanoState& s, const Vec3& lp, const Vec3& lm, const DecayConfig& cfg) {
    return 1.0 + cfg.kappa_plus * s.bplus.dot(lp) + cfg.kappa_minus * s.bminus.dot(lm) +
           cfg.kappa_plus * cfg.kappa_minus * lp.dot(s.c * lm);
}

// Accepted events of one stream, handed to `sink` in order.
void run_stream(const FanoState& s, const DecayConfig& cfg, double env, std::uint64_t seed, std::size_t stream,
                std::size_t count, const std::function<void(const Vec3&, const Vec3&)>& sink) {
    std::mt19937_64 g(splitmix64(seed ^ splitmix64(stream)));
    std::size_t got = 0;
    while (got < count) {
        const Vec3 lp = unit_vector(g);
        const Vec3 lm = unit_vector(g);
        const double p = bracket(s, lp, lm, cfg);
        if (p < -kNegativeDensityTol) throw Error(ErrorKind::NegativeDensity, "decay density negative; state not physical");
        if (uniform01(g) * env < p) {
            sink(lp, lm);
            ++got;
        }
    }
}

unsigned thread_count(const SamplingOptions& opt, std::size_t streams) {
    unsigned t = opt.threads ? opt.threads : std::max(1u, std::thread::hardware_concurrency());
    return static_cast<unsigned>(std::min<std::size_t>(t, streams));
}

// Calls body(stream) for every stream, spread over worker threads.  The first
// exception thrown by any worker is rethrown.
void for_streams(std::size_t streams, unsigned threads, const std::function<void(std::size_t)>& body) {
    if (threads <= 1) {
        for (std::size_t k = 0; k < streams; ++k) body(k);
        return;
    }
    std::vector<std::exception_ptr> errors(threads);
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < threads; ++t) {
        pool.emplace_back([&, t] {
            try {
                for (std::size_t k = t; k < streams; k += threads) body(k);
            } catch (...) {
                errors[t] = std::current_exception();
            }
        });
    }
    for (auto& th : pool) th.join();
    for (auto& e : errors)
        if (e) std::rethrow_exception(e);
}

void check_sampling(const FanoState& s, std::size_t n, const DecayConfig& cfg, const SamplingOptions& opt) {
    cfg.validate();
    if (n < 1) throw Error(ErrorKind::DomainError, "need at least one event");
    if (opt.chunk < 1) throw Error(ErrorKind::DomainError, "chunk size must be positive");
    if (!s.is_finite()) throw Error(ErrorKind::DomainError, "state has non-finite entries");
    if (std::abs(s.a - 1.0) > 1e-12) throw Error(ErrorKind::DomainError, "state must be normalized (a = 1)");
}

Vec15 pack(const FanoState& s) {
    Vec15 v;
    v.segment<3>(0) = s.bplus;
    v.segment<3>(3) = s.bminus;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) v(6 + 3 * i + j) = s.c(i, j);
    return v;
}

FanoState unpack(const Vec15& v) {
    FanoState s;
    s.bplus = v.segment<3>(0);
    s.bminus = v.segment<3>(3);
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) s.c(i, j) = v(6 + 3 * i + j);
    return s;
}

constexpr const char* kAxis = "xyz";

std::string b_name(char sign, int i) { return std::string("B") + sign + "_" + kAxis[i]; }
std::string c_name(int i, int j) { return std::string("C_") + kAxis[i] + kAxis[j]; }

// A linear combination g . theta of the 15 estimated parameters.
struct Linear {
    std::string name;
    Vec15 g = Vec15::Zero();
};

TierEstimate make_tier(std::string name, const std::vector<Linear>& rows, const Vec15& theta, const Mat15& cov) {
    TierEstimate t;
    t.name = std::move(name);
    for (const auto& r : rows) {
        t.parameters.push_back(r.name);
        t.values.push_back(r.g.dot(theta));
        t.errors.push_back(std::sqrt(std::max(0.0, r.g.dot(cov * r.g))));
    }
    return t;
}

Marker propagate(const std::function<double(const Vec15&)>& f, const Vec15& theta, const Mat15& cov) {
    Marker m{f(theta), 0.0};
    Vec15 grad = Vec15::Zero();
    for (int k = 0; k < 15; ++k) {
        const double sd = std::sqrt(std::max(0.0, cov(k, k)));
        if (sd == 0.0) continue;
        const double h = 1e-3 * sd;
        Vec15 up = theta, dn = theta;
        up(k) += h;
        dn(k) -= h;
        grad(k) = (f(up) - f(dn)) / (2.0 * h);
    }
    m.error = std::sqrt(std::max(0.0, grad.dot(cov * grad)));
    return m;
}

Mat3 c_of(const Vec15& v) { return unpack(v).c; }

std::string fmt9(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.9g", v);
    return buf;
}

}  // namespace

void DecayConfig::validate() const {
    if (!(std::abs(kappa_plus) <= 1.0) || !(std::abs(kappa_minus) <= 1.0))
        throw Error(ErrorKind::DomainError, "analyzing powers must satisfy |kappa| <= 1");
}

double dilepton_density(const FanoState& state, const Vec3& l_plus, const Vec3& l_minus, const DecayConfig& cfg) {
    cfg.validate();
    const double p = bracket(state, l_plus, l_minus, cfg);
    if (p < -kNegativeDensityTol) throw Error(ErrorKind::NegativeDensity, "decay density negative; state not physical");
    return p / (16.0 * M_PI * M_PI);
}

double density_envelope(const FanoState& state, const DecayConfig& cfg) {
    Eigen::JacobiSVD<Mat3> svd(state.c);
    return 1.0 + std::abs(cfg.kappa_plus) * state.bplus.norm() + std::abs(cfg.kappa_minus) * state.bminus.norm() +
           std::abs(cfg.kappa_plus * cfg.kappa_minus) * svd.singularValues()(0);
}

void MomentAccumulator::add(const Vec3& l_plus, const Vec3& l_minus) {
    Vec15 x;
    x.segment<3>(0) = l_plus;
    x.segment<3>(3) = l_minus;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) x(6 + 3 * i + j) = l_plus(i) * l_minus(j);
    ++n_;
    sum_ += x;
    sum2_.selfadjointView<Eigen::Lower>().rankUpdate(x);
}

void MomentAccumulator::merge(const MomentAccumulator& other) {
    n_ += other.n_;
    sum_ += other.sum_;
    sum2_ += other.sum2_;
}

Vec15 MomentAccumulator::mean() const { return n_ ? Vec15(sum_ / static_cast<double>(n_)) : Vec15::Zero(); }

Mat15 MomentAccumulator::covariance() const {
    if (n_ < 2) return Mat15::Zero();
    const double n = static_cast<double>(n_);
    const Mat15 full = sum2_.selfadjointView<Eigen::Lower>();
    const Vec15 mu = mean();
    return (full - n * mu * mu.transpose()) / (n - 1.0);
}

EventSample sample_events(const FanoState& state, std::size_t n, std::uint64_t seed, const DecayConfig& cfg,
                          const SamplingOptions& opt) {
    check_sampling(state, n, cfg, opt);
    const double env = density_envelope(state, cfg);
    const std::size_t streams = (n + opt.chunk - 1) / opt.chunk;
    EventSample out;
    out.seed = seed;
    out.events.resize(n);
    for_streams(streams, thread_count(opt, streams), [&](std::size_t k) {
        const std::size_t begin = k * opt.chunk;
        const std::size_t count = std::min(opt.chunk, n - begin);
        std::size_t i = begin;
        run_stream(state, cfg, env, seed, k, count, [&](const Vec3& lp, const Vec3& lm) { out.events[i++] = {lp, lm}; });
    });
    return out;
}

MomentAccumulator sample_moments(const FanoState& state, std::size_t n, std::uint64_t seed, const DecayConfig& cfg,
                                 const SamplingOptions& opt) {
    check_sampling(state, n, cfg, opt);
    const double env = density_envelope(state, cfg);
    const std::size_t streams = (n + opt.chunk - 1) / opt.chunk;
    std::vector<MomentAccumulator> parts(streams);
    for_streams(streams, thread_count(opt, streams), [&](std::size_t k) {
        const std::size_t count = std::min(opt.chunk, n - k * opt.chunk);
        MomentAccumulator& acc = parts[k];
        run_stream(state, cfg, env, seed, k, count, [&](const Vec3& lp, const Vec3& lm) { acc.add(lp, lm); });
    });
    // Fixed merge order keeps the result independent of scheduling.
    MomentAccumulator total;
    for (const auto& p : parts) total.merge(p);
    return total;
}

MomentAccumulator accumulate(const EventSample& sample) {
    MomentAccumulator m;
    for (const auto& e : sample.events) m.add(e.l_plus, e.l_minus);
    return m;
}

StateEstimate estimate_state(const MomentAccumulator& m, const DecayConfig& cfg) {
    cfg.validate();
    if (m.n() < kMinSample) throw Error(ErrorKind::InsufficientSample, "need at least 100 events");
    if (cfg.kappa_plus == 0.0 || cfg.kappa_minus == 0.0)
        throw Error(ErrorKind::DomainError, "zero analyzing power; use the raw moments");
    Vec15 scale;
    scale.segment<3>(0).setConstant(3.0 / cfg.kappa_plus);
    scale.segment<3>(3).setConstant(3.0 / cfg.kappa_minus);
    scale.segment<9>(6).setConstant(9.0 / (cfg.kappa_plus * cfg.kappa_minus));
    const double n = static_cast<double>(m.n());
    const Vec15 theta = scale.cwiseProduct(m.mean());
    const Mat15 cov = scale.asDiagonal() * m.covariance() * scale.asDiagonal() / n;

    StateEstimate e;
    e.n = m.n();
    e.estimate = unpack(theta);
    e.std_error = unpack(cov.diagonal().cwiseMax(0.0).cwiseSqrt());
    e.std_error.a = 0.0;
    e.covariance = cov;
    // cos phi = l+ . l-, so D = tr C / 3 with the matching variance.
    Vec15 g = Vec15::Zero();
    g(6) = g(10) = g(14) = 1.0 / 3.0;
    e.d = g.dot(theta);
    e.d_error = std::sqrt(std::max(0.0, g.dot(cov * g)));
    return e;
}

StateEstimate estimate_state(const EventSample& sample, const DecayConfig& cfg) {
    return estimate_state(accumulate(sample), cfg);
}

TomographyReport tomography_report(const FanoState& truth, std::size_t n, std::uint64_t seed,
                                   const DecayConfig& decay, const SamplingOptions& opt) {
    const StateEstimate est = estimate_state(sample_moments(truth, n, seed, decay, opt), decay);
    const Vec15 theta = pack(est.estimate);
    const Mat15& cov = est.covariance;

    auto bz = [](char sign) {
        Linear l{b_name(sign, 2)};
        l.g(sign == '+' ? 2 : 5) = 1.0;
        return l;
    };
    Linear cperp{"C_perp"}, cz{"C_z"};
    cperp.g(6) = cperp.g(10) = 0.5;
    cz.g(14) = 1.0;
    std::vector<Linear> full;
    for (int i = 0; i < 3; ++i) {
        Linear l{b_name('+', i)};
        l.g(i) = 1.0;
        full.push_back(l);
    }
    for (int i = 0; i < 3; ++i) {
        Linear l{b_name('-', i)};
        l.g(3 + i) = 1.0;
        full.push_back(l);
    }
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) {
            Linear l{c_name(i, j)};
            l.g(6 + 3 * i + j) = 1.0;
            full.push_back(l);
        }

    TomographyReport r;
    r.truth = truth;
    r.n = n;
    r.seed = seed;
    r.decay = decay;
    r.tiers.push_back(make_tier("symmetry+lo", {cperp, cz}, theta, cov));
    r.tiers.push_back(make_tier("symmetry", {cperp, cz, bz('+'), bz('-')}, theta, cov));
    r.tiers.push_back(make_tier("none", full, theta, cov));

    r.delta = propagate([](const Vec15& v) { return axial_delta(0.5 * (v(6) + v(10)), v(14)); }, theta, cov);
    r.delta_hel = propagate([](const Vec15& v) { return delta_marker(c_of(v)); }, theta, cov);
    r.chsh = propagate([](const Vec15& v) { return chsh_value(c_of(v)); }, theta, cov);
    r.witness = {est.d + 1.0 / 3.0, est.d_error};
    r.significance = r.witness.error > 0.0 ? -r.witness.value / r.witness.error : 0.0;

    r.raw = est.estimate;
    const DensityMatrix4 proj = project_physical(assemble_density(est.estimate));
    r.projected = extract_fano(proj);
    r.fidelity = fidelity(assemble_density(truth), proj);
    r.concurrence = concurrence(proj);
    return r;
}

TomographyReport tomography_report(const ColliderConfig& cfg, const MassWindow& w, std::size_t n, std::uint64_t seed,
                                   const DecayConfig& decay, const SamplingOptions& opt) {
    return tomography_report(mass_integrated_state(cfg, w).beam, n, seed, decay, opt);
}

void write_events_csv(const EventSample& sample, std::ostream& out) {
    out << "lx+,ly+,lz+,lx-,ly-,lz-\n";
    for (const auto& e : sample.events) {
        out << fmt9(e.l_plus(0)) << ',' << fmt9(e.l_plus(1)) << ',' << fmt9(e.l_plus(2)) << ',' << fmt9(e.l_minus(0))
            << ',' << fmt9(e.l_minus(1)) << ',' << fmt9(e.l_minus(2)) << '\n';
    }
}

EventSample read_events_csv(std::istream& in) {
    std::string line;
    std::size_t lineno = 1;
    if (!std::getline(in, line)) throw Error(ErrorKind::ParseError, "line 1: empty event file");
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line != "lx+,ly+,lz+,lx-,ly-,lz-") throw Error(ErrorKind::ParseError, "line 1: unexpected header '" + line + "'");
    EventSample s;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        std::istringstream row(line);
        std::string cell;
        double v[6];
        int k = 0;
        while (std::getline(row, cell, ',')) {
            if (k >= 6) throw Error(ErrorKind::ParseError, "line " + std::to_string(lineno) + ": more than 6 columns");
            try {
                std::size_t used = 0;
                v[k] = std::stod(cell, &used);
                if (used != cell.size()) throw std::invalid_argument(cell);
            } catch (const std::exception&) {
                throw Error(ErrorKind::ParseError,
                            "line " + std::to_string(lineno) + ", column " + std::to_string(k + 1) + ": bad number");
            }
            ++k;
        }
        if (k != 6) throw Error(ErrorKind::ParseError, "line " + std::to_string(lineno) + ": expected 6 columns");
        Vec3 lp(v[0], v[1], v[2]), lm(v[3], v[4], v[5]);
        if (std::abs(lp.norm() - 1.0) > 1e-6 || std::abs(lm.norm() - 1.0) > 1e-6)
            throw Error(ErrorKind::ParseError, "line " + std::to_string(lineno) + ": direction is not a unit vector");
        s.events.push_back({lp.normalized(), lm.normalized()});
    }
    return s;
}

namespace {

using ojson = nlohmann::ordered_json;

ojson num(double v) {
    if (!std::isfinite(v)) return nullptr;
    return v == 0.0 ? 0.0 : std::stod(fmt9(v));
}

ojson vec_json(const Vec3& v) { return ojson::array({num(v(0)), num(v(1)), num(v(2))}); }

ojson state_json(const FanoState& s) {
    ojson c = ojson::array();
    for (int i = 0; i < 3; ++i) c.push_back(vec_json(s.c.row(i).transpose()));
    return {{"B+", vec_json(s.bplus)}, {"B-", vec_json(s.bminus)}, {"C", c}};
}

ojson marker_json(const Marker& m) { return {{"value", num(m.value)}, {"error", num(m.error)}}; }

}  // namespace

std::string report_to_json(const TomographyReport& r) {
    ojson estimates = ojson::object(), errors = ojson::object();
    for (const auto& t : r.tiers) {
        ojson e = ojson::object(), s = ojson::object();
        for (std::size_t i = 0; i < t.parameters.size(); ++i) {
            e[t.parameters[i]] = num(t.values[i]);
            s[t.parameters[i]] = num(t.errors[i]);
        }
        estimates[t.name] = e;
        errors[t.name] = s;
    }
    ojson doc = {
        {"n", r.n},
        {"seed", r.seed},
        {"kappa_plus", num(r.decay.kappa_plus)},
        {"kappa_minus", num(r.decay.kappa_minus)},
        {"truth", state_json(r.truth)},
        {"estimates", estimates},
        {"errors", errors},
        {"markers",
         {{"delta", marker_json(r.delta)},
          {"Delta", marker_json(r.delta_hel)},
          {"chsh", marker_json(r.chsh)},
          {"W", marker_json(r.witness)}}},
        {"significance", num(r.significance)},
        {"projected", state_json(r.projected)},
        {"fidelity", num(r.fidelity)},
        {"concurrence", num(r.concurrence)},
    };
    return doc.dump(2) + "\n";
}

}  // namespace ttqi
