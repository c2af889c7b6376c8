#include <gtest/gtest.h>

#include <cmath>
#include <nlohmann/json.hpp>
#include <random>
#include <sstream>

#include "oracles.hpp"
#include "ttqi/errors.hpp"
#include "ttqi/tomography.hpp"

using namespace ttqi;

namespace {

const double kFourPi2 = 16.0 * M_PI * M_PI;

FanoState singlet() { return FanoState::unpolarized(-Mat3::Identity()); }
FanoState triplet() { return FanoState::unpolarized(Vec3(1, 1, -1).asDiagonal()); }

FanoState random_physical(std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    return extract_fano({oracle::random_state(rng, 2), "helicity"});
}

// Product rule on S2 x S2: composite Simpson in cos(theta), trapezoid in phi.
// Exact for the low-order polynomials in l+ and l- that appear here.
template <class F>
double sphere2(F&& f) {
    const int nc = 8, np = 8;
    std::vector<double> cs, cw, ph;
    for (int i = 0; i <= nc; ++i) {
        cs.push_back(-1.0 + 2.0 * i / nc);
        cw.push_back((2.0 / nc / 3.0) * (i == 0 || i == nc ? 1.0 : (i % 2 ? 4.0 : 2.0)));
    }
    for (int j = 0; j < np; ++j) ph.push_back(2.0 * M_PI * (j + 0.5) / np);
    auto dir = [](double c, double p) {
        const double s = std::sqrt(std::max(0.0, 1.0 - c * c));
        return Vec3(s * std::cos(p), s * std::sin(p), c);
    };
    const double wp = 2.0 * M_PI / np;
    double total = 0.0;
    for (int a = 0; a <= nc; ++a)
        for (double pa : ph)
            for (int b = 0; b <= nc; ++b)
                for (double pb : ph) total += cw[a] * wp * cw[b] * wp * f(dir(cs[a], pa), dir(cs[b], pb));
    return total;
}

ErrorKind kind_of(const std::function<void()>& f) {
    try {
        f();
    } catch (const Error& e) {
        return e.kind();
    }
    ADD_FAILURE() << "no exception";
    return ErrorKind::DomainError;
}

}  // namespace

TEST(Density, Examples) {
    EXPECT_NEAR(dilepton_density(FanoState{}, Vec3::UnitX(), Vec3::UnitZ()), 1.0 / kFourPi2, 1e-18);
    EXPECT_NEAR(dilepton_density(singlet(), Vec3::UnitZ(), -Vec3::UnitZ()), 0.0, 1e-18);
    EXPECT_NEAR(dilepton_density(singlet(), Vec3::UnitZ(), Vec3::UnitZ()), 2.0 / kFourPi2, 1e-18);
    EXPECT_EQ(kind_of([] {
                  (void)dilepton_density(FanoState::unpolarized(2.0 * Mat3::Identity()), Vec3::UnitZ(), Vec3::UnitZ());
              }),
              ErrorKind::NegativeDensity);
    EXPECT_EQ(kind_of([] { (void)dilepton_density(FanoState{}, Vec3::UnitZ(), Vec3::UnitZ(), {1.5, -1.0}); }),
              ErrorKind::DomainError);
}

TEST(Density, NormalizedOnBothSpheres) {
    for (std::uint64_t seed : {1, 2, 3}) {
        const FanoState s = random_physical(seed);
        for (DecayConfig cfg : {DecayConfig{}, DecayConfig{0.7, -0.4}}) {
            const double z = sphere2([&](const Vec3& a, const Vec3& b) { return dilepton_density(s, a, b, cfg); });
            EXPECT_NEAR(z, 1.0, 1e-6);
        }
    }
}

TEST(Density, MomentOracles) {
    // E[l+_i l-_j] = k+ k- C_ij / 9 and E[cos phi] = k+ k- tr C / 9; with k+ k- = -1 these are
    // -C_ij / 9 and -D / 3.
    const FanoState s = random_physical(7);
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) {
            const double m = sphere2([&](const Vec3& a, const Vec3& b) { return a(i) * b(j) * dilepton_density(s, a, b); });
            EXPECT_NEAR(m, -s.c(i, j) / 9.0, 1e-6);
        }
    const double cphi = sphere2([&](const Vec3& a, const Vec3& b) { return a.dot(b) * dilepton_density(s, a, b); });
    EXPECT_NEAR(cphi, -witness_d(s.c).d / 3.0, 1e-6);
    for (int i = 0; i < 3; ++i) {
        const double bp = sphere2([&](const Vec3& a, const Vec3& b) { return a(i) * dilepton_density(s, a, b); });
        const double bm = sphere2([&](const Vec3& a, const Vec3& b) { return b(i) * dilepton_density(s, a, b); });
        EXPECT_NEAR(bp, s.bplus(i) / 3.0, 1e-6);
        EXPECT_NEAR(bm, -s.bminus(i) / 3.0, 1e-6);
    }
}

TEST(Envelope, ExactForUnpolarizedBoundOtherwise) {
    const FanoState t = FanoState::unpolarized(Vec3(-0.7, 0.2, 0.4).asDiagonal());
    EXPECT_NEAR(density_envelope(t), 1.7, 1e-12);
    EXPECT_NEAR(dilepton_density(t, Vec3::UnitX(), Vec3::UnitX()) * kFourPi2, 1.7, 1e-12);

    std::mt19937_64 rng(5);
    for (std::uint64_t seed = 10; seed < 30; ++seed) {
        const FanoState s = random_physical(seed);
        const double env = density_envelope(s);
        double best = 0.0;
        for (int k = 0; k < 20000; ++k) {
            const Vec3 a = oracle::random_unit(rng), b = oracle::random_unit(rng);
            best = std::max(best, dilepton_density(s, a, b) * kFourPi2);
        }
        EXPECT_GE(env, best - 1e-12);
    }
}

TEST(Sampling, DeterministicAndThreadIndependent) {
    const FanoState s = random_physical(3);
    SamplingOptions one{1000, 1}, many{1000, 4};
    const EventSample a = sample_events(s, 10000, 42, {}, one);
    const EventSample b = sample_events(s, 10000, 42, {}, many);
    const EventSample c = sample_events(s, 10000, 43, {}, one);
    ASSERT_EQ(a.n(), 10000u);
    EXPECT_EQ(a.seed, 42u);
    bool same = true, differs = false;
    for (std::size_t i = 0; i < a.n(); ++i) {
        same = same && a.events[i].l_plus == b.events[i].l_plus && a.events[i].l_minus == b.events[i].l_minus;
        differs = differs || a.events[i].l_plus != c.events[i].l_plus;
        EXPECT_NEAR(a.events[i].l_plus.norm(), 1.0, 1e-12);
        EXPECT_NEAR(a.events[i].l_minus.norm(), 1.0, 1e-12);
    }
    EXPECT_TRUE(same);
    EXPECT_TRUE(differs);

    // moments reduced on the fly see the same stream
    const MomentAccumulator m = sample_moments(s, 10000, 42, {}, many);
    const MomentAccumulator r = accumulate(a);
    EXPECT_LT((m.mean() - r.mean()).cwiseAbs().maxCoeff(), 1e-13);
}

TEST(Sampling, UniformState) {
    const EventSample e = sample_events(FanoState{}, 200000, 9);
    const MomentAccumulator m = accumulate(e);
    const auto mean = m.mean();
    const auto cov = m.covariance();
    for (int i = 0; i < 15; ++i) EXPECT_LT(std::abs(mean(i)), 5.0 * std::sqrt(cov(i, i) / m.n())) << i;
    double zz = 0.0;
    for (const auto& ev : e.events) zz += ev.l_plus.z() * ev.l_plus.z();
    EXPECT_NEAR(zz / e.n(), 1.0 / 3.0, 5e-3);
}

TEST(Sampling, SingletOpeningAngle) {
    const EventSample e = sample_events(singlet(), 1000000, 2024);
    double s = 0.0, s2 = 0.0;
    for (const auto& ev : e.events) {
        const double c = ev.l_plus.dot(ev.l_minus);
        s += c;
        s2 += c * c;
    }
    const double n = static_cast<double>(e.n());
    const double mean = s / n, sigma = std::sqrt((s2 / n - mean * mean) / n);
    EXPECT_NEAR(mean, 1.0 / 3.0, 3.0 * sigma);
}

TEST(Sampling, ZeroAnalyzingPowerIsUniform) {
    const DecayConfig off{0.0, 0.0};
    const MomentAccumulator m = sample_moments(singlet(), 100000, 5, off);
    const auto mean = m.mean();
    const auto cov = m.covariance();
    for (int i = 0; i < 15; ++i) EXPECT_LT(std::abs(mean(i)), 5.0 * std::sqrt(cov(i, i) / m.n())) << i;
    EXPECT_EQ(kind_of([&] { (void)estimate_state(m, off); }), ErrorKind::DomainError);
}

TEST(Sampling, Errors) {
    EXPECT_EQ(kind_of([] { (void)sample_events(FanoState{}, 0, 1); }), ErrorKind::DomainError);
    FanoState unnormalized;
    unnormalized.a = 2.0;
    EXPECT_EQ(kind_of([&] { (void)sample_events(unnormalized, 10, 1); }), ErrorKind::DomainError);
    EXPECT_EQ(kind_of([] { (void)sample_events(FanoState::unpolarized(2.0 * Mat3::Identity()), 1000, 1); }),
              ErrorKind::NegativeDensity);
}

TEST(Estimate, InsufficientSample) {
    const EventSample e = sample_events(singlet(), 99, 1);
    EXPECT_EQ(kind_of([&] { (void)estimate_state(e); }), ErrorKind::InsufficientSample);
    EXPECT_NO_THROW((void)estimate_state(sample_events(singlet(), 100, 1)));
}

TEST(Estimate, TwoRoutesToD) {
    const StateEstimate est = estimate_state(sample_events(random_physical(4), 50000, 8));
    EXPECT_NEAR(est.d, est.estimate.c.trace() / 3.0, 1e-12);
    EXPECT_GT(est.d_error, 0.0);
}

TEST(Estimate, UnbiasedOverRepetitions) {
    const FanoState truth = random_physical(11);
    const DecayConfig cfg{0.8, -0.9};
    const int reps = 200;
    Mat3 sum = Mat3::Zero(), sum2 = Mat3::Zero();
    Vec3 bsum = Vec3::Zero();
    for (int r = 0; r < reps; ++r) {
        const StateEstimate e = estimate_state(sample_moments(truth, 10000, 1000 + r, cfg), cfg);
        sum += e.estimate.c;
        sum2 += e.estimate.c.cwiseProduct(e.estimate.c);
        bsum += e.estimate.bplus;
    }
    const Mat3 mean = sum / reps;
    const Mat3 sem = ((sum2 / reps - mean.cwiseProduct(mean)) / (reps - 1)).cwiseSqrt();
    for (int i = 0; i < 9; ++i) EXPECT_LT(std::abs(mean(i) - truth.c(i)), 3.0 * sem(i)) << i;
}

TEST(Estimate, ProjectionKeepsEntanglementVerdict) {
    for (const FanoState& s : {singlet(), triplet()}) {
        const StateEstimate e = estimate_state(sample_moments(s, 1000000, 77));
        const DensityMatrix4 p = project_physical(assemble_density(e.estimate));
        EXPECT_TRUE(peres_horodecki(p).entangled);
        EXPECT_GT(fidelity(p, assemble_density(s)), 0.99);
    }
    const FanoState sep = FanoState::unpolarized(Vec3(0.3, 0.3, 0.3).asDiagonal());
    const StateEstimate e = estimate_state(sample_moments(sep, 1000000, 78));
    EXPECT_FALSE(peres_horodecki(project_physical(assemble_density(e.estimate))).entangled);
}

TEST(Report, TiersAndMarkers) {
    const TomographyReport r = tomography_report(singlet(), 200000, 3);
    ASSERT_EQ(r.tiers.size(), 3u);
    EXPECT_EQ(r.tiers[0].parameters.size(), 2u);
    EXPECT_EQ(r.tiers[1].parameters.size(), 4u);
    EXPECT_EQ(r.tiers[2].parameters.size(), 15u);
    for (const auto& t : r.tiers) {
        EXPECT_EQ(t.values.size(), t.parameters.size());
        EXPECT_EQ(t.errors.size(), t.parameters.size());
    }
    EXPECT_NEAR(r.witness.value, -2.0 / 3.0, 5.0 * r.witness.error);
    EXPECT_GT(r.significance, 50.0);
    EXPECT_NEAR(r.chsh.value, 2.0 * std::sqrt(2.0), 5.0 * r.chsh.error);
    EXPECT_GT(r.fidelity, 0.99);
}

TEST(Report, SignificanceGrowsLikeRootN) {
    ColliderConfig c;
    c.pdf = make_pdf("toy-v1:gluon-only");
    const MassWindow w{346.0, 400.0};
    const double s4 = tomography_report(c, w, 10000, 1).significance;
    const double s5 = tomography_report(c, w, 100000, 1).significance;
    const double s6 = tomography_report(c, w, 1000000, 1).significance;
    EXPECT_NEAR(s5 / s4, std::sqrt(10.0), 0.2 * std::sqrt(10.0));
    EXPECT_NEAR(s6 / s5, std::sqrt(10.0), 0.2 * std::sqrt(10.0));
}

TEST(Report, ClosureAtTenMillion) {
    ColliderConfig c;
    c.pdf = make_pdf("toy-v1");
    const TomographyReport r = tomography_report(c, {346.0, 400.0}, 10000000, 12);
    EXPECT_GT(r.fidelity, 0.999);
}

TEST(Report, JsonLayout) {
    const TomographyReport r = tomography_report(singlet(), 5000, 3);
    const std::string text = report_to_json(r);
    EXPECT_EQ(text, report_to_json(tomography_report(singlet(), 5000, 3)));
    const nlohmann::json j = nlohmann::json::parse(text);
    for (const char* k : {"n", "seed", "kappa_plus", "kappa_minus", "truth", "estimates", "errors", "markers",
                          "significance", "projected", "fidelity", "concurrence"})
        EXPECT_TRUE(j.contains(k)) << k;
    EXPECT_EQ(j["n"], 5000);
    EXPECT_EQ(j["estimates"]["symmetry+lo"].size(), 2u);
    EXPECT_EQ(j["estimates"]["symmetry"].size(), 4u);
    EXPECT_EQ(j["estimates"]["none"].size(), 15u);
    EXPECT_EQ(j["errors"]["none"].size(), 15u);
    for (const char* m : {"delta", "Delta", "chsh", "W"}) EXPECT_TRUE(j["markers"][m].contains("error")) << m;
}

TEST(EventsCsv, RoundTrip) {
    const EventSample e = sample_events(random_physical(2), 1000, 4);
    std::ostringstream out;
    write_events_csv(e, out);
    const std::string text = out.str();
    EXPECT_EQ(text.substr(0, text.find('\n')), "lx+,ly+,lz+,lx-,ly-,lz-");
    std::istringstream in(text);
    const EventSample back = read_events_csv(in);
    ASSERT_EQ(back.n(), e.n());
    for (std::size_t i = 0; i < e.n(); ++i) {
        EXPECT_LT((back.events[i].l_plus - e.events[i].l_plus).cwiseAbs().maxCoeff(), 1e-8);
        EXPECT_LT((back.events[i].l_minus - e.events[i].l_minus).cwiseAbs().maxCoeff(), 1e-8);
        EXPECT_NEAR(back.events[i].l_plus.norm(), 1.0, 1e-12);
    }
}

TEST(EventsCsv, ParseErrors) {
    auto parse = [](const std::string& s) {
        std::istringstream in(s);
        return read_events_csv(in);
    };
    const std::string h = "lx+,ly+,lz+,lx-,ly-,lz-\n";
    EXPECT_EQ(parse(h).n(), 0u);
    EXPECT_EQ(kind_of([&] { (void)parse(""); }), ErrorKind::ParseError);
    EXPECT_EQ(kind_of([&] { (void)parse("0,0,1,0,0,1\n"); }), ErrorKind::ParseError);
    EXPECT_EQ(kind_of([&] { (void)parse(h + "0,0,1,0,0\n"); }), ErrorKind::ParseError);
    EXPECT_EQ(kind_of([&] { (void)parse(h + "0,0,1,0,0,1,0\n"); }), ErrorKind::ParseError);
    EXPECT_EQ(kind_of([&] { (void)parse(h + "0,0,1,0,0,abc\n"); }), ErrorKind::ParseError);
    EXPECT_EQ(kind_of([&] { (void)parse(h + "0,0,1.01,0,0,1\n"); }), ErrorKind::ParseError);
}
