#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "ttqi/phase_space.hpp"
#include "ttqi/spinpair.hpp"

namespace ttqi {

/// Spin analyzing powers of the antilepton (plus) and lepton (minus).
struct DecayConfig {
    double kappa_plus = 1.0;
    double kappa_minus = -1.0;

    void validate() const;
};

struct LeptonPair {
    Vec3 l_plus;
    Vec3 l_minus;
};

struct EventSample {
    std::vector<LeptonPair> events;
    std::uint64_t seed = 0;

    std::size_t n() const { return events.size(); }
};

/// p = [1 + k+ B+.l+ + k- B-.l- + k+ k- l+.C.l-] / (4 pi)^2.  Throws
/// NegativeDensity below -1e-12.
double dilepton_density(const FanoState& state, const Vec3& l_plus, const Vec3& l_minus, const DecayConfig& cfg = {});

/// Supremum of the bracket in dilepton_density over both spheres (exact when
/// B+ = B- = 0, an upper bound otherwise).
double density_envelope(const FanoState& state, const DecayConfig& cfg = {});

struct SamplingOptions {
    /// Events per RNG stream; stream k is seeded from (seed, k).
    std::size_t chunk = 65536;
    /// 0 picks std::thread::hardware_concurrency().
    unsigned threads = 0;
};

/// Raw sums of x = (l+, l-, vec(l+ l-^T)) and x x^T, row-major outer product.
class MomentAccumulator {
  public:
    using Vec15 = Eigen::Matrix<double, 15, 1>;
    using Mat15 = Eigen::Matrix<double, 15, 15>;

    void add(const Vec3& l_plus, const Vec3& l_minus);
    void merge(const MomentAccumulator& other);

    std::size_t n() const { return n_; }
    Vec15 mean() const;
    /// Sample covariance of x (n - 1 denominator).
    Mat15 covariance() const;

  private:
    std::size_t n_ = 0;
    Vec15 sum_ = Vec15::Zero();
    Mat15 sum2_ = Mat15::Zero();
};

/// Rejection sampling with a uniform proposal on S2 x S2.  Deterministic in
/// (seed, chunk size), independent of the thread count.
EventSample sample_events(const FanoState& state, std::size_t n, std::uint64_t seed, const DecayConfig& cfg = {},
                          const SamplingOptions& opt = {});

/// Same event stream as sample_events, reduced to moments without storing it.
MomentAccumulator sample_moments(const FanoState& state, std::size_t n, std::uint64_t seed,
                                 const DecayConfig& cfg = {}, const SamplingOptions& opt = {});

MomentAccumulator accumulate(const EventSample& sample);

struct StateEstimate {
    FanoState estimate;   // a = 1
    FanoState std_error;  // same layout, one standard error per entry
    double d = 0.0;
    double d_error = 0.0;
    /// Covariance of (B+, B-, vec C), row-major C.
    MomentAccumulator::Mat15 covariance;
    std::size_t n = 0;
};

/// Moment estimators B+ = 3<l+>/k+, B- = 3<l->/k-, C = 9<l+ l-^T>/(k+ k-),
/// D = 3<cos phi>/(k+ k-).  InsufficientSample below 100 events; DomainError
/// if an analyzing power is zero.
StateEstimate estimate_state(const MomentAccumulator& m, const DecayConfig& cfg = {});
StateEstimate estimate_state(const EventSample& sample, const DecayConfig& cfg = {});

struct TierEstimate {
    std::string name;
    std::vector<std::string> parameters;
    std::vector<double> values;
    std::vector<double> errors;
};

struct Marker {
    double value = 0.0;
    double error = 0.0;
};

struct TomographyReport {
    FanoState truth;
    std::size_t n = 0;
    std::uint64_t seed = 0;
    DecayConfig decay;
    std::vector<TierEstimate> tiers;  // 2, 4 and 15 parameters
    Marker delta;                     // axial delta from (C_perp, C_z)
    Marker delta_hel;                 // Delta marker on the full C
    Marker chsh;
    Marker witness;                   // W = D + 1/3
    double significance = 0.0;        // -W / sigma_W
    FanoState raw;
    FanoState projected;
    double fidelity = 0.0;            // truth vs projected
    double concurrence = 0.0;         // of projected
};

TomographyReport tomography_report(const FanoState& truth, std::size_t n, std::uint64_t seed,
                                   const DecayConfig& decay = {}, const SamplingOptions& opt = {});
TomographyReport tomography_report(const ColliderConfig& cfg, const MassWindow& w, std::size_t n, std::uint64_t seed,
                                   const DecayConfig& decay = {}, const SamplingOptions& opt = {});

/// Header "lx+,ly+,lz+,lx-,ly-,lz-", 9 significant digits.
void write_events_csv(const EventSample& sample, std::ostream& out);
/// Vectors are renormalized; rows further than 1e-6 from unit norm are a ParseError.
EventSample read_events_csv(std::istream& in);

/// JSON document with estimates, errors, markers and significance.
std::string report_to_json(const TomographyReport& r);

}  // namespace ttqi
