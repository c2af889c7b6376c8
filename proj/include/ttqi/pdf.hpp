#pragma once

#include <array>
#include <iosfwd>
#include <memory>
#include <string>
#include <vector>

namespace ttqi {

/// Knot grid of x f(x, Q) from an LHAPDF6 "lhagrid1" member file.  Subgrid
/// blocks are merged into one Q axis; at a shared boundary knot the upper
/// block's row wins.
struct PdfGrid {
    std::vector<double> x_knots;
    std::vector<double> q_knots;
    std::vector<int> flavor_ids;  // gluon stored as 21
    std::vector<double> values;   // ((ix * nq) + iq) * nflavors + iflavor

    std::size_t nx() const { return x_knots.size(); }
    std::size_t nq() const { return q_knots.size(); }
    std::size_t nflavors() const { return flavor_ids.size(); }
    double value(std::size_t ix, std::size_t iq, std::size_t ifl) const {
        return values[(ix * nq() + iq) * nflavors() + ifl];
    }
    /// Column of a PDG id (0 is accepted for the gluon), or -1.
    int flavor_index(int pid) const;
};

PdfGrid parse_lhagrid(std::istream& in);
PdfGrid parse_lhagrid(const std::string& text);
PdfGrid load_lhagrid(const std::string& path);
void write_lhagrid(const PdfGrid& grid, std::ostream& out);

enum class Interpolation { LogBilinear, LogBicubic };

struct XfxOptions {
    Interpolation interpolation = Interpolation::LogBilinear;
    bool clamp_negative = false;
    /// Below the lowest x knot: use the floor value instead of throwing OutOfRange.
    bool freeze_below_floor = false;
};

/// Interpolated x f(x, Q) in (ln x, ln Q^2).  Q is clamped to the knot range;
/// x above 1 gives 0.
double xfx(const PdfGrid& grid, int pid, double x, double q, const XfxOptions& opt = {});

/// Parton slots used by the luminosity code: index pid + 5 for pid in
/// [-5, 5], with the gluon in the pid-0 slot.
using PartonValues = std::array<double, 11>;
inline constexpr int kGluonSlot = 5;

class PartonDensity {
  public:
    virtual ~PartonDensity() = default;
    virtual std::string name() const = 0;
    virtual double xfx(int pid, double x, double q) const = 0;
    /// x f for all eleven slots; flavors the set does not carry read 0.
    virtual PartonValues xfx_all(double x, double q) const;
};

class GridDensity final : public PartonDensity {
  public:
    GridDensity(PdfGrid grid, std::string name, XfxOptions opt);
    std::string name() const override { return name_; }
    double xfx(int pid, double x, double q) const override;
    PartonValues xfx_all(double x, double q) const override;
    const PdfGrid& grid() const { return grid_; }

  private:
    PdfGrid grid_;
    std::string name_;
    XfxOptions opt_;
    std::vector<double> log_x_, log_q2_;
    std::array<int, 11> columns_{};
};

/// Q-independent analytic set.  x g = a_g (1 - x)^g_power and, for each of the
/// ten light quark and antiquark flavors, x q = a_q x^q_alpha (1 - x)^q_power.
struct ToyParams {
    double a_g = 2.5;
    double g_power = 5.0;
    double a_q = 0.6;
    double q_alpha = 0.5;
    double q_power = 3.0;
    bool gluons = true;
    bool quarks = true;
};

class ToyDensity final : public PartonDensity {
  public:
    explicit ToyDensity(ToyParams p = {}, std::string name = "toy-v1") : p_(p), name_(std::move(name)) {}
    std::string name() const override { return name_; }
    double xfx(int pid, double x, double q) const override;
    const ToyParams& params() const { return p_; }

  private:
    ToyParams p_;
    std::string name_;
};

/// "toy-v1", "toy-v1:gluon-only", "toy-v1:quark-only", or a path to an
/// lhagrid1 file (read with negative values clamped to 0).
std::shared_ptr<const PartonDensity> make_pdf(const std::string& spec);

/// Tabulate any density on a knot grid (flavors -5..5 and 21).
PdfGrid tabulate(const PartonDensity& pdf, const std::vector<double>& x_knots, const std::vector<double>& q_knots);

}  // namespace ttqi
