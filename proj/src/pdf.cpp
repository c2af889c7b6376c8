#include "ttqi/pdf.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <sstream>
#include <string_view>

#include "ttqi/errors.hpp"

namespace ttqi {

namespace {

[[noreturn]] void parse_fail(std::size_t line, std::size_t col, const std::string& msg) {
    throw Error(ErrorKind::ParseError, "line " + std::to_string(line) + ", column " + std::to_string(col) + ": " + msg);
}

struct Line {
    std::size_t number;
    std::string text;
};

std::string_view trim(std::string_view s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

template <class T>
std::vector<T> parse_numbers(const Line& ln) {
    std::vector<T> out;
    const std::string& s = ln.text;
    std::size_t i = 0;
    while (i < s.size()) {
        while (i < s.size() && (s[i] == ' ' || s[i] == '\t' || s[i] == '\r')) ++i;
        if (i >= s.size()) break;
        std::size_t j = i;
        while (j < s.size() && s[j] != ' ' && s[j] != '\t' && s[j] != '\r') ++j;
        T v{};
        const char* first = s.data() + i;
        const char* last = s.data() + j;
        if (*first == '+') ++first;
        const auto res = std::from_chars(first, last, v);
        if (res.ec != std::errc() || res.ptr != last)
            parse_fail(ln.number, i + 1, "non-numeric token '" + s.substr(i, j - i) + "'");
        out.push_back(v);
        i = j;
    }
    return out;
}

bool is_separator(const Line& ln) { return trim(ln.text) == "---"; }

struct Block {
    std::vector<double> x, q;
    std::vector<int> flavors;
    std::vector<double> values;  // (ix * nq + iq) * nf + f
    std::size_t first_line;
};

void check_ascending(const std::vector<double>& v, const Line& ln, const char* what) {
    if (v.empty()) parse_fail(ln.number, 1, std::string("empty ") + what + " knot list");
    for (std::size_t i = 1; i < v.size(); ++i)
        if (!(v[i] > v[i - 1])) parse_fail(ln.number, 1, std::string(what) + " knots not strictly ascending");
}

bool same_knots(const std::vector<double>& a, const std::vector<double>& b) {
    if (a.size() != b.size()) return false;
    for (std::size_t i = 0; i < a.size(); ++i)
        if (std::abs(a[i] - b[i]) > 1e-10 * std::abs(a[i])) return false;
    return true;
}

std::size_t locate(const std::vector<double>& knots, double v) {
    const auto it = std::upper_bound(knots.begin(), knots.end(), v);
    std::size_t i = static_cast<std::size_t>(std::max<std::ptrdiff_t>(it - knots.begin() - 1, 0));
    return std::min(i, knots.size() - 2);
}

// Cubic Hermite on [k[i], k[i+1]] with finite-difference slopes.
template <class Get>
double hermite(const std::vector<double>& k, std::size_t i, double t, Get get) {
    const std::size_t n = k.size();
    auto slope = [&](std::size_t j) {
        if (j == 0) return (get(1) - get(0)) / (k[1] - k[0]);
        if (j == n - 1) return (get(n - 1) - get(n - 2)) / (k[n - 1] - k[n - 2]);
        return 0.5 * ((get(j + 1) - get(j)) / (k[j + 1] - k[j]) + (get(j) - get(j - 1)) / (k[j] - k[j - 1]));
    };
    const double p0 = get(i), p1 = get(i + 1);
    if (t == 0.0) return p0;
    if (t == 1.0) return p1;
    const double d = k[i + 1] - k[i];
    const double t2 = t * t, t3 = t2 * t;
    return (2 * t3 - 3 * t2 + 1) * p0 + (t3 - 2 * t2 + t) * d * slope(i) + (-2 * t3 + 3 * t2) * p1 +
           (t3 - t2) * d * slope(i + 1);
}

std::vector<double> log_knots(const std::vector<double>& knots, double scale) {
    std::vector<double> out;
    out.reserve(knots.size());
    for (double k : knots) out.push_back(scale * std::log(k));
    return out;
}

struct Interp {
    const PdfGrid& g;
    const std::vector<double>& lx;  // ln x
    const std::vector<double>& lq;  // ln Q^2

    struct Cell {
        std::size_t ix, iq;
        double tx, tq;
    };

    // Returns false if x > 1 (caller yields 0).
    bool cell(double x, double q, bool freeze, Cell& c) const {
        if (!(x > 0.0) || std::isnan(q)) throw Error(ErrorKind::OutOfRange, "x must be positive");
        if (x > 1.0) return false;
        if (x < g.x_knots.front()) {
            if (!freeze)
                throw Error(ErrorKind::OutOfRange, "x = " + std::to_string(x) + " below the grid floor");
            x = g.x_knots.front();
        }
        q = std::clamp(q, g.q_knots.front(), g.q_knots.back());
        const double vx = std::log(x), vq = 2.0 * std::log(q);
        c.ix = g.nx() > 1 ? locate(lx, vx) : 0;
        c.iq = g.nq() > 1 ? locate(lq, vq) : 0;
        c.tx = g.nx() > 1 ? (vx - lx[c.ix]) / (lx[c.ix + 1] - lx[c.ix]) : 0.0;
        c.tq = g.nq() > 1 ? (vq - lq[c.iq]) / (lq[c.iq + 1] - lq[c.iq]) : 0.0;
        return true;
    }

    double bilinear(const Cell& c, std::size_t f) const {
        const std::size_t ix1 = std::min(c.ix + 1, g.nx() - 1), iq1 = std::min(c.iq + 1, g.nq() - 1);
        const double v0 = (1.0 - c.tq) * g.value(c.ix, c.iq, f) + c.tq * g.value(c.ix, iq1, f);
        const double v1 = (1.0 - c.tq) * g.value(ix1, c.iq, f) + c.tq * g.value(ix1, iq1, f);
        return (1.0 - c.tx) * v0 + c.tx * v1;
    }

    double bicubic(const Cell& c, std::size_t f) const {
        if (g.nx() < 2 || g.nq() < 2) return bilinear(c, f);
        auto along_x = [&](std::size_t iq) {
            return hermite(lx, c.ix, c.tx, [&](std::size_t ix) { return g.value(ix, iq, f); });
        };
        return hermite(lq, c.iq, c.tq, along_x);
    }

    double eval(const Cell& c, std::size_t f, Interpolation kind) const {
        return kind == Interpolation::LogBicubic ? bicubic(c, f) : bilinear(c, f);
    }
};

}  // namespace

int PdfGrid::flavor_index(int pid) const {
    if (pid == 0) pid = 21;
    for (std::size_t i = 0; i < flavor_ids.size(); ++i)
        if (flavor_ids[i] == pid) return static_cast<int>(i);
    return -1;
}

PdfGrid parse_lhagrid(std::istream& in) {
    std::vector<Line> lines;
    {
        std::string s;
        std::size_t n = 0;
        while (std::getline(in, s)) lines.push_back({++n, s});
    }
    std::size_t pos = 0;
    auto skip_blank = [&] {
        while (pos < lines.size() && trim(lines[pos].text).empty()) ++pos;
    };

    // Header.
    bool header_closed = false;
    for (; pos < lines.size(); ++pos) {
        const Line& ln = lines[pos];
        const std::string_view t = trim(ln.text);
        if (t.empty()) continue;
        if (t == "---") {
            header_closed = true;
            ++pos;
            break;
        }
        const auto colon = t.find(':');
        if (colon == std::string_view::npos) parse_fail(ln.number, 1, "expected 'Key: value' in header");
        const std::string_view key = trim(t.substr(0, colon));
        const std::string_view val = trim(t.substr(colon + 1));
        if (key == "Format" && val != "lhagrid1")
            throw Error(ErrorKind::UnsupportedFormat, "Format '" + std::string(val) + "' is not lhagrid1");
    }
    if (!header_closed) parse_fail(lines.empty() ? 1 : lines.back().number, 1, "header not terminated by '---'");

    std::vector<Block> blocks;
    while (true) {
        skip_blank();
        if (pos >= lines.size()) break;
        Block b;
        b.first_line = lines[pos].number;
        if (pos + 3 > lines.size()) parse_fail(lines.back().number, 1, "incomplete subgrid header");
        const Line& lx = lines[pos++];
        const Line& lq = lines[pos++];
        const Line& lf = lines[pos++];
        b.x = parse_numbers<double>(lx);
        b.q = parse_numbers<double>(lq);
        b.flavors = parse_numbers<int>(lf);
        check_ascending(b.x, lx, "x");
        check_ascending(b.q, lq, "Q");
        if (!(b.x.front() > 0.0) || b.x.back() > 1.0) parse_fail(lx.number, 1, "x knots must lie in (0, 1]");
        if (!(b.q.front() > 0.0)) parse_fail(lq.number, 1, "Q knots must be positive");
        if (b.flavors.empty()) parse_fail(lf.number, 1, "empty flavor list");
        for (int& f : b.flavors)
            if (f == 0) f = 21;
        const std::size_t rows = b.x.size() * b.q.size();
        const std::size_t nf = b.flavors.size();
        b.values.reserve(rows * nf);
        for (std::size_t r = 0; r < rows; ++r) {
            if (pos >= lines.size() || is_separator(lines[pos])) {
                const std::size_t at = pos < lines.size() ? lines[pos].number : lines.back().number + 1;
                parse_fail(at, 1, "truncated value table: block starting at line " + std::to_string(b.first_line) +
                                      " expects " + std::to_string(rows) + " rows, row " + std::to_string(r + 1) +
                                      " is missing");
            }
            const Line& ln = lines[pos++];
            const std::vector<double> v = parse_numbers<double>(ln);
            if (v.size() != nf)
                parse_fail(ln.number, 1, "row " + std::to_string(r + 1) + " has " + std::to_string(v.size()) +
                                             " columns, expected " + std::to_string(nf));
            for (double d : v)
                if (!std::isfinite(d)) parse_fail(ln.number, 1, "non-finite value");
            b.values.insert(b.values.end(), v.begin(), v.end());
        }
        skip_blank();
        if (pos < lines.size()) {
            if (!is_separator(lines[pos]))
                parse_fail(lines[pos].number, 1,
                           "expected '---' after " + std::to_string(rows) + " rows of the block at line " +
                               std::to_string(b.first_line));
            ++pos;
        }
        blocks.push_back(std::move(b));
    }
    if (blocks.empty()) parse_fail(lines.empty() ? 1 : lines.back().number, 1, "no subgrid blocks");

    // Merge the Q axes.
    PdfGrid g;
    g.x_knots = blocks.front().x;
    g.flavor_ids = blocks.front().flavors;
    struct Src {
        std::size_t block, iq;
    };
    std::vector<Src> src;
    for (std::size_t bi = 0; bi < blocks.size(); ++bi) {
        const Block& b = blocks[bi];
        if (!same_knots(b.x, g.x_knots))
            parse_fail(b.first_line, 1, "subgrid x knots differ from the first block");
        if (b.flavors != g.flavor_ids) parse_fail(b.first_line + 2, 1, "subgrid flavor list differs");
        for (std::size_t iq = 0; iq < b.q.size(); ++iq) {
            const double q = b.q[iq];
            if (!g.q_knots.empty()) {
                const double last = g.q_knots.back();
                if (std::abs(q - last) <= 1e-10 * last) {
                    src.back() = {bi, iq};
                    continue;
                }
                if (q < last) parse_fail(b.first_line + 1, 1, "subgrid Q ranges overlap");
            }
            g.q_knots.push_back(q);
            src.push_back({bi, iq});
        }
    }
    const std::size_t nf = g.flavor_ids.size();
    g.values.resize(g.nx() * g.nq() * nf);
    for (std::size_t ix = 0; ix < g.nx(); ++ix)
        for (std::size_t iq = 0; iq < g.nq(); ++iq) {
            const Block& b = blocks[src[iq].block];
            const double* row = &b.values[(ix * b.q.size() + src[iq].iq) * nf];
            std::copy(row, row + nf, &g.values[(ix * g.nq() + iq) * nf]);
        }
    return g;
}

PdfGrid parse_lhagrid(const std::string& text) {
    std::istringstream in(text);
    return parse_lhagrid(in);
}

PdfGrid load_lhagrid(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorKind::IoError, "cannot open PDF grid '" + path + "'");
    return parse_lhagrid(in);
}

void write_lhagrid(const PdfGrid& g, std::ostream& out) {
    out << "PdfType: central\nFormat: lhagrid1\n---\n";
    out << std::scientific << std::setprecision(16);
    for (double x : g.x_knots) out << x << ' ';
    out << '\n';
    for (double q : g.q_knots) out << q << ' ';
    out << '\n';
    for (int f : g.flavor_ids) out << f << ' ';
    out << '\n';
    for (std::size_t ix = 0; ix < g.nx(); ++ix)
        for (std::size_t iq = 0; iq < g.nq(); ++iq) {
            for (std::size_t f = 0; f < g.nflavors(); ++f) out << ' ' << g.value(ix, iq, f);
            out << '\n';
        }
    out << "---\n";
}

double xfx(const PdfGrid& grid, int pid, double x, double q, const XfxOptions& opt) {
    const int col = grid.flavor_index(pid);
    if (col < 0) throw Error(ErrorKind::FlavorUnavailable, "flavor " + std::to_string(pid) + " not in grid");
    const std::vector<double> lx = log_knots(grid.x_knots, 1.0), lq = log_knots(grid.q_knots, 2.0);
    const Interp ip{grid, lx, lq};
    Interp::Cell c{};
    if (!ip.cell(x, q, opt.freeze_below_floor, c)) return 0.0;
    const double v = ip.eval(c, static_cast<std::size_t>(col), opt.interpolation);
    return opt.clamp_negative ? std::max(v, 0.0) : v;
}

PartonValues PartonDensity::xfx_all(double x, double q) const {
    PartonValues out{};
    for (int pid = -5; pid <= 5; ++pid) out[pid + 5] = xfx(pid == 0 ? 21 : pid, x, q);
    return out;
}

GridDensity::GridDensity(PdfGrid grid, std::string name, XfxOptions opt)
    : grid_(std::move(grid)), name_(std::move(name)), opt_(opt) {
    log_x_ = log_knots(grid_.x_knots, 1.0);
    log_q2_ = log_knots(grid_.q_knots, 2.0);
    for (int pid = -5; pid <= 5; ++pid) columns_[pid + 5] = grid_.flavor_index(pid);
    if (columns_[kGluonSlot] < 0) throw Error(ErrorKind::FlavorUnavailable, "grid has no gluon column");
}

double GridDensity::xfx(int pid, double x, double q) const { return ttqi::xfx(grid_, pid, x, q, opt_); }

PartonValues GridDensity::xfx_all(double x, double q) const {
    const Interp ip{grid_, log_x_, log_q2_};
    PartonValues out{};
    Interp::Cell c{};
    if (!ip.cell(x, q, opt_.freeze_below_floor, c)) return out;
    for (std::size_t s = 0; s < out.size(); ++s) {
        if (columns_[s] < 0) continue;
        const double v = ip.eval(c, static_cast<std::size_t>(columns_[s]), opt_.interpolation);
        out[s] = opt_.clamp_negative ? std::max(v, 0.0) : v;
    }
    return out;
}

double ToyDensity::xfx(int pid, double x, double /*q*/) const {
    if (!(x > 0.0)) throw Error(ErrorKind::OutOfRange, "x must be positive");
    if (x >= 1.0) return 0.0;
    if (pid == 21 || pid == 0) return p_.gluons ? p_.a_g * std::pow(1.0 - x, p_.g_power) : 0.0;
    if (pid >= -5 && pid <= 5) return p_.quarks ? p_.a_q * std::pow(x, p_.q_alpha) * std::pow(1.0 - x, p_.q_power) : 0.0;
    throw Error(ErrorKind::FlavorUnavailable, "toy set has no flavor " + std::to_string(pid));
}

std::shared_ptr<const PartonDensity> make_pdf(const std::string& spec) {
    if (spec == "toy-v1") return std::make_shared<ToyDensity>();
    if (spec == "toy-v1:gluon-only") {
        ToyParams p;
        p.quarks = false;
        return std::make_shared<ToyDensity>(p, spec);
    }
    if (spec == "toy-v1:quark-only") {
        ToyParams p;
        p.gluons = false;
        return std::make_shared<ToyDensity>(p, spec);
    }
    if (spec.rfind("toy", 0) == 0) throw Error(ErrorKind::DomainError, "unknown toy PDF '" + spec + "'");
    XfxOptions opt;
    opt.clamp_negative = true;
    return std::make_shared<GridDensity>(load_lhagrid(spec), std::filesystem::path(spec).stem().string(), opt);
}

PdfGrid tabulate(const PartonDensity& pdf, const std::vector<double>& x_knots, const std::vector<double>& q_knots) {
    PdfGrid g;
    g.x_knots = x_knots;
    g.q_knots = q_knots;
    g.flavor_ids = {-5, -4, -3, -2, -1, 21, 1, 2, 3, 4, 5};
    for (double x : x_knots)
        for (double q : q_knots)
            for (int f : g.flavor_ids) g.values.push_back(pdf.xfx(f, x, q));
    return g;
}

}  // namespace ttqi
