#include "hole_energy/grid_solver.hpp"

#include "hole_energy/errors.hpp"

#include <algorithm>
#include <cstdio>
#include <cmath>
#include <cstring>
#include <istream>
#include <limits>
#include <numbers>
#include <ostream>
#include <random>
#include <string>

namespace hole {

namespace {

std::string format_g(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3g", v);
    return buf;
}

constexpr double pi = std::numbers::pi;
constexpr int di[4] = {1, -1, 0, 0};
constexpr int dj[4] = {0, 0, 1, -1};

struct Arm {
    double length = 0.0;
    double theta = 0.0;  // polar angle of the crossing for cut arms
    bool cut = false;
};

// Distance from z along direction d to the circle |w| = r, if it lies in (0, h].
bool circle_crossing(Complex z, Complex d, double r, double h, double& s, double& theta) {
    const double p = z.real() * d.real() + z.imag() * d.imag();
    const double q = std::norm(z) - r * r;
    const double disc = p * p - q;
    if (disc < 0.0) return false;
    const double root = std::sqrt(disc);
    double best = std::numeric_limits<double>::infinity();
    for (double cand : {-p - root, -p + root})
        if (cand > 0.0 && cand <= h * (1.0 + 1e-12)) best = std::min(best, cand);
    if (!std::isfinite(best)) return false;
    s = std::min(best, h);
    const Complex w = z + s * d;
    theta = std::atan2(w.imag(), w.real());
    return true;
}

struct Stencil {
    std::size_t node = 0;
    long nb[4] = {-1, -1, -1, -1};
    double a[4] = {0, 0, 0, 0};
    double theta[4] = {0, 0, 0, 0};
    double diag = 0.0;
    double data = 0.0;  // sum over cut arms of a * boundary value
};

class Solver {
public:
    Solver(GridField& field, const std::function<double(Complex)>& alpha_at)
        : f_(field), W_(field.side()), h_(field.spacing()) {
        const std::size_t n = f_.values.size();
        rhs_.assign(n, 0.0);
        special_.assign(n, -1);
        for (int j = 0; j < W_; ++j)
            for (int i = 0; i < W_; ++i) {
                const std::size_t k = f_.index(i, j);
                if (f_.masks[k] & mask::fixed) continue;
                rhs_[k] = 4.0 * pi * alpha_at(f_.node(i, j));
            }
        alpha_scale_ = std::max(alpha_at(Complex{0.0, 0.0}), 1e-300);
    }

    void build_stencils(double r) {
        stencils_.clear();
        std::fill(special_.begin(), special_.end(), -1);
        for (int j = 1; j < W_ - 1; ++j)
            for (int i = 1; i < W_ - 1; ++i) {
                const std::size_t k = f_.index(i, j);
                if (f_.masks[k] & mask::fixed) continue;
                const bool inside = f_.masks[k] & mask::inside_hole;
                Arm arms[4];
                bool any_cut = false;
                for (int d = 0; d < 4; ++d) {
                    arms[d].length = h_;
                    const std::size_t nk = f_.index(i + di[d], j + dj[d]);
                    const std::uint8_t nm = f_.masks[nk];
                    const bool n_on_circle = (nm & mask::fixed) && (nm & mask::boundary_ring);
                    const bool n_inside = nm & mask::inside_hole;
                    if (n_on_circle || n_inside == inside) continue;
                    double s = 0.0;
                    double theta = 0.0;
                    if (circle_crossing(f_.node(i, j), Complex{double(di[d]), double(dj[d])}, r, h_, s, theta)) {
                        arms[d] = {s, theta, true};
                        any_cut = true;
                    }
                }
                if (!any_cut) continue;
                Stencil st;
                st.node = k;
                const double he = arms[0].length, hw = arms[1].length;
                const double hn = arms[2].length, hs = arms[3].length;
                const double opp[4] = {hw, he, hs, hn};
                for (int d = 0; d < 4; ++d) {
                    st.a[d] = 2.0 / (arms[d].length * (arms[d].length + opp[d]));
                    st.theta[d] = arms[d].theta;
                    st.nb[d] = arms[d].cut ? -1 : static_cast<long>(f_.index(i + di[d], j + dj[d]));
                }
                st.diag = 2.0 / (he * hw) + 2.0 / (hn * hs);
                special_[k] = static_cast<long>(stencils_.size());
                stencils_.push_back(st);
                if (!inside) f_.masks[k] |= mask::boundary_ring;
            }
    }

    void set_data(const std::function<double(double)>& g) {
        for (auto& st : stencils_) {
            st.data = 0.0;
            for (int d = 0; d < 4; ++d)
                if (st.nb[d] < 0) st.data += st.a[d] * g(st.theta[d]);
        }
    }

    struct Box {
        int i0, i1, j0, j1;
    };

    // Sweeps nodes carrying `region` bits inside the box until the scaled
    // correction drops below tol. Returns false on hitting the cap.
    bool solve(std::uint8_t region, bool outside, bool project, Box box, bool grow, double omega,
               double tol, long cap, long& sweeps, double& residual) {
        auto& U = f_.values;
        const double h2 = h_ * h_;
        const double scale = 4.0 / h2 / (4.0 * pi * alpha_scale_);
        const int margin = std::max(4, (W_ - 1) / 32);
        for (long it = 0; it < cap; ++it) {
            double res = 0.0;
            for (int j = box.j0; j <= box.j1; ++j) {
                for (int i = box.i0; i <= box.i1; ++i) {
                    const std::size_t k = f_.index(i, j);
                    const std::uint8_t m = f_.masks[k];
                    if (m & mask::fixed) continue;
                    const bool in = m & mask::inside_hole;
                    if ((in && !(region & mask::inside_hole)) || (!in && !outside)) continue;
                    const long sp = special_[k];
                    double gs;
                    double weight;
                    double magnitude;  // size of the summed terms, for the round-off floor
                    if (sp < 0) {
                        gs = 0.25 * (U[k - 1] + U[k + 1] + U[k - W_] + U[k + W_] + h2 * rhs_[k]);
                        magnitude = std::max({std::abs(U[k - 1]), std::abs(U[k + 1]), std::abs(U[k - W_]),
                                              std::abs(U[k + W_])});
                        weight = scale;
                    } else {
                        const Stencil& st = stencils_[static_cast<std::size_t>(sp)];
                        double acc = st.data + rhs_[k];
                        double sum = std::abs(st.data);
                        for (int d = 0; d < 4; ++d)
                            if (st.nb[d] >= 0) {
                                const double term = st.a[d] * U[static_cast<std::size_t>(st.nb[d])];
                                acc += term;
                                sum += std::abs(term);
                            }
                        gs = acc / st.diag;
                        magnitude = sum / st.diag;
                        weight = st.diag / (4.0 * pi * alpha_scale_);
                    }
                    const double target = project ? std::min(0.0, gs) : gs;
                    // Corrections below the round-off of U itself cannot shrink further.
                    const double change = std::abs(target - U[k]) - 1e-14 * std::max(magnitude, std::abs(U[k]));
                    res = std::max(res, change * weight);
                    double next = U[k] + omega * (gs - U[k]);
                    if (project) next = std::min(0.0, next);
                    U[k] = next;
                }
            }
            ++sweeps;
            residual = res;
            bool expanded = false;
            if (grow && touches_edge(box)) {
                box = {std::max(1, box.i0 - margin), std::min(W_ - 2, box.i1 + margin),
                       std::max(1, box.j0 - margin), std::min(W_ - 2, box.j1 + margin)};
                expanded = true;
            }
            if (!expanded && res < tol) return true;
        }
        return false;
    }

    [[nodiscard]] bool touches_edge(const Box& b) const {
        const auto& U = f_.values;
        auto nonzero = [&](int i, int j) { return U[f_.index(i, j)] != 0.0; };
        const bool can_grow = b.i0 > 1 || b.i1 < W_ - 2 || b.j0 > 1 || b.j1 < W_ - 2;
        if (!can_grow) return false;
        for (int i = b.i0; i <= b.i1; ++i)
            if (nonzero(i, b.j0) || nonzero(i, b.j1)) return true;
        for (int j = b.j0; j <= b.j1; ++j)
            if (nonzero(b.i0, j) || nonzero(b.i1, j)) return true;
        return false;
    }

    [[nodiscard]] Box box_around(double radius) const {
        const int half = (W_ - 1) / 2;
        const int n = std::min(half - 1, static_cast<int>(std::ceil(radius / h_)) + 2);
        return {half - n, half + n, half - n, half + n};
    }

private:
    GridField& f_;
    int W_;
    double h_;
    double alpha_scale_ = 1.0;
    std::vector<double> rhs_;
    std::vector<long> special_;
    std::vector<Stencil> stencils_;
};

double relaxation_for(double h, double length) {
    return 2.0 / (1.0 + std::sin(pi * h / length));
}

}  // namespace

EnvelopeProblem EnvelopeProblem::constant_data(ChartMetric metric, double r, double gamma,
                                               EnvelopeMode mode) {
    EnvelopeProblem p{std::move(metric), r, [gamma](double) { return gamma; }, mode, 0.0};
    return p;
}

EnvelopeProblem EnvelopeProblem::free(ChartMetric metric, double r) {
    return EnvelopeProblem{std::move(metric), r, {}, EnvelopeMode::free_minimizer, 0.0};
}

GridField::GridField(ChartMetric metric, int M, double T)
    : metric_(std::move(metric)), M_(M), T_(T), h_(2.0 * T / M) {
    if (M < 4 || M % 2 != 0) throw Error(ErrorKind::invalid_input, "grid resolution must be even and >= 4");
    if (!(T > 0.0)) throw Error(ErrorKind::invalid_input, "grid half width must be positive");
    const std::size_t n = static_cast<std::size_t>(M + 1) * static_cast<std::size_t>(M + 1);
    values.assign(n, 0.0);
    masks.assign(n, 0);
    for (int j = 0; j <= M; ++j)
        for (int i = 0; i <= M; ++i)
            if (i == 0 || j == 0 || i == M || j == M) masks[index(i, j)] = mask::fixed;
}

GridField GridField::sample(ChartMetric metric, int M, double T, const std::function<double(Complex)>& u) {
    GridField g(std::move(metric), M, T);
    for (int j = 1; j < M; ++j)
        for (int i = 1; i < M; ++i) g.values[g.index(i, j)] = u(g.node(i, j));
    return g;
}

double GridField::value_at(Complex z) const {
    const double x = (z.real() + T_) / h_;
    const double y = (z.imag() + T_) / h_;
    if (x < 0.0 || y < 0.0 || x > M_ || y > M_) return 0.0;
    const int i = std::min(M_ - 1, static_cast<int>(x));
    const int j = std::min(M_ - 1, static_cast<int>(y));
    const double fx = x - i;
    const double fy = y - j;
    return (1 - fx) * (1 - fy) * values[index(i, j)] + fx * (1 - fy) * values[index(i + 1, j)] +
           (1 - fx) * fy * values[index(i, j + 1)] + fx * fy * values[index(i + 1, j + 1)];
}

double GridField::max_value() const { return *std::max_element(values.begin(), values.end()); }
double GridField::min_value() const { return *std::min_element(values.begin(), values.end()); }

GridField envelope_grid(const EnvelopeProblem& problem, int M, const SolverOptions& options) {
    const double r = problem.hole_radius;
    if (!(r > 0.0)) throw Error(ErrorKind::invalid_input, "hole radius must be positive");
    const double T = problem.half_width > 0.0 ? problem.half_width : 4.0 * std::sqrt(std::numbers::e) * r;
    if (r > 0.5 * T) throw Error(ErrorKind::invalid_input, "hole must fit inside [-T/2, T/2]^2");
    if (std::sqrt(2.0) * T > problem.metric.extent())
        throw Error(ErrorKind::domain, "grid box reaches outside the chart");
    const bool free_mode = problem.mode == EnvelopeMode::free_minimizer;
    if (!free_mode && !problem.boundary_data)
        throw Error(ErrorKind::invalid_input, "envelope mode needs boundary data");

    GridField field(problem.metric, M, T);
    field.hole_radius = r;
    field.mode = problem.mode;
    const double h = field.spacing();
    const int W = field.side();
    const auto& metric = problem.metric;
    const auto data = problem.boundary_data;

    for (int j = 1; j < W - 1; ++j)
        for (int i = 1; i < W - 1; ++i) {
            const std::size_t k = field.index(i, j);
            const Complex z = field.node(i, j);
            const double rho = std::abs(z);
            if (std::abs(rho - r) <= 1e-3 * h) {
                field.masks[k] = mask::fixed | mask::boundary_ring;
                if (!free_mode) {
                    const double v = data(std::atan2(z.imag(), z.real()));
                    if (!(v < 0.0)) throw Error(ErrorKind::invalid_input, "boundary data must be negative");
                    field.values[k] = v;
                }
            } else if (rho < r) {
                field.masks[k] = mask::inside_hole;
            }
        }

    Solver solver(field, [&](Complex z) { return metric.density(z); });
    solver.build_stencils(r);

    if (options.initial) {
        const GridField& init = *options.initial;
        for (int j = 1; j < W - 1; ++j)
            for (int i = 1; i < W - 1; ++i) {
                const std::size_t k = field.index(i, j);
                if (field.masks[k] & mask::fixed) continue;
                double v = init.value_at(field.node(i, j));
                if (free_mode && (field.masks[k] & mask::inside_hole)) v -= init.gamma;
                field.values[k] = std::min(0.0, v);
                if (free_mode && (field.masks[k] & mask::inside_hole)) field.values[k] = v;
            }
    }

    long sweeps = 0;
    double residual = 0.0;
    // Relative once the boundary data exceed unit size; round-off in U sets the floor.
    double data_scale = 1.0;
    if (!free_mode)
        for (int k = 0; k < 64; ++k) data_scale = std::max(data_scale, std::abs(data(2.0 * pi * k / 64.0)));
    const double tol = options.tolerance * data_scale;
    auto fail = [&](const char* phase) {
        throw Error(ErrorKind::convergence, std::string("projected SOR did not converge (") + phase +
                                                "), residual " + format_g(residual) + " after " +
                                                std::to_string(sweeps) + " sweeps");
    };

    if (free_mode) {
        // Poisson problem in the hole with zero data; the largest admissible
        // constant on the circle then puts the maximum of U at zero.
        solver.set_data([](double) { return 0.0; });
        const double omega_in = options.relaxation > 0.0 ? options.relaxation : relaxation_for(h, 2.0 * r);
        if (!solver.solve(mask::inside_hole, false, false, solver.box_around(r), false, omega_in, tol,
                          options.max_sweeps, sweeps, residual))
            fail("hole interior");
        double peak = 0.0;
        for (std::size_t k = 0; k < field.values.size(); ++k)
            if (field.masks[k] & mask::inside_hole) peak = std::max(peak, field.values[k]);
        const double gamma = -peak;
        if (!(gamma < 0.0)) throw Error(ErrorKind::convergence, "hole interior solve produced no depth");
        field.gamma = gamma;
        for (std::size_t k = 0; k < field.values.size(); ++k) {
            if (field.masks[k] & mask::inside_hole) field.values[k] += gamma;
            else if ((field.masks[k] & mask::fixed) && (field.masks[k] & mask::boundary_ring)) field.values[k] = gamma;
        }
        field.boundary_data = [gamma](double) { return gamma; };
        solver.set_data(field.boundary_data);
        const double omega_out = options.relaxation > 0.0 ? options.relaxation : relaxation_for(h, 2.0 * r);
        if (!solver.solve(0, true, true, solver.box_around(1.5 * r), true, omega_out, tol,
                          options.max_sweeps - sweeps, sweeps, residual))
            fail("exterior obstacle");
    } else {
        field.boundary_data = data;
        solver.set_data(data);
        const double omega = options.relaxation > 0.0 ? options.relaxation : relaxation_for(h, 2.0 * T);
        if (!solver.solve(mask::inside_hole, true, true, solver.box_around(1.5 * r), true, omega, tol,
                          options.max_sweeps, sweeps, residual))
            fail("envelope");
    }
    field.sweeps = sweeps;
    field.residual = residual;
    return field;
}

double grid_energy(const GridField& field) {
    const int W = field.side();
    const double h = field.spacing();
    const auto& U = field.values;
    const auto& metric = field.metric();
    double linear = 0.0;
    for (int j = 1; j < W - 1; ++j)
        for (int i = 1; i < W - 1; ++i) {
            const double u = U[field.index(i, j)];
            if (u != 0.0) linear += u * metric.density(field.node(i, j));
        }
    linear *= -4.0 * h * h;

    const bool has_circle = field.hole_radius > 0.0 && static_cast<bool>(field.boundary_data);
    auto is_inside = [&](std::size_t k) { return (field.masks[k] & mask::inside_hole) != 0; };
    auto on_circle = [&](std::size_t k) {
        return (field.masks[k] & mask::fixed) && (field.masks[k] & mask::boundary_ring);
    };
    double dirichlet = 0.0;
    for (int j = 0; j < W; ++j)
        for (int i = 0; i < W; ++i) {
            const std::size_t a = field.index(i, j);
            for (int d = 0; d < 3; d += 2) {
                const int ni = i + di[d];
                const int nj = j + dj[d];
                if (ni >= W || nj >= W) continue;
                const std::size_t b = field.index(ni, nj);
                const double ua = U[a];
                const double ub = U[b];
                if (ua == 0.0 && ub == 0.0) continue;
                double s = 0.0;
                double theta = 0.0;
                if (has_circle && !on_circle(a) && !on_circle(b) && is_inside(a) != is_inside(b) &&
                    circle_crossing(field.node(i, j), Complex{double(di[d]), double(dj[d])}, field.hole_radius, h, s,
                                    theta) &&
                    s < h) {
                    const double g = field.boundary_data(theta);
                    dirichlet += h * ((ua - g) * (ua - g) / s + (g - ub) * (g - ub) / (h - s));
                } else {
                    dirichlet += (ua - ub) * (ua - ub);
                }
            }
        }
    return linear + dirichlet / (2.0 * pi);
}

int maximality_violations(const GridField& field, int samples, std::uint64_t seed) {
    const int W = field.side();
    const double h = field.spacing();
    const auto& U = field.values;
    const double depth = std::max(1e-300, -field.min_value());
    const double delta = 1e-6 * depth;
    const auto& metric = field.metric();
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<int> pick(1, W - 2);
    int violations = 0;
    int tested = 0;
    const bool free_mode_inside = field.mode == EnvelopeMode::free_minimizer;
    while (tested < samples) {
        const int i = pick(rng);
        const int j = pick(rng);
        const std::size_t k = field.index(i, j);
        if (field.masks[k] & mask::fixed) continue;
        if (field.masks[k] & mask::boundary_ring) continue;  // cut stencils, checked through the solver residual
        ++tested;
        if (U[k] + delta > 0.0) continue;
        if (free_mode_inside && (field.masks[k] & mask::inside_hole)) continue;  // Poisson equality is binding
        const double lap = (U[k - 1] + U[k + 1] + U[k - W] + U[k + W] - 4.0 * (U[k] + delta)) / (h * h);
        if (lap + 4.0 * pi * metric.density(field.node(i, j)) >= 0.0) ++violations;
    }
    return violations;
}

void write_csv(const GridField& field, std::ostream& out) {
    const int W = field.side();
    char buf[32];
    for (int j = 0; j < W; ++j) {
        for (int i = 0; i < W; ++i) {
            std::snprintf(buf, sizeof buf, "%.17g", field.values[field.index(i, j)]);
            out << buf << (i + 1 < W ? ',' : '\n');
        }
    }
}

void write_binary(const GridField& field, std::ostream& out) {
    const double header[3] = {static_cast<double>(field.resolution()), field.half_width(), field.spacing()};
    out.write(reinterpret_cast<const char*>(header), sizeof header);
    out.write(reinterpret_cast<const char*>(field.values.data()),
              static_cast<std::streamsize>(field.values.size() * sizeof(double)));
}

GridField read_binary(std::istream& in, ChartMetric metric) {
    double header[3] = {0, 0, 0};
    if (!in.read(reinterpret_cast<char*>(header), sizeof header))
        throw Error(ErrorKind::invalid_input, "truncated grid header");
    GridField g(std::move(metric), static_cast<int>(header[0]), header[1]);
    if (!in.read(reinterpret_cast<char*>(g.values.data()), static_cast<std::streamsize>(g.values.size() * sizeof(double))))
        throw Error(ErrorKind::invalid_input, "truncated grid values");
    return g;
}

}  // namespace hole
