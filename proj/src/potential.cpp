#include "hole_energy/potential.hpp"

#include "hole_energy/errors.hpp"
#include "hole_energy/radial_grid.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

namespace hole {

namespace {

constexpr double four_pi = 4.0 * std::numbers::pi;

bool same_partition(const RadialPotential& u, const MeasureDecomposition& mu) {
    const auto& a = u.pieces();
    const auto& b = mu.pieces();
    if (a.size() != b.size()) return false;
    for (std::size_t k = 0; k < a.size(); ++k)
        if (a[k].t != b[k].t) return false;
    return true;
}

double piece_interp(const std::vector<double>& t, const std::vector<double>& f, double x) {
    if (x <= t.front()) return f.front();
    if (x >= t.back()) return f.back();
    return radial::interpolate(t, f, x);
}

}  // namespace

// ---- RadialPotential ----------------------------------------------------

RadialPotential::RadialPotential(std::vector<RadialPiece> pieces, double hole_radius,
                                 double free_radius)
    : pieces_(std::move(pieces)), hole_radius_(hole_radius), free_radius_(free_radius) {
    if (pieces_.empty()) throw Error(ErrorKind::invalid_input, "potential without samples");
    for (const auto& p : pieces_) {
        const std::size_t n = p.t.size();
        if (n < 3 || p.weight.size() != n || p.value.size() != n || p.flux.size() != n)
            throw Error(ErrorKind::invalid_input, "malformed radial piece");
        for (std::size_t i = 0; i < n; ++i)
            if (!std::isfinite(p.value[i]) || !std::isfinite(p.flux[i]))
                throw Error(ErrorKind::invalid_input, "non-finite potential sample");
    }
    if (pieces_.front().t.front() != 0.0)
        throw Error(ErrorKind::invalid_input, "radial grid must start at the center");
}

RadialPotential RadialPotential::sample(const std::vector<double>& breakpoints, int intervals,
                                        const Profile& value, const Profile& flux,
                                        double hole_radius, double free_radius) {
    const auto counts = radial::allocate_intervals(breakpoints, intervals);
    std::vector<RadialPiece> pieces;
    pieces.reserve(counts.size());
    for (std::size_t k = 0; k < counts.size(); ++k) {
        auto nodes = radial::graded_nodes(breakpoints[k], breakpoints[k + 1], counts[k]);
        RadialPiece piece;
        piece.value.reserve(nodes.t.size());
        piece.flux.reserve(nodes.t.size());
        for (double t : nodes.t) {
            piece.value.push_back(value(t, k));
            piece.flux.push_back(flux(t, k));
        }
        piece.t = std::move(nodes.t);
        piece.weight = std::move(nodes.weight);
        pieces.push_back(std::move(piece));
    }
    return RadialPotential(std::move(pieces), hole_radius, free_radius);
}

double RadialPotential::outer_radius() const { return pieces_.back().t.back(); }

std::vector<double> RadialPotential::breakpoints() const {
    std::vector<double> b;
    for (const auto& p : pieces_) b.push_back(p.t.front());
    b.push_back(outer_radius());
    return b;
}

std::size_t RadialPotential::node_count() const {
    std::size_t n = 0;
    for (const auto& p : pieces_) n += p.t.size();
    return n;
}

std::size_t RadialPotential::piece_index(double t, Side side) const {
    for (std::size_t k = 0; k < pieces_.size(); ++k) {
        const double hi = pieces_[k].t.back();
        if (t < hi || (t == hi && (side == Side::left || k + 1 == pieces_.size()))) return k;
    }
    return pieces_.size() - 1;
}

double RadialPotential::value_in(std::size_t piece, double t) const {
    if (t >= outer_radius()) return exterior_value();
    const auto& p = pieces_.at(piece);
    return piece_interp(p.t, p.value, t);
}

double RadialPotential::flux_in(std::size_t piece, double t) const {
    if (t > outer_radius()) return 0.0;
    const auto& p = pieces_.at(piece);
    return piece_interp(p.t, p.flux, t);
}

double RadialPotential::value_at(double t) const { return value_in(piece_index(t), t); }

double RadialPotential::flux_at(double t, Side side) const {
    if (t > outer_radius() || (t == outer_radius() && side == Side::right)) return 0.0;
    return flux_in(piece_index(t, side), t);
}

double RadialPotential::boundary_charge() const {
    for (std::size_t k = 1; k < pieces_.size(); ++k) {
        if (pieces_[k].t.front() == hole_radius_)
            return pieces_[k].flux.front() - pieces_[k - 1].flux.back();
    }
    return 0.0;
}

double RadialPotential::exterior_value() const { return pieces_.back().value.back(); }

double RadialPotential::max_value() const {
    double m = -std::numeric_limits<double>::infinity();
    std::size_t best_piece = 0, best_node = 0;
    for (std::size_t k = 0; k < pieces_.size(); ++k)
        for (std::size_t i = 0; i < pieces_[k].value.size(); ++i)
            if (pieces_[k].value[i] > m) {
                m = pieces_[k].value[i];
                best_piece = k;
                best_node = i;
            }
    if (pieces_.empty()) return m;
    // An interior maximum can sit between nodes; refine by golden section on
    // the interpolant over the neighbouring intervals.
    const auto& t = pieces_[best_piece].t;
    double lo = t[best_node == 0 ? 0 : best_node - 1];
    double hi = t[std::min(best_node + 1, t.size() - 1)];
    const double g = 0.5 * (std::sqrt(5.0) - 1.0);
    for (int iter = 0; iter < 60 && hi - lo > 1e-15 * std::max(1.0, hi); ++iter) {
        const double a = hi - g * (hi - lo);
        const double b = lo + g * (hi - lo);
        const double fa = value_in(best_piece, a);
        const double fb = value_in(best_piece, b);
        m = std::max({m, fa, fb});
        (fa < fb ? lo : hi) = fa < fb ? a : b;
    }
    return m;
}

double RadialPotential::min_value() const {
    double m = std::numeric_limits<double>::infinity();
    for (const auto& p : pieces_)
        for (double v : p.value) m = std::min(m, v);
    return m;
}

RadialPotential RadialPotential::shifted(double c) const {
    RadialPotential out = *this;
    for (auto& p : out.pieces_)
        for (double& v : p.value) v += c;
    return out;
}

RadialPotential RadialPotential::scaled(double s) const {
    RadialPotential out = *this;
    for (auto& p : out.pieces_) {
        for (double& v : p.value) v *= s;
        for (double& q : p.flux) q *= s;
    }
    return out;
}

RadialPotential combine(const std::vector<std::pair<double, RadialPotential>>& terms,
                        int intervals) {
    if (terms.empty()) throw Error(ErrorKind::invalid_input, "empty combination");
    std::vector<double> bps;
    double hole_radius = std::numeric_limits<double>::infinity();
    double free_radius = 0.0;
    for (const auto& [w, u] : terms) {
        const auto b = u.breakpoints();
        bps.insert(bps.end(), b.begin(), b.end());
        if (w != 0.0 && u.hole_radius() > 0.0) hole_radius = std::min(hole_radius, u.hole_radius());
        if (w != 0.0) free_radius = std::max(free_radius, u.free_radius());
    }
    if (!std::isfinite(hole_radius)) hole_radius = 0.0;
    std::sort(bps.begin(), bps.end());
    const double scale = bps.back();
    std::vector<double> merged;
    for (double b : bps)
        if (merged.empty() || b - merged.back() > 1e-13 * scale) merged.push_back(b);
    if (merged.size() < 2) throw Error(ErrorKind::invalid_input, "degenerate combination grid");

    auto locate = [&](const RadialPotential& u, std::size_t k) {
        const double mid = 0.5 * (merged[k] + merged[k + 1]);
        return std::pair<bool, std::size_t>{mid < u.outer_radius(), u.piece_index(mid)};
    };
    auto value = [&](double t, std::size_t k) {
        double acc = 0.0;
        for (const auto& [w, u] : terms) {
            const auto [inside, j] = locate(u, k);
            acc += w * (inside ? u.value_in(j, t) : u.exterior_value());
        }
        return acc;
    };
    auto flux = [&](double t, std::size_t k) {
        double acc = 0.0;
        for (const auto& [w, u] : terms) {
            const auto [inside, j] = locate(u, k);
            if (inside) acc += w * u.flux_in(j, t);
        }
        return acc;
    };
    return RadialPotential::sample(merged, intervals, value, flux, hole_radius, free_radius);
}

// ---- MeasureDecomposition -----------------------------------------------

MeasureDecomposition::MeasureDecomposition(RadialWeight weight, std::vector<AcPiece> pieces,
                                           std::vector<CircleAtom> atoms, double exterior_mass)
    : weight_(std::move(weight)),
      pieces_(std::move(pieces)),
      atoms_(std::move(atoms)),
      exterior_mass_(exterior_mass) {
    if (pieces_.empty()) throw Error(ErrorKind::invalid_input, "measure without samples");
    for (const auto& p : pieces_)
        if (p.t.size() < 3 || p.weight.size() != p.t.size() || p.density.size() != p.t.size())
            throw Error(ErrorKind::invalid_input, "malformed measure piece");
}

double MeasureDecomposition::outer_radius() const { return pieces_.back().t.back(); }

double MeasureDecomposition::ac_density(double t) const {
    if (t > outer_radius()) return weight_.alpha(t);
    for (const auto& p : pieces_)
        if (t <= p.t.back()) return piece_interp(p.t, p.density, t);
    return pieces_.back().density.back();
}

double MeasureDecomposition::ac_mass() const {
    double acc = 0.0;
    for (const auto& p : pieces_)
        for (std::size_t i = 0; i < p.t.size(); ++i) acc += p.weight[i] * p.density[i] * four_pi * p.t[i];
    return acc;
}

double MeasureDecomposition::atom_mass() const {
    double acc = 0.0;
    for (const auto& a : atoms_) acc += a.mass;
    return acc;
}

double MeasureDecomposition::total_mass() const { return ac_mass() + atom_mass() + exterior_mass_; }

// ---- operations ----------------------------------------------------------

double omega_integral(const RadialPotential& u, const RadialWeight& weight) {
    double acc = 0.0;
    for (const auto& p : u.pieces())
        for (std::size_t i = 0; i < p.t.size(); ++i)
            acc += p.weight[i] * p.value[i] * weight.alpha(p.t[i]) * four_pi * p.t[i];
    const double outside = 1.0 - weight.mass(u.outer_radius());
    return acc + u.exterior_value() * outside;
}

double measure_integral(const RadialPotential& u, const MeasureDecomposition& mu) {
    const bool aligned = same_partition(u, mu);
    double acc = 0.0;
    for (std::size_t k = 0; k < u.pieces().size(); ++k) {
        const auto& p = u.pieces()[k];
        for (std::size_t i = 0; i < p.t.size(); ++i) {
            const double d = aligned ? mu.pieces()[k].density[i] : mu.ac_density(p.t[i]);
            acc += p.weight[i] * p.value[i] * d * four_pi * p.t[i];
        }
    }
    for (const auto& a : mu.atoms()) acc += u.value_at(a.radius) * a.mass;
    return acc + u.exterior_value() * mu.exterior_mass();
}

RadialPotential star_normalize(const RadialPotential& u, const RadialWeight& weight) {
    const double shift = omega_integral(u, weight);
    if (!std::isfinite(shift)) throw Error(ErrorKind::invalid_input, "potential is not integrable");
    return u.shifted(-shift);
}

RadialPotential max_normalize(const RadialPotential& u) { return u.shifted(-u.max_value()); }

MeasureDecomposition measure_from_potential(const RadialPotential& u, const RadialWeight& weight,
                                            double tolerance) {
    const double scale = std::max(1.0, weight.alpha(0.0));
    std::vector<AcPiece> pieces;
    std::vector<CircleAtom> atoms;
    const auto& src = u.pieces();
    for (std::size_t k = 0; k < src.size(); ++k) {
        const auto& p = src[k];
        AcPiece ac{p.t, p.weight, std::vector<double>(p.t.size())};
        const auto dq = radial::derivative(p.t, p.flux);
        std::size_t first = 0;
        if (p.t.front() == 0.0) first = 1;
        for (std::size_t i = first; i < p.t.size(); ++i)
            ac.density[i] = weight.alpha(p.t[i]) + dq[i] / (four_pi * p.t[i]);
        if (first == 1) {
            const std::vector<double> ts(p.t.begin() + 1, p.t.begin() + 6);
            const std::vector<double> ds(ac.density.begin() + 1, ac.density.begin() + 6);
            ac.density[0] = radial::interpolate(ts, ds, 0.0, 5);
        }
        for (std::size_t i = 0; i < p.t.size(); ++i) {
            if (ac.density[i] < -tolerance * scale)
                throw Error(ErrorKind::not_subharmonic,
                            "negative density " + std::to_string(ac.density[i]) + " at t = " +
                                std::to_string(p.t[i]));
        }
        if (k > 0) {
            const double jump = p.flux.front() - src[k - 1].flux.back();
            if (jump < -tolerance)
                throw Error(ErrorKind::not_subharmonic,
                            "negative circle mass " + std::to_string(jump) + " at t = " +
                                std::to_string(p.t.front()));
            if (std::abs(jump) > 1e-14) atoms.push_back({p.t.front(), jump});
        }
        pieces.push_back(std::move(ac));
    }
    const double outer = u.outer_radius();
    const double exterior = 1.0 - weight.mass(outer) - src.back().flux.back();
    if (exterior < -tolerance)
        throw Error(ErrorKind::not_subharmonic,
                    "negative mass " + std::to_string(exterior) + " outside the sampled disc");
    return MeasureDecomposition(weight, std::move(pieces), std::move(atoms),
                                std::max(exterior, 0.0));
}

RadialPotential potential_from_measure(const MeasureDecomposition& mu) {
    const auto& weight = mu.weight();
    std::vector<RadialPiece> pieces;
    double mass_before = 0.0;
    double u_before = 0.0;
    const double outer = mu.outer_radius();
    std::size_t atoms_used = 0;
    for (const auto& ac : mu.pieces()) {
        for (const auto& a : mu.atoms()) {
            if (std::abs(a.radius - ac.t.front()) <= 1e-13 * outer && a.radius > 0.0) {
                mass_before += a.mass;
                ++atoms_used;
            }
        }
        const std::size_t n = ac.t.size();
        std::vector<double> g(n);
        for (std::size_t i = 0; i < n; ++i) g[i] = ac.density[i] * four_pi * ac.t[i];
        const auto cum = radial::cumulative_integral(ac.t, g);
        RadialPiece piece{ac.t, ac.weight, std::vector<double>(n), std::vector<double>(n)};
        std::vector<double> ratio(n, 0.0);
        for (std::size_t i = 0; i < n; ++i) {
            piece.flux[i] = mass_before + cum[i] - weight.mass(ac.t[i]);
            ratio[i] = ac.t[i] > 0.0 ? piece.flux[i] / ac.t[i] : 0.0;
        }
        const auto integral = radial::cumulative_integral(ac.t, ratio);
        for (std::size_t i = 0; i < n; ++i) piece.value[i] = u_before + integral[i];
        mass_before += cum.back();
        u_before = piece.value.back();
        pieces.push_back(std::move(piece));
    }
    if (atoms_used != mu.atoms().size())
        throw Error(ErrorKind::invalid_input, "circle atoms must sit on piece boundaries");

    double hole_radius = 0.0;
    for (const auto& a : mu.atoms())
        if (a.mass > 0.0 && (hole_radius == 0.0 || a.radius < hole_radius)) hole_radius = a.radius;
    RadialPotential raw(std::move(pieces), hole_radius, 0.0);
    RadialPotential u = max_normalize(raw);

    const double scale = std::max(1e-300, std::abs(u.min_value()));
    double free_radius = 0.0;
    const auto& ps = u.pieces();
    for (auto pit = ps.rbegin(); pit != ps.rend(); ++pit) {
        bool stop = false;
        for (std::size_t i = pit->t.size(); i-- > 0;) {
            if (std::abs(pit->value[i]) > 1e-12 * scale) {
                stop = true;
                break;
            }
            free_radius = pit->t[i];
        }
        if (stop) break;
    }
    return RadialPotential(u.pieces(), hole_radius, free_radius);
}

EnergyReport energy(const RadialPotential& u, const MeasureDecomposition& mu) {
    const auto& weight = mu.weight();
    const double depth = std::abs(u.min_value());
    if (std::abs(u.max_value()) > 1e-10 + 1e-9 * depth)
        throw Error(ErrorKind::inconsistent_pair, "potential is not max-normalized");

    const MeasureDecomposition ref = measure_from_potential(u, weight, 1e-6);
    const double scale = std::max(1.0, weight.alpha(0.0));
    const bool aligned = same_partition(u, mu);
    double ac_gap = 0.0;
    for (std::size_t k = 0; k < u.pieces().size(); ++k) {
        const auto& p = ref.pieces()[k];
        for (std::size_t i = 0; i < p.t.size(); ++i) {
            double other;
            if (aligned) {
                other = mu.pieces()[k].density[i];
            } else {
                if (i == 0 || i + 1 == p.t.size()) continue;
                other = mu.ac_density(p.t[i]);
            }
            ac_gap = std::max(ac_gap, std::abs(other - p.density[i]));
        }
    }
    if (ac_gap > 1e-6 * scale)
        throw Error(ErrorKind::inconsistent_pair,
                    "absolutely continuous parts differ by " + std::to_string(ac_gap));
    auto atoms_cover = [&](const MeasureDecomposition& a, const MeasureDecomposition& b) {
        for (const auto& x : a.atoms()) {
            if (std::abs(x.mass) <= 1e-9) continue;
            bool found = false;
            for (const auto& y : b.atoms())
                if (std::abs(x.radius - y.radius) <= 1e-9 * u.outer_radius() &&
                    std::abs(x.mass - y.mass) <= 1e-8)
                    found = true;
            if (!found) return false;
        }
        return true;
    };
    if (!atoms_cover(ref, mu) || !atoms_cover(mu, ref))
        throw Error(ErrorKind::inconsistent_pair, "circle masses do not match the potential");
    if (std::abs(ref.exterior_mass() - mu.exterior_mass()) > 1e-8)
        throw Error(ErrorKind::inconsistent_pair, "exterior masses do not match the potential");

    EnergyReport report;
    report.integral_against_omega = -omega_integral(u, weight);
    report.integral_against_mu = -measure_integral(u, mu);
    report.total = report.integral_against_omega + report.integral_against_mu;
    return report;
}

EnergyReport energy(const RadialPotential& u, const RadialWeight& weight) {
    return energy(u, measure_from_potential(u, weight));
}

OrderingCertificate compare_energies(const RadialPotential& u_sigma, const RadialPotential& u_eta,
                                     const RadialWeight& weight, double tolerance) {
    OrderingCertificate cert;
    cert.energy_sigma = energy(u_sigma, weight).total;
    cert.energy_eta = energy(u_eta, weight).total;
    double violation = -std::numeric_limits<double>::infinity();
    auto scan = [&](const RadialPotential& grid) {
        for (const auto& p : grid.pieces())
            for (double t : p.t) violation = std::max(violation, u_sigma.value_at(t) - u_eta.value_at(t));
    };
    scan(u_sigma);
    scan(u_eta);
    cert.max_violation = violation;
    if (violation > tolerance) {
        cert.status = Ordering::incomparable;
    } else {
        cert.status = cert.energy_eta <= cert.energy_sigma + tolerance ? Ordering::ordered_holds
                                                                       : Ordering::ordered_violated;
    }
    return cert;
}

}  // namespace hole
