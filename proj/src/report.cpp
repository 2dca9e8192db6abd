#include "hole_energy/report.hpp"

#include "hole_energy/errors.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <sstream>

namespace hole::report {

namespace {

std::string number(double x) {
    if (!std::isfinite(x)) return "null";
    // Shortest text that reads back to the same double.
    char buf[32];
    const auto res = std::to_chars(buf, buf + sizeof buf, x);
    std::string text(buf, res.ptr);
    if (text.find_first_of(".eE") == std::string::npos) text += ".0";
    return text;
}

void write(const Json& j, std::ostringstream& out, int depth) {
    const std::string pad(2 * static_cast<std::size_t>(depth + 1), ' ');
    const std::string close(2 * static_cast<std::size_t>(depth), ' ');
    switch (j.type()) {
        case Json::value_t::object: {
            if (j.empty()) {
                out << "{}";
                return;
            }
            out << "{\n";
            bool first = true;
            for (auto it = j.begin(); it != j.end(); ++it) {
                if (!first) out << ",\n";
                first = false;
                out << pad << Json(it.key()).dump() << ": ";
                write(it.value(), out, depth + 1);
            }
            out << "\n" << close << "}";
            return;
        }
        case Json::value_t::array: {
            if (j.empty()) {
                out << "[]";
                return;
            }
            // Arrays of scalars stay on one line.
            bool flat = true;
            for (const auto& v : j) flat = flat && !v.is_structured();
            out << "[";
            bool first = true;
            for (const auto& v : j) {
                out << (first ? "" : ",") << (flat ? (first ? "" : " ") : "\n" + pad);
                first = false;
                write(v, out, depth + 1);
            }
            out << (flat ? "" : "\n" + close) << "]";
            return;
        }
        case Json::value_t::number_float: out << number(j.get<double>()); return;
        default: out << j.dump(); return;
    }
}

Json rows_of(const RadialPotential& u) {
    Json rows = Json::array();
    for (const auto& p : u.pieces())
        for (std::size_t i = 0; i < p.t.size(); ++i) rows.push_back(Json::array({p.t[i], p.value[i], p.flux[i]}));
    return rows;
}

}  // namespace

std::string dump(const Json& j) {
    std::ostringstream out;
    write(j, out, 0);
    out << "\n";
    return out.str();
}

Json metric_to_json(const ChartMetric& metric) {
    Json j;
    switch (metric.kind()) {
        case MetricKind::flat:
            j["kind"] = "flat";
            j["alpha"] = metric.center_density();
            break;
        case MetricKind::fubini_study: j["kind"] = "fubini_study"; break;
        case MetricKind::custom:
            if (!metric.is_serializable()) throw Error(ErrorKind::config, "callable densities cannot be serialized");
            j["kind"] = "polynomial";
            j["coefficients"] = metric.coefficients();
            break;
    }
    j["extent"] = metric.extent();
    return j;
}

ChartMetric metric_from_json(const Json& j) {
    try {
        const std::string kind = j.value("kind", std::string("flat"));
        const double extent = j.value("extent", 10.0);
        if (kind == "flat") return ChartMetric::flat(j.value("alpha", 1.0), extent);
        if (kind == "fubini_study") return ChartMetric::fubini_study(extent);
        if (kind == "polynomial") {
            if (!j.contains("coefficients")) throw Error(ErrorKind::config, "polynomial metric needs coefficients");
            return ChartMetric::radial_polynomial(j.at("coefficients").get<std::vector<double>>(), extent);
        }
        throw Error(ErrorKind::config, "unknown metric kind '" + kind + "'");
    } catch (const Json::exception& e) {
        throw Error(ErrorKind::config, std::string("bad metric record: ") + e.what());
    } catch (const Error& e) {
        if (e.kind() == ErrorKind::invalid_input) throw Error(ErrorKind::config, e.what());
        throw;
    }
}

Json energy_to_json(const EnergyReport& e) {
    return Json{{"integral_against_omega", e.integral_against_omega},
                {"integral_against_mu", e.integral_against_mu},
                {"total", e.total}};
}

Json potential_to_json(const RadialPotential& u, bool samples) {
    Json j;
    j["grid"] = Json{{"breakpoints", u.breakpoints()}, {"nodes", u.node_count()}};
    j["hole_radius"] = u.hole_radius();
    j["free_radius"] = u.free_radius();
    j["gamma"] = u.gamma();
    j["boundary_charge"] = u.boundary_charge();
    j["min_value"] = u.min_value();
    if (samples) j["samples"] = rows_of(u);
    return j;
}

Json measure_to_json(const MeasureDecomposition& mu) {
    Json atoms = Json::array();
    for (const auto& a : mu.atoms()) atoms.push_back(Json{{"radius", a.radius}, {"mass", a.mass}});
    return Json{{"ac_mass", mu.ac_mass()},
                {"atoms", atoms},
                {"exterior_mass", mu.exterior_mass()},
                {"total_mass", mu.total_mass()}};
}

Json min_energy_to_json(const MinEnergyResult& r, bool samples) {
    Json j;
    j["method"] = r.method;
    j["r_geodesic"] = r.geodesic_radius;
    j["r_chart"] = r.chart_radius;
    j["min_energy"] = r.report.total;
    j["energy"] = energy_to_json(r.report);
    j["gamma"] = r.gamma;
    j["free_radius"] = r.free_radius;
    j["boundary_charge"] = r.boundary_charge;
    if (r.potential) j["potential"] = potential_to_json(*r.potential, samples);
    if (r.grid) j["grid"] = grid_to_json(*r.grid);
    return j;
}

Json grid_to_json(const GridField& f) {
    return Json{{"M", f.resolution()},
                {"half_width", f.half_width()},
                {"spacing", f.spacing()},
                {"hole_radius", f.hole_radius},
                {"mode", f.mode == EnvelopeMode::free_minimizer ? "free_minimizer" : "envelope_given_boundary"},
                {"gamma", f.gamma},
                {"sweeps", f.sweeps},
                {"residual", f.residual},
                {"max_value", f.max_value()},
                {"min_value", f.min_value()}};
}

Json psi2_to_json(const Psi2Report& r, bool samples) {
    Json j;
    j["alpha"] = r.construction.alpha;
    j["epsilon"] = r.construction.epsilon;
    j["r"] = r.construction.hole_radius;
    j["R"] = r.construction.R;
    j["omega_part"] = r.omega_part;
    j["measure_part"] = r.measure_part;
    j["value"] = r.value;
    j["closed_form"] = r.closed_form;
    j["chain_bound"] = r.chain_bound;
    j["chain_closed_form"] = r.chain_closed_form;
    j["flat_value"] = r.flat_value;
    j["profile"] = potential_to_json(r.construction.profile, samples);
    return j;
}

Json sweep_to_json(const SweepResult& s) {
    Json rows = Json::array();
    Json residuals = Json::array();
    for (const auto& r : s.rows) {
        rows.push_back(Json{{"r_geodesic", r.r_geodesic},
                            {"r_chart", r.r_chart},
                            {"min_energy", r.min_energy},
                            {"free_radius", r.free_radius},
                            {"gamma", r.gamma},
                            {"relative_to_formula", r.relative_to_formula},
                            {"used_in_fit", r.used_in_fit}});
        residuals.push_back(r.residual);
    }
    Json j;
    j["rows"] = rows;
    j["fitted"] = s.fitted;
    j["exponent"] = s.exponent;
    j["C_fit"] = s.c_fit;
    j["C_formula"] = s.c_formula;
    j["C_relation"] = s.c_relation;
    j["fitted_constant"] = s.fitted_constant;
    j["varrho"] = s.varrho;
    j["monotone"] = s.monotone;
    j["residuals"] = residuals;
    if (!s.note.empty()) j["note"] = s.note;
    return j;
}

Json estimate_to_json(const HoleEstimate& e) {
    return Json{{"n", e.n},
                {"r_geodesic", e.r_geodesic},
                {"r_chart", e.r_chart},
                {"samples", e.samples},
                {"discarded", e.discarded},
                {"hits", e.hits},
                {"p_hat", e.p_hat},
                {"interval", Json::array({e.wilson_lo, e.wilson_hi})},
                {"rate", e.rate},
                {"seed", e.seed}};
}

Json rate_trend_to_json(const RateTrend& t) {
    Json rows = Json::array();
    for (const auto& r : t.rows)
        rows.push_back(Json{{"n", r.n},
                            {"r_geodesic", r.r_geodesic},
                            {"r_chart", r.r_chart},
                            {"p_hat", r.estimate.p_hat},
                            {"interval", Json::array({r.estimate.wilson_lo, r.estimate.wilson_hi})},
                            {"rate", r.rate},
                            {"min_energy", r.min_energy},
                            {"ratio", r.ratio},
                            {"ratio_se", r.ratio_se},
                            {"flagged", r.flagged},
                            {"seed", r.estimate.seed}});
    return Json{{"rows", rows}, {"within_factor_three", t.within_factor_three}, {"drifts_toward", t.drifts_toward}};
}

void potential_csv(const RadialPotential& u, std::ostream& out) {
    out << "t,U,flux\n";
    for (const auto& p : u.pieces())
        for (std::size_t i = 0; i < p.t.size(); ++i)
            out << number(p.t[i]) << ',' << number(p.value[i]) << ',' << number(p.flux[i]) << '\n';
}

void sweep_csv(const SweepResult& s, std::ostream& out) {
    out << "r_geodesic,r_chart,min_energy,free_radius,gamma,relative_to_formula,residual,used_in_fit\n";
    for (const auto& r : s.rows)
        out << number(r.r_geodesic) << ',' << number(r.r_chart) << ',' << number(r.min_energy) << ','
            << number(r.free_radius) << ',' << number(r.gamma) << ',' << number(r.relative_to_formula) << ','
            << number(r.residual) << ',' << (r.used_in_fit ? 1 : 0) << '\n';
}

void rate_trend_csv(const RateTrend& t, std::ostream& out) {
    out << "n,r_geodesic,r_chart,samples,p_hat,wilson_lo,wilson_hi,rate,min_energy,ratio,ratio_se,flagged,seed\n";
    for (const auto& r : t.rows)
        out << r.n << ',' << number(r.r_geodesic) << ',' << number(r.r_chart) << ',' << r.estimate.samples << ','
            << number(r.estimate.p_hat) << ',' << number(r.estimate.wilson_lo) << ','
            << number(r.estimate.wilson_hi) << ',' << number(r.rate) << ',' << number(r.min_energy) << ','
            << number(r.ratio) << ',' << number(r.ratio_se) << ',' << (r.flagged ? 1 : 0) << ','
            << r.estimate.seed << '\n';
}

void estimate_csv(const HoleEstimate& e, std::ostream& out) {
    out << "n,r_geodesic,r_chart,samples,discarded,hits,p_hat,wilson_lo,wilson_hi,rate,seed\n";
    out << e.n << ',' << number(e.r_geodesic) << ',' << number(e.r_chart) << ',' << e.samples << ','
        << e.discarded << ',' << e.hits << ',' << number(e.p_hat) << ',' << number(e.wilson_lo) << ','
        << number(e.wilson_hi) << ',' << number(e.rate) << ',' << e.seed << '\n';
}

}  // namespace hole::report
