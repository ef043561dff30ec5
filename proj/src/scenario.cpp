#include "imcflab/scenario.hpp"

#include "imcflab/errors.hpp"
#include "imcflab/oracle.hpp"
#include "imcflab/report.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <random>
#include <set>
#include <sstream>

namespace imcflab {

namespace {

using ojson = nlohmann::ordered_json;

const std::pair<ScenarioKind, const char*> kind_names[] = {
    {ScenarioKind::CenteredSphere, "CenteredSphere"},   {ScenarioKind::OffCenterSphere, "OffCenterSphere"},
    {ScenarioKind::PerturbedConvex, "PerturbedConvex"}, {ScenarioKind::BalanceDemo, "BalanceDemo"},
    {ScenarioKind::ConjectureExplorer, "ConjectureExplorer"}, {ScenarioKind::IdentitySuite, "IdentitySuite"},
};

/// Key-tracking view of one JSON object.
class ObjectReader {
public:
    ObjectReader(const nlohmann::json& object, std::string where) : object_(object), where_(std::move(where))
    {
        if (!object_.is_object())
            throw ConfigError(where_ + ": expected an object");
    }

    const nlohmann::json* find(const std::string& key)
    {
        seen_.insert(key);
        const auto it = object_.find(key);
        return it == object_.end() ? nullptr : &*it;
    }

    void number(const std::string& key, double& target)
    {
        if (const auto* v = find(key)) {
            if (!v->is_number())
                throw ConfigError(path(key) + ": expected a number");
            target = v->get<double>();
        }
    }

    void integer(const std::string& key, int& target)
    {
        if (const auto* v = find(key)) {
            if (!v->is_number_integer())
                throw ConfigError(path(key) + ": expected an integer");
            target = v->get<int>();
        }
    }

    void boolean(const std::string& key, bool& target)
    {
        if (const auto* v = find(key)) {
            if (!v->is_boolean())
                throw ConfigError(path(key) + ": expected true or false");
            target = v->get<bool>();
        }
    }

    std::optional<std::string> string(const std::string& key)
    {
        if (const auto* v = find(key)) {
            if (!v->is_string())
                throw ConfigError(path(key) + ": expected a string");
            return v->get<std::string>();
        }
        return std::nullopt;
    }

    std::optional<std::pair<int, int>> int_pair(const std::string& key)
    {
        if (const auto* v = find(key)) {
            if (!v->is_array() || v->size() != 2 || !(*v)[0].is_number_integer() || !(*v)[1].is_number_integer())
                throw ConfigError(path(key) + ": expected [n_theta, n_phi]");
            return std::make_pair((*v)[0].get<int>(), (*v)[1].get<int>());
        }
        return std::nullopt;
    }

    std::string path(const std::string& key) const { return where_ + "." + key; }

    /// Rejects keys that were never asked for.
    void finish() const
    {
        for (auto it = object_.begin(); it != object_.end(); ++it)
            if (!seen_.count(it.key()))
                throw ConfigError(where_ + ": unknown key '" + it.key() + "'");
    }

private:
    const nlohmann::json& object_;
    std::string where_;
    std::set<std::string> seen_;
};

ojson record_json(const FunctionalRecord& r)
{
    return ojson{{"t", r.t},
                 {"area", r.area},
                 {"A", r.A},
                 {"I", r.I},
                 {"J", r.J},
                 {"L", r.L},
                 {"calK", r.calK},
                 {"Q", r.Q},
                 {"min_H", r.min_H},
                 {"lambda_min", r.lambda_min},
                 {"umbilicity", r.umbilicity},
                 {"rho_over_H", r.rho_over_H}};
}

ojson vec_json(const Vec4& x) { return ojson::array({x[0], x[1], x[2], x[3]}); }

/// Everything the verdicts need about one surface.
struct Snapshot {
    GeometryFields fields;
    FunctionalRecord record;
    Vec4 moment;
};

Snapshot snapshot(const ModelSpace& space, const RadialGraph& graph, const MonotoneParams& params)
{
    GeometryFields fields = compute_geometry(space, graph);
    FunctionalRecord record = functionals(space, graph, fields, 0.0, params);
    const Vec4 m = moment_vector(graph, fields);
    return {std::move(fields), record, m};
}

bool is_geodesic_sphere(const ScenarioConfig& c) { return c.amplitude == 0.0; }

Verdict identity_verdict(const ModelSpace& space, const Snapshot& s, const Tolerances& tol)
{
    const IdentityResiduals res = identity_residuals(space, s.fields);
    const double mink = std::abs(res.minkowski) / std::abs(s.record.I);
    const double lap = std::abs(res.laplace_rho) / std::abs(s.record.I);
    const double jl = std::abs(s.record.j_minus_l) / std::abs(s.record.J);
    Verdict v{"minkowski_identity", mink <= tol.identity && lap <= tol.identity && jl <= tol.j_minus_l, {}};
    v.detail = ojson{{"minkowski_relative", mink}, {"laplace_rho_relative", lap}, {"j_minus_l_relative", jl}};
    return v;
}

/// L_x <= calK strictly over the sample. At x_center: equality within center_tol when
/// `equality_at_center`, strict inequality otherwise.
Verdict prop_4_1_verdict(const RadialGraph& graph, const FunctionalRecord& r, const Vec4& x_center,
                         bool equality_at_center, double center_tol, const Tolerances& tol)
{
    double worst = -std::numeric_limits<double>::infinity();
    double closest = std::numeric_limits<double>::infinity();
    for (const Vec4& x : sample_directions()) {
        const double ratio = rho_x_volume(graph, x) / r.calK;
        worst = std::max(worst, ratio - 1.0);
        closest = std::min(closest, std::abs(ratio - 1.0));
    }
    const double center_ratio = rho_x_volume(graph, x_center) / r.calK;
    const bool bounded = worst <= tol.prop_4_1;
    const bool sample_strict = closest > tol.prop_4_1;
    const bool center_ok = equality_at_center ? std::abs(center_ratio - 1.0) <= center_tol : center_ratio < 1.0;
    Verdict v{"prop_4_1", bounded && sample_strict && center_ok, {}};
    v.detail = ojson{{"directions", 26},
                     {"max_Lx_over_calK_minus_1", worst},
                     {"min_abs_Lx_over_calK_minus_1", closest},
                     {"center_Lx_over_calK", center_ratio},
                     {"equality_expected_at_center", equality_at_center},
                     {"center_tolerance", center_tol}};
    return v;
}

struct TheoremNumbers {
    InequalityReport report;
    Vec4 x;
    double L_x = 0.0;
};

TheoremNumbers theorem_numbers(const RadialGraph& graph, const Snapshot& s, const Vec4& x, XMode mode)
{
    TheoremNumbers t;
    t.x = x;
    t.L_x = rho_x_volume(graph, x);
    t.report = inequality_report(s.record, s.moment.dot(x), t.L_x, mode);
    return t;
}

ojson theorem_json(const TheoremNumbers& t)
{
    return ojson{{"x_mode", to_string(t.report.x_mode)},
                 {"x", vec_json(t.x)},
                 {"I_x", t.report.lhs},
                 {"L_x", t.L_x},
                 {"rhs_theorem", t.report.rhs_theorem},
                 {"rhs_naive", t.report.rhs_naive},
                 {"theorem_gap", t.report.theorem_gap},
                 {"naive_gap", t.report.naive_gap}};
}

/// Inequality always; equality for geodesic spheres centered at x, strictness otherwise.
Verdict theorem_verdict(const TheoremNumbers& t, bool equality_case, double tol)
{
    const double rel = t.report.theorem_gap / std::abs(t.report.lhs);
    const bool holds = rel >= -tol;
    const bool shape_ok = equality_case ? std::abs(rel) <= tol : rel > 0.0;
    Verdict v{"theorem_1_2", holds && shape_ok, theorem_json(t)};
    v.detail["relative_gap"] = rel;
    v.detail["equality_case"] = equality_case;
    return v;
}

struct FlowOutcome {
    FlowTrace trace;
    std::vector<Verdict> verdicts;
    ojson summary;
};

FlowOutcome flow_analysis(const ModelSpace& space, const RadialGraph& graph, const ScenarioConfig& c)
{
    FlowOutcome out{run_flow(space, graph, c.flow), {}, {}};
    const FlowTrace& trace = out.trace;
    out.summary = ojson{{"stop_reason", to_string(trace.stop_reason)},
                        {"stop_time", trace.stop_time},
                        {"steps", trace.steps},
                        {"records", trace.records.size()},
                        {"final", record_json(trace.records.back())}};
    if (!trace.failure.empty())
        out.summary["failure"] = trace.failure;
    if (trace.stop_reason == StopReason::NumericalFailure || trace.stop_reason == StopReason::ConvexityLost)
        return out;

    const MonotonicityVerdict mono = monotonicity_check(trace, c.flow.params, c.tolerances.brendle);
    double max_area_law = 0.0;
    const double A0 = trace.records.front().A;
    for (const auto& r : trace.records)
        max_area_law = std::max(max_area_law, std::abs(r.A / (A0 * std::exp(r.t)) - 1.0));
    out.summary["Q0"] = mono.q_values.front();
    out.summary["Q_final"] = mono.q_values.back();
    out.summary["max_area_law_deviation"] = max_area_law;

    Verdict monotone{"prop_2_4_monotone", mono.q_non_increasing, {}};
    monotone.detail = ojson{{"max_Q_increase", mono.max_q_increase},
                            {"Q0", mono.q_values.front()},
                            {"records", mono.q_values.size()}};
    out.verdicts.push_back(monotone);

    const bool centered = c.scenario == ScenarioKind::CenteredSphere;
    double max_abs_margin = 0.0;
    for (const auto& r : trace.records)
        max_abs_margin = std::max(max_abs_margin, std::abs(((r.n - 1) * r.rho_over_H - r.J) / std::abs(r.J)));
    Verdict brendle{"brendle_hypothesis",
                    mono.min_brendle_margin >= -c.tolerances.brendle &&
                        (!centered || max_abs_margin <= c.tolerances.equality),
                    {}};
    brendle.detail = ojson{{"min_relative_margin", mono.min_brendle_margin},
                           {"max_abs_relative_margin", max_abs_margin},
                           {"equality_expected", centered}};
    out.verdicts.push_back(brendle);
    return out;
}

Verdict evolution_verdict(const ModelSpace& space, const RadialGraph& graph, const ScenarioConfig& c)
{
    FlowConfig probe = c.flow;
    probe.dt_safety = 1.0;
    probe.dt_max = c.evolution_dt;
    probe.t_max = c.evolution_dt * c.evolution_steps;
    probe.record_every = 1;
    probe.store_graphs = true;
    const FlowTrace trace = run_flow(space, graph, probe);
    if (trace.stop_reason != StopReason::TMax)
        throw NumericalError("evolution probe stopped early: " + to_string(trace.stop_reason));
    const EvolutionResiduals res = evolution_checks(space, trace);
    const double tol = c.tolerances.evolution;
    Verdict v{"evolution_identities",
              res.max() <= tol && res.I_inequality_violation <= tol && res.J_inequality_violation <= tol,
              {}};
    v.detail = ojson{{"dt", c.evolution_dt},
                     {"samples", res.samples},
                     {"area_residual", res.area},
                     {"J_residual", res.J},
                     {"I_residual", res.I},
                     {"I_inequality_violation", res.I_inequality_violation},
                     {"J_inequality_violation", res.J_inequality_violation}};
    return v;
}

/// The three flow scenarios share one pipeline.
void run_flow_scenario(const ScenarioConfig& c, const ModelSpace& space, const RadialGraph& graph,
                       ScenarioResult& result)
{
    const Snapshot s0 = snapshot(space, graph, c.flow.params);
    if (!(s0.record.lambda_min > 0.0))
        throw DomainError("initial surface is not strictly convex");
    result.summary["initial"] = record_json(s0.record);

    FlowOutcome flow = flow_analysis(space, graph, c);
    result.trace = flow.trace.records;
    result.flow_ran = true;
    result.summary["flow"] = flow.summary;
    if (flow.trace.stop_reason == StopReason::NumericalFailure || flow.trace.stop_reason == StopReason::ConvexityLost) {
        result.numerical_failure = true;
        result.failure = "flow stopped with " + to_string(flow.trace.stop_reason);
        return;
    }

    const Vec4 x = estimate_equator(flow.trace.final_graph);
    const TheoremNumbers at_x = theorem_numbers(graph, s0, x, XMode::EstimatedCenter);
    const bool sphere = is_geodesic_sphere(c);
    const double theorem_tol = c.scenario == ScenarioKind::CenteredSphere ? c.tolerances.equality : c.tolerances.theorem;
    result.verdicts.push_back(theorem_verdict(at_x, sphere, theorem_tol));

    if (c.scenario == ScenarioKind::OffCenterSphere) {
        const TheoremNumbers at_origin = theorem_numbers(graph, s0, Vec4::UnitX(), XMode::Origin);
        const OffCenterOracle oracle = offcenter_oracle(c.n, c.r0, c.d);
        const double I_err = std::abs(s0.record.I / oracle.I - 1.0);
        const double L_err = std::abs(s0.record.L / oracle.L - 1.0);
        const double gap_err = std::abs(at_origin.report.naive_gap - oracle.naive_gap) / oracle.I;
        const double tol = c.tolerances.oracle;
        Verdict v{"prop_4_2",
                  at_origin.report.naive_gap < 0.0 && I_err <= tol && L_err <= tol && gap_err <= tol,
                  theorem_json(at_origin)};
        v.detail["oracle_naive_gap"] = oracle.naive_gap;
        v.detail["oracle_I"] = oracle.I;
        v.detail["oracle_L"] = oracle.L;
        v.detail["I_relative_error"] = I_err;
        v.detail["L_relative_error"] = L_err;
        result.verdicts.push_back(v);
    }

    result.verdicts.push_back(prop_4_1_verdict(graph, s0.record, x, sphere, theorem_tol, c.tolerances));
    for (auto& v : flow.verdicts)
        result.verdicts.push_back(std::move(v));
    result.verdicts.push_back(evolution_verdict(space, graph, c));
    result.verdicts.push_back(identity_verdict(space, s0, c.tolerances));
}

void run_balance_scenario(const ScenarioConfig& c, const ModelSpace& space, const RadialGraph& graph,
                          ScenarioResult& result)
{
    BalanceOptions options;
    options.tol = c.balance_tol;
    options.max_iter = c.balance_max_iter;
    options.flow = c.flow;
    options.flow_grid = c.balance_flow_grid;
    const BalanceResult bal = balance(space, graph, options);

    const Snapshot s = snapshot(space, bal.graph, c.flow.params);
    result.trace = {s.record};
    double mean = 0.0;
    for (double u : bal.graph.u)
        mean += u;
    mean /= static_cast<double>(bal.graph.u.size());
    double deviation = 0.0;
    for (double u : bal.graph.u)
        deviation = std::max(deviation, std::abs(u - mean));

    ojson estimates = ojson::array();
    for (const auto& e : bal.estimates)
        estimates.push_back(vec_json(e));
    const Vec4 x_original = bal.rotation.transpose() * Vec4::UnitX();
    result.summary["balance"] = ojson{{"iterations", bal.iterations},
                                      {"estimates", estimates},
                                      {"x_original", vec_json(x_original)},
                                      {"max_abs_u_minus_mean", deviation},
                                      {"mean_u", mean}};
    result.summary["balanced"] = record_json(s.record);

    const bool sphere = is_geodesic_sphere(c);
    const TheoremNumbers t = theorem_numbers(bal.graph, s, Vec4::UnitX(), XMode::Origin);
    result.verdicts.push_back(theorem_verdict(t, sphere, c.tolerances.theorem));
    result.verdicts.push_back(
        prop_4_1_verdict(bal.graph, s.record, Vec4::UnitX(), sphere, c.tolerances.theorem, c.tolerances));
    result.verdicts.push_back(identity_verdict(space, s, c.tolerances));
}

void run_conjecture_scenario(const ScenarioConfig& c, const ModelSpace& space, const RadialGraph& graph,
                             ScenarioResult& result)
{
    const Snapshot s = snapshot(space, graph, c.flow.params);
    result.trace = {s.record};
    result.summary["initial"] = record_json(s.record);
    const ConjectureReport rep = conjecture_report(s.record, s.moment);
    ojson conj{{"moment", vec_json(s.moment)},
               {"sup_I_x", rep.sup_I_x},
               {"rhs_naive", rep.rhs_naive},
               {"gap", rep.gap},
               {"maximizer", rep.maximizer ? vec_json(*rep.maximizer) : ojson(nullptr)}};
    if (is_geodesic_sphere(c)) {
        const SphereClosedForms closed = sphere_closed_forms(c.n, c.r0);
        conj["sphere_sup_I_x"] = closed.record.I;
        conj["sphere_sup_error"] = rep.sup_I_x - closed.record.I;
    }
    result.summary["conjecture"] = conj;
    if (rep.maximizer) {
        const TheoremNumbers t = theorem_numbers(graph, s, *rep.maximizer, XMode::Given);
        result.summary["inequality_at_maximizer"] = theorem_json(t);
        result.verdicts.push_back(prop_4_1_verdict(graph, s.record, *rep.maximizer, is_geodesic_sphere(c),
                                                   c.tolerances.theorem, c.tolerances));
    }
    result.verdicts.push_back(identity_verdict(space, s, c.tolerances));
}

void run_identity_scenario(const ScenarioConfig& c, const ModelSpace& space, const SphericalGrid& grid,
                           ScenarioResult& result)
{
    std::mt19937_64 rng(c.identity_seed);
    std::uniform_real_distribution<double> coefficient(-c.identity_amplitude, c.identity_amplitude);
    const std::size_t terms = polynomial_term_count(c.identity_degree);

    ojson cases = ojson::array();
    bool identities_pass = true;
    bool bound_pass = true;
    double worst_mink = 0.0, worst_lap = 0.0, worst_jl = 0.0, worst_ratio = -1.0;
    double worst_nm = -std::numeric_limits<double>::infinity();
    int accepted = 0, attempts = 0;
    while (accepted < c.identity_count) {
        if (++attempts > 100 * c.identity_count)
            throw NumericalError("identity suite: could not draw enough strictly convex graphs");
        std::vector<double> coeffs(terms);
        for (auto& x : coeffs)
            x = coefficient(rng);
        const RadialGraph graph = polynomial_graph(grid, c.r0, c.identity_degree, coeffs);
        Snapshot s = snapshot(space, graph, c.flow.params);
        if (!(s.record.lambda_min > 0.0))
            continue;
        ++accepted;
        result.trace.push_back(s.record);

        const Verdict id = identity_verdict(space, s, c.tolerances);
        identities_pass = identities_pass && id.pass;
        worst_mink = std::max(worst_mink, id.detail["minkowski_relative"].get<double>());
        worst_lap = std::max(worst_lap, id.detail["laplace_rho_relative"].get<double>());
        worst_jl = std::max(worst_jl, id.detail["j_minus_l_relative"].get<double>());

        double ratio = -std::numeric_limits<double>::infinity();
        for (const Vec4& x : sample_directions())
            ratio = std::max(ratio, rho_x_volume(graph, x) / s.record.calK);
        bound_pass = bound_pass && ratio - 1.0 <= c.tolerances.prop_4_1;
        worst_ratio = std::max(worst_ratio, ratio);

        // Newton-MacLaurin: 2 sigma2 <= ((n-2)/(n-1)) H^2 at every node
        double nm = -std::numeric_limits<double>::infinity();
        for (std::size_t k = 0; k < s.fields.H.size(); ++k) {
            const double H2 = s.fields.H[k] * s.fields.H[k];
            nm = std::max(nm, (2.0 * s.fields.sigma2[k] - (c.n - 2.0) / (c.n - 1.0) * H2) / H2);
        }
        worst_nm = std::max(worst_nm, nm);
        cases.push_back(ojson{{"record", record_json(s.record)}, {"identities", id.detail}, {"max_Lx_over_calK", ratio}});
    }
    result.summary["cases"] = cases;
    result.summary["attempts"] = attempts;
    result.summary["newton_maclaurin_max_relative"] = worst_nm;
    Verdict id{"minkowski_identity", identities_pass, {}};
    id.detail = ojson{{"graphs", accepted},
                      {"max_minkowski_relative", worst_mink},
                      {"max_laplace_rho_relative", worst_lap},
                      {"max_j_minus_l_relative", worst_jl}};
    result.verdicts.push_back(id);
    Verdict bound{"prop_4_1", bound_pass, ojson{{"directions", 26}, {"max_Lx_over_calK", worst_ratio}}};
    result.verdicts.push_back(bound);
}

} // namespace

ScenarioKind parse_scenario_kind(const std::string& name)
{
    for (const auto& [kind, text] : kind_names)
        if (name == text)
            return kind;
    throw ConfigError("unknown scenario '" + name + "'");
}

std::string to_string(ScenarioKind kind)
{
    for (const auto& [k, text] : kind_names)
        if (k == kind)
            return text;
    return "unknown";
}

void Tolerances::validate() const
{
    for (double t : {theorem, equality, brendle, identity, j_minus_l, evolution, prop_4_1, oracle})
        if (!(t > 0.0))
            throw ConfigError("tolerances must be positive");
}

void ScenarioConfig::validate() const
{
    if (n != 3)
        throw ConfigError("only n = 3 is supported by the grid engine");
    if (n_theta < 16 || n_phi < 32 || n_phi % 2 != 0)
        throw ConfigError("grid must satisfy n_theta >= 16, n_phi >= 32, n_phi even");
    if (!(r0 > 0.0 && r0 < std::numbers::pi / 2))
        throw ConfigError("r0 must lie in (0, pi/2)");
    if (!(d >= 0.0 && d < r0))
        throw ConfigError("d must lie in [0, r0) so the sphere stays a radial graph");
    if (!(r0 + d < std::numbers::pi / 2))
        throw ConfigError("r0 + d must stay below pi/2");
    if (std::abs(std::hypot(axis[0], axis[1], axis[2]) - 1.0) > 1e-12)
        throw ConfigError("axis must be a unit vector");
    if (!(amplitude >= 0.0))
        throw ConfigError("amplitude must be non-negative");
    flow.validate();
    tolerances.validate();
    if (!(balance_tol > 0.0) || balance_max_iter < 1)
        throw ConfigError("balance needs tol > 0 and max_iter >= 1");
    if (!(evolution_dt > 0.0) || evolution_steps < 3)
        throw ConfigError("evolution needs dt > 0 and steps >= 3");
    switch (scenario) {
    case ScenarioKind::CenteredSphere:
        if (d != 0.0 || amplitude != 0.0)
            throw ConfigError("CenteredSphere takes neither d nor amplitude");
        break;
    case ScenarioKind::OffCenterSphere:
        if (!(d > 0.0) || amplitude != 0.0)
            throw ConfigError("OffCenterSphere needs d > 0 and no amplitude");
        break;
    case ScenarioKind::PerturbedConvex:
        if (!(amplitude > 0.0))
            throw ConfigError("PerturbedConvex needs amplitude > 0");
        break;
    case ScenarioKind::IdentitySuite:
        if (identity_count < 1 || identity_degree < 1 || !(identity_amplitude > 0.0))
            throw ConfigError("IdentitySuite needs count >= 1, degree >= 1, amplitude > 0");
        break;
    default: break;
    }
}

ScenarioConfig parse_config(const nlohmann::json& document)
{
    ScenarioConfig c;
    ObjectReader top(document, "config");
    const auto kind = top.string("scenario");
    if (!kind)
        throw ConfigError("config.scenario is required");
    c.scenario = parse_scenario_kind(*kind);
    top.integer("n", c.n);
    if (auto g = top.int_pair("grid")) {
        c.n_theta = g->first;
        c.n_phi = g->second;
    }
    top.number("r0", c.r0);
    top.number("d", c.d);
    if (const auto* a = top.find("axis")) {
        if (!a->is_array() || a->size() != 3 || !std::all_of(a->begin(), a->end(), [](auto& e) { return e.is_number(); }))
            throw ConfigError("config.axis: expected three numbers");
        c.axis = {(*a)[0].get<double>(), (*a)[1].get<double>(), (*a)[2].get<double>()};
    }
    top.number("amplitude", c.amplitude);
    if (auto p = top.string("pattern"))
        c.pattern = parse_pattern(*p);
    double alpha = 0.0;
    top.number("alpha", alpha);
    c.flow.params = MonotoneParams::from_alpha(c.n, alpha);

    if (const auto* f = top.find("flow")) {
        ObjectReader r(*f, "config.flow");
        r.number("dt_safety", c.flow.dt_safety);
        r.number("dt_max", c.flow.dt_max);
        r.number("stop_A", c.flow.stop_A);
        r.number("stop_H_min", c.flow.stop_H_min);
        r.number("t_max", c.flow.t_max);
        r.integer("record_every", c.flow.record_every);
        r.integer("pole_modes_min", c.flow.pole_modes_min);
        r.finish();
    }
    if (const auto* b = top.find("balance")) {
        ObjectReader r(*b, "config.balance");
        r.number("tol", c.balance_tol);
        r.integer("max_iter", c.balance_max_iter);
        c.balance_flow_grid = r.int_pair("flow_grid");
        r.finish();
    }
    if (const auto* e = top.find("evolution")) {
        ObjectReader r(*e, "config.evolution");
        r.number("dt", c.evolution_dt);
        r.integer("steps", c.evolution_steps);
        r.finish();
    }
    if (const auto* i = top.find("identity")) {
        ObjectReader r(*i, "config.identity");
        r.integer("count", c.identity_count);
        int seed = static_cast<int>(c.identity_seed);
        r.integer("seed", seed);
        if (seed < 0)
            throw ConfigError("config.identity.seed must be non-negative");
        c.identity_seed = static_cast<std::uint64_t>(seed);
        r.integer("degree", c.identity_degree);
        r.number("amplitude", c.identity_amplitude);
        r.finish();
    }
    if (const auto* t = top.find("tolerances")) {
        ObjectReader r(*t, "config.tolerances");
        r.number("theorem", c.tolerances.theorem);
        r.number("equality", c.tolerances.equality);
        r.number("brendle", c.tolerances.brendle);
        r.number("identity", c.tolerances.identity);
        r.number("j_minus_l", c.tolerances.j_minus_l);
        r.number("evolution", c.tolerances.evolution);
        r.number("prop_4_1", c.tolerances.prop_4_1);
        r.number("oracle", c.tolerances.oracle);
        r.finish();
    }
    if (const auto* o = top.find("output")) {
        ObjectReader r(*o, "config.output");
        if (auto dir = r.string("dir"))
            c.output_dir = *dir;
        r.boolean("plots", c.plots);
        r.finish();
    }
    top.finish();
    c.validate();
    return c;
}

ScenarioConfig load_config(const std::filesystem::path& path)
{
    std::ifstream in(path);
    if (!in)
        throw ConfigError("cannot read config file " + path.string());
    nlohmann::json document;
    try {
        document = nlohmann::json::parse(in);
    } catch (const nlohmann::json::parse_error& e) {
        throw ConfigError(path.string() + ": " + e.what());
    }
    return parse_config(document);
}

int ScenarioResult::exit_code() const
{
    if (numerical_failure)
        return 2;
    for (const auto& v : verdicts)
        if (!v.pass)
            return 1;
    return 0;
}

const Verdict* ScenarioResult::find(const std::string& name) const
{
    for (const auto& v : verdicts)
        if (v.name == name)
            return &v;
    return nullptr;
}

RadialGraph build_shape(const ScenarioConfig& c, const SphericalGrid& grid)
{
    RadialGraph graph = c.d > 0.0 ? offcenter_sphere_graph(grid, c.r0, c.d, c.axis) : constant_graph(grid, c.r0);
    if (c.amplitude > 0.0) {
        const RadialGraph bump = perturbed_graph(grid, 0.0, c.amplitude, c.pattern);
        for (std::size_t k = 0; k < graph.u.size(); ++k)
            graph.u[k] += bump.u[k];
    }
    return graph;
}

std::vector<Vec4> sample_directions()
{
    std::vector<Vec4> out;
    for (int a = -1; a <= 1; ++a)
        for (int b = -1; b <= 1; ++b)
            for (int c = -1; c <= 1; ++c)
                if (a || b || c)
                    out.push_back(Vec4(2.0, a, b, c).normalized());
    return out;
}

ScenarioResult run_scenario(const ScenarioConfig& c)
{
    c.validate();
    ScenarioResult result;
    result.kind = c.scenario;
    result.summary = ojson{{"scenario", to_string(c.scenario)},
                           {"n", c.n},
                           {"grid", ojson::array({c.n_theta, c.n_phi})},
                           {"shape",
                            ojson{{"r0", c.r0},
                                  {"d", c.d},
                                  {"axis", ojson::array({c.axis[0], c.axis[1], c.axis[2]})},
                                  {"amplitude", c.amplitude},
                                  {"pattern", to_string(c.pattern)}}}};
    const ModelSpace space = ModelSpace::spherical(c.n);
    try {
        const SphericalGrid grid = build_grid(c.n_theta, c.n_phi);
        switch (c.scenario) {
        case ScenarioKind::CenteredSphere:
        case ScenarioKind::OffCenterSphere:
        case ScenarioKind::PerturbedConvex: run_flow_scenario(c, space, build_shape(c, grid), result); break;
        case ScenarioKind::BalanceDemo: run_balance_scenario(c, space, build_shape(c, grid), result); break;
        case ScenarioKind::ConjectureExplorer: run_conjecture_scenario(c, space, build_shape(c, grid), result); break;
        case ScenarioKind::IdentitySuite: run_identity_scenario(c, space, grid, result); break;
        }
    } catch (const std::exception& e) {
        result.numerical_failure = true;
        result.failure = e.what();
    }

    ojson verdicts = ojson::object();
    for (const auto& v : result.verdicts) {
        ojson entry{{"pass", v.pass}};
        for (auto it = v.detail.begin(); it != v.detail.end(); ++it)
            entry[it.key()] = it.value();
        verdicts[v.name] = entry;
    }
    result.summary["verdicts"] = verdicts;
    if (result.numerical_failure)
        result.summary["failure"] = result.failure;
    result.summary["exit_code"] = result.exit_code();
    return result;
}

void write_artifacts(const ScenarioConfig& c, const ScenarioResult& result)
{
    std::ostringstream csv;
    write_trace_csv(csv, result.trace);
    write_file(c.output_dir / "trace.csv", csv.str());

    std::ostringstream json;
    write_json(json, result.summary);
    write_file(c.output_dir / "summary.json", json.str());

    if (c.plots && result.flow_ran && !result.trace.empty()) {
        std::vector<std::pair<double, double>> q, a;
        for (const auto& r : result.trace) {
            q.emplace_back(r.t, r.Q);
            a.emplace_back(r.t, r.A);
        }
        std::ostringstream q_svg, a_svg;
        write_svg_plot(q_svg, q, "t", "Q");
        write_svg_plot(a_svg, a, "t", "A");
        write_file(c.output_dir / "Q.svg", q_svg.str());
        write_file(c.output_dir / "A.svg", a_svg.str());
    }
}

} // namespace imcflab
