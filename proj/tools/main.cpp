// Command-line front end: alloy-spec ingestion and one subcommand per
// analysis, emitting deterministic CSV/JSON artifacts.

#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "marten/alloy.hpp"
#include "marten/compatibility.hpp"
#include "marten/counterexamples.hpp"
#include "marten/deadload.hpp"
#include "marten/layers.hpp"
#include "marten/relax.hpp"
#include "marten/report.hpp"
#include "marten/wells.hpp"

using namespace marten;

namespace {

struct Common {
    std::string preset;
    std::string spec_file;
    std::string out;
    std::uint64_t seed = 20240901;
    int threads = 0;
};

void add_alloy_options(CLI::App* sub, Common& c) {
    sub->add_option("--preset", c.preset, "built-in alloy preset (cualni, terephthalic)");
    sub->add_option("--spec", c.spec_file, "alloy spec file (key = value document)");
    sub->add_option("--out", c.out, "write the artifact here instead of stdout");
}

void add_out_option(CLI::App* sub, Common& c) {
    sub->add_option("--out", c.out, "write the artifact here instead of stdout");
}

AlloySpec resolve_alloy(const Common& c) {
    if (!c.preset.empty() && !c.spec_file.empty())
        throw ParseError("give either --preset or --spec, not both");
    if (!c.preset.empty()) return alloy_preset(c.preset);
    if (!c.spec_file.empty()) {
        std::ifstream in(c.spec_file);
        if (!in) throw ParseError("cannot open spec file '" + c.spec_file + "'");
        std::stringstream buf;
        buf << in.rdbuf();
        return parse_alloy_spec(buf.str());
    }
    throw ParseError("an alloy is required: --preset NAME or --spec FILE");
}

void emit(const Common& c, const std::string& text) {
    if (c.out.empty())
        std::cout << text;
    else
        write_file(c.out, text);
}

void emit_json(const Common& c, const Json& j) { emit(c, j.dump(2) + "\n"); }

std::vector<double> parse_grid(const std::string& s) {
    double lo, hi;
    int n;
    char c1, c2;
    std::istringstream in(s);
    in >> lo >> c1 >> hi >> c2 >> n;
    if (in.fail() || c1 != ':' || c2 != ':' || n < 1)
        throw ParseError("grid '" + s + "': expected LO:HI:N");
    std::vector<double> g;
    for (int i = 0; i < n; ++i)
        g.push_back(n == 1 ? lo : lo + (hi - lo) * i / (n - 1.0));
    return g;
}

std::vector<double> parse_list(const std::string& s) {
    std::vector<double> out;
    std::stringstream in(s);
    std::string tok;
    while (std::getline(in, tok, ',')) out.push_back(std::stod(tok));
    if (out.empty()) throw ParseError("empty list '" + s + "'");
    return out;
}

// Nearest distinct variant: the rearrangement partner used by the curve and
// hysteresis pipelines (for cubic-orthorhombic presets this is the second
// in-plane variant).
int nearest_partner(const WellFamily& fam) {
    if (fam.variants.size() < 2)
        throw RegimeError("single-variant family: no twin partner available; "
                          "use the lambda2 analysis instead");
    int best = -1;
    double bestd = std::numeric_limits<double>::infinity();
    for (std::size_t i = 1; i < fam.variants.size(); ++i) {
        double d = (fam.variants[i] - fam.variants[0]).norm();
        if (d < bestd) { bestd = d; best = static_cast<int>(i); }
    }
    return best;
}

Json alloy_json(const AlloySpec& a) {
    return Json{{"name", a.name},
                {"group", a.group},
                {"orientation", a.orientation_name},
                {"U1", json_mat(a.U1)}};
}

int run_variants(const Common& c) {
    AlloySpec a = resolve_alloy(c);
    WellFamily fam = variants(a.U1, a.group);
    Json j{{"schema", "marten.variants"}, {"schema_version", 1}};
    j["alloy"] = alloy_json(a);
    j["count"] = fam.variants.size();
    Json arr = Json::array();
    for (const Mat3& V : fam.variants) arr.push_back(json_mat(V));
    j["variants"] = arr;
    emit_json(c, j);
    return 0;
}

int run_lambda2(const Common& c) {
    AlloySpec a = resolve_alloy(c);
    MiddleEigenvalue me = middle_eigenvalue_gap(a.U1);
    Json j{{"schema", "marten.lambda2"}, {"schema_version", 1}};
    j["alloy"] = alloy_json(a);
    j["eigenvalues"] = json_vec(me.eigenvalues);
    j["lambda2"] = me.lambda2;
    j["gap"] = me.gap;
    j["compatible"] = me.compatible;
    j["degenerate"] = me.degenerate;
    // lambda2 = 1 settles rank-one connections; full two-well incompatibility
    // needs conditions this tool does not evaluate
    j["classification"] = me.compatible
                              ? "rank-one connection to the identity well"
                              : "no rank-one connection (two-well incompatibility "
                                "criterion not evaluated)";
    emit_json(c, j);
    return 0;
}

Json twin_json(const TwinSolution& t) {
    return Json{{"R", json_mat(t.R)}, {"a", json_vec(t.a)}, {"n", json_vec(t.n)},
                {"residual", t.residual}};
}

int run_twin(const Common& c, double tau, int j_index) {
    AlloySpec a = resolve_alloy(c);
    WellFamily fam = variants(a.U1, a.group);
    if (j_index < 0) j_index = nearest_partner(fam);
    if (j_index <= 0 || j_index >= static_cast<int>(fam.variants.size()))
        throw ParseError("--j out of range");
    Orientation orient = a.resolve_orientation();
    Mat3 U1m = orient.to_machine(a.U1);
    Mat3 U2m = orient.to_machine(fam.variants[j_index]);
    Mat3 T = BiaxialLoad(a.sigma1, tau + a.sigma1).tensor(); // schematic loading
    Mat3 F = well_minimizer(T, U1m).rotation * U1m;
    auto twins = twin_solutions(F, U2m);
    Json j{{"schema", "marten.twin"}, {"schema_version", 1}};
    j["alloy"] = alloy_json(a);
    j["tau"] = tau;
    j["partner_index"] = j_index;
    j["count"] = twins.size();
    Json arr = Json::array();
    for (const auto& t : twins) arr.push_back(twin_json(t));
    j["solutions"] = arr;
    emit_json(c, j);
    return 0;
}

int run_habit(const Common& c, int j_index) {
    AlloySpec a = resolve_alloy(c);
    WellFamily fam = variants(a.U1, a.group);
    if (fam.variants.size() < 2)
        throw RegimeError("single-variant family: no twin partner available; "
                          "use the lambda2 analysis instead");
    std::vector<int> candidates;
    if (j_index > 0)
        candidates.push_back(j_index);
    else
        for (std::size_t i = 1; i < fam.variants.size(); ++i)
            candidates.push_back(static_cast<int>(i));
    Json j{{"schema", "marten.habit"}, {"schema_version", 1}};
    j["alloy"] = alloy_json(a);
    Json arr = Json::array();
    int used = -1;
    for (int idx : candidates) {
        auto twins = twin_solutions(a.U1, fam.variants[idx]);
        for (const auto& tw : twins) {
            TwinPair pair{a.U1, fam.variants[idx], tw};
            for (const auto& h : habit_solutions(pair)) {
                arr.push_back(Json{{"lambda", h.fraction},
                                   {"R", json_mat(h.R)},
                                   {"b", json_vec(h.b)},
                                   {"m", json_vec(h.m)},
                                   {"residual", h.residual},
                                   {"twin", twin_json(h.twin)}});
            }
        }
        if (!arr.empty()) { used = idx; break; }
    }
    j["partner_index"] = used;
    j["count"] = arr.size();
    j["solutions"] = arr;
    emit_json(c, j);
    return 0;
}

int run_curve(const Common& c, const std::string& grid_spec, int j_index) {
    AlloySpec a = resolve_alloy(c);
    WellFamily fam = variants(a.U1, a.group);
    if (j_index < 0) j_index = nearest_partner(fam);
    CurveResult res = equal_energy_curve(a.U1, fam.variants[j_index], a.resolve_orientation(),
                                         parse_grid(grid_spec));
    CsvWriter csv({"sigma1", "f_sigma1", "rank_gap"});
    for (const auto& p : res.points) csv.row({p.sigma1, p.f_sigma1, p.rank_gap});
    emit(c, csv.text);
    return 0;
}

int run_hysteresis(const Common& c, double sigma1, double c2, int j_index) {
    AlloySpec a = resolve_alloy(c);
    if (sigma1 <= 0.0) sigma1 = a.sigma1;
    if (c2 <= 0.0) c2 = a.c2;
    WellFamily fam = variants(a.U1, a.group);
    if (j_index < 0) j_index = nearest_partner(fam);
    HysteresisBound hb =
        hysteresis_bound(a.U1, fam.variants[j_index], a.resolve_orientation(), sigma1, c2);
    Json j{{"schema", "marten.hysteresis"}, {"schema_version", 1}};
    j["alloy"] = alloy_json(a);
    j["sigma1"] = sigma1;
    j["tau_plus"] = hb.tau_plus;
    j["B"] = json_mat(hb.B);
    j["a"] = json_vec(hb.a);
    j["n"] = json_vec(hb.n);
    j["schmid_residual"] = hb.schmid_residual;
    j["partner_gap"] = hb.partner_gap;
    j["f_sigma1"] = hb.f_sigma1;
    j["c2"] = hb.c2;
    j["swapped"] = hb.swapped;
    emit_json(c, j);
    return 0;
}

int run_radial(const Common& c, double lambda, double mu, int n, const std::string& sweep) {
    LayerProfile prof{lambda, mu, n, 1.0};
    RadialLayer rl = radial_layer(prof);
    if (!sweep.empty()) {
        CsvWriter csv({"k", "rho"});
        for (double k : parse_grid(sweep)) csv.row({k, radial_rho(prof, k)});
        emit(c, csv.text);
        return 0;
    }
    Json j{{"schema", "marten.radial"}, {"schema_version", 1}};
    j["lambda"] = lambda;
    j["mu"] = mu;
    j["n"] = n;
    j["k_star"] = rl.k_star;
    j["rho_min"] = rl.rho_min;
    j["gamma_upper_bound"] = rl.gamma_upper;
    j["degenerate"] = rl.degenerate;
    emit_json(c, j);
    return 0;
}

int run_gamma(const Common& c, double gamma0, int n, double ball_r, double inner, double outer,
              double vol_body, double vol_domain) {
    ConvexBody body = (ball_r > 0.0)
                          ? ConvexBody::ball(n, ball_r)
                          : ConvexBody::make(inner, outer, vol_body, n);
    if (vol_domain <= 0.0) vol_domain = body.volume;
    double g = gamma_lower_bound(gamma0, body, vol_domain, n);
    Json j{{"schema", "marten.gamma"}, {"schema_version", 1}};
    j["gamma0"] = gamma0;
    j["n"] = n;
    j["eccentricity"] = eccentricity(body);
    j["vol_body"] = body.volume;
    j["vol_domain"] = vol_domain;
    j["gamma"] = g;
    j["note"] = "gamma0 is an assumption supplied by the user, not computed";
    emit_json(c, j);
    return 0;
}

int run_threshold(const Common& c, double c0, double c1, double alpha, double p, double gamma,
                  double Delta) {
    MetastabilityThreshold th = metastability_threshold(c0, c1, alpha, p, gamma, Delta);
    Json j{{"schema", "marten.threshold"}, {"schema_version", 1}};
    j["c0"] = c0;
    j["c1"] = c1;
    j["alpha"] = alpha;
    j["p"] = p;
    j["gamma"] = gamma;
    j["Delta"] = Delta;
    j["K"] = th.K;
    j["delta0"] = th.delta0;
    j["note"] = "gamma and Delta are assumptions supplied by the user, not computed";
    emit_json(c, j);
    return 0;
}

int run_rooms(const Common& c, int rooms, int room_index, double p,
              const std::string& dfracs) {
    Mat2 A1 = Mat2::Zero(), A2 = Mat2::Identity();
    CsvWriter csv({"d_j", "ratio"});
    for (double frac : parse_list(dfracs)) {
        RoomsPassages geom = RoomsPassages::dyadic(rooms, frac);
        RoomsRatio rr = rooms_ratio(geom, A1, A2, p, room_index);
        csv.row({geom.d[room_index - 1], rr.ratio});
    }
    emit(c, csv.text);
    return 0;
}

int run_noone(const Common& c, double delta) {
    ZeroGradientLayer zg = zero_gradient_layer(delta);
    Json j{{"schema", "marten.noone"}, {"schema_version", 1}};
    j["delta"] = delta;
    j["layer_gradient_energy"] = zg.layer_gradient_energy;
    j["layer_measure"] = zg.layer_measure;
    j["min_phase_volume"] = zg.min_phase_volume;
    emit_json(c, j);
    return 0;
}

int run_l1seq(const Common& c, const std::string& js, int n) {
    Eigen::MatrixXd A = Eigen::MatrixXd::Zero(n, n);
    Eigen::MatrixXd B = Eigen::MatrixXd::Identity(n, n);
    Json j{{"schema", "marten.l1seq"}, {"schema_version", 1}};
    j["n"] = n;
    Json arr = Json::array();
    for (double jd : parse_list(js)) {
        int jj = static_cast<int>(jd);
        L1Sequence l1 = l1_sequence(A, B, jj, 1000, c.seed);
        arr.push_back(Json{{"j", jj},
                           {"l1_norm", l1.l1_norm},
                           {"strip_measure", l1.strip_measure},
                           {"gradient_residual", l1.gradient_residual}});
    }
    j["entries"] = arr;
    emit_json(c, j);
    return 0;
}

Json mat2_json(const Mat2& M) {
    return Json::array({Json::array({M(0, 0), M(0, 1)}), Json::array({M(1, 0), M(1, 1)})});
}

int run_relax(const Common& c, const std::string& wells, double delta, int mesh, double radius,
              int trials, int budget, bool strip, const std::string& traces_path) {
    DoubleWell2D W;
    W.A1 << 0, 0, 0, 1; // e2 (x) e2
    if (wells == "incompatible") {
        W.A2 << 1, 1, 1, 1; // (e1+e2) (x) (e1+e2)
    } else if (wells == "rankone") {
        W.A2 = W.A1;
        W.A2.col(0) += Vec2(1, 1); // A1 + (e1+e2) (x) e1
    } else {
        throw ParseError("--wells must be 'incompatible' or 'rankone'");
    }
    W.delta = delta;
    Json j{{"schema", "marten.relax"}, {"schema_version", 1}};
    j["wells"] = Json{{"kind", wells},
                      {"A1", mat2_json(W.A1)},
                      {"A2", mat2_json(W.A2)},
                      {"rank_gap", W.rank_gap()}};
    j["delta"] = delta;
    j["mesh"] = mesh;
    if (strip) {
        MeshDeformation m = MeshDeformation::structured(mesh);
        double lo = 0.25, hi = 0.75;
        strip_state(m, W.A1, Vec2(1, 1), lo, hi);
        double E0 = total_energy(m, W);
        DescentResult res = descend(m, W, budget);
        j["strip"] = Json{{"volume", hi - lo},
                          {"initial_energy", E0},
                          {"final_energy", res.energy}};
        emit_json(c, j);
        return 0;
    }
    std::vector<std::vector<double>> traces;
    NucleationReport rep =
        nucleation_trial(W, radius, mesh, trials, c.seed, budget, c.threads,
                         traces_path.empty() ? nullptr : &traces);
    j["nucleus_radius"] = radius;
    j["trials"] = rep.trials;
    j["lowered_count"] = rep.lowered_count;
    j["min_energy_gap"] = rep.min_energy_gap;
    j["aborted"] = rep.aborted;
    j["tol"] = rep.tol;
    j["seed"] = c.seed;
    if (!traces_path.empty()) {
        CsvWriter csv({"trial", "step", "energy"});
        for (std::size_t t = 0; t < traces.size(); ++t)
            for (std::size_t s = 0; s < traces[t].size(); ++s)
                csv.row({static_cast<double>(t), static_cast<double>(s), traces[t][s]});
        write_file(traces_path, csv.text);
    }
    emit_json(c, j);
    return 0;
}

int run_report(const Common& c) {
    AlloySpec a = resolve_alloy(c);
    Json j{{"schema", "marten.report"}, {"schema_version", 1}};
    j["alloy"] = alloy_json(a);

    WellFamily fam = variants(a.U1, a.group);
    Json arr = Json::array();
    for (const Mat3& V : fam.variants) arr.push_back(json_mat(V));
    j["variants"] = Json{{"count", fam.variants.size()}, {"list", arr}};

    MiddleEigenvalue me = middle_eigenvalue_gap(a.U1);
    j["lambda2"] = Json{{"eigenvalues", json_vec(me.eigenvalues)},
                        {"lambda2", me.lambda2},
                        {"gap", me.gap},
                        {"compatible", me.compatible}};

    auto inapplicable = [](const std::string& why) {
        return Json{{"applicable", false}, {"reason", why}};
    };
    if (fam.variants.size() < 2) {
        j["twin"] = inapplicable("single-variant family; see lambda2");
        j["curve"] = inapplicable("single-variant family");
        j["hysteresis"] = inapplicable("single-variant family");
        emit_json(c, j);
        return 0;
    }

    int jn = nearest_partner(fam);
    Orientation orient = a.resolve_orientation();
    try {
        Mat3 U1m = orient.to_machine(a.U1);
        Mat3 U2m = orient.to_machine(fam.variants[jn]);
        auto twins = twin_solutions(U1m, U2m);
        Json tarr = Json::array();
        for (const auto& t : twins) tarr.push_back(twin_json(t));
        j["twin"] =
            Json{{"applicable", true}, {"partner_index", jn}, {"count", twins.size()},
                 {"solutions", tarr}};
    } catch (const Error& e) {
        j["twin"] = inapplicable(e.what());
    }
    try {
        std::vector<double> grid = parse_grid("0.5:2.0:8");
        for (double& s : grid) s *= a.sigma1;
        CurveResult res = equal_energy_curve(a.U1, fam.variants[jn], orient, grid);
        Json pts = Json::array();
        for (const auto& p : res.points)
            pts.push_back(Json{{"sigma1", p.sigma1}, {"f_sigma1", p.f_sigma1},
                               {"rank_gap", p.rank_gap}});
        j["curve"] = Json{{"applicable", true}, {"swapped", res.swapped}, {"points", pts}};
    } catch (const Error& e) {
        j["curve"] = inapplicable(e.what());
    }
    try {
        HysteresisBound hb = hysteresis_bound(a.U1, fam.variants[jn], orient, a.sigma1, a.c2);
        j["hysteresis"] = Json{{"applicable", true},
                               {"tau_plus", hb.tau_plus},
                               {"B", json_mat(hb.B)},
                               {"a", json_vec(hb.a)},
                               {"n", json_vec(hb.n)},
                               {"schmid_residual", hb.schmid_residual},
                               {"partner_gap", hb.partner_gap},
                               {"f_sigma1", hb.f_sigma1},
                               {"c2", hb.c2}};
        auto lam = laminate_counterexample(a.U1, fam.variants[jn], orient, a.sigma1, hb.c2,
                                           1.01 * hb.tau_plus, 0.02, Vec3(0.5, 0.5, 0.5),
                                           Vec3::Zero(), Vec3::Ones());
        j["laminate"] = Json{{"applicable", true},
                             {"tau1", 1.01 * hb.tau_plus},
                             {"energy_gap", lam.energy_gap},
                             {"l1_distance", lam.l1_distance},
                             {"slab_volume", lam.slab_volume},
                             {"c_omega", lam.c_omega}};
    } catch (const Error& e) {
        j["hysteresis"] = inapplicable(e.what());
        j["laminate"] = inapplicable("hysteresis bound unavailable");
    }
    emit_json(c, j);
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"marten: energy-well compatibility, dead-load hysteresis bounds and "
                 "transition-layer estimates for martensitic transformations"};
    app.require_subcommand(1);
    Common c;
    std::function<int()> action;

    // variants
    {
        auto* sub = app.add_subcommand("variants", "symmetry-generated variant stretches");
        add_alloy_options(sub, c);
        sub->final_callback([&] { action = [&] { return run_variants(c); }; });
    }
    // lambda2
    {
        auto* sub = app.add_subcommand("lambda2", "middle-eigenvalue compatibility test");
        add_alloy_options(sub, c);
        sub->final_callback([&] { action = [&] { return run_lambda2(c); }; });
    }
    // twin
    {
        auto* sub = app.add_subcommand("twin", "rank-one connections between variant wells");
        add_alloy_options(sub, c);
        auto tau = std::make_shared<double>(0.05);
        auto jidx = std::make_shared<int>(-1);
        sub->add_option("--tau", *tau, "well-offset parameter");
        sub->add_option("--j", *jidx, "partner variant index (default: nearest variant)");
        sub->final_callback([&c, tau, jidx, &action] {
            action = [&c, tau, jidx] { return run_twin(c, *tau, *jidx); };
        });
    }
    // habit
    {
        auto* sub = app.add_subcommand("habit", "austenite-martensite habit-plane solutions");
        add_alloy_options(sub, c);
        auto jidx = std::make_shared<int>(-1);
        sub->add_option("--j", *jidx, "partner variant index (default: first that admits one)");
        sub->final_callback([&c, jidx, &action] {
            action = [&c, jidx] { return run_habit(c, *jidx); };
        });
    }
    // curve
    {
        auto* sub = app.add_subcommand("curve", "equal-energy curve sigma2 = f(sigma1)");
        add_alloy_options(sub, c);
        auto grid = std::make_shared<std::string>("0.5:2.0:16");
        auto jidx = std::make_shared<int>(-1);
        sub->add_option("--sigma1", *grid, "sigma1 grid LO:HI:N");
        sub->add_option("--j", *jidx, "partner variant index");
        sub->final_callback([&c, grid, jidx, &action] {
            action = [&c, grid, jidx] { return run_curve(c, *grid, *jidx); };
        });
    }
    // hysteresis
    {
        auto* sub = app.add_subcommand("hysteresis", "metastability-loss bound tau+");
        add_alloy_options(sub, c);
        auto s1 = std::make_shared<double>(0.0);
        auto c2 = std::make_shared<double>(0.0);
        auto jidx = std::make_shared<int>(-1);
        sub->add_option("--sigma1", *s1, "operating point on the curve");
        sub->add_option("--c2", *c2, "loading rate (default: auto power of two)");
        sub->add_option("--j", *jidx, "partner variant index");
        sub->final_callback([&c, s1, c2, jidx, &action] {
            action = [&c, s1, c2, jidx] { return run_hysteresis(c, *s1, *c2, *jidx); };
        });
    }
    // radial
    {
        auto* sub = app.add_subcommand("radial", "optimal radial transition layer");
        add_out_option(sub, c);
        auto lam = std::make_shared<double>(1.1);
        auto mu = std::make_shared<double>(1.0);
        auto n = std::make_shared<int>(3);
        auto sweep = std::make_shared<std::string>("");
        sub->add_option("--lambda", *lam, "inner well dilatation")->required();
        sub->add_option("--mu", *mu, "outer well dilatation")->required();
        sub->add_option("--n", *n, "space dimension");
        sub->add_option("--sweep", *sweep, "emit CSV of rho(k) on grid LO:HI:N");
        sub->final_callback([&c, lam, mu, n, sweep, &action] {
            action = [&c, lam, mu, n, sweep] { return run_radial(c, *lam, *mu, *n, *sweep); };
        });
    }
    // gamma
    {
        auto* sub = app.add_subcommand("gamma", "transition-layer gamma lower bound");
        add_out_option(sub, c);
        auto g0 = std::make_shared<double>(1.0);
        auto n = std::make_shared<int>(2);
        auto ball = std::make_shared<double>(0.0);
        auto inner = std::make_shared<double>(0.0);
        auto outer = std::make_shared<double>(0.0);
        auto volb = std::make_shared<double>(0.0);
        auto vold = std::make_shared<double>(0.0);
        sub->add_option("--gamma0", *g0, "assumed gamma0 constant")->required();
        sub->add_option("--n", *n, "space dimension");
        sub->add_option("--ball", *ball, "body is the ball of this radius");
        sub->add_option("--inner", *inner, "inner radius r(C)");
        sub->add_option("--outer", *outer, "outer radius R(C)");
        sub->add_option("--vol-body", *volb, "volume of C");
        sub->add_option("--vol-domain", *vold, "volume of the domain (default: vol C)");
        sub->final_callback([&c, g0, n, ball, inner, outer, volb, vold, &action] {
            action = [&c, g0, n, ball, inner, outer, volb, vold] {
                return run_gamma(c, *g0, *n, *ball, *inner, *outer, *volb, *vold);
            };
        });
    }
    // threshold
    {
        auto* sub = app.add_subcommand("threshold", "metastability threshold constants K, delta0");
        add_out_option(sub, c);
        auto c0 = std::make_shared<double>(0.0);
        auto c1 = std::make_shared<double>(1.0);
        auto al = std::make_shared<double>(1.0);
        auto p = std::make_shared<double>(2.0);
        auto ga = std::make_shared<double>(0.0);
        auto De = std::make_shared<double>(1.0);
        sub->add_option("--c0", *c0, "growth offset")->required();
        sub->add_option("--c1", *c1, "growth coefficient")->required();
        sub->add_option("--alpha", *al, "floor outside the well neighbourhoods")->required();
        sub->add_option("--p", *p, "growth exponent");
        sub->add_option("--gamma", *ga, "transition-layer constant")->required();
        sub->add_option("--Delta", *De, "separation constant (assumed)");
        sub->final_callback([&c, c0, c1, al, p, ga, De, &action] {
            action = [&c, c0, c1, al, p, ga, De] {
                return run_threshold(c, *c0, *c1, *al, *p, *ga, *De);
            };
        });
    }
    // rooms
    {
        auto* sub = app.add_subcommand("rooms", "rooms-and-passages layer/nucleus ratio sweep");
        add_out_option(sub, c);
        auto rooms = std::make_shared<int>(6);
        auto jroom = std::make_shared<int>(3);
        auto p = std::make_shared<double>(2.0);
        auto dfracs = std::make_shared<std::string>("0.5,0.05,0.005,0.0005");
        sub->add_option("--rooms", *rooms, "number of rooms");
        sub->add_option("--room", *jroom, "nucleus room index");
        sub->add_option("--p", *p, "growth exponent");
        sub->add_option("--dfrac", *dfracs, "corridor thickness fractions, comma list");
        sub->final_callback([&c, rooms, jroom, p, dfracs, &action] {
            action = [&c, rooms, jroom, p, dfracs] {
                return run_rooms(c, *rooms, *jroom, *p, *dfracs);
            };
        });
    }
    // noone
    {
        auto* sub = app.add_subcommand("noone", "zero-gradient transition layer example");
        add_out_option(sub, c);
        auto delta = std::make_shared<double>(0.1);
        sub->add_option("--delta", *delta, "layer thickness parameter in (0,1)");
        sub->final_callback([&c, delta, &action] {
            action = [&c, delta] { return run_noone(c, *delta); };
        });
    }
    // l1seq
    {
        auto* sub = app.add_subcommand("l1seq", "L1-bounded splitting sequence");
        add_out_option(sub, c);
        auto js = std::make_shared<std::string>("1,10,100,1000");
        auto n = std::make_shared<int>(2);
        sub->add_option("--j", *js, "sequence indices, comma list");
        sub->add_option("--n", *n, "space dimension (1..3)");
        sub->add_option("--seed", c.seed, "sampling seed");
        sub->final_callback([&c, js, n, &action] {
            action = [&c, js, n] { return run_l1seq(c, *js, *n); };
        });
    }
    // relax
    {
        auto* sub = app.add_subcommand("relax", "finite-element metastability probe");
        add_out_option(sub, c);
        auto wells = std::make_shared<std::string>("incompatible");
        auto delta = std::make_shared<double>(0.01);
        auto mesh = std::make_shared<int>(64);
        auto radius = std::make_shared<double>(1.0 / 16.0);
        auto trials = std::make_shared<int>(100);
        auto budget = std::make_shared<int>(150);
        auto strip = std::make_shared<bool>(false);
        auto traces = std::make_shared<std::string>("");
        sub->add_option("--wells", *wells, "incompatible | rankone");
        sub->add_option("--delta", *delta, "product well depth");
        sub->add_option("--mesh", *mesh, "cells per side");
        sub->add_option("--radius", *radius, "nucleus radius");
        sub->add_option("--trials", *trials, "number of seeded trials");
        sub->add_option("--budget", *budget, "descent steps per trial");
        sub->add_flag("--strip", *strip, "run the laminate-strip initializer instead");
        sub->add_option("--traces", *traces, "write per-trial energy traces CSV here");
        sub->add_option("--seed", c.seed, "trial seed");
        sub->add_option("--threads", c.threads, "worker threads (default: hardware)");
        sub->final_callback([&c, wells, delta, mesh, radius, trials, budget, strip, traces,
                             &action] {
            action = [&c, wells, delta, mesh, radius, trials, budget, strip, traces] {
                return run_relax(c, *wells, *delta, *mesh, *radius, *trials, *budget, *strip,
                                 *traces);
            };
        });
    }
    // report
    {
        auto* sub = app.add_subcommand("report", "full pipeline report for an alloy spec");
        add_alloy_options(sub, c);
        sub->final_callback([&] { action = [&] { return run_report(c); }; });
    }

    try {
        app.parse(argc, argv);
        return action ? action() : 2;
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    } catch (const ParseError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const RegimeError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 4;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    }
}
