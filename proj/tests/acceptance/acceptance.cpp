// Acceptance run: one PASS/FAIL line per criterion, nonzero exit if any fail.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "cli/cli.hpp"
#include "lkpolar/lkpolar.hpp"
#include "test_support.hpp"

using namespace lkpolar;
using namespace lkpolar::testing;

namespace {

constexpr double kPi = std::numbers::pi;

struct Outcome {
    bool pass = true;
    std::string detail;
};

/// Collects failures while a criterion runs; the first few are reported.
class Check {
public:
    void near(double got, double want, double tol, const std::string& what) {
        worst_ = std::max(worst_, std::abs(got - want));
        if (!(std::abs(got - want) <= tol)) fail(what, got, want);
    }
    void z(double got, double sg, double want, double sw, const std::string& what) {
        double s = zscore(got, sg, want, sw);
        worst_z_ = std::max(worst_z_, s);
        if (!(s <= 4.0)) fail(what + " (z=" + fmt(s) + ")", got, want);
    }
    void relative(double got, double want, double rel, const std::string& what) {
        double e = std::abs(got - want) / std::abs(want);
        worst_rel_ = std::max(worst_rel_, e);
        if (!(e <= rel)) fail(what, got, want);
    }
    void stderr_at_most(double s, double bound, const std::string& what) {
        worst_se_ = std::max(worst_se_, s);
        if (!(s <= bound)) fail(what + " stderr", s, bound);
    }
    void truth(bool ok, const std::string& what) {
        if (!ok) fail(what, 0, 0);
    }

    bool ok() const { return failures_ == 0; }

    std::string summary() const {
        std::ostringstream s;
        if (worst_ >= 0) s << " max|err|=" << fmt(worst_);
        if (worst_z_ >= 0) s << " max|z|=" << fmt(worst_z_);
        if (worst_rel_ >= 0) s << " max rel=" << fmt(worst_rel_);
        if (worst_se_ >= 0) s << " max stderr=" << fmt(worst_se_);
        if (failures_ > 0) s << "; " << failures_ << " failed, first: " << first_;
        return s.str();
    }

    static std::string fmt(double x) {
        char buf[32];
        std::snprintf(buf, sizeof buf, "%.3g", x);
        return buf;
    }

private:
    void fail(const std::string& what, double got, double want) {
        if (failures_++ == 0) first_ = what + " got " + fmt(got) + " want " + fmt(want);
    }

    int failures_ = 0;
    std::string first_;
    double worst_ = -1, worst_z_ = -1, worst_rel_ = -1, worst_se_ = -1;
};

std::string idx(const std::string& name, int i) { return name + "[" + std::to_string(i) + "]"; }

double at(const std::vector<double>& v, int i) { return v[static_cast<std::size_t>(i)]; }

ConvexCone full_space(int n) {
    std::vector<Vector> g;
    for (int k = 0; k < n; ++k) {
        g.push_back(Vector::Unit(n, k));
        g.push_back(-Vector::Unit(n, k));
    }
    return cone_from_generators(g, n);
}

Polytope unit_square() { return homogenize(std::vector<Vector>{vec({0, 0}), vec({1, 0}), vec({0, 1}), vec({1, 1})}); }

Polytope unit_cube() {
    std::vector<Vector> v;
    for (int k = 0; k < 8; ++k) v.push_back(vec({double(k & 1), double((k >> 1) & 1), double((k >> 2) & 1)}));
    return homogenize(v);
}

/// Random pointed cones with 2..n+3 generators, from a fixed stream per dimension.
std::vector<ConvexCone> random_cones(int n, int count, std::uint64_t seed) {
    RngStream rng(seed, static_cast<std::uint64_t>(n));
    std::vector<ConvexCone> out;
    for (int k = 0; k < count; ++k) out.push_back(random_pointed_cone(rng, n, n + k % 4));
    return out;
}

struct NamedCone {
    std::string name;
    ConvexCone cone;
};

std::vector<NamedCone> named_cones() {
    return {{"quadrant", quadrant()}, {"half-plane", half_plane()}, {"octant", octant()}, {"wedge", wedge45()}};
}

/// Every exact-angle cone used below: the named ones plus 50 random cones in R^2 and R^3.
std::vector<NamedCone> exact_cones(int per_dim) {
    std::vector<NamedCone> out = named_cones();
    for (int n : {2, 3}) {
        auto cs = random_cones(n, per_dim, 101);
        for (std::size_t k = 0; k < cs.size(); ++k)
            out.push_back({"R" + std::to_string(n) + "#" + std::to_string(k), cs[k]});
    }
    return out;
}

// Transfer matrix entries straight from the gamma function.
double alpha_ref(int k) { return std::pow(kPi, k / 2.0) / std::tgamma(k / 2.0 + 1.0); }

double choose_ref(int n, int k) { return std::tgamma(n + 1.0) / (std::tgamma(k + 1.0) * std::tgamma(n - k + 1.0)); }

double a_ref(int i, int k) { return alpha_ref(k) / (alpha_ref(k - i) * alpha_ref(i)) * choose_ref(k, i); }

//---------------------------------------------------------------------------//

Outcome transfer_matrix_criterion() {
    Check c;
    for (int n = 1; n <= 6; ++n) {
        std::ostringstream out, err;
        int code = cli::run({"matrix", "--dim", std::to_string(n)}, out, err);
        c.truth(code == 0, "matrix --dim " + std::to_string(n) + " exit code");
        std::istringstream lines(out.str());
        std::string line;
        int seen = 0;
        while (std::getline(lines, line)) {
            int i = 0, j = 0;
            double v = 0;
            if (std::sscanf(line.c_str(), "m_%d^%d = %lf", &i, &j, &v) != 3) {
                c.truth(false, "unparsed line '" + line + "'");
                continue;
            }
            double want = i == j ? 1.0 : a_ref(i, j) - a_ref(i, j - 1);
            c.near(v, want, 1e-12, "m_" + std::to_string(i) + "^" + std::to_string(j) + " n=" + std::to_string(n));
            ++seen;
        }
        c.truth(seen == n * (n + 1) / 2, "entry count for n=" + std::to_string(n));
    }
    return {c.ok(), c.summary()};
}

Outcome angle_sum_criterion() {
    Check c;
    for (const auto& [name, cone] : exact_cones(50)) {
        Uncertain r = angle_sum_residual(cone);
        c.truth(r.std_error == 0.0, name + " used sampled angles");
        c.near(r.value, 0.0, 1e-10, name);
    }
    Check mc;
    auto cones = random_cones(4, 20, 202);
    for (std::size_t k = 0; k < cones.size(); ++k) {
        AngleConfig cfg;
        cfg.samples = 200000;
        cfg.seed = 7000 + k;
        Uncertain r = angle_sum_residual(cones[k], cfg);
        mc.truth(r.std_error > 0.0, "R4 cone used no sampled angles");
        mc.z(r.value, r.std_error, 0.0, 0.0, "R4#" + std::to_string(k));
    }
    return {c.ok() && mc.ok(), "exact:" + c.summary() + "; R4:" + mc.summary()};
}

Outcome worked_germs_criterion() {
    Check c;
    auto expect = [&](const std::string& name, const Sequence& got, std::vector<double> want) {
        c.truth(got.size() == static_cast<int>(want.size()), name + " length");
        for (int i = 0; i < got.size() && i < static_cast<int>(want.size()); ++i)
            c.near(got.value[static_cast<std::size_t>(i)], at(want, i), 1e-10, idx(name, i));
    };
    expect("quadrant sigma", sigma_closed(quadrant()), {1, 0.75, 0.25});
    expect("quadrant lambda", lambda_loc_closed(quadrant()), {1, 0.5 + kPi / 8, 0.25});
    expect("half-plane sigma", sigma_closed(half_plane()), {1, 1, 0.5});
    expect("half-plane lambda", lambda_loc_closed(half_plane()), {1, 0.5 + kPi / 4, 0.5});
    expect("octant sigma", sigma_closed(octant()), {1, 7.0 / 8, 0.5, 1.0 / 8});
    return {c.ok(), c.summary()};
}

Outcome identity_criterion() {
    Check c;
    std::vector<NamedCone> cones = exact_cones(50);
    for (int n : {2, 3}) {
        auto more = random_cones(n, 50, 303);
        for (std::size_t k = 0; k < more.size(); ++k)
            cones.push_back({"extra R" + std::to_string(n) + "#" + std::to_string(k), more[k]});
    }
    for (const auto& [name, cone] : cones) c.near(verify_transfer_identity(cone), 0.0, 1e-10, name);
    return {c.ok(), std::to_string(cones.size()) + " cones" + c.summary()};
}

Outcome oracle_criterion() {
    Check c;
    for (int n : {2, 3}) {
        auto cones = random_cones(n, 20, 404);
        for (std::size_t k = 0; k < cones.size(); ++k) {
            const std::string name = "R" + std::to_string(n) + "#" + std::to_string(k);
            const std::uint64_t seed = 9000 + 100 * static_cast<std::uint64_t>(n) + k;
            InvariantProfile p = compute_profile(cones[k]);
            PolyUnion u({cones[k]});

            McConfig sig;
            sig.samples = 20000;
            sig.seed = seed;
            for (int j = 1; j <= n; ++j) {
                McEstimate e = sigma_mc(u, j, sig);
                c.stderr_at_most(e.std_error, 0.01, idx(name + " sigma", j));
                c.z(e.value, e.std_error, p.sigma.value[static_cast<std::size_t>(j)], 0.0, idx(name + " sigma", j));
            }

            Body body = union_in_unit_ball(u);
            McConfig cro;
            cro.samples = 200000;
            cro.seed = seed;
            for (int i = 0; i <= n; ++i) {
                McEstimate e = crofton_lambda_mc(body, i, cro);
                c.stderr_at_most(e.std_error, 0.01, idx(name + " crofton", i));
                c.z(e.value, e.std_error, alpha(i) * p.lambda_loc.value[static_cast<std::size_t>(i)], 0.0,
                    idx(name + " crofton", i));
            }

            McConfig tube;
            tube.samples = n == 2 ? 1000000 : 8000000;
            tube.seed = seed;
            auto fit = steiner_fit_mc(body, tube);
            for (int i = 0; i <= n; ++i) {
                const auto& e = fit[static_cast<std::size_t>(i)];
                double v = e.value / alpha(i), s = e.std_error / alpha(i);
                c.stderr_at_most(s, 0.01, idx(name + " steiner", i));
                c.z(v, s, p.lambda_loc.value[static_cast<std::size_t>(i)], 0.0, idx(name + " steiner", i));
            }
        }
    }
    return {c.ok(), c.summary()};
}

Outcome union_criterion() {
    Check c;
    PolyUnion u({quadrant(), cone_of({{-1, 0}, {0, -1}})});
    McConfig cfg;
    cfg.samples = 200000;
    cfg.seed = 11;
    McEstimate s1 = sigma_mc(u, 1, cfg);
    c.z(s1.value, s1.std_error, 1.5, 0.0, "sigma_1");
    Sequence closed = lambda_loc_union_closed(u);
    c.near(closed.value[1], 1 + kPi / 4, 1e-10, "closed Lambda^loc_1");
    // sigma of the union: sigma_1 = 3/2 and sigma_2 = Theta = 1/2.
    Sequence sigma(3);
    sigma.value = {1.0, 1.5, 0.5};
    Sequence ms = transfer_matrix(2).apply(sigma);
    c.near(ms.value[1], 1.5 + (kPi / 2 - 1) * 0.5, 1e-10, "(M sigma)_1 formula");
    c.near(ms.value[1], 1 + kPi / 4, 1e-10, "(M sigma)_1");
    c.near(ms.value[1], closed.value[1], 1e-10, "(M sigma)_1 vs closed");
    return {c.ok(), c.summary()};
}

Outcome kinematic_criterion() {
    Check c;
    Sequence sq = polytope_intrinsic_volumes(unit_square());
    for (int i = 0; i <= 2; ++i) c.near(sq.value[static_cast<std::size_t>(i)], at({1, 2, 1}, i), 1e-10, idx("square", i));
    Sequence cube = polytope_intrinsic_volumes(unit_cube());
    for (int i = 0; i <= 3; ++i) c.near(cube.value[static_cast<std::size_t>(i)], at({1, 3, 3, 1}, i), 1e-10, idx("cube", i));

    McConfig fit_cfg;
    fit_cfg.samples = 4000000;
    fit_cfg.seed = 12;
    auto fit = steiner_fit_mc(unit_cube(), fit_cfg);
    for (int i = 0; i <= 3; ++i) c.relative(fit[static_cast<std::size_t>(i)].value, at({1, 3, 3, 1}, i), 0.02, idx("cube fit", i));

    std::vector<double> poly = steiner_polynomial(unit_square());
    c.truth(poly.size() == 3, "square Steiner degree");
    for (int k = 0; k < 3 && k < static_cast<int>(poly.size()); ++k)
        c.near(at(poly, k), at({1, 4, kPi}, k), 1e-10, idx("square Steiner", k));
    McConfig tube;
    tube.samples = 200000;
    tube.seed = 13;
    for (double r : {0.25, 0.5}) {
        McEstimate e = tube_volume_mc(unit_square(), r, tube);
        c.z(e.value, e.std_error, 1 + 4 * r + kPi * r * r, 0.0, "square tube r=" + Check::fmt(r));
    }
    return {c.ok(), c.summary()};
}

Outcome ball_criterion() {
    Check c;
    for (int n : {2, 3}) {
        McConfig cfg;
        cfg.samples = 2000000;
        cfg.seed = 14;
        auto fit = steiner_fit_mc(union_in_unit_ball(PolyUnion({full_space(n)})), cfg);
        for (int j = 0; j <= n; ++j) {
            double want = alpha_ref(n) / alpha_ref(n - j) * choose_ref(n, j);
            c.relative(fit[static_cast<std::size_t>(j)].value, want, 0.02, idx("B" + std::to_string(n), j));
        }
    }
    return {c.ok(), c.summary()};
}

Outcome top_density_criterion() {
    Check c;
    std::vector<NamedCone> cones = exact_cones(50);
    for (const auto& [name, cone] : cones) {
        const int d = cone.ambient_dim();
        double sigma = sigma_closed(cone).value[static_cast<std::size_t>(d)];
        double lambda = lambda_loc_closed(cone).value[static_cast<std::size_t>(d)];
        double theta = solid_angle(cone).value;
        c.near(sigma, theta, 1e-10, name + " sigma_d");
        c.near(lambda, theta, 1e-10, name + " Lambda_d");
    }
    return {c.ok(), std::to_string(cones.size()) + " cones" + c.summary()};
}

Outcome determinism_criterion() {
    Check c;
    auto path = std::filesystem::temp_directory_path() / "lkpolar_acceptance_scene.json";
    {
        std::ofstream f(path);
        f << R"({"version": 1, "objects": [
  {"name": "wedge", "kind": "cone", "ambient_dim": 2, "data": [[1, 0], [1, 1]]},
  {"name": "corner", "kind": "cone", "ambient_dim": 3, "data": [[1, 0, 0], [0, 1, 0], [1, 1, 1]]},
  {"name": "pair", "kind": "union", "ambient_dim": 2, "data": [[[1, 0], [0, 1]], [[-1, 0], [0, -1]]]},
  {"name": "square", "kind": "polytope", "ambient_dim": 2, "data": [[0, 0], [1, 0], [0, 1], [1, 1]]}
]}
)";
    }
    std::vector<std::string> reports;
    for (int workers : {1, 2, 8}) {
        set_worker_count(workers);
        std::ostringstream out, err;
        int code = cli::run({"verify", path.string(), "--samples", "20000", "--seed", "5"}, out, err);
        c.truth(code == 0 || code == 1, "verify exit code " + std::to_string(code) + ": " + err.str());
        reports.push_back(out.str());
    }
    set_worker_count(0);
    std::filesystem::remove(path);
    c.truth(!reports[0].empty(), "empty report");
    c.truth(reports[0] == reports[1], "1 vs 2 workers differ");
    c.truth(reports[0] == reports[2], "1 vs 8 workers differ");
    return {c.ok(), " " + std::to_string(reports[0].size()) + " bytes x3" + c.summary()};
}

}  // namespace

int main() {
    struct Criterion {
        const char* name;
        double budget_seconds;
        std::function<Outcome()> run;
    };
    const std::vector<Criterion> criteria = {
        {"transfer matrix", 1, transfer_matrix_criterion},
        {"face angle sum", 120, angle_sum_criterion},
        {"worked germs", 0, worked_germs_criterion},
        {"transfer identity", 30, identity_criterion},
        {"oracle agreement", 600, oracle_criterion},
        {"opposite quadrants", 0, union_criterion},
        {"polytope volumes", 0, kinematic_criterion},
        {"ball volumes", 0, ball_criterion},
        {"top density", 0, top_density_criterion},
        {"determinism", 0, determinism_criterion},
    };
    int failed = 0;
    for (std::size_t k = 0; k < criteria.size(); ++k) {
        const auto& cr = criteria[k];
        auto t0 = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = cr.run();
        } catch (const std::exception& e) {
            o = {false, std::string(" threw: ") + e.what()};
        }
        double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        if (cr.budget_seconds > 0 && secs > cr.budget_seconds) {
            o.pass = false;
            o.detail += "; over time budget of " + Check::fmt(cr.budget_seconds) + " s";
        }
        if (!o.pass) ++failed;
        std::printf("%s %2zu %s:%s (%.2f s)\n", o.pass ? "PASS" : "FAIL", k + 1, cr.name, o.detail.c_str(), secs);
        std::fflush(stdout);
    }
    std::printf("%d of %zu criteria failed\n", failed, criteria.size());
    return failed == 0 ? 0 : 1;
}
