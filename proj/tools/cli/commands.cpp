#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>

#include "cli/cli.hpp"
#include "cli/scene.hpp"
#include "lkpolar/lkpolar.hpp"

namespace lkpolar::cli {

namespace {

constexpr double kZLimit = 4.0;
constexpr double kExactTol = 1e-10;

std::string fmt(const char* spec, double x) {
    char buf[64];
    std::snprintf(buf, sizeof buf, spec, x);
    return buf;
}

std::uint64_t object_seed(std::uint64_t seed, std::size_t index) {
    return seed ^ (0x9E3779B97F4A7C15ULL * (static_cast<std::uint64_t>(index) + 1));
}

std::vector<const SceneObject*> select(const SceneFile& scene, const std::string& name) {
    std::vector<const SceneObject*> out;
    if (!name.empty()) {
        const SceneObject* o = scene.find(name);
        if (!o) throw SceneError("no object named \"" + name + "\"");
        out.push_back(o);
    } else {
        for (const auto& o : scene.objects) out.push_back(&o);
    }
    return out;
}

//---------------------------------------------------------------------------//
// invariants
//---------------------------------------------------------------------------//

struct ProfileRow {
    std::string name;
    std::string kind;
    int n = 0;
    std::vector<std::pair<std::string, Sequence>> sequences;
    bool has_angle_sum = false;
    Uncertain angle_sum;
};

Json sequence_json(const Sequence& s) {
    Json v = Json::array(), e = Json::array();
    for (int k = 0; k < s.size(); ++k) {
        v.push_back(s.value[static_cast<std::size_t>(k)]);
        e.push_back(s.std_error[static_cast<std::size_t>(k)]);
    }
    return Json{{"value", v}, {"stderr", e}};
}

void write_profiles(const std::vector<ProfileRow>& rows, const std::string& format, std::ostream& out) {
    if (format == "json") {
        Json root;
        root["objects"] = Json::array();
        for (const auto& r : rows) {
            Json j;
            j["name"] = r.name;
            j["kind"] = r.kind;
            j["ambient_dim"] = r.n;
            for (const auto& [label, seq] : r.sequences) j[label] = sequence_json(seq);
            if (r.has_angle_sum) j["angle_sum_residual"] = Json{{"value", r.angle_sum.value}, {"stderr", r.angle_sum.std_error}};
            root["objects"].push_back(std::move(j));
        }
        out << dump_json(root);
    } else if (format == "csv") {
        out << "object,quantity,index,value,stderr\n";
        for (const auto& r : rows) {
            for (const auto& [label, seq] : r.sequences)
                for (int k = 0; k < seq.size(); ++k)
                    out << r.name << ',' << label << ',' << k << ',' << format_number(seq.value[static_cast<std::size_t>(k)])
                        << ',' << format_number(seq.std_error[static_cast<std::size_t>(k)]) << '\n';
            if (r.has_angle_sum)
                out << r.name << ",angle_sum_residual,," << format_number(r.angle_sum.value) << ','
                    << format_number(r.angle_sum.std_error) << '\n';
        }
    } else {
        for (std::size_t o = 0; o < rows.size(); ++o) {
            const auto& r = rows[o];
            if (o) out << '\n';
            out << r.name << " (" << r.kind << ", n=" << r.n << ")\n";
            char line[256];
            std::snprintf(line, sizeof line, "  %-4s", "k");
            out << line;
            for (const auto& [label, seq] : r.sequences) {
                std::snprintf(line, sizeof line, "  %-18s  %-10s", label.c_str(), "stderr");
                out << line;
            }
            out << '\n';
            for (int k = 0; k <= r.n; ++k) {
                std::snprintf(line, sizeof line, "  %-4d", k);
                out << line;
                for (const auto& [label, seq] : r.sequences) {
                    std::snprintf(line, sizeof line, "  %-18.12g  %-10.3g", seq.value[static_cast<std::size_t>(k)],
                                  seq.std_error[static_cast<std::size_t>(k)]);
                    out << line;
                }
                out << '\n';
            }
            if (r.has_angle_sum) {
                std::snprintf(line, sizeof line, "  angle sum residual %.3g (stderr %.3g)\n", r.angle_sum.value, r.angle_sum.std_error);
                out << line;
            }
        }
    }
}

int cmd_invariants(const std::string& file, const std::string& object, std::int64_t samples, std::uint64_t seed,
                   const std::string& format, std::ostream& out) {
    SceneFile scene = load_scene(file);
    std::vector<ProfileRow> rows;
    auto objects = select(scene, object);
    for (std::size_t k = 0; k < objects.size(); ++k) {
        const SceneObject& o = *objects[k];
        const std::uint64_t s = object_seed(seed, k);
        ProfileRow row{o.name, to_string(o.kind), o.ambient_dim, {}, false, {}};
        if (const auto* cone = std::get_if<ConvexCone>(&o.geometry)) {
            InvariantProfile p = compute_profile(*cone, AngleConfig{samples, s, 0, false});
            row.sequences = {{"sigma", p.sigma}, {"lambda_loc", p.lambda_loc}, {"contributions", p.contributions}};
            row.has_angle_sum = true;
            row.angle_sum = p.angle_sum_residual;
        } else if (const auto* u = std::get_if<PolyUnion>(&o.geometry)) {
            McConfig mc;
            mc.samples = samples;
            mc.seed = s;
            row.sequences = {{"sigma", sigma_mc_all(*u, mc)},
                             {"lambda_loc", lambda_loc_union_closed(*u, AngleConfig{samples, s, 0, false})}};
        } else {
            if (!object.empty()) throw SceneError("\"" + o.name + "\" is a polytope; use the polytope command");
            continue;
        }
        rows.push_back(std::move(row));
    }
    write_profiles(rows, format, out);
    return kExitOk;
}

//---------------------------------------------------------------------------//
// verify
//---------------------------------------------------------------------------//

struct Comparison {
    std::string object;
    std::string check;
    int index = 0;
    double closed = 0.0;
    double oracle = 0.0;
    double std_error = 0.0;

    double z() const {
        double diff = oracle - closed;
        if (std_error > 0.0) return diff / std_error;
        return std::abs(diff) <= kExactTol ? 0.0 : std::copysign(INFINITY, diff);
    }
    bool passed() const { return std::abs(z()) <= kZLimit; }
};

void compare(std::vector<Comparison>& rows, const std::string& object, const std::string& check, int index,
             Uncertain closed, Uncertain oracle) {
    rows.push_back({object, check, index, closed.value, oracle.value,
                    std::hypot(closed.std_error, oracle.std_error)});
}

void verify_cone(const std::string& name, const ConvexCone& cone, const McConfig& mc, const AngleConfig& angles,
                 std::vector<Comparison>& rows) {
    const int n = cone.ambient_dim();
    InvariantProfile p = compute_profile(cone, angles);
    TransferMatrix m(n);
    Sequence ms = m.apply(p.sigma);
    compare(rows, name, "angle_sum", 0, {1.0 - p.angle_sum_residual.value, p.angle_sum_residual.std_error}, {1.0, 0.0});
    // Both sides share one set of face angles, so only rounding separates them.
    for (int i = 1; i <= n; ++i) compare(rows, name, "transfer", i, p.lambda_loc[i], {ms.value[static_cast<std::size_t>(i)], 0.0});
    PolyUnion u({cone});
    for (int j = 1; j <= n; ++j) {
        McEstimate e = sigma_mc(u, j, mc);
        compare(rows, name, "sigma_mc", j, p.sigma[j], {e.value, e.std_error});
    }
    Body body = union_in_unit_ball(u);
    for (int i = 0; i <= n; ++i) {
        McEstimate e = crofton_lambda_mc(body, i, mc);
        Uncertain l = p.lambda_loc[i];
        compare(rows, name, "crofton", i, {alpha(i) * l.value, alpha(i) * l.std_error}, {e.value, e.std_error});
    }
    auto fit = steiner_fit_mc(body, mc);
    for (int i = 0; i <= n; ++i) {
        const auto& e = fit[static_cast<std::size_t>(i)];
        compare(rows, name, "steiner", i, p.lambda_loc[i], {e.value / alpha(i), e.std_error / alpha(i)});
    }
}

void verify_union(const std::string& name, const PolyUnion& u, const McConfig& mc, const AngleConfig& angles,
                  std::vector<Comparison>& rows) {
    const int n = u.ambient_dim();
    Sequence closed = lambda_loc_union_closed(u, angles);
    Sequence ms = TransferMatrix(n).apply(sigma_mc_all(u, mc));
    for (int i = 1; i <= n; ++i) compare(rows, name, "transfer", i, closed[i], ms[i]);
    Body body = union_in_unit_ball(u);
    for (int i = 0; i <= n; ++i) {
        McEstimate e = crofton_lambda_mc(body, i, mc);
        compare(rows, name, "crofton", i, {alpha(i) * closed.value[static_cast<std::size_t>(i)],
                                           alpha(i) * closed.std_error[static_cast<std::size_t>(i)]},
                {e.value, e.std_error});
    }
    auto fit = steiner_fit_mc(body, mc);
    for (int i = 0; i <= n; ++i) {
        const auto& e = fit[static_cast<std::size_t>(i)];
        compare(rows, name, "steiner", i, closed[i], {e.value / alpha(i), e.std_error / alpha(i)});
    }
}

void verify_polytope(const std::string& name, const Polytope& p, const McConfig& mc, const AngleConfig& angles,
                     std::vector<Comparison>& rows) {
    const int n = p.ambient_dim();
    Sequence lam = polytope_intrinsic_volumes(p, angles);
    Body body = polytope_body(p);
    for (int i = 0; i <= n; ++i) {
        McEstimate e = crofton_lambda_mc(body, i, mc);
        compare(rows, name, "crofton", i, lam[i], {e.value, e.std_error});
    }
    auto fit = steiner_fit_mc(body, mc);
    for (int i = 0; i <= n; ++i) {
        const auto& e = fit[static_cast<std::size_t>(i)];
        compare(rows, name, "steiner", i, lam[i], {e.value, e.std_error});
    }
}

std::string verify_report(const std::vector<Comparison>& rows) {
    std::ostringstream out;
    char line[256];
    std::snprintf(line, sizeof line, "%-16s %-9s %3s %20s %20s %12s %9s  %s\n", "object", "check", "i", "closed",
                  "oracle", "stderr", "z", "status");
    out << line;
    int failed = 0;
    for (const auto& r : rows) {
        double z = r.z();
        if (!r.passed()) ++failed;
        std::snprintf(line, sizeof line, "%-16s %-9s %3d %20.12g %20.12g %12.4g %9.3f  %s\n", r.object.c_str(),
                      r.check.c_str(), r.index, r.closed, r.oracle, r.std_error, z, r.passed() ? "ok" : "FAIL");
        out << line;
    }
    out << rows.size() << " comparisons, " << failed << " failed (|z| > " << kZLimit << ")\n";
    return out.str();
}

int cmd_verify(const std::string& file, std::int64_t samples, std::uint64_t seed, const std::string& report,
               std::ostream& out) {
    SceneFile scene = load_scene(file);
    std::vector<Comparison> rows;
    for (std::size_t k = 0; k < scene.objects.size(); ++k) {
        const SceneObject& o = scene.objects[k];
        McConfig mc;
        mc.samples = samples;
        mc.seed = object_seed(seed, k);
        mc.validate();
        AngleConfig angles{samples, mc.seed, 0, false};
        if (const auto* cone = std::get_if<ConvexCone>(&o.geometry)) verify_cone(o.name, *cone, mc, angles, rows);
        else if (const auto* u = std::get_if<PolyUnion>(&o.geometry)) verify_union(o.name, *u, mc, angles, rows);
        else verify_polytope(o.name, std::get<Polytope>(o.geometry), mc, angles, rows);
    }
    std::string text = verify_report(rows);
    out << text;
    if (!report.empty()) {
        std::ofstream f(report, std::ios::binary);
        if (!f) throw SceneError(report + ": cannot write report");
        f << text;
    }
    bool ok = std::all_of(rows.begin(), rows.end(), [](const Comparison& c) { return c.passed(); });
    return ok ? kExitOk : kExitVerifyFailed;
}

//---------------------------------------------------------------------------//
// matrix, polytope, sample
//---------------------------------------------------------------------------//

int cmd_matrix(int n, std::ostream& out) {
    TransferMatrix m(n);
    for (int i = 1; i <= n; ++i)
        for (int j = i; j <= n; ++j) out << "m_" << i << '^' << j << " = " << fmt("%.15g", m(i, j)) << '\n';
    return kExitOk;
}

int cmd_polytope(const std::string& file, const std::string& object, std::ostream& out) {
    SceneFile scene = load_scene(file);
    const SceneObject* o = scene.find(object);
    if (!o) throw SceneError(file + ": no object named \"" + object + "\"");
    const auto* p = std::get_if<Polytope>(&o->geometry);
    if (!p) throw SceneError(file + ":" + std::to_string(o->line) + ": \"" + object + "\" is not a polytope");
    Sequence lam = polytope_intrinsic_volumes(*p);
    std::vector<double> coeffs = steiner_coefficients(lam.value);
    char line[128];
    out << o->name << " (polytope, n=" << p->ambient_dim() << ", dim=" << p->dim() << ")\n";
    out << "  intrinsic volumes\n";
    for (int i = 0; i < lam.size(); ++i) {
        std::snprintf(line, sizeof line, "    Lambda_%d = %.15g\n", i, lam.value[static_cast<std::size_t>(i)]);
        out << line;
    }
    out << "  Steiner polynomial coefficients\n";
    for (std::size_t k = 0; k < coeffs.size(); ++k) {
        std::snprintf(line, sizeof line, "    r^%zu: %.15g\n", k, coeffs[k]);
        out << line;
    }
    return kExitOk;
}

int cmd_sample(int n, int generators, int count, std::uint64_t seed, const std::string& path, std::ostream& out) {
    if (n < 1 || generators < 1 || count < 0) throw SceneError("sample: need --dim >= 1, --generators >= 1, --count >= 0");
    SceneFile scene;
    for (int c = 0; c < count; ++c) {
        RngStream rng(seed, static_cast<std::uint64_t>(c));
        Vector center = rng.unit_vector(n);
        std::vector<Vector> gens;
        // Reflect into the open half-space around a random center so the cone is pointed.
        while (static_cast<int>(gens.size()) < generators) {
            Vector g = rng.gaussian(n);
            double t = g.dot(center);
            if (std::abs(t) < 1e-3 * g.norm()) continue;
            if (t < 0) g -= 2.0 * t * center;
            gens.push_back(g);
        }
        scene.objects.push_back(make_object("cone_" + std::to_string(c + 1), ObjectKind::cone, n, {gens}));
    }
    std::string text = save_scene(scene);
    if (path.empty() || path == "-") {
        out << text;
    } else {
        std::ofstream f(path, std::ios::binary);
        if (!f) throw SceneError(path + ": cannot write file");
        f << text;
    }
    return kExitOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Lipschitz-Killing curvatures and polar invariants of polyhedral germs", "lkpolar"};
    app.require_subcommand(1);

    std::string file, object, format = "table", report, sample_out;
    std::int64_t samples = 200000;
    std::uint64_t seed = 0;
    int dim = 0, generators = 0, count = 1;

    auto* inv = app.add_subcommand("invariants", "sigma, Lambda^loc and face contributions");
    inv->add_option("file", file, "scene file")->required();
    inv->add_option("--object", object, "restrict to one object");
    inv->add_option("--samples", samples, "Monte-Carlo samples per angle or estimate");
    inv->add_option("--seed", seed, "random seed");
    inv->add_option("--format", format, "output format")->check(CLI::IsMember({"json", "csv", "table"}));

    auto* ver = app.add_subcommand("verify", "compare closed forms with every Monte-Carlo oracle");
    ver->add_option("file", file, "scene file")->required();
    ver->add_option("--samples", samples, "samples per oracle");
    ver->add_option("--seed", seed, "random seed");
    ver->add_option("--report", report, "also write the report to this path");

    auto* mat = app.add_subcommand("matrix", "transfer matrix entries m_i^j");
    mat->add_option("--dim", dim, "dimension n")->required()->check(CLI::Range(1, 64));

    auto* pol = app.add_subcommand("polytope", "intrinsic volumes and Steiner coefficients of a polytope");
    pol->add_option("file", file, "scene file")->required();
    pol->add_option("--object", object, "polytope name")->required();

    auto* smp = app.add_subcommand("sample", "random pointed cones as a scene file");
    smp->add_option("--dim", dim, "ambient dimension")->required();
    smp->add_option("--generators", generators, "generators per cone")->required();
    smp->add_option("--count", count, "number of cones");
    smp->add_option("--seed", seed, "random seed");
    smp->add_option("--out", sample_out, "output path (stdout when omitted)");

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e, out, err);
        return code == 0 ? kExitOk : kExitInput;
    }

    try {
        if (inv->parsed()) return cmd_invariants(file, object, samples, seed, format, out);
        if (ver->parsed()) return cmd_verify(file, samples, seed, report, out);
        if (mat->parsed()) return cmd_matrix(dim, out);
        if (pol->parsed()) return cmd_polytope(file, object, out);
        if (smp->parsed()) return cmd_sample(dim, generators, count, seed, sample_out, out);
    } catch (const SceneError& e) {
        err << "error: " << e.what() << '\n';
        return kExitInput;
    } catch (const Error& e) {
        err << "error: " << e.what() << '\n';
        return e.is_numerical() ? kExitNumerical : kExitInput;
    }
    return kExitInput;
}

}  // namespace lkpolar::cli
