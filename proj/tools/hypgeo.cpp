// Batch driver: form families, hyperbolic geometry demos and graph counts.
//
// Exit codes: 0 success, 1 a verification failed, 2 usage error.

#include "hypgeo/glueing.hpp"
#include "hypgeo/io.hpp"
#include "hypgeo/qforms.hpp"
#include "hypgeo/svg.hpp"
#include "hypgeo/voronoi.hpp"
#include "hypgeo/voronoi_scenes.hpp"

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

namespace fs = std::filesystem;
using hypgeo::io::Csv;
using hypgeo::io::fmt;
using json = nlohmann::ordered_json;

namespace {

constexpr const char* kVersion = "0.1.0";

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Output directory plus the manifest describing one run.
class Run {
public:
    Run(std::string command, const std::string& dir, std::uint64_t seed) : dir_(dir) {
        manifest_["tool"] = "hypgeo";
        manifest_["version"] = kVersion;
        manifest_["command"] = std::move(command);
        manifest_["seed"] = seed;
        manifest_["parameters"] = json::object();
        manifest_["outputs"] = json::array();
        fs::create_directories(dir_);
    }

    template <class T>
    void param(const std::string& key, const T& value) {
        manifest_["parameters"][key] = value;
    }

    void result(const std::string& key, const json& value) { manifest_["results"][key] = value; }

    void write(const std::string& name, const std::string& content) {
        std::ofstream out(dir_ / name, std::ios::binary);
        if (!out) throw std::runtime_error("cannot write " + (dir_ / name).string());
        out << content;
        manifest_["outputs"].push_back(name);
    }

    void finish() {
        std::ofstream out(dir_ / "manifest.json", std::ios::binary);
        out << manifest_.dump(2) << "\n";
    }

private:
    fs::path dir_;
    json manifest_;
};

std::vector<double> parse_list(const std::string& s) {
    std::vector<double> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) {
        try {
            std::size_t used = 0;
            out.push_back(std::stod(item, &used));
            if (used != item.size()) throw std::invalid_argument(item);
        } catch (const std::exception&) {
            throw UsageError("not a number: '" + item + "'");
        }
    }
    if (out.empty()) throw UsageError("empty list");
    return out;
}

/// Splices values from a JSON config file into argv for options not given explicitly.
std::vector<std::string> apply_config(std::vector<std::string> args) {
    std::string path;
    for (std::size_t i = 0; i < args.size(); ++i) {
        if (args[i] == "--config" && i + 1 < args.size()) path = args[i + 1];
        else if (args[i].rfind("--config=", 0) == 0) path = args[i].substr(9);
    }
    if (path.empty()) return args;
    std::ifstream in(path);
    if (!in) throw UsageError("cannot read config file " + path);
    json cfg;
    try {
        cfg = json::parse(in);
    } catch (const json::exception& e) {
        throw UsageError("config file " + path + ": " + e.what());
    }
    if (!cfg.is_object()) throw UsageError("config file must hold a JSON object");
    for (const auto& [key, value] : cfg.items()) {
        const std::string flag = "--" + key;
        bool given = false;
        for (const auto& a : args) given = given || a == flag || a.rfind(flag + "=", 0) == 0;
        if (given) continue;
        if (value.is_boolean()) {
            if (value.get<bool>()) args.push_back(flag);
        } else if (value.is_array()) {
            std::string joined;
            for (const auto& v : value) joined += (joined.empty() ? "" : ",") + (v.is_string() ? v.get<std::string>() : v.dump());
            args.push_back(flag);
            args.push_back(joined);
        } else {
            args.push_back(flag);
            args.push_back(value.is_string() ? value.get<std::string>() : value.dump());
        }
    }
    return args;
}

// ---------------------------------------------------------------------------
// forms

int forms_family(Run& run, int n, const std::string& field_name) {
    const auto field = hypgeo::parse_field(field_name);
    const auto family = hypgeo::build_counting_family(static_cast<std::size_t>(n), field);
    Csv forms({"label", "prime", "coefficients", "discriminant", "admissible"});
    bool ok = true;
    for (const auto& m : family.members) {
        const bool adm = hypgeo::is_admissible(m.form);
        ok = ok && adm;
        forms.add({m.label, m.prime.to_string(), hypgeo::io::coefficient_list(m.form), m.form.discriminant().to_string(), adm ? "true" : "false"});
    }
    Csv certs({"first", "second", "verdict", "reason"});
    for (std::size_t i = 0; i < family.members.size(); ++i)
        for (std::size_t j = i + 1; j < family.members.size(); ++j) {
            const auto c = hypgeo::equivalence_certificate(family.members[i].form, family.members[j].form);
            ok = ok && c.non_equivalent();
            certs.add({family.members[i].label, family.members[j].label, c.non_equivalent() ? "non-equivalent" : "unknown", c.reason});
        }
    run.write("forms_family.csv", forms.str());
    run.write("forms_certificates.csv", certs.str());
    run.result("base", hypgeo::io::to_json(family.base));
    run.result("all_admissible_and_separated", ok);
    std::cout << "base form " << family.base.to_string() << " over " << hypgeo::field_name(field) << "\n" << forms.str();
    return ok ? 0 : 1;
}

int forms_check(Run& run, const std::string& coeffs, const std::string& field_name) {
    const auto field = hypgeo::parse_field(field_name);
    const auto f = hypgeo::DiagonalForm::parse(coeffs, field);
    const bool adm = hypgeo::is_admissible(f);
    Csv csv({"field", "coefficients", "embedding", "positives", "negatives", "admissible"});
    for (auto e : hypgeo::embeddings(field)) {
        const auto s = hypgeo::signature_at(f, e);
        csv.add({hypgeo::field_name(field), hypgeo::io::coefficient_list(f), e == hypgeo::Embedding::Identity ? "identity" : "sigma",
                 std::to_string(s.positives), std::to_string(s.negatives), adm ? "true" : "false"});
    }
    run.write("forms_check.csv", csv.str());
    run.result("admissible", adm);
    std::cout << "form " << f.to_string() << " over " << hypgeo::field_name(field) << ": admissible=" << (adm ? "true" : "false") << "\n";
    return adm ? 0 : 1;
}

// ---------------------------------------------------------------------------
// geom

const char* kSurfaceColors[] = {"#1f5fbf", "#bf3f1f"};

int geom_admissible(Run& run, std::uint64_t seed, double delta, double len1, double len2, int cutoff) {
    using namespace hypgeo;
    using namespace hypgeo::scenes;
    std::mt19937_64 rng(seed);
    const TwoGeodesicScene scene = delta > 0 ? two_geodesic_scene(delta, len1, len2) : random_two_geodesic_scene(rng);
    run.param("delta_used", scene.delta);
    run.param("len1_used", scene.len1);
    run.param("len2_used", scene.len2);
    if (!ping_pong_valid(scene)) std::cerr << "warning: ping-pong condition fails; the group may not be discrete\n";

    const AdmissibleSet sparse = sparse_set(scene);
    const AdmissibleSet built = build_admissible_set(scene.surfaces, scene.group, cutoff);
    const auto sparse_rep = is_admissible(sparse, scene.group, cutoff);
    const auto built_rep = is_admissible(built, scene.group, cutoff);
    const RealForm f = plane();

    svg::Document doc("admissible point sets on two closed geodesics");
    doc.disk();
    Csv csv({"set", "kind", "surface", "disk_x", "disk_y", "admissible", "min_gap"});
    for (std::size_t i = 0; i < scene.surfaces.size(); ++i) {
        svg::geodesic(doc, f, scene.surfaces[i].lift, kSurfaceColors[i], 0.008);
        for (std::size_t l = 0; l < scene.group.letter_count(); ++l) {
            const Hyperplane moved = make_hyperplane(f, scene.group.letter(static_cast<int>(l)) * scene.surfaces[i].lift.normal);
            svg::geodesic(doc, f, moved, kSurfaceColors[i], 0.003);
        }
    }
    auto emit = [&](const char* name, const AdmissibleSet& set, const AdmissibilityReport& rep, double radius) {
        for (const auto& p : set.points) {
            const auto d = svg::to_disk(f, p.point);
            doc.point(d, kSurfaceColors[p.surface], radius);
            csv.add({name, "point", std::to_string(p.surface), fmt(d[0]), fmt(d[1]), rep.admissible ? "true" : "false", fmt(rep.min_gap)});
        }
        if (rep.witness) {
            const auto d = svg::to_disk(f, *rep.witness);
            doc.circle(d, 0.03, "#e08000", "none", 0.006);
            csv.add({name, "witness", std::to_string(rep.witness_surface), fmt(d[0]), fmt(d[1]), "false", fmt(rep.min_gap)});
        }
    };
    emit("built", built, built_rep, 0.012);
    emit("sparse", sparse, sparse_rep, 0.025);
    run.write("admissible.svg", doc.str());
    run.write("admissible.csv", csv.str());
    const bool ok = !sparse_rep.admissible && built_rep.admissible;
    run.result("sparse_admissible", sparse_rep.admissible);
    run.result("built_admissible", built_rep.admissible);
    run.result("built_points", built.points.size());
    std::cout << "separation delta=" << fmt(scene.delta) << " lengths " << fmt(scene.len1) << ", " << fmt(scene.len2) << "\n"
              << "sparse set: " << (sparse_rep.admissible ? "admissible" : "not admissible (witness found)") << "\n"
              << "built set (" << built.points.size() << " points): " << (built_rep.admissible ? "admissible" : "not admissible") << "\n";
    return ok ? 0 : 1;
}

int geom_nesting(Run& run, double angle, double len_h, double len_v, int cutoff, bool threshold, double lo, double hi) {
    using namespace hypgeo;
    using namespace hypgeo::scenes;
    const NestingScene s = nesting_scene(angle, len_h, len_v, cutoff);
    const RealForm f = plane();

    std::optional<std::pair<std::size_t, std::size_t>> wa, wb;
    if (s.report.nested_witness) {
        wa = s.report.nested_witness->first;
        wb = s.report.nested_witness->second;
    }
    svg::Document doc("Dirichlet domains of two translation axes");
    doc.disk();
    svg::geodesic(doc, f, line_through_origin(0), "#888888", 0.003);
    svg::geodesic(doc, f, line_through_origin(degrees(angle)), "#888888", 0.003);
    Csv csv({"cell", "halfspace", "word", "type", "x0", "y0", "x1", "y1", "in_domain", "nested"});
    const char* colors[] = {"#1f5fbf", "#bf3f1f"};
    for (std::size_t c = 0; c < s.cells.size(); ++c) {
        const auto& cell = s.cells[c];
        const auto segs = facet_segments_2d(f, cell.center, cell.plain_halfspaces());
        for (std::size_t k = 0; k < segs.size(); ++k) {
            if (!segs[k]) continue;
            const auto& h = cell.halfspaces[k];
            const auto a = svg::to_disk(f, segs[k]->endpoints[0]), b = svg::to_disk(f, segs[k]->endpoints[1]);
            bool in_domain = false;
            for (const auto& df : s.domain.facets) in_domain = in_domain || (df.cell == c && df.halfspace == k);
            const bool nested = (wa && *wa == std::make_pair(c, k)) || (wb && *wb == std::make_pair(c, k));
            svg::geodesic_segment(doc, f, h.halfspace.plane, a, b, nested ? "#e08000" : colors[c], in_domain ? 0.009 : 0.004);
            std::string type = "unclassified";
            for (const auto& fc : cell.facets)
                if (fc.halfspace == k) type = to_string(fc.type);
            csv.add({c == 0 ? "H" : "V", std::to_string(k), word_to_string(h.word), type, fmt(a[0]), fmt(a[1]), fmt(b[0]), fmt(b[1]),
                     in_domain ? "true" : "false", nested ? "true" : "false"});
        }
    }
    doc.point({0, 0}, "#000000");
    run.write("nesting.svg", doc.str());
    run.write("nesting.csv", csv.str());

    std::string verdict;
    if (s.report.passed && s.report.torsion_free) verdict = "no nesting, Poincaré pass";
    else if (s.report.nested_witness) verdict = "nested pair found";
    else verdict = "Poincaré fail";
    run.result("verdict", verdict);
    run.result("poincare_passed", s.report.passed);
    run.result("failures", s.report.failures);
    std::cout << "verdict: " << verdict << "\n";
    for (const auto& why : s.report.failures) std::cout << "  " << why << "\n";
    if (threshold) {
        const double t = bisect_threshold(angle, len_h, lo, hi);
        run.result("threshold_len_v", t);
        std::cout << "threshold V-length for angle " << fmt(angle) << ", H-length " << fmt(len_h) << ": " << fmt(t) << "\n";
    }
    return 0;
}

int geom_shrink(Run& run, const std::string& r_list, double length, int cutoff) {
    using namespace hypgeo;
    using namespace hypgeo::scenes;
    const auto rs = parse_list(r_list);
    const ShrinkReport rep = sphere_shrink_report(rs, length, cutoff);
    const RealForm f = plane();

    Csv table({"R", "first_radius", "second_radius", "first_count", "second_count"});
    for (const auto& r : rep.rows)
        table.add({fmt(r.R), fmt(r.first_radius), fmt(r.second_radius), std::to_string(r.first_count), std::to_string(r.second_count)});
    Csv facets({"R", "word", "type", "radius"});
    for (const auto& fc : rep.facets) facets.add({fmt(fc.R), fc.word, to_string(fc.type), fmt(fc.radius)});

    svg::Document doc("boundary circles of first- and second-type facets");
    doc.disk();
    svg::geodesic(doc, f, line_through_origin(0), "#888888", 0.003);
    for (double R : rs) {
        GroupData g(f, {translation_through_origin(0, length), translation_through_origin(std::numbers::pi / 2, R)}, {line_through_origin(0)}, R,
                    line_through_origin(0));
        CellOptions opts;
        opts.region_radius = std::numeric_limits<double>::infinity();
        const auto cell = classify_facets(dirichlet_cell(origin(), build_orbit({origin()}, g, cutoff), opts), g.marked());
        for (const auto& fc : cell.facets) {
            const auto& plane_h = cell.halfspaces[fc.halfspace].halfspace.plane;
            svg::geodesic(doc, f, plane_h, fc.type == FacetType::First ? "#1f5fbf" : "#bf3f1f", 0.004);
        }
    }
    run.write("shrink.svg", doc.str());
    run.write("shrink.csv", table.str());
    run.write("shrink_facets.csv", facets.str());
    run.result("second_decreasing", rep.second_decreasing);
    run.result("first_constant", rep.first_constant);
    run.result("min_ratio", rep.rows.size() > 1 ? json(rep.min_ratio) : json(nullptr));
    std::cout << table.str();
    const bool ok = rep.second_decreasing && rep.first_constant;
    std::cout << (ok ? "second-type radii decrease, first-type radii constant\n" : "shrinking pattern violated\n");
    return ok ? 0 : 1;
}

int geom_extension(Run& run, std::uint64_t seed, double len, double q, int samples) {
    using namespace hypgeo;
    using namespace hypgeo::scenes;
    const RealForm f = plane();
    GroupData g(f, {translation_through_origin(0, len)}, {line_through_origin(0)});
    const auto cell = classify_facets(dirichlet_cell(origin(), build_orbit({origin()}, g, 3)), g.marked());
    const auto ext = orthogonal_extension(cell, q);
    std::vector<Hyperplane> marked_ext;
    for (const auto& m : g.marked()) {
        Vec<double> n = m.normal;
        n.push_back(0.0);
        marked_ext.push_back({n});
    }
    const auto reclassified = classify_facets(ext, marked_ext);
    const auto rep = boundary_copies_check(ext, cell, static_cast<std::size_t>(samples), seed);

    svg::Document doc("boundary spheres of the extended cell seen from the pole");
    doc.disk();
    Csv csv({"word", "type", "extended_type", "center_x", "center_y", "radius"});
    bool types_agree = true;
    for (std::size_t i = 0; i < ext.facets.size(); ++i) {
        const auto& h = ext.halfspaces[ext.facets[i].halfspace];
        const auto sphere = boundary_sphere(ext.form, h.halfspace.plane);
        types_agree = types_agree && reclassified.facets[i].type == cell.facets[i].type;
        if (sphere.flat) {
            doc.line({-sphere.normal[1], sphere.normal[0]}, {sphere.normal[1], -sphere.normal[0]}, "#bf3f1f");
            csv.add({word_to_string(h.word), to_string(cell.facets[i].type), to_string(reclassified.facets[i].type), "0", "0", "inf"});
        } else {
            doc.circle({sphere.center[0], sphere.center[1]}, sphere.radius, "#bf3f1f");
            csv.add({word_to_string(h.word), to_string(cell.facets[i].type), to_string(reclassified.facets[i].type), fmt(sphere.center[0]),
                     fmt(sphere.center[1]), fmt(sphere.radius)});
        }
    }
    svg::geodesic(doc, f, line_through_origin(0), "#1f5fbf", 0.006);
    run.write("extension.svg", doc.str());
    run.write("extension.csv", csv.str());
    run.result("samples", rep.samples);
    run.result("in_upper", rep.in_upper);
    run.result("in_lower", rep.in_lower);
    run.result("mismatches", rep.mismatches);
    run.result("types_agree", types_agree);
    std::cout << "ideal samples " << rep.samples << ": upper copy " << rep.in_upper << ", lower copy " << rep.in_lower << ", mismatches "
              << rep.mismatches << "\n"
              << "facet types " << (types_agree ? "inherited" : "changed") << " under extension\n";
    return rep.mismatches == 0 && types_agree ? 0 : 1;
}

// ---------------------------------------------------------------------------
// count

int count(Run& run, std::uint64_t seed, int m_max, const std::string& mode_name, bool check, int dump, const std::string& weights) {
    using namespace hypgeo;
    const LabelMode mode = parse_label_mode(mode_name);
    if (m_max > kMaxExhaustiveVertices)
        throw UsageError("--m-max " + std::to_string(m_max) + " is beyond the exhaustive bound " + std::to_string(kMaxExhaustiveVertices));
    std::array<double, 6> w{1, 1, 1, 1, 1, 1};
    if (!weights.empty()) {
        const auto ws = parse_list(weights);
        if (ws.size() != 6) throw UsageError("--weights needs six values (a+,a-,b+,b-,u,v)");
        std::copy(ws.begin(), ws.end(), w.begin());
    }
    const TemplateSet templates(w);

    const CountTable table = count_graphs(m_max, mode);
    if (table.warning) std::cerr << "warning: " << *table.warning << "\n";
    run.write(std::string("counts_") + to_string(mode) + ".csv", io::count_table_csv(table));
    std::cout << io::count_table_csv(table);

    const auto fit_rows = fit_input(table);
    if (fit_rows.size() >= 3) {
        const GrowthFit fit = growth_fit(fit_rows);
        Csv csv({"m", "log_count", "residual"});
        for (std::size_t i = 0; i < fit_rows.size(); ++i)
            csv.add({std::to_string(fit_rows[i].first), fmt(log_mpz(fit_rows[i].second)), fmt(fit.residuals[i])});
        run.write(std::string("growth_") + to_string(mode) + ".csv", csv.str());
        run.result("growth_c", fit.c);
        run.result("growth_intercept", fit.intercept);
        std::cout << "growth fit: log(count) = " << fmt(fit.c) << " m log m + " << fmt(fit.intercept) << (fit.positive ? "" : " (c not positive)")
                  << "\n";
    } else {
        std::cout << "growth fit skipped: " << fit_rows.size() << " nonzero rows (3 needed)\n";
    }

    if (dump > 0)
        for (int m = kMinVertices; m <= m_max; ++m) {
            std::string text = "[";
            for (const auto& g : enumerate_graphs(m, mode, static_cast<std::size_t>(dump))) text += (text.size() > 1 ? ",\n " : "\n ") + io::to_json(g).dump();
            run.write("graphs_m" + std::to_string(m) + "_" + to_string(mode) + ".json", text + "\n]\n");
        }

    bool ok = true;
    if (check) {
        // every base graph and root; all proper labellings, or one seeded labelling per rooted graph in free mode
        std::mt19937_64 rng(seed);
        Csv csv({"m", "assemblies", "closed", "non_orientable", "cover_orientable", "cover_volume_doubled"});
        for (int m = kMinVertices; m <= std::min(m_max, 7); ++m) {
            std::uint64_t n = 0, closed = 0, non_or = 0, cover_or = 0, doubled = 0;
            auto check_one = [&](const GlueingGraph& g) {
                const auto M = assemble(g, templates);
                ++n;
                const bool c = is_closed(M) && M.pairings.size() == static_cast<std::size_t>(4 * m);
                closed += c;
                if (!c) return;
                non_or += !is_orientable(M);
                const auto C = orientation_double_cover(M);
                cover_or += is_orientable(C);
                doubled += std::abs(volume(C) - 2 * volume(M)) <= 1e-12 * volume(M);
            };
            for (const auto& base : enumerate_base_graphs(m)) {
                GlueingGraph g{m, base_edges(base), {}, 0, mode};
                const auto proper = mode == LabelMode::Proper ? proper_labelings(base) : std::vector<std::vector<PieceLabel>>{};
                for (int root = 0; root < m; ++root) {
                    g.root = root;
                    if (mode == LabelMode::Proper) {
                        for (const auto& labels : proper) {
                            g.labels = labels;
                            check_one(g);
                        }
                    } else {
                        g.labels.clear();
                        for (std::size_t e = 0; e < g.edges.size(); ++e) g.labels.push_back(kEdgeLabels[rng() % 4]);
                        check_one(g);
                    }
                }
            }
            ok = ok && closed == n && non_or == n && cover_or == n && doubled == n;
            csv.add({std::to_string(m), std::to_string(n), std::to_string(closed), std::to_string(non_or), std::to_string(cover_or),
                     std::to_string(doubled)});
        }
        run.write(std::string("assemblies_") + to_string(mode) + ".csv", csv.str());
        run.result("assemblies_ok", ok);
        std::cout << csv.str() << (ok ? "all assemblies closed and non-orientable; covers orientable with doubled volume\n"
                                      : "assembly check failed\n");
    }
    return ok ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"hypgeo: admissible forms, hyperbolic Dirichlet domains and piece-glueing counts"};
    app.require_subcommand(1);
    app.set_version_flag("--version", kVersion);

    std::string out_dir = "hypgeo-out", config;
    std::uint64_t seed = 1;
    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--out", out_dir, "output directory")->capture_default_str();
        sub->add_option("--seed", seed, "seed for randomized choices")->capture_default_str();
        sub->add_option("--config", config, "JSON file with option values");
    };

    auto* forms = app.add_subcommand("forms", "admissible quadratic forms");
    forms->require_subcommand(1);
    int n = 0;
    std::string field = "Q", coeffs;
    auto* family = forms->add_subcommand("family", "the six-form counting family");
    family->add_option("--n", n, "hyperbolic dimension")->required()->check(CLI::Range(2, 64));
    family->add_option("--field", field, "Q or Q(sqrt2)")->capture_default_str();
    add_common(family);
    auto* check = forms->add_subcommand("check", "admissibility of one diagonal form");
    check->add_option("--coeffs", coeffs, "comma-separated coefficients, e.g. -r2,1,1")->required();
    check->add_option("--field", field, "Q or Q(sqrt2)")->capture_default_str();
    add_common(check);

    auto* geom = app.add_subcommand("geom", "hyperbolic geometry demos");
    geom->require_subcommand(1);
    double delta = 0, len1 = 6, len2 = 6;
    int cutoff = 3;
    auto* adm = geom->add_subcommand("admissible", "admissible point sets on two closed geodesics");
    adm->add_option("--delta", delta, "distance between the geodesics (random in [0.5,1] when omitted)");
    adm->add_option("--len1", len1, "length of the first geodesic")->capture_default_str();
    adm->add_option("--len2", len2, "length of the second geodesic")->capture_default_str();
    adm->add_option("--cutoff", cutoff, "word length cutoff")->capture_default_str();
    add_common(adm);

    double angle = 90, len_h = 1, len_v = 6, lo = 0.5, hi = 8;
    bool threshold = false;
    auto* nest = geom->add_subcommand("nesting", "Dirichlet domains of two translation axes");
    nest->add_option("--angle", angle, "angle between the axes in degrees")->capture_default_str();
    nest->add_option("--lenH", len_h, "translation length along H")->capture_default_str();
    nest->add_option("--lenV", len_v, "translation length along V")->capture_default_str();
    nest->add_option("--cutoff", cutoff, "word length cutoff")->capture_default_str();
    nest->add_flag("--threshold", threshold, "also bisect the passing V-length threshold");
    nest->add_option("--lo", lo, "lower bracket for --threshold")->capture_default_str();
    nest->add_option("--hi", hi, "upper bracket for --threshold")->capture_default_str();
    add_common(nest);

    std::string r_list = "2,4,8,16";
    double fixed_length = 2;
    int shrink_cutoff = 2;
    auto* shrink = geom->add_subcommand("shrink", "boundary circles as the vertical translation grows");
    shrink->add_option("--R", r_list, "increasing vertical translation lengths")->capture_default_str();
    shrink->add_option("--length", fixed_length, "horizontal translation length")->capture_default_str();
    shrink->add_option("--cutoff", shrink_cutoff, "word length cutoff")->capture_default_str();
    add_common(shrink);

    double ext_len = 1.5, q = 2;
    int samples = 4000;
    auto* ext = geom->add_subcommand("extension", "orthogonal extension of a strip cell");
    ext->add_option("--lenH", ext_len, "translation length of the base strip")->capture_default_str();
    ext->add_option("--q", q, "coefficient of the added direction")->capture_default_str();
    ext->add_option("--samples", samples, "ideal points sampled")->capture_default_str()->check(CLI::PositiveNumber);
    add_common(ext);

    int m_max = 0, dump = 0;
    std::string mode = "free", weights;
    bool check_assemblies = false;
    auto* cnt = app.add_subcommand("count", "exhaustive counts of rooted labelled glueing graphs");
    cnt->add_option("--m-max", m_max, "largest vertex count")->required();
    cnt->add_option("--mode", mode, "proper or free")->capture_default_str()->check(CLI::IsMember({"proper", "free"}));
    cnt->add_flag("--check-assemblies", check_assemblies, "assemble every graph with m <= 7 and check it");
    cnt->add_option("--dump-graphs", dump, "write the first N graphs per m as JSON")->capture_default_str();
    cnt->add_option("--weights", weights, "piece volume weights a+,a-,b+,b-,u,v");
    add_common(cnt);

    try {
        std::vector<std::string> args(argv + 1, argv + argc);
        args = apply_config(std::move(args));
        std::reverse(args.begin(), args.end());
        app.parse(args);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    } catch (const UsageError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }

    try {
        if (family->parsed()) {
            Run run("forms family", out_dir, seed);
            run.param("n", n);
            run.param("field", field);
            const int rc = forms_family(run, n, field);
            run.finish();
            return rc;
        }
        if (check->parsed()) {
            Run run("forms check", out_dir, seed);
            run.param("coeffs", coeffs);
            run.param("field", field);
            const int rc = forms_check(run, coeffs, field);
            run.finish();
            return rc;
        }
        if (adm->parsed()) {
            Run run("geom admissible", out_dir, seed);
            run.param("delta", delta);
            run.param("len1", len1);
            run.param("len2", len2);
            run.param("cutoff", cutoff);
            const int rc = geom_admissible(run, seed, delta, len1, len2, cutoff);
            run.finish();
            return rc;
        }
        if (nest->parsed()) {
            Run run("geom nesting", out_dir, seed);
            run.param("angle", angle);
            run.param("lenH", len_h);
            run.param("lenV", len_v);
            run.param("cutoff", cutoff);
            run.param("threshold", threshold);
            if (threshold) {
                run.param("lo", lo);
                run.param("hi", hi);
            }
            const int rc = geom_nesting(run, angle, len_h, len_v, cutoff, threshold, lo, hi);
            run.finish();
            return rc;
        }
        if (shrink->parsed()) {
            Run run("geom shrink", out_dir, seed);
            run.param("R", r_list);
            run.param("length", fixed_length);
            run.param("cutoff", shrink_cutoff);
            const int rc = geom_shrink(run, r_list, fixed_length, shrink_cutoff);
            run.finish();
            return rc;
        }
        if (ext->parsed()) {
            Run run("geom extension", out_dir, seed);
            run.param("lenH", ext_len);
            run.param("q", q);
            run.param("samples", samples);
            const int rc = geom_extension(run, seed, ext_len, q, samples);
            run.finish();
            return rc;
        }
        if (cnt->parsed()) {
            if (m_max > hypgeo::kMaxExhaustiveVertices) {
                std::cerr << "error: --m-max " << m_max << " is beyond the exhaustive bound " << hypgeo::kMaxExhaustiveVertices << "\n";
                return 2;
            }
            Run run("count", out_dir, seed);
            run.param("m_max", m_max);
            run.param("mode", mode);
            run.param("check_assemblies", check_assemblies);
            run.param("dump_graphs", dump);
            if (!weights.empty()) run.param("weights", weights);
            const int rc = count(run, seed, m_max, mode, check_assemblies, dump, weights);
            run.finish();
            return rc;
        }
    } catch (const UsageError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 2;
}
