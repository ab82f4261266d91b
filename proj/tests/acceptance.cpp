// Acceptance gate: one pass/fail line per criterion, nonzero exit if any fails.

#include "hypgeo/glueing.hpp"
#include "hypgeo/hyperboloid.hpp"
#include "hypgeo/io.hpp"
#include "hypgeo/numfield.hpp"
#include "hypgeo/qforms.hpp"
#include "hypgeo/voronoi.hpp"
#include "hypgeo/voronoi_scenes.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <sys/wait.h>
#include <unistd.h>
#include <vector>

using namespace hypgeo;
using namespace hypgeo::scenes;
namespace fs = std::filesystem;

namespace {

/// Collects failure notes for one criterion.
struct Check {
    std::vector<std::string> notes;
    void expect(bool ok, const std::string& what) {
        if (!ok && notes.size() < 5) notes.push_back(what);
        if (!ok) ++failures;
    }
    std::size_t failures = 0;
};

struct Criterion {
    int id;
    const char* name;
    double limit_seconds;
    std::function<void(Check&)> body;
};

QuadFieldElement random_element(std::mt19937_64& rng, FieldTag field) {
    std::uniform_int_distribution<long> num(-30, 30), den(1, 7);
    mpq_class a(num(rng), den(rng)), b(field == FieldTag::Rationals ? 0 : num(rng), den(rng));
    a.canonicalize();
    b.canonicalize();
    return {a, b, field};
}

// ---------------------------------------------------------------------------

void ac1_exact_algebra(Check& c) {
    std::mt19937_64 rng(101);
    const FieldTag k = FieldTag::RationalsSqrt2;
    const auto zero = QuadFieldElement::zero(k), one = QuadFieldElement::one(k);
    const DiagonalForm f = counting_base_form(2, k);
    const auto F = form_matrix(f);
    for (int i = 0; i < 10000; ++i) {
        const auto x = random_element(rng, k), y = random_element(rng, k), z = random_element(rng, k);
        switch (i % 4) {
            case 0:
                c.expect((x + y) + z == x + (y + z) && x * (y + z) == x * y + x * z && x * y == y * x, "ring axioms");
                break;
            case 1:
                c.expect(x.is_zero() || (x * x.inverse() == one && (y / x) * x == y), "inverses");
                c.expect(x - x == zero, "additive inverse");
                break;
            case 2:
                c.expect((x * y).conjugate() == x.conjugate() * y.conjugate() && (x + y).conjugate() == x.conjugate() + y.conjugate() &&
                             x.conjugate().conjugate() == x,
                         "conjugation is an involutive automorphism");
                break;
            case 3: {
                KVector v = {x, y, z};
                if (f.evaluate(v).sign_at(Embedding::Identity) <= 0) v = {zero, x.is_zero() ? one : x, y};
                const auto r = reflection(f, v);
                const auto id = Matrix<QuadFieldElement>::identity(3, zero, one);
                c.expect(r * r == id, "r_v^2 = I");
                c.expect(r.transpose() * F * r == F, "r_v^t F r_v = F");
                break;
            }
        }
    }
}

void ac2_admissible_forms(Check& c) {
    for (FieldTag k : {FieldTag::Rationals, FieldTag::RationalsSqrt2})
        for (std::size_t n = 2; n <= 8; ++n) {
            const std::string tag = field_name(k) + " n=" + std::to_string(n);
            c.expect(is_admissible(counting_base_form(n, k)), "f_n admissible " + tag);
            const auto fam = build_counting_family(n, k);
            c.expect(fam.members.size() == 6, "six members " + tag);
            for (std::size_t i = 0; i < fam.members.size(); ++i) {
                c.expect(is_admissible(fam.members[i].form), "member admissible " + tag);
                for (std::size_t j = i + 1; j < fam.members.size(); ++j)
                    c.expect(equivalence_certificate(fam.members[i].form, fam.members[j].form).non_equivalent(), "pairwise non-equivalent " + tag);
            }
        }
}

void ac3_restriction(Check& c) {
    std::mt19937_64 rng(303);
    std::uniform_int_distribution<long> d(-6, 6);
    int done = 0;
    const std::vector<DiagonalForm> forms = {counting_base_form(3, FieldTag::Rationals), counting_base_form(3, FieldTag::RationalsSqrt2),
                                             build_counting_family(3, FieldTag::RationalsSqrt2).members[2].form};
    while (done < 100) {
        const DiagonalForm& f = forms[static_cast<std::size_t>(done) % forms.size()];
        const FieldTag k = f.field();
        KVector v;
        for (std::size_t i = 0; i < f.dimension(); ++i) v.push_back(QuadFieldElement(d(rng), k == FieldTag::Rationals ? 0 : d(rng), k));
        if (f.evaluate(v).sign_at(Embedding::Identity) <= 0) continue;
        ++done;
        const auto r = restrict_to_orthogonal_with_basis(f, v);
        c.expect(is_admissible(r.form), "restriction admissible: " + r.form.to_string());
        for (std::size_t i = 0; i < r.basis.size(); ++i) {
            c.expect(f.bilinear(r.basis[i], v).is_zero(), "basis vector orthogonal to v");
            c.expect(f.evaluate(r.basis[i]) == r.form.coefficient(i), "basis realizes the restricted form");
            for (std::size_t j = i + 1; j < r.basis.size(); ++j) c.expect(f.bilinear(r.basis[i], r.basis[j]).is_zero(), "basis orthogonal");
        }
    }
}

void ac4_dirichlet_oracle(Check& c) {
    std::mt19937_64 rng(404);
    std::uniform_real_distribution<double> u(0, 1);
    const auto configs = desk_configurations();
    c.expect(configs.size() == 20, "twenty configurations");
    for (const auto& cfg : configs) {
        const OrbitSet orbit = build_orbit({cfg.seed}, cfg.group, cfg.cutoff);
        const VoronoiCell cell = dirichlet_cell(cfg.seed, orbit);
        const RealMatrix back = inverse_isometry(orbit.form, move_to_base_point(orbit.form, cfg.seed));
        const double rho = orbit.certification_radius;
        std::size_t disagreements = 0, inside = 0;
        for (int i = 0; i < 10000; ++i) {
            const Point x = back * polar_point(rho * std::sqrt(u(rng)), 2 * std::numbers::pi * u(rng));
            // brute force: nearest orbit point
            const double own = fast_distance(orbit.form, orbit.points[0].point, x);
            double other = INFINITY;
            for (std::size_t k = 1; k < orbit.points.size(); ++k) other = std::min(other, fast_distance(orbit.form, orbit.points[k].point, x));
            if (std::abs(own - other) <= 1e-9) continue;
            const bool want = own < other;
            inside += want;
            disagreements += cell.contains(x, 0.0) != want;
        }
        c.expect(disagreements == 0, cfg.name + ": " + std::to_string(disagreements) + " disagreements");
        c.expect(inside > 0, cfg.name + ": no sample inside the cell");
    }
}

void ac5_admissibility(Check& c) {
    std::mt19937_64 rng(505);
    for (int trial = 0; trial < 10; ++trial) {
        const auto scene = random_two_geodesic_scene(rng);
        const std::string tag = "trial " + std::to_string(trial);
        c.expect(ping_pong_valid(scene), tag + ": ping-pong");
        const auto sparse = is_admissible(sparse_set(scene), scene.group, 3);
        c.expect(!sparse.admissible && sparse.witness.has_value(), tag + ": sparse set should fail with a witness");
        const auto set = build_admissible_set(scene.surfaces, scene.group, 3);
        const auto delta = surface_separation(scene.surfaces, scene.group, 3);
        // spacing along each segment at most delta_i / 2
        for (std::size_t s = 0; s < scene.surfaces.size(); ++s) {
            std::size_t count = 0;
            for (const auto& p : set.points) count += p.surface == s;
            c.expect(count > 0 && scene.surfaces[s].length / static_cast<double>(count) <= delta[s] / 2 + 1e-12, tag + ": spacing");
        }
        c.expect(is_admissible(set, scene.group, 3).admissible, tag + ": built set should pass");
    }
}

void ac6_nesting(Check& c) {
    const double len_h = 1.0;
    const double threshold = bisect_threshold(90, len_h, 0.5, 8.0, 1e-6);
    const double analytic = 2 * std::asinh(1 / std::sinh(len_h / 2));
    c.expect(std::abs(threshold - analytic) < 1e-4, "threshold " + std::to_string(threshold) + " vs " + std::to_string(analytic));
    for (double above : {threshold + 0.25, threshold + 2.0}) {
        const auto s = nesting_scene(90, len_h, above);
        c.expect(s.report.passed && s.report.torsion_free, "orthogonal domain should pass Poincare at lenV=" + std::to_string(above));
        c.expect(!s.report.nested_witness.has_value(), "orthogonal: no nested pair");
    }
    const auto bad = nesting_scene(60, 0.3, 8.0);
    const auto again = nesting_scene(60, 0.3, 8.0);
    c.expect(!bad.report.passed, "oblique domain should fail");
    c.expect(bad.report.nested_witness.has_value(), "oblique: nested witness");
    if (bad.report.nested_witness) {
        const auto [a, b] = *bad.report.nested_witness;
        const auto kind = are_nested(plane(), bad.cells[a.first].halfspaces[a.second].halfspace, bad.cells[b.first].halfspaces[b.second].halfspace,
                                     origin())
                              .kind;
        c.expect(kind == Nesting::Nested, "witness pair is nested");
        c.expect(again.report.nested_witness == bad.report.nested_witness && again.report.failures == bad.report.failures, "deterministic");
    }
}

std::vector<std::vector<double>> read_csv_numbers(const fs::path& p) {
    std::ifstream in(p);
    std::string line;
    std::getline(in, line);
    std::vector<std::vector<double>> rows;
    while (std::getline(in, line)) {
        std::vector<double> row;
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) row.push_back(std::stod(cell));
        rows.push_back(row);
    }
    return rows;
}

void ac7_sphere_shrink(Check& c) {
    const auto rep = sphere_shrink_report({2, 4, 8, 16});
    c.expect(rep.rows.size() == 4, "four rows");
    c.expect(rep.second_decreasing, "second-type radii strictly decrease");
    for (std::size_t i = 1; i < rep.rows.size(); ++i)
        c.expect(rep.rows[i - 1].second_radius / rep.rows[i].second_radius >= 1.5, "step factor >= 1.5 at R=" + io::fmt(rep.rows[i].R));
    c.expect(rep.first_spread <= 1e-9, "first-type radii constant within 1e-9");
    const auto golden = read_csv_numbers(fs::path(HYPGEO_GOLDEN_DIR) / "shrink.csv");
    c.expect(golden.size() == rep.rows.size(), "golden row count");
    for (std::size_t i = 0; i < std::min(golden.size(), rep.rows.size()); ++i) {
        const auto& r = rep.rows[i];
        const double got[] = {r.R, r.first_radius, r.second_radius, static_cast<double>(r.first_count), static_cast<double>(r.second_count)};
        for (std::size_t k = 0; k < 5; ++k)
            c.expect(std::abs(got[k] - golden[i][k]) <= 1e-9 * std::max(1.0, std::abs(golden[i][k])), "golden value row " + std::to_string(i));
    }
}

/// Exhaustive bitmask oracle over all edge subsets of K_m.
std::set<std::vector<std::pair<int, int>>> oracle_base_graphs(int m) {
    std::vector<std::pair<int, int>> all;
    for (int i = 0; i < m; ++i)
        for (int j = i + 1; j < m; ++j) all.emplace_back(i, j);
    std::set<std::vector<std::pair<int, int>>> out;
    for (std::uint32_t mask = 0; mask < (1u << all.size()); ++mask) {
        if (std::popcount(mask) != 2 * m) continue;
        std::vector<int> deg(static_cast<std::size_t>(m), 0);
        std::vector<std::pair<int, int>> e;
        for (std::size_t k = 0; k < all.size(); ++k)
            if (mask >> k & 1u) {
                ++deg[static_cast<std::size_t>(all[k].first)];
                ++deg[static_cast<std::size_t>(all[k].second)];
                e.push_back(all[k]);
            }
        if (std::all_of(deg.begin(), deg.end(), [](int x) { return x == 4; })) out.insert(e);
    }
    return out;
}

void ac8_graph_counts(Check& c) {
    const std::uint64_t want[] = {1, 15, 465};
    for (int m = 5; m <= 7; ++m) {
        const auto bases = enumerate_base_graphs(m);
        std::set<std::vector<std::pair<int, int>>> got;
        for (const auto& b : bases) got.insert(base_edges(b));
        c.expect(got.size() == bases.size(), "no duplicates at m=" + std::to_string(m));
        c.expect(got == oracle_base_graphs(m), "matches bitmask oracle at m=" + std::to_string(m));
        c.expect(bases.size() == want[m - 5], "base count at m=" + std::to_string(m));
    }
    const auto table = count_graphs(7, LabelMode::Free);
    for (const auto& r : table.rows) {
        mpz_class expected = 1;
        for (int k = 0; k < 2 * r.m; ++k) expected *= 4;
        expected *= r.m;
        expected *= static_cast<unsigned long>(r.base_count);
        c.expect(r.rooted_labelled_count == expected, "free total at m=" + std::to_string(r.m));
    }
    const std::uint64_t streamed = for_each_graph(5, LabelMode::Free, [](const GlueingGraph&) { return true; });
    c.expect(mpz_class(static_cast<unsigned long>(streamed)) == table.rows.front().rooted_labelled_count, "m=5 free stream length");
}

void ac9_assemblies(Check& c) {
    std::mt19937_64 rng(909);
    const TemplateSet templates({1.0, 1.25, 1.5, 1.75, 2.0, 2.5});
    std::size_t checked = 0;
    auto check_one = [&](const GlueingGraph& g) {
        ++checked;
        const auto M = assemble(g, templates);
        c.expect(is_closed(M) && M.pairings.size() == static_cast<std::size_t>(4 * g.m), "closed with 4m pairings");
        c.expect(!is_orientable(M), "non-orientable");
        const auto C = orientation_double_cover(M);
        c.expect(is_orientable(C), "cover orientable");
        c.expect(std::abs(volume(C) - 2 * volume(M)) <= 1e-12 * volume(M), "cover volume doubled");
        return true;
    };
    for (int m = 5; m <= 6; ++m) {
        for_each_graph(m, LabelMode::Proper, check_one);
        // free labellings: every rooted base graph with 64 seeded labellings
        for (const auto& base : enumerate_base_graphs(m)) {
            GlueingGraph g{m, base_edges(base), {}, 0, LabelMode::Free};
            for (int root = 0; root < m; ++root) {
                g.root = root;
                for (int s = 0; s < 64; ++s) {
                    g.labels.clear();
                    for (std::size_t e = 0; e < g.edges.size(); ++e) g.labels.push_back(kEdgeLabels[rng() % 4]);
                    check_one(g);
                }
            }
        }
    }
    c.expect(checked > 0, "assemblies checked");
}

void ac10_growth(Check& c) {
    const auto fit = growth_fit(fit_input(count_graphs(7, LabelMode::Free)));
    c.expect(fit.c > 0, "c > 0");
    for (double r : fit.residuals) c.expect(std::abs(r) < 0.2, "residual " + std::to_string(r));
}

int run_cli(const std::string& args, const fs::path& out) {
    const std::string cmd = std::string(HYPGEO_CLI) + " " + args + " --out " + out.string() + " > /dev/null 2>&1";
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void ac11_determinism(Check& c) {
    const fs::path root = fs::temp_directory_path() / ("hypgeo-determinism-" + std::to_string(::getpid()));
    fs::remove_all(root);
    const std::vector<std::pair<std::string, std::string>> demos = {
        {"forms-family-q", "forms family --n 3 --field Q"},
        {"forms-family-r2", "forms family --n 4 --field 'Q(sqrt2)'"},
        {"forms-check", "forms check --coeffs -r2,1,1 --field 'Q(sqrt2)'"},
        {"admissible", "geom admissible --seed 11"},
        {"nesting-orthogonal", "geom nesting --angle 90 --lenH 1 --lenV 6 --threshold"},
        {"nesting-oblique", "geom nesting --angle 60 --lenH 0.3 --lenV 8"},
        {"shrink", "geom shrink --R 2,4,8,16"},
        {"extension", "geom extension --seed 11"},
        {"count-free", "count --m-max 7 --mode free --check-assemblies --dump-graphs 4 --seed 11"},
        {"count-proper", "count --m-max 8 --mode proper --check-assemblies --dump-graphs 4"},
    };
    for (const auto& [name, args] : demos) {
        const fs::path a = root / name / "first", b = root / name / "second";
        const int ra = run_cli(args, a), rb = run_cli(args, b);
        c.expect(ra == 0 && rb == 0, name + ": exit codes " + std::to_string(ra) + ", " + std::to_string(rb));
        std::vector<std::string> files;
        for (const auto& e : fs::directory_iterator(a)) files.push_back(e.path().filename().string());
        std::sort(files.begin(), files.end());
        std::size_t svg = 0, csv = 0;
        for (const auto& f : files) {
            svg += f.ends_with(".svg");
            csv += f.ends_with(".csv");
            c.expect(fs::exists(b / f) && slurp(a / f) == slurp(b / f), name + ": " + f + " differs between runs");
        }
        c.expect(svg == 0 || csv > 0, name + ": svg without csv");
        c.expect(std::find(files.begin(), files.end(), "manifest.json") != files.end(), name + ": manifest");
    }
    fs::remove_all(root);
}

}  // namespace

int main() {
    const std::vector<Criterion> criteria = {
        {1, "exact algebra suite", 10, ac1_exact_algebra},
        {2, "admissible-form suite", 5, ac2_admissible_forms},
        {3, "restriction admissibility", 10, ac3_restriction},
        {4, "Dirichlet oracle equivalence", 60, ac4_dirichlet_oracle},
        {5, "admissible point sets", 30, ac5_admissibility},
        {6, "nesting dichotomy", 10, ac6_nesting},
        {7, "sphere shrinking", 10, ac7_sphere_shrink},
        {8, "graph counts", 120, ac8_graph_counts},
        {9, "assembly suite", 60, ac9_assemblies},
        {10, "growth property", 1, ac10_growth},
        {11, "CLI determinism", 120, ac11_determinism},
    };
    int failed = 0;
    for (const auto& cr : criteria) {
        Check check;
        const auto t0 = std::chrono::steady_clock::now();
        try {
            cr.body(check);
        } catch (const std::exception& e) {
            check.expect(false, std::string("exception: ") + e.what());
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        const bool in_time = secs < cr.limit_seconds;
        const bool pass = check.failures == 0 && in_time;
        failed += !pass;
        std::printf("AC%-2d %-30s %s  (%.2f s, limit %.0f s)\n", cr.id, cr.name, pass ? "PASS" : "FAIL", secs, cr.limit_seconds);
        if (!in_time) std::printf("     over the time limit\n");
        for (const auto& n : check.notes) std::printf("     %s\n", n.c_str());
        if (check.failures > check.notes.size()) std::printf("     ... %zu failed checks in total\n", check.failures);
    }
    std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
    return failed ? 1 : 0;
}
