#include <CLI11.hpp>

#include <fstream>
#include <iostream>

#include "ftloc/io.hpp"
#include "ftloc/svg.hpp"

using namespace ftloc;

namespace {

constexpr int kOk = 0;
constexpr int kInputError = 1;
constexpr int kVerificationFailure = 2;

void emit(const json& j) { std::cout << j.dump(2) << "\n"; }

Vec to_vec(const std::vector<double>& v, int dim, const char* what) {
    if (static_cast<int>(v.size()) != dim)
        throw DimensionMismatch(std::string(what) + " has " + std::to_string(v.size()) + " coordinates, expected " +
                                std::to_string(dim));
    return Eigen::Map<const Vec>(v.data(), static_cast<Eigen::Index>(v.size()));
}

// A gauge file may hold a bare descriptor or a whole instance (its first gauge is used).
Gauge gauge_from_file(const std::string& path) {
    json j = load_json(path);
    if (j.is_object() && j.contains("sites")) return parse_instance(j).sites.at(0).gauge;
    return load_gauge(path);
}

FlatCase parse_flat_case(const std::string& t) {
    if (t == "floating") return FlatCase::Floating;
    if (t == "point-absorbed") return FlatCase::PointAbsorbed;
    return FlatCase::FlatAbsorbed;
}

const char* roman(int k) { return k == 1 ? "i" : k == 2 ? "ii" : k == 3 ? "iii" : ""; }

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Generalized Fermat-Torricelli location with gauges"};
    app.require_subcommand(1);

    std::string file, cert_file, test_name = "optimal", out_file;
    std::vector<double> point, xs, ys, box, levels;
    double alpha = 0.0, tol = 1e-6;
    int res = 20, lv = 4, raster = 400;
    size_t max_cells = 2000;
    bool overlay = false;

    auto* solve_cmd = app.add_subcommand("solve", "Minimize the distance sum and print the solution");
    solve_cmd->add_option("file", file, "instance JSON")->required()->check(CLI::ExistingFile);

    auto* certify_cmd = app.add_subcommand("certify", "Check or search an optimality certificate at a point");
    certify_cmd->add_option("file", file, "instance JSON")->required()->check(CLI::ExistingFile);
    certify_cmd->add_option("--point", point, "candidate point")->required();
    certify_cmd->add_option("--cert", cert_file, "certificate JSON {\"phis\":..., \"phi0\":...}")->check(CLI::ExistingFile);
    certify_cmd->add_option("--tol", tol, "verification tolerance");

    auto* dseg_cmd = app.add_subcommand("dseg", "d-segment between two points of the plane");
    dseg_cmd->add_option("file", file, "gauge or instance JSON")->required()->check(CLI::ExistingFile);
    dseg_cmd->add_option("--x", xs, "first endpoint")->required();
    dseg_cmd->add_option("--y", ys, "second endpoint")->required();

    auto* locus_cmd = app.add_subcommand("locus", "Solve and describe the whole planar minimizer set");
    locus_cmd->add_option("file", file, "instance JSON")->required()->check(CLI::ExistingFile);

    auto* sublevel_cmd = app.add_subcommand("sublevel", "Planar sublevel polygon of the objective");
    sublevel_cmd->add_option("file", file, "instance JSON")->required()->check(CLI::ExistingFile);
    sublevel_cmd->add_option("--alpha", alpha, "level")->required();

    auto* euclid_cmd = app.add_subcommand("euclid", "Euclidean optimality tests");
    euclid_cmd->add_option("file", file, "instance JSON")->required()->check(CLI::ExistingFile);
    euclid_cmd->add_option("--test", test_name, "test to run")
        ->check(CLI::IsMember({"optimal", "floating", "point-absorbed", "flat-absorbed", "flat-point"}));
    euclid_cmd->add_option("--point", point, "candidate point")->required();
    euclid_cmd->add_option("--tol", tol, "membership tolerance");

    auto* classify_cmd = app.add_subcommand("classify", "Uniqueness for one flat plus points (Euclidean)");
    classify_cmd->add_option("file", file, "instance JSON")->required()->check(CLI::ExistingFile);

    auto* oracle_cmd = app.add_subcommand("oracle", "Brute-force grid minimization");
    oracle_cmd->add_option("file", file, "instance JSON")->required()->check(CLI::ExistingFile);
    oracle_cmd->add_option("--box", box, "low corner followed by high corner");
    oracle_cmd->add_option("--res", res, "cells per axis on the first level")->check(CLI::Range(3, 100000));
    oracle_cmd->add_option("--levels", lv, "refinement levels")->check(CLI::Range(1, 60));
    oracle_cmd->add_option("--max-cells", max_cells, "cells refined per level");

    auto* plot_cmd = app.add_subcommand("plot", "SVG level curves of a planar instance");
    plot_cmd->add_option("file", file, "instance JSON")->required()->check(CLI::ExistingFile);
    plot_cmd->add_option("--levels", levels, "contour levels");
    plot_cmd->add_option("--out", out_file, "output file (standard output when omitted)");
    plot_cmd->add_option("--box", box, "view box: xmin ymin xmax ymax");
    plot_cmd->add_option("--raster", raster, "samples per axis")->check(CLI::Range(2, 4000));
    plot_cmd->add_flag("--locus", overlay, "overlay the minimizer set");

    auto* asym_cmd = app.add_subcommand("asymmetry", "Largest gamma(-x)/gamma(x) on the unit sphere");
    asym_cmd->add_option("file", file, "gauge or instance JSON")->required()->check(CLI::ExistingFile);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? kOk : kInputError;
    }

    try {
        if (*solve_cmd) {
            Instance inst = load_instance(file);
            emit(to_json(solve(inst)));
            return kOk;
        }
        if (*certify_cmd) {
            Instance inst = load_instance(file);
            Vec x = to_vec(point, inst.dimension, "--point");
            std::optional<Certificate> cert;
            if (!cert_file.empty()) {
                cert = parse_certificate(load_json(cert_file));
            } else {
                cert = find_certificate(inst, x);
                if (!cert) {
                    emit({{"accepted", false}, {"reason", "no certificate within tolerance"}});
                    std::cerr << "no certificate within tolerance\n";
                    return kVerificationFailure;
                }
            }
            CertificateReport rep = certify(inst, x, *cert, tol);
            json j = to_json(rep);
            j["certificate"] = to_json(*cert);
            emit(j);
            if (!rep.accepted) {
                for (const std::string& f : rep.failures()) std::cerr << "failed: " << f << "\n";
                return kVerificationFailure;
            }
            return kOk;
        }
        if (*dseg_cmd) {
            Gauge g = gauge_from_file(file);
            if (g.dim() != 2) throw PreconditionError("dseg is only available in the plane");
            Vec x = to_vec(xs, 2, "--x"), y = to_vec(ys, 2, "--y");
            emit(to_json(dseg_polygon(g, Point2(x(0), x(1)), Point2(y(0), y(1)))));
            return kOk;
        }
        if (*locus_cmd) {
            Instance inst = load_instance(file);
            if (inst.dimension != 2) throw PreconditionError("locus is only available in the plane");
            Solution s = solve(inst);
            if (!s.certificate) throw Error("solver returned no certificate");
            json j = to_json(s);
            j["locus"] = to_json(ft_locus_polygon(inst, s.point, *s.certificate));
            emit(j);
            return kOk;
        }
        if (*sublevel_cmd) {
            Instance inst = load_instance(file);
            emit(to_json(sublevel_polygon(inst, alpha)));
            return kOk;
        }
        if (*euclid_cmd) {
            EuclidInstance e = EuclidInstance::from_instance(load_instance(file));
            Vec x = to_vec(point, e.dimension, "--point");
            EuclidVerdict v;
            if (test_name == "optimal") {
                EuclidOptimality r = euclid_optimality(e, x, tol);
                v.optimal = r.optimal;
                v.v = r.u;
                v.residual = r.residual;
            } else if (test_name == "flat-point") {
                v = flat_point_absorbed_test(e, x);
            } else {
                v = flat_case_test(e, x, parse_flat_case(test_name));
            }
            emit(to_json(v));
            return v.optimal ? kOk : kVerificationFailure;
        }
        if (*classify_cmd) {
            EuclidInstance e = EuclidInstance::from_instance(load_instance(file));
            std::optional<ConvexSet> flat;
            std::vector<Vec> pts;
            for (const EuclidSite& s : e.sites) {
                if (s.weight != 1.0) throw PreconditionError("classify expects unit weights");
                if (s.set.kind() == ConvexSet::Kind::Flat) {
                    if (flat) throw PreconditionError("classify expects exactly one flat site");
                    flat = s.set;
                } else if (s.set.kind() == ConvexSet::Kind::Singleton) {
                    pts.push_back(s.set.anchor());
                } else {
                    throw PreconditionError("classify expects one flat and point sites");
                }
            }
            if (!flat) throw PreconditionError("classify expects exactly one flat site");
            Multiplicity m = multiplicity_classify(*flat, pts);
            json j = {{"verdict", to_string(m.verdict)}};
            if (m.verdict == Multiplicity::Verdict::Multiple) {
                j["case"] = roman(m.which);
                j["locus"] = {result_vector(m.locus_a), result_vector(m.locus_b)};
                j["degenerate"] = m.degenerate;
            }
            emit(j);
            return kOk;
        }
        if (*oracle_cmd) {
            Instance inst = load_instance(file);
            GridSpec spec = default_grid(inst, res, lv);
            if (!box.empty()) {
                if (static_cast<int>(box.size()) != 2 * inst.dimension)
                    throw DimensionMismatch("--box needs the low corner followed by the high corner");
                std::vector<double> lo(box.begin(), box.begin() + inst.dimension), hi(box.begin() + inst.dimension, box.end());
                spec.low = to_vec(lo, inst.dimension, "--box");
                spec.high = to_vec(hi, inst.dimension, "--box");
            }
            spec.max_cells = max_cells;
            emit(to_json(grid_minimize(inst, spec)));
            return kOk;
        }
        if (*plot_cmd) {
            Instance inst = load_instance(file);
            if (inst.dimension != 2) throw PreconditionError("plots require a planar instance");
            PlotSpec spec = default_plot(inst);
            if (!box.empty()) {
                if (box.size() != 4) throw DimensionMismatch("--box needs xmin ymin xmax ymax");
                spec.low = Point2(box[0], box[1]);
                spec.high = Point2(box[2], box[3]);
            }
            spec.raster = raster;
            spec.levels = levels;
            if (spec.levels.empty()) {
                // Evenly spaced levels above the optimum.
                double f0 = solve(inst).value;
                double span = objective_eval(inst, Vec(spec.high)) - f0;
                for (int k = 1; k <= 7; ++k) spec.levels.push_back(f0 + span * k / 8.0);
            }
            if (overlay) {
                Solution s = solve(inst);
                if (s.certificate) spec.overlay = ft_locus_polygon(inst, s.point, *s.certificate);
            }
            std::string svg = render_svg(inst, spec);
            if (out_file.empty()) {
                std::cout << svg;
            } else {
                std::ofstream out(out_file, std::ios::binary);
                if (!out) throw ftloc::ParseError("cannot write " + out_file);
                out << svg;
            }
            return kOk;
        }
        if (*asym_cmd) {
            Gauge g = gauge_from_file(file);
            AsymmetryWitness w = asymmetry_witness(g);
            emit({{"ratio", result_number(w.ratio)}, {"x0", result_vector(w.x0)}, {"symmetric", g.is_symmetric()}});
            return kOk;
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kInputError;
    }
    return kInputError;
}
