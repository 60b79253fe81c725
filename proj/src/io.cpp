#include "ftloc/io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <initializer_list>
#include <set>

namespace ftloc {

namespace {

void expect_object(const json& j, const char* what, std::initializer_list<const char*> required,
                   std::initializer_list<const char*> optional = {}) {
    if (!j.is_object()) throw ParseError(std::string(what) + ": expected an object");
    std::set<std::string> known;
    for (const char* k : required) {
        known.insert(k);
        if (!j.contains(k)) throw ParseError(std::string(what) + ": missing field \"" + k + "\"");
    }
    for (const char* k : optional) known.insert(k);
    for (auto it = j.begin(); it != j.end(); ++it)
        if (!known.count(it.key())) throw ParseError(std::string(what) + ": unknown field \"" + it.key() + "\"");
}

double number(const json& j, const char* what) {
    if (!j.is_number()) throw ParseError(std::string(what) + ": expected a number");
    return j.get<double>();
}

int positive_int(const json& j, const char* what) {
    if (!j.is_number_integer() || j.get<long long>() < 1) throw ParseError(std::string(what) + ": expected a positive integer");
    return j.get<int>();
}

std::string type_of(const json& j, const char* what) {
    if (!j.contains("type") || !j["type"].is_string()) throw ParseError(std::string(what) + ": missing string field \"type\"");
    return j["type"].get<std::string>();
}

json vector_json(const Vec& v) {
    json a = json::array();
    for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(v(i));
    return a;
}

json rows_json(const Mat& m) {
    json a = json::array();
    for (Eigen::Index i = 0; i < m.rows(); ++i) a.push_back(vector_json(m.row(i).transpose()));
    return a;
}

json result_rows(const Mat& m) {
    json a = json::array();
    for (Eigen::Index i = 0; i < m.rows(); ++i) a.push_back(result_vector(m.row(i).transpose()));
    return a;
}

}  // namespace

Vec parse_vector(const json& j) {
    if (!j.is_array() || j.empty()) throw ParseError("expected a non-empty array of numbers");
    Vec v(static_cast<Eigen::Index>(j.size()));
    for (size_t i = 0; i < j.size(); ++i) v(static_cast<Eigen::Index>(i)) = number(j[i], "vector entry");
    return v;
}

Mat parse_rows(const json& j) {
    if (!j.is_array() || j.empty()) throw ParseError("expected a non-empty array of rows");
    Vec first = parse_vector(j[0]);
    Mat m(static_cast<Eigen::Index>(j.size()), first.size());
    for (size_t i = 0; i < j.size(); ++i) {
        Vec r = parse_vector(j[i]);
        if (r.size() != first.size()) throw ParseError("rows have different lengths");
        m.row(static_cast<Eigen::Index>(i)) = r.transpose();
    }
    return m;
}

Gauge parse_gauge(const json& j) {
    std::string t = type_of(j, "gauge");
    if (t == "hpolytope") {
        expect_object(j, "gauge", {"type", "functionals"});
        return Gauge::h_polytope(parse_rows(j["functionals"]));
    }
    if (t == "vpolytope") {
        expect_object(j, "gauge", {"type", "vertices"});
        return Gauge::v_polytope(parse_rows(j["vertices"]));
    }
    if (t == "ellipsoid") {
        expect_object(j, "gauge", {"type", "matrix", "center"});
        return Gauge::ellipsoid(parse_rows(j["matrix"]), parse_vector(j["center"]));
    }
    if (t == "euclidean" || t == "l1" || t == "linf") {
        expect_object(j, "gauge", {"type", "dim"});
        int d = positive_int(j["dim"], "gauge dim");
        return t == "euclidean" ? Gauge::euclidean(d) : t == "l1" ? Gauge::l1(d) : Gauge::linf(d);
    }
    throw ParseError("unknown gauge type \"" + t + "\"");
}

ConvexSet parse_set(const json& j) {
    std::string t = type_of(j, "set");
    if (t == "point") {
        expect_object(j, "set", {"type", "p"});
        return ConvexSet::point(parse_vector(j["p"]));
    }
    if (t == "vpolytope") {
        expect_object(j, "set", {"type", "vertices"});
        return ConvexSet::polytope(parse_rows(j["vertices"]));
    }
    if (t == "segment") {
        expect_object(j, "set", {"type", "a", "b"});
        return ConvexSet::segment(parse_vector(j["a"]), parse_vector(j["b"]));
    }
    if (t == "flat") {
        expect_object(j, "set", {"type", "base", "directions"});
        return ConvexSet::flat(parse_vector(j["base"]), parse_rows(j["directions"]));
    }
    if (t == "ball") {
        expect_object(j, "set", {"type", "center", "radius"});
        return ConvexSet::ball(parse_vector(j["center"]), number(j["radius"], "ball radius"));
    }
    throw ParseError("unknown set type \"" + t + "\"");
}

Instance parse_instance(const json& j) {
    expect_object(j, "instance", {"dimension", "sites"}, {"constraint"});
    Instance inst;
    inst.dimension = positive_int(j["dimension"], "dimension");
    if (!j["sites"].is_array()) throw ParseError("instance: \"sites\" must be an array");
    for (const json& s : j["sites"]) {
        expect_object(s, "site", {"set", "gauge"}, {"weight"});
        Site site{parse_set(s["set"]), parse_gauge(s["gauge"]), 1.0};
        if (s.contains("weight")) site.weight = number(s["weight"], "site weight");
        inst.sites.push_back(std::move(site));
    }
    if (j.contains("constraint") && !j["constraint"].is_null()) inst.constraint = parse_set(j["constraint"]);
    inst.validate();
    return inst;
}

Certificate parse_certificate(const json& j) {
    expect_object(j, "certificate", {"phis"}, {"phi0"});
    Certificate c;
    if (!j["phis"].is_array()) throw ParseError("certificate: \"phis\" must be an array");
    for (const json& p : j["phis"]) c.phis.push_back(parse_vector(p));
    if (j.contains("phi0") && !j["phi0"].is_null()) c.phi0 = parse_vector(j["phi0"]);
    return c;
}

json load_json(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open " + path);
    try {
        return json::parse(in);
    } catch (const json::exception& e) {
        throw ParseError(path + ": " + e.what());
    }
}

Instance load_instance(const std::string& path) { return parse_instance(load_json(path)); }

Gauge load_gauge(const std::string& path) {
    json j = load_json(path);
    // Accept either a bare gauge descriptor or {"gauge": descriptor}.
    if (j.is_object() && j.contains("gauge") && !j.contains("type")) {
        expect_object(j, "gauge file", {"gauge"});
        return parse_gauge(j["gauge"]);
    }
    return parse_gauge(j);
}

json to_json(const Gauge& g) {
    switch (g.kind()) {
        case Gauge::Kind::HPolytope: return {{"type", "hpolytope"}, {"functionals", rows_json(g.given())}};
        case Gauge::Kind::VPolytope: return {{"type", "vpolytope"}, {"vertices", rows_json(g.given())}};
        case Gauge::Kind::Ellipsoid:
            return {{"type", "ellipsoid"}, {"matrix", rows_json(g.matrix())}, {"center", vector_json(g.center())}};
    }
    return {};
}

json to_json(const ConvexSet& k) {
    switch (k.kind()) {
        case ConvexSet::Kind::Singleton: return {{"type", "point"}, {"p", vector_json(k.points().row(0).transpose())}};
        case ConvexSet::Kind::Polytope: return {{"type", "vpolytope"}, {"vertices", rows_json(k.points())}};
        case ConvexSet::Kind::Flat:
            return {{"type", "flat"}, {"base", vector_json(k.base())}, {"directions", rows_json(k.directions())}};
        case ConvexSet::Kind::Ball: return {{"type", "ball"}, {"center", vector_json(k.center())}, {"radius", k.radius()}};
    }
    return {};
}

json to_json(const Instance& inst) {
    json j = {{"dimension", inst.dimension}, {"sites", json::array()}};
    for (const Site& s : inst.sites)
        j["sites"].push_back({{"set", to_json(s.set)}, {"gauge", to_json(s.gauge)}, {"weight", s.weight}});
    if (inst.constraint) j["constraint"] = to_json(*inst.constraint);
    return j;
}

double round12(double x) {
    if (!std::isfinite(x)) return x;
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.12g", x);
    double r = std::strtod(buf, nullptr);
    return r == 0.0 ? 0.0 : r;
}

json result_number(double x) {
    double r = round12(x);
    if (std::isfinite(r) && r == std::trunc(r) && std::abs(r) < 1e15) return static_cast<long long>(r);
    return r;
}

json result_vector(const Vec& v) {
    const double scale = v.size() ? std::max(1.0, v.lpNorm<Eigen::Infinity>()) : 1.0;
    json a = json::array();
    for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(result_number(std::abs(v(i)) <= 1e-12 * scale ? 0.0 : v(i)));
    return a;
}

json to_json(const Certificate& c) {
    json j = {{"phis", json::array()}, {"phi0", nullptr}};
    for (const Vec& p : c.phis) j["phis"].push_back(result_vector(p));
    if (c.phi0) j["phi0"] = result_vector(*c.phi0);
    return j;
}

json to_json(const Solution& s) {
    json j = {{"point", result_vector(s.point)},
              {"value", result_number(s.value)},
              {"certificate", s.certificate ? to_json(*s.certificate) : json(nullptr)},
              {"method", s.method == Method::LP ? "lp" : "subgradient"},
              {"residual", result_number(s.residual)}};
    if (s.status == SolveStatus::NonattainmentSuspected) {
        j["status"] = "nonattainment-suspected";
        j["recession"] = result_vector(s.recession);
    }
    return j;
}

json to_json(const Polygon& p) {
    Mat V(static_cast<Eigen::Index>(p.vertices.size()), 2);
    for (size_t i = 0; i < p.vertices.size(); ++i) V.row(static_cast<Eigen::Index>(i)) = p.vertices[i].transpose();
    Mat R(static_cast<Eigen::Index>(p.rays.size()), 2);
    for (size_t i = 0; i < p.rays.size(); ++i) R.row(static_cast<Eigen::Index>(i)) = p.rays[i].transpose();
    return {{"rank", to_string(p.rank)}, {"vertices", result_rows(V)}, {"rays", result_rows(R)}};
}

json to_json(const EuclidVerdict& v) {
    return {{"optimal", v.optimal},
            {"v", result_vector(v.v)},
            {"alpha", result_number(v.alpha)},
            {"bound", result_number(v.bound)},
            {"residual", result_number(v.residual)}};
}

json to_json(const OracleResult& o) {
    json cells = json::array();
    for (const Vec& c : o.argmin_cells) cells.push_back(result_vector(c));
    return {{"value", result_number(o.value)}, {"cells", cells}, {"cell_size", result_number(o.cell_size)}};
}

json to_json(const CertificateReport& r) {
    json conds = json::array();
    for (const Condition& c : r.conditions)
        conds.push_back({{"name", c.name}, {"ok", c.ok}, {"residual", result_number(c.residual)}});
    return {{"accepted", r.accepted}, {"conditions", conds}};
}

bool same_gauge(const Gauge& a, const Gauge& b) {
    if (a.kind() != b.kind() || a.dim() != b.dim()) return false;
    if (a.polytopal()) return a.given() == b.given();
    return a.matrix() == b.matrix() && a.center() == b.center();
}

bool same_set(const ConvexSet& a, const ConvexSet& b) {
    if (a.kind() != b.kind() || a.dim() != b.dim()) return false;
    switch (a.kind()) {
        case ConvexSet::Kind::Singleton:
        case ConvexSet::Kind::Polytope: return a.points() == b.points();
        case ConvexSet::Kind::Flat: return a.base() == b.base() && a.directions() == b.directions();
        case ConvexSet::Kind::Ball: return a.center() == b.center() && a.radius() == b.radius();
    }
    return false;
}

bool same_instance(const Instance& a, const Instance& b) {
    if (a.dimension != b.dimension || a.sites.size() != b.sites.size()) return false;
    for (size_t i = 0; i < a.sites.size(); ++i)
        if (!same_set(a.sites[i].set, b.sites[i].set) || !same_gauge(a.sites[i].gauge, b.sites[i].gauge) ||
            a.sites[i].weight != b.sites[i].weight)
            return false;
    if (a.constraint.has_value() != b.constraint.has_value()) return false;
    return !a.constraint || same_set(*a.constraint, *b.constraint);
}

}  // namespace ftloc
