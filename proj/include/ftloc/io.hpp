#pragma once

#include <string>

#include <json.hpp>

#include "ftloc/euclid.hpp"
#include "ftloc/geometry2d.hpp"
#include "ftloc/oracle.hpp"

namespace ftloc {

using json = nlohmann::json;

// Strict parsing: unknown or missing fields and wrong types raise ParseError.
Gauge parse_gauge(const json& j);
ConvexSet parse_set(const json& j);
Instance parse_instance(const json& j);
Certificate parse_certificate(const json& j);
Vec parse_vector(const json& j);
Mat parse_rows(const json& j);

Instance load_instance(const std::string& path);
Gauge load_gauge(const std::string& path);
json load_json(const std::string& path);

// Instance serialization is lossless: parse_instance(to_json(i)) reproduces i exactly.
json to_json(const Gauge& g);
json to_json(const ConvexSet& k);
json to_json(const Instance& inst);

// Result objects; numbers are rounded to 12 significant digits.
double round12(double x);
// round12, stored as an integer when the rounded value is integral.
json result_number(double x);
// Entries below 1e-12 of the vector's scale are written as 0.
json result_vector(const Vec& v);
json to_json(const Certificate& c);
json to_json(const Solution& s);
json to_json(const Polygon& p);
json to_json(const EuclidVerdict& v);
json to_json(const OracleResult& o);
json to_json(const CertificateReport& r);

bool same_gauge(const Gauge& a, const Gauge& b);
bool same_set(const ConvexSet& a, const ConvexSet& b);
bool same_instance(const Instance& a, const Instance& b);

}  // namespace ftloc
