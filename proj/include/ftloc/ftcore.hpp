#pragma once

#include <optional>
#include <string>
#include <vector>

#include "ftloc/site_term.hpp"

namespace ftloc {

struct Site {
    ConvexSet set;
    Gauge gauge;
    double weight = 1.0;
};

struct Instance {
    int dimension = 0;
    std::vector<Site> sites;
    std::optional<ConvexSet> constraint;

    // Throws EmptyInstance / DimensionMismatch / InvalidSet on malformed input.
    void validate() const;
    bool polyhedral() const;
    bool all_singletons() const;
};

// Dual functionals, stored in the set-problem convention: gamma_i°(-phi_i) <= 1.
struct Certificate {
    std::vector<Vec> phis;
    std::optional<Vec> phi0;
};

// Build a certificate from functionals phi_i norming p_i - x (the point-problem convention).
Certificate certificate_from_norming(const std::vector<Vec>& norming);

enum class Method { LP, Subgradient };
enum class SolveStatus { Optimal, NonattainmentSuspected };

struct Solution {
    Vec point;
    double value = 0.0;
    std::optional<Certificate> certificate;
    Method method = Method::LP;
    SolveStatus status = SolveStatus::Optimal;
    int iterations = 0;
    double residual = 0.0;
    Vec recession;  // set when status is NonattainmentSuspected
};

struct SolveOptions {
    bool attach_certificate = true;
    int max_iterations = 20000;
    Vec start;  // optional starting point for the nonpolyhedral route
};

// Precomputed objective f(x) = sum_i w_i dist_{gamma_i}(x, K_i) (constraint not included).
class Objective {
public:
    explicit Objective(const Instance& inst);
    double operator()(const Vec& x) const;
    double value_and_subgradient(const Vec& x, Vec& g) const;
    double lipschitz() const;
    int dim() const { return dim_; }
    const std::vector<SiteTerm>& terms() const { return terms_; }

private:
    int dim_;
    std::vector<SiteTerm> terms_;
};

double objective_eval(const Instance& inst, const Vec& x);

Solution solve(const Instance& inst, const SolveOptions& opts = {});

struct Condition {
    std::string name;
    bool ok = true;
    double residual = 0.0;
};

struct CertificateReport {
    bool accepted = true;
    std::vector<Condition> conditions;
    void add(std::string name, bool ok, double residual);
    std::vector<std::string> failures() const;
};

CertificateReport certify_points(const Instance& inst, const Vec& x, const Certificate& cert, double tol);
CertificateReport certify_sets(const Instance& inst, const Vec& x, const Certificate& cert, double tol);
CertificateReport certify_heron(const Instance& inst, const Vec& x, const Certificate& cert, double tol);
// Dispatches to certify_heron when the instance has a constraint, certify_sets otherwise.
CertificateReport certify(const Instance& inst, const Vec& x, const Certificate& cert, double tol);

std::optional<Certificate> find_certificate(const Instance& inst, const Vec& x, double tol = 1e-8);

const char* to_string(Method m);

}  // namespace ftloc
