#include "svlab/model.hpp"

#include <cmath>

namespace svlab {

ModelValues eval_model(ModelSpec model, double y, double xi) {
    ModelValues v{};
    if (model.kind == Model::Cubic) {
        v.phi = y * y * y / 3.0;
        v.dphi = y * y;
        v.d2phi = 2.0 * y;
        v.d3phi = 2.0;
    } else {
        v.phi = std::sin(y);
        v.dphi = std::cos(y);
        v.d2phi = -std::sin(y);
        v.d3phi = -std::cos(y);
    }
    v.f = y * xi + v.phi;
    return v;
}

bool has_wells(ModelSpec model, double xi) {
    return model.kind == Model::Cubic ? xi < 0.0 : std::abs(xi) < 1.0;
}

WellPair wells(ModelSpec model, double xi) {
    if (!std::isfinite(xi)) throw DomainError("wells: xi must be finite");
    WellPair w{};
    if (model.kind == Model::Cubic) {
        if (!(xi < 0.0))
            throw DomainError("wells: Cubic model requires xi < 0 (degenerate or elliptic otherwise)");
        double r = std::sqrt(-xi);
        w.y_plus = r;
        w.y_minus = -r;
        w.curvature_plus = 2.0 * r;
        w.curvature_minus = -2.0 * r;
    } else {
        if (!(std::abs(xi) < 1.0))
            throw DomainError("wells: Sine model requires |xi| < 1");
        // cos(y) = -xi on the principal branch; the sign rule sin(y_+) < 0
        // puts y_+ in ]-pi,0[ and y_- in ]0,pi[.
        double ym = std::acos(-xi); // in ]0,pi[
        w.y_minus = ym;
        w.y_plus = -ym;
        w.curvature_plus = std::sin(ym);  // -sin(y_+) = sin(ym) > 0
        w.curvature_minus = -std::sin(ym);
    }
    return w;
}

double poisson_bracket_modulus(ModelSpec model, double y) {
    return 2.0 * std::abs(eval_model(model, y, 0.0).d2phi);
}

std::complex<double> symbol(const Problem& problem, double y, double eta) {
    return {problem.xi + eval_model(problem.model, y, problem.xi).dphi, eta};
}

void validate_problem(const Problem& problem) {
    if (!(problem.h > 0.0 && problem.h <= 1.0))
        throw DomainError("problem: h must lie in ]0, 1]");
    if (!std::isfinite(problem.xi)) throw DomainError("problem: xi must be finite");
}

} // namespace svlab
