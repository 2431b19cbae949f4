#include "ctcr/factorization.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include <nlohmann/json.hpp>

namespace ctcr {

Gains::Gains(double p_, double d_) : p(p_), d(d_) {
    if (!(p > 0.0) || !(d > 0.0))
        throw InputError("control gains must be strictly positive (got P=" + std::to_string(p_) +
                         ", D=" + std::to_string(d_) + ")");
}

int QuasiPolynomial::max_a() const {
    int m = 0;
    for (const auto& t : terms) m = std::max(m, t.a);
    return m;
}

int QuasiPolynomial::max_b() const {
    int m = 0;
    for (const auto& t : terms) m = std::max(m, t.b);
    return m;
}

QuasiPolynomial make_factor(std::complex<double> lambda, const Gains& gains, bool centroid) {
    const double p = gains.p, d = gains.d;
    QuasiPolynomial qp;
    qp.lambda = lambda;
    qp.p = p;
    qp.d = d;
    if (lambda.imag() == 0.0) {
        // s^2 + D s + P - lambda (D s e^{-tau2 s} + P e^{-tau1 s})
        const double l = lambda.real();
        qp.order = 2;
        qp.kind = centroid ? FactorKind::Centroid : FactorKind::RealDisagreement;
        qp.terms = {
            {0, 0, {p, d, 1.0}},
            {1, 0, {-l * p}},
            {0, 1, {0.0, -l * d}},
        };
    } else {
        // (s^2+Ds+P)^2 - 2 Re(lambda) (s^2+Ds+P) u + |lambda|^2 u^2,
        // u = D s e^{-tau2 s} + P e^{-tau1 s}
        const double re2 = 2.0 * lambda.real();
        const double mag2 = std::norm(lambda);
        qp.order = 4;
        qp.kind = FactorKind::ComplexDisagreement;
        qp.terms = {
            {0, 0, {p * p, 2.0 * d * p, d * d + 2.0 * p, 2.0 * d, 1.0}},
            {1, 0, {-re2 * p * p, -re2 * p * d, -re2 * p}},
            {0, 1, {0.0, -re2 * d * p, -re2 * d * d, -re2 * d}},
            {1, 1, {0.0, 2.0 * d * p * mag2}},
            {2, 0, {mag2 * p * p}},
            {0, 2, {0.0, 0.0, mag2 * d * d}},
        };
    }
    return qp;
}

std::vector<QuasiPolynomial> build_factors(const WeightedAdjacency& adjacency, const Gains& gains) {
    if (!adjacency.defective_clusters.empty()) {
        const auto& c = adjacency.defective_clusters.front();
        std::ostringstream msg;
        msg << "adjacency matrix is defective: eigenvalue cluster near (" << c.lambda.real();
        if (c.lambda.imag() != 0.0) msg << (c.lambda.imag() > 0 ? "+" : "") << c.lambda.imag() << "i";
        msg << ") has algebraic multiplicity " << c.algebraic << " but eigenspace dimension "
            << c.geometric << "; the factorization requires a diagonalizable adjacency";
        throw InputError(msg.str());
    }
    std::vector<QuasiPolynomial> factors;
    factors.reserve(adjacency.spectrum.size());
    for (const auto& e : adjacency.spectrum) {
        if (e.tag == EigTag::Real) {
            bool centroid = std::abs(e.value.real() - 1.0) <= kEigClusterTol;
            // Snap so the structural q(0) = P - P cancellation is exact.
            double l = centroid ? 1.0 : e.value.real();
            factors.push_back(make_factor({l, 0.0}, gains, centroid));
        } else {
            factors.push_back(make_factor(e.value, gains));
        }
    }
    return factors;
}

Complex evaluate(const QuasiPolynomial& qp, Complex s, double tau1, double tau2) {
    Complex sum = 0.0;
    for (const auto& t : qp.terms) {
        double delay = t.a * tau1 + t.b * tau2;
        Complex e = (delay == 0.0) ? Complex(1.0, 0.0) : std::exp(-delay * s);
        sum += polyval(t.coeffs, s) * e;
    }
    return sum;
}

Complex evaluate_ds(const QuasiPolynomial& qp, Complex s, double tau1, double tau2) {
    Complex sum = 0.0;
    for (const auto& t : qp.terms) {
        double delay = t.a * tau1 + t.b * tau2;
        Complex e = (delay == 0.0) ? Complex(1.0, 0.0) : std::exp(-delay * s);
        sum += (polyval(polyder(t.coeffs), s) - delay * polyval(t.coeffs, s)) * e;
    }
    return sum;
}

Complex evaluate_ds2(const QuasiPolynomial& qp, Complex s, double tau1, double tau2) {
    Complex sum = 0.0;
    for (const auto& t : qp.terms) {
        double delay = t.a * tau1 + t.b * tau2;
        Complex e = (delay == 0.0) ? Complex(1.0, 0.0) : std::exp(-delay * s);
        RealPoly d1 = polyder(t.coeffs);
        sum += (polyval(polyder(d1), s) - 2.0 * delay * polyval(d1, s) +
                delay * delay * polyval(t.coeffs, s)) * e;
    }
    return sum;
}

Complex evaluate_dtau(const QuasiPolynomial& qp, Complex s, double tau1, double tau2, int delay_index) {
    Complex sum = 0.0;
    for (const auto& t : qp.terms) {
        int mult = (delay_index == 1) ? t.a : t.b;
        if (mult == 0) continue;
        double delay = t.a * tau1 + t.b * tau2;
        sum += -static_cast<double>(mult) * s * polyval(t.coeffs, s) * std::exp(-delay * s);
    }
    return sum;
}

double term_scale(const QuasiPolynomial& qp, Complex s) {
    double sc = 0.0;
    for (const auto& t : qp.terms) sc += std::abs(polyval(t.coeffs, s));
    return sc;
}

double coeff_scale(const QuasiPolynomial& qp, Complex s) {
    double mag = std::abs(s);
    double sc = 0.0;
    for (const auto& t : qp.terms) {
        double pw = 1.0;
        for (double c : t.coeffs) {
            sc += std::abs(c) * pw;
            pw *= mag;
        }
    }
    return sc;
}

RealPoly delay_free_polynomial(const QuasiPolynomial& qp) {
    RealPoly sum(static_cast<size_t>(qp.order) + 1, 0.0);
    for (const auto& t : qp.terms)
        for (size_t i = 0; i < t.coeffs.size(); ++i) sum[i] += t.coeffs[i];
    return sum;
}

DelayFreeCount delay_free_unstable_count(const QuasiPolynomial& qp) {
    DelayFreeCount out;
    for (const Complex& r : poly_roots(delay_free_polynomial(qp))) {
        if (r.real() > kMarginTol)
            ++out.unstable;
        else if (std::abs(r.real()) <= kMarginTol)
            ++out.marginal;
    }
    return out;
}

namespace {

nlohmann::json factor_json(const QuasiPolynomial& qp) {
    nlohmann::json j;
    j["lambda"] = {qp.lambda.real(), qp.lambda.imag()};
    switch (qp.kind) {
        case FactorKind::Centroid: j["kind"] = "centroid"; break;
        case FactorKind::RealDisagreement: j["kind"] = "real-disagreement"; break;
        case FactorKind::ComplexDisagreement: j["kind"] = "complex-disagreement"; break;
    }
    j["order"] = qp.order;
    j["gains"] = {qp.p, qp.d};
    j["terms"] = nlohmann::json::array();
    for (const auto& t : qp.terms)
        j["terms"].push_back({{"a", t.a}, {"b", t.b}, {"coeffs", t.coeffs}});
    return j;
}

QuasiPolynomial factor_from(const nlohmann::json& j) {
    QuasiPolynomial qp;
    qp.lambda = {j.at("lambda")[0].get<double>(), j.at("lambda")[1].get<double>()};
    std::string kind = j.at("kind").get<std::string>();
    if (kind == "centroid")
        qp.kind = FactorKind::Centroid;
    else if (kind == "real-disagreement")
        qp.kind = FactorKind::RealDisagreement;
    else if (kind == "complex-disagreement")
        qp.kind = FactorKind::ComplexDisagreement;
    else
        throw InputError("unknown factor kind: " + kind);
    qp.order = j.at("order").get<int>();
    if (j.contains("gains")) {
        qp.p = j["gains"][0].get<double>();
        qp.d = j["gains"][1].get<double>();
    }
    for (const auto& t : j.at("terms"))
        qp.terms.push_back({t.at("a").get<int>(), t.at("b").get<int>(), t.at("coeffs").get<RealPoly>()});
    return qp;
}

} // namespace

std::string to_json(const QuasiPolynomial& qp) { return factor_json(qp).dump(2); }

std::string to_json(const std::vector<QuasiPolynomial>& factors) {
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& f : factors) arr.push_back(factor_json(f));
    return arr.dump(2);
}

QuasiPolynomial factor_from_json(const std::string& json_text) {
    return factor_from(nlohmann::json::parse(json_text));
}

} // namespace ctcr
