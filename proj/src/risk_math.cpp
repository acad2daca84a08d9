#include "riskgene/risk_math.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>
#include <sstream>

#include "riskgene/errors.hpp"

namespace riskgene {

namespace {

void require_probability(double value, const char* name, bool open_interval = true) {
    const bool ok = open_interval ? (value > 0.0 && value < 1.0)
                                  : (value >= 0.0 && value <= 1.0);
    if (!std::isfinite(value) || !ok) {
        std::ostringstream msg;
        msg << name << " = " << value << " is outside "
            << (open_interval ? "(0, 1)" : "[0, 1]");
        throw domain_error(msg.str());
    }
}

void require_positive(double value, const char* name) {
    if (!std::isfinite(value) || value <= 0.0) {
        std::ostringstream msg;
        msg << name << " = " << value << " must be positive";
        throw domain_error(msg.str());
    }
}

}  // namespace

void BinaryGeneSpec::validate() const {
    require_probability(carrier_freq, "carrier_freq");
    require_positive(relative_risk, "relative_risk");
}

void TriGeneSpec::validate() const {
    require_probability(allele_freq, "allele_freq");
    require_positive(or_het, "or_het");
}

double posterior_risk(double lr, double prior) {
    require_probability(prior, "prior");
    if (!std::isfinite(lr) || lr < 0.0) {
        throw domain_error("likelihood ratio must be finite and nonnegative");
    }
    return lr * prior / ((1.0 - prior) + lr * prior);
}

double posterior_risk_log(double ln_lr, double prior) {
    require_probability(prior, "prior");
    if (std::isnan(ln_lr)) {
        throw domain_error("log likelihood ratio must not be NaN");
    }
    const double z = ln_lr + std::log(prior / (1.0 - prior));
    if (z >= 0.0) {
        return 1.0 / (1.0 + std::exp(-z));
    }
    const double ez = std::exp(z);
    return ez / (1.0 + ez);
}

double combine_lr(std::span<const double> lrs) {
    double product = 1.0;
    for (double lr : lrs) {
        if (!std::isfinite(lr) || lr < 0.0) {
            throw domain_error("likelihood ratios must be finite and nonnegative");
        }
        product *= lr;
    }
    return product;
}

BinaryTable solve_binary_table(const BinaryGeneSpec& spec, double p, double n) {
    spec.validate();
    require_probability(p, "p");
    require_positive(n, "n");

    const double f = spec.carrier_freq;
    const double rate_neg = p / (1.0 - f + f * spec.relative_risk);  // P(D | test 0)
    const double rate_pos = spec.relative_risk * rate_neg;           // P(D | test 1)
    if (rate_pos >= 1.0) {
        std::ostringstream msg;
        msg << "implied disease risk in test-positives is " << rate_pos
            << " >= 1; cell b would be nonpositive";
        throw infeasible_error(msg.str());
    }
    if (rate_neg >= 1.0) {
        std::ostringstream msg;
        msg << "implied disease risk in test-negatives is " << rate_neg
            << " >= 1; cell d would be nonpositive";
        throw infeasible_error(msg.str());
    }

    BinaryTable t;
    t.n = n;
    t.p = p;
    t.a = f * n * rate_pos;
    t.b = f * n * (1.0 - rate_pos);
    t.c = (1.0 - f) * n * rate_neg;
    t.d = (1.0 - f) * n * (1.0 - rate_neg);
    return t;
}

BinaryLRs binary_lr(const BinaryTable& table) {
    if (table.b <= 0.0 || table.d <= 0.0 || table.a < 0.0 || table.c < 0.0) {
        throw degenerate_error("binary table has an empty cell; likelihood ratios undefined");
    }
    const double q = (1.0 - table.p) / table.p;
    return BinaryLRs{table.a / table.b * q, table.c / table.d * q};
}

HweFreqs hardy_weinberg(double f) {
    require_probability(f, "f", /*open_interval=*/false);
    return HweFreqs{f * f, 2.0 * f * (1.0 - f), (1.0 - f) * (1.0 - f)};
}

CubicSystem cubic_coefficients(double f, double p, double or_het, double n) {
    require_probability(f, "f");
    require_probability(p, "p");
    require_positive(or_het, "or_het");
    require_positive(n, "n");

    CubicSystem cs;
    cs.t1 = f * f * n;
    cs.t2 = 2.0 * f * (1.0 - f) * n;
    cs.t3 = (1.0 - f) * (1.0 - f) * n;
    cs.t4 = p * n;
    cs.t5 = or_het;

    const double t1 = cs.t1, t2 = cs.t2, t3 = cs.t3, t4 = cs.t4, t5 = cs.t5;
    cs.a3 = 1.0 - 2.0 * t5 + t5 * t5;
    cs.a2 = -t1 * t5 * t5 - 2.0 * t5 * t4 + t4 + t5 * t1 + t3 * t5 - t3 + 4.0 * t5 * t2
            - 2.0 * t2 + t4 * t5 * t5 - 2.0 * t2 * t5 * t5;
    cs.a1 = t3 * t2 - 2.0 * t1 * t5 * t2 + 2.0 * t4 * t5 * t2 + t1 * t5 * t5 * t2
            - 2.0 * t5 * t3 * t2 - t4 * t2 + t2 * t2 - t4 * t5 * t5 * t2
            - 3.0 * t5 * t2 * t2 + t2 * t2 * t5 * t5;
    cs.a0 = -t5 * t4 * t2 * t2 + t5 * t1 * t2 * t2 + t5 * t3 * t2 * t2 + t5 * t2 * t2 * t2;
    return cs;
}

namespace detail {

std::vector<double> cubic_real_roots(double a3, double a2, double a1, double a0) {
    // Normalize to x^3 + A x^2 + B x + C and use the trigonometric /
    // Cardano split on the discriminant (Numerical Recipes 5.6).
    const double A = a2 / a3;
    const double B = a1 / a3;
    const double C = a0 / a3;

    const double Q = (A * A - 3.0 * B) / 9.0;
    const double R = (2.0 * A * A * A - 9.0 * A * B + 27.0 * C) / 54.0;

    std::vector<double> roots;
    if (R * R < Q * Q * Q) {
        const double theta = std::acos(std::clamp(R / std::sqrt(Q * Q * Q), -1.0, 1.0));
        const double scale = -2.0 * std::sqrt(Q);
        roots = {scale * std::cos(theta / 3.0) - A / 3.0,
                 scale * std::cos((theta + 2.0 * std::numbers::pi) / 3.0) - A / 3.0,
                 scale * std::cos((theta - 2.0 * std::numbers::pi) / 3.0) - A / 3.0};
    } else {
        const double S = -std::copysign(std::cbrt(std::abs(R) + std::sqrt(R * R - Q * Q * Q)), R);
        const double T = (S == 0.0) ? 0.0 : Q / S;
        roots = {S + T - A / 3.0};
    }

    // A couple of Newton steps on the monic cubic tighten each root.
    for (double& x : roots) {
        for (int iter = 0; iter < 3; ++iter) {
            const double value = ((x + A) * x + B) * x + C;
            const double slope = (3.0 * x + 2.0 * A) * x + B;
            if (slope == 0.0) break;
            const double step = value / slope;
            x -= step;
            if (std::abs(step) <= 1e-15 * std::abs(x)) break;
        }
    }
    return roots;
}

}  // namespace detail

namespace {

struct GenotypeCells {
    double a, b, c, d, e, g;
};

GenotypeCells cells_from_d(const CubicSystem& cs, double d) {
    const double c = cs.t2 - d;
    const double a = cs.t1 * cs.t5 * c / (cs.t5 * c + d);
    const double e = cs.t3 * c / (c + cs.t5 * d);
    return GenotypeCells{a, cs.t1 - a, c, d, e, cs.t3 - e};
}

// Residual of the diseased-column sum A + C + E - t4 as a function of D.
// Positive at D -> 0+, negative at D -> t2-, so a root always exists for
// in-domain parameters.
double column_residual(const CubicSystem& cs, double d) {
    const GenotypeCells cells = cells_from_d(cs, d);
    return cells.a + cells.c + cells.e - cs.t4;
}

// Safeguarded Newton on column_residual with the bracket (lo, hi);
// falls back to bisection whenever the Newton step leaves the bracket.
double polish_root(const CubicSystem& cs, double start, double lo, double hi) {
    double x = std::clamp(start, lo + 1e-300, hi - 1e-300);
    double flo = column_residual(cs, lo);
    for (int iter = 0; iter < 200; ++iter) {
        const double fx = column_residual(cs, x);
        if (std::abs(fx) <= 1e-13 * cs.t4) return x;
        if ((fx > 0.0) == (flo > 0.0)) {
            lo = x;
            flo = fx;
        } else {
            hi = x;
        }
        // analytic derivative of the residual
        const double c = cs.t2 - x;
        const double w = cs.t5 * c + x;
        const double v = c + cs.t5 * x;
        const double da = cs.t1 * cs.t5 * (-w - c * (1.0 - cs.t5)) / (w * w);
        const double de = cs.t3 * (-v + c * (1.0 - cs.t5)) / (v * v);
        const double slope = da - 1.0 + de;
        double next = (slope != 0.0) ? x - fx / slope : std::midpoint(lo, hi);
        if (!(next > lo && next < hi)) next = std::midpoint(lo, hi);
        if (next == x) return x;
        x = next;
    }
    return x;
}

}  // namespace

GenotypeTable solve_genotype_table(const TriGeneSpec& spec, double p, double n) {
    spec.validate();
    const CubicSystem cs = cubic_coefficients(spec.allele_freq, p, spec.or_het, n);

    std::vector<double> roots;
    if (std::abs(cs.a3) < 1e-12 * std::abs(cs.a2)) {
        // OR ~ 1: leading coefficient vanishes, quadratic (or linear) solve.
        if (std::abs(cs.a2) < 1e-12 * std::abs(cs.a1)) {
            if (cs.a1 != 0.0) roots.push_back(-cs.a0 / cs.a1);
        } else {
            const double disc = cs.a1 * cs.a1 - 4.0 * cs.a2 * cs.a0;
            if (disc >= 0.0) {
                const double s = std::sqrt(disc);
                const double q = -0.5 * (cs.a1 + std::copysign(s, cs.a1));
                roots.push_back(q / cs.a2);
                if (q != 0.0) roots.push_back(cs.a0 / q);
            }
        }
    } else {
        roots = detail::cubic_real_roots(cs.a3, cs.a2, cs.a1, cs.a0);
    }

    std::vector<double> admissible;
    for (double r : roots) {
        if (r > 0.0 && r < cs.t2) admissible.push_back(r);
    }
    // collapse near-identical roots (double roots reported twice)
    std::sort(admissible.begin(), admissible.end());
    admissible.erase(std::unique(admissible.begin(), admissible.end(),
                                 [&](double x, double y) { return y - x < 1e-9 * cs.t2; }),
                     admissible.end());

    double d;
    if (admissible.size() == 1) {
        d = polish_root(cs, admissible.front(), 0.0, cs.t2);
    } else if (admissible.empty()) {
        // The closed form found nothing usable; the residual still changes
        // sign over (0, t2) for in-domain parameters, so bisect it.
        const double eps = 1e-12 * cs.t2;
        if (column_residual(cs, eps) > 0.0 && column_residual(cs, cs.t2 - eps) < 0.0) {
            d = polish_root(cs, 0.5 * cs.t2, 0.0, cs.t2);
        } else {
            throw infeasible_error("no admissible root of the genotype cubic in (0, t2)", roots);
        }
    } else {
        std::ostringstream msg;
        msg << admissible.size() << " admissible roots of the genotype cubic in (0, "
            << cs.t2 << ")";
        throw ambiguous_root_error(msg.str(), roots);
    }

    const GenotypeCells cells = cells_from_d(cs, d);
    GenotypeTable table;
    table.a = cells.a;
    table.b = cells.b;
    table.c = cells.c;
    table.d = cells.d;
    table.e = cells.e;
    table.g = cells.g;
    table.n = n;
    table.p = p;
    return table;
}

GenotypeLRs genotype_lrs(const GenotypeTable& table) {
    const double cells[6] = {table.a, table.b, table.c, table.d, table.e, table.g};
    for (double cell : cells) {
        if (cell <= 0.0) {
            throw degenerate_error("genotype table has an empty cell; likelihood ratios undefined");
        }
    }
    const double q = (1.0 - table.p) / table.p;
    return GenotypeLRs{table.a / table.b * q, table.c / table.d * q, table.e / table.g * q};
}

}  // namespace riskgene
