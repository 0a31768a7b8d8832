#include "confkern/conformal.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "confkern/errors.hpp"
#include "confkern/parallel.hpp"

namespace confkern {

ConformalSpec ConformalSpec::d1(double tau) {
    if (!(tau > 0.0)) throw DataError("D1 requires tau > 0");
    ConformalSpec s;
    s.kind = ConformalKind::D1;
    s.tau = tau;
    return s;
}

ConformalSpec ConformalSpec::d2(int m) {
    if (m < 1) throw DataError("D2 requires M >= 1");
    ConformalSpec s;
    s.kind = ConformalKind::D2;
    s.m = m;
    return s;
}

ConformalSpec ConformalSpec::d3(double kappa) {
    if (kappa < 0.0) throw DataError("D3 requires kappa >= 0");
    ConformalSpec s;
    s.kind = ConformalKind::D3;
    s.kappa = kappa;
    return s;
}

ConformalSpec ConformalSpec::dcos(int m, TauDenominator denom) {
    if (m < 1) throw DataError("Dcos requires M >= 1");
    ConformalSpec s;
    s.kind = ConformalKind::Dcos;
    s.m = m;
    s.denom = denom;
    return s;
}

ConformalSpec ConformalSpec::darc(int m, TauDenominator denom) {
    if (m < 1) throw DataError("Darc requires M >= 1");
    ConformalSpec s;
    s.kind = ConformalKind::Darc;
    s.m = m;
    s.denom = denom;
    return s;
}

namespace {

const char* denom_name(TauDenominator d) {
    switch (d) {
        case TauDenominator::TwoTauSq: return "2tau2";
        case TauDenominator::TwoTau: return "2tau";
        case TauDenominator::Tau: return "tau";
    }
    return "?";
}

double denom_value(TauDenominator d, double tau) {
    switch (d) {
        case TauDenominator::TwoTauSq: return 2.0 * tau * tau;
        case TauDenominator::TwoTau: return 2.0 * tau;
        case TauDenominator::Tau: return tau;
    }
    return 2.0 * tau * tau;
}

/// The distance each D2-family kind fits its taus with and evaluates its
/// exponent with. D2 uses the squared Euclidean distance; Dcos and Darc use
/// their distances unsquared.
double kind_distance(const ConformalSpec& spec, const SparseVector& a,
                     const SparseVector& b, bool relaxed) {
    switch (spec.kind) {
        case ConformalKind::D2:
            return sq_euclidean_dist(a, b);
        case ConformalKind::Dcos:
            return cosine_distance(a, b);
        case ConformalKind::Darc:
            return relaxed ? detail::geodesic_formula(a, b) : geodesic_distance(a, b);
        default:
            throw DataError("kind_distance: not a D2-family transform");
    }
}

bool needs_taus(ConformalKind k) {
    return k == ConformalKind::D2 || k == ConformalKind::Dcos || k == ConformalKind::Darc;
}

double d_factor(const FittedConformal& f, const SparseVector& x, bool relaxed) {
    const ConformalSpec& spec = f.spec;
    switch (spec.kind) {
        case ConformalKind::D1: {
            double sum = 0.0;
            const double denom = 2.0 * spec.tau * spec.tau;
            for (std::size_t s = 0; s < f.sv_points.size(); ++s) {
                sum += f.sv_alphas[s] *
                       std::exp(-sq_euclidean_dist(x, f.sv_points[s]) / denom);
            }
            return sum;
        }
        case ConformalKind::D3: {
            const double fx = f.base_model->decision(x);
            return std::exp(-spec.kappa * fx * fx);
        }
        case ConformalKind::D2:
        case ConformalKind::Dcos:
        case ConformalKind::Darc: {
            if (spec.kind == ConformalKind::Darc && !relaxed && !x.is_simplex()) {
                throw DataError("Darc factor requires a simplex-embedded point");
            }
            double sum = 0.0;
            for (std::size_t s = 0; s < f.sv_points.size(); ++s) {
                const double d = kind_distance(spec, x, f.sv_points[s], relaxed);
                sum += std::exp(-d / denom_value(spec.denom, f.sv_taus[s]));
            }
            return sum;
        }
    }
    throw DataError("eval_D: unknown transform kind");
}

}  // namespace

std::string ConformalSpec::describe() const {
    std::ostringstream os;
    switch (kind) {
        case ConformalKind::D1:
            os << "d1(tau=" << tau << ")";
            break;
        case ConformalKind::D2:
            os << "d2(m=" << m << ")";
            break;
        case ConformalKind::D3:
            os << "d3(kappa=" << kappa << ")";
            break;
        case ConformalKind::Dcos:
            os << "dcos(m=" << m << ", denom=" << denom_name(denom) << ")";
            break;
        case ConformalKind::Darc:
            os << "darc(m=" << m << ", denom=" << denom_name(denom) << ")";
            break;
    }
    return os.str();
}

std::vector<double> fit_taus(const ConformalSpec& spec, std::span<const SparseVector> svs) {
    if (!needs_taus(spec.kind)) {
        throw DataError("fit_taus: transform " + spec.describe() + " has no per-SV taus");
    }
    if (svs.size() < 2) throw DataError("fit_taus: need at least 2 support vectors");
    if (spec.kind == ConformalKind::Darc) {
        for (const SparseVector& s : svs) {
            if (!s.is_simplex()) throw DataError("fit_taus: Darc requires simplex SVs");
        }
    }
    const std::size_t nsv = svs.size();
    const std::size_t m_eff = std::min<std::size_t>(spec.m, nsv - 1);
    std::vector<double> taus(nsv, 0.0);
    std::vector<double> dists(nsv);
    for (std::size_t s = 0; s < nsv; ++s) {
        for (std::size_t j = 0; j < nsv; ++j) {
            dists[j] = j == s ? std::numeric_limits<double>::infinity()
                              : kind_distance(spec, svs[j], svs[s], false);
        }
        // Exact brute-force M' nearest; SV counts stay small enough that an
        // index is not worth it.
        std::vector<std::size_t> order(nsv);
        for (std::size_t j = 0; j < nsv; ++j) order[j] = j;
        std::partial_sort(order.begin(), order.begin() + m_eff, order.end(),
                          [&](std::size_t a, std::size_t b) {
                              return dists[a] != dists[b] ? dists[a] < dists[b] : a < b;
                          });
        double sum = 0.0;
        for (std::size_t r = 0; r < m_eff; ++r) sum += dists[order[r]];
        const double mean = sum / static_cast<double>(m_eff);
        // D2 averages squared Euclidean distances, which defines tau^2; the
        // stored tau is its square root so every kind's exponent reads
        // d/(2 tau^2) with d in that kind's own units.
        taus[s] = spec.kind == ConformalKind::D2 ? std::sqrt(mean) : mean;
    }
    // Duplicate SVs can yield tau = 0; fall back to the smallest positive tau.
    double min_pos = std::numeric_limits<double>::infinity();
    for (double t : taus) {
        if (t > 0.0) min_pos = std::min(min_pos, t);
    }
    if (!std::isfinite(min_pos)) min_pos = 1e-6;
    for (double& t : taus) {
        if (t <= 0.0) t = min_pos;
    }
    return taus;
}

FittedConformal fit_conformal(const ConformalSpec& spec,
                              std::shared_ptr<const TrainedModel> first_pass) {
    if (!first_pass) throw DataError("fit_conformal: null first-pass model");
    FittedConformal f;
    f.spec = spec;
    f.sv_points = first_pass->sv_points;
    if (needs_taus(spec.kind)) {
        f.sv_taus = fit_taus(spec, f.sv_points);
    }
    if (spec.kind == ConformalKind::D1) {
        f.sv_alphas = first_pass->alphas;
    }
    if (spec.kind == ConformalKind::D3) {
        f.base_model = std::move(first_pass);
    }
    return f;
}

double eval_D(const FittedConformal& f, const SparseVector& x) {
    return d_factor(f, x, /*relaxed=*/false);
}

namespace detail {
double eval_D_relaxed(const FittedConformal& f, const SparseVector& x) {
    return d_factor(f, x, /*relaxed=*/true);
}
}  // namespace detail

ConformalKernel::ConformalKernel(FittedConformal fitted, KernelSpec base)
    : fitted_(std::move(fitted)), base_(std::move(base)) {
    if (needs_taus(fitted_.spec.kind) &&
        fitted_.sv_taus.size() != fitted_.sv_points.size()) {
        throw DataError("conformal kernel: taus/SV length mismatch");
    }
}

void ConformalKernel::prime_cache(std::span<const SparseVector> training_points,
                                  int n_threads) {
    std::vector<double> d(training_points.size());
    parallel_for(training_points.size(), n_threads,
                 [&](std::size_t i) { d[i] = eval_D(fitted_, training_points[i]); });
    for (std::size_t i = 0; i < training_points.size(); ++i) {
        cache_[&training_points[i]] = d[i];
    }
}

double ConformalKernel::d_value(const SparseVector& x) const {
    if (auto it = cache_.find(&x); it != cache_.end()) return it->second;
    return eval_D(fitted_, x);
}

double ConformalKernel::eval(const SparseVector& a, const SparseVector& b) const {
    return d_value(a) * d_value(b) * eval_kernel(base_, a, b);
}

void ConformalKernel::eval_row(const SparseVector& x, std::span<const SparseVector> pts,
                               std::span<double> out) const {
    const double dx = d_value(x);
    for (std::size_t i = 0; i < pts.size(); ++i) {
        out[i] = d_value(pts[i]) * dx * eval_kernel(base_, pts[i], x);
    }
}

std::string ConformalKernel::describe() const {
    return fitted_.spec.describe() + " * " + base_.describe();
}

}  // namespace confkern
